//! Maximal inscribed ball estimation by the shrinking-ball iteration.

use crate::error::{Error, Result};

use super::{bvh::MeshBvh, sample::SurfaceSample, sphere::Sphere};

const RADIUS_TOLERANCE: f64 = 1e-6;
const MAX_ITERATIONS: usize = 64;

/// Shrinks a ball tangent to the surface at `sample.point` until its
/// interior is empty: each step moves the center to keep tangency while the
/// nearest surface point pins the new radius. The fixed point is a medial
/// ball of the solid.
pub fn shrink_ball(sample: &SurfaceSample, bvh: &MeshBvh, init_radius: f64) -> Result<Sphere> {
    let p = sample.point;
    let n = sample.normal;
    if !(init_radius > 0.0) || n.norm_squared() < 0.5 {
        return Err(Error::NoConvergence);
    }
    let mut r = init_radius;

    for _ in 0..MAX_ITERATIONS {
        let c = p - n * r;
        let (d, q, _) = bvh.closest_point(&c);
        if d >= r - RADIUS_TOLERANCE {
            // Interior clear of triangles within tolerance: maximal ball.
            return Ok(Sphere::new(c, r));
        }
        // New ball tangent at p passing through the blocking point q.
        let pq = p - q;
        let denom = 2.0 * n.dot(&pq);
        if denom <= 1e-12 {
            return Err(Error::NoConvergence);
        }
        let r_new = pq.norm_squared() / denom;
        if !r_new.is_finite() || r_new <= 0.0 {
            return Err(Error::NoConvergence);
        }
        r = r_new;
    }
    Err(Error::NoConvergence)
}
