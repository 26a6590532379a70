//! Point-in-mesh classification by ray-crossing parity.
//!
//! A single parity ray is exact on watertight meshes away from the surface;
//! whenever a hit lands within 1e-9 of a triangle edge or vertex the query
//! re-casts in a fresh direction. For broken meshes a small majority vote
//! over independent rays gives a usable sign estimate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::{bvh::MeshBvh, mesh::TriangleMesh, Point3, Vector3};

/// True iff `p` is interior to the watertight `mesh`.
pub fn point_inside(mesh: &TriangleMesh, bvh: &MeshBvh, p: &Point3) -> Result<bool> {
    if !mesh.is_watertight() {
        return Err(Error::NotWatertight("point containment needs a closed mesh"));
    }
    Ok(parity_inside(bvh, p, 0))
}

/// Validated once, then query freely; cheap to clone.
#[derive(Clone)]
pub struct InsideTester<'a> {
    bvh: &'a MeshBvh,
    seed: u64,
}

impl<'a> InsideTester<'a> {
    pub fn new(mesh: &TriangleMesh, bvh: &'a MeshBvh, seed: u64) -> Result<Self> {
        if !mesh.is_watertight() {
            return Err(Error::NotWatertight("point containment needs a closed mesh"));
        }
        Ok(Self { bvh, seed })
    }

    pub fn contains(&self, p: &Point3) -> bool {
        parity_inside(self.bvh, p, self.seed)
    }
}

/// Sign estimator that works on arbitrary (possibly broken) meshes:
/// majority over `votes` independent parity rays.
pub fn vote_inside(bvh: &MeshBvh, p: &Point3, seed: u64, votes: usize) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed(p, seed));
    let mut inside = 0usize;
    let mut valid = 0usize;
    let mut attempts = 0usize;
    while valid < votes && attempts < votes * 4 {
        attempts += 1;
        let dir = random_unit(&mut rng);
        match clean_parity(bvh, p, &dir) {
            Some(is_inside) => {
                valid += 1;
                if is_inside {
                    inside += 1;
                }
            }
            None => continue,
        }
    }
    if valid == 0 {
        // Every ray grazed an edge; fall back to raw parity.
        let dir = random_unit(&mut rng);
        return bvh.ray_hits(p, &dir).len() % 2 == 1;
    }
    inside * 2 > valid
}

fn parity_inside(bvh: &MeshBvh, p: &Point3, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed(p, seed));
    for _ in 0..16 {
        let dir = random_unit(&mut rng);
        if let Some(inside) = clean_parity(bvh, p, &dir) {
            return inside;
        }
    }
    // 16 grazing rays in a row: count the last cast including edge hits.
    let dir = random_unit(&mut rng);
    bvh.ray_hits(p, &dir).len() % 2 == 1
}

/// Parity of surface crossings, or `None` if any hit grazed an edge.
fn clean_parity(bvh: &MeshBvh, p: &Point3, dir: &Vector3) -> Option<bool> {
    let hits = bvh.ray_hits(p, dir);
    if hits.iter().any(|h| h.near_edge) {
        return None;
    }
    Some(hits.len() % 2 == 1)
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vector3 {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    Vector3::new(r * theta.cos(), r * theta.sin(), z)
}

/// Deterministic per-point seed so query results do not depend on call order.
fn point_seed(p: &Point3, seed: u64) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for c in [p.x, p.y, p.z] {
        h = mix64(h ^ c.to_bits());
    }
    h
}

fn mix64(mut x: u64) -> u64 {
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes;

    #[test]
    fn cube_center_inside_outside() {
        let mesh = shapes::box_at(Point3::origin(), Vector3::new(1.0, 1.0, 1.0));
        let bvh = MeshBvh::build(&mesh);
        assert!(point_inside(&mesh, &bvh, &Point3::new(0.5, 0.5, 0.5)).unwrap());
        assert!(!point_inside(&mesh, &bvh, &Point3::new(2.0, 0.5, 0.5)).unwrap());
    }

    #[test]
    fn open_mesh_rejected() {
        let mesh = TriangleMesh::new(
            vec![
                Point3::origin(),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let bvh = MeshBvh::build(&mesh);
        assert!(matches!(
            point_inside(&mesh, &bvh, &Point3::origin()),
            Err(Error::NotWatertight(_))
        ));
    }

    #[test]
    fn axis_aligned_query_through_cube_edges() {
        // Queries on the lattice of a cube force edge-grazing rays at times;
        // the re-cast must keep them exact.
        let mesh = shapes::box_at(Point3::origin(), Vector3::new(1.0, 1.0, 1.0));
        let bvh = MeshBvh::build(&mesh);
        for x in [-0.5, 0.25, 0.5, 0.75, 1.5] {
            for y in [0.25, 0.5] {
                let p = Point3::new(x, y, 0.5);
                let expected = (0.0..1.0).contains(&x);
                assert_eq!(point_inside(&mesh, &bvh, &p).unwrap(), expected, "p = {p}");
            }
        }
    }

    #[test]
    fn vote_matches_parity_on_closed_mesh() {
        let mesh = shapes::icosphere(1.0, 2);
        let bvh = MeshBvh::build(&mesh);
        for (p, expected) in [
            (Point3::new(0.2, 0.1, -0.3), true),
            (Point3::new(1.2, 0.0, 0.0), false),
        ] {
            assert_eq!(vote_inside(&bvh, &p, 9, 5), expected);
        }
    }
}
