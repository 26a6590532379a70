//! Mesh and sphere primitives plus the exact-geometry queries the rest of
//! the pipeline is built on.

pub mod bvh;
pub mod io;
pub mod medial;
pub mod mesh;
pub mod sample;
pub mod shapes;
pub mod sphere;

pub use bvh::MeshBvh;
pub use medial::shrink_ball;
pub use mesh::{validate_mesh, MeshReport, TriangleMesh};
pub use sample::{sample_surface, SurfaceSample};
pub use sphere::{minimal_enclosing_sphere, Sphere, SphereSet};

/// Cartesian point in meters.
pub type Point3 = nalgebra::Point3<f64>;
/// Displacement or direction; unitless when used as a direction.
pub type Vector3 = nalgebra::Vector3<f64>;

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point3,
    pub max: Point3,
}

impl Aabb {
    /// Inverted box; growing it by any point yields that point's box.
    pub fn empty() -> Self {
        Self {
            min: Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY),
            max: Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    pub fn new(min: Point3, max: Point3) -> Self {
        Self { min, max }
    }

    pub fn from_points<'a, I: IntoIterator<Item = &'a Point3>>(points: I) -> Self {
        let mut aabb = Self::empty();
        for p in points {
            aabb.grow(p);
        }
        aabb
    }

    pub fn grow(&mut self, p: &Point3) {
        self.min = self.min.inf(p);
        self.max = self.max.sup(p);
    }

    pub fn merge(&self, other: &Aabb) -> Aabb {
        Aabb {
            min: self.min.inf(&other.min),
            max: self.max.sup(&other.max),
        }
    }

    pub fn center(&self) -> Point3 {
        nalgebra::center(&self.min, &self.max)
    }

    pub fn extents(&self) -> Vector3 {
        self.max - self.min
    }

    pub fn diagonal(&self) -> f64 {
        self.extents().norm()
    }

    pub fn is_empty(&self) -> bool {
        self.min.x > self.max.x || self.min.y > self.max.y || self.min.z > self.max.z
    }

    pub fn contains(&self, p: &Point3) -> bool {
        (0..3).all(|i| p[i] >= self.min[i] && p[i] <= self.max[i])
    }

    pub fn inflated(&self, pad: f64) -> Aabb {
        let d = Vector3::repeat(pad);
        Aabb {
            min: self.min - d,
            max: self.max + d,
        }
    }

    /// Squared distance from a point to the box; zero inside.
    pub fn distance_sq(&self, p: &Point3) -> f64 {
        let mut d2 = 0.0;
        for i in 0..3 {
            let v = p[i];
            if v < self.min[i] {
                d2 += (self.min[i] - v) * (self.min[i] - v);
            } else if v > self.max[i] {
                d2 += (v - self.max[i]) * (v - self.max[i]);
            }
        }
        d2
    }

    pub fn distance(&self, p: &Point3) -> f64 {
        self.distance_sq(p).sqrt()
    }
}
