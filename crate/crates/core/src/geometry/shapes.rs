//! Watertight generators for primitive solids.
//!
//! Used to tessellate URDF primitives before sphere fitting and as test
//! geometry throughout the crate. All outputs are closed, consistently
//! outward-oriented triangle meshes centered at the origin (cylinder and
//! capsule axes along +Z).

use std::collections::HashMap;

use super::{mesh::TriangleMesh, Point3, Vector3};

pub fn box_mesh(size: Vector3) -> TriangleMesh {
    let (hx, hy, hz) = (size.x / 2.0, size.y / 2.0, size.z / 2.0);
    let vertices = vec![
        Point3::new(-hx, -hy, -hz),
        Point3::new(hx, -hy, -hz),
        Point3::new(hx, hy, -hz),
        Point3::new(-hx, hy, -hz),
        Point3::new(-hx, -hy, hz),
        Point3::new(hx, -hy, hz),
        Point3::new(hx, hy, hz),
        Point3::new(-hx, hy, hz),
    ];
    let faces = vec![
        [0, 2, 1],
        [0, 3, 2], // bottom
        [4, 5, 6],
        [4, 6, 7], // top
        [0, 1, 5],
        [0, 5, 4], // -y
        [2, 3, 7],
        [2, 7, 6], // +y
        [0, 4, 7],
        [0, 7, 3], // -x
        [1, 2, 6],
        [1, 6, 5], // +x
    ];
    TriangleMesh::new(vertices, faces).expect("box is valid")
}

/// Unit-style axis-aligned box `[min, min+size]`.
pub fn box_at(min: Point3, size: Vector3) -> TriangleMesh {
    box_mesh(size).translated(min.coords + size / 2.0)
}

/// Icosahedron subdivided `subdivisions` times, projected to `radius`.
/// Face count is `20 * 4^subdivisions`.
pub fn icosphere(radius: f64, subdivisions: usize) -> TriangleMesh {
    let t = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let raw = [
        (-1.0, t, 0.0),
        (1.0, t, 0.0),
        (-1.0, -t, 0.0),
        (1.0, -t, 0.0),
        (0.0, -1.0, t),
        (0.0, 1.0, t),
        (0.0, -1.0, -t),
        (0.0, 1.0, -t),
        (t, 0.0, -1.0),
        (t, 0.0, 1.0),
        (-t, 0.0, -1.0),
        (-t, 0.0, 1.0),
    ];
    let mut vertices: Vec<Point3> = raw
        .iter()
        .map(|&(x, y, z)| {
            let v = Vector3::new(x, y, z).normalize() * radius;
            Point3::from(v)
        })
        .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];

    for _ in 0..subdivisions {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Point3>| -> usize {
            let key = (a.min(b), a.max(b));
            *cache.entry(key).or_insert_with(|| {
                let m = nalgebra::center(&vertices[a], &vertices[b]);
                let v = m.coords.normalize() * radius;
                vertices.push(Point3::from(v));
                vertices.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }

    TriangleMesh::new(vertices, faces).expect("icosphere is valid")
}

pub fn cylinder_mesh(radius: f64, length: f64, segments: usize) -> TriangleMesh {
    let n = segments.max(3);
    let h = length / 2.0;
    let mut vertices = Vec::with_capacity(2 * n + 2);
    for ring in [-h, h] {
        for i in 0..n {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            vertices.push(Point3::new(radius * theta.cos(), radius * theta.sin(), ring));
        }
    }
    let bottom_center = vertices.len();
    vertices.push(Point3::new(0.0, 0.0, -h));
    let top_center = vertices.len();
    vertices.push(Point3::new(0.0, 0.0, h));

    let mut faces = Vec::with_capacity(4 * n);
    for i in 0..n {
        let j = (i + 1) % n;
        let (b0, b1, t0, t1) = (i, j, n + i, n + j);
        faces.push([b0, b1, t1]);
        faces.push([b0, t1, t0]);
        faces.push([bottom_center, b1, b0]);
        faces.push([top_center, t0, t1]);
    }
    TriangleMesh::new(vertices, faces).expect("cylinder is valid")
}

/// Cylinder of `axis_length` with hemispherical caps of `radius`.
pub fn capsule_mesh(radius: f64, axis_length: f64, segments: usize, rings: usize) -> TriangleMesh {
    let n = segments.max(3);
    let rings = rings.max(1);
    let h = axis_length / 2.0;
    let mut vertices: Vec<Point3> = Vec::new();
    let mut ring_starts: Vec<usize> = Vec::new();

    let mut push_ring = |vertices: &mut Vec<Point3>, ring_radius: f64, z: f64| -> usize {
        let start = vertices.len();
        for i in 0..n {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            vertices.push(Point3::new(
                ring_radius * theta.cos(),
                ring_radius * theta.sin(),
                z,
            ));
        }
        start
    };

    let bottom_pole = vertices.len();
    vertices.push(Point3::new(0.0, 0.0, -h - radius));
    // Bottom hemisphere: from just above the pole down-sphere to the equator.
    for j in 1..=rings {
        let phi = std::f64::consts::FRAC_PI_2 * (1.0 - j as f64 / rings as f64);
        let start = push_ring(&mut vertices, radius * phi.cos(), -h - radius * phi.sin());
        ring_starts.push(start);
    }
    // Top hemisphere: equator up to just below the pole.
    for j in 1..=rings {
        let phi = std::f64::consts::FRAC_PI_2 * j as f64 / rings as f64;
        let start = push_ring(&mut vertices, radius * phi.cos(), h + radius * phi.sin());
        ring_starts.push(start);
    }
    let top_pole = vertices.len();
    vertices.push(Point3::new(0.0, 0.0, h + radius));

    let mut faces = Vec::new();
    let first = ring_starts[0];
    let last = *ring_starts.last().unwrap();
    for i in 0..n {
        let j = (i + 1) % n;
        faces.push([bottom_pole, first + j, first + i]);
        faces.push([top_pole, last + i, last + j]);
    }
    for w in ring_starts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        for i in 0..n {
            let j = (i + 1) % n;
            faces.push([lo + i, lo + j, hi + j]);
            faces.push([lo + i, hi + j, hi + i]);
        }
    }
    TriangleMesh::new(vertices, faces).expect("capsule is valid")
}

pub fn torus_mesh(
    major_radius: f64,
    minor_radius: f64,
    major_segments: usize,
    minor_segments: usize,
) -> TriangleMesh {
    let nu = major_segments.max(3);
    let nv = minor_segments.max(3);
    let mut vertices = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = 2.0 * std::f64::consts::PI * i as f64 / nu as f64;
        for j in 0..nv {
            let v = 2.0 * std::f64::consts::PI * j as f64 / nv as f64;
            let ring = major_radius + minor_radius * v.cos();
            vertices.push(Point3::new(
                ring * u.cos(),
                ring * u.sin(),
                minor_radius * v.sin(),
            ));
        }
    }
    let mut faces = Vec::with_capacity(2 * nu * nv);
    for i in 0..nu {
        let i2 = (i + 1) % nu;
        for j in 0..nv {
            let j2 = (j + 1) % nv;
            let (a, b, c, d) = (i * nv + j, i2 * nv + j, i2 * nv + j2, i * nv + j2);
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    TriangleMesh::new(vertices, faces).expect("torus is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::validate_mesh;

    fn assert_closed_outward(mesh: &TriangleMesh, expected_volume: f64, tolerance: f64) {
        let report = validate_mesh(mesh);
        assert!(report.watertight, "not watertight: {report:?}");
        let vol = mesh.signed_volume();
        assert!(
            (vol - expected_volume).abs() <= tolerance,
            "volume {vol}, expected {expected_volume}"
        );
    }

    #[test]
    fn box_volume_and_topology() {
        let mesh = box_mesh(Vector3::new(1.0, 2.0, 3.0));
        assert_eq!(mesh.faces().len(), 12);
        assert_closed_outward(&mesh, 6.0, 1e-12);
        assert_eq!(validate_mesh(&mesh).euler_characteristic, 2);
    }

    #[test]
    fn icosphere_counts_and_volume() {
        for (sub, expected_faces) in [(0, 20), (1, 80), (2, 320), (3, 1280)] {
            let mesh = icosphere(1.0, sub);
            assert_eq!(mesh.faces().len(), expected_faces);
            let report = validate_mesh(&mesh);
            assert!(report.watertight);
            assert_eq!(report.euler_characteristic, 2);
        }
        // Inscribed polyhedron volume approaches 4π/3 from below.
        let vol = icosphere(1.0, 3).signed_volume();
        let exact = 4.0 * std::f64::consts::PI / 3.0;
        assert!(vol > 0.97 * exact && vol < exact);
    }

    #[test]
    fn cylinder_closed() {
        let mesh = cylinder_mesh(0.2, 1.0, 32);
        let exact = std::f64::consts::PI * 0.04;
        assert_closed_outward(&mesh, exact, 0.02 * exact);
    }

    #[test]
    fn capsule_closed() {
        let mesh = capsule_mesh(0.2, 1.0, 32, 8);
        let exact = std::f64::consts::PI * 0.04 + 4.0 * std::f64::consts::PI * 0.008 / 3.0;
        assert_closed_outward(&mesh, exact, 0.05 * exact);
    }

    #[test]
    fn torus_closed_genus_one() {
        let mesh = torus_mesh(0.5, 0.2, 32, 16);
        let report = validate_mesh(&mesh);
        assert!(report.watertight);
        assert_eq!(report.euler_characteristic, 0);
        let exact = 2.0 * std::f64::consts::PI.powi(2) * 0.5 * 0.04;
        assert!((mesh.signed_volume() - exact).abs() < 0.05 * exact);
    }
}
