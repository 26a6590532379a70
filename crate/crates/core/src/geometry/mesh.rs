//! Indexed triangle mesh and topology validation.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

use super::{Aabb, Point3, Vector3};

/// Indexed triangle surface in meters.
///
/// Construction validates indices and coordinates and drops topologically
/// degenerate faces (faces that repeat a vertex index). Zero-area faces are
/// legal here; the mesh loader filters them separately.
#[derive(Debug)]
pub struct TriangleMesh {
    vertices: Vec<Point3>,
    faces: Vec<[usize; 3]>,
    degenerate_dropped: usize,
    report: OnceLock<MeshReport>,
}

impl Clone for TriangleMesh {
    fn clone(&self) -> Self {
        Self {
            vertices: self.vertices.clone(),
            faces: self.faces.clone(),
            degenerate_dropped: self.degenerate_dropped,
            report: self.report.clone(),
        }
    }
}

impl PartialEq for TriangleMesh {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.faces == other.faces
    }
}

/// Topology and orientation summary of a [`TriangleMesh`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshReport {
    pub watertight: bool,
    pub edge_manifold: bool,
    pub consistently_oriented: bool,
    pub boundary_edge_count: usize,
    pub non_manifold_edge_count: usize,
    pub connected_components: usize,
    pub euler_characteristic: i64,
    pub face_count: usize,
    pub vertex_count: usize,
}

impl TriangleMesh {
    pub fn new(vertices: Vec<Point3>, faces: Vec<[usize; 3]>) -> Result<Self> {
        for (i, v) in vertices.iter().enumerate() {
            if !(v.x.is_finite() && v.y.is_finite() && v.z.is_finite()) {
                return Err(Error::InvalidMesh(format!(
                    "vertex {i} has non-finite coordinates"
                )));
            }
        }
        let n = vertices.len();
        let mut kept = Vec::with_capacity(faces.len());
        let mut dropped = 0;
        for (i, f) in faces.iter().enumerate() {
            if f.iter().any(|&ix| ix >= n) {
                return Err(Error::InvalidMesh(format!(
                    "face {i} references vertex {} but only {n} vertices exist",
                    f.iter().max().unwrap()
                )));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                dropped += 1;
            } else {
                kept.push(*f);
            }
        }
        Ok(Self {
            vertices,
            faces: kept,
            degenerate_dropped: dropped,
            report: OnceLock::new(),
        })
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Number of topologically degenerate faces removed at construction.
    pub fn degenerate_dropped(&self) -> usize {
        self.degenerate_dropped
    }

    /// Folds loader-side drops (zero-area filtering) into the counter.
    pub(crate) fn bump_degenerate(&mut self, extra: usize) {
        self.degenerate_dropped += extra;
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn face_points(&self, face: usize) -> [Point3; 3] {
        let [a, b, c] = self.faces[face];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn face_area(&self, face: usize) -> f64 {
        let [a, b, c] = self.face_points(face);
        (b - a).cross(&(c - a)).norm() * 0.5
    }

    /// Unit normal of a face; zero vector for a zero-area face.
    pub fn face_normal(&self, face: usize) -> Vector3 {
        let [a, b, c] = self.face_points(face);
        let n = (b - a).cross(&(c - a));
        let len = n.norm();
        if len < 1e-300 {
            Vector3::zeros()
        } else {
            n / len
        }
    }

    pub fn face_centroid(&self, face: usize) -> Point3 {
        let [a, b, c] = self.face_points(face);
        Point3::from((a.coords + b.coords + c.coords) / 3.0)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.faces.len()).map(|f| self.face_area(f)).sum()
    }

    /// Signed volume by the divergence theorem; positive for a closed,
    /// outward-oriented surface.
    pub fn signed_volume(&self) -> f64 {
        self.faces
            .iter()
            .map(|&[a, b, c]| {
                let (a, b, c) = (
                    self.vertices[a].coords,
                    self.vertices[b].coords,
                    self.vertices[c].coords,
                );
                a.dot(&b.cross(&c)) / 6.0
            })
            .sum()
    }

    pub fn aabb(&self) -> Aabb {
        Aabb::from_points(self.vertices.iter())
    }

    pub fn translated(&self, offset: Vector3) -> TriangleMesh {
        TriangleMesh::new(
            self.vertices.iter().map(|v| v + offset).collect(),
            self.faces.clone(),
        )
        .expect("translation preserves validity")
    }

    pub fn scaled(&self, scale: Vector3) -> TriangleMesh {
        TriangleMesh::new(
            self.vertices
                .iter()
                .map(|v| Point3::new(v.x * scale.x, v.y * scale.y, v.z * scale.z))
                .collect(),
            self.faces.clone(),
        )
        .expect("scaling preserves validity")
    }

    pub fn flipped(&self) -> TriangleMesh {
        TriangleMesh::new(
            self.vertices.clone(),
            self.faces.iter().map(|&[a, b, c]| [a, c, b]).collect(),
        )
        .expect("flipping preserves validity")
    }

    /// Cached topology report; computed on first use.
    pub fn report(&self) -> &MeshReport {
        self.report.get_or_init(|| compute_report(self))
    }

    pub fn is_watertight(&self) -> bool {
        self.report().watertight
    }
}

/// Half-edge accounting over the mesh: boundary edges have exactly one
/// incident face, non-manifold edges more than two. Orientation is
/// consistent when every two-face edge is traversed once in each direction.
pub fn validate_mesh(mesh: &TriangleMesh) -> MeshReport {
    mesh.report().clone()
}

fn compute_report(mesh: &TriangleMesh) -> MeshReport {
    struct EdgeInfo {
        count: usize,
        forward: usize, // traversals with lower index first
    }

    let mut edges: HashMap<(usize, usize), EdgeInfo> = HashMap::new();
    for f in mesh.faces() {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            let key = (a.min(b), a.max(b));
            let info = edges.entry(key).or_insert(EdgeInfo {
                count: 0,
                forward: 0,
            });
            info.count += 1;
            if a < b {
                info.forward += 1;
            }
        }
    }

    let mut boundary = 0;
    let mut non_manifold = 0;
    let mut oriented = true;
    for info in edges.values() {
        match info.count {
            1 => boundary += 1,
            2 => {
                // Opposite traversal directions means one forward, one backward.
                if info.forward != 1 {
                    oriented = false;
                }
            }
            _ => non_manifold += 1,
        }
    }

    // Connected components over vertices referenced by faces.
    let n = mesh.vertices().len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut referenced = vec![false; n];
    for f in mesh.faces() {
        for &v in f {
            referenced[v] = true;
        }
        for k in 0..3 {
            let (a, b) = (find(&mut parent, f[k]), find(&mut parent, f[(k + 1) % 3]));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut roots = std::collections::HashSet::new();
    for v in 0..n {
        if referenced[v] {
            let r = find(&mut parent, v);
            roots.insert(r);
        }
    }

    let v = mesh.vertices().len() as i64;
    let e = edges.len() as i64;
    let f = mesh.faces().len() as i64;

    MeshReport {
        watertight: boundary == 0 && non_manifold == 0 && oriented && f > 0,
        edge_manifold: non_manifold == 0,
        consistently_oriented: oriented,
        boundary_edge_count: boundary,
        non_manifold_edge_count: non_manifold,
        connected_components: roots.len(),
        euler_characteristic: v - e + f,
        face_count: mesh.faces().len(),
        vertex_count: mesh.vertices().len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn tetrahedron() -> TriangleMesh {
        let vertices = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.5, 1.0, 0.0),
            Point3::new(0.5, 0.5, 1.0),
        ];
        let faces = vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [2, 0, 3]];
        TriangleMesh::new(vertices, faces).unwrap()
    }

    #[test]
    fn single_triangle_has_three_boundary_edges() {
        let mesh = TriangleMesh::new(
            vec![
                Point3::origin(),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let report = validate_mesh(&mesh);
        assert!(!report.watertight);
        assert_eq!(report.boundary_edge_count, 3);
        assert_eq!(report.non_manifold_edge_count, 0);
    }

    #[test]
    fn tetrahedron_is_watertight_genus_zero() {
        let report = validate_mesh(&tetrahedron());
        assert!(report.watertight);
        assert!(report.consistently_oriented);
        assert_eq!(report.euler_characteristic, 2);
        assert_eq!(report.connected_components, 1);
        assert!(tetrahedron().signed_volume() > 0.0);
    }

    #[test]
    fn two_consistent_triangles_share_an_edge() {
        // Shared edge 0-1 traversed in opposite directions by the two faces.
        let mesh = TriangleMesh::new(
            vec![
                Point3::origin(),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
                Point3::new(1.0, -1.0, 0.0),
            ],
            vec![[0, 1, 2], [1, 0, 3]],
        )
        .unwrap();
        let report = validate_mesh(&mesh);
        assert_eq!(report.non_manifold_edge_count, 0);
        assert_eq!(report.boundary_edge_count, 4);
        assert!(report.consistently_oriented);
    }

    #[test]
    fn same_direction_shared_edge_is_inconsistent() {
        let mesh = TriangleMesh::new(
            vec![
                Point3::origin(),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
                Point3::new(1.0, -1.0, 0.0),
            ],
            vec![[0, 1, 2], [0, 1, 3]],
        )
        .unwrap();
        assert!(!validate_mesh(&mesh).consistently_oriented);
    }

    #[test]
    fn non_manifold_edge_counted() {
        let mesh = TriangleMesh::new(
            vec![
                Point3::origin(),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
                Point3::new(0.0, -1.0, 0.0),
                Point3::new(0.0, 0.0, 1.0),
            ],
            vec![[0, 1, 2], [1, 0, 3], [0, 1, 4]],
        )
        .unwrap();
        let report = validate_mesh(&mesh);
        assert_eq!(report.non_manifold_edge_count, 1);
        assert!(!report.edge_manifold);
        assert!(!report.watertight);
    }

    #[test]
    fn degenerate_faces_dropped_with_count() {
        let mesh = TriangleMesh::new(
            vec![
                Point3::origin(),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2], [0, 0, 1], [2, 2, 2]],
        )
        .unwrap();
        assert_eq!(mesh.faces().len(), 1);
        assert_eq!(mesh.degenerate_dropped(), 2);
    }

    #[test]
    fn out_of_range_index_rejected() {
        let err = TriangleMesh::new(vec![Point3::origin()], vec![[0, 0, 9]]);
        assert!(err.is_err());
    }

    #[test]
    fn non_finite_vertex_rejected() {
        let err = TriangleMesh::new(vec![Point3::new(f64::NAN, 0.0, 0.0)], vec![]);
        assert!(err.is_err());
    }
}
