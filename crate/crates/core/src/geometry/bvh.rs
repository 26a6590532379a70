//! Axis-aligned bounding-box tree over a mesh's triangles.
//!
//! Queries through the tree match brute force over all triangles to within
//! 1e-9 m; the oracle tests pin that down.

use super::{mesh::TriangleMesh, Aabb, Point3, Vector3};

#[derive(Debug, Clone, Copy)]
pub struct BvhTriangle {
    pub a: Point3,
    pub b: Point3,
    pub c: Point3,
    pub face_index: usize,
}

#[derive(Debug, Clone)]
enum NodeKind {
    Leaf { start: usize, len: usize },
    Inner { left: usize, right: usize },
}

#[derive(Debug, Clone)]
struct Node {
    aabb: Aabb,
    kind: NodeKind,
}

/// Immutable acceleration structure; safe for concurrent queries.
#[derive(Debug, Clone)]
pub struct MeshBvh {
    nodes: Vec<Node>,
    triangles: Vec<BvhTriangle>,
    aabb: Aabb,
}

const LEAF_SIZE: usize = 4;

impl MeshBvh {
    pub fn build(mesh: &TriangleMesh) -> MeshBvh {
        let mut triangles: Vec<BvhTriangle> = mesh
            .faces()
            .iter()
            .enumerate()
            .map(|(i, _)| {
                let [a, b, c] = mesh.face_points(i);
                BvhTriangle {
                    a,
                    b,
                    c,
                    face_index: i,
                }
            })
            .collect();
        let mut nodes = Vec::new();
        if triangles.is_empty() {
            nodes.push(Node {
                aabb: Aabb::empty(),
                kind: NodeKind::Leaf { start: 0, len: 0 },
            });
        } else {
            let n = triangles.len();
            build_node(&mut nodes, &mut triangles, 0, n);
        }
        let aabb = nodes[0].aabb;
        MeshBvh {
            nodes,
            triangles,
            aabb,
        }
    }

    pub fn aabb(&self) -> Aabb {
        self.aabb
    }

    pub fn triangles(&self) -> &[BvhTriangle] {
        &self.triangles
    }

    /// Unsigned distance from `p` to the closest triangle.
    pub fn distance(&self, p: &Point3) -> f64 {
        self.closest_point(p).0
    }

    /// Distance, closest surface point, and owning face index.
    pub fn closest_point(&self, p: &Point3) -> (f64, Point3, usize) {
        let mut best = (f64::INFINITY, *p, usize::MAX);
        if self.triangles.is_empty() {
            return best;
        }
        self.closest_rec(0, p, &mut best);
        (best.0.sqrt(), best.1, best.2)
    }

    fn closest_rec(&self, node: usize, p: &Point3, best: &mut (f64, Point3, usize)) {
        let n = &self.nodes[node];
        if n.aabb.distance_sq(p) >= best.0 {
            return;
        }
        match n.kind {
            NodeKind::Leaf { start, len } => {
                for t in &self.triangles[start..start + len] {
                    let q = closest_point_on_triangle(p, &t.a, &t.b, &t.c);
                    let d2 = (q - p).norm_squared();
                    if d2 < best.0 {
                        *best = (d2, q, t.face_index);
                    }
                }
            }
            NodeKind::Inner { left, right } => {
                let dl = self.nodes[left].aabb.distance_sq(p);
                let dr = self.nodes[right].aabb.distance_sq(p);
                let (first, second) = if dl <= dr { (left, right) } else { (right, left) };
                self.closest_rec(first, p, best);
                self.closest_rec(second, p, best);
            }
        }
    }

    /// True if any triangle lies within `radius` of `p`.
    pub fn any_within(&self, p: &Point3, radius: f64) -> bool {
        if self.triangles.is_empty() {
            return false;
        }
        let r2 = radius * radius;
        let mut stack = vec![0usize];
        while let Some(node) = stack.pop() {
            let n = &self.nodes[node];
            if n.aabb.distance_sq(p) > r2 {
                continue;
            }
            match n.kind {
                NodeKind::Leaf { start, len } => {
                    for t in &self.triangles[start..start + len] {
                        let q = closest_point_on_triangle(p, &t.a, &t.b, &t.c);
                        if (q - p).norm_squared() <= r2 {
                            return true;
                        }
                    }
                }
                NodeKind::Inner { left, right } => {
                    stack.push(left);
                    stack.push(right);
                }
            }
        }
        false
    }

    /// Branch-and-bound minimum of `tri_distance` over all triangles.
    ///
    /// `aabb_lower` must be a lower bound of `tri_distance` over every
    /// triangle inside the box.
    pub fn min_distance_by(
        &self,
        aabb_lower: impl Fn(&Aabb) -> f64,
        tri_distance: impl Fn(&BvhTriangle) -> f64,
    ) -> f64 {
        if self.triangles.is_empty() {
            return f64::INFINITY;
        }
        let mut best = f64::INFINITY;
        let mut stack = vec![0usize];
        while let Some(node) = stack.pop() {
            let n = &self.nodes[node];
            if aabb_lower(&n.aabb) >= best {
                continue;
            }
            match n.kind {
                NodeKind::Leaf { start, len } => {
                    for t in &self.triangles[start..start + len] {
                        best = best.min(tri_distance(t));
                    }
                }
                NodeKind::Inner { left, right } => {
                    stack.push(left);
                    stack.push(right);
                }
            }
        }
        best
    }

    /// Early-exit overlap test: true once any triangle passes `tri_test`.
    pub fn any_overlap(
        &self,
        aabb_test: impl Fn(&Aabb) -> bool,
        tri_test: impl Fn(&BvhTriangle) -> bool,
    ) -> bool {
        if self.triangles.is_empty() {
            return false;
        }
        let mut stack = vec![0usize];
        while let Some(node) = stack.pop() {
            let n = &self.nodes[node];
            if !aabb_test(&n.aabb) {
                continue;
            }
            match n.kind {
                NodeKind::Leaf { start, len } => {
                    for t in &self.triangles[start..start + len] {
                        if tri_test(t) {
                            return true;
                        }
                    }
                }
                NodeKind::Inner { left, right } => {
                    stack.push(left);
                    stack.push(right);
                }
            }
        }
        false
    }

    /// All intersections of the ray `origin + t·dir`, `t > 1e-12`.
    pub fn ray_hits(&self, origin: &Point3, dir: &Vector3) -> Vec<RayHit> {
        let mut hits = Vec::new();
        if self.triangles.is_empty() {
            return hits;
        }
        let inv = Vector3::new(1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z);
        let mut stack = vec![0usize];
        while let Some(node) = stack.pop() {
            let n = &self.nodes[node];
            if !ray_intersects_aabb(origin, &inv, &n.aabb) {
                continue;
            }
            match n.kind {
                NodeKind::Leaf { start, len } => {
                    for t in &self.triangles[start..start + len] {
                        if let Some(hit) = ray_triangle(origin, dir, t) {
                            hits.push(hit);
                        }
                    }
                }
                NodeKind::Inner { left, right } => {
                    stack.push(left);
                    stack.push(right);
                }
            }
        }
        hits
    }
}

fn build_node(nodes: &mut Vec<Node>, tris: &mut [BvhTriangle], start: usize, len: usize) -> usize {
    let slice = &mut tris[start..start + len];
    let mut aabb = Aabb::empty();
    for t in slice.iter() {
        aabb.grow(&t.a);
        aabb.grow(&t.b);
        aabb.grow(&t.c);
    }
    let index = nodes.len();
    nodes.push(Node {
        aabb,
        kind: NodeKind::Leaf { start, len },
    });
    if len <= LEAF_SIZE {
        return index;
    }
    // Median split along the longest centroid axis; ties broken by face
    // index so builds are deterministic.
    let mut cmin = Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut cmax = Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for t in slice.iter() {
        let c = centroid(t);
        cmin = cmin.inf(&c);
        cmax = cmax.sup(&c);
    }
    let ext = cmax - cmin;
    let axis = if ext.x >= ext.y && ext.x >= ext.z {
        0
    } else if ext.y >= ext.z {
        1
    } else {
        2
    };
    let mid = len / 2;
    slice.select_nth_unstable_by(mid, |a, b| {
        centroid(a)[axis]
            .total_cmp(&centroid(b)[axis])
            .then(a.face_index.cmp(&b.face_index))
    });
    let left = build_node(nodes, tris, start, mid);
    let right = build_node(nodes, tris, start + mid, len - mid);
    nodes[index].kind = NodeKind::Inner { left, right };
    index
}

fn centroid(t: &BvhTriangle) -> Point3 {
    Point3::from((t.a.coords + t.b.coords + t.c.coords) / 3.0)
}

#[derive(Debug, Clone, Copy)]
pub struct RayHit {
    pub t: f64,
    pub point: Point3,
    pub face_index: usize,
    /// Hit lies within 1e-9 m of a triangle edge or vertex; parity queries
    /// re-cast when they see one of these.
    pub near_edge: bool,
}

fn ray_intersects_aabb(origin: &Point3, inv_dir: &Vector3, aabb: &Aabb) -> bool {
    let mut tmin = 1e-12;
    let mut tmax = f64::INFINITY;
    for i in 0..3 {
        let t1 = (aabb.min[i] - origin[i]) * inv_dir[i];
        let t2 = (aabb.max[i] - origin[i]) * inv_dir[i];
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        tmin = tmin.max(lo);
        tmax = tmax.min(hi);
        if tmin > tmax {
            return false;
        }
    }
    true
}

/// Möller–Trumbore intersection; rays parallel to the triangle plane report
/// no hit (grazing rays are caught by the near-edge flag on neighbours).
fn ray_triangle(origin: &Point3, dir: &Vector3, t: &BvhTriangle) -> Option<RayHit> {
    let e1 = t.b - t.a;
    let e2 = t.c - t.a;
    let pvec = dir.cross(&e2);
    let det = e1.dot(&pvec);
    if det.abs() < 1e-14 {
        return None;
    }
    let inv_det = 1.0 / det;
    let tvec = origin - t.a;
    let u = tvec.dot(&pvec) * inv_det;
    if !(-1e-9..=1.0 + 1e-9).contains(&u) {
        return None;
    }
    let qvec = tvec.cross(&e1);
    let v = dir.dot(&qvec) * inv_det;
    if v < -1e-9 || u + v > 1.0 + 1e-9 {
        return None;
    }
    let hit_t = e2.dot(&qvec) * inv_det;
    if hit_t <= 1e-12 {
        return None;
    }
    let point = origin + dir * hit_t;
    let near_edge = [(t.a, t.b), (t.b, t.c), (t.c, t.a)]
        .iter()
        .any(|(p, q)| point_segment_distance_sq(&point, p, q) < 1e-18);
    Some(RayHit {
        t: hit_t,
        point,
        face_index: t.face_index,
        near_edge,
    })
}

fn point_segment_distance_sq(p: &Point3, a: &Point3, b: &Point3) -> f64 {
    let ab = b - a;
    let denom = ab.norm_squared();
    if denom < 1e-300 {
        return (p - a).norm_squared();
    }
    let t = ((p - a).dot(&ab) / denom).clamp(0.0, 1.0);
    (a + ab * t - p).norm_squared()
}

/// Closest point on a triangle to `p` (Ericson, Real-Time Collision
/// Detection, §5.1.5).
pub fn closest_point_on_triangle(p: &Point3, a: &Point3, b: &Point3, c: &Point3) -> Point3 {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return *a;
    }

    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return *b;
    }

    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let t = d1 / (d1 - d3);
        return a + ab * t;
    }

    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return *c;
    }

    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let t = d2 / (d2 - d6);
        return a + ac * t;
    }

    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + (c - b) * t;
    }

    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    a + ab * v + ac * w
}
