//! Sphere primitive and minimal enclosing sphere (Welzl's algorithm).

use rand::{seq::SliceRandom, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Point3;

/// Center-and-radius ball in meters. Radius is clamped to a tiny positive
/// value so degenerate fits stay representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sphere {
    pub center: Point3,
    pub radius: f64,
}

pub type SphereSet = Vec<Sphere>;

impl Sphere {
    pub fn new(center: Point3, radius: f64) -> Self {
        Self {
            center,
            radius: radius.max(1e-12),
        }
    }

    pub fn contains(&self, p: &Point3, slack: f64) -> bool {
        (p - self.center).norm_squared() <= (self.radius + slack) * (self.radius + slack)
    }

    /// Distance from `p` to the sphere surface; negative inside.
    pub fn surface_distance(&self, p: &Point3) -> f64 {
        (p - self.center).norm() - self.radius
    }
}

/// Minimal sphere enclosing all points, expected linear time.
///
/// The shuffle is seeded so results are reproducible; a final inflation pass
/// guarantees containment of every input point.
pub fn minimal_enclosing_sphere(points: &[Point3], seed: u64) -> Sphere {
    assert!(!points.is_empty(), "need at least one point");
    let mut shuffled: Vec<Point3> = points.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut support: Vec<Point3> = Vec::with_capacity(4);
    let ball = welzl(&mut shuffled, points.len(), &mut support);

    // Containment is exact after this, whatever rounding did above.
    let mut radius = ball.radius;
    for p in points {
        radius = radius.max((p - ball.center).norm());
    }
    Sphere::new(ball.center, radius)
}

struct Ball {
    center: Point3,
    radius: f64,
}

impl Ball {
    fn contains(&self, p: &Point3) -> bool {
        let slack = 1e-10 * (1.0 + self.radius);
        (p - self.center).norm_squared() <= (self.radius + slack) * (self.radius + slack)
    }
}

fn welzl(points: &mut [Point3], n: usize, support: &mut Vec<Point3>) -> Ball {
    if n == 0 || support.len() == 4 {
        return ball_from_support(support);
    }
    let p = points[n - 1];
    let ball = welzl(points, n - 1, support);
    if ball.contains(&p) {
        return ball;
    }
    support.push(p);
    let ball = welzl(points, n - 1, support);
    support.pop();
    ball
}

fn ball_from_support(support: &[Point3]) -> Ball {
    match support.len() {
        0 => Ball {
            center: Point3::origin(),
            radius: 0.0,
        },
        1 => Ball {
            center: support[0],
            radius: 0.0,
        },
        2 => ball_two(&support[0], &support[1]),
        3 => ball_three(&support[0], &support[1], &support[2]),
        _ => ball_four(&support[0], &support[1], &support[2], &support[3]),
    }
}

fn ball_two(a: &Point3, b: &Point3) -> Ball {
    let center = nalgebra::center(a, b);
    Ball {
        radius: (a - center).norm().max((b - center).norm()),
        center,
    }
}

/// Circumsphere of a triangle (smallest ball with all three on its boundary).
/// Falls back to the widest two-point ball for near-collinear input.
fn ball_three(a: &Point3, b: &Point3, c: &Point3) -> Ball {
    let ab = b - a;
    let ac = c - a;
    let cross = ab.cross(&ac);
    let denom = 2.0 * cross.norm_squared();
    if denom < 1e-30 {
        let candidates = [ball_two(a, b), ball_two(a, c), ball_two(b, c)];
        return candidates
            .into_iter()
            .max_by(|x, y| x.radius.total_cmp(&y.radius))
            .unwrap();
    }
    let offset =
        (ac.norm_squared() * cross.cross(&ac) + ab.norm_squared() * (-cross).cross(&ab)) / denom;
    let center = a + offset;
    let radius = (a - center)
        .norm()
        .max((b - center).norm())
        .max((c - center).norm());
    Ball { center, radius }
}

/// Circumsphere of a tetrahedron via the linear system of perpendicular
/// bisector planes; falls back to face circumspheres when coplanar.
fn ball_four(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> Ball {
    let m = nalgebra::Matrix3::from_rows(&[
        (b - a).transpose(),
        (c - a).transpose(),
        (d - a).transpose(),
    ]);
    let rhs = nalgebra::Vector3::new(
        (b.coords.norm_squared() - a.coords.norm_squared()) / 2.0,
        (c.coords.norm_squared() - a.coords.norm_squared()) / 2.0,
        (d.coords.norm_squared() - a.coords.norm_squared()) / 2.0,
    );
    if let Some(inv) = m.try_inverse() {
        if m.determinant().abs() > 1e-20 {
            let center = Point3::from(inv * rhs);
            let radius = [a, b, c, d]
                .iter()
                .map(|p| (*p - center).norm())
                .fold(0.0, f64::max);
            return Ball { center, radius };
        }
    }
    let candidates = [
        ball_three(a, b, c),
        ball_three(a, b, d),
        ball_three(a, c, d),
        ball_three(b, c, d),
    ];
    candidates
        .into_iter()
        .max_by(|x, y| x.radius.total_cmp(&y.radius))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn single_point_zero_radius() {
        let p = Point3::new(1.0, 2.0, 3.0);
        let s = minimal_enclosing_sphere(&[p], 0);
        assert_eq!(s.center, p);
        assert!(s.radius <= 1e-12);
    }

    #[test]
    fn two_points_diameter() {
        let a = Point3::new(-1.0, 0.0, 0.0);
        let b = Point3::new(3.0, 0.0, 0.0);
        let s = minimal_enclosing_sphere(&[a, b], 0);
        assert!((s.center - Point3::new(1.0, 0.0, 0.0)).norm() < 1e-12);
        assert!((s.radius - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cube_corners_circumsphere() {
        let mut pts = Vec::new();
        for x in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for z in [0.0, 1.0] {
                    pts.push(Point3::new(x, y, z));
                }
            }
        }
        let s = minimal_enclosing_sphere(&pts, 5);
        assert!((s.center - Point3::new(0.5, 0.5, 0.5)).norm() < 1e-9);
        assert!((s.radius - 0.75f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn contains_all_points_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for case in 0..20 {
            let pts: Vec<Point3> = (0..50)
                .map(|_| Point3::new(rng.gen::<f64>() * 4.0 - 2.0, rng.gen(), rng.gen()))
                .collect();
            let s = minimal_enclosing_sphere(&pts, case);
            for p in &pts {
                assert!(s.contains(p, 1e-9));
            }
        }
    }

    #[test]
    fn collinear_points_handled() {
        let pts: Vec<Point3> = (0..10).map(|i| Point3::new(i as f64, 0.0, 0.0)).collect();
        let s = minimal_enclosing_sphere(&pts, 1);
        assert!((s.radius - 4.5).abs() < 1e-9);
        assert!((s.center - Point3::new(4.5, 0.0, 0.0)).norm() < 1e-9);
    }
}
