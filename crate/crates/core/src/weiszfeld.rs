//! Fermat-Toricelli point (geometric median) of four points in 3-space.
//!
//! Vertex optimality is tested up front. Otherwise a Vardi-Zhang modified
//! Weiszfeld iteration runs from the centroid; each step also tries a damped
//! Newton step on the total distance and keeps whichever candidate is lower,
//! which takes the linear Weiszfeld rate to quadratic near a smooth optimum.

use serde::{Deserialize, Serialize};

use crate::linalg::{solve3, Mat3, Vec3};

pub const DEFAULT_TOL: f64 = 1e-11;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Relative distance under which an iterate counts as sitting on a data point.
const VERTEX_SNAP: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FtSolution {
    pub ft: Vec3,
    pub total_distance: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Set when the minimizer is one of the input points.
    pub anchored_vertex: Option<usize>,
}

pub fn total_distance(points: &[Vec3; 4], y: Vec3) -> f64 {
    points.iter().map(|p| (*p - y).norm()).sum()
}

fn scale_of(points: &[Vec3; 4]) -> f64 {
    points.iter().map(|p| p.norm()).fold(0.0, f64::max)
}

/// Checks whether `points[k]` minimizes the total distance: the pull of the
/// remaining points must not exceed the multiplicity of the vertex.
fn vertex_is_optimal(points: &[Vec3; 4], k: usize, snap: f64) -> bool {
    let v = points[k];
    let mut weight = 0.0;
    let mut pull = Vec3::ZERO;
    for p in points {
        let d = (*p - v).norm();
        if d <= snap {
            weight += 1.0;
        } else {
            pull += (*p - v) * (1.0 / d);
        }
    }
    pull.norm() <= weight
}

/// One Vardi-Zhang step; reduces to plain Weiszfeld away from data points.
fn vardi_zhang_step(points: &[Vec3; 4], y: Vec3, snap: f64) -> Vec3 {
    let mut num = Vec3::ZERO;
    let mut den = 0.0;
    let mut pull = Vec3::ZERO;
    let mut on_point = 0.0;
    for p in points {
        let diff = *p - y;
        let d = diff.norm();
        if d <= snap {
            on_point += 1.0;
            continue;
        }
        num += *p * (1.0 / d);
        den += 1.0 / d;
        pull += diff * (1.0 / d);
    }
    if den == 0.0 {
        return y;
    }
    let weiszfeld = num * (1.0 / den);
    if on_point == 0.0 {
        return weiszfeld;
    }
    let r = pull.norm();
    if r == 0.0 {
        return y;
    }
    let ratio = on_point / r;
    weiszfeld * (1.0 - ratio).max(0.0) + y * ratio.min(1.0)
}

/// Gradient of the total distance; `None` at a data point.
fn gradient(points: &[Vec3; 4], y: Vec3, snap: f64) -> Option<Vec3> {
    let mut grad = Vec3::ZERO;
    for p in points {
        let diff = y - *p;
        let d = diff.norm();
        if d <= snap {
            return None;
        }
        grad += diff * (1.0 / d);
    }
    Some(grad)
}

/// Newton candidate for the total distance; `None` at data points or when
/// the Hessian is singular (collinear configurations).
fn newton_step(points: &[Vec3; 4], y: Vec3, snap: f64) -> Option<Vec3> {
    let mut grad = Vec3::ZERO;
    let mut hess = Mat3::ZERO;
    for p in points {
        let diff = y - *p;
        let d = diff.norm();
        if d <= snap {
            return None;
        }
        let u = diff * (1.0 / d);
        grad += u;
        hess = hess + Mat3::IDENTITY.sub(&Mat3::outer(u, u)).scale(1.0 / d);
    }
    solve3(&hess, grad).map(|step| y - step)
}

/// Geometric median of four points.
///
/// Non-convergence within `max_iter` is reported through
/// [`FtSolution::converged`] rather than an error.
pub fn weiszfeld(points: &[Vec3; 4], tol: f64, max_iter: usize) -> FtSolution {
    assert!(tol > 0.0, "tolerance must be positive");
    assert!(max_iter >= 1, "max_iter must be at least 1");
    let scale = scale_of(points);
    let snap = VERTEX_SNAP * (1.0 + scale);

    for k in 0..4 {
        if vertex_is_optimal(points, k, snap) {
            return FtSolution {
                ft: points[k],
                total_distance: total_distance(points, points[k]),
                iterations: 0,
                converged: true,
                anchored_vertex: Some(k),
            };
        }
    }

    let step_tol = tol * (1.0 + scale);
    let mut y = points.iter().fold(Vec3::ZERO, |acc, p| acc + *p) * 0.25;
    let mut fy = total_distance(points, y);
    for iter in 1..=max_iter {
        let mut next = vardi_zhang_step(points, y, snap);
        let mut fnext = total_distance(points, next);
        let mut improved = fnext < fy;
        if let Some(mut cand) = newton_step(points, y, snap) {
            // near the optimum the objective is flat to roundoff, so a full
            // Newton step is judged by the gradient instead
            let gy = gradient(points, y, snap).map_or(f64::INFINITY, |g| g.norm());
            let fc = total_distance(points, cand);
            let flat = fc <= fy * (1.0 + 8.0 * f64::EPSILON);
            let gc = gradient(points, cand, snap).map_or(f64::INFINITY, |g| g.norm());
            if flat && gc < gy {
                next = cand;
                fnext = fc;
                improved = true;
            } else {
                for _ in 0..30 {
                    let fc = total_distance(points, cand);
                    if fc < fy {
                        if fc < fnext {
                            next = cand;
                            fnext = fc;
                        }
                        improved = true;
                        break;
                    }
                    cand = (cand + y) * 0.5;
                }
            }
        }
        let moved = (next - y).norm();
        if improved {
            y = next;
            fy = fnext;
        }
        // no progress in either the objective or the gradient means roundoff has taken over
        if moved <= step_tol || !improved {
            return FtSolution {
                ft: y,
                total_distance: fy,
                iterations: iter,
                converged: true,
                anchored_vertex: None,
            };
        }
    }
    FtSolution {
        ft: y,
        total_distance: fy,
        iterations: max_iter,
        converged: false,
        anchored_vertex: None,
    }
}

/// [`weiszfeld`] with the default tolerance and iteration cap.
pub fn fermat_toricelli(points: &[Vec3; 4]) -> FtSolution {
    weiszfeld(points, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::test_util::random_rotation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_points<R: Rng>(rng: &mut R) -> [Vec3; 4] {
        std::array::from_fn(|_| {
            Vec3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            )
        })
    }

    #[test]
    fn identical_points() {
        let q = Vec3::new(0.3, -0.2, 0.9);
        let sol = fermat_toricelli(&[q; 4]);
        assert_eq!(sol.ft, q);
        assert_eq!(sol.total_distance, 0.0);
        assert_eq!(sol.anchored_vertex, Some(0));
    }

    #[test]
    fn regular_tetrahedron_center() {
        let pts = [
            Vec3::new(1.0, 1.0, 1.0),
            Vec3::new(1.0, -1.0, -1.0),
            Vec3::new(-1.0, 1.0, -1.0),
            Vec3::new(-1.0, -1.0, 1.0),
        ];
        let sol = fermat_toricelli(&pts);
        assert!(sol.converged);
        assert!(sol.ft.norm() < 1e-12);
        assert!((sol.total_distance - 4.0 * 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn dominant_vertex_is_returned_exactly() {
        // the doubled point outweighs the pull of the other two
        let a = Vec3::new(0.0, 0.0, -1.0);
        let pts = [Vec3::new(2.0, 0.0, 1.0), a, a, Vec3::new(-2.0, 0.0, 1.0)];
        let sol = fermat_toricelli(&pts);
        assert_eq!(sol.anchored_vertex, Some(1));
        assert_eq!(sol.ft, a);
    }

    #[test]
    fn beats_random_probes_and_vertices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let pts = random_points(&mut rng);
            let sol = fermat_toricelli(&pts);
            assert!(sol.converged);
            assert!((sol.total_distance - total_distance(&pts, sol.ft)).abs() < 1e-12);
            for _ in 0..100 {
                let q = sol.ft
                    + Vec3::new(
                        rng.random_range(-0.5..0.5),
                        rng.random_range(-0.5..0.5),
                        rng.random_range(-0.5..0.5),
                    );
                assert!(sol.total_distance <= total_distance(&pts, q) + 1e-11);
            }
            for p in &pts {
                assert!(sol.total_distance <= total_distance(&pts, *p) + 1e-11);
            }
        }
    }

    #[test]
    fn rotation_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let pts = random_points(&mut rng);
            let r = random_rotation(&mut rng);
            let rotated = pts.map(|p| r.mul_vec(p));
            let a = fermat_toricelli(&pts);
            let b = fermat_toricelli(&rotated);
            assert!((r.mul_vec(a.ft) - b.ft).norm() < 1e-9);
            assert!((a.total_distance - b.total_distance).abs() < 1e-11);
        }
    }

    #[test]
    fn coplanar_and_collinear_inputs_terminate() {
        let pts = [
            Vec3::new(-1.0, 0.0, 0.0),
            Vec3::new(-0.2, 0.0, 0.0),
            Vec3::new(0.3, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
        ];
        let sol = fermat_toricelli(&pts);
        assert!((sol.total_distance - 2.5).abs() < 1e-10);
        let square = [
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(-1.0, 0.0, 0.0),
            Vec3::new(0.0, -1.0, 0.0),
        ];
        let sol = fermat_toricelli(&square);
        assert!(sol.converged);
        assert!(sol.ft.norm() < 1e-10);
    }
}
