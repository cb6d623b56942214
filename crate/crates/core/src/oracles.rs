//! Brute-force cross-checks for the closed forms.
//!
//! These are slow and only meant for verification. None of them calls the
//! routine it is checking: the grid oracle never touches an eigensolver, the
//! direct Fermat-Toricelli search never runs Weiszfeld, and the parent-POVM
//! search never evaluates the pair criterion.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Vec3;
use crate::nelder_mead::NelderMead;
use crate::state::{BellDiagonalState, NoisyObservable};
use crate::weiszfeld::total_distance;

/// Grid of unit vectors `theta_k = k pi / n_theta`, `phi_l = 2 pi l / n_phi`,
/// poles counted once. Only the closed upper hemisphere is generated when
/// both counts are even, since the grid is then antipodally symmetric.
fn sphere_grid(n_theta: usize, n_phi: usize) -> Vec<Vec3> {
    let k_max = if n_theta.is_multiple_of(2) && n_phi.is_multiple_of(2) {
        n_theta / 2
    } else {
        n_theta
    };
    let mut dirs = Vec::with_capacity((k_max + 1) * n_phi);
    for k in 0..=k_max {
        let theta = k as f64 * PI / n_theta as f64;
        if k == 0 || k == n_theta {
            dirs.push(Vec3::from_spherical(theta, 0.0));
            continue;
        }
        for l in 0..n_phi {
            dirs.push(Vec3::from_spherical(theta, 2.0 * PI * l as f64 / n_phi as f64));
        }
    }
    dirs
}

/// Maximum of `|r1 + r2| + |r1 - r2|` over pairs of grid directions, with
/// `r = T^T e` for the correlation matrix the state was built from.
///
/// Uses `(|a+b| + |a-b|)^2 = 2 (P + sqrt(P^2 - 4 d^2))` with `P = |a|^2 + |b|^2`
/// and `d = a.b`, and skips pairs whose bound `4 P` cannot beat the running
/// best. The result is the exact grid maximum.
pub fn s_grid_oracle(s: &BellDiagonalState, n_theta: usize, n_phi: usize) -> f64 {
    assert!(n_theta >= 8 && n_phi >= 8, "grid sizes must be at least 8");
    let t = s.raw_correlation().copied().unwrap_or_else(|| s.correlation_matrix());
    let tt = t.transpose();
    let mut rs: Vec<(f64, Vec3)> = sphere_grid(n_theta, n_phi)
        .into_iter()
        .map(|e| {
            let r = tt.mul_vec(e);
            (r.norm_squared(), r)
        })
        .collect();
    rs.sort_by(|a, b| b.0.total_cmp(&a.0));

    let n = rs.len();
    let norms: Vec<f64> = rs.iter().map(|v| v.0).collect();
    let xs: Vec<f64> = rs.iter().map(|v| v.1.x).collect();
    let ys: Vec<f64> = rs.iter().map(|v| v.1.y).collect();
    let zs: Vec<f64> = rs.iter().map(|v| v.1.z).collect();

    const LANES: usize = 4;
    const BLOCK: usize = 64;
    // best value of P + sqrt(P^2 - 4 d^2)
    let mut best = 0.0f64;
    for i in 0..n {
        let ni = norms[i];
        if 4.0 * ni <= best {
            break;
        }
        let (xi, yi, zi) = (xs[i], ys[i], zs[i]);
        let mut j = i;
        while j < n {
            if 2.0 * (ni + norms[j]) <= best {
                break;
            }
            let end = (j + BLOCK).min(n);
            let mut acc = [best; LANES];
            let mut jj = j;
            while jj + LANES <= end {
                for lane in 0..LANES {
                    let k = jj + lane;
                    let p = ni + norms[k];
                    let d = xi * xs[k] + yi * ys[k] + zi * zs[k];
                    let g = p + (p * p - 4.0 * d * d).max(0.0).sqrt();
                    if g > acc[lane] {
                        acc[lane] = g;
                    }
                }
                jj += LANES;
            }
            for k in jj..end {
                let p = ni + norms[k];
                let d = xi * xs[k] + yi * ys[k] + zi * zs[k];
                let g = p + (p * p - 4.0 * d * d).max(0.0).sqrt();
                if g > acc[0] {
                    acc[0] = g;
                }
            }
            best = acc.into_iter().fold(best, f64::max);
            j = end;
        }
    }
    (2.0 * best).sqrt()
}

/// Minimizer of the total distance found by a bounding-box grid scan
/// followed by restarted Nelder-Mead refinement.
pub fn ft_direct_oracle(points: &[Vec3; 4]) -> Vec3 {
    const CELLS: usize = 20;
    let lo = points.iter().fold(Vec3::new(f64::MAX, f64::MAX, f64::MAX), |a, p| {
        Vec3::new(a.x.min(p.x), a.y.min(p.y), a.z.min(p.z))
    });
    let hi = points.iter().fold(Vec3::new(f64::MIN, f64::MIN, f64::MIN), |a, p| {
        Vec3::new(a.x.max(p.x), a.y.max(p.y), a.z.max(p.z))
    });
    let span = hi - lo;
    let extent = span.x.max(span.y).max(span.z);
    if extent == 0.0 {
        return points[0];
    }
    let mut best = (f64::INFINITY, lo);
    for i in 0..=CELLS {
        for j in 0..=CELLS {
            for k in 0..=CELLS {
                let c = CELLS as f64;
                let q = Vec3::new(
                    lo.x + span.x * i as f64 / c,
                    lo.y + span.y * j as f64 / c,
                    lo.z + span.z * k as f64 / c,
                );
                let v = total_distance(points, q);
                if v < best.0 {
                    best = (v, q);
                }
            }
        }
    }
    let nm = NelderMead {
        max_evals: 4_000,
        f_tol: 1e-16,
        x_tol: 1e-13 * (1.0 + extent),
        initial_step: 2.0 * extent / CELLS as f64,
    };
    let m = nm.minimize_restarted(
        |x| total_distance(points, Vec3::new(x[0], x[1], x[2])),
        &best.1.to_array(),
        12,
    );
    Vec3::new(m.x[0], m.x[1], m.x[2])
}

/// Settings for [`parent_povm_search`].
#[derive(Clone, Copy, Debug)]
pub struct PovmSearchConfig {
    pub restarts: usize,
    pub seed: u64,
    pub optimizer: NelderMead,
}

impl Default for PovmSearchConfig {
    fn default() -> Self {
        PovmSearchConfig {
            restarts: 64,
            seed: 0,
            optimizer: NelderMead {
                max_evals: 1_500,
                f_tol: 1e-13,
                x_tol: 1e-11,
                initial_step: 0.2,
            },
        }
    }
}

/// Outcome of a parent-POVM search: the smallest worst-case positivity
/// violation found and the parent that attains it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParentPovm {
    /// `max_l (|m_l| - a_l)`; a parent exists iff the true minimum is `<= 0`.
    pub violation: f64,
    /// Effects `G_l = (a_l I + m_l . sigma)/2` for outcome pairs `++, +-, -+, --`.
    pub weights: [f64; 4],
    pub vectors: [Vec3; 4],
}

/// Parent built from the four free parameters `(a, m)` after the marginal
/// constraints have been solved: `G_++ = (a, m)`, `G_+- = (1-a, r1-m)`,
/// `G_-+ = (1-a, r2-m)`, `G_-- = (a, m-r1-r2)`.
fn parent_from(params: &[f64], r1: Vec3, r2: Vec3) -> ([f64; 4], [Vec3; 4]) {
    let a = params[0];
    let m = Vec3::new(params[1], params[2], params[3]);
    (
        [a, 1.0 - a, 1.0 - a, a],
        [m, r1 - m, r2 - m, m - r1 - r2],
    )
}

fn worst_violation(params: &[f64], r1: Vec3, r2: Vec3) -> f64 {
    let (a, m) = parent_from(params, r1, r2);
    (0..4).map(|l| m[l].norm() - a[l]).fold(f64::NEG_INFINITY, f64::max)
}

pub fn parent_povm_search(r1: &NoisyObservable, r2: &NoisyObservable, config: &PovmSearchConfig) -> ParentPovm {
    let (v1, v2) = (r1.r, r2.r);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for k in 0..config.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(k as u64);
        let x0 = if k == 0 {
            // symmetric guess: split every vector evenly
            let m = (v1 + v2) * 0.5;
            vec![0.5, m.x, m.y, m.z]
        } else {
            vec![
                rng.random_range(0.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ]
        };
        let m = config
            .optimizer
            .minimize_restarted(|x| worst_violation(x, v1, v2), &x0, 6);
        if best.as_ref().is_none_or(|b| m.value < b.0) {
            best = Some((m.value, m.x));
        }
    }
    let (violation, x) = best.expect("at least one restart");
    let (weights, vectors) = parent_from(&x, v1, v2);
    ParentPovm {
        violation,
        weights,
        vectors,
    }
}

/// Whether a four-outcome parent POVM reproduces both observables by
/// marginalization. Violations within `tol` of zero are reported as
/// [`Error::BoundaryInconclusive`].
pub fn parent_povm_feasible(r1: &NoisyObservable, r2: &NoisyObservable, tol: f64) -> Result<bool> {
    let found = parent_povm_search(r1, r2, &PovmSearchConfig::default());
    if found.violation < -tol {
        Ok(true)
    } else if found.violation > tol {
        Ok(false)
    } else {
        Err(Error::BoundaryInconclusive { margin: tol })
    }
}
