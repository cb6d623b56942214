//! Steering with three projective measurements on the steering side.
//!
//! Three unbiased noisy observables `r1, r2, r3` are jointly measurable iff
//! `sum_x |L_x - L_FT| <= 4`, where `L_0 = r1 + r2 + r3`, `L_x = 2 r_x - L_0`
//! and `L_FT` is the Fermat-Toricelli point of the four `L` vectors. Half the
//! left side, maximized over Alice's three directions, is the measure `S3`;
//! there is no closed form, so [`s3_estimate`] searches for it numerically.
//! The eigenvector triple of `T T^T` already gives `S3 >= 2 |T|_F`, hence
//! `|T|_F > 1` certifies steerability.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eig_sym3, Vec3};
use crate::nelder_mead::NelderMead;
use crate::state::{BellDiagonalState, NoisyObservable};
use crate::steering_two::{optimal_directions_two, TOL_CMP};
use crate::weiszfeld::{fermat_toricelli, total_distance, FtSolution};

/// Orthogonality slack for the closed-form Fermat-Toricelli shortcut.
pub const TOL_ORTH: f64 = 1e-10;

/// `(L_0, L_1, L_2, L_3)`; always `L_1 + L_2 + L_3 = -L_0`.
pub fn lambda_vectors(r1: &NoisyObservable, r2: &NoisyObservable, r3: &NoisyObservable) -> [Vec3; 4] {
    lambdas_of(r1.r, r2.r, r3.r)
}

fn lambdas_of(r1: Vec3, r2: Vec3, r3: Vec3) -> [Vec3; 4] {
    let l0 = r1 + r2 + r3;
    [l0, r1 * 2.0 - l0, r2 * 2.0 - l0, r3 * 2.0 - l0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleAssessment {
    pub r: [NoisyObservable; 3],
    pub lambdas: [Vec3; 4],
    pub ft: FtSolution,
    /// `sum_x |L_x - L_FT| / 2`.
    pub half_total: f64,
    pub compatible: bool,
}

/// Closed-form Fermat-Toricelli point when `r3` is orthogonal to `r1` and `r2`:
/// `(|r1 - r2| - |r1 + r2|)/(|r1 - r2| + |r1 + r2|) r3`.
pub fn ft_orthogonal(r1: &NoisyObservable, r2: &NoisyObservable, r3: &NoisyObservable) -> Result<Vec3> {
    let overlap1 = r3.r.dot(r1.r);
    let overlap2 = r3.r.dot(r2.r);
    if overlap1.abs() > TOL_ORTH || overlap2.abs() > TOL_ORTH {
        return Err(Error::NotOrthogonal { overlap1, overlap2 });
    }
    Ok(ft_orthogonal_unchecked(r1.r, r2.r, r3.r))
}

fn ft_orthogonal_unchecked(r1: Vec3, r2: Vec3, r3: Vec3) -> Vec3 {
    let minus = (r1 - r2).norm();
    let plus = (r1 + r2).norm();
    let den = minus + plus;
    if den == 0.0 {
        // r1 = r2 = 0: every point between +-r3 is optimal
        return Vec3::ZERO;
    }
    r3 * ((minus - plus) / den)
}

/// Total distance predicted by the closed form,
/// `2 sqrt((|r1 - r2| + |r1 + r2|)^2 + 4 |r3|^2)`.
pub fn orthogonal_total(r1: &NoisyObservable, r2: &NoisyObservable, r3: &NoisyObservable) -> f64 {
    let sum = (r1.r - r2.r).norm() + (r1.r + r2.r).norm();
    2.0 * (sum * sum + 4.0 * r3.r.norm_squared()).sqrt()
}

/// Index of an observable orthogonal to the other two, if any.
fn orthogonal_slot(r: &[Vec3; 3]) -> Option<usize> {
    (0..3).rev().find(|&k| {
        let (a, b) = ((k + 1) % 3, (k + 2) % 3);
        r[k].dot(r[a]).abs() <= TOL_ORTH && r[k].dot(r[b]).abs() <= TOL_ORTH
    })
}

fn solve_ft(r: &[Vec3; 3], lambdas: &[Vec3; 4]) -> FtSolution {
    match orthogonal_slot(r) {
        Some(k) => {
            let (a, b) = ((k + 1) % 3, (k + 2) % 3);
            let ft = ft_orthogonal_unchecked(r[a], r[b], r[k]);
            FtSolution {
                ft,
                total_distance: total_distance(lambdas, ft),
                iterations: 0,
                converged: true,
                anchored_vertex: lambdas.iter().position(|l| *l == ft),
            }
        }
        None => fermat_toricelli(lambdas),
    }
}

/// Joint measurability of three unbiased noisy qubit observables. The
/// boundary total of exactly 4 counts as compatible.
pub fn triple_compatible(
    r1: &NoisyObservable,
    r2: &NoisyObservable,
    r3: &NoisyObservable,
) -> Result<TripleAssessment> {
    let r = [r1.r, r2.r, r3.r];
    let lambdas = lambdas_of(r[0], r[1], r[2]);
    let ft = solve_ft(&r, &lambdas);
    let assessment = TripleAssessment {
        r: [*r1, *r2, *r3],
        lambdas,
        ft,
        half_total: 0.5 * ft.total_distance,
        compatible: ft.total_distance <= 4.0 + TOL_CMP,
    };
    if !ft.converged {
        return Err(Error::NonConvergence {
            iterations: ft.iterations,
            partial: Box::new(assessment),
        });
    }
    Ok(assessment)
}

/// `2 |T|_F`, the value of the eigenvector measurement triple.
pub fn s3_lower_bound(s: &BellDiagonalState) -> f64 {
    2.0 * s.frobenius_norm()
}

/// Sufficient test: `|T|_F > 1`. A `false` means "not certified", not
/// "unsteerable".
pub fn steerable_by_three_sufficient(s: &BellDiagonalState) -> bool {
    s.frobenius_norm_squared() > 1.0 + TOL_CMP
}

/// Half total distance for Alice's directions `e`.
fn half_total_for(s: &BellDiagonalState, e: [Vec3; 3]) -> f64 {
    let r = e.map(|d| s.observable_for(d));
    let lambdas = lambdas_of(r[0], r[1], r[2]);
    0.5 * solve_ft(&r, &lambdas).total_distance
}

fn directions_from_angles(a: &[f64]) -> [Vec3; 3] {
    [
        Vec3::from_spherical(a[0], a[1]),
        Vec3::from_spherical(a[2], a[3]),
        Vec3::from_spherical(a[4], a[5]),
    ]
}

fn angles_from_directions(e: [Vec3; 3]) -> Vec<f64> {
    e.iter()
        .flat_map(|d| {
            let (th, ph) = d.to_spherical();
            [th, ph]
        })
        .collect()
}

/// Search settings for [`s3_search`].
#[derive(Clone, Copy, Debug)]
pub struct S3Config {
    pub restarts: usize,
    pub seed: u64,
    pub optimizer: NelderMead,
}

impl S3Config {
    pub fn new(restarts: usize, seed: u64) -> Self {
        S3Config {
            restarts,
            seed,
            optimizer: NelderMead {
                max_evals: 600,
                f_tol: 1e-11,
                x_tol: 1e-7,
                initial_step: 0.3,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct S3Estimate {
    pub value: f64,
    pub directions: [Vec3; 3],
    /// 0 is the eigenvector triple, 1 the two-measurement optimum with its
    /// second direction repeated, 2.. the random restarts.
    pub start_index: usize,
}

/// Multi-start Nelder-Mead over the six spherical angles of Alice's three
/// directions. Deterministic for a fixed seed, independent of thread count.
pub fn s3_search(s: &BellDiagonalState, config: &S3Config) -> Result<S3Estimate> {
    if config.restarts < 1 {
        return Err(Error::OutOfRange {
            what: "restarts",
            value: config.restarts as f64,
            range: ">= 1",
        });
    }
    let tt = s.correlation_matrix() * s.correlation_matrix().transpose();
    let eig = eig_sym3(&tt)?;
    let pair = optimal_directions_two(s);

    let mut starts: Vec<Vec<f64>> = vec![
        angles_from_directions(eig.vectors),
        angles_from_directions([pair.e1, pair.e2, pair.e2]),
    ];
    for k in 0..config.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(k as u64);
        let e: [Vec3; 3] = std::array::from_fn(|_| {
            let z: f64 = rng.random_range(-1.0..=1.0);
            let phi: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
            Vec3::from_spherical(z.acos(), phi)
        });
        starts.push(angles_from_directions(e));
    }

    let results: Vec<(f64, Vec<f64>)> = starts
        .par_iter()
        .map(|x0| {
            let m = config
                .optimizer
                .minimize(|a| -half_total_for(s, directions_from_angles(a)), x0);
            (-m.value, m.x)
        })
        .collect();

    let (start_index, (value, x)) = results
        .into_iter()
        .enumerate()
        .fold(None::<(usize, (f64, Vec<f64>))>, |best, (i, cand)| match best {
            Some((bi, b)) if b.0 >= cand.0 => Some((bi, b)),
            _ => Some((i, cand)),
        })
        .expect("at least two starts");
    Ok(S3Estimate {
        value,
        directions: directions_from_angles(&x),
        start_index,
    })
}

/// Best value of `S3` found by [`s3_search`].
pub fn s3_estimate(s: &BellDiagonalState, restarts: usize, seed: u64) -> Result<f64> {
    s3_search(s, &S3Config::new(restarts, seed)).map(|e| e.value)
}
