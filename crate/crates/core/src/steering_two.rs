//! Steering with two projective measurements on the steering side.
//!
//! Two unbiased noisy qubit observables `r1`, `r2` are jointly measurable iff
//! `|r1 + r2| + |r1 - r2| <= 2`. Maximizing the left side over Alice's two
//! measurement directions gives `S = 2 sqrt(l1 + l2)` with `l1 >= l2` the
//! top eigenvalues of `T T^T`; the state is steerable iff `S > 2`. The same
//! number is the maximal CHSH value of the state.

use std::f64::consts::SQRT_2;

use crate::linalg::{eig_sym3, Vec3};
use crate::state::{BellDiagonalState, NoisyObservable};

/// Slack added to the unsteerable/compatible side of every strict comparison.
pub const TOL_CMP: f64 = 1e-12;

/// `|r1 + r2| + |r1 - r2|`.
pub fn pair_incompatibility(r1: &NoisyObservable, r2: &NoisyObservable) -> f64 {
    (r1.r + r2.r).norm() + (r1.r - r2.r).norm()
}

/// Joint measurability of two unbiased noisy qubit observables.
pub fn pair_compatible(r1: &NoisyObservable, r2: &NoisyObservable) -> bool {
    pair_incompatibility(r1, r2) <= 2.0 + TOL_CMP
}

/// `l1 + l2` for the canonical triple.
fn top_two_eigenvalue_sum(s: &BellDiagonalState) -> f64 {
    let t = s.t();
    t.x * t.x + t.y * t.y
}

/// Steering measure under two projective measurements, `2 sqrt(l1 + l2)`.
pub fn steering_measure(s: &BellDiagonalState) -> f64 {
    2.0 * top_two_eigenvalue_sum(s).sqrt()
}

/// Maximal CHSH value; identical to [`steering_measure`] for this family.
pub fn chsh_max(s: &BellDiagonalState) -> f64 {
    steering_measure(s)
}

/// Steerable by two projective measurements iff `l1 + l2 > 1`. The boundary
/// `S = 2` is unsteerable.
pub fn steerable_by_two(s: &BellDiagonalState) -> bool {
    top_two_eigenvalue_sum(s) > 1.0 + TOL_CMP
}

/// `max(0, (S - 2)/(2 sqrt 2 - 2))`, which is 0 for unsteerable states and 1
/// for Bell states.
pub fn normalized_steering(s: &BellDiagonalState) -> f64 {
    ((steering_measure(s) - 2.0) / (2.0 * SQRT_2 - 2.0)).clamp(0.0, 1.0)
}

/// Mutually unbiased optimal directions: eigenvectors of the two largest
/// eigenvalues of `T T^T`. In the canonical frame these are the x and y axes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalPair {
    pub e1: Vec3,
    pub e2: Vec3,
    pub s: f64,
}

pub fn optimal_directions_two(s: &BellDiagonalState) -> OptimalPair {
    let t = s.correlation_matrix();
    let eig = eig_sym3(&(t * t.transpose())).expect("T T^T is symmetric");
    OptimalPair {
        e1: eig.vectors[0],
        e2: eig.vectors[1],
        s: steering_measure(s),
    }
}

/// Membership of the canonical triple in the cylinders
/// `t1^2+t2^2 <= 1`, `t2^2+t3^2 <= 1`, `t3^2+t1^2 <= 1`.
pub fn cylinder_membership(s: &BellDiagonalState) -> [bool; 3] {
    let [a, b, c] = s.ttt_eigenvalues();
    [a + b, b + c, c + a].map(|v| v <= 1.0 + TOL_CMP)
}
