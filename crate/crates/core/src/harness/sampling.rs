//! Uniform sampling over the tetrahedron of Bell-diagonal states.
//!
//! Bell weights are drawn from the flat Dirichlet distribution (normalized
//! standard exponentials). Each index owns its own ChaCha stream, so draw `i`
//! depends only on `(seed, i)` and never on how the range is split up.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::state::BellDiagonalState;

pub fn sample_state(seed: u64, index: u64) -> BellDiagonalState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let w: [f64; 4] = std::array::from_fn(|_| Exp1.sample(&mut rng));
    let total: f64 = w.iter().sum();
    let p = w.map(|x| x / total);
    BellDiagonalState::from_probabilities(p[0], p[1], p[2], p[3])
        .expect("normalized Dirichlet weights are a valid mixture")
}

/// Lazily yields states `0..n`.
pub fn sample_states(n: usize, seed: u64) -> impl Iterator<Item = BellDiagonalState> {
    (0..n as u64).map(move |i| sample_state(seed, i))
}

/// States `0..n`, generated in parallel, in index order.
pub fn sample_states_vec(n: usize, seed: u64) -> Vec<BellDiagonalState> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| sample_state(seed, i))
        .collect()
}
