#![no_main]

use bellsteer::harness::report::report;
use bellsteer::steering_two::{chsh_max, steerable_by_two, steering_measure};
use bellsteer::steering_three::steerable_by_three_sufficient;
use bellsteer::{BellDiagonalState, Mat3};
use libfuzzer_sys::fuzz_target;

fn reals(data: &[u8]) -> impl Iterator<Item = f64> + '_ {
    data.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap()))
}

fuzz_target!(|data: &[u8]| {
    let v: Vec<f64> = reals(data).collect();
    let state = match v.len() {
        3 => BellDiagonalState::from_t(v[0], v[1], v[2]),
        4 => BellDiagonalState::from_probabilities(v[0], v[1], v[2], v[3]),
        9 => BellDiagonalState::from_correlation_matrix(&Mat3::new([
            [v[0], v[1], v[2]],
            [v[3], v[4], v[5]],
            [v[6], v[7], v[8]],
        ])),
        _ => return,
    };
    if let Ok(s) = state {
        assert_eq!(chsh_max(&s).to_bits(), steering_measure(&s).to_bits());
        if steerable_by_two(&s) {
            assert!(steerable_by_three_sufficient(&s));
        }
        let r = report(&s, false, 0).unwrap();
        assert!(r.concurrence >= 0.0 && r.concurrence <= 1.0);
    }
});
