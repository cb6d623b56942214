#![no_main]

use bellsteer::harness::io::parse_reals;
use bellsteer::BellDiagonalState;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_reals(text, 3) {
        assert!(t.iter().all(|x| x.is_finite()));
        if let Ok(s) = BellDiagonalState::from_t(t[0], t[1], t[2]) {
            let c = s.t();
            assert!(c.x >= c.y && c.y >= c.z.abs());
        }
    }
    if let Ok(p) = parse_reals(text, 4) {
        if let Ok(s) = BellDiagonalState::from_probabilities(p[0], p[1], p[2], p[3]) {
            assert!(s.probabilities().iter().all(|&q| q >= 0.0));
        }
    }
});
