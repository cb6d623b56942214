// Replays the checked-in fuzz seeds through the same entry points on stable.

use std::path::PathBuf;

use bellsteer::harness::io::{parse_points, parse_reals};
use bellsteer::{BellDiagonalState, Mat3};

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut files: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(!files.is_empty(), "no seeds in {}", dir.display());
    files.iter().map(|f| std::fs::read(f).unwrap()).collect()
}

#[test]
fn points_seeds() {
    let parsed: Vec<bool> = seeds("parse_points")
        .iter()
        .map(|d| parse_points(std::str::from_utf8(d).unwrap()).is_ok())
        .collect();
    assert!(parsed.contains(&true) && parsed.contains(&false));
}

#[test]
fn reals_seeds() {
    for d in seeds("parse_reals") {
        let text = std::str::from_utf8(&d).unwrap();
        if let Ok(t) = parse_reals(text, 3) {
            let _ = BellDiagonalState::from_t(t[0], t[1], t[2]);
        }
        let _ = parse_reals(text, 4);
    }
}

#[test]
fn state_seeds() {
    let mut valid = 0;
    for d in seeds("state_from_bytes") {
        let v: Vec<f64> = d.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
        let s = match v.len() {
            3 => BellDiagonalState::from_t(v[0], v[1], v[2]),
            4 => BellDiagonalState::from_probabilities(v[0], v[1], v[2], v[3]),
            9 => BellDiagonalState::from_correlation_matrix(&Mat3::new([
                [v[0], v[1], v[2]],
                [v[3], v[4], v[5]],
                [v[6], v[7], v[8]],
            ])),
            _ => continue,
        };
        valid += s.is_ok() as usize;
    }
    assert_eq!(valid, 3);
}
