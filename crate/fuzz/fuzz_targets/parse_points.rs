#![no_main]

use bellsteer::harness::io::parse_points;
use bellsteer::weiszfeld::fermat_toricelli;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(points) = parse_points(text) {
        assert!(points.iter().all(|p| p.is_finite()));
        let scale = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
        if scale.is_finite() && scale < 1e100 {
            let sol = fermat_toricelli(&points);
            for p in &points {
                let here = bellsteer::weiszfeld::total_distance(&points, *p);
                assert!(sol.total_distance <= here * (1.0 + 1e-9) + 1e-9);
            }
        }
    }
});
