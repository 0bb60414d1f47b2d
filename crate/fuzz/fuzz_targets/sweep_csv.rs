#![no_main]

use libfuzzer_sys::fuzz_target;
use lmg_cli::codec::decode_sweep_csv;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(rows) = decode_sweep_csv(s) {
        for r in rows {
            assert!(r.delta >= 0.0 && r.energy.is_finite());
            assert!(r.big_j <= r.j);
        }
    }
});
