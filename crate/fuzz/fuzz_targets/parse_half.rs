#![no_main]

use libfuzzer_sys::fuzz_target;
use lmg_core::Half;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(h) = s.parse::<Half>() {
        // display is canonical and parses back to the same value
        let shown = h.to_string();
        assert_eq!(shown.parse::<Half>().unwrap(), h);
    }
});
