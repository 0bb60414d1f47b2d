#![no_main]

use libfuzzer_sys::fuzz_target;
use lmg_core::exact::Shift;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = s.parse::<Shift>() {
        let back: Shift = c.to_string().parse().unwrap();
        assert_eq!(back, c);
        assert!(c.to_f64().is_finite());
    }
});
