#![no_main]

use libfuzzer_sys::fuzz_target;
use lmg_cli::codec::decode_spectrum_json;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(report) = decode_spectrum_json(s) {
        // an accepted report survives a round trip unchanged
        let text = serde_json::to_string(&report).unwrap();
        assert_eq!(decode_spectrum_json(&text).unwrap(), report);
    }
});
