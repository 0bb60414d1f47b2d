#![no_main]

use libfuzzer_sys::fuzz_target;
use lmg_cli::config::{Parsed, RunConfig};

// Whitespace-separated argument lists. Only parsing and validation run here;
// executing a config could legitimately take minutes.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let args = std::iter::once("lmg").chain(s.split_whitespace());
    if let Ok(Parsed::Run(cfg)) = RunConfig::from_args(args) {
        assert!(cfg.n_particles >= 1);
        assert!(cfg.tolerance > 0.0);
        assert!(cfg.units.factor() > 0.0);
    }
});
