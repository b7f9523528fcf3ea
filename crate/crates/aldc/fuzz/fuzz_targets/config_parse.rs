#![no_main]
// Experiment-config parsing and validation on arbitrary text.

use libfuzzer_sys::fuzz_target;

use aldc::harness::ExperimentConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ExperimentConfig::parse(text) {
        let _ = cfg.validate();
    }
});
