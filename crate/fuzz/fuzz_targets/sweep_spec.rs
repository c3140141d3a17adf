#![no_main]

use libfuzzer_sys::fuzz_target;
use wdl_cli::config::SweepSpec;

fuzz_target!(|text: &str| {
    if let Ok(spec) = text.parse::<SweepSpec>() {
        assert!(!spec.values.is_empty());
        assert!(spec.values.iter().all(|v| v.is_finite()));
    }
});
