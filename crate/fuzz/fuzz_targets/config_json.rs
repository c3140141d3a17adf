#![no_main]

use libfuzzer_sys::fuzz_target;
use wdl_cli::config::RunConfig;

fuzz_target!(|text: &str| {
    if let Ok(config) = RunConfig::from_json(text) {
        let json = config.canonical_json();
        let back = RunConfig::from_json(&json).expect("canonical json parses");
        // NaN cannot appear in JSON, so equality is exact
        assert_eq!(back.canonical_json(), json);
        let _ = config.state_spec();
    }
});
