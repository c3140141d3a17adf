#![no_main]

use libfuzzer_sys::fuzz_target;
use wdl_cli::config::GridSpec;

fuzz_target!(|text: &str| {
    if let Ok(spec) = text.parse::<GridSpec>() {
        let grid = spec.to_grid().expect("parsed grids are valid");
        assert!(grid.count >= 2 && grid.min < grid.max);
        assert_eq!(spec.to_string().parse::<GridSpec>().unwrap(), spec);
    }
});
