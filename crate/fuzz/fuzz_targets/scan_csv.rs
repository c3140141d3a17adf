#![no_main]

use libfuzzer_sys::fuzz_target;
use wdl_cli::output::read_scan;

fuzz_target!(|text: &str| {
    if let Ok(scan) = read_scan(text) {
        assert_eq!(scan.rows.len(), scan.grid.count);
    }
});
