#![no_main]

use libfuzzer_sys::fuzz_target;
use nakayama_cli::config::{FileConfig, Overrides, RunConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(file) = FileConfig::parse(s) {
        let _ = RunConfig::resolve(file, Overrides::default());
    }
});
