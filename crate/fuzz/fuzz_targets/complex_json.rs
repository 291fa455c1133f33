#![no_main]

use libfuzzer_sys::fuzz_target;
use nakayama_core::json::ComplexDoc;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = ComplexDoc::parse(s) {
        let _ = doc.build();
    }
});
