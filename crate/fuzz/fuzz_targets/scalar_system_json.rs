#![no_main]

use libfuzzer_sys::fuzz_target;
use nakayama_core::json::ScalarDoc;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = ScalarDoc::parse(s) {
        if let Ok(alg) = doc.algebra.build() {
            if let Ok(sys) = doc.to_system(&alg) {
                let _ = sys.validate(&alg);
            }
        }
    }
});
