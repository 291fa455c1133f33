#![no_main]

use libfuzzer_sys::fuzz_target;
use nakayama_core::spanmorph::MorphId;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(id) = s.parse::<MorphId>() {
        let again: MorphId = id.to_string().parse().expect("display must reparse");
        assert_eq!(id, again);
    }
});
