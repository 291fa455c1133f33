#![no_main]

use libfuzzer_sys::fuzz_target;
use nakayama_core::catalog::CatalogId;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(id) = s.parse::<CatalogId>() {
        let again: CatalogId = id.to_string().parse().expect("display must reparse");
        assert_eq!(id, again);
        for (r, n) in [(1, 2), (2, 3), (3, 4)] {
            let _ = id.check(r, n);
        }
    }
});
