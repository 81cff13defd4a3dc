#![no_main]

use connexa::cli::parse_document;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(doc) = parse_document(text) {
            let out = doc.to_text();
            assert_eq!(parse_document(&out).unwrap(), doc);
        }
    }
});
