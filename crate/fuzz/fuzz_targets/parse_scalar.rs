#![no_main]

use connexa::cli::parse_scalar;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(s) = parse_scalar(text) {
            assert_eq!(parse_scalar(&s.to_string()).unwrap(), s);
        }
    }
});
