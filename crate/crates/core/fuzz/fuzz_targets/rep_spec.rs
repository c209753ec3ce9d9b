#![no_main]

use libfuzzer_sys::fuzz_target;
use fgcrypt::matrix::{format_rep_spec, parse_rep_spec};

fuzz_target!(|data: &str| {
    if let Ok(spec) = parse_rep_spec(data) {
        let text = format_rep_spec(&spec);
        assert_eq!(format_rep_spec(&parse_rep_spec(&text).unwrap()), text);
    }
});
