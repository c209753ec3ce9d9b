#![no_main]

use libfuzzer_sys::fuzz_target;
use fgcrypt::nielsen::{format_moves, parse_moves};

fuzz_target!(|data: &str| {
    if let Ok(m) = parse_moves(data) {
        assert_eq!(parse_moves(&format_moves(&m)).unwrap(), m);
    }
});
