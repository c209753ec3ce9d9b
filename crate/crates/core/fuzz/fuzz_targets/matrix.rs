#![no_main]

use libfuzzer_sys::fuzz_target;
use fgcrypt::matrix::{format_matrices, format_matrix, parse_matrices, parse_matrix, parse_rational};

fuzz_target!(|data: &str| {
    let _ = parse_rational(data);
    if let Ok(m) = parse_matrix(data) {
        assert_eq!(parse_matrix(&format_matrix(&m)).unwrap(), m);
    }
    if let Ok(ms) = parse_matrices(data) {
        assert_eq!(parse_matrices(&format_matrices(&ms)).unwrap(), ms);
    }
});
