#![no_main]

use libfuzzer_sys::fuzz_target;
use fgcrypt::pubkey::{format_matrix_pair, format_pair, parse_matrix_pair, parse_pair};
use fgcrypt::Alphabet;

fuzz_target!(|data: &str| {
    let a = Alphabet::indexed("x", 3);
    if let Ok(p) = parse_pair(data, &a) {
        assert_eq!(parse_pair(&format_pair(&a, &p), &a).unwrap(), p);
    }
    if let Ok(p) = parse_matrix_pair(data, &a) {
        let text = format_matrix_pair(&a, &p);
        assert_eq!(format_matrix_pair(&a, &parse_matrix_pair(&text, &a).unwrap()), text);
    }
});
