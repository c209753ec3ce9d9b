#![no_main]

use libfuzzer_sys::fuzz_target;
use fgcrypt::cipher::{format_ciphertext, parse_ciphertext};
use fgcrypt::Alphabet;

fuzz_target!(|data: &str| {
    let a = Alphabet::latin(4);
    if let Ok(c) = parse_ciphertext(data, &a) {
        assert_eq!(parse_ciphertext(&format_ciphertext(&a, &c), &a).unwrap(), c);
    }
});
