#![no_main]

use libfuzzer_sys::fuzz_target;
use fgcrypt::automorphism::{format_automorphism, parse_automorphism};
use fgcrypt::Alphabet;

fuzz_target!(|data: &str| {
    let a = Alphabet::latin(3);
    if let Ok(f) = parse_automorphism(data, &a) {
        let text = format_automorphism(&a, &f);
        assert_eq!(format_automorphism(&a, &parse_automorphism(&text, &a).unwrap()), text);
    }
});
