#![no_main]

use libfuzzer_sys::fuzz_target;
use fgcrypt::cipher::{format_key_file, key_file_alphabet, parse_key_file};

fuzz_target!(|data: &str| {
    let _ = key_file_alphabet(data);
    if let Ok((p, k)) = parse_key_file(data) {
        let text = format_key_file(&p, &k);
        assert_eq!(parse_key_file(&text).unwrap().1, k);
    }
});
