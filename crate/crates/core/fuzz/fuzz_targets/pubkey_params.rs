#![no_main]

use libfuzzer_sys::fuzz_target;
use fgcrypt::pubkey::{format_pubkey_params, parse_pubkey_params};

fuzz_target!(|data: &str| {
    let no_files = |_: &str| Err(std::io::Error::from(std::io::ErrorKind::NotFound));
    if let Ok(p) = parse_pubkey_params(data, &no_files) {
        let text = format_pubkey_params(&p);
        assert_eq!(format_pubkey_params(&parse_pubkey_params(&text, &no_files).unwrap()), text);
    }
});
