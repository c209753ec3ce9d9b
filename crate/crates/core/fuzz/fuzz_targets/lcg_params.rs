#![no_main]

use libfuzzer_sys::fuzz_target;
use fgcrypt::keystream::{format_params, parse_params, parse_seed};

fuzz_target!(|data: &str| {
    let _ = parse_seed(data);
    if let Ok((lcg, seed)) = parse_params(data) {
        assert_eq!(parse_params(&format_params(&lcg, seed)).unwrap(), (lcg, seed));
    }
});
