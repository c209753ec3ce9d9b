#![no_main]

use libfuzzer_sys::fuzz_target;
use fgcrypt::nielsen::{format_tuple, parse_tuple};

fuzz_target!(|data: &str| {
    if let Ok((a, t)) = parse_tuple(data, None) {
        let text = format!("alphabet = {}\n{}", a.names().join(" "), format_tuple(&a, &t));
        assert_eq!(parse_tuple(&text, None).unwrap().1, t);
    }
});
