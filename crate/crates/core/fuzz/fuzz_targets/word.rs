#![no_main]

use libfuzzer_sys::fuzz_target;
use fgcrypt::Alphabet;

fuzz_target!(|data: &str| {
    let a = Alphabet::latin(4);
    if let Ok(w) = a.parse_word(data) {
        let text = a.format_word(&w);
        assert_eq!(a.parse_word(&text).unwrap(), w);
    }
    if let Ok(a) = Alphabet::from_names_line(data) {
        assert!(a.rank() > 0);
    }
});
