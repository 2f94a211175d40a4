#![no_main]

use coxforge::search::parse_alphabet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(labels) = parse_alphabet(text) {
            assert!(labels.windows(2).all(|w| w[0] < w[1]));
        }
    }
});
