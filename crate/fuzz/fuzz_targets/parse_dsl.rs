#![no_main]

use coxforge::dsl::{parse, render};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = parse(text) {
        let again = parse(&render(&m)).expect("rendered text parses");
        assert_eq!(again, m);
    }
});
