#![no_main]

use libfuzzer_sys::fuzz_target;
use mmf_sseq::grading::{parse_formula, AtomTable};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let a = AtomTable::mmf();
    if let Ok(f) = parse_formula(text, &a) {
        let again = parse_formula(&f.render(&a), &a).unwrap();
        assert_eq!(again.expand(&a), f.expand(&a));
    }
});
