#![no_main]

use libfuzzer_sys::fuzz_target;
use mmf_sseq::grading::{parse_expression, AtomTable};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let a = AtomTable::mmf();
    if let Ok(x) = parse_expression(text, &a) {
        assert_eq!(parse_expression(&x.render(&a), &a).unwrap(), x);
    }
});
