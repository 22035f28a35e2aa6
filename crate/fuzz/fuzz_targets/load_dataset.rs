#![no_main]

use libfuzzer_sys::fuzz_target;
use mmf_sseq::mmfdata::{load_dataset, validate_dataset};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(d) = load_dataset(text) {
        let _ = validate_dataset(&d);
        let again = load_dataset(&d.to_json()).expect("serialized dataset reloads");
        assert_eq!(again.to_json(), d.to_json());
    }
});
