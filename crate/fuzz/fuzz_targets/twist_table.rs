#![no_main]

use libfuzzer_sys::fuzz_target;
use torelli::su2dyn::TwistTable;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = TwistTable::parse(text);
    }
});
