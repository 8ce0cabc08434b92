#![no_main]

use libfuzzer_sys::fuzz_target;
use torelli::su2dyn::Hist;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(h) = Hist::from_csv(text) {
        let again = Hist::from_csv(&h.to_csv()).expect("written histogram reparses");
        assert_eq!(h.counts, again.counts);
    }
});
