#![no_main]

use libfuzzer_sys::fuzz_target;
use torelli::su2dyn::Word;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(w) = text.parse::<Word>() {
        let again: Word = w.to_string().parse().expect("printed word reparses");
        assert_eq!(w, again);
        assert!(w.concat(&w.inverse()).is_empty());
    }
});
