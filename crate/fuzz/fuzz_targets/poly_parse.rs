#![no_main]

use libfuzzer_sys::fuzz_target;
use torelli::polyring::Poly;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = text.parse::<Poly>() {
        // printing is canonical, so it must parse back to the same polynomial
        let again: Poly = p.to_string().parse().expect("printed polynomial reparses");
        assert_eq!(p, again);
    }
});
