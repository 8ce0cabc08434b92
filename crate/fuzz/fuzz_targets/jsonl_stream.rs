#![no_main]

use libfuzzer_sys::fuzz_target;
use torelli::su2dyn::{read_jsonl, write_jsonl};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rows) = read_jsonl(text) {
        let mut buf = Vec::new();
        write_jsonl(&mut buf, rows.iter().cloned()).expect("in-memory write");
        let again = read_jsonl(std::str::from_utf8(&buf).unwrap()).expect("written stream reparses");
        assert_eq!(rows.len(), again.len());
    }
});
