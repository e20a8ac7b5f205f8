#![no_main]
use libfuzzer_sys::fuzz_target;
use tangle_calc::{read_jsonl, run_invariant_suite};

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = read_jsonl(data) {
        if records.len() <= 16 {
            let _ = run_invariant_suite(&records, 1);
        }
    }
});
