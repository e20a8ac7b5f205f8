#![no_main]
use libfuzzer_sys::fuzz_target;
use tangle_calc::{classify_link, LinkExpr};

fuzz_target!(|data: &[u8]| {
    if let Ok(l) = serde_json::from_slice::<LinkExpr>(data) {
        let json = serde_json::to_string(&l).unwrap();
        assert_eq!(serde_json::from_str::<LinkExpr>(&json).unwrap(), l);
        let _ = classify_link(&l);
    }
});
