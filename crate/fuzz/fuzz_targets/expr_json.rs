#![no_main]
use libfuzzer_sys::fuzz_target;
use tangle_calc::{classify, validate, TangleExpr};

fuzz_target!(|data: &[u8]| {
    let Ok(e) = serde_json::from_slice::<TangleExpr>(data) else {
        return;
    };
    let json = serde_json::to_string(&e).unwrap();
    assert_eq!(serde_json::from_str::<TangleExpr>(&json).unwrap(), e);
    if validate(&e).is_ok() {
        let _ = classify(&e);
    }
});
