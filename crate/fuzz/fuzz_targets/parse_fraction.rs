#![no_main]
use libfuzzer_sys::fuzz_target;
use tangle_calc::Fraction;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(f) = s.parse::<Fraction>() {
            assert_eq!(f.to_string().parse::<Fraction>().unwrap(), f);
            assert_eq!(f.rotate().rotate(), f);
            if let Ok(cf) = f.continued_fraction() {
                assert!(!cf.is_empty());
            }
        }
    }
});
