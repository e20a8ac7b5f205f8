#![no_main]
use libfuzzer_sys::fuzz_target;
use tangle_calc::{classify, classify_link, export_pd, is_valid, normalize, parse, Expr};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(e) = parse(s) else {
        return;
    };
    let printed = e.to_string();
    assert_eq!(parse(&printed).expect("printed text parses"), e);

    match e {
        Expr::Tangle(t) => {
            if is_valid(&t) {
                let nf = normalize(&t).expect("valid input normalizes").expr;
                assert_eq!(normalize(&nf).unwrap().expr, nf);
                let _ = classify(&t);
            }
        }
        Expr::Link(l) => {
            let _ = classify_link(&l);
            if tangle_calc::pd::crossing_count(&l) < 10_000 {
                if let Ok(pd) = export_pd(&l) {
                    assert_eq!(pd.signs.len(), pd.crossings.len());
                }
            }
        }
    }
});
