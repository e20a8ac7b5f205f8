mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use tangle_calc::fraction::frac;
use tangle_calc::*;

fn finite() -> impl Strategy<Value = Fraction> {
    (-500i64..=500, 1i64..=500).prop_map(|(p, q)| frac(p, q))
}

fn any_fraction() -> impl Strategy<Value = Fraction> {
    prop_oneof![9 => finite(), 1 => Just(Fraction::infinity())]
}

fn ratio(f: &Fraction) -> BigRational {
    BigRational::new(f.numer().clone(), f.denom().clone())
}

fn leaf() -> impl Strategy<Value = TangleExpr> {
    prop_oneof![
        6 => any_fraction().prop_map(TangleExpr::rational),
        2 => (-3i64..=3).prop_map(|n| r(2 * n + 1, 2)),
        1 => (1u64..=3, any::<bool>()).prop_map(|(n, v)| {
            TangleExpr::q(n, if v { Axis::Vertical } else { Axis::Horizontal })
        }),
    ]
}

fn expr() -> impl Strategy<Value = TangleExpr> {
    leaf().prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| TangleExpr::sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| TangleExpr::product(a, b)),
            inner.prop_map(TangleExpr::rot),
        ]
    })
}

fn valid_expr() -> impl Strategy<Value = TangleExpr> {
    expr().prop_filter("valid", is_valid)
}

proptest! {
    #[test]
    fn fraction_operations_match_rational_arithmetic(f in finite(), n in -50i64..=50) {
        let n_big = BigInt::from(n);
        prop_assert_eq!(ratio(&f.add_integer(&n_big)), ratio(&f) + BigRational::from_integer(n_big.clone()));
        prop_assert_eq!(ratio(&f.mirror()), -ratio(&f));
        if !f.is_zero() {
            prop_assert_eq!(ratio(&f.rotate()), -ratio(&f).recip());
        }
        // vertical twists are horizontal twists conjugated by a rotation
        prop_assert_eq!(
            f.add_vertical_twists(&n_big),
            f.rotate().add_integer(&-n_big).rotate()
        );
    }

    #[test]
    fn rotation_has_order_two(f in any_fraction()) {
        prop_assert_eq!(f.rotate().rotate(), f.clone());
        prop_assert_eq!(f.mirror().mirror(), f);
    }

    #[test]
    fn continued_fraction_evaluates_back(f in finite()) {
        let cf = f.continued_fraction().unwrap();
        let mut v = BigRational::from_integer(cf.last().unwrap().clone());
        for a in cf.iter().rev().skip(1) {
            v = BigRational::from_integer(a.clone()) + v.recip();
        }
        prop_assert_eq!(v, ratio(&f));
        prop_assert!(cf.iter().skip(1).all(|a| *a >= BigInt::from(1)));

        let tw = f.twist_sequence().unwrap();
        let mut v = BigRational::from_integer(tw.last().unwrap().clone());
        for a in tw.iter().rev().skip(1) {
            v = BigRational::from_integer(a.clone()) + v.recip();
        }
        prop_assert_eq!(v, ratio(&f));
    }

    #[test]
    fn fraction_text_round_trips(f in any_fraction()) {
        prop_assert_eq!(f.to_string().parse::<Fraction>().unwrap(), f.clone());
        let json = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<Fraction>(&json).unwrap(), f);
    }

    #[test]
    fn two_bridge_torus_rule(p in 2i64..200, q in 1i64..200) {
        let f = frac(p, q);
        let tb = f.two_bridge();
        let (pp, qq) = (f.numer().clone(), f.denom().clone());
        if pp >= BigInt::from(2) {
            let r = &qq % &pp;
            prop_assert_eq!(tb.torus, r == BigInt::from(1) || r == &pp - 1);
        }
    }

    #[test]
    fn print_parse_round_trip(e in expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse_tangle(&text).unwrap(), e.clone());
        let json = serde_json::to_string(&e).unwrap();
        prop_assert_eq!(serde_json::from_str::<TangleExpr>(&json).unwrap(), e);
    }

    #[test]
    fn normalization_is_idempotent_and_equivariant(e in valid_expr()) {
        let nf = normalize(&e).unwrap().expr;
        prop_assert_eq!(&normalize(&nf).unwrap().expr, &nf);
        prop_assert_eq!(normalize(&e.rotated()).unwrap().expr, nf.rotated());
        prop_assert_eq!(normalize(&e.mirrored()).unwrap().expr, nf.mirrored());
        prop_assert!(is_normal(&nf));
    }

    #[test]
    fn normalization_is_order_independent(e in valid_expr(), seed in any::<u64>()) {
        let nf = normalize(&e).unwrap().expr;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..4 {
            prop_assert_eq!(&normalize_shuffled(&e, &mut rng).expr, &nf);
        }
    }

    #[test]
    fn qsplit_is_sound(e in valid_expr()) {
        let nf = normalize(&e).unwrap().expr;
        for axis in Axis::BOTH {
            let s = qsplit(&nf, axis).unwrap();
            prop_assert_eq!(qsplit(&s.remainder, axis).unwrap().m, 0);
            prop_assert_eq!(&normalize(&s.reassemble()).unwrap().expr, &nf);
        }
        let m = max_q(&nf).unwrap();
        prop_assert_eq!(max_q(&normalize(&e.rotated()).unwrap().expr).unwrap(), m);
        prop_assert_eq!(max_q(&normalize(&e.mirrored()).unwrap().expr).unwrap(), m);
    }

    #[test]
    fn length_is_one_iff_rational(e in valid_expr()) {
        prop_assert_eq!(length_estimate(&e) == 1, is_rational_expr(&e));
    }

    #[test]
    fn verdicts_are_invariant(e in valid_expr()) {
        let v = classify(&e).unwrap();
        let kinds = |v: &Verdict| {
            let mut k: Vec<_> = v.reasons.iter().map(Reason::kind).collect();
            k.sort_unstable();
            k
        };
        for w in [classify(&e.rotated()).unwrap(), classify(&e.mirrored()).unwrap()] {
            prop_assert_eq!(w.status, v.status);
            prop_assert_eq!(kinds(&w), kinds(&v));
        }
        prop_assert_eq!(v.status == Status::Hyperbolic, v.reasons.is_empty());
        prop_assert!(v.census.spheres.is_empty());
    }

    #[test]
    fn invalid_input_never_panics(e in expr()) {
        let _ = validate(&e);
        let _ = normalize_unchecked(&e);
        let _ = classify(&e);
    }

    #[test]
    fn montesinos_mirror_invariance(
        rs in prop::collection::vec((-9i64..=9, 2i64..=9), 1..=5)
    ) {
        let rs: Vec<Fraction> = rs.into_iter().map(|(p, q)| frac(p, q)).collect();
        let mirrored: Vec<Fraction> = rs.iter().map(Fraction::mirror).collect();
        let a = classify_montesinos(&rs).unwrap();
        let b = classify_montesinos(&mirrored).unwrap();
        prop_assert_eq!(a.status, b.status);
        let mut rev = rs.clone();
        rev.reverse();
        prop_assert_eq!(canon_montesinos(&rev).unwrap(), canon_montesinos(&rs).unwrap());
        let mut rot = rs.clone();
        rot.rotate_left(1);
        prop_assert_eq!(canon_montesinos(&rot).unwrap(), canon_montesinos(&rs).unwrap());
    }

    #[test]
    fn pd_codes_are_valid(e in valid_expr()) {
        let l = LinkExpr::Numerator { tangle: e };
        if tangle_calc::pd::crossing_count(&l) < 2000 {
            let pd = export_pd(&l).unwrap();
            prop_assert!(arcs_appear_twice(&pd));
            prop_assert_eq!(pd.components, arc_cycle_components(&pd));
            prop_assert_eq!(pd.signs.len(), pd.crossings.len());
        }
    }

    #[test]
    fn rational_closures_have_parity_components(f in finite()) {
        let pd = export_pd(&LinkExpr::Numerator { tangle: TangleExpr::rational(f.clone()) }).unwrap();
        let expected = if (f.numer() % BigInt::from(2)).is_zero() { 2 } else { 1 };
        prop_assert_eq!(pd.components, expected);
        prop_assert_eq!(arc_cycle_components(&pd), expected);
    }
}

#[test]
fn enumeration_count_matches_brute_force() {
    use std::collections::HashSet;
    let alphabet = [frac(1, 2), frac(1, 3)];
    let brute: HashSet<TangleExpr> = all_exprs_up_to(3, &alphabet)
        .iter()
        .filter_map(|e| normalize(e).ok().map(|n| n.expr))
        .collect();
    assert_eq!(enumerate(3, &alphabet, 2).len(), brute.len());

    let alphabet = [frac(1, 2), frac(-1, 2), frac(1, 3), frac(-1, 3)];
    let brute: HashSet<TangleExpr> = all_exprs_up_to(3, &alphabet)
        .iter()
        .filter_map(|e| normalize(e).ok().map(|n| n.expr))
        .collect();
    assert_eq!(enumerate(3, &alphabet, 0).len(), brute.len());
}

#[test]
fn small_corpus_passes_the_invariant_suite() {
    let alphabet = [frac(1, 2), frac(-1, 2), frac(1, 3), frac(-1, 3)];
    let records = build_records(&enumerate(3, &alphabet, 0), 0).unwrap();
    let report = run_invariant_suite(&records, 0).unwrap();
    assert_eq!(report.failed(), 0, "{report:?}");
    assert!(records.iter().all(|r| r.checks.failed == 0));
}

#[test]
fn random_closures_match_the_cycle_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..100 {
        let e = random_valid_expr(&mut rng, 4);
        let pd = export_pd(&LinkExpr::Numerator { tangle: e.clone() }).unwrap();
        assert!(arcs_appear_twice(&pd), "{e}");
        assert_eq!(pd.components, arc_cycle_components(&pd), "{e}");
    }
}
