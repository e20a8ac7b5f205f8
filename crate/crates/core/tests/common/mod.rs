#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use tangle_calc::fraction::frac;
use tangle_calc::{is_valid, Axis, Fraction, PdCode, TangleExpr};

pub fn r(p: i64, q: i64) -> TangleExpr {
    TangleExpr::rational(frac(p, q))
}

pub fn random_fraction(rng: &mut impl Rng) -> Fraction {
    match rng.gen_range(0..10) {
        0 => Fraction::infinity(),
        1 => frac(rng.gen_range(-4..=4), 1),
        2 => frac(if rng.gen() { 1 } else { -1 }, rng.gen_range(1..=5)),
        3 => frac(2 * rng.gen_range(-3..=3) + 1, 2),
        4 => frac(2, 2 * rng.gen_range(0..=3) + 1),
        _ => {
            let q = rng.gen_range(1..=12);
            let p = rng.gen_range(-30..=30);
            frac(p, q)
        }
    }
}

fn random_axis(rng: &mut impl Rng) -> Axis {
    if rng.gen() {
        Axis::Vertical
    } else {
        Axis::Horizontal
    }
}

/// A random expression; may be invalid.
pub fn random_expr(rng: &mut impl Rng, depth: u32, with_rot: bool) -> TangleExpr {
    let leaf = depth == 0 || rng.gen_ratio(1, 4);
    if leaf {
        return if rng.gen_ratio(1, 6) {
            TangleExpr::q(rng.gen_range(0..=3), random_axis(rng))
        } else {
            TangleExpr::rational(random_fraction(rng))
        };
    }
    match rng.gen_range(0..if with_rot { 9 } else { 8 }) {
        0..=3 => TangleExpr::sum(
            random_expr(rng, depth - 1, with_rot),
            random_expr(rng, depth - 1, with_rot),
        ),
        4..=7 => TangleExpr::product(
            random_expr(rng, depth - 1, with_rot),
            random_expr(rng, depth - 1, with_rot),
        ),
        _ => TangleExpr::rot(random_expr(rng, depth - 1, with_rot)),
    }
}

pub fn random_valid_expr(rng: &mut impl Rng, depth: u32) -> TangleExpr {
    loop {
        let e = random_expr(rng, depth, true);
        if is_valid(&e) {
            return e;
        }
    }
}

/// Every Sum/Product expression with exactly `k` leaves over `alphabet`,
/// duplicates included.
pub fn all_exprs(k: usize, alphabet: &[Fraction]) -> Vec<TangleExpr> {
    if k == 1 {
        return alphabet.iter().cloned().map(TangleExpr::rational).collect();
    }
    let mut out = Vec::new();
    for left in 1..k {
        let ls = all_exprs(left, alphabet);
        let rs = all_exprs(k - left, alphabet);
        for a in &ls {
            for b in &rs {
                out.push(TangleExpr::sum(a.clone(), b.clone()));
                out.push(TangleExpr::product(a.clone(), b.clone()));
            }
        }
    }
    out
}

pub fn all_exprs_up_to(max: usize, alphabet: &[Fraction]) -> Vec<TangleExpr> {
    (1..=max).flat_map(|k| all_exprs(k, alphabet)).collect()
}

/// Component count of a PD code from its tuples alone: each crossing joins
/// arcs `a, c` and arcs `b, d`.
pub fn arc_cycle_components(pd: &PdCode) -> usize {
    let n = 2 * pd.crossings.len();
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &[a, b, c, d] in &pd.crossings {
        for (x, y) in [(a, c), (b, d)] {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            parent[rx] = ry;
        }
    }
    let roots = (1..=n).filter(|&x| find(&mut parent, x) == x).count();
    roots + pd.free_loops
}

/// Every arc label `1..=2n` occurs exactly twice.
pub fn arcs_appear_twice(pd: &PdCode) -> bool {
    let n = 2 * pd.crossings.len();
    let mut count = vec![0; n + 1];
    for x in &pd.crossings {
        for &a in x {
            if a == 0 || a > n {
                return false;
            }
            count[a] += 1;
        }
    }
    count[1..].iter().all(|&c| c == 2)
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}
