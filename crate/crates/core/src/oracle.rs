//! Brute-force reference computations.
//!
//! Each function here takes the slow, obvious route to a quantity that the
//! rest of the crate computes more cleverly. They exist to cross-check the
//! fast paths and share no code with them beyond the graph type.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::graphs::Graph;

/// `|S_k|` counts from a step-by-step walk over signed positions.
pub fn folded_walk_counts_stepwise(k: usize) -> Vec<BigUint> {
    // position x stored at index x + k
    let mut ways = vec![BigUint::zero(); 2 * k + 1];
    ways[k] = BigUint::one();
    for _ in 0..k {
        let mut next = vec![BigUint::zero(); 2 * k + 1];
        for (i, w) in ways.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            if i > 0 {
                next[i - 1] += w;
            }
            if i + 1 < next.len() {
                next[i + 1] += w;
            }
        }
        ways = next;
    }
    let mut folded = vec![BigUint::zero(); k + 1];
    for (i, w) in ways.into_iter().enumerate() {
        folded[i.abs_diff(k)] += w;
    }
    folded
}

/// `(P(|A|<|B|), P(|A|=|B|), P(|A|>|B|))` by listing every sign sequence of
/// the `a + b` steps. Exponential; keep `a + b` small.
pub fn walk_compare_enumerated(a: usize, b: usize) -> (BigRational, BigRational, BigRational) {
    assert!(a + b <= 24, "enumeration of 2^{} sequences refused", a + b);
    let (mut less, mut equal, mut greater) = (0u64, 0u64, 0u64);
    for signs in 0u64..1 << (a + b) {
        let pos = |range: std::ops::Range<usize>| -> i64 {
            range.map(|i| if signs >> i & 1 == 1 { 1 } else { -1 }).sum()
        };
        let (sa, sb) = (pos(0..a).abs(), pos(a..a + b).abs());
        match sa.cmp(&sb) {
            std::cmp::Ordering::Less => less += 1,
            std::cmp::Ordering::Equal => equal += 1,
            std::cmp::Ordering::Greater => greater += 1,
        }
    }
    let total = BigInt::one() << (a + b);
    let f = |x: u64| BigRational::new(x.into(), total.clone());
    (f(less), f(equal), f(greater))
}

/// Indices whose `Bin(n, p)` weight is within relative `1e-12` of the largest,
/// from a direct product-form evaluation.
pub fn binomial_argmax_set(n: u64, p: f64) -> Vec<u64> {
    let weight = |k: u64| -> f64 {
        // C(n,k) p^k (1-p)^(n-k) via a running product in log space
        let mut ln = 0.0;
        for i in 0..k {
            ln += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
        }
        if p == 0.0 {
            return if k == 0 { 1.0 } else { 0.0 };
        }
        (ln + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp()
    };
    let w: Vec<f64> = (0..=n).map(weight).collect();
    let max = w.iter().cloned().fold(0.0, f64::max);
    (0..=n).filter(|&k| w[k as usize] >= max * (1.0 - 1e-12)).collect()
}

/// Exact `P({u,v} monochrome)` after one step, enumerating every initial
/// assignment and every outcome of every tie coin in the graph.
pub fn monochrome_probability_full(g: &Graph, u: usize, v: usize) -> BigRational {
    let n = g.n();
    assert!(n <= 10, "full enumeration limited to 10 vertices");
    let mut num = BigInt::zero();
    let mut den = BigInt::zero();
    for types in 0u32..1 << n {
        let plus = |w: usize| types >> w & 1 == 1;
        let mut next = vec![false; n];
        let mut tied = Vec::new();
        for (w, slot) in next.iter_mut().enumerate() {
            let deg = g.degree(w);
            let same = g.neighbors(w).iter().filter(|&&x| plus(x) == plus(w)).count();
            *slot = if deg == 0 || 2 * same > deg {
                plus(w)
            } else if 2 * same < deg {
                !plus(w)
            } else {
                tied.push(w);
                plus(w)
            };
        }
        // every coin outcome has weight 2^-|tied|; scale to a common 2^n
        let scale = BigInt::one() << (n - tied.len());
        for coins in 0u32..1 << tied.len() {
            let mut out = next.clone();
            for (i, &w) in tied.iter().enumerate() {
                if coins >> i & 1 == 1 {
                    out[w] = !out[w];
                }
            }
            if out[u] == out[v] {
                num += &scale;
            }
            den += &scale;
        }
    }
    BigRational::new(num, den)
}

/// Quartiles by the median-of-halves rule, recomputed from a fresh sort.
/// Returns `(q25, median, q75)`.
pub fn quartiles_by_sort(values: &[f64]) -> (f64, f64, f64) {
    assert!(!values.is_empty());
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    fn mid(s: &[f64]) -> f64 {
        let l = s.len();
        if l % 2 == 1 {
            s[l / 2]
        } else {
            (s[l / 2 - 1] + s[l / 2]) / 2.0
        }
    }
    let l = v.len();
    if l == 1 {
        return (v[0], v[0], v[0]);
    }
    let lower = &v[..l / 2];
    let upper = &v[l - l / 2..];
    (mid(lower), mid(&v), mid(upper))
}
