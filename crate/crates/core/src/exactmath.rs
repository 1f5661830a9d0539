//! Closed-form and exact evaluation of the binomial, random-walk and
//! geometric quantities behind the monochrome-edge bounds.
//!
//! Combinatorial quantities with fair coins are computed exactly as
//! `BigRational`. Binomial laws with a floating-point `p` use exact binomial
//! coefficients up to `n = 64` and log-space evaluation beyond that.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{param, Error, Result};

/// Largest `a + b` accepted by [`rw_abs_compare`].
pub const MAX_WALK_STEPS: usize = 4000;

/// Up to this `n` binomial coefficients are evaluated exactly.
const EXACT_BINOMIAL_LIMIT: u64 = 64;

/// A law on consecutive integers `offset, offset + 1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    pub offset: i64,
    pub weights: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn pmf(&self, k: i64) -> f64 {
        usize::try_from(k - self.offset)
            .ok()
            .and_then(|i| self.weights.get(i).copied())
            .unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Smallest index attaining the largest weight.
    pub fn argmax(&self) -> i64 {
        let mut best = 0;
        for (i, &w) in self.weights.iter().enumerate() {
            if w > self.weights[best] {
                best = i;
            }
        }
        self.offset + best as i64
    }
}

fn check_prob(p: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(param(format!("{name} = {p} outside [0, 1]")));
    }
    Ok(())
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn binomial_u64(n: u64, k: u64) -> u64 {
    // exact for n <= 64: every intermediate C(n-k+i+1, i+1)·(i+1) stays < 2^128
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

fn ln_binomial(n: u64, k: u64) -> f64 {
    statrs::function::factorial::ln_binomial(n, k)
}

fn pmf_unchecked(n: u64, p: f64, k: u64) -> f64 {
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    if n <= EXACT_BINOMIAL_LIMIT {
        binomial_u64(n, k) as f64 * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
    } else {
        (ln_binomial(n, k) + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()).exp()
    }
}

/// `P(X = k)` for `X ~ Bin(n, p)`.
pub fn binom_pmf(n: u64, p: f64, k: u64) -> Result<f64> {
    check_prob(p, "p")?;
    if k > n {
        return Err(param(format!("k = {k} exceeds n = {n}")));
    }
    Ok(pmf_unchecked(n, p, k))
}

/// The full law of `Bin(n, p)` on `0..=n`.
pub fn binom_distribution(n: u64, p: f64) -> Result<DiscreteDistribution> {
    check_prob(p, "p")?;
    Ok(DiscreteDistribution {
        offset: 0,
        weights: (0..=n).map(|k| pmf_unchecked(n, p, k)).collect(),
    })
}

/// Exact `P(X = k)` for a rational success probability.
pub fn binom_pmf_exact(n: u64, p: &BigRational, k: u64) -> Result<BigRational> {
    if p < &BigRational::zero() || p > &BigRational::one() {
        return Err(param(format!("p = {p} outside [0, 1]")));
    }
    if k > n {
        return Err(param(format!("k = {k} exceeds n = {n}")));
    }
    let q = BigRational::one() - p;
    let c = BigRational::from_integer(binomial(n, k).into());
    Ok(c * num_traits::pow(p.clone(), k as usize) * num_traits::pow(q, (n - k) as usize))
}

/// `⌊p(n+1)⌋`, the index of a largest `Bin(n, p)` weight. Requires `p < 1`.
pub fn binomial_mode(n: u64, p: f64) -> Result<u64> {
    if n < 1 {
        return Err(param("mode needs n >= 1"));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(param(format!("mode needs 0 <= p < 1, got {p}")));
    }
    Ok((p * (n + 1) as f64).floor() as u64)
}

/// Outcome probabilities when comparing two independent variables `X`, `Y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub greater_or_equal: f64,
    pub greater: f64,
    pub equal: f64,
}

/// `P(X ≥ Y)`, `P(X > Y)`, `P(X = Y)` for independent `X ~ Bin(n,p)`, `Y ~ Bin(n,q)`.
pub fn binom_ge_prob(n: u64, p: f64, q: f64) -> Result<Comparison> {
    let x = binom_distribution(n, p)?;
    let y = binom_distribution(n, q)?;
    let mut below = 0.0; // P(Y < i)
    let mut greater = 0.0;
    let mut equal = 0.0;
    for (px, py) in x.weights.iter().zip(&y.weights) {
        greater += px * below;
        equal += px * py;
        below += py;
    }
    Ok(Comparison {
        greater_or_equal: greater + equal,
        greater,
        equal,
    })
}

/// Exact version of [`binom_ge_prob`] for rational `p`, `q`.
/// Returns `(P(X ≥ Y), P(X > Y), P(X = Y))`.
pub fn binom_ge_prob_exact(
    n: u64,
    p: &BigRational,
    q: &BigRational,
) -> Result<(BigRational, BigRational, BigRational)> {
    let x: Vec<_> = (0..=n).map(|k| binom_pmf_exact(n, p, k)).collect::<Result<_>>()?;
    let y: Vec<_> = (0..=n).map(|k| binom_pmf_exact(n, q, k)).collect::<Result<_>>()?;
    let mut below = BigRational::zero();
    let mut greater = BigRational::zero();
    let mut equal = BigRational::zero();
    for (px, py) in x.iter().zip(&y) {
        greater += px * &below;
        equal += px * py;
        below += py;
    }
    Ok((&greater + &equal, greater, equal))
}

/// Finite-n Stirling bound on the largest `Bin(n, p)` weight:
/// `1 / (sqrt(2πd) · (1 − d/n)^d)` with `d = ⌊p(n+1)⌋`, defined for `2 ≤ d < n`.
pub fn binom_collision_upper_bound(n: u64, p: f64) -> Result<f64> {
    check_prob(p, "p")?;
    let d = (p * (n + 1) as f64).floor();
    if d < 2.0 || d >= n as f64 {
        return Err(Error::Domain(format!(
            "collision bound needs 2 <= d < n, got d = {d}, n = {n}"
        )));
    }
    let d_over_n = d / n as f64;
    Ok(1.0 / ((2.0 * PI * d).sqrt() * (1.0 - d_over_n).powf(d)))
}

/// `P(X > 1)` for `X ~ Bin(n, p)` and its lower bound `1 − e^{−c}(1 + c·e^{c/n})`, `c = pn`.
pub fn prob_gt_one_and_bound(n: u64, p: f64) -> Result<(f64, f64)> {
    check_prob(p, "p")?;
    if n < 1 {
        return Err(param("n must be at least 1"));
    }
    let nf = n as f64;
    let (none, one) = if p == 1.0 {
        (0.0, if n == 1 { 1.0 } else { 0.0 })
    } else {
        let log_q = (-p).ln_1p();
        ((nf * log_q).exp(), nf * p * ((nf - 1.0) * log_q).exp())
    };
    let exact = 1.0 - none - one;
    let c = p * nf;
    let bound = 1.0 - (-c).exp() * (1.0 + c * (c / nf).exp());
    Ok((exact, bound))
}

/// Counts of `|S_k| = j` for a ±1 walk of `k` steps, indexed by `j` in `0..=k`.
/// Total is `2^k`. Built from `S_k = 2·Bin(k, 1/2) − k`.
pub fn folded_walk_counts(k: usize) -> Vec<BigUint> {
    let mut counts = vec![BigUint::zero(); k + 1];
    let mut c = BigUint::one();
    for i in 0..=k {
        let j = (2 * i).abs_diff(k);
        counts[j] += &c;
        c = c * (k - i) / (i + 1);
    }
    counts
}

/// Exact comparison of `|A|` and `|B|` for independent walks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkComparison {
    pub less: BigRational,
    pub equal: BigRational,
    pub greater: BigRational,
}

/// `P(|A| < |B|)`, `P(|A| = |B|)`, `P(|A| > |B|)` for independent ±1 walks
/// of `a` and `b` steps.
pub fn rw_abs_compare(a: usize, b: usize) -> Result<WalkComparison> {
    if a + b > MAX_WALK_STEPS {
        return Err(Error::Capacity {
            what: "walk steps a + b",
            got: a + b,
            limit: MAX_WALK_STEPS,
        });
    }
    let fa = folded_walk_counts(a);
    let fb = folded_walk_counts(b);
    // above[j] = #{|B| > j}
    let mut above = vec![BigUint::zero(); a + 1];
    let mut running = BigUint::zero();
    for j in (0..=b).rev() {
        if j <= a {
            above[j] = running.clone();
        }
        running += &fb[j];
    }
    // for j > b nothing of B lies above
    let mut less = BigUint::zero();
    let mut equal = BigUint::zero();
    for (j, ca) in fa.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        less += ca * &above[j];
        if let Some(cb) = fb.get(j) {
            equal += ca * cb;
        }
    }
    let total = BigUint::one() << (a + b);
    let greater = &total - &less - &equal;
    let frac = |x: BigUint| BigRational::new(x.into(), total.clone().into());
    Ok(WalkComparison {
        less: frac(less),
        equal: frac(equal),
        greater: frac(greater),
    })
}

/// `P(Bin(k, 1/2) = k/2)`, zero for odd `k`.
fn central_weight(k: usize) -> BigRational {
    if k % 2 == 1 {
        return BigRational::zero();
    }
    BigRational::new(
        binomial(k as u64, k as u64 / 2).into(),
        (BigUint::one() << k).into(),
    )
}

/// Lower bound `1/2 − P(Z = (a+b)/2) + P(X = a/2)·P(Y = b/2)/2` on
/// `P(|A| < |B|)`, with `X, Y, Z` fair binomials of `a`, `b`, `a+b` trials.
pub fn rw_lower_bound(a: usize, b: usize) -> Result<BigRational> {
    if a > b {
        return Err(param(format!("lower bound needs a <= b, got a = {a}, b = {b}")));
    }
    let half = BigRational::new(1.into(), 2.into());
    Ok(&half - central_weight(a + b) + central_weight(a) * central_weight(b) * &half)
}

/// Areas of the four regions cut out of the torus by the disks around the
/// endpoints of an edge at normalized distance `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionMeasures {
    pub mu_common: f64,
    pub mu_u_exclusive: f64,
    pub mu_v_exclusive: f64,
    pub mu_outside: f64,
    pub tau: f64,
}

/// Lens area between two radius-`r` disks at distance `tau·r`, with
/// `πr² = avg_degree/(n−1)`.
pub fn region_measures(n: usize, avg_degree: f64, tau: f64) -> Result<RegionMeasures> {
    if n < 2 {
        return Err(param(format!("need n >= 2, got {n}")));
    }
    if !(avg_degree > 0.0 && avg_degree.is_finite()) {
        return Err(param(format!("average degree must be positive, got {avg_degree}")));
    }
    if !(0.0..=2.0).contains(&tau) {
        return Err(param(format!("tau = {tau} outside [0, 2]")));
    }
    let disk = avg_degree / (n - 1) as f64;
    let angle = 2.0 * (tau / 2.0).acos();
    let mu_common = (disk / PI * (angle - angle.sin())).max(0.0);
    let mu_exclusive = disk - mu_common;
    Ok(RegionMeasures {
        mu_common,
        mu_u_exclusive: mu_exclusive,
        mu_v_exclusive: mu_exclusive,
        mu_outside: 1.0 - mu_common - 2.0 * mu_exclusive,
        tau,
    })
}

/// Fraction of random geometric graph edges with normalized length at most
/// `tau`: `tau²`, clamped to `[0, 1]`.
pub fn edge_within_tau_fraction(tau: f64) -> f64 {
    tau.clamp(0.0, 1.0).powi(2)
}

/// A lower bound whose asymptotic `(1 − o(1))` factor was left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticBound {
    pub value: f64,
    /// Always set: `value` is a reference line, not a finite-n guarantee.
    pub vanishing_factor_dropped: bool,
}

/// The two degree-dependent factors of the monochrome lower bound:
/// `(1/2 − 1/sqrt(2π⌊d/2⌋))²` and `1 − e^{−d/2}(1 + d/2)`.
pub fn theorem1_factors(avg_degree: f64) -> Result<(f64, f64)> {
    if !avg_degree.is_finite() || avg_degree < 2.0 {
        return Err(Error::Domain(format!(
            "bound needs average degree >= 2, got {avg_degree}"
        )));
    }
    let half_floor = (avg_degree / 2.0).floor();
    let f1 = (0.5 - 1.0 / (2.0 * PI * half_floor).sqrt()).powi(2);
    let h = avg_degree / 2.0;
    let f2 = 1.0 - (-h).exp() * (1.0 + h);
    Ok((f1, f2))
}

/// Lower bound on the expected monochrome fraction after one step on a
/// random geometric graph: `1/2 + (9/800)·f1·f2`.
pub fn theorem1_bound(avg_degree: f64) -> Result<AsymptoticBound> {
    let (f1, f2) = theorem1_factors(avg_degree)?;
    Ok(AsymptoticBound {
        value: 0.5 + 9.0 / 800.0 * f1 * f2,
        vanishing_factor_dropped: true,
    })
}

/// Empty common neighborhood in G(n, p).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommonEmpty {
    /// `(1 − p²)^(n−2)`: each of the other `n − 2` vertices misses one endpoint.
    pub exact: f64,
    /// `n·p²`, an upper bound on `1 − exact`.
    pub complement_bound: f64,
}

pub fn er_common_empty_probability(n: usize, p: f64) -> Result<CommonEmpty> {
    if n < 2 {
        return Err(param(format!("need n >= 2, got {n}")));
    }
    check_prob(p, "p")?;
    let p2 = p * p;
    let exact = if p2 >= 1.0 {
        if n == 2 { 1.0 } else { 0.0 }
    } else {
        ((n - 2) as f64 * (-p2).ln_1p()).exp()
    };
    Ok(CommonEmpty {
        exact,
        complement_bound: n as f64 * p2,
    })
}

/// Converts an exact probability for display.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
