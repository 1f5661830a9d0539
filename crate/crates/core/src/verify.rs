//! Property sweeps over the exact quantities, each reduced to a pass/fail
//! [`Check`]. Used by the `verify` subcommand and the acceptance suite.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactmath::{
    binom_collision_upper_bound, binom_distribution, binom_ge_prob, binomial_mode,
    prob_gt_one_and_bound, region_measures, rw_abs_compare, rw_lower_bound, to_f64,
};
use crate::fsp::{exact_decisiveness_probability, exact_monochrome_probability};
use crate::graphs::{er_with_probability, Graph};
use crate::oracle;
use crate::par::map_ordered;
use crate::rng::{derive_stream, MasterSeed};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, failures: Vec<String>, cases: usize) -> Self {
        let passed = failures.is_empty();
        let detail = if passed {
            format!("{cases} cases")
        } else {
            format!(
                "{} of {cases} cases failed; first: {}",
                failures.len(),
                failures[0]
            )
        };
        Check {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {} ({})", self.name, self.detail)
    }
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// The five small-case walk probabilities plus the two degenerate ones.
pub fn walk_case_values() -> Check {
    let cases = [
        (0, 2, rat(1, 2)),
        (0, 4, rat(5, 8)),
        (1, 3, rat(1, 4)),
        (2, 2, rat(1, 4)),
        (3, 3, rat(3, 16)),
        (0, 0, rat(0, 1)),
        (1, 1, rat(0, 1)),
    ];
    let failures = cases
        .iter()
        .filter_map(|(a, b, want)| {
            let got = rw_abs_compare(*a, *b).ok()?.less;
            (got != *want).then(|| format!("({a},{b}): got {got}, want {want}"))
        })
        .collect();
    Check::new("random-walk case values", failures, cases.len())
}

/// For `0 <= a <= b <= max` (except `a = b <= 1`): `P(|A|<|B|)` is at least
/// 3/16, at least the closed-form lower bound, and at least `P(|A|>|B|)`.
/// Pairs with `a + b <= enumerate_up_to` are also checked against full
/// sign-sequence enumeration.
pub fn walk_sweep(max: usize, enumerate_up_to: usize, threads: usize) -> Check {
    let pairs: Vec<(usize, usize)> = (0..=max)
        .flat_map(|b| (0..=b).map(move |a| (a, b)))
        .collect();
    let three_16 = rat(3, 16);
    let failures: Vec<String> = map_ordered(&pairs, threads, |&(a, b)| {
        let mut bad = Vec::new();
        let c = match rw_abs_compare(a, b) {
            Ok(c) => c,
            Err(e) => return vec![format!("({a},{b}): {e}")],
        };
        if c.less.clone() + &c.equal + &c.greater != BigRational::one() {
            bad.push(format!("({a},{b}): probabilities do not sum to 1"));
        }
        if c.less < c.greater {
            bad.push(format!("({a},{b}): less {} < greater {}", c.less, c.greater));
        }
        if !(a == b && a <= 1) && c.less < three_16 {
            bad.push(format!("({a},{b}): less {} < 3/16", c.less));
        }
        let lb = rw_lower_bound(a, b).expect("a <= b");
        if c.less < lb {
            bad.push(format!("({a},{b}): less {} < bound {lb}", c.less));
        }
        if a + b <= enumerate_up_to {
            let (l, e, g) = oracle::walk_compare_enumerated(a, b);
            if (l, e, g) != (c.less.clone(), c.equal.clone(), c.greater.clone()) {
                bad.push(format!("({a},{b}): disagrees with enumeration"));
            }
        }
        bad
    })
    .into_iter()
    .flatten()
    .collect();
    Check::new("random-walk sweep", failures, pairs.len())
}

/// Named small graphs used for the decision-tree check.
pub fn small_graphs() -> Vec<(&'static str, Graph)> {
    let complete = |n: usize| -> Vec<(usize, usize)> {
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
    };
    let cycle = |n: usize| -> Vec<(usize, usize)> { (0..n).map(|i| (i, (i + 1) % n)).collect() };
    let build = |n, e: Vec<(usize, usize)>| Graph::from_edges(n, &e).expect("valid graph");
    vec![
        ("K2", build(2, complete(2))),
        ("P3", build(3, vec![(0, 1), (1, 2)])),
        ("K3", build(3, complete(3))),
        ("star-4", build(5, (1..5).map(|l| (0, l)).collect())),
        ("C5", build(5, cycle(5))),
        ("C6", build(6, cycle(6))),
        ("K4", build(4, complete(4))),
    ]
}

fn decision_tree_failures(name: &str, g: &Graph, cross_check: bool) -> Vec<String> {
    let half = rat(1, 2);
    g.edges()
        .filter_map(|(u, v)| {
            let mono = exact_monochrome_probability(g, u, v).ok()?;
            let dec = exact_decisiveness_probability(g, u, v).ok()?;
            let bound = &half + &dec * &half;
            if mono < bound {
                return Some(format!("{name} edge ({u},{v}): {mono} < {bound}"));
            }
            if cross_check && g.n() <= 10 {
                let full = oracle::monochrome_probability_full(g, u, v);
                if full != mono {
                    return Some(format!("{name} edge ({u},{v}): oracle {full} != {mono}"));
                }
            }
            None
        })
        .collect()
}

/// Monochrome probability at least `1/2 + P(decisive)/2` on every edge of
/// the named small graphs and of `random_graphs` sampled graphs on up to 10
/// vertices, each cross-checked against full coin enumeration.
pub fn decision_tree(random_graphs: u64, threads: usize) -> Check {
    let mut failures = Vec::new();
    let mut edges = 0;
    for (name, g) in small_graphs() {
        edges += g.edge_count();
        failures.extend(decision_tree_failures(name, &g, true));
    }
    let seeds: Vec<u64> = (0..random_graphs).collect();
    let sampled = map_ordered(&seeds, threads, |&i| {
        let mut s = derive_stream(MasterSeed(0xD7), "decision-tree", i);
        let n = 2 + (s.next_u64() % 9) as usize;
        let p = 0.15 + 0.8 * s.next_unit_uniform();
        let g = er_with_probability(n, p, &mut s);
        (g.edge_count(), decision_tree_failures(&format!("G#{i}"), &g, true))
    });
    for (e, f) in sampled {
        edges += e;
        failures.extend(f);
    }
    Check::new("decision-tree bound", failures, edges)
}

fn p_grid(step_hundredths: u32, lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi)
        .step_by(step_hundredths as usize)
        .map(|k| k as f64 / 100.0)
        .collect()
}

/// The mode formula picks a largest weight for `n <= max_n`, `p` in 0.01..=0.99.
pub fn binomial_mode_sweep(max_n: u64) -> Check {
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in 1..=max_n {
        for p in p_grid(1, 1, 99) {
            cases += 1;
            let mode = binomial_mode(n, p).expect("p < 1");
            let dist = binom_distribution(n, p).expect("valid p");
            let brute = oracle::binomial_argmax_set(n, p);
            let top = dist.weights.iter().cloned().fold(0.0, f64::max);
            if !brute.contains(&mode) || dist.weights[mode as usize] < top * (1.0 - 1e-12) {
                failures.push(format!("n={n} p={p}: mode {mode}, argmax {brute:?}"));
            }
        }
    }
    Check::new("binomial mode", failures, cases)
}

/// `P(X >= Y) >= 1/2` for `p >= q` on the 0.05 grid, `n` in `1..=max_n`.
pub fn binomial_dominance_sweep(max_n: u64) -> Check {
    let grid = p_grid(5, 5, 95);
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in 1..=max_n {
        for &p in &grid {
            for &q in grid.iter().filter(|&&q| q <= p) {
                cases += 1;
                let c = binom_ge_prob(n, p, q).expect("valid");
                if c.greater_or_equal < 0.5 - 1e-12 {
                    failures.push(format!("n={n} p={p} q={q}: {}", c.greater_or_equal));
                }
            }
        }
    }
    Check::new("binomial dominance", failures, cases)
}

/// Exact `P(X = Y)` never exceeds the collision bound where it is defined.
pub fn collision_bound_sweep(max_n: u64) -> Check {
    let grid = p_grid(5, 5, 95);
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in 2..=max_n {
        for &p in &grid {
            let Ok(bound) = binom_collision_upper_bound(n, p) else {
                continue;
            };
            let dist = binom_distribution(n, p).expect("valid");
            let max_weight = dist.weights.iter().cloned().fold(0.0, f64::max);
            if max_weight > bound {
                failures.push(format!("n={n} p={p}: max weight {max_weight} > {bound}"));
            }
            for &q in grid.iter().filter(|&&q| q <= p) {
                cases += 1;
                let eq = binom_ge_prob(n, p, q).expect("valid").equal;
                if eq > bound {
                    failures.push(format!("n={n} p={p} q={q}: P(X=Y) {eq} > {bound}"));
                }
            }
        }
    }
    Check::new("binomial collision bound", failures, cases)
}

/// Exact `P(X > 1)` dominates its closed-form bound for `c` in 0.5..=20
/// (step 0.5) and the given `n` values.
pub fn gt_one_sweep(ns: &[u64]) -> Check {
    let mut failures = Vec::new();
    let mut cases = 0;
    for &n in ns {
        for k in 1..=40 {
            let c = k as f64 * 0.5;
            let p = c / n as f64;
            if p > 1.0 {
                continue;
            }
            cases += 1;
            let (exact, bound) = prob_gt_one_and_bound(n, p).expect("valid");
            if exact < bound {
                failures.push(format!("n={n} c={c}: {exact} < {bound}"));
            }
        }
    }
    Check::new("P(X>1) bound", failures, cases)
}

/// Region measure invariants on `tau = 0, 0.001, ..., 2`.
pub fn region_sweep(n: usize, avg_degree: f64) -> Check {
    let disk = avg_degree / (n - 1) as f64;
    let mut failures = Vec::new();
    let mut prev = f64::INFINITY;
    for i in 0..=2000 {
        let tau = i as f64 / 1000.0;
        let m = match region_measures(n, avg_degree, tau) {
            Ok(m) => m,
            Err(e) => {
                failures.push(format!("tau={tau}: {e}"));
                continue;
            }
        };
        let sum = m.mu_common + m.mu_u_exclusive + m.mu_v_exclusive + m.mu_outside;
        if (sum - 1.0).abs() > 1e-12 {
            failures.push(format!("tau={tau}: measures sum to {sum}"));
        }
        if m.mu_u_exclusive != m.mu_v_exclusive {
            failures.push(format!("tau={tau}: exclusive regions differ"));
        }
        if ((m.mu_common + m.mu_u_exclusive) - disk).abs() > 1e-12 * disk.max(1.0) {
            failures.push(format!("tau={tau}: disk identity broken"));
        }
        if m.mu_common < 0.0 || m.mu_u_exclusive < -1e-15 || m.mu_outside < 0.0 {
            failures.push(format!("tau={tau}: negative measure"));
        }
        if i > 0 && i < 2000 && m.mu_common >= prev {
            failures.push(format!("tau={tau}: common measure not decreasing"));
        }
        prev = m.mu_common;
    }
    Check::new("region measures", failures, 2001)
}

/// Everything `verify` runs, in order.
pub fn all_checks(threads: usize) -> Vec<Check> {
    vec![
        walk_case_values(),
        walk_sweep(60, 16, threads),
        decision_tree(200, threads),
        binomial_mode_sweep(60),
        binomial_dominance_sweep(40),
        collision_bound_sweep(200),
        gt_one_sweep(&[100, 1000, 10_000]),
        region_sweep(10_001, 10.0),
    ]
}

/// Exact value, for printing.
pub fn show(x: &BigRational) -> String {
    if x.is_zero() {
        "0".into()
    } else {
        format!("{x} (~{:.6})", to_f64(x))
    }
}
