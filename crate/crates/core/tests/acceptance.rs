//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances and thresholds are fixed below.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;

use fsp_core::exactmath::{
    edge_within_tau_fraction, er_common_empty_probability, region_measures, rw_abs_compare,
    theorem1_bound,
};
use fsp_core::fsp::exact_monochrome_probability;
use fsp_core::graphs::{
    er_probability_for_degree, generate_er, generate_rgg, neighborhood_partition, rgg_from_points,
    rgg_naive, sample_points,
};
use fsp_core::harness::{records_csv, run_experiment, summarize, ExperimentConfig, Model};
use fsp_core::par::map_ordered;
use fsp_core::rng::{derive_stream, MasterSeed};
use fsp_core::verify;

const SEED: MasterSeed = MasterSeed(42);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn within_time(o: Outcome, elapsed: Duration, limit: Duration) -> Outcome {
    let ok = elapsed <= limit;
    let detail = format!("{}; {:.2?} (limit {:?})", o.detail, elapsed, limit);
    outcome(o.passed && ok, detail)
}

fn r(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// 1. The five small walk cases, exactly.
fn exact_walk_values() -> Outcome {
    let cases = [
        (0, 2, r(1, 2)),
        (0, 4, r(5, 8)),
        (1, 3, r(1, 4)),
        (2, 2, r(1, 4)),
        (3, 3, r(3, 16)),
    ];
    let mut bad = Vec::new();
    for (a, b, want) in &cases {
        let got = rw_abs_compare(*a, *b).unwrap().less;
        if got != *want {
            bad.push(format!("({a},{b}) = {got}, want {want}"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "5/5 exact".into() } else { bad.join("; ") })
}

/// 2. Walk sweep over 0 <= a <= b <= 60 plus enumeration for a + b <= 16.
fn walk_sweeps() -> Outcome {
    let c = verify::walk_sweep(60, 16, 0);
    outcome(c.passed, c.detail)
}

/// 3. Decision-tree inequality on the named small graphs, K2 exactly 1/2.
fn decision_tree() -> Outcome {
    let mut failures = Vec::new();
    let mut edges = 0;
    for (name, g) in verify::small_graphs() {
        edges += g.edge_count();
        for (u, v) in g.edges() {
            let mono = exact_monochrome_probability(&g, u, v).unwrap();
            let dec = fsp_core::fsp::exact_decisiveness_probability(&g, u, v).unwrap();
            if mono < r(1, 2) + dec * r(1, 2) {
                failures.push(format!("{name} ({u},{v})"));
            }
            if mono != fsp_core::oracle::monochrome_probability_full(&g, u, v) {
                failures.push(format!("{name} ({u},{v}) oracle mismatch"));
            }
        }
    }
    let (_, k2) = &verify::small_graphs()[0];
    let k2_half = exact_monochrome_probability(k2, 0, 1).unwrap() == r(1, 2);
    if !k2_half {
        failures.push("K2 edge is not exactly 1/2".into());
    }
    let detail = if failures.is_empty() {
        format!("{edges} edges, K2 = 1/2")
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

/// 4. Binomial sweeps.
fn binomial_sweeps() -> Outcome {
    let checks = [
        verify::binomial_mode_sweep(60),
        verify::binomial_dominance_sweep(40),
        verify::collision_bound_sweep(200),
        verify::gt_one_sweep(&[100, 1000, 10_000]),
    ];
    let passed = checks.iter().all(|c| c.passed);
    let detail = checks
        .iter()
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(passed, detail)
}

/// Kolmogorov distance between the empirical law of `xs` and `cdf`.
fn sup_norm(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// 5. Region measures and the edge-length law.
fn region_geometry() -> Outcome {
    let (n, d) = (5000usize, 10.0);
    let sweep = verify::region_sweep(n, d);
    let disk = d / (n - 1) as f64;
    let m0 = region_measures(n, d, 0.0).unwrap();
    let m2 = region_measures(n, d, 2.0).unwrap();
    let endpoints = (m0.mu_common - disk).abs() <= 1e-15
        && m0.mu_u_exclusive.abs() <= 1e-15
        && m2.mu_common == 0.0
        && (m2.mu_u_exclusive - disk).abs() <= 1e-15;
    let m45 = region_measures(n, d, 0.8).unwrap();
    let four_fifths = m45.mu_common >= m45.mu_u_exclusive;

    let seeds: Vec<u64> = (0..20).collect();
    let taus: Vec<f64> = map_ordered(&seeds, 0, |&t| {
        let mut s = derive_stream(SEED, "accept/tau-cdf", t);
        let gg = generate_rgg(n, d, &mut s).unwrap();
        gg.graph.edges().map(|(u, v)| gg.tau(u, v)).collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let count = taus.len();
    let ks = sup_norm(taus, edge_within_tau_fraction);
    let passed = sweep.passed && endpoints && four_fifths && ks <= 0.02;
    outcome(
        passed,
        format!(
            "sweep {}; endpoints {endpoints}; mu(4/5) common {:.3e} >= excl {:.3e}; sup|F-τ²| = {ks:.4} over {count} edges",
            sweep.detail, m45.mu_common, m45.mu_u_exclusive
        ),
    )
}

/// 6. Degree calibration for both models, grid vs all-pairs equality.
fn generator_calibration() -> Outcome {
    let (n, d) = (5000usize, 10.0);
    let seeds: Vec<u64> = (0..50).collect();
    let rgg: Vec<f64> = map_ordered(&seeds, 0, |&t| {
        let mut s = derive_stream(SEED, "accept/calib-rgg", t);
        generate_rgg(n, d, &mut s).unwrap().graph.average_degree()
    });
    let er: Vec<f64> = map_ordered(&seeds, 0, |&t| {
        let mut s = derive_stream(SEED, "accept/calib-er", t);
        generate_er(n, d, &mut s).unwrap().average_degree()
    });
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mr, me) = (mean(&rgg), mean(&er));
    let calibrated = (mr - d).abs() <= 0.02 * d && (me - d).abs() <= 0.02 * d;

    let mut s = derive_stream(SEED, "accept/grid-vs-naive", 0);
    let radius = fsp_core::graphs::radius_for_degree(2000, d).unwrap();
    let pts = sample_points(2000, &mut s);
    let grid = rgg_from_points(&pts, radius);
    let same = grid == rgg_naive(&pts, radius);
    outcome(
        calibrated && same,
        format!(
            "mean degree rgg {mr:.4}, er {me:.4} (target {d} ± 2%); grid == all-pairs: {same} ({} edges)",
            grid.edge_count()
        ),
    )
}

/// 7. Headline experiment at n = 10⁴, d̄ = 10, 200 trials per model.
fn headline_experiment() -> Outcome {
    let config = ExperimentConfig {
        models: vec![Model::Rgg, Model::Er],
        n_values: vec![10_000],
        degree_values: vec![10.0],
        trials: 200,
        master_seed: SEED,
        threads: 0,
        ..Default::default()
    };
    let rows = summarize(&run_experiment(&config).unwrap());
    let row = |m: Model| rows.iter().find(|r| r.model == m).expect("cell present");
    let (rgg, er) = (row(Model::Rgg), row(Model::Er));
    let in_band = |x: f64| (0.49..=0.51).contains(&x);
    let a = in_band(er.mean_after);
    let b = rgg.mean_after >= 0.52 && rgg.mean_after - er.mean_after >= 0.02;
    let c = in_band(rgg.mean_before) && in_band(er.mean_before);
    let reference = theorem1_bound(10.0).unwrap().value;
    outcome(
        a && b && c && rgg.trials == 200 && er.trials == 200,
        format!(
            "(a) ER after {:.4}: {a}; (b) RGG after {:.4} [IQR {:.4}-{:.4}], gap {:.4}: {b}; (c) before {:.4}/{:.4}: {c}; reference bound {reference:.5}",
            er.mean_after,
            rgg.mean_after,
            rgg.q25_after,
            rgg.q75_after,
            rgg.mean_after - er.mean_after,
            rgg.mean_before,
            er.mean_before
        ),
    )
}

/// 8. Empty common neighborhoods on ER edges.
fn er_common_neighborhood() -> Outcome {
    let (n, d) = (10_000usize, 10.0);
    let p = er_probability_for_degree(n, d).unwrap();
    let ce = er_common_empty_probability(n, p).unwrap();
    let per_graph = 200usize;
    let seeds: Vec<u64> = (0..50).collect();
    let counts: Vec<(usize, usize)> = map_ordered(&seeds, 0, |&t| {
        let mut s = derive_stream(SEED, "accept/er-common", t);
        let g = generate_er(n, d, &mut s).unwrap();
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let mut pick = derive_stream(SEED, "accept/er-common-pick", t);
        let mut empty = 0;
        for _ in 0..per_graph {
            let (u, v) = edges[(pick.next_u64() % edges.len() as u64) as usize];
            empty += neighborhood_partition(&g, u, v).unwrap().common.is_empty() as usize;
        }
        (empty, per_graph)
    });
    let (empty, total) = counts
        .iter()
        .fold((0, 0), |(a, b), &(e, t)| (a + e, b + t));
    let freq = empty as f64 / total as f64;
    let sigma = (ce.exact * (1.0 - ce.exact) / total as f64).sqrt();
    let close = (freq - ce.exact).abs() <= 3.0 * sigma;
    let bounded = 1.0 - ce.exact <= ce.complement_bound;
    outcome(
        close && bounded,
        format!(
            "empirical {freq:.5} vs exact {:.5} (3σ = {:.5}, {total} edges); 1 - exact = {:.5} <= np² = {:.5}",
            ce.exact,
            3.0 * sigma,
            1.0 - ce.exact,
            ce.complement_bound
        ),
    )
}

/// 9. Byte-identical records under 1, 4 and 8 threads.
fn determinism() -> Outcome {
    let base = ExperimentConfig {
        models: vec![Model::Rgg, Model::Er],
        n_values: vec![2000],
        degree_values: vec![4.0, 10.0],
        trials: 10,
        master_seed: SEED,
        ..Default::default()
    };
    let outputs: Vec<String> = [1usize, 4, 8]
        .iter()
        .map(|&threads| {
            records_csv(&run_experiment(&ExperimentConfig { threads, ..base.clone() }).unwrap())
        })
        .collect();
    let same = outputs.windows(2).all(|w| w[0] == w[1]);
    outcome(
        same,
        format!("{} bytes, threads 1/4/8 identical: {same}", outputs[0].len()),
    )
}

fn main() -> ExitCode {
    type Criterion = (u8, &'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 9] = [
        (1, "exact random-walk values", exact_walk_values, Some(Duration::from_secs(1))),
        (2, "random-walk sweeps", walk_sweeps, Some(Duration::from_secs(30))),
        (3, "decision-tree bound on small graphs", decision_tree, Some(Duration::from_secs(10))),
        (4, "binomial sweeps", binomial_sweeps, Some(Duration::from_secs(60))),
        (5, "region geometry and edge-length law", region_geometry, None),
        (6, "generator calibration", generator_calibration, None),
        (7, "headline experiment", headline_experiment, Some(Duration::from_secs(300))),
        (8, "ER common neighborhood", er_common_neighborhood, None),
        (9, "determinism across thread counts", determinism, None),
    ];
    let mut failed = 0;
    for (id, title, run, limit) in criteria {
        let start = Instant::now();
        let mut o = run();
        let elapsed = start.elapsed();
        o = match limit {
            Some(l) => within_time(o, elapsed, l),
            None => outcome(o.passed, format!("{}; {:.2?}", o.detail, elapsed)),
        };
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {id}: {title}: {}", o.detail);
        failed += usize::from(!o.passed);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    } else {
        println!("all 9 criteria passed");
        ExitCode::SUCCESS
    }
}
