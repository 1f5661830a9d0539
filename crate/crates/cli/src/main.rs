use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use fsp_core::exactmath::{
    er_common_empty_probability, region_measures, rw_abs_compare, rw_lower_bound, theorem1_bound,
    theorem1_factors,
};
use fsp_core::graphs::{er_probability_for_degree, radius_for_degree};
use fsp_core::harness::{
    emit_plot_data, format_sig10, run_experiment, summarize, write_records_csv, write_summary_csv,
    ExperimentConfig, Model,
};
use fsp_core::rng::MasterSeed;
use fsp_core::verify::{all_checks, show};

#[derive(Parser)]
#[command(name = "fsp", version, about = "Flip-Schelling process simulator and exact checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded one-shot FSP trials and write per-trial records.
    Simulate {
        #[arg(long, value_delimiter = ',', default_value = "rgg,er")]
        model: Vec<Model>,
        #[arg(long = "n", value_delimiter = ',', default_value = "1000,5000,10000")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "4,8,10,16")]
        avg_degree: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Worker threads; 1 runs sequentially, 0 uses every core.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long, default_value = "records.csv")]
        out: PathBuf,
        #[arg(long)]
        summary_out: Option<PathBuf>,
        /// Whitespace-separated series for plotting.
        #[arg(long)]
        plot_out: Option<PathBuf>,
        /// Write each generated graph as an edge list into this directory.
        #[arg(long)]
        dump_graphs: Option<PathBuf>,
        /// Fill the wall_time_ms column (output is then not reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Print closed-form bounds and region measures.
    Bounds {
        #[arg(long = "n")]
        n: usize,
        #[arg(long)]
        avg_degree: f64,
        #[arg(long, default_value_t = 0.8)]
        tau: f64,
    },
    /// Exact comparison of two independent ±1 random walks.
    RwProb {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    /// Run the exact property sweeps; exits nonzero on any violation.
    Verify {
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
}

fn aligned(pairs: &[(String, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    pairs
        .iter()
        .map(|(k, v)| format!("{k:<width$} = {v}\n"))
        .collect()
}

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn bounds(n: usize, avg_degree: f64, tau: f64) -> Result<String> {
    let mut out = vec![kv("n", n), kv("avg_degree", avg_degree)];
    match theorem1_bound(avg_degree) {
        Ok(b) => {
            let (f1, f2) = theorem1_factors(avg_degree)?;
            out.push(kv("theorem1_bound", format_sig10(b.value)));
            out.push(kv("theorem1_factor_decisiveness", format_sig10(f1)));
            out.push(kv("theorem1_factor_common_size", format_sig10(f2)));
            out.push(kv("theorem1_vanishing_factor_dropped", b.vanishing_factor_dropped));
        }
        Err(e) => out.push(kv("theorem1_bound", format!("undefined ({e})"))),
    }
    match radius_for_degree(n, avg_degree) {
        Ok(r) => out.push(kv("rgg_radius", format_sig10(r))),
        Err(e) => out.push(kv("rgg_radius", format!("undefined ({e})"))),
    }
    let m = region_measures(n, avg_degree, tau).context("region measures")?;
    out.push(kv("tau", tau));
    out.push(kv("mu_common", format_sig10(m.mu_common)));
    out.push(kv("mu_u_exclusive", format_sig10(m.mu_u_exclusive)));
    out.push(kv("mu_v_exclusive", format_sig10(m.mu_v_exclusive)));
    out.push(kv("mu_outside", format_sig10(m.mu_outside)));
    match er_probability_for_degree(n, avg_degree) {
        Ok(p) => {
            let c = er_common_empty_probability(n, p)?;
            out.push(kv("er_p", format_sig10(p)));
            out.push(kv("er_common_empty_exact", format_sig10(c.exact)));
            out.push(kv("er_common_nonempty", format_sig10(1.0 - c.exact)));
            out.push(kv("er_common_nonempty_bound", format_sig10(c.complement_bound)));
        }
        Err(e) => out.push(kv("er_p", format!("undefined ({e})"))),
    }
    Ok(aligned(&out))
}

fn rw_prob(a: usize, b: usize) -> Result<String> {
    let c = rw_abs_compare(a, b)?;
    let mut out = vec![
        kv("a", a),
        kv("b", b),
        kv("P(|A|<|B|)", show(&c.less)),
        kv("P(|A|=|B|)", show(&c.equal)),
        kv("P(|A|>|B|)", show(&c.greater)),
    ];
    if a <= b {
        out.push(kv("lower_bound", show(&rw_lower_bound(a, b)?)));
    }
    Ok(aligned(&out))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Simulate {
            model,
            n,
            avg_degree,
            trials,
            seed,
            threads,
            out,
            summary_out,
            plot_out,
            dump_graphs,
            timing,
        } => {
            let config = ExperimentConfig {
                models: model,
                n_values: n,
                degree_values: avg_degree,
                trials,
                master_seed: MasterSeed(seed),
                threads,
                record_timing: timing,
                dump_graphs,
            };
            let records = run_experiment(&config)?;
            write_records_csv(&records, &out)?;
            log::info!("wrote {} records to {}", records.len(), out.display());
            if summary_out.is_some() || plot_out.is_some() {
                let rows = summarize(&records);
                if let Some(p) = &summary_out {
                    write_summary_csv(&rows, p)?;
                }
                if let Some(p) = &plot_out {
                    emit_plot_data(&rows, p)?;
                }
            }
            Ok(true)
        }
        Command::Bounds { n, avg_degree, tau } => {
            print!("{}", bounds(n, avg_degree, tau)?);
            Ok(true)
        }
        Command::RwProb { a, b } => {
            print!("{}", rw_prob(a, b)?);
            Ok(true)
        }
        Command::Verify { threads } => {
            let checks = all_checks(threads);
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                println!("{failed} check(s) failed");
            }
            Ok(failed == 0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
