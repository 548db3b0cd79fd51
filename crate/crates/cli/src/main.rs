mod config;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quasifree::bdf_rep::{bdf_state_build, bdf_vacuum_bound, normal_ordered_pdm, pair_probability, BdfSpec};
use quasifree::constants::{self, ConstantsReport};
use quasifree::vacuum_energy::{energy_table, EnergyRow, Thresholds};
use quasifree::verify::{run_all, run_suite, Suite, VerifyOptions};
use quasifree::{Error, Tolerances};
use serde_json::json;

use config::{Format, RunConfig};

#[derive(Parser)]
#[command(name = "quasifree", version, about = "Quasi-free state checks and Dirac-vacuum pair-creation bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the optimized constants.
    Constants {
        /// Recompute instead of using the memoized values.
        #[arg(long)]
        recompute: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run randomized closed-form vs oracle suites. Exit 1 if any check fails.
    Verify {
        /// hf, pure, mixed, wick, bdf or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Energy bounds, number bound and pair-probability bound over a Z grid.
    Energy(TableArgs),
    /// Pair-probability bound over a Z grid, or the exact value for a BDF spec.
    Pairprob {
        #[command(flatten)]
        table: TableArgs,
        /// Evaluate p = 1 − ω(|Ω⟩⟨Ω|) for the BDF spec in this JSON file instead.
        #[arg(long, conflicts_with = "config", required_unless_present = "config")]
        from_spec: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct TableArgs {
    /// Run configuration (JSON).
    #[arg(long, required = false)]
    config: Option<PathBuf>,
    /// Overrides the format in the config.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Overrides the output path in the config.
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidArgument { .. } | Error::DimensionCap { .. } | Error::Json(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Constants { recompute, format } => cmd_constants(recompute, format),
        Command::Verify { suite, dim, trials, seed, output } => cmd_verify(&suite, dim, trials, seed, output.as_deref()),
        Command::Energy(args) => cmd_table(&args),
        Command::Pairprob { table, from_spec } => match from_spec {
            Some(path) => cmd_from_spec(&path, table.output.as_deref()),
            None => cmd_table(&table),
        },
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn emit(text: &str, output: Option<&Path>) -> std::result::Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Runtime(format!("writing {}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Runtime(e.to_string())),
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {}: {e}", path.display())))
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON serialization");
    s.push('\n');
    s
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn cmd_constants(recompute: bool, format: Format) -> CmdResult {
    let k: ConstantsReport = constants::constants_with(recompute);
    let text = match format {
        Format::Json => pretty(&k),
        Format::Csv => csv_text(
            &["a", "beta_star", "theta_star", "c1", "c2", "trial_min", "a_star", "b_star"],
            [[k.a, k.beta_star, k.theta_star, k.c1, k.c2, k.trial_min, k.a_star, k.b_star].map(float).to_vec()],
        ),
    };
    emit(&text, None)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(suite: &str, dim: usize, trials: usize, seed: u64, output: Option<&Path>) -> CmdResult {
    let opts = VerifyOptions::new(dim, trials, seed);
    let reports = if suite == "all" {
        run_all(&opts)?
    } else {
        vec![run_suite(suite.parse::<Suite>()?, &opts)?]
    };
    let passed = reports.iter().all(|r| r.passed());
    emit(&pretty(&json!({ "passed": passed, "suites": reports })), output)?;
    for r in &reports {
        let worst = r.checks.iter().map(|c| c.margin()).fold(f64::INFINITY, f64::min);
        eprintln!("{} {} (smallest margin {worst:.3e})", if r.passed() { "PASS" } else { "FAIL" }, r.suite.name());
    }
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn flag(row: &EnergyRow) -> String {
    let mut flags = Vec::new();
    if row.below_threshold {
        flags.push("below-threshold");
    }
    if row.e_upper.is_none() {
        flags.push("no-trial-state");
    }
    flags.join(";")
}

fn table_csv(rows: &[EnergyRow]) -> String {
    let opt = |x: Option<f64>| x.map(float).unwrap_or_default();
    csv_text(
        &["Z", "E_upper", "E_lower", "N_lower", "pZ_lower", "flag"],
        rows.iter().map(|r| vec![float(r.z), opt(r.e_upper), float(r.e_lower), opt(r.n_lower), opt(r.pz_lower), flag(r)]),
    )
}

fn table_json(cfg: &RunConfig, th: &Thresholds, rows: &[EnergyRow]) -> String {
    let rows: Vec<_> = rows
        .iter()
        .map(|r| {
            json!({
                "Z": r.z, "E_upper": r.e_upper, "E_lower": r.e_lower,
                "N_lower": r.n_lower, "pZ_lower": r.pz_lower, "flag": flag(r),
            })
        })
        .collect();
    pretty(&json!({ "seed": cfg.seed, "thresholds": th, "rows": rows }))
}

fn cmd_table(args: &TableArgs) -> CmdResult {
    let path = args.config.as_deref().ok_or_else(|| Failure::Usage("--config is required".into()))?;
    let cfg = RunConfig::from_json(&read(path)?)?;
    let (th, rows) = energy_table(&cfg.model()?, &cfg.grid()?)?;
    let format = args.format.or(cfg.output.format).unwrap_or_default();
    let text = match format {
        Format::Csv => table_csv(&rows),
        Format::Json => table_json(&cfg, &th, &rows),
    };
    emit(&text, args.output.as_deref().or(cfg.output.path.as_deref()))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_from_spec(path: &Path, output: Option<&Path>) -> CmdResult {
    let tol = Tolerances::default();
    let spec = BdfSpec::from_json(&read(path)?, &tol)?;
    let state = bdf_state_build(&spec)?;
    let measured = normal_ordered_pdm(&state, &spec.frame)?;
    let bound = bdf_vacuum_bound(&spec)?;
    let p = pair_probability(&state);
    let report = json!({
        "pair_probability": p,
        "vacuum_overlap": state.vacuum_overlap(),
        "vacuum_bound": bound,
        "pair_probability_lower_bound": 1.0 - bound,
        "relative_number": measured.n_avg,
    });
    emit(&pretty(&report), output)?;
    // The overlap bound holds for every valid state, so a violation points at inconsistent input.
    Ok(if state.vacuum_overlap() <= bound + tol.identity { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
