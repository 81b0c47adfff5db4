//! `almostrep`: sweeps, one-shot pairings and property checks.

mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use almostrep::almostrep::{defect_report, generator_window, DefectReport, Family};
use almostrep::checks::{all_passed, run_suite, Suite};
use almostrep::cohomology::ChainTerm;
use almostrep::linalg::TraceKind;
use almostrep::obstruction::{reports_to_csv, sweep, sweep_rep, CycleSpec, PairingReport, SweepConfig};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use config::{parse_cycle_name, ExperimentConfig};

#[derive(Parser)]
#[command(name = "almostrep", version, about = "Obstruction pairings of almost representations")]
struct Cli {
    /// Output directory; overrides `out_dir` in a sweep config.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Seed; overrides `seed` in a sweep config (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the sweep (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a family over an index grid; writes sweep.csv, verdict.json and summary.txt.
    Sweep { config: PathBuf },
    /// Pair one member of a family with a cycle; prints JSON.
    Pair(PairArgs),
    /// Run a property suite: predet, chains, logs or all.
    Check { suite: String },
}

#[derive(clap::Args)]
struct PairArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    n: usize,
    /// "hopf", "std", or a JSON list of {"k", "a", "b"} terms.
    #[arg(long, default_value = "hopf")]
    cycle: String,
    #[arg(long, value_enum, default_value_t = TraceArg::Unnorm)]
    trace: TraceArg,
    /// Genus for surface_pullback.
    #[arg(long, default_value_t = 2)]
    genus: usize,
    /// Clock exponent for z2_twisted.
    #[arg(long, default_value_t = 1)]
    twist: i64,
    /// Size of a random perturbation of the generator images.
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum FamilyArg {
    Z2Projective,
    Heisenberg,
    SurfacePullback,
    Z2Twisted,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceArg {
    Norm,
    Unnorm,
}

/// Exit 2 for anything the user can fix in the input, 1 for everything else.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Sweep { config } => cmd_sweep(&cli, config),
        Command::Pair(args) => cmd_pair(&cli, args),
        Command::Check { suite } => cmd_check(&cli, suite),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Runtime(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}

fn cmd_sweep(cli: &Cli, path: &Path) -> Result<u8, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let mut experiment =
        ExperimentConfig::from_toml(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if let Some(seed) = cli.seed {
        experiment.seed = seed;
    }
    let config = experiment.to_sweep().map_err(Failure::Usage)?;
    let out_dir = cli.out_dir.clone().unwrap_or_else(|| experiment.out_dir.clone());
    let verdict = sweep(&config).map_err(|e| Failure::Usage(e.to_string()))?;

    let csv = reports_to_csv(&verdict.reports).map_err(|e| Failure::Runtime(e.to_string()))?;
    let doc = json!({
        "config": config_json(&config),
        "obstruction_present": verdict.obstruction_present,
        "reason": verdict.reason,
        "reports": verdict.reports,
    });
    let summary = summary_text(&config, &verdict.reports, verdict.obstruction_present, &verdict.reason);
    write_outputs(
        &out_dir,
        &[
            ("sweep.csv", csv),
            ("verdict.json", pretty(&doc)),
            ("summary.txt", summary.clone()),
        ],
    )?;
    emit(&summary);
    Ok(0)
}

fn cmd_pair(cli: &Cli, args: &PairArgs) -> Result<u8, Failure> {
    let family = match args.family {
        FamilyArg::Z2Projective => Family::Z2Projective,
        FamilyArg::Heisenberg => Family::Heisenberg,
        FamilyArg::SurfacePullback => Family::SurfacePullback { genus: args.genus },
        FamilyArg::Z2Twisted => Family::Z2Twisted { twist: args.twist },
    };
    let cycle = if args.cycle.trim_start().starts_with('[') {
        let terms: Vec<ChainTerm> =
            serde_json::from_str(&args.cycle).map_err(|e| Failure::Usage(format!("--cycle: {e}")))?;
        CycleSpec::Terms(terms)
    } else {
        parse_cycle_name(&args.cycle).map_err(Failure::Usage)?
    };
    let mut config = SweepConfig::new(family, cycle, vec![args.n]);
    config.trace = match args.trace {
        TraceArg::Norm => TraceKind::Normalized,
        TraceArg::Unnorm => TraceKind::Unnormalized,
    };
    config.eps_perturb = args.eps;
    config.seed = cli.seed.unwrap_or(0);
    config.validate().map_err(|e| Failure::Usage(e.to_string()))?;

    let rep = sweep_rep::<f64>(&config, args.n).map_err(|e| Failure::Usage(e.to_string()))?;
    let defects = defect_report(&rep, &generator_window(rep.model()), &config.ps)
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    let verdict = sweep(&config).map_err(|e| Failure::Usage(e.to_string()))?;
    let doc = json!({
        "family": family.name(),
        "n": args.n,
        "dim": rep.dim(),
        "theta": family.theta(args.n),
        "trace": trace_name(config.trace),
        "cycle": cycle_json(&config.cycle),
        "pairings": verdict.reports.iter().map(pairing_json).collect::<Vec<_>>(),
        "defects": defects_json(&defects),
    });
    emit(&pretty(&doc));
    Ok(0)
}

fn cmd_check(cli: &Cli, suite: &str) -> Result<u8, Failure> {
    let suite: Suite = suite.parse().map_err(|e: almostrep::Error| Failure::Usage(e.to_string()))?;
    let outcomes = run_suite(suite, cli.seed.unwrap_or(0));
    let mut text: String = outcomes.iter().map(|o| format!("{o}\n")).collect();
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    text.push_str(&format!("{passed}/{} properties pass\n", outcomes.len()));
    emit(&text);
    Ok(if all_passed(&outcomes) { 0 } else { 1 })
}

fn write_outputs(dir: &Path, files: &[(&str, String)]) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))?;
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// JSON has no infinity, so exponents are written as strings.
fn p_label(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

fn trace_name(t: TraceKind) -> &'static str {
    match t {
        TraceKind::Normalized => "normalized",
        TraceKind::Unnormalized => "unnormalized",
    }
}

fn cycle_json(c: &CycleSpec) -> Value {
    match c {
        CycleSpec::Hopf => json!("hopf"),
        CycleSpec::Standard => json!("std"),
        CycleSpec::Terms(terms) => json!(terms),
    }
}

fn config_json(c: &SweepConfig) -> Value {
    let mut family = serde_json::to_value(c.family).expect("family serializes");
    family["name"] = json!(c.family.name());
    json!({
        "family": family,
        "cycle": cycle_json(&c.cycle),
        "n_grid": c.n_grid,
        "ps": c.ps.iter().map(|&p| p_label(p)).collect::<Vec<_>>(),
        "trace": trace_name(c.trace),
        "eps_perturb": c.eps_perturb,
        "seed": c.seed,
        "n0": c.n0,
        "defect_threshold": c.defect_threshold,
    })
}

fn pairing_json(r: &PairingReport) -> Value {
    json!({
        "route": r.route,
        "pairing": r.pairing_re.zip(r.pairing_im).map(|(re, im)| json!({ "re": re, "im": im })),
        "winding": r.winding,
        "lattice_residual": r.lattice_residual,
        "error": r.error,
    })
}

fn defects_json(d: &DefectReport) -> Value {
    let rows: Vec<Value> = d
        .pairs
        .iter()
        .map(|e| {
            let schatten: serde_json::Map<String, Value> =
                e.schatten.iter().map(|&(p, v)| (p_label(p), json!(v))).collect();
            json!({ "s": e.s, "t": e.t, "op": e.op_defect, "schatten": schatten })
        })
        .collect();
    json!({ "sup_op": d.sup_op(), "pairs": rows })
}

fn fmt_opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

fn fmt_sci(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.3e}"))
}

fn summary_text(c: &SweepConfig, reports: &[PairingReport], present: bool, reason: &str) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "family {}  cycle {}  trace {}  eps {}  seed {}\n\n",
        c.family.name(),
        cycle_json(&c.cycle),
        trace_name(c.trace),
        c.eps_perturb,
        c.seed
    ));
    s.push_str(&format!(
        "{:>6} {:>6} {:>5} {:>24} {:>8} {:>10} {:>10} {:>10}\n",
        "n", "dim", "route", "pairing", "winding", "residual", "defect_op", "defect_p2"
    ));
    for r in reports {
        let pairing = match r.pairing() {
            Some(z) => format!("{:.6}{:+.1e}i", z.re, z.im),
            None => "-".into(),
        };
        s.push_str(&format!(
            "{:>6} {:>6} {:>5} {:>24} {:>8} {:>10} {:>10} {:>10}\n",
            r.n,
            r.dim,
            r.route.to_string(),
            pairing,
            fmt_opt(r.winding),
            fmt_sci(r.lattice_residual),
            fmt_sci(r.defect_sup),
            fmt_sci(r.defect_p2),
        ));
        if let Some(e) = &r.error {
            s.push_str(&format!("       ! {e}\n"));
        }
    }
    s.push_str(&format!(
        "\nobstruction {}: {reason}\n",
        if present { "present" } else { "not established" }
    ));
    s
}
