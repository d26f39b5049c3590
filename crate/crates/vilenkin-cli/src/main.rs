//! Command-line driver for Vilenkin–Fourier experiments.
//!
//! Six subcommands cover the workflow end to end: `table` prints the
//! mixed-radix scale table M_0..M_N, `transform` analyzes or synthesizes a
//! sampled function, `atom-suite` batch-checks random p-atoms (validity,
//! nullity, H_p budget, tail integrals, exact localization), `bound`
//! measures the normalized coefficient maximum sup_n |f̂(n)|/(n+1)^{1/p−1}
//! over random single-atom martingales, `counterexample` builds the
//! Dirichlet-kernel martingale whose coefficients track a growth target Φ
//! and checks its spectrum against the closed form, and `bench` times the
//! factorized transform against the quadratic oracle.
//!
//! Reports are CSV (or a JSON summary with `--format json`) on stdout or
//! `--out`; diagnostics go to stderr. Identical configuration and seed
//! produce byte-identical reports. Exit codes: 0 all checks pass, 1 a
//! numerical assertion failed, 2 the configuration was rejected.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vilenkin::io as vio;
use vilenkin::transform::MAX_GRID_POINTS;
use vilenkin::{
    forward_fast, forward_naive, inverse, run_atom_suite, run_bound_suite, run_counterexample,
    AtomSuiteConfig, BoundSuiteConfig, Certification, Complex64, CounterexampleConfig,
    GridFunction, GroupSpec, PhiFamily, PhiSpec,
};

/// Deviation allowed between the fast transform and the quadratic oracle
/// under `transform --check`.
const CHECK_TOL: f64 = 1e-9;

/// Shortest path from a failed run to the right exit code: configuration
/// problems exit 2 before any report is produced, numerical assertion
/// failures exit 1 after the report has been written.
enum Failure {
    Config(String),
    Check(String),
}

fn config(e: impl std::fmt::Display) -> Failure {
    Failure::Config(e.to_string())
}

#[derive(Parser)]
#[command(
    name = "vilenkin",
    version,
    about = "Vilenkin–Fourier transforms, Hardy-space atom batteries, and coefficient-decay reports on bounded Vilenkin groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the scale table M_0..M_N, the radices, and λ = max m_k
    Table(TableArgs),
    /// Vilenkin–Fourier analysis (or synthesis, with --inverse) of a sampled function
    Transform(TransformArgs),
    /// Batch-check random p-atoms: validity, nullity, H_p budget, tail integrals
    AtomSuite(AtomSuiteArgs),
    /// Normalized coefficient maxima over random single-atom martingales
    Bound(BoundArgs),
    /// Build the sharpness martingale for a growth target Φ and check its spectrum
    Counterexample(CounterexampleArgs),
    /// Time the factorized transform against the quadratic oracle
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// Comma-separated radices m_k ≥ 2, cycled to fill the depth
    /// ("2,3" with depth 4 gives 2,3,2,3)
    #[arg(long, default_value = "2,3", value_name = "LIST")]
    m: String,
    /// Truncation depth N; the group has M_N = m_0·…·m_{N−1} points
    #[arg(long, value_name = "N")]
    depth: usize,
}

impl GroupArgs {
    fn build(&self) -> Result<GroupSpec, Failure> {
        let radices = parse_u32_list(&self.m, "--m")?;
        GroupSpec::cycled(&radices, self.depth).map_err(config)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Full per-row report
    Csv,
    /// One-line summary object
    Json,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Input CSV `index,re,im` with exactly M_N rows: samples, or
    /// coefficients when --inverse is given
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    /// Synthesize samples from coefficients instead of analyzing
    #[arg(long)]
    inverse: bool,
    /// Also run the quadratic oracle and compare (forward only)
    #[arg(long)]
    check: bool,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AtomSuiteArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Comma-separated exponents p, each in (0,1), cycled across trials
    #[arg(long, default_value = "0.25,0.5,0.75", value_name = "LIST")]
    p: String,
    /// Comma-separated interval ranks N_a in 1..N for the atom supports;
    /// defaults to every rank 1..N
    #[arg(long, value_name = "LIST")]
    ranks: Option<String>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Replace trial 0 by a deliberate non-atom; the suite must then fail
    #[arg(long)]
    break_atom: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Comma-separated exponents p, each in (0,1); one batch per value
    #[arg(long, default_value = "0.5", value_name = "LIST")]
    p: String,
    /// Fixed interval rank for the generating atoms (default: drawn
    /// uniformly from 1..N per trial)
    #[arg(long, value_name = "RANK")]
    rank: Option<usize>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Highest coefficient index scanned (default: M_N − 1)
    #[arg(long, value_name = "N")]
    nmax: Option<u64>,
    /// Repeat the batch at depths 4..8 (superseding --depth) to expose
    /// drift of the maximum across truncations
    #[arg(long)]
    sweep: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Exponent p in (0,1)
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Growth target Φ: `pow:G`, `log`, `const:C`, or `file:PATH`
    /// (CSV `n,phi`, right-continuous steps)
    #[arg(long, default_value = "pow:0.5", value_name = "DESC")]
    phi: String,
    /// Geometric budget ratio r in (0,1) for the greedy scale selection
    #[arg(long, default_value_t = 0.5)]
    budget: f64,
    /// Cap on the number of retained blocks
    #[arg(long, default_value_t = 8, value_name = "K")]
    max_blocks: usize,
    /// Also write the atomic decomposition (k,mu_k,interval_rank,base_rank)
    #[arg(long, value_name = "PATH")]
    dump_atoms: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Largest grid the quadratic oracle is timed on; bigger sizes report
    /// the fast path only
    #[arg(long, default_value_t = 5000, value_name = "POINTS")]
    naive_cutoff: u64,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Table(args) => cmd_table(args),
        Command::Transform(args) => cmd_transform(args),
        Command::AtomSuite(args) => cmd_atom_suite(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Counterexample(args) => cmd_counterexample(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing

fn parse_u32_list(text: &str, flag: &str) -> Result<Vec<u32>, Failure> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| Failure::Config(format!("{flag}: `{part}` is not an integer")))
        })
        .collect()
}

fn parse_usize_list(text: &str, flag: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Failure::Config(format!("{flag}: `{part}` is not an integer")))
        })
        .collect()
}

fn parse_p_list(text: &str, flag: &str) -> Result<Vec<f64>, Failure> {
    let ps: Vec<f64> = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Config(format!("{flag}: `{part}` is not a number")))
        })
        .collect::<Result<_, _>>()?;
    for &p in &ps {
        if !(p > 0.0 && p < 1.0) {
            return Err(Failure::Config(format!(
                "{flag}: p = {p} is outside the open interval (0,1)"
            )));
        }
    }
    Ok(ps)
}

/// Parses the Φ mini-language: `pow:G`, `log`, `const:C`, `file:PATH`.
fn parse_phi(descriptor: &str, p: f64) -> Result<PhiSpec, Failure> {
    let family = if let Some(gamma) = descriptor.strip_prefix("pow:") {
        let gamma: f64 = gamma
            .parse()
            .map_err(|_| Failure::Config(format!("--phi: `{gamma}` is not a number")))?;
        PhiFamily::Power { gamma }
    } else if descriptor == "log" {
        PhiFamily::Log
    } else if let Some(value) = descriptor.strip_prefix("const:") {
        let value: f64 = value
            .parse()
            .map_err(|_| Failure::Config(format!("--phi: `{value}` is not a number")))?;
        PhiFamily::Constant { value }
    } else if let Some(path) = descriptor.strip_prefix("file:") {
        let rows = vio::read_phi_table(Path::new(path)).map_err(config)?;
        PhiFamily::Tabulated { rows }
    } else {
        return Err(Failure::Config(format!(
            "--phi: unknown descriptor `{descriptor}` (expected pow:G, log, const:C, or file:PATH)"
        )));
    };
    PhiSpec::new(family, p).map_err(config)
}

/// Grids are materialized in memory; refuse configurations that cannot be.
fn ensure_grid_fits(spec: &GroupSpec) -> Result<(), Failure> {
    if spec.points() > MAX_GRID_POINTS {
        return Err(Failure::Config(format!(
            "M_N = {} exceeds the grid limit {}",
            spec.points(),
            MAX_GRID_POINTS
        )));
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, content)
                .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// table

fn cmd_table(args: TableArgs) -> Result<(), Failure> {
    let spec = args.group.build()?;
    let content = match args.format {
        Format::Csv => {
            let mut csv = String::from("k,m_k,M_k\n");
            for k in 0..spec.depth() {
                writeln!(csv, "{},{},{}", k, spec.radix(k), spec.scale(k)).unwrap();
            }
            writeln!(csv, "{},,{}", spec.depth(), spec.points()).unwrap();
            eprintln!("lambda = {}", spec.lambda());
            csv
        }
        Format::Json => {
            let summary = serde_json::json!({
                "lambda": spec.lambda(),
                "m": spec.radices(),
                "points": spec.points(),
                "scales": spec.scales(),
            });
            format!("{summary}\n")
        }
    };
    emit(&args.out, &content)
}

// ---------------------------------------------------------------------------
// transform

fn cmd_transform(args: TransformArgs) -> Result<(), Failure> {
    let spec = args.group.build()?;
    ensure_grid_fits(&spec)?;
    if args.inverse {
        if args.check {
            return Err(Failure::Config(
                "--check applies to the forward transform only".to_string(),
            ));
        }
        let coeffs = vio::read_spectrum_csv(&args.input, &spec).map_err(config)?;
        let samples = inverse(&coeffs);
        emit(&args.out, &vio::grid_to_csv(&samples))
    } else {
        let samples = vio::read_grid_csv(&args.input, &spec).map_err(config)?;
        let coeffs = forward_fast(&samples);
        emit(&args.out, &vio::spectrum_to_csv(&coeffs))?;
        if args.check {
            let oracle = forward_naive(&samples);
            let deviation = coeffs
                .coeffs()
                .iter()
                .zip(oracle.coeffs())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            eprintln!("max |fast - naive| deviation = {deviation:e}");
            if deviation > CHECK_TOL {
                return Err(Failure::Check(format!(
                    "fast transform deviates from the quadratic oracle by {deviation:e} > {CHECK_TOL:e}"
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// atom-suite

fn cmd_atom_suite(args: AtomSuiteArgs) -> Result<(), Failure> {
    let spec = args.group.build()?;
    ensure_grid_fits(&spec)?;
    if spec.depth() < 2 {
        return Err(Failure::Config(
            "atom trials need depth ≥ 2 so a proper supporting interval exists".to_string(),
        ));
    }
    let ps = parse_p_list(&args.p, "--p")?;
    let ranks = match &args.ranks {
        Some(text) => {
            let ranks = parse_usize_list(text, "--ranks")?;
            if ranks.is_empty() {
                return Err(Failure::Config("--ranks: empty list".to_string()));
            }
            for &rank in &ranks {
                if rank == 0 || rank >= spec.depth() {
                    return Err(Failure::Config(format!(
                        "--ranks: rank {rank} is outside 1..{}",
                        spec.depth()
                    )));
                }
            }
            ranks
        }
        None => (1..spec.depth()).collect(),
    };
    let cfg = AtomSuiteConfig {
        group: spec,
        ps,
        ranks,
        trials: args.trials,
        seed: args.seed,
        inject_non_atom: args.break_atom,
    };
    let report = run_atom_suite(&cfg).map_err(config)?;

    let content = match args.format {
        Format::Csv => {
            let mut csv = String::from("trial,p,N_a,tail_integral,spec_bound\n");
            for t in &report.trials {
                writeln!(
                    csv,
                    "{},{},{},{},{}",
                    t.trial, t.p, t.rank, t.tail.integral, t.tail.spec_bound
                )
                .unwrap();
            }
            csv
        }
        Format::Json => {
            let summary = serde_json::json!({
                "all_ok": report.all_ok,
                "max_tail": report.max_tail,
                "spec_bound": report.max_spec_bound,
                "trials": report.trials.len(),
            });
            format!("{summary}\n")
        }
    };
    emit(&args.out, &content)?;

    if !report.all_ok {
        let failed = report.trials.iter().filter(|t| !t.ok()).count();
        return Err(Failure::Check(format!(
            "{failed} of {} atom trials failed a check",
            report.trials.len()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// bound

fn cmd_bound(args: BoundArgs) -> Result<(), Failure> {
    let ps = parse_p_list(&args.p, "--p")?;
    let radices = parse_u32_list(&args.group.m, "--m")?;
    let depths: Vec<usize> = if args.sweep {
        (4..=8).collect()
    } else {
        vec![args.group.depth]
    };

    let mut csv = String::from("trial,p,N,n_star,ratio\n");
    let mut max_ratio = 0.0f64;
    let mut empirical_c_p = 0.0f64;
    let mut by_depth = serde_json::Map::new();
    for &depth in &depths {
        if depth < 2 {
            return Err(Failure::Config(
                "coefficient trials need depth ≥ 2 so a proper atom rank exists".to_string(),
            ));
        }
        if let Some(rank) = args.rank {
            if rank == 0 || rank >= depth {
                return Err(Failure::Config(format!(
                    "--rank: rank {rank} is outside 1..{depth}"
                )));
            }
        }
        let spec = GroupSpec::cycled(&radices, depth).map_err(config)?;
        ensure_grid_fits(&spec)?;
        let mut depth_max = 0.0f64;
        for &p in &ps {
            let cfg = BoundSuiteConfig {
                group: spec.clone(),
                p,
                atom_rank: args.rank,
                trials: args.trials,
                seed: args.seed,
                n_max: args.nmax,
            };
            let report = run_bound_suite(&cfg).map_err(config)?;
            for row in &report.rows {
                writeln!(
                    csv,
                    "{},{},{},{},{}",
                    row.trial, row.p, row.depth, row.n_star, row.ratio
                )
                .unwrap();
            }
            max_ratio = max_ratio.max(report.max_ratio);
            empirical_c_p = empirical_c_p.max(report.empirical_c_p);
            depth_max = depth_max.max(report.max_ratio);
        }
        by_depth.insert(depth.to_string(), serde_json::json!(depth_max));
    }

    let content = match args.format {
        Format::Csv => csv,
        Format::Json => {
            let mut summary = serde_json::Map::new();
            summary.insert("empirical_c_p".to_string(), serde_json::json!(empirical_c_p));
            summary.insert("max_ratio".to_string(), serde_json::json!(max_ratio));
            if args.sweep {
                summary.insert(
                    "max_ratio_by_depth".to_string(),
                    serde_json::Value::Object(by_depth),
                );
            }
            format!("{}\n", serde_json::Value::Object(summary))
        }
    };
    emit(&args.out, &content)
}

// ---------------------------------------------------------------------------
// counterexample

fn cmd_counterexample(args: CounterexampleArgs) -> Result<(), Failure> {
    let spec = args.group.build()?;
    ensure_grid_fits(&spec)?;
    let phi = parse_phi(&args.phi, args.p)?;
    match phi.certification().map_err(config)? {
        Certification::Certified => {}
        Certification::AcceptedWithWarning(caveat) => eprintln!("warning: {caveat}"),
    }
    let cfg = CounterexampleConfig {
        group: spec,
        phi,
        budget: args.budget,
        max_terms: args.max_blocks,
    };
    let (_, built, report) = run_counterexample(&cfg).map_err(config)?;

    if let Some(path) = &args.dump_atoms {
        vio::write_decomposition_csv(path, &built.decomposition).map_err(config)?;
        eprintln!("wrote {}", path.display());
    }

    let content = match args.format {
        Format::Csv => {
            let mut csv =
                String::from("k,alpha_k,M_alpha,coeff_numeric,coeff_closed,phi_value,rho_k\n");
            for row in &report.rows {
                writeln!(
                    csv,
                    "{},{},{},{},{},{},{}",
                    row.k,
                    row.alpha,
                    row.m_alpha,
                    row.coeff_numeric,
                    row.coeff_closed,
                    row.phi_value,
                    row.rho
                )
                .unwrap();
            }
            csv
        }
        Format::Json => {
            let summary = serde_json::json!({
                "blocks": report.rows.len(),
                "max_block_rel_err": report.max_block_rel_err,
                "max_offblock_abs": report.max_offblock_abs,
                "monotone": report.monotone,
                "series_sum": report.series_sum,
            });
            format!("{summary}\n")
        }
    };
    emit(&args.out, &content)?;

    if !report.ok() {
        return Err(Failure::Check(format!(
            "spectrum disagrees with the closed form: rel err {:e}, off-block {:e}, monotone {}",
            report.max_block_rel_err, report.max_offblock_abs, report.monotone
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// bench

/// Average seconds per call, after one warmup, over enough iterations to
/// fill ~30 ms (capped so quadratic runs are timed once).
fn time_secs(mut op: impl FnMut()) -> f64 {
    op();
    let start = Instant::now();
    let mut iters = 0u32;
    loop {
        op();
        iters += 1;
        let elapsed = start.elapsed().as_secs_f64();
        if elapsed >= 0.03 || iters >= 64 {
            return elapsed / f64::from(iters);
        }
    }
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let radices = parse_u32_list(&args.group.m, "--m")?;
    let mut csv = String::from("m_n,fast_seconds,naive_seconds,speedup\n");
    for depth in 1..=args.group.depth {
        let spec = GroupSpec::cycled(&radices, depth).map_err(config)?;
        ensure_grid_fits(&spec)?;
        let f = GridFunction::from_fn(&spec, |r| {
            let x = r as f64;
            Complex64::new((0.37 * x).sin(), (0.191 * x).cos())
        });
        let fast = time_secs(|| {
            std::hint::black_box(forward_fast(std::hint::black_box(&f)));
        });
        if spec.points() <= args.naive_cutoff {
            let naive = time_secs(|| {
                std::hint::black_box(forward_naive(std::hint::black_box(&f)));
            });
            writeln!(csv, "{},{},{},{}", spec.points(), fast, naive, naive / fast).unwrap();
        } else {
            writeln!(csv, "{},{},,", spec.points(), fast).unwrap();
        }
    }
    emit(&args.out, &csv)
}
