use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use majlab_cli::check::{evaluate, CheckKind, PairInput};
use majlab_cli::sweep::{run_sweep, sweep_records, write_csv, SweepConfig, SweepRecord};
use majlab_cli::{demo, Summary};
use majlab_core::falsifier::{search_min_slack, SearchConfig, Target};
use majlab_core::gen::GeneratorKind;
use majlab_core::matrix_file::parse_matrix_file;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "majlab",
    version,
    about = "Numerical checks of matrix trace inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one check on two matrix files or on one seeded random pair.
    Verify(VerifyArgs),
    /// Run a seeded sweep and write a CSV report.
    Sweep(SweepArgs),
    /// Search for a pair minimizing an inequality's slack.
    Search(SearchArgs),
    /// Print the worked 2x2 example with all intermediate values.
    Demo,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    check: CheckKind,
    /// Dimension of the random pair (ignored with --a/--b).
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    /// ν grid of the limit probe.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 0.1, 0.01, 0.001])]
    nu_grid: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = majlab_core::tol::DEFAULT_REL_TOL)]
    tol: f64,
    /// First matrix file (T or X).
    #[arg(long, requires = "b")]
    a: Option<PathBuf>,
    /// Second matrix file (S or Y).
    #[arg(long, requires = "a")]
    b: Option<PathBuf>,
    /// Write the CSV record here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON sweep configuration; other flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    check: Option<CheckKind>,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    nu: Vec<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetKind {
    Problem2,
    Conjecture1,
    GtChainEndToEnd,
    GtChainStep,
    Problem2Exploratory,
}

#[derive(Args)]
struct SearchArgs {
    /// JSON search configuration; other flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "check", alias = "target", value_enum)]
    target: Option<TargetKind>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    /// Chain step (1, 2 or 3) for gt-chain-step.
    #[arg(long, default_value_t = 1)]
    step: usize,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    max_evals: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for the result JSON and, on violation, the witness pair.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    if let Some(threads) = std::env::var("THREADS").ok().and_then(|t| t.parse().ok()) {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Sweep(args) => sweep(args),
        Command::Search(args) => search(args),
        Command::Demo => demo_cmd(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn output(path: Option<&PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn verify(args: VerifyArgs) -> anyhow::Result<bool> {
    let param = match args.check.grid() {
        majlab_cli::check::GridUse::P => Some(args.p.context("this check needs --p")?),
        majlab_cli::check::GridUse::Nu => Some(args.nu.context("this check needs --nu")?),
        _ if args.check == CheckKind::P2Elementary => Some(2.0),
        _ => None,
    };
    let (input, n, seed) = match (&args.a, &args.b) {
        (Some(a), Some(b)) => {
            let a = parse_matrix_file(a).with_context(|| format!("reading {}", a.display()))?;
            let b = parse_matrix_file(b).with_context(|| format!("reading {}", b.display()))?;
            let n = a.as_hermitian().n();
            let input = if args.check.accepts_hermitian() {
                PairInput::Hermitian(a.as_hermitian().clone(), b.as_hermitian().clone())
            } else {
                PairInput::Psd(a.into_psd()?, b.into_psd()?)
            };
            (input, n, 0)
        }
        _ => {
            let input = PairInput::generate(
                args.check,
                GeneratorKind::GinibrePsd,
                args.n,
                1.0,
                args.seed,
            )?;
            (input, args.n, args.seed)
        }
    };
    let m = evaluate(args.check, param, &args.nu_grid, &input)?;
    let record = SweepRecord {
        check: args.check,
        n,
        p_or_nu: param,
        trial: 0,
        seed,
        holds: m.holds(args.tol),
        lhs: m.lhs,
        rhs: m.rhs,
        min_slack: m.min_slack,
        wall_time_micros: 0,
    };
    write_csv(output(args.out.as_ref())?, std::slice::from_ref(&record))?;
    Ok(record.holds)
}

fn sweep(args: SweepArgs) -> anyhow::Result<bool> {
    let mut config = match &args.config {
        Some(path) => SweepConfig::from_json_file(path)?,
        None => {
            let check = args.check.context("--check or --config is required")?;
            SweepConfig::new(check, Vec::new(), 1, 0)
        }
    };
    if let Some(check) = args.check {
        config.check = check;
    }
    if !args.n.is_empty() {
        config.dims = args.n;
    }
    if !args.p.is_empty() {
        config.p_grid = args.p;
    }
    if !args.nu.is_empty() {
        config.nu_grid = args.nu;
    }
    if let Some(t) = args.trials {
        config.trials_per_cell = t;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(t) = args.tol {
        config.tol = t;
    }
    let summary = match &args.out {
        Some(path) => run_sweep(&config, path)?,
        None => {
            let records = sweep_records(&config)?;
            write_csv(std::io::stdout().lock(), &records)?;
            Summary::from_records(&records)
        }
    };
    eprintln!("{}", serde_json::to_string(&summary)?);
    Ok(summary.failed == 0)
}

#[derive(Serialize)]
struct SearchReport {
    config: SearchConfig,
    best_slack: f64,
    eval_count: usize,
    per_restart_bests: Vec<f64>,
    violated: bool,
    asserted: bool,
    witness_t: majlab_core::matrix_file::MatrixFile,
    witness_s: majlab_core::matrix_file::MatrixFile,
}

fn search(args: SearchArgs) -> anyhow::Result<bool> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing search config {}", path.display()))?
        }
        None => {
            if args.target.is_none() {
                bail!("--check or --config is required");
            }
            SearchConfig::new(Target::Problem2 { p: 2.0 }, 2, 0)
        }
    };
    if let Some(kind) = args.target {
        let p = || args.p.context("this target needs --p");
        let nu = || args.nu.context("this target needs --nu");
        config.target = match kind {
            TargetKind::Problem2 => Target::Problem2 { p: p()? },
            TargetKind::Conjecture1 => Target::Conjecture1 { p: p()? },
            TargetKind::GtChainEndToEnd => Target::GtChainEndToEnd { nu: nu()? },
            TargetKind::GtChainStep => Target::GtChainStep {
                index: args.step,
                nu: nu()?,
            },
            TargetKind::Problem2Exploratory => Target::Problem2Exploratory { p: p()? },
        };
    }
    if let Some(n) = args.n {
        config.n = n;
    }
    if let Some(r) = args.restarts {
        config.restarts = r;
    }
    if let Some(m) = args.max_evals {
        config.max_evals_per_restart = m;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    let result = search_min_slack(&config)?;
    let kind = majlab_core::matrix_file::MatrixKind::Psd;
    let report = SearchReport {
        config,
        best_slack: result.best_slack,
        eval_count: result.eval_count,
        per_restart_bests: result.per_restart_bests.clone(),
        violated: result.violated,
        asserted: result.asserted,
        witness_t: majlab_core::matrix_file::MatrixFile::from_dense(
            result.witness_t.as_dense(),
            kind,
        ),
        witness_s: majlab_core::matrix_file::MatrixFile::from_dense(
            result.witness_s.as_dense(),
            kind,
        ),
    };
    let json = serde_json::to_string_pretty(&report)?;
    match &args.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("search.json"), format!("{json}\n"))?;
            if result.violated {
                let prefix = format!("witness_n{}_seed{}", config.n, config.seed);
                let (t, s) = result.dump_witnesses(dir, &prefix)?;
                eprintln!("violation witnesses: {} {}", t.display(), s.display());
            }
        }
        None => println!("{json}"),
    }
    eprintln!(
        "best slack {:.6e} over {} evaluations",
        result.best_slack, result.eval_count
    );
    Ok(!result.violated)
}

fn demo_cmd() -> anyhow::Result<bool> {
    let (text, ok) = demo::render()?;
    print!("{text}");
    Ok(ok)
}
