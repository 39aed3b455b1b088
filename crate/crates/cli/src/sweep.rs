//! Seeded parameter sweeps written as CSV.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context};
use majlab_core::gen::{mix_seed, GeneratorKind, GeneratorSpec};
use majlab_core::tol::{DEFAULT_REL_TOL, MAX_DIM};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{evaluate, CheckKind, GridUse, PairInput};

pub const CSV_HEADER: [&str; 10] = [
    "check",
    "n",
    "p_or_nu",
    "trial",
    "seed",
    "lhs",
    "rhs",
    "min_slack",
    "holds",
    "wall_time_micros",
];

/// Ensemble for sweep trials; dimension and seed come from the sweep cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorTemplate {
    #[serde(flatten)]
    pub kind: GeneratorKind,
    #[serde(default = "one")]
    pub scale: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for GeneratorTemplate {
    fn default() -> Self {
        Self {
            kind: GeneratorKind::GinibrePsd,
            scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub check: CheckKind,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub p_grid: Vec<f64>,
    #[serde(default)]
    pub nu_grid: Vec<f64>,
    pub trials_per_cell: usize,
    #[serde(default)]
    pub generator: GeneratorTemplate,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Fill `wall_time_micros`. Off by default so that output bytes depend
    /// on the configuration alone.
    #[serde(default)]
    pub record_timing: bool,
}

fn default_tol() -> f64 {
    DEFAULT_REL_TOL
}

/// One `(n, grid value)` combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub n: usize,
    pub param: Option<f64>,
}

impl SweepConfig {
    pub fn new(check: CheckKind, dims: Vec<usize>, trials_per_cell: usize, seed: u64) -> Self {
        Self {
            check,
            dims,
            p_grid: Vec::new(),
            nu_grid: Vec::new(),
            trials_per_cell,
            generator: GeneratorTemplate::default(),
            seed,
            tol: DEFAULT_REL_TOL,
            record_timing: false,
        }
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> anyhow::Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("parsing sweep config {}", path.display()))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.dims.is_empty() {
            bail!("dims must not be empty");
        }
        for &n in &self.dims {
            GeneratorSpec {
                kind: self.generator.kind,
                n,
                scale: self.generator.scale,
                seed: 0,
            }
            .validate()?;
            if n > MAX_DIM {
                bail!("dimension {n} exceeds {MAX_DIM}");
            }
        }
        if self.trials_per_cell == 0 {
            bail!("trials_per_cell must be at least 1");
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            bail!("tol must be positive, got {}", self.tol);
        }
        if !self.check.accepts_generator(self.generator.kind) {
            bail!(
                "generator {:?} cannot feed the {} check",
                self.generator.kind,
                self.check.name()
            );
        }
        let nu_ok = |nu: f64| nu > 0.0 && nu <= 1.0;
        match self.check.grid() {
            GridUse::P => {
                if self.p_grid.is_empty() {
                    bail!("the {} check needs a nonempty p_grid", self.check.name());
                }
                if let Some(p) = self.p_grid.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
                    bail!("p must be positive, got {p}");
                }
            }
            GridUse::Nu | GridUse::WholeNuGrid => {
                if self.nu_grid.is_empty() {
                    bail!("the {} check needs a nonempty nu_grid", self.check.name());
                }
                if let Some(nu) = self.nu_grid.iter().find(|nu| !nu_ok(**nu)) {
                    bail!("nu must lie in (0, 1], got {nu}");
                }
                if self.check.grid() == GridUse::WholeNuGrid
                    && self.nu_grid.windows(2).any(|w| w[1] >= w[0])
                {
                    bail!("nu_grid must be strictly decreasing for the limit probe");
                }
            }
            GridUse::None => {}
        }
        Ok(())
    }

    /// Cells in canonical order: dimensions outer, grid values inner.
    pub fn cells(&self) -> Vec<Cell> {
        let params: Vec<Option<f64>> = match self.check.grid() {
            GridUse::P => self.p_grid.iter().map(|&p| Some(p)).collect(),
            GridUse::Nu => self.nu_grid.iter().map(|&nu| Some(nu)).collect(),
            GridUse::WholeNuGrid => vec![None],
            GridUse::None if self.check == CheckKind::P2Elementary => vec![Some(2.0)],
            GridUse::None => vec![None],
        };
        self.dims
            .iter()
            .flat_map(|&n| params.iter().map(move |&param| (n, param)))
            .enumerate()
            .map(|(index, (n, param))| Cell { index, n, param })
            .collect()
    }
}

/// Seed of trial `trial` in cell `cell`.
pub fn trial_seed(seed: u64, cell: usize, trial: usize) -> u64 {
    mix_seed(mix_seed(seed, cell as u64), trial as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub check: CheckKind,
    pub n: usize,
    pub p_or_nu: Option<f64>,
    pub trial: usize,
    pub seed: u64,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub min_slack: f64,
    pub holds: bool,
    pub wall_time_micros: u64,
}

pub fn format_float(x: f64) -> String {
    // Adding zero maps -0.0 to 0.0.
    format!("{:.16e}", x + 0.0)
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|&v| format_float(v))
        .collect::<Vec<_>>()
        .join(";")
}

impl SweepRecord {
    pub fn csv_fields(&self) -> [String; 10] {
        [
            self.check.name().to_string(),
            self.n.to_string(),
            self.p_or_nu.map(format_float).unwrap_or_default(),
            self.trial.to_string(),
            self.seed.to_string(),
            join(&self.lhs),
            join(&self.rhs),
            format_float(self.min_slack),
            self.holds.to_string(),
            self.wall_time_micros.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub held: usize,
    pub failed: usize,
    pub min_slack: f64,
}

impl Summary {
    pub fn from_records(records: &[SweepRecord]) -> Self {
        let held = records.iter().filter(|r| r.holds).count();
        Self {
            total: records.len(),
            held,
            failed: records.len() - held,
            min_slack: records
                .iter()
                .map(|r| r.min_slack)
                .fold(f64::INFINITY, f64::min),
        }
    }
}

/// Runs one trial of a cell.
pub fn run_trial(config: &SweepConfig, cell: Cell, trial: usize) -> anyhow::Result<SweepRecord> {
    let seed = trial_seed(config.seed, cell.index, trial);
    let start = Instant::now();
    let input = PairInput::generate(
        config.check,
        config.generator.kind,
        cell.n,
        config.generator.scale,
        seed,
    )?;
    let m = evaluate(config.check, cell.param, &config.nu_grid, &input)
        .with_context(|| format!("{} n={} trial={trial}", config.check.name(), cell.n))?;
    let wall_time_micros = if config.record_timing {
        start.elapsed().as_micros() as u64
    } else {
        0
    };
    Ok(SweepRecord {
        check: config.check,
        n: cell.n,
        p_or_nu: cell.param,
        trial,
        seed,
        holds: m.holds(config.tol),
        lhs: m.lhs,
        rhs: m.rhs,
        min_slack: m.min_slack,
        wall_time_micros,
    })
}

/// All records of a sweep in canonical `(cell, trial)` order. Trials run in
/// parallel; the order and contents do not depend on scheduling.
pub fn sweep_records(config: &SweepConfig) -> anyhow::Result<Vec<SweepRecord>> {
    config.validate()?;
    let jobs: Vec<(Cell, usize)> = config
        .cells()
        .into_iter()
        .flat_map(|cell| (0..config.trials_per_cell).map(move |t| (cell, t)))
        .collect();
    jobs.into_par_iter()
        .map(|(cell, trial)| run_trial(config, cell, trial))
        .collect()
}

pub fn write_csv<W: Write>(out: W, records: &[SweepRecord]) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.csv_fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the sweep, writes the CSV to `out_path` and returns the counts.
pub fn run_sweep(config: &SweepConfig, out_path: impl AsRef<Path>) -> anyhow::Result<Summary> {
    let records = sweep_records(config)?;
    let path = out_path.as_ref();
    let file =
        std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_csv(std::io::BufWriter::new(file), &records)?;
    Ok(Summary::from_records(&records))
}
