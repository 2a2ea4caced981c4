//! Parameter grids, report records and their CSV / JSON-lines encodings.
//!
//! Configuration comes from a TOML file, command-line flags or both; values
//! given on the command line replace the file's. Cells of a grid are
//! computed in parallel and emitted sorted by `(α, n)`.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coherent::{coherent_overlap, validate_priors, CoherentEnsemble, TransferChannel};
use crate::compression::{
    bpsk_b_recursion, bpsk_register_state, compose_multimode, four_mode_codebook,
    multimode_homodyne_error, per_mode_baseline_error, run_bpsk, run_with_priors,
    threeask_cd_recursion, threeask_register_state, Alphabet, ReceiverRun, MAX_SLICE_AMPLITUDE,
    min_slices,
};
use crate::discrimination::{
    alphabet_helstrom_bound, gram_helstrom_bound, homodyne_ml_error, problem_error,
    receiver_error,
};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, C64};

pub const DEFAULT_SLICE_COUNTS: [usize; 4] = [2, 10, 30, 100];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" | "json" => Ok(OutputFormat::Jsonl),
            other => Err(Error::config(
                "format",
                format!("unknown format '{other}' (expected csv or jsonl)"),
            )),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Jsonl => "jsonl",
        })
    }
}

/// `steps` equally spaced amplitudes from `min` to `max` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaGrid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Default for AlphaGrid {
    fn default() -> Self {
        Self {
            min: 0.0,
            max: 2.0,
            steps: 21,
        }
    }
}

impl AlphaGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.min >= 0.0) {
            return Err(Error::config("alpha_min", format!("must be >= 0, got {}", self.min)));
        }
        if !(self.max.is_finite() && self.max >= self.min) {
            return Err(Error::config(
                "alpha_max",
                format!("must be >= alpha_min = {}, got {}", self.min, self.max),
            ));
        }
        if self.steps < 2 {
            return Err(Error::config("alpha_steps", format!("must be >= 2, got {}", self.steps)));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// Alpha-grid fields as they appear in a config file; any may be omitted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialGrid {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub steps: Option<usize>,
}

/// Unvalidated settings from a config file or the command line.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub alphabet: Option<Alphabet>,
    pub channel: Option<TransferChannel>,
    pub slice_counts: Option<Vec<usize>>,
    /// Single amplitude for the `run`, `gram` and `multimode` reports.
    pub alpha: Option<f64>,
    pub alpha_grid: Option<PartialGrid>,
    pub priors: Option<Vec<f64>>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl PartialConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config("config", e.message().to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("reading {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Fields set in `overrides` replace those in `self`.
    pub fn merge(self, overrides: PartialConfig) -> Self {
        let grid = match (self.alpha_grid, overrides.alpha_grid) {
            (Some(base), Some(top)) => Some(PartialGrid {
                min: top.min.or(base.min),
                max: top.max.or(base.max),
                steps: top.steps.or(base.steps),
            }),
            (base, top) => top.or(base),
        };
        Self {
            alphabet: overrides.alphabet.or(self.alphabet),
            channel: overrides.channel.or(self.channel),
            slice_counts: overrides.slice_counts.or(self.slice_counts),
            alpha: overrides.alpha.or(self.alpha),
            alpha_grid: grid,
            priors: overrides.priors.or(self.priors),
            output: overrides.output.or(self.output),
            format: overrides.format.or(self.format),
        }
    }

    /// Fills defaults and validates.
    pub fn resolve(self) -> Result<SweepConfig> {
        let defaults = AlphaGrid::default();
        let grid = self.alpha_grid.unwrap_or_default();
        let mut slice_counts = self
            .slice_counts
            .unwrap_or_else(|| DEFAULT_SLICE_COUNTS.to_vec());
        slice_counts.sort_unstable();
        slice_counts.dedup();
        let config = SweepConfig {
            alphabet: self.alphabet.unwrap_or(Alphabet::Bpsk),
            channel: self.channel.unwrap_or(TransferChannel::ExactPure),
            slice_counts,
            alpha: self.alpha,
            alpha_grid: AlphaGrid {
                min: grid.min.unwrap_or(defaults.min),
                max: grid.max.unwrap_or(defaults.max),
                steps: grid.steps.unwrap_or(defaults.steps),
            },
            priors: self.priors,
            output: self.output,
            format: self.format.unwrap_or_default(),
        };
        config.validate()?;
        Ok(config)
    }
}

/// Validated settings for every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub alphabet: Alphabet,
    pub channel: TransferChannel,
    /// Sorted, without duplicates.
    pub slice_counts: Vec<usize>,
    pub alpha: Option<f64>,
    pub alpha_grid: AlphaGrid,
    pub priors: Option<Vec<f64>>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for SweepConfig {
    fn default() -> Self {
        PartialConfig::default()
            .resolve()
            .expect("defaults are valid")
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.alpha_grid.validate()?;
        if let Some(a) = self.alpha {
            if !(a.is_finite() && a >= 0.0) {
                return Err(Error::config("alpha", format!("must be >= 0, got {a}")));
            }
        }
        if self.slice_counts.is_empty() {
            return Err(Error::config("n", "at least one slice count is required"));
        }
        if self.slice_counts.contains(&0) {
            return Err(Error::config("n", "slice counts must be >= 1"));
        }
        if let Some(p) = &self.priors {
            let k = self.alphabet.labels().len();
            if self.alphabet == Alphabet::Multimode {
                return Err(Error::config("priors", "multimode codewords use equal priors"));
            }
            if p.len() != k {
                return Err(Error::config(
                    "priors",
                    format!("{} values for the {k} hypotheses of {}", p.len(), self.alphabet),
                ));
            }
            validate_priors(p).map_err(|e| Error::config("priors", e.to_string()))?;
        }
        Ok(())
    }

    /// Priors in label order, defaulting to equal weights.
    pub fn priors_or_uniform(&self) -> Vec<f64> {
        let k = match self.alphabet {
            Alphabet::Multimode => four_mode_codebook().len(),
            a => a.labels().len(),
        };
        self.priors.clone().unwrap_or_else(|| vec![1.0 / k as f64; k])
    }

    /// The single amplitude for point reports.
    pub fn single_alpha(&self) -> Result<f64> {
        self.alpha
            .ok_or_else(|| Error::config("alpha", "a single amplitude is required (--alpha)"))
    }

    pub fn single_n(&self) -> Result<usize> {
        match self.slice_counts.as_slice() {
            [n] => Ok(*n),
            _ => Err(Error::config("n", "expects a single slice count")),
        }
    }

    /// `--alpha` if given, otherwise the grid.
    pub fn alphas(&self) -> Vec<f64> {
        match self.alpha {
            Some(a) => vec![a],
            None => self.alpha_grid.points(),
        }
    }
}

/// One `(α, n)` cell of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alphabet: Alphabet,
    pub alpha: f64,
    pub n: usize,
    pub channel: TransferChannel,
    pub receiver_error: Option<f64>,
    pub helstrom_bound: f64,
    pub homodyne_error: f64,
    pub skipped: bool,
}

fn is_guard(e: &Error) -> bool {
    matches!(e, Error::SliceAmplitudeTooLarge { .. })
}

/// Minimum error of the uncompressed alphabet.
pub fn helstrom_bound(alphabet: Alphabet, alpha: f64, priors: &[f64]) -> Result<f64> {
    let uniform = priors.iter().all(|p| (p - priors[0]).abs() < 1e-15);
    if alpha == 0.0 {
        return Ok(1.0 - priors.iter().copied().fold(0.0, f64::max));
    }
    if uniform || alphabet == Alphabet::Multimode {
        return alphabet_helstrom_bound(alphabet, alpha);
    }
    let amps: Vec<C64> = alphabet
        .labels()
        .iter()
        .map(|&j| C64::new(j as f64 * alpha, 0.0))
        .collect();
    let ens = CoherentEnsemble::new(amps, priors.to_vec())?;
    gram_helstrom_bound(&ens.gram_matrix(), priors)
}

/// Homodyne baseline for the alphabet.
pub fn homodyne_error(alphabet: Alphabet, alpha: f64, priors: &[f64]) -> Result<f64> {
    if alphabet == Alphabet::Multimode {
        return multimode_homodyne_error(alpha, &four_mode_codebook());
    }
    if alpha == 0.0 {
        return Ok(1.0 - priors.iter().copied().fold(0.0, f64::max));
    }
    let amps: Vec<C64> = alphabet
        .labels()
        .iter()
        .map(|&j| C64::new(j as f64 * alpha, 0.0))
        .collect();
    homodyne_ml_error(&CoherentEnsemble::new(amps, priors.to_vec())?)
}

fn sweep_cell(config: &SweepConfig, alpha: f64, n: usize) -> Result<SweepRow> {
    let priors = config.priors_or_uniform();
    let receiver = match config.alphabet {
        Alphabet::Multimode => multimode_joint_error(alpha, n, config.channel),
        a => run_with_priors(a, alpha, priors.clone(), n, config.channel)
            .and_then(|run| receiver_error(&run)),
    };
    let (receiver_error, skipped) = match receiver {
        Ok(e) => (Some(e), false),
        Err(e) if is_guard(&e) => (None, true),
        Err(e) => return Err(e),
    };
    Ok(SweepRow {
        alphabet: config.alphabet,
        alpha,
        n,
        channel: config.channel,
        receiver_error,
        helstrom_bound: helstrom_bound(config.alphabet, alpha, &priors)?,
        homodyne_error: homodyne_error(config.alphabet, alpha, &priors)?,
        skipped,
    })
}

fn multimode_joint_error(alpha: f64, n: usize, channel: TransferChannel) -> Result<f64> {
    let codebook = four_mode_codebook();
    let mode = run_bpsk(alpha, n, channel)?;
    let prob = compose_multimode(&vec![mode; codebook[0].len()], &codebook)?;
    problem_error(&prob)
}

/// Evaluates `f` on every `(α, n)` cell in parallel and returns the results
/// in `(α, n)` order. The first failing cell in that order decides the error.
fn grid_map<T: Send>(
    config: &SweepConfig,
    f: impl Fn(f64, usize) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let cells: Vec<(f64, usize)> = config
        .alphas()
        .into_iter()
        .flat_map(|a| config.slice_counts.iter().map(move |&n| (a, n)))
        .collect();
    let results: Vec<Result<T>> = cells.par_iter().map(|&(a, n)| f(a, n)).collect();
    results.into_iter().collect()
}

/// Receiver error, Helstrom bound and homodyne baseline on the whole grid.
/// Cells violating the slice-amplitude guard are kept with `skipped = true`.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    grid_map(config, |a, n| sweep_cell(config, a, n))
}

/// One entry of a Gram comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramEntry {
    pub alphabet: Alphabet,
    pub alpha: f64,
    pub n: usize,
    pub i: usize,
    pub j: usize,
    pub coherent_re: f64,
    pub coherent_im: f64,
    pub compressed_re: f64,
    pub compressed_im: f64,
    pub deviation: f64,
}

fn check_guard(alpha: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::config("n", "slice counts must be >= 1"));
    }
    let beta = alpha / (n as f64).sqrt();
    if beta >= MAX_SLICE_AMPLITUDE {
        return Err(Error::SliceAmplitudeTooLarge {
            beta,
            limit: MAX_SLICE_AMPLITUDE,
            min_slices: min_slices(alpha),
        });
    }
    Ok(beta)
}

fn register_states(alphabet: Alphabet, alpha: f64, n: usize) -> Result<Vec<ComplexVector>> {
    check_guard(alpha, n)?;
    Ok(match alphabet {
        Alphabet::Bpsk | Alphabet::Multimode => {
            let b = bpsk_b_recursion(alpha, n, n)?;
            vec![bpsk_register_state(-1, b), bpsk_register_state(1, b)]
        }
        Alphabet::ThreeAsk => {
            let (c, d) = threeask_cd_recursion(alpha, n, n)?;
            [-1, 0, 1]
                .iter()
                .map(|&j| threeask_register_state(j, c, d))
                .collect()
        }
    })
}

/// Coherent Gram matrix of the alphabet next to the Gram matrix of the ideal
/// compressed registers after `n` slices. For `multimode` the hypotheses are
/// the four-mode codewords.
pub fn gram_matrices(alphabet: Alphabet, alpha: f64, n: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let states = register_states(alphabet, alpha, n)?;
    match alphabet {
        Alphabet::Multimode => {
            let codebook = four_mode_codebook();
            let index = |s: i32| usize::from(s > 0);
            let k = codebook.len();
            let coherent = ComplexMatrix::from_fn(k, k, |a, b| {
                codebook[a]
                    .iter()
                    .zip(&codebook[b])
                    .map(|(&s, &t)| coherent_overlap(C64::new(s as f64 * alpha, 0.0), C64::new(t as f64 * alpha, 0.0)))
                    .product()
            });
            let compressed = ComplexMatrix::from_fn(k, k, |a, b| {
                codebook[a]
                    .iter()
                    .zip(&codebook[b])
                    .map(|(&s, &t)| states[index(s)].inner(&states[index(t)]))
                    .product()
            });
            Ok((coherent, compressed))
        }
        a => {
            let amps: Vec<C64> = a.labels().iter().map(|&j| C64::new(j as f64 * alpha, 0.0)).collect();
            let coherent = crate::coherent::gram_of_amplitudes(&amps);
            let k = states.len();
            let compressed = ComplexMatrix::from_fn(k, k, |i, j| states[i].inner(&states[j]));
            Ok((coherent, compressed))
        }
    }
}

pub fn gram_report(alphabet: Alphabet, alpha: f64, n: usize) -> Result<Vec<GramEntry>> {
    let (coherent, compressed) = gram_matrices(alphabet, alpha, n)?;
    let k = coherent.rows();
    let mut rows = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let (g, m) = (coherent[(i, j)], compressed[(i, j)]);
            rows.push(GramEntry {
                alphabet,
                alpha,
                n,
                i,
                j,
                coherent_re: g.re,
                coherent_im: g.im,
                compressed_re: m.re,
                compressed_im: m.im,
                deviation: (g - m).norm(),
            });
        }
    }
    Ok(rows)
}

/// A single receiver run with its structural diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub alphabet: Alphabet,
    pub alpha: f64,
    pub n: usize,
    pub channel: TransferChannel,
    pub receiver_error: f64,
    pub helstrom_bound: f64,
    pub homodyne_error: f64,
    pub max_step_residual: f64,
    pub max_unitarity_residual: f64,
    pub max_trace_deviation: f64,
    pub min_register_eigenvalue: f64,
}

fn min_eigenvalue(states: &[ComplexMatrix]) -> Result<f64> {
    let mut min = f64::INFINITY;
    for s in states {
        min = min.min(s.eigh()?.values[0]);
    }
    Ok(min)
}

pub fn run_record(config: &SweepConfig) -> Result<RunRecord> {
    let alpha = config.single_alpha()?;
    let n = config.single_n()?;
    let priors = config.priors_or_uniform();
    let (run, error): (ReceiverRun, f64) = match config.alphabet {
        Alphabet::Multimode => {
            let run = run_bpsk(alpha, n, config.channel)?;
            let codebook = four_mode_codebook();
            let prob = compose_multimode(&vec![run.clone(); codebook[0].len()], &codebook)?;
            (run, problem_error(&prob)?)
        }
        a => {
            let run = run_with_priors(a, alpha, priors.clone(), n, config.channel)?;
            let e = receiver_error(&run)?;
            (run, e)
        }
    };
    Ok(RunRecord {
        alphabet: config.alphabet,
        alpha,
        n,
        channel: config.channel,
        receiver_error: error,
        helstrom_bound: helstrom_bound(config.alphabet, alpha, &priors)?,
        homodyne_error: homodyne_error(config.alphabet, alpha, &priors)?,
        max_step_residual: run.max_step_residual,
        max_unitarity_residual: run.max_unitarity_residual,
        max_trace_deviation: run.max_trace_deviation,
        min_register_eigenvalue: min_eigenvalue(&run.final_states)?,
    })
}

/// Joint and per-mode errors for the four-mode codewords.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultimodeRow {
    pub alpha: f64,
    pub n: usize,
    pub channel: TransferChannel,
    pub joint_error: Option<f64>,
    pub per_mode_error: Option<f64>,
    pub helstrom_bound: f64,
    pub homodyne_error: f64,
    pub skipped: bool,
}

fn multimode_cell(alpha: f64, n: usize, channel: TransferChannel) -> Result<MultimodeRow> {
    let codebook = four_mode_codebook();
    let errors = run_bpsk(alpha, n, channel).and_then(|mode| {
        let runs = vec![mode; codebook[0].len()];
        let prob = compose_multimode(&runs, &codebook)?;
        Ok((problem_error(&prob)?, per_mode_baseline_error(&runs, &codebook)?))
    });
    let (joint_error, per_mode_error, skipped) = match errors {
        Ok((j, p)) => (Some(j), Some(p), false),
        Err(e) if is_guard(&e) => (None, None, true),
        Err(e) => return Err(e),
    };
    Ok(MultimodeRow {
        alpha,
        n,
        channel,
        joint_error,
        per_mode_error,
        helstrom_bound: alphabet_helstrom_bound(Alphabet::Multimode, alpha)?,
        homodyne_error: multimode_homodyne_error(alpha, &codebook)?,
        skipped,
    })
}

/// Multimode rows for `--alpha` (or the grid) and every slice count.
pub fn run_multimode_rows(config: &SweepConfig) -> Result<Vec<MultimodeRow>> {
    grid_map(config, |a, n| multimode_cell(a, n, config.channel))
}

/// Writes records with a header row (CSV) or one JSON object per line.
pub fn write_records<T: Serialize, W: Write>(records: &[T], format: OutputFormat, out: W) -> Result<()> {
    let io = |e: &dyn fmt::Display| Error::Io(e.to_string());
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                w.serialize(r).map_err(|e| io(&e))?;
            }
            w.flush().map_err(|e| io(&e))?;
        }
        OutputFormat::Jsonl => {
            let mut out = std::io::BufWriter::new(out);
            for r in records {
                serde_json::to_writer(&mut out, r).map_err(|e| io(&e))?;
                out.write_all(b"\n").map_err(|e| io(&e))?;
            }
            out.flush().map_err(|e| io(&e))?;
        }
    }
    Ok(())
}

/// Writes to `config.output`, or to `stdout` when no path is set.
pub fn emit<T: Serialize>(records: &[T], config: &SweepConfig) -> Result<()> {
    match &config.output {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| Error::Io(format!("creating {}: {e}", path.display())))?;
            write_records(records, config.format, file)
        }
        None => write_records(records, config.format, std::io::stdout().lock()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_hit_both_ends() {
        let g = AlphaGrid { min: 0.1, max: 1.7, steps: 9 };
        let p = g.points();
        assert_eq!(p.len(), 9);
        assert_eq!(p[0], 0.1);
        assert_eq!(p[8], 1.7);
        assert!(AlphaGrid { min: -0.1, max: 1.0, steps: 3 }.validate().is_err());
        assert!(AlphaGrid { min: 0.0, max: 1.0, steps: 1 }.validate().is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = PartialConfig::from_toml_str(
            r#"
            alphabet = "3ask"
            channel = "stirap"
            slice_counts = [30, 2, 10, 2]
            [alpha_grid]
            min = 0.0
            max = 1.0
            steps = 5
            "#,
        )
        .unwrap();
        let flags = PartialConfig {
            channel: Some(TransferChannel::IdealSwap),
            alpha_grid: Some(PartialGrid { steps: Some(3), ..Default::default() }),
            ..Default::default()
        };
        let c = file.merge(flags).resolve().unwrap();
        assert_eq!(c.alphabet, Alphabet::ThreeAsk);
        assert_eq!(c.channel, TransferChannel::IdealSwap);
        assert_eq!(c.slice_counts, vec![2, 10, 30]);
        assert_eq!(c.alpha_grid, AlphaGrid { min: 0.0, max: 1.0, steps: 3 });
    }

    #[test]
    fn config_errors_name_the_field() {
        let bad = PartialConfig { slice_counts: Some(vec![0]), ..Default::default() };
        match bad.resolve() {
            Err(Error::Config { field, .. }) => assert_eq!(field, "n"),
            other => panic!("{other:?}"),
        }
        let priors = PartialConfig { priors: Some(vec![0.5, 0.2, 0.3]), ..Default::default() };
        assert!(matches!(priors.resolve(), Err(Error::Config { .. })));
        assert!(PartialConfig::from_toml_str("colour = 3").is_err());
    }

    #[test]
    fn zero_amplitude_row_is_a_guess() {
        for alphabet in [Alphabet::Bpsk, Alphabet::ThreeAsk, Alphabet::Multimode] {
            let config = PartialConfig {
                alphabet: Some(alphabet),
                alpha: Some(0.0),
                slice_counts: Some(vec![4]),
                ..Default::default()
            }
            .resolve()
            .unwrap();
            let rows = run_sweep(&config).unwrap();
            let k = if alphabet == Alphabet::Bpsk { 2.0 } else { 3.0 };
            let guess = (k - 1.0) / k;
            let r = &rows[0];
            assert!((r.receiver_error.unwrap() - guess).abs() < 1e-10);
            assert!((r.helstrom_bound - guess).abs() < 1e-15);
            assert!((r.homodyne_error - guess).abs() < 1e-15);
        }
    }

    #[test]
    fn guard_cells_are_skipped_not_dropped() {
        let config = PartialConfig {
            alpha_grid: Some(PartialGrid { min: Some(1.0), max: Some(2.0), steps: Some(2) }),
            slice_counts: Some(vec![2, 10]),
            ..Default::default()
        }
        .resolve()
        .unwrap();
        let rows = run_sweep(&config).unwrap();
        let keys: Vec<(f64, usize, bool)> = rows.iter().map(|r| (r.alpha, r.n, r.skipped)).collect();
        assert_eq!(keys, vec![(1.0, 2, false), (1.0, 10, false), (2.0, 2, true), (2.0, 10, false)]);
        assert!(rows[2].receiver_error.is_none());
    }

    #[test]
    fn unequal_priors_flow_through() {
        let config = PartialConfig {
            priors: Some(vec![0.3, 0.7]),
            alpha: Some(0.6),
            slice_counts: Some(vec![50]),
            channel: Some(TransferChannel::Stirap),
            ..Default::default()
        }
        .resolve()
        .unwrap();
        let row = &run_sweep(&config).unwrap()[0];
        assert!(row.receiver_error.unwrap() >= row.helstrom_bound - 1e-9);
        let g: f64 = (-2.0 * 0.36f64).exp();
        let expected = 0.5 * (1.0 - (1.0 - 4.0 * 0.21 * g * g).sqrt());
        assert!((row.helstrom_bound - expected).abs() < 1e-15);
    }

    #[test]
    fn bpsk_gram_uses_register_overlap() {
        let rows = gram_report(Alphabet::Bpsk, 1.0, 10).unwrap();
        let off = rows.iter().find(|r| r.i == 0 && r.j == 1).unwrap();
        assert!((off.compressed_re - (0.9f64 / 1.1).powi(10)).abs() < 1e-13);
        assert!((off.coherent_re - (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn csv_round_trips_floats() {
        let rows = vec![SweepRow {
            alphabet: Alphabet::ThreeAsk,
            alpha: 0.1 + 0.2,
            n: 10,
            channel: TransferChannel::Stirap,
            receiver_error: Some(1.0 / 3.0),
            helstrom_bound: 2.0f64.sqrt() / 10.0,
            homodyne_error: 1e-300,
            skipped: false,
        }];
        let mut buf = Vec::new();
        write_records(&rows, OutputFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("alphabet,alpha,n,channel,receiver_error,helstrom_bound,homodyne_error,skipped\n"));
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let back: SweepRow = rdr.deserialize().next().unwrap().unwrap();
        assert_eq!(back, rows[0]);

        let mut buf = Vec::new();
        write_records(&rows, OutputFormat::Jsonl, &mut buf).unwrap();
        let back: SweepRow = serde_json::from_slice(buf.strip_suffix(b"\n").unwrap()).unwrap();
        assert_eq!(back, rows[0]);
    }
}
