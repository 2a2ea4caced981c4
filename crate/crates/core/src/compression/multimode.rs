//! Codewords of BPSK symbols spread over several optical modes.
//!
//! Every mode is sliced and compressed by its own BPSK receiver. A codeword
//! then leaves the registers in the product of the per-mode final states
//! selected by its signs, and the codewords are discriminated jointly.

use crate::coherent::TransferChannel;
use crate::compression::receiver::{run_bpsk, Alphabet, ReceiverRun};
use crate::discrimination::{
    alphabet_helstrom_bound, helstrom_measurement, normal_tail, problem_error,
    DiscriminationProblem,
};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Three four-mode codewords `(++−−)`, `(−++−)`, `(−−++)`. Neighbouring
/// words differ in two modes and the outer pair in all four.
pub fn four_mode_codebook() -> Vec<Vec<i32>> {
    vec![vec![1, 1, -1, -1], vec![-1, 1, 1, -1], vec![-1, -1, 1, 1]]
}

fn check_codebook(modes: usize, codebook: &[Vec<i32>]) -> Result<()> {
    if codebook.len() < 2 {
        return Err(Error::InvalidParameter("codebook needs at least two words".into()));
    }
    for (k, word) in codebook.iter().enumerate() {
        if word.len() != modes {
            return Err(Error::InvalidParameter(format!(
                "codeword {k} has {} symbols for {modes} modes",
                word.len()
            )));
        }
        if word.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter(format!(
                "codeword {k} contains a symbol other than ±1: {word:?}"
            )));
        }
    }
    for i in 0..codebook.len() {
        for j in i + 1..codebook.len() {
            if codebook[i] == codebook[j] {
                return Err(Error::InvalidParameter(format!("codewords {i} and {j} coincide")));
            }
        }
    }
    Ok(())
}

fn check_runs(mode_runs: &[ReceiverRun]) -> Result<()> {
    let first = mode_runs
        .first()
        .ok_or_else(|| Error::InvalidParameter("no mode runs".into()))?;
    for (m, run) in mode_runs.iter().enumerate() {
        if run.alphabet != Alphabet::Bpsk && run.alphabet != Alphabet::Multimode {
            return Err(Error::InvalidParameter(format!(
                "mode {m} was compressed as {}, expected bpsk",
                run.alphabet
            )));
        }
        if run.n != first.n || run.channel != first.channel {
            return Err(Error::InvalidParameter(format!(
                "mode {m} uses n = {}, {} but mode 0 uses n = {}, {}",
                run.n, run.channel, first.n, first.channel
            )));
        }
    }
    Ok(())
}

/// Joint register states of each codeword, with equal priors.
pub fn compose_multimode(
    mode_runs: &[ReceiverRun],
    codebook: &[Vec<i32>],
) -> Result<DiscriminationProblem> {
    check_runs(mode_runs)?;
    check_codebook(mode_runs.len(), codebook)?;
    let states = codebook
        .iter()
        .map(|word| {
            let mut joint = ComplexMatrix::identity(1);
            for (run, &s) in mode_runs.iter().zip(word) {
                let rho = run.state_for(s).ok_or_else(|| {
                    Error::InvalidParameter(format!("mode run has no hypothesis {s}"))
                })?;
                joint = joint.kron(rho);
            }
            Ok(joint)
        })
        .collect::<Result<Vec<_>>>()?;
    DiscriminationProblem::with_uniform_priors(states)
}

/// Error of deciding each mode separately and then picking the most likely
/// codeword from the tuple of per-mode outcomes.
///
/// `confusion[m][o][s]` is the probability that mode `m` reports sign index
/// `o` when it carries sign index `s` (index 0 is `−`, 1 is `+`).
pub fn product_decision_error(
    confusion: &[[[f64; 2]; 2]],
    codebook: &[Vec<i32>],
    priors: &[f64],
) -> Result<f64> {
    check_codebook(confusion.len(), codebook)?;
    if priors.len() != codebook.len() {
        return Err(Error::InvalidParameter(format!(
            "{} priors for {} codewords",
            priors.len(),
            codebook.len()
        )));
    }
    let modes = confusion.len();
    let index = |s: i32| usize::from(s > 0);
    let mut success = 0.0;
    for outcome in 0..1usize << modes {
        let best = codebook
            .iter()
            .zip(priors)
            .map(|(word, &p)| {
                p * word
                    .iter()
                    .enumerate()
                    .map(|(m, &s)| confusion[m][(outcome >> m) & 1][index(s)])
                    .product::<f64>()
            })
            .fold(0.0, f64::max);
        success += best;
    }
    Ok(1.0 - success)
}

/// Per-mode Helstrom measurement (designed for equal priors) followed by
/// the maximum-likelihood codeword decision.
pub fn per_mode_baseline_error(mode_runs: &[ReceiverRun], codebook: &[Vec<i32>]) -> Result<f64> {
    check_runs(mode_runs)?;
    let mut confusion = Vec::with_capacity(mode_runs.len());
    for run in mode_runs {
        let minus = run.state_for(-1).ok_or_else(|| Error::InvalidParameter("missing -1".into()))?;
        let plus = run.state_for(1).ok_or_else(|| Error::InvalidParameter("missing +1".into()))?;
        let (pi_minus, pi_plus) = helstrom_measurement(minus, plus, 0.5)?;
        let prob = |e: &ComplexMatrix, rho: &ComplexMatrix| (e * rho).trace().re.clamp(0.0, 1.0);
        confusion.push([
            [prob(&pi_minus, minus), prob(&pi_minus, plus)],
            [prob(&pi_plus, minus), prob(&pi_plus, plus)],
        ]);
    }
    let k = codebook.len();
    product_decision_error(&confusion, codebook, &vec![1.0 / k as f64; k])
}

/// Homodyne sign decision on every mode followed by the maximum-likelihood
/// codeword decision.
pub fn multimode_homodyne_error(alpha: f64, codebook: &[Vec<i32>]) -> Result<f64> {
    let modes = codebook.first().map_or(0, Vec::len);
    let flip = normal_tail(2.0 * alpha);
    let confusion = vec![[[1.0 - flip, flip], [flip, 1.0 - flip]]; modes];
    let k = codebook.len();
    product_decision_error(&confusion, codebook, &vec![1.0 / k as f64; k])
}

/// `√tr(ρ_a ρ_b)`: the overlap modulus of pure states.
pub fn pure_overlap_moduli(prob: &DiscriminationProblem) -> ComplexMatrix {
    let states = prob.states();
    ComplexMatrix::from_fn(states.len(), states.len(), |a, b| {
        let f = (&states[a] * &states[b]).trace().re.max(0.0);
        crate::linalg::C64::new(f.sqrt(), 0.0)
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultimodeReport {
    pub alpha: f64,
    pub n: usize,
    pub channel: TransferChannel,
    pub joint_error: f64,
    pub per_mode_error: f64,
    pub helstrom_bound: f64,
    pub homodyne_error: f64,
    /// Overlap moduli of the joint register states, row-major.
    pub codeword_overlaps: Vec<f64>,
}

/// Full multimode comparison for the four-mode codebook.
pub fn run_multimode(alpha: f64, n: usize, channel: TransferChannel) -> Result<MultimodeReport> {
    let codebook = four_mode_codebook();
    let mode = run_bpsk(alpha, n, channel)?;
    let runs = vec![mode; codebook[0].len()];
    let prob = compose_multimode(&runs, &codebook)?;
    Ok(MultimodeReport {
        alpha,
        n,
        channel,
        joint_error: problem_error(&prob)?,
        per_mode_error: per_mode_baseline_error(&runs, &codebook)?,
        helstrom_bound: alphabet_helstrom_bound(Alphabet::Multimode, alpha)?,
        homodyne_error: multimode_homodyne_error(alpha, &codebook)?,
        codeword_overlaps: pure_overlap_moduli(&prob).data().iter().map(|z| z.re).collect(),
    })
}
