use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coherent::{CoherentEnsemble, TransferChannel};
use crate::compression::params::{
    bpsk_register_state, bpsk_trajectory, threeask_register_state, threeask_trajectory,
};
use crate::compression::step::{build_3ask_step, build_bpsk_step, CompressionStep};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, Subsystem, C64};

/// Slice amplitudes at or above this are rejected: the qubit approximation
/// and the closed-form parameters stop being meaningful as `β → 1`.
pub const MAX_SLICE_AMPLITUDE: f64 = 0.95;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alphabet {
    #[serde(rename = "bpsk")]
    Bpsk,
    #[serde(rename = "3ask")]
    ThreeAsk,
    #[serde(rename = "multimode")]
    Multimode,
}

impl Alphabet {
    pub fn name(self) -> &'static str {
        match self {
            Alphabet::Bpsk => "bpsk",
            Alphabet::ThreeAsk => "3ask",
            Alphabet::Multimode => "multimode",
        }
    }

    /// Hypothesis labels `j` in register order.
    pub fn labels(self) -> &'static [i32] {
        match self {
            Alphabet::Bpsk | Alphabet::Multimode => &[-1, 1],
            Alphabet::ThreeAsk => &[-1, 0, 1],
        }
    }

    pub fn register_dim(self) -> usize {
        match self {
            Alphabet::Bpsk | Alphabet::Multimode => 2,
            Alphabet::ThreeAsk => 4,
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Alphabet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bpsk" => Ok(Alphabet::Bpsk),
            "3ask" | "three-ask" => Ok(Alphabet::ThreeAsk),
            "multimode" => Ok(Alphabet::Multimode),
            other => Err(Error::InvalidParameter(format!(
                "unknown alphabet '{other}' (expected bpsk, 3ask or multimode)"
            ))),
        }
    }
}

/// Smallest slice count that keeps `α/√n` below [`MAX_SLICE_AMPLITUDE`].
pub fn min_slices(alpha: f64) -> usize {
    let mut n = ((alpha / MAX_SLICE_AMPLITUDE).powi(2).floor() as usize).max(1);
    while alpha / (n as f64).sqrt() >= MAX_SLICE_AMPLITUDE {
        n += 1;
    }
    n
}

/// Compressor parameters at one step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepParams {
    Bpsk { b: f64 },
    ThreeAsk { c: f64, d: f64 },
}

/// Outcome of compressing `n` slices of every hypothesis into the register.
#[derive(Clone, Debug)]
pub struct ReceiverRun {
    pub alphabet: Alphabet,
    pub alpha: f64,
    pub n: usize,
    pub channel: TransferChannel,
    /// Hypothesis label `j` for each ensemble entry, in ensemble order.
    pub labels: Vec<i32>,
    pub priors: Vec<f64>,
    /// Final register density matrix per hypothesis, in ensemble order.
    pub final_states: Vec<ComplexMatrix>,
    /// Register parameters for steps `0..=n`.
    pub trajectory: Vec<StepParams>,
    pub max_step_residual: f64,
    pub max_unitarity_residual: f64,
    pub max_trace_deviation: f64,
}

impl ReceiverRun {
    pub fn register_dim(&self) -> usize {
        self.alphabet.register_dim()
    }

    /// Final register state of hypothesis `j`.
    pub fn state_for(&self, j: i32) -> Option<&ComplexMatrix> {
        self.labels
            .iter()
            .position(|&l| l == j)
            .map(|i| &self.final_states[i])
    }

    /// Ideal pure register state `|m_{j,n}⟩` from the analytic parameters.
    pub fn analytic_state(&self, j: i32) -> ComplexVector {
        match self.trajectory[self.n] {
            StepParams::Bpsk { b } => bpsk_register_state(j, b),
            StepParams::ThreeAsk { c, d } => threeask_register_state(j, c, d),
        }
    }
}

/// Matches a BPSK `{−α, +α}` or 3ASK `{−α, 0, +α}` ensemble (real α, any
/// order) and returns the alphabet, `α` and the label of each entry.
pub fn classify_ensemble(ens: &CoherentEnsemble) -> Result<(Alphabet, f64, Vec<i32>)> {
    if !ens.is_real() {
        return Err(Error::UnsupportedAlphabet(
            "only real-amplitude BPSK and 3ASK alphabets can be compressed".into(),
        ));
    }
    let amps: Vec<f64> = ens.amplitudes().iter().map(|a| a.re).collect();
    let alpha = amps.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let alphabet = match amps.len() {
        2 => Alphabet::Bpsk,
        3 => Alphabet::ThreeAsk,
        k => {
            return Err(Error::UnsupportedAlphabet(format!(
                "{k} hypotheses; only BPSK and 3ASK are supported"
            )))
        }
    };
    let scale = alpha.max(1.0);
    let mut labels = Vec::with_capacity(amps.len());
    for &a in &amps {
        let j = if alpha == 0.0 { 0.0 } else { (a / alpha).round() };
        if (a - j * alpha).abs() > 1e-12 * scale {
            return Err(Error::UnsupportedAlphabet(format!(
                "amplitude {a} is not a multiple of ±{alpha}"
            )));
        }
        labels.push(j as i32);
    }
    let mut sorted = labels.clone();
    sorted.sort_unstable();
    if sorted != alphabet.labels() {
        return Err(Error::UnsupportedAlphabet(format!(
            "amplitudes {amps:?} do not form a symmetric {alphabet} alphabet"
        )));
    }
    Ok((alphabet, alpha, labels))
}

/// Runs the slice-and-compress receiver for a BPSK or 3ASK ensemble.
///
/// Every hypothesis starts with the register in `|0…0⟩`. Each slice is
/// turned into a qubit by `channel`, the step unitary designed for the pure
/// qubit slices is applied to `ρ_slice ⊗ ρ_register`, and the slice is
/// traced out.
pub fn run_receiver(
    ens: &CoherentEnsemble,
    n: usize,
    channel: TransferChannel,
) -> Result<ReceiverRun> {
    let (alphabet, alpha, labels) = classify_ensemble(ens)?;
    run_labeled(alphabet, alpha, labels, ens.priors().to_vec(), n, channel)
}

/// BPSK receiver for `{−α, +α}` with equal priors.
pub fn run_bpsk(alpha: f64, n: usize, channel: TransferChannel) -> Result<ReceiverRun> {
    run_labeled(Alphabet::Bpsk, alpha, vec![-1, 1], vec![0.5, 0.5], n, channel)
}

/// 3ASK receiver for `{−α, 0, +α}` with equal priors.
pub fn run_3ask(alpha: f64, n: usize, channel: TransferChannel) -> Result<ReceiverRun> {
    let p = 1.0 / 3.0;
    run_labeled(
        Alphabet::ThreeAsk,
        alpha,
        vec![-1, 0, 1],
        vec![p, p, p],
        n,
        channel,
    )
}

/// Receiver for the standard `alphabet` at amplitude `α` with the given
/// priors in label order (`[−1, +1]` or `[−1, 0, +1]`).
pub fn run_with_priors(
    alphabet: Alphabet,
    alpha: f64,
    priors: Vec<f64>,
    n: usize,
    channel: TransferChannel,
) -> Result<ReceiverRun> {
    let labels = alphabet.labels().to_vec();
    if priors.len() != labels.len() {
        return Err(Error::InvalidParameter(format!(
            "{} priors for the {} hypotheses of {alphabet}",
            priors.len(),
            labels.len()
        )));
    }
    crate::coherent::validate_priors(&priors)?;
    run_labeled(alphabet, alpha, labels, priors, n, channel)
}

fn run_labeled(
    alphabet: Alphabet,
    alpha: f64,
    labels: Vec<i32>,
    priors: Vec<f64>,
    n: usize,
    channel: TransferChannel,
) -> Result<ReceiverRun> {
    if n == 0 {
        return Err(Error::InvalidParameter("slice count must be >= 1".into()));
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
    }
    let beta = alpha / (n as f64).sqrt();
    if beta >= MAX_SLICE_AMPLITUDE {
        return Err(Error::SliceAmplitudeTooLarge {
            beta,
            limit: MAX_SLICE_AMPLITUDE,
            min_slices: min_slices(alpha),
        });
    }

    let trajectory: Vec<StepParams> = match alphabet {
        Alphabet::Bpsk | Alphabet::Multimode => bpsk_trajectory(beta, n)
            .into_iter()
            .map(|p| StepParams::Bpsk { b: p.b })
            .collect(),
        Alphabet::ThreeAsk => threeask_trajectory(beta, n)
            .into_iter()
            .map(|p| StepParams::ThreeAsk { c: p.c, d: p.d })
            .collect(),
    };

    let dim = alphabet.register_dim();
    let slices: Vec<ComplexMatrix> = labels
        .iter()
        .map(|&j| channel.apply(C64::new(j as f64 * beta, 0.0)))
        .collect();
    let mut states = vec![ComplexVector::basis(dim, 0).projector(); labels.len()];
    let mut max_step_residual: f64 = 0.0;
    let mut max_unitarity_residual: f64 = 0.0;
    let mut max_trace_deviation: f64 = 0.0;

    for (ell, params) in trajectory.iter().take(n).enumerate() {
        let step: CompressionStep = match *params {
            StepParams::Bpsk { b } => build_bpsk_step(beta, b)?,
            StepParams::ThreeAsk { c, d } => build_3ask_step(
                beta,
                crate::compression::params::AncillaParams3Ask { ell, c, d },
            )?,
        };
        max_step_residual = max_step_residual.max(step.contract_residual());
        max_unitarity_residual = max_unitarity_residual.max(step.unitarity_residual());
        for (rho, slice) in states.iter_mut().zip(&slices) {
            let joint = step.unitary.conjugate(&slice.kron(rho));
            *rho = joint
                .partial_trace((2, dim), Subsystem::B)?
                .hermitian_part();
            let tr = rho.trace().re;
            max_trace_deviation = max_trace_deviation.max((tr - 1.0).abs());
            *rho = rho.scale_real(1.0 / tr);
        }
    }

    Ok(ReceiverRun {
        alphabet,
        alpha,
        n,
        channel,
        labels,
        priors,
        final_states: states,
        trajectory,
        max_step_residual,
        max_unitarity_residual,
        max_trace_deviation,
    })
}
