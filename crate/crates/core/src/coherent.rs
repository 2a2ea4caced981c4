//! Coherent states of a single optical mode: overlaps, alphabets, slicing,
//! the single-rail qubit approximation of a weak slice and the two lossy
//! optical-to-qubit transfer channels.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, C64};

/// `⟨a|b⟩ = exp(−|a|²/2 − |b|²/2 + conj(a)·b)`.
pub fn coherent_overlap(a: C64, b: C64) -> C64 {
    (a.conj() * b - 0.5 * (a.norm_sqr() + b.norm_sqr())).exp()
}

/// A set of coherent-state hypotheses with prior probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherentEnsemble {
    amplitudes: Vec<C64>,
    priors: Vec<f64>,
}

impl CoherentEnsemble {
    pub fn new(amplitudes: Vec<C64>, priors: Vec<f64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidParameter(
                "an ensemble needs at least two hypotheses".into(),
            ));
        }
        if priors.len() != amplitudes.len() {
            return Err(Error::InvalidParameter(format!(
                "{} priors for {} amplitudes",
                priors.len(),
                amplitudes.len()
            )));
        }
        validate_priors(&priors)?;
        for i in 0..amplitudes.len() {
            for j in i + 1..amplitudes.len() {
                if amplitudes[i] == amplitudes[j] {
                    return Err(Error::InvalidParameter(format!(
                        "amplitudes {i} and {j} coincide ({})",
                        amplitudes[i]
                    )));
                }
            }
        }
        Ok(Self { amplitudes, priors })
    }

    pub fn with_uniform_priors(amplitudes: Vec<C64>) -> Result<Self> {
        let k = amplitudes.len().max(1);
        Self::new(amplitudes, vec![1.0 / k as f64; k])
    }

    /// `{−α, +α}` with equal priors.
    pub fn bpsk(alpha: f64) -> Result<Self> {
        Self::with_uniform_priors(vec![C64::new(-alpha, 0.0), C64::new(alpha, 0.0)])
    }

    /// `{−α, 0, +α}` with equal priors.
    pub fn three_ask(alpha: f64) -> Result<Self> {
        Self::with_uniform_priors(vec![
            C64::new(-alpha, 0.0),
            C64::new(0.0, 0.0),
            C64::new(alpha, 0.0),
        ])
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.amplitudes.iter().all(|a| a.im == 0.0)
    }

    pub fn gram_matrix(&self) -> ComplexMatrix {
        gram_of_amplitudes(&self.amplitudes)
    }
}

/// Gram matrix of coherent states with the given amplitudes, without the
/// distinctness requirement of [`CoherentEnsemble`].
pub fn gram_of_amplitudes(amplitudes: &[C64]) -> ComplexMatrix {
    let k = amplitudes.len();
    ComplexMatrix::from_fn(k, k, |i, j| {
        if i == j {
            C64::new(1.0, 0.0)
        } else {
            coherent_overlap(amplitudes[i], amplitudes[j])
        }
    })
}

pub(crate) fn validate_priors(priors: &[f64]) -> Result<()> {
    if priors.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "priors must be nonnegative: {priors:?}"
        )));
    }
    let sum: f64 = priors.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "priors sum to {sum}, not 1"
        )));
    }
    Ok(())
}

/// Per-slice amplitudes `β_j = α_j/√n` of a symmetric 1:n beamsplitter.
#[derive(Clone, Debug, PartialEq)]
pub struct SlicePlan {
    n: usize,
    betas: Vec<C64>,
}

impl SlicePlan {
    pub fn new(ensemble: &CoherentEnsemble, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("slice count must be >= 1".into()));
        }
        let root = (n as f64).sqrt();
        Ok(Self {
            n,
            betas: ensemble.amplitudes().iter().map(|a| a / root).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn betas(&self) -> &[C64] {
        &self.betas
    }

    pub fn max_beta(&self) -> f64 {
        self.betas.iter().map(|b| b.norm()).fold(0.0, f64::max)
    }
}

/// `(|0⟩ + β|1⟩)/√(1+|β|²)`.
pub fn qubit_approx(beta: C64) -> ComplexVector {
    let norm = (1.0 + beta.norm_sqr()).sqrt();
    ComplexVector::new(vec![C64::new(1.0 / norm, 0.0), beta / norm])
        .expect("two entries")
}

/// `1 − e^{−b}(1+b)`: probability that a coherent slice with mean photon
/// number `b` carries two or more photons.
pub fn multi_photon_probability(b: f64) -> f64 {
    if b < 0.1 {
        // Σ_{k≥2} (−1)^k (k−1) b^k / k!
        let mut sum = 0.0;
        let mut term = b; // b^k / k! at k = 1
        for k in 2..30 {
            term *= b / k as f64;
            let signed = if k % 2 == 0 { term } else { -term };
            sum += (k - 1) as f64 * signed;
            if term < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        -(-b).exp_m1() - b * (-b).exp()
    }
}

/// How an optical slice is mapped onto a qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransferChannel {
    /// The slice is replaced by its qubit approximation `|h⟩`.
    ExactPure,
    /// Swap of the vacuum/one-photon subspace into a qubit; multi-photon
    /// components leave the qubit in `|0⟩`.
    IdealSwap,
    /// Single-excitation exchange; multi-photon components leave the qubit
    /// in `|1⟩`.
    Stirap,
}

impl TransferChannel {
    pub const ALL: [TransferChannel; 3] = [
        TransferChannel::ExactPure,
        TransferChannel::IdealSwap,
        TransferChannel::Stirap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransferChannel::ExactPure => "exact-pure",
            TransferChannel::IdealSwap => "ideal-swap",
            TransferChannel::Stirap => "stirap",
        }
    }

    /// Qubit density matrix produced from the coherent slice `|β⟩`.
    ///
    /// Both lossy channels leave `|h⟩⟨h|` with weight `e^{−|β|²}(1+|β|²)`
    /// (the vacuum plus one-photon population) and put the rest on a fixed
    /// basis state.
    pub fn apply(self, beta: C64) -> ComplexMatrix {
        let h = qubit_approx(beta).projector();
        let leak = multi_photon_probability(beta.norm_sqr());
        let keep = 1.0 - leak;
        let sink = match self {
            TransferChannel::ExactPure => return h,
            TransferChannel::IdealSwap => 0,
            TransferChannel::Stirap => 1,
        };
        let mut rho = h.scale_real(keep);
        rho[(sink, sink)] += C64::new(leak, 0.0);
        rho
    }

    /// `1 − ⟨h|ρ|h⟩`, evaluated without cancellation.
    pub fn infidelity(self, beta: C64) -> f64 {
        let b = beta.norm_sqr();
        let leak = multi_photon_probability(b);
        match self {
            TransferChannel::ExactPure => 0.0,
            TransferChannel::IdealSwap => b * leak / (1.0 + b),
            TransferChannel::Stirap => leak / (1.0 + b),
        }
    }

    /// `⟨h|ρ|h⟩` for the slice `|β⟩`.
    pub fn fidelity(self, beta: C64) -> f64 {
        1.0 - self.infidelity(beta)
    }

    /// `F(α/√n)^n`: fidelity of all `n` transferred slices with the ideal
    /// qubit slices.
    pub fn fidelity_power(self, alpha: f64, n: usize) -> Result<f64> {
        Ok(1.0 - self.infidelity_power(alpha, n)?)
    }

    /// `1 − F(α/√n)^n`, evaluated without cancellation.
    pub fn infidelity_power(self, alpha: f64, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidParameter("slice count must be >= 1".into()));
        }
        let beta = C64::new(alpha / (n as f64).sqrt(), 0.0);
        let eps = self.infidelity(beta);
        Ok(-(n as f64 * (-eps).ln_1p()).exp_m1())
    }
}

impl fmt::Display for TransferChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransferChannel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact-pure" | "pure" => Ok(TransferChannel::ExactPure),
            "ideal-swap" | "ideal" | "swap" => Ok(TransferChannel::IdealSwap),
            "stirap" => Ok(TransferChannel::Stirap),
            other => Err(Error::InvalidParameter(format!(
                "unknown channel '{other}' (expected exact-pure, ideal-swap or stirap)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    /// Overlap from the truncated Fock expansion.
    fn fock_overlap(a: C64, b: C64) -> C64 {
        let nmax = 60usize.max((10.0 * a.norm_sqr().max(b.norm_sqr())).ceil() as usize);
        let mut sum = C64::new(0.0, 0.0);
        let mut term = C64::new(1.0, 0.0); // (conj(a) b)^k / k!
        for k in 0..=nmax {
            if k > 0 {
                term = term * a.conj() * b / k as f64;
            }
            sum += term;
        }
        sum * (-0.5 * (a.norm_sqr() + b.norm_sqr())).exp()
    }

    #[test]
    fn overlap_examples() {
        let a = 0.7;
        assert!((coherent_overlap(r(a), r(a)) - 1.0).norm() < 1e-15);
        assert!((coherent_overlap(r(-a), r(a)) - (-2.0 * a * a).exp()).norm() < 1e-15);
        let oracle = fock_overlap(r(0.0), r(a));
        assert!((coherent_overlap(r(0.0), r(a)) - oracle).norm() < 1e-14);
        assert!((oracle.re - (-a * a / 2.0).exp()).abs() < 1e-14);
    }

    #[test]
    fn overlap_matches_fock_series_for_complex_amplitudes() {
        let pts = [
            C64::new(0.3, -1.2),
            C64::new(-2.0, 0.5),
            C64::new(1.5, 1.5),
            C64::new(0.0, 3.0),
        ];
        for a in pts {
            for b in pts {
                let d = (coherent_overlap(a, b) - fock_overlap(a, b)).norm();
                assert!(d < 1e-12, "{a} {b}: {d}");
            }
        }
    }

    #[test]
    fn gram_examples() {
        let a: f64 = 0.8;
        let g = CoherentEnsemble::bpsk(a).unwrap().gram_matrix();
        assert!((g[(0, 1)].re - (-2.0 * a * a).exp()).abs() < 1e-15);
        assert_eq!(g[(0, 0)], r(1.0));
        let g = CoherentEnsemble::three_ask(a).unwrap().gram_matrix();
        let x = (-a * a / 2.0).exp();
        let y = (-2.0 * a * a).exp();
        assert!((g[(0, 1)].re - x).abs() < 1e-15);
        assert!((g[(1, 2)].re - x).abs() < 1e-15);
        assert!((g[(0, 2)].re - y).abs() < 1e-15);
    }

    #[test]
    fn ensemble_validation() {
        assert!(CoherentEnsemble::with_uniform_priors(vec![r(0.5), r(0.5)]).is_err());
        assert!(CoherentEnsemble::with_uniform_priors(vec![r(0.5)]).is_err());
        assert!(CoherentEnsemble::new(vec![r(0.0), r(1.0)], vec![0.7, 0.7]).is_err());
        assert!(CoherentEnsemble::new(vec![r(0.0), r(1.0)], vec![1.2, -0.2]).is_err());
        assert!(CoherentEnsemble::new(vec![r(0.0), r(1.0)], vec![0.25, 0.75]).is_ok());
    }

    #[test]
    fn qubit_approx_examples() {
        assert_eq!(qubit_approx(r(0.0)).entries(), &[r(1.0), r(0.0)]);
        let b: f64 = 0.2;
        let ip = qubit_approx(r(-b)).inner(&qubit_approx(r(b)));
        assert!((ip.re - (1.0 - b * b) / (1.0 + b * b)).abs() < 1e-15);
    }

    #[test]
    fn sliced_qubit_overlaps_approach_coherent_overlap() {
        let n = 1_000_000usize;
        for (a, b) in [(-1.0, 1.0), (0.0, 1.0), (-0.5, 0.0)] {
            let root = (n as f64).sqrt();
            let ip = qubit_approx(r(a / root)).inner(&qubit_approx(r(b / root)));
            let powered = (n as f64 * ip.re.ln()).exp();
            let exact = coherent_overlap(r(a), r(b)).re;
            assert!(((powered - exact) / exact).abs() <= 1e-5);
        }
    }

    #[test]
    fn slice_plan_divides_by_root_n() {
        let ens = CoherentEnsemble::three_ask(1.5).unwrap();
        let plan = SlicePlan::new(&ens, 9).unwrap();
        assert!((plan.betas()[2].re - 0.5).abs() < 1e-15);
        assert!((plan.max_beta() - 0.5).abs() < 1e-15);
        assert!(SlicePlan::new(&ens, 0).is_err());
    }

    #[test]
    fn ideal_swap_of_vacuum_is_vacuum() {
        let rho = TransferChannel::IdealSwap.apply(r(0.0));
        assert!(rho.max_abs_diff(&ComplexMatrix::from_diag(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn fidelities_match_closed_forms() {
        for b in [0.01, 0.1, 0.3, 0.7, 1.0, 2.0] {
            let beta = r(b);
            let h = qubit_approx(beta);
            let bb = b * b;
            let fa = (-bb).exp() * bb + 1.0 / (1.0 + bb);
            let fb = (-bb).exp() + bb / (1.0 + bb);
            let from_rho_a = TransferChannel::IdealSwap.apply(beta).expectation(&h).re;
            let from_rho_b = TransferChannel::Stirap.apply(beta).expectation(&h).re;
            assert!((from_rho_a - fa).abs() < 1e-14, "{b}");
            assert!((from_rho_b - fb).abs() < 1e-14, "{b}");
            assert!((TransferChannel::IdealSwap.fidelity(beta) - fa).abs() < 1e-14);
            assert!((TransferChannel::Stirap.fidelity(beta) - fb).abs() < 1e-14);
            assert!((TransferChannel::ExactPure.apply(beta).expectation(&h).re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn channel_outputs_are_density_matrices() {
        for ch in TransferChannel::ALL {
            for b in [0.0, 0.05, 0.5, 1.0, 3.0, 10.0] {
                for beta in [r(b), C64::new(0.0, b), C64::new(-b, b) / 2f64.sqrt()] {
                    ch.apply(beta).check_density().unwrap();
                }
            }
        }
    }

    #[test]
    fn multi_photon_probability_branches_agree() {
        for b in [0.09f64, 0.0999, 0.1, 0.1001] {
            let direct = 1.0 - (-b).exp() * (1.0 + b);
            assert!((multi_photon_probability(b) - direct).abs() < 1e-16);
        }
        assert_eq!(multi_photon_probability(0.0), 0.0);
    }

    #[test]
    fn fidelity_power_limits() {
        for ch in TransferChannel::ALL {
            assert_eq!(ch.fidelity_power(0.0, 7).unwrap(), 1.0);
        }
        assert!(TransferChannel::Stirap.fidelity_power(1.0, 0).is_err());
    }

    #[test]
    fn channel_names_round_trip() {
        for ch in TransferChannel::ALL {
            assert_eq!(ch.name().parse::<TransferChannel>().unwrap(), ch);
        }
        assert!("lossy".parse::<TransferChannel>().is_err());
    }
}
