//! Minimum-error measurements and classical baselines.

mod helstrom;
mod homodyne;
mod isoceles;
mod povm;

pub use helstrom::{helstrom_binary_mixed, helstrom_binary_pure, helstrom_measurement};
pub use homodyne::{homodyne_ml_error, normal_tail};
pub use isoceles::{isoceles_three_pure, IsocelesSolution, ISOCELES_GRID};
pub use povm::{povm_optimize, PovmOptions, PovmSolution};

use crate::coherent::{validate_priors, CoherentEnsemble};
use crate::compression::{Alphabet, ReceiverRun};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, PSD_TOL};

/// `K` density matrices of a common dimension with prior probabilities.
#[derive(Clone, Debug)]
pub struct DiscriminationProblem {
    states: Vec<ComplexMatrix>,
    priors: Vec<f64>,
}

impl DiscriminationProblem {
    pub fn new(states: Vec<ComplexMatrix>, priors: Vec<f64>) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::InvalidParameter(
                "need at least two hypotheses".into(),
            ));
        }
        if priors.len() != states.len() {
            return Err(Error::InvalidParameter(format!(
                "{} priors for {} states",
                priors.len(),
                states.len()
            )));
        }
        validate_priors(&priors)?;
        let dim = states[0].rows();
        for (i, s) in states.iter().enumerate() {
            if s.rows() != dim || s.cols() != dim {
                return Err(Error::Dimension(format!(
                    "state {i} is {}x{}, expected {dim}x{dim}",
                    s.rows(),
                    s.cols()
                )));
            }
            s.check_density()
                .map_err(|e| Error::InvalidState(format!("hypothesis {i}: {e}")))?;
        }
        Ok(Self { states, priors })
    }

    /// Pure states realized from a Gram matrix: the columns of `Γ^{1/2}`.
    pub fn from_gram(gram: &ComplexMatrix, priors: Vec<f64>) -> Result<Self> {
        let root = gram.herm_sqrt()?;
        let states = (0..gram.rows())
            .map(|k| {
                let v = root.column(k);
                let norm = v.norm();
                v.scale(crate::linalg::C64::new(1.0 / norm, 0.0)).projector()
            })
            .collect();
        Self::new(states, priors)
    }

    pub fn with_uniform_priors(states: Vec<ComplexMatrix>) -> Result<Self> {
        let k = states.len().max(1);
        Self::new(states, vec![1.0 / k as f64; k])
    }

    pub fn states(&self) -> &[ComplexMatrix] {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].rows()
    }

    /// `Σ_j p_j (1 − tr(ρ_j Π_j))`.
    pub fn error_of(&self, povm: &Povm) -> f64 {
        let success: f64 = self
            .states
            .iter()
            .zip(&self.priors)
            .zip(povm.elements())
            .map(|((rho, p), e)| p * (rho * e).trace().re)
            .sum();
        1.0 - success
    }
}

/// Measurement operators, one per hypothesis.
#[derive(Clone, Debug)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub const COMPLETENESS_TOL: f64 = 1e-8;

    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let povm = Self { elements };
        povm.validate()?;
        Ok(povm)
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn completeness_residual(&self) -> f64 {
        let d = self.elements[0].rows();
        let sum = self
            .elements
            .iter()
            .skip(1)
            .fold(self.elements[0].clone(), |acc, e| &acc + e);
        sum.max_abs_diff(&ComplexMatrix::identity(d))
    }

    /// `max_j ‖Π_j² − Π_j‖_max`; zero for a projective measurement.
    pub fn projectivity_residual(&self) -> f64 {
        self.elements
            .iter()
            .map(|e| (e * e).max_abs_diff(e))
            .fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        if self.elements.is_empty() {
            return Err(Error::InvalidParameter("empty POVM".into()));
        }
        for (i, e) in self.elements.iter().enumerate() {
            let min = e.eigh()?.values[0];
            if min < -PSD_TOL {
                return Err(Error::InvalidState(format!(
                    "POVM element {i} has eigenvalue {min:e}"
                )));
            }
        }
        let res = self.completeness_residual();
        if res > Self::COMPLETENESS_TOL {
            return Err(Error::InvalidState(format!(
                "POVM elements sum to identity only within {res:e}"
            )));
        }
        Ok(())
    }
}

/// Minimum error probability of the compressed registers of a receiver run.
/// Two hypotheses use the trace-norm formula; three use the iterative
/// optimizer, and a non-converged optimizer is reported as an error.
pub fn receiver_error(run: &ReceiverRun) -> Result<f64> {
    let prob = DiscriminationProblem::new(run.final_states.clone(), run.priors.clone())?;
    problem_error(&prob)
}

/// Minimum error probability of a discrimination problem, dispatching on the
/// number of hypotheses.
pub fn problem_error(prob: &DiscriminationProblem) -> Result<f64> {
    match prob.len() {
        2 => helstrom_binary_mixed(&prob.states[0], &prob.states[1], prob.priors[0]),
        _ => {
            let sol = povm_optimize(prob, &PovmOptions::default())?;
            if !sol.converged {
                return Err(Error::NotConverged {
                    iterations: sol.iterations,
                    last_change: sol.last_change,
                });
            }
            Ok(sol.error_prob)
        }
    }
}

/// Helstrom bound of a coherent-state ensemble.
///
/// Binary ensembles use the pure-state formula; three equiprobable states
/// whose Gram matrix has the isoceles shape use the semi-analytic solver;
/// everything else runs the iterative optimizer on states realized from the
/// Gram matrix.
pub fn ensemble_helstrom_bound(ens: &CoherentEnsemble) -> Result<f64> {
    gram_helstrom_bound(&ens.gram_matrix(), ens.priors())
}

pub fn gram_helstrom_bound(gram: &ComplexMatrix, priors: &[f64]) -> Result<f64> {
    let k = gram.rows();
    if k == 2 {
        return Ok(helstrom_binary_pure(gram[(0, 1)], priors[0]));
    }
    let equal = priors.iter().all(|p| (p - 1.0 / k as f64).abs() < 1e-12);
    if k == 3 && equal && gram.hermiticity_residual() < 1e-14 {
        // Find an apex with equal, real overlaps to the other two.
        for apex in 0..3 {
            let (o1, o2) = ((apex + 1) % 3, (apex + 2) % 3);
            let x1 = gram[(apex, o1)];
            let x2 = gram[(apex, o2)];
            let y = gram[(o1, o2)];
            let real = [x1, x2, y].iter().all(|z| z.im.abs() < 1e-15 && z.re >= 0.0);
            if real && (x1.re - x2.re).abs() < 1e-15 {
                if let Ok(sol) = isoceles_three_pure(x1.re, y.re) {
                    return Ok(sol.error_prob);
                }
            }
        }
    }
    let prob = DiscriminationProblem::from_gram(gram, priors.to_vec())?;
    problem_error(&prob)
}

/// Helstrom bound for the coherent alphabet a receiver run compresses.
pub fn alphabet_helstrom_bound(alphabet: Alphabet, alpha: f64) -> Result<f64> {
    if alpha == 0.0 {
        // Identical hypotheses: guess the first.
        let k = if alphabet == Alphabet::Bpsk { 2.0 } else { 3.0 };
        return Ok((k - 1.0) / k);
    }
    match alphabet {
        Alphabet::Bpsk => ensemble_helstrom_bound(&CoherentEnsemble::bpsk(alpha)?),
        Alphabet::ThreeAsk => ensemble_helstrom_bound(&CoherentEnsemble::three_ask(alpha)?),
        Alphabet::Multimode => {
            let x = (-4.0 * alpha * alpha).exp();
            let y = (-8.0 * alpha * alpha).exp();
            Ok(isoceles_three_pure(x, y)?.error_prob)
        }
    }
}
