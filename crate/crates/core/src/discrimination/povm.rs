//! Fixed-point iteration for minimum-error measurements of `K` mixed states.
//!
//! Each sweep replaces `Π_j` by `Λ^{-1/2} R_j Π_j R_j Λ^{-1/2}` with
//! `R_j = p_j ρ_j` and `Λ = Σ_k R_k Π_k R_k`. The iteration runs on the
//! support of `Σ_j R_j`; the kernel carries no information and is shared
//! equally between the outcomes when the POVM is lifted back.

use super::{DiscriminationProblem, Povm};
use crate::error::Result;
use crate::linalg::{ComplexMatrix, ComplexVector, PSEUDO_INV_THRESHOLD};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PovmOptions {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for PovmOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iters: 100_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PovmSolution {
    pub povm: Povm,
    pub error_prob: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Change in error probability over the final sweep.
    pub last_change: f64,
    /// Error probability after every sweep, starting with the initial guess.
    pub history: Vec<f64>,
    /// `‖Γ − Γ†‖_max` for `Γ = Σ_j R_j Π_j`.
    pub hermiticity_residual: f64,
    /// `min_j λ_min(Γ − R_j)`; nonnegative at the optimum.
    pub min_certificate_eigenvalue: f64,
}

impl PovmSolution {
    /// Whether the optimality conditions hold to `10·tol`.
    pub fn certified(&self, tol: f64) -> bool {
        self.hermiticity_residual <= 10.0 * tol && self.min_certificate_eigenvalue >= -10.0 * tol
    }
}

pub fn povm_optimize(prob: &DiscriminationProblem, opts: &PovmOptions) -> Result<PovmSolution> {
    let k = prob.len();
    let dim = prob.dim();
    let weighted: Vec<ComplexMatrix> = prob
        .states()
        .iter()
        .zip(prob.priors())
        .map(|(rho, &p)| rho.scale_real(p))
        .collect();

    let support = support_basis(&weighted)?;
    let rank = support.len();
    let embed = ComplexMatrix::from_columns(&support)?;
    let restrict = embed.adjoint();
    let reduced: Vec<ComplexMatrix> = weighted
        .iter()
        .map(|r| restrict.conjugate(r).hermitian_part())
        .collect();

    let mut elements = vec![ComplexMatrix::identity(rank).scale_real(1.0 / k as f64); k];
    let mut error = error_of(&reduced, &elements);
    let mut history = vec![error];
    let mut last_change = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iters {
        let sandwiches: Vec<ComplexMatrix> = reduced
            .iter()
            .zip(&elements)
            .map(|(r, e)| r.conjugate(e).hermitian_part())
            .collect();
        let lambda = sandwiches
            .iter()
            .skip(1)
            .fold(sandwiches[0].clone(), |acc, s| &acc + s);
        let eig = lambda.hermitian_part().eigh()?;
        let top = eig.values.last().copied().unwrap_or(0.0).max(0.0);
        let cutoff = PSEUDO_INV_THRESHOLD * top;
        let inv_sqrt = eig.reconstruct(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 });
        let kernel = eig.reconstruct(|l| if l > cutoff { 0.0 } else { 1.0 });
        let share = kernel.scale_real(1.0 / k as f64);

        elements = sandwiches
            .iter()
            .map(|s| (&inv_sqrt.conjugate(s).hermitian_part() + &share).hermitian_part())
            .collect();
        iterations += 1;

        let next = error_of(&reduced, &elements);
        last_change = (error - next).abs();
        error = next;
        history.push(error);
        if last_change < opts.tol {
            converged = true;
            break;
        }
    }

    if !converged {
        log::warn!("POVM iteration stopped after {iterations} sweeps, last change {last_change:e}");
    }

    let kernel = &ComplexMatrix::identity(dim) - &(&embed * &restrict);
    let kernel_share = kernel.hermitian_part().scale_real(1.0 / k as f64);
    let lifted: Vec<ComplexMatrix> = elements
        .iter()
        .map(|e| (&embed.conjugate(e) + &kernel_share).hermitian_part())
        .collect();

    let gamma = weighted
        .iter()
        .zip(&lifted)
        .map(|(r, e)| r * e)
        .fold(ComplexMatrix::zeros(dim, dim), |acc, m| &acc + &m);
    let hermiticity_residual = gamma.hermiticity_residual();
    let gamma_h = gamma.hermitian_part();
    let mut min_certificate_eigenvalue = f64::INFINITY;
    for r in &weighted {
        let gap = (&gamma_h - r).hermitian_part().eigh()?.values[0];
        min_certificate_eigenvalue = min_certificate_eigenvalue.min(gap);
    }

    let povm = Povm::new(lifted)?;
    let error_prob = prob.error_of(&povm);
    Ok(PovmSolution {
        povm,
        error_prob,
        iterations,
        converged,
        last_change,
        history,
        hermiticity_residual,
        min_certificate_eigenvalue,
    })
}

fn error_of(reduced: &[ComplexMatrix], elements: &[ComplexMatrix]) -> f64 {
    1.0 - reduced
        .iter()
        .zip(elements)
        .map(|(r, e)| (r * e).trace().re)
        .sum::<f64>()
}

/// Orthonormal basis of the range of `Σ_j R_j`.
fn support_basis(weighted: &[ComplexMatrix]) -> Result<Vec<ComplexVector>> {
    let total = weighted
        .iter()
        .skip(1)
        .fold(weighted[0].clone(), |acc, r| &acc + r)
        .hermitian_part();
    let eig = total.eigh()?;
    let top = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let mut basis: Vec<ComplexVector> = (0..eig.values.len())
        .rev()
        .filter(|&i| eig.values[i] > PSEUDO_INV_THRESHOLD * top)
        .map(|i| eig.vector(i))
        .collect();
    if basis.is_empty() {
        basis.push(eig.vector(eig.values.len() - 1));
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::CoherentEnsemble;
    use crate::discrimination::{helstrom_binary_mixed, isoceles_three_pure};
    use crate::linalg::C64;

    fn qubit_state(theta: f64, phi: f64, purity: f64) -> ComplexMatrix {
        let v = ComplexVector::new(vec![
            C64::new((theta / 2.0).cos(), 0.0),
            C64::from_polar((theta / 2.0).sin(), phi),
        ])
        .unwrap();
        let mixed = ComplexMatrix::identity(2).scale_real((1.0 - purity) / 2.0);
        &v.projector().scale_real(purity) + &mixed
    }

    #[test]
    fn binary_matches_trace_norm() {
        let r1 = qubit_state(0.4, 0.3, 0.9);
        let r2 = qubit_state(1.3, -0.8, 0.6);
        let prob = DiscriminationProblem::new(vec![r1.clone(), r2.clone()], vec![0.35, 0.65]).unwrap();
        let sol = povm_optimize(&prob, &PovmOptions::default()).unwrap();
        let exact = helstrom_binary_mixed(&r1, &r2, 0.35).unwrap();
        assert!(sol.converged);
        assert!((sol.error_prob - exact).abs() < 1e-8, "{} vs {exact}", sol.error_prob);
    }

    #[test]
    fn error_never_increases() {
        let ens = CoherentEnsemble::three_ask(0.7).unwrap();
        let prob = DiscriminationProblem::from_gram(&ens.gram_matrix(), vec![0.2, 0.5, 0.3]).unwrap();
        let sol = povm_optimize(&prob, &PovmOptions::default()).unwrap();
        for w in sol.history.windows(2) {
            assert!(w[1] <= w[0] + 1e-14);
        }
        assert!(sol.povm.completeness_residual() < 1e-8);
        assert!((prob.error_of(&sol.povm) - sol.error_prob).abs() < 1e-15);
    }

    #[test]
    fn identical_states_give_uniform_guess() {
        let rho = qubit_state(0.9, 0.1, 0.8);
        let prob = DiscriminationProblem::with_uniform_priors(vec![rho.clone(), rho.clone(), rho]).unwrap();
        let sol = povm_optimize(&prob, &PovmOptions::default()).unwrap();
        assert!((sol.error_prob - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn pure_isoceles_matches_semi_analytic() {
        for alpha in [0.3, 0.8, 1.5] {
            let ens = CoherentEnsemble::three_ask(alpha).unwrap();
            let prob = DiscriminationProblem::from_gram(&ens.gram_matrix(), vec![1.0 / 3.0; 3]).unwrap();
            let sol = povm_optimize(&prob, &PovmOptions::default()).unwrap();
            let a2: f64 = alpha * alpha;
            let iso = isoceles_three_pure((-a2 / 2.0).exp(), (-2.0 * a2).exp()).unwrap();
            assert!((sol.error_prob - iso.error_prob).abs() < 1e-6, "alpha {alpha}");
            assert!(sol.certified(1e-6));
        }
    }

    #[test]
    fn rank_deficient_states_are_lifted() {
        let a = ComplexVector::from_real(&[1.0, 0.0, 0.0]).unwrap().projector();
        let b = ComplexVector::from_real(&[0.6, 0.8, 0.0]).unwrap().projector();
        let prob = DiscriminationProblem::with_uniform_priors(vec![a.clone(), b.clone()]).unwrap();
        let sol = povm_optimize(&prob, &PovmOptions::default()).unwrap();
        assert!(sol.povm.completeness_residual() < 1e-10);
        let exact = helstrom_binary_mixed(&a, &b, 0.5).unwrap();
        assert!((sol.error_prob - exact).abs() < 1e-8);
    }
}
