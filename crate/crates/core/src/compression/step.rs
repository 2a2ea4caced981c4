use crate::coherent::qubit_approx;
use crate::compression::params::{
    bpsk_b_step, bpsk_register_state, threeask_cd_step, threeask_register_state,
    AncillaParams3Ask,
};
use crate::error::{Error, Result};
use crate::linalg::{orthonormal_completion, ComplexMatrix, ComplexVector, C64};

/// Allowed Gram mismatch between the input and output families of a
/// state mapper.
pub const GRAM_MATCH_TOL: f64 = 1e-8;
/// Allowed `‖U·in_j − out_j‖` for a synthesized step.
pub const STEP_CONTRACT_TOL: f64 = 1e-10;

/// Relative eigenvalue threshold below which a Gram direction is treated as
/// absent (pseudo-inverse convention).
const RANK_THRESHOLD: f64 = 1e-12;

/// A unitary on `slice ⊗ register` that maps `|h_j⟩|m_{j,ℓ}⟩` to
/// `|0⟩|m_{j,ℓ+1}⟩` for every hypothesis `j`.
#[derive(Clone, Debug)]
pub struct CompressionStep {
    pub unitary: ComplexMatrix,
    pub in_states: Vec<ComplexVector>,
    pub out_states: Vec<ComplexVector>,
}

impl CompressionStep {
    /// `max_j ‖U·in_j − out_j‖`.
    pub fn contract_residual(&self) -> f64 {
        self.in_states
            .iter()
            .zip(&self.out_states)
            .map(|(i, o)| self.unitary.apply(i).distance(o))
            .fold(0.0, f64::max)
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.unitary.unitarity_residual()
    }

    fn checked(self) -> Result<Self> {
        let residual = self.contract_residual();
        if residual > STEP_CONTRACT_TOL {
            return Err(Error::StepContract(residual));
        }
        Ok(self)
    }
}

/// Builds a `dim x dim` unitary taking each `inputs[k]` to `outputs[k]`.
///
/// Both families are orthonormalized with the same eigenbasis of the input
/// Gram matrix (directions with eigenvalue below `1e-12` relative are
/// dropped), the resulting bases are completed with
/// [`orthonormal_completion`], and the unitary maps one completed basis onto
/// the other.
pub fn build_state_mapper(
    inputs: &[ComplexVector],
    outputs: &[ComplexVector],
    dim: usize,
) -> Result<ComplexMatrix> {
    if inputs.is_empty() || inputs.len() != outputs.len() {
        return Err(Error::Dimension(format!(
            "{} inputs for {} outputs",
            inputs.len(),
            outputs.len()
        )));
    }
    if inputs.iter().chain(outputs).any(|v| v.dim() != dim) {
        return Err(Error::Dimension(format!(
            "all vectors must have dimension {dim}"
        )));
    }
    let k = inputs.len();
    let mut worst = (0.0, 0, 0);
    for i in 0..k {
        for j in i..k {
            let dev = (inputs[i].inner(&inputs[j]) - outputs[i].inner(&outputs[j])).norm();
            if dev > worst.0 {
                worst = (dev, i, j);
            }
        }
    }
    if worst.0 > GRAM_MATCH_TOL {
        return Err(Error::GramMismatch {
            i: worst.1,
            j: worst.2,
            deviation: worst.0,
        });
    }

    let gram = ComplexMatrix::from_fn(k, k, |i, j| inputs[i].inner(&inputs[j]));
    let eig = gram.eigh()?;
    let top = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let x = ComplexMatrix::from_columns(inputs)?;
    let y = ComplexMatrix::from_columns(outputs)?;
    let mut in_rows = Vec::new();
    let mut out_rows = Vec::new();
    for (idx, &lambda) in eig.values.iter().enumerate().rev() {
        if lambda <= RANK_THRESHOLD * top.max(1.0) {
            continue;
        }
        let coeffs = eig.vector(idx).scale(C64::new(1.0 / lambda.sqrt(), 0.0));
        // Rows of the basis-change matrices are conjugated basis vectors.
        in_rows.push(x.apply(&coeffs).conj());
        out_rows.push(y.apply(&coeffs).conj());
    }
    let in_rows = reorthonormalize(in_rows)?;
    let out_rows = reorthonormalize(out_rows)?;
    let from_in = orthonormal_completion(&in_rows, dim)?;
    let from_out = orthonormal_completion(&out_rows, dim)?;
    // from_in maps the input basis to canonical vectors; from_out† maps those
    // to the output basis.
    Ok(&from_out.adjoint() * &from_in)
}

/// Löwdin clean-up of an almost orthonormal family, so rounding in the Gram
/// orthonormalization does not trip the completion's orthonormality check.
fn reorthonormalize(rows: Vec<ComplexVector>) -> Result<Vec<ComplexVector>> {
    let r = rows.len();
    if r == 0 {
        return Ok(rows);
    }
    let overlap = ComplexMatrix::from_fn(r, r, |i, j| rows[j].inner(&rows[i]));
    let fix = overlap.herm_sqrt_inv(false)?;
    let m = ComplexMatrix::from_rows(&rows)?;
    let cleaned = &fix.adjoint() * &m;
    Ok((0..r).map(|i| cleaned.row(i)).collect())
}

/// BPSK step for hypotheses `j = −1, +1` with slice amplitude `β` and
/// register parameter `B`. Acts on `slice ⊗ register` (4x4).
pub fn build_bpsk_step(beta: f64, b: f64) -> Result<CompressionStep> {
    if !(beta.is_finite() && beta >= 0.0 && b.is_finite() && b >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "BPSK step needs beta, B >= 0 (got {beta}, {b})"
        )));
    }
    let next = bpsk_b_step(beta * beta, b);
    let vacuum = ComplexVector::basis(2, 0);
    let js = [-1, 1];
    let in_states: Vec<_> = js
        .iter()
        .map(|&j| qubit_approx(C64::new(j as f64 * beta, 0.0)).kron(&bpsk_register_state(j, b)))
        .collect();
    let out_states: Vec<_> = js
        .iter()
        .map(|&j| vacuum.kron(&bpsk_register_state(j, next)))
        .collect();
    let unitary = build_state_mapper(&in_states, &out_states, 4)?;
    CompressionStep {
        unitary,
        in_states,
        out_states,
    }
    .checked()
}

/// 3ASK step for hypotheses `j = −1, 0, +1`. Acts on `slice ⊗ register`
/// (8x8, register is two qubits).
pub fn build_3ask_step(beta: f64, params: AncillaParams3Ask) -> Result<CompressionStep> {
    let AncillaParams3Ask { c, d, .. } = params;
    if !(beta.is_finite() && beta >= 0.0 && c >= 0.0 && d >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "3ASK step needs beta, C, D >= 0 (got {beta}, {c}, {d})"
        )));
    }
    let (nc, nd) = threeask_cd_step(beta * beta, c, d);
    let vacuum = ComplexVector::basis(2, 0);
    let js = [-1, 0, 1];
    let in_states: Vec<_> = js
        .iter()
        .map(|&j| {
            qubit_approx(C64::new(j as f64 * beta, 0.0)).kron(&threeask_register_state(j, c, d))
        })
        .collect();
    let out_states: Vec<_> = js
        .iter()
        .map(|&j| vacuum.kron(&threeask_register_state(j, nc, nd)))
        .collect();
    let unitary = build_state_mapper(&in_states, &out_states, 8)?;
    CompressionStep {
        unitary,
        in_states,
        out_states,
    }
    .checked()
}
