use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// `(1 − √(1 − 4p₁p₂|γ|²))/2` for two pure states with overlap `γ`.
pub fn helstrom_binary_pure(overlap: C64, p1: f64) -> f64 {
    let p2 = 1.0 - p1;
    let disc = (1.0 - 4.0 * p1 * p2 * overlap.norm_sqr()).max(0.0);
    0.5 * (1.0 - disc.sqrt())
}

/// `(1 − ‖p₁ρ₁ − p₂ρ₂‖₁)/2`.
pub fn helstrom_binary_mixed(rho1: &ComplexMatrix, rho2: &ComplexMatrix, p1: f64) -> Result<f64> {
    let gamma = weighted_difference(rho1, rho2, p1)?;
    Ok(0.5 * (1.0 - gamma.trace_norm()?))
}

/// Optimal binary measurement `(Π₁, Π₂)`: `Π₁` projects onto the positive
/// part of `p₁ρ₁ − p₂ρ₂`.
pub fn helstrom_measurement(
    rho1: &ComplexMatrix,
    rho2: &ComplexMatrix,
    p1: f64,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let gamma = weighted_difference(rho1, rho2, p1)?;
    let eig = gamma.eigh()?;
    let first = eig.reconstruct(|l| if l > 0.0 { 1.0 } else { 0.0 });
    let second = &ComplexMatrix::identity(rho1.rows()) - &first;
    Ok((first, second))
}

fn weighted_difference(rho1: &ComplexMatrix, rho2: &ComplexMatrix, p1: f64) -> Result<ComplexMatrix> {
    if (rho1.rows(), rho1.cols()) != (rho2.rows(), rho2.cols()) || !rho1.is_square() {
        return Err(Error::Dimension(format!(
            "states of shape {}x{} and {}x{}",
            rho1.rows(),
            rho1.cols(),
            rho2.rows(),
            rho2.cols()
        )));
    }
    if !(0.0..=1.0).contains(&p1) {
        return Err(Error::InvalidParameter(format!("prior {p1} outside [0, 1]")));
    }
    Ok(&rho1.scale_real(p1) - &rho2.scale_real(1.0 - p1))
}
