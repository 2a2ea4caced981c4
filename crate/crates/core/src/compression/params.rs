//! Register-state parameters of the sequential compressors.
//!
//! BPSK keeps one ancilla qubit in `(|0⟩ + jB|1⟩)/√(1+B²)`; 3ASK keeps two in
//! `(|00⟩ + jC|01⟩ + j²D|11⟩)/√(1+j²C²+j²D²)`. Each step must reproduce the
//! product of the slice overlap with the previous register overlap, which
//! fixes the parameter recursions. Both recursions have closed forms; these
//! are evaluated in hyperbolic form so that small `β` keeps full relative
//! precision.

use crate::error::{Error, Result};
use crate::linalg::{ComplexVector, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AncillaParamsBpsk {
    pub ell: usize,
    pub b: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AncillaParams3Ask {
    pub ell: usize,
    pub c: f64,
    pub d: f64,
}

fn check_common(alpha: f64, n: usize, ell: usize) -> Result<f64> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("slice count must be >= 1".into()));
    }
    if ell > n {
        return Err(Error::InvalidParameter(format!("step {ell} exceeds slice count {n}")));
    }
    Ok(alpha * alpha / n as f64)
}

/// One BPSK step: `B' = √((β² + B²)/(1 + β²B²))`.
pub fn bpsk_b_step(beta_sq: f64, b: f64) -> f64 {
    ((beta_sq + b * b) / (1.0 + beta_sq * b * b)).sqrt()
}

/// `B_(ℓ)` by iterating the step recursion from `B_(0) = 0`.
pub fn bpsk_b_recursion(alpha: f64, n: usize, ell: usize) -> Result<f64> {
    let beta_sq = check_common(alpha, n, ell)?;
    Ok((0..ell).fold(0.0, |b, _| bpsk_b_step(beta_sq, b)))
}

/// Closed form of the BPSK recursion,
/// `B_(ℓ)² = 1 + 2/((−1)^{ℓ−1}((β²+1)/(β²−1))^ℓ − 1)`,
/// i.e. `tanh(ℓ·atanh β²)` for `β < 1`. For `β > 1` the same expression
/// alternates between `coth` and `tanh` of `ℓ·atanh(1/β²)`.
pub fn bpsk_b_closed(beta: f64, ell: usize) -> Result<f64> {
    if ell == 0 {
        return Err(Error::InvalidParameter("closed form needs ell >= 1".into()));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidParameter(format!("beta must be > 0, got {beta}")));
    }
    let bsq = beta * beta;
    if (bsq - 1.0).abs() < 1e-12 {
        return Err(Error::InvalidParameter(
            "beta = 1 makes the closed form singular; increase the slice count".into(),
        ));
    }
    Ok(bpsk_b_squared_closed(bsq, ell).sqrt())
}

pub(crate) fn bpsk_b_squared_closed(beta_sq: f64, ell: usize) -> f64 {
    if ell == 0 || beta_sq == 0.0 {
        return 0.0;
    }
    if beta_sq < 1.0 {
        (ell as f64 * beta_sq.atanh()).tanh()
    } else {
        let u = ell as f64 * (1.0 / beta_sq).atanh();
        if ell % 2 == 1 {
            1.0 / u.tanh()
        } else {
            u.tanh()
        }
    }
}

/// BPSK parameter trajectory `B_(0..=n)` for slice amplitude `β`.
pub fn bpsk_trajectory(beta: f64, n: usize) -> Vec<AncillaParamsBpsk> {
    let bsq = beta * beta;
    (0..=n)
        .map(|ell| AncillaParamsBpsk {
            ell,
            b: bpsk_b_squared_closed(bsq, ell).sqrt(),
        })
        .collect()
}

/// One 3ASK step:
/// `C' = √(C² + β² + β²D²)`, `D' = √(D² + β²C²)`.
pub fn threeask_cd_step(beta_sq: f64, c: f64, d: f64) -> (f64, f64) {
    (
        (c * c + beta_sq + beta_sq * d * d).sqrt(),
        (d * d + beta_sq * c * c).sqrt(),
    )
}

/// `(C_(ℓ), D_(ℓ))` by iterating the coupled recursion from zero.
pub fn threeask_cd_recursion(alpha: f64, n: usize, ell: usize) -> Result<(f64, f64)> {
    let beta_sq = check_common(alpha, n, ell)?;
    Ok((0..ell).fold((0.0, 0.0), |(c, d), _| threeask_cd_step(beta_sq, c, d)))
}

/// Closed forms `C² = ((1+β²)^ℓ − (1−β²)^ℓ)/2`,
/// `D² = ((1+β²)^ℓ + (1−β²)^ℓ)/2 − 1`.
pub fn threeask_cd_closed(beta: f64, ell: usize) -> Result<(f64, f64)> {
    if ell == 0 {
        return Err(Error::InvalidParameter("closed form needs ell >= 1".into()));
    }
    if !(beta.is_finite() && beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "closed form needs 0 < beta < 1, got {beta}"
        )));
    }
    let (c2, d2) = threeask_cd_squared_closed(beta * beta, ell);
    Ok((c2.sqrt(), d2.sqrt()))
}

pub(crate) fn threeask_cd_squared_closed(beta_sq: f64, ell: usize) -> (f64, f64) {
    if ell == 0 || beta_sq == 0.0 {
        return (0.0, 0.0);
    }
    // (1±β²)^ℓ = e^{ℓ(s ± t)} with s = ln(1−β⁴)/2, t = atanh(β²).
    let l = ell as f64;
    let s = 0.5 * (-beta_sq * beta_sq).ln_1p();
    let t = beta_sq.atanh();
    let growth = (l * s).exp();
    let c2 = growth * (l * t).sinh();
    if l * beta_sq <= 1.0 {
        return (c2, even_binomial_tail(beta_sq, ell));
    }
    let half = (0.5 * l * t).sinh();
    let d2 = (l * s).exp_m1() + growth * 2.0 * half * half;
    (c2, d2.max(0.0))
}

/// `Σ_{k even ≥ 2} C(ℓ,k) β^{2k}`, which is `D²`. The two hyperbolic terms
/// cancel when `ℓβ²` is small; the series has positive terms shrinking at
/// least twofold per step there.
fn even_binomial_tail(beta_sq: f64, ell: usize) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..=ell {
        term *= (ell - k + 1) as f64 / k as f64 * beta_sq;
        if k % 2 == 0 {
            sum += term;
            if term <= 1e-18 * sum {
                break;
            }
        }
    }
    sum
}

pub fn threeask_trajectory(beta: f64, n: usize) -> Vec<AncillaParams3Ask> {
    let bsq = beta * beta;
    (0..=n)
        .map(|ell| {
            let (c2, d2) = threeask_cd_squared_closed(bsq, ell);
            AncillaParams3Ask {
                ell,
                c: c2.sqrt(),
                d: d2.sqrt(),
            }
        })
        .collect()
}

/// `(|0⟩ + jB|1⟩)/√(1+B²)`.
pub fn bpsk_register_state(j: i32, b: f64) -> ComplexVector {
    let jb = j as f64 * b;
    let norm = (1.0 + jb * jb).sqrt();
    ComplexVector::from_real(&[1.0 / norm, jb / norm]).expect("two entries")
}

/// `(|00⟩ + jC|01⟩ + j²D|11⟩)/√(1+j²C²+j²D²)`.
pub fn threeask_register_state(j: i32, c: f64, d: f64) -> ComplexVector {
    let jf = j as f64;
    let amps = [1.0, jf * c, 0.0, jf * jf * d];
    let norm = amps.iter().map(|x| x * x).sum::<f64>().sqrt();
    ComplexVector::new(amps.iter().map(|x| C64::new(x / norm, 0.0)).collect())
        .expect("four entries")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close_rel(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn bpsk_recursion_small_steps() {
        assert_eq!(bpsk_b_recursion(0.5, 10, 0).unwrap(), 0.0);
        let beta = 0.5 / 10f64.sqrt();
        assert!((bpsk_b_recursion(0.5, 10, 1).unwrap() - beta).abs() < 1e-16);
        let closed = bpsk_b_closed(beta, 10).unwrap();
        assert!((bpsk_b_recursion(0.5, 10, 10).unwrap() - closed).abs() < 1e-12);
    }

    #[test]
    fn bpsk_recursion_rejects_bad_input() {
        assert!(bpsk_b_recursion(0.5, 10, 11).is_err());
        assert!(bpsk_b_recursion(-0.5, 10, 1).is_err());
        assert!(bpsk_b_recursion(0.5, 0, 0).is_err());
    }

    #[test]
    fn bpsk_closed_matches_recursion_on_grid() {
        for i in 1..=90 {
            let beta = i as f64 / 100.0;
            let bsq = beta * beta;
            let mut b = 0.0;
            for ell in 1..=200 {
                b = bpsk_b_step(bsq, b);
                let closed = bpsk_b_closed(beta, ell).unwrap();
                assert!((closed - b).abs() < 1e-12, "beta {beta} ell {ell}");
            }
        }
    }

    #[test]
    fn bpsk_closed_beyond_unit_slice_amplitude() {
        for beta in [1.1, 1.5, 3.0] {
            let bsq: f64 = beta * beta;
            let mut b = 0.0;
            for ell in 1..=40 {
                b = bpsk_b_step(bsq, b);
                assert!(close_rel(bpsk_b_closed(beta, ell).unwrap(), b, 1e-12));
            }
        }
        assert!(bpsk_b_closed(1.0, 3).is_err());
        assert!(bpsk_b_closed(0.3, 0).is_err());
    }

    #[test]
    fn displayed_bpsk_expression_is_one_step_ahead() {
        // 1 + 2/((−1)^ℓ((β²+1)/(β²−1))^{ℓ+1} − 1) evaluates B after ℓ+1 steps.
        for beta in [0.1, 0.4, 0.8] {
            let bsq: f64 = beta * beta;
            let q = (bsq + 1.0) / (bsq - 1.0);
            for ell in 1..12 {
                let sign = if ell % 2 == 0 { 1.0 } else { -1.0 };
                let literal = (1.0 + 2.0 / (sign * q.powi(ell as i32 + 1) - 1.0)).sqrt();
                let ahead = bpsk_b_closed(beta, ell + 1).unwrap();
                assert!((literal - ahead).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bpsk_small_beta_scaling() {
        let beta = 1e-4;
        for ell in [1usize, 4, 25, 100] {
            let ratio = bpsk_b_closed(beta, ell).unwrap() / (beta * (ell as f64).sqrt());
            assert!((ratio - 1.0).abs() < 1e-6, "ell {ell}: {ratio}");
        }
        assert_eq!(bpsk_b_closed(0.37, 1).unwrap(), 0.37);
    }

    #[test]
    fn bpsk_trajectory_is_increasing_and_below_one() {
        let traj = bpsk_trajectory(0.3, 50);
        assert_eq!(traj[0].b, 0.0);
        for w in traj.windows(2) {
            assert!(w[1].b > w[0].b);
            assert!(w[1].b < 1.0);
        }
    }

    #[test]
    fn threeask_recursion_small_steps() {
        assert_eq!(threeask_cd_recursion(0.9, 9, 0).unwrap(), (0.0, 0.0));
        let (c, d) = threeask_cd_recursion(0.9, 9, 1).unwrap();
        assert!((c - 0.3).abs() < 1e-16 && d == 0.0);
        let (c, d) = threeask_cd_recursion(0.3, 1, 1).unwrap();
        assert!((c - 0.3).abs() < 1e-16 && d == 0.0);
        // ℓ = 2 at β = 0.3
        let (rc, rd) = threeask_cd_recursion(0.6, 4, 2).unwrap();
        let (cc, cd) = threeask_cd_closed(0.3, 2).unwrap();
        assert!((rc - cc).abs() < 1e-12 && (rd - cd).abs() < 1e-12);
        assert!(threeask_cd_recursion(0.6, 4, 5).is_err());
    }

    #[test]
    fn threeask_closed_examples_and_identity() {
        let (c, d) = threeask_cd_closed(0.2, 1).unwrap();
        assert!((c - 0.2).abs() < 1e-16 && d.abs() < 1e-12);
        for i in 1..=90 {
            let beta = i as f64 / 100.0;
            for ell in 1..=200 {
                let (c, d) = threeask_cd_closed(beta, ell).unwrap();
                let target = (1.0 + beta * beta).powi(ell as i32) - 1.0;
                assert!(close_rel(c * c + d * d, target, 1e-12));
            }
        }
        assert!(threeask_cd_closed(1.2, 3).is_err());
        assert!(threeask_cd_closed(0.5, 0).is_err());
    }

    #[test]
    fn threeask_closed_matches_recursion_on_grid() {
        for i in 1..=90 {
            let beta = i as f64 / 100.0;
            let bsq = beta * beta;
            let (mut c, mut d) = (0.0, 0.0);
            for ell in 1..=200 {
                (c, d) = threeask_cd_step(bsq, c, d);
                let (cc, cd) = threeask_cd_closed(beta, ell).unwrap();
                assert!(close_rel(cc, c, 1e-12), "C beta {beta} ell {ell}: {cc} vs {c}");
                assert!(close_rel(cd, d, 1e-12), "D beta {beta} ell {ell}: {cd} vs {d}");
            }
        }
    }

    #[test]
    fn register_states_are_normalized() {
        for j in [-1, 0, 1] {
            assert!(bpsk_register_state(j, 0.7).is_state());
            assert!(threeask_register_state(j, 1.3, 0.4).is_state());
        }
        assert_eq!(
            threeask_register_state(0, 5.0, 5.0),
            ComplexVector::basis(4, 0)
        );
    }
}
