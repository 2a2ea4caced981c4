//! Homodyne detection followed by a maximum-likelihood (MAP for unequal
//! priors) decision. With `x̂ = (â + â†)/√2`, a coherent state `|α⟩` with real
//! `α` gives outcomes distributed as `Normal(√2·α, 1/2)`.

use libm::erfc;

use crate::coherent::CoherentEnsemble;
use crate::error::{Error, Result};

const VARIANCE: f64 = 0.5;

/// Standard normal tail `Q(x) = P(Z > x)`.
pub fn normal_tail(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Error probability of the optimal decision on a single quadrature outcome.
///
/// The log posterior of hypothesis `i` is, up to a common term, the line
/// `ln p_i + (x·μ_i − μ_i²/2)/σ²`; the decision regions are the intervals on
/// which each line is the upper envelope.
pub fn homodyne_ml_error(ens: &CoherentEnsemble) -> Result<f64> {
    if !ens.is_real() {
        return Err(Error::UnsupportedAlphabet(
            "homodyne baseline needs real amplitudes".into(),
        ));
    }
    let sigma = VARIANCE.sqrt();
    let mut hyps: Vec<(f64, f64)> = ens
        .amplitudes()
        .iter()
        .zip(ens.priors())
        .filter(|(_, &p)| p > 0.0)
        .map(|(a, &p)| (std::f64::consts::SQRT_2 * a.re, p))
        .collect();
    hyps.sort_by(|a, b| a.0.total_cmp(&b.0));

    let slope = |mu: f64| mu / VARIANCE;
    let offset = |mu: f64, p: f64| p.ln() - mu * mu / (2.0 * VARIANCE);
    let crossing = |i: usize, j: usize| {
        let (mi, pi) = hyps[i];
        let (mj, pj) = hyps[j];
        (offset(mi, pi) - offset(mj, pj)) / (slope(mj) - slope(mi))
    };

    // Upper envelope of lines sorted by slope; `starts[k]` is where
    // `hull[k]` takes over.
    let mut hull: Vec<usize> = Vec::new();
    let mut starts: Vec<f64> = Vec::new();
    for j in 0..hyps.len() {
        loop {
            match hull.last() {
                None => {
                    hull.push(j);
                    starts.push(f64::NEG_INFINITY);
                    break;
                }
                Some(&i) => {
                    let x = crossing(i, j);
                    if x <= *starts.last().unwrap() {
                        hull.pop();
                        starts.pop();
                    } else {
                        hull.push(j);
                        starts.push(x);
                        break;
                    }
                }
            }
        }
    }

    let mut success = 0.0;
    for (k, &i) in hull.iter().enumerate() {
        let (mu, p) = hyps[i];
        let lo = starts[k];
        let hi = starts.get(k + 1).copied().unwrap_or(f64::INFINITY);
        let outside = normal_tail((hi - mu) / sigma) + normal_tail((mu - lo) / sigma);
        success += p * (1.0 - outside);
    }
    Ok(1.0 - success)
}
