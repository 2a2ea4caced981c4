//! Optimal measurement for three equiprobable pure states with Gram matrix
//! `[[1,x,x],[x,1,y],[x,y,1]]`.
//!
//! In the optimal measurement basis `{|w_i⟩}` the hypotheses have coefficient
//! rows `(a,b,b)`, `(d,c,e)`, `(d,e,c)`. Normalization and the two overlaps
//! fix `a, b, c, e` as functions of `d`; the stationarity condition
//! `ab = cd` then pins `d`, found here by a sign-change scan and bisection.

use crate::error::{Error, Result};

/// Uniform scan points over the admissible `d` interval.
pub const ISOCELES_GRID: usize = 512;
const BISECTION_TOL: f64 = 1e-13;
const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsocelesSolution {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub error_prob: f64,
}

impl IsocelesSolution {
    /// Residuals of `a²+2b²=1`, `d²+c²+e²=1`, `ad+b(c+e)=x`, `d²+2ce=y`,
    /// `ab=cd`.
    pub fn residuals(&self, x: f64, y: f64) -> [f64; 5] {
        let IsocelesSolution { a, b, c, d, e, .. } = *self;
        [
            (a * a + 2.0 * b * b - 1.0).abs(),
            (d * d + c * c + e * e - 1.0).abs(),
            (a * d + b * (c + e) - x).abs(),
            (d * d + 2.0 * c * e - y).abs(),
            (a * b - c * d).abs(),
        ]
    }

    pub fn max_residual(&self, x: f64, y: f64) -> f64 {
        self.residuals(x, y).into_iter().fold(0.0, f64::max)
    }
}

struct Params {
    x: f64,
    y: f64,
    root_one_minus_y: f64,
    gram_factor: f64,
}

impl Params {
    fn at(&self, d: f64) -> IsocelesSolution {
        let Params { x, y, .. } = *self;
        let s = (y - 2.0 * d * d + 1.0).max(0.0).sqrt();
        let r = self.gram_factor * s;
        let a = (2.0 * d * x + r) / (1.0 + y);
        let b = if s > 0.0 {
            (x - 2.0 * d * d * x + x * y - d * r) / ((1.0 + y) * s)
        } else {
            f64::NAN
        };
        let c = 0.5 * (s + self.root_one_minus_y);
        let e = 0.5 * (s - self.root_one_minus_y);
        IsocelesSolution {
            a,
            b,
            c,
            d,
            e,
            error_prob: 1.0 - (a * a + 2.0 * c * c) / 3.0,
        }
    }

    fn stationarity(&self, d: f64) -> f64 {
        let p = self.at(d);
        p.a * p.b - p.c * d
    }
}

/// Solves the isoceles three-hypothesis problem for overlaps `x` (apex to
/// both others) and `y` (between the other two).
pub fn isoceles_three_pure(x: f64, y: f64) -> Result<IsocelesSolution> {
    if !(x.is_finite() && y.is_finite()) || x.abs() > 1.0 || y.abs() > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "overlaps must lie in [-1, 1], got x = {x}, y = {y}"
        )));
    }
    // det Γ = (1 − y)(1 + y − 2x²) must be nonnegative.
    let slack = 1.0 + y - 2.0 * x * x;
    if slack < -1e-12 {
        return Err(Error::InvalidParameter(format!(
            "x = {x}, y = {y} is not a valid Gram matrix"
        )));
    }
    let params = Params {
        x,
        y,
        root_one_minus_y: (1.0 - y).max(0.0).sqrt(),
        gram_factor: slack.max(0.0).sqrt(),
    };
    let hi = ((1.0 + y) / 2.0).sqrt() * (1.0 - 1e-12);
    let lo = -hi;
    let step = (hi - lo) / (ISOCELES_GRID - 1) as f64;
    let grid: Vec<f64> = (0..ISOCELES_GRID).map(|i| lo + i as f64 * step).collect();
    let values: Vec<f64> = grid.iter().map(|&d| params.stationarity(d)).collect();

    let mut roots = Vec::new();
    for i in 0..ISOCELES_GRID {
        if values[i] == 0.0 {
            roots.push(grid[i]);
            continue;
        }
        if i + 1 < ISOCELES_GRID && values[i] * values[i + 1] < 0.0 {
            roots.push(bisect(&params, grid[i], grid[i + 1], values[i]));
        }
    }

    roots
        .into_iter()
        .map(|d| params.at(d))
        .filter(|s| s.max_residual(x, y) <= RESIDUAL_TOL)
        .min_by(|p, q| p.error_prob.total_cmp(&q.error_prob))
        .ok_or(Error::NoRoot {
            lo,
            hi,
            grid: ISOCELES_GRID,
        })
}

fn bisect(params: &Params, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = params.stationarity(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_hypotheses_are_perfectly_distinguishable() {
        let s = isoceles_three_pure(0.0, 0.0).unwrap();
        assert_eq!(s.error_prob, 0.0);
        assert!((s.a - 1.0).abs() < 1e-12 && (s.c - 1.0).abs() < 1e-12);
        assert!(s.b.abs() < 1e-12 && s.d.abs() < 1e-12 && s.e.abs() < 1e-12);
    }

    #[test]
    fn residuals_are_small_on_coherent_grid() {
        for i in 1..=40 {
            let alpha = i as f64 * 0.05;
            let x = (-alpha * alpha / 2.0).exp();
            let y = (-2.0 * alpha * alpha).exp();
            let s = isoceles_three_pure(x, y).unwrap();
            assert!(s.max_residual(x, y) <= 1e-10, "alpha {alpha}");
            assert!((0.0..=2.0 / 3.0).contains(&s.error_prob));
        }
    }

    #[test]
    fn rejects_invalid_gram() {
        assert!(isoceles_three_pure(0.9, 0.0).is_err());
        assert!(isoceles_three_pure(1.5, 0.0).is_err());
        assert!(isoceles_three_pure(0.2, f64::NAN).is_err());
    }

    #[test]
    fn error_grows_with_overlap() {
        let mut prev = -1.0;
        for i in 0..20 {
            let x = i as f64 * 0.03;
            let s = isoceles_three_pure(x, x * x).unwrap();
            assert!(s.error_prob > prev);
            prev = s.error_prob;
        }
    }
}
