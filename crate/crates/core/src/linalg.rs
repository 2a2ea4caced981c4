//! Dense complex linear algebra for the small matrices used throughout the
//! crate (registers of at most a few qubits, joint codeword states up to
//! 16x16).
//!
//! Hermitian eigendecompositions use cyclic complex Jacobi rotations, which are
//! slow asymptotically but accurate to working precision for every eigenvalue,
//! including the tiny ones that decide ranks in Gram matrices.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Unitarity tolerance on `‖U†U − I‖_max`.
pub const UNITARY_TOL: f64 = 1e-12;
/// Hermiticity tolerance on `‖ρ − ρ†‖_max`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues in `[-PSD_TOL, 0)` are clipped to zero; below is an error.
pub const PSD_TOL: f64 = 1e-10;
/// Allowed deviation of a density-matrix trace from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues below this are treated as zero by pseudo-inverses.
pub const PSEUDO_INV_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    entries: Vec<C64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Dimension("vector must have dimension >= 1".into()));
        }
        Ok(Self { entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Canonical basis vector `e_index` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut entries = vec![C64::new(0.0, 0.0); dim];
        entries[index] = C64::new(1.0, 0.0);
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0);
        Self {
            entries: vec![C64::new(0.0, 0.0); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::InvalidState("cannot normalize the zero vector".into()));
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn is_state(&self) -> bool {
        (self.norm() - 1.0).abs() <= 1e-12
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a * b);
            }
        }
        Self { entries }
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> ComplexMatrix {
        let d = self.dim();
        ComplexMatrix::from_fn(d, d, |i, j| self.entries[i] * self.entries[j].conj())
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.entries[i]
    }
}

impl Sub for &ComplexVector {
    type Output = ComplexVector;
    fn sub(self, rhs: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim(), rhs.dim());
        ComplexVector {
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0);
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0)))
            .collect();
        Self::new(nrows, ncols, data)
    }

    /// Matrix whose rows are the given vectors.
    pub fn from_rows(rows: &[ComplexVector]) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.dim());
        if rows.iter().any(|r| r.dim() != ncols) {
            return Err(Error::Dimension("rows of unequal dimension".into()));
        }
        let data = rows.iter().flat_map(|r| r.entries.iter().copied()).collect();
        Self::new(rows.len(), ncols, data)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[ComplexVector]) -> Result<Self> {
        let nrows = cols.first().map_or(0, |c| c.dim());
        if cols.iter().any(|c| c.dim() != nrows) {
            return Err(Error::Dimension("columns of unequal dimension".into()));
        }
        if nrows == 0 {
            return Err(Error::Dimension("no columns".into()));
        }
        Ok(Self::from_fn(nrows, cols.len(), |r, c| cols[c][r]))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| C64::new(0.0, 0.0))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, |r, c| {
            if r == c {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let d = diag.len();
        Self::from_fn(d, d, |r, c| {
            if r == c {
                C64::new(diag[r], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn row(&self, r: usize) -> ComplexVector {
        ComplexVector {
            entries: self.data[r * self.cols..(r + 1) * self.cols].to_vec(),
        }
    }

    pub fn column(&self, c: usize) -> ComplexVector {
        ComplexVector {
            entries: (0..self.rows).map(|r| self[(r, c)]).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.cols, v.dim(), "matrix-vector dimension mismatch");
        let entries = (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(&v.entries)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        ComplexVector { entries }
    }

    /// `⟨v|M|v⟩`.
    pub fn expectation(&self, v: &ComplexVector) -> C64 {
        v.inner(&self.apply(v))
    }

    /// `M ρ M†`.
    pub fn conjugate(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        &(self * rho) * &self.adjoint()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()) * 0.5
        })
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.rows))
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_residual() <= UNITARY_TOL
    }

    /// Checks Hermiticity, positivity and unit trace within the crate
    /// tolerances.
    pub fn check_density(&self) -> Result<()> {
        self.require_square()?;
        let herm = self.hermiticity_residual();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (residual {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = self.eigh()?.values[0];
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (ar, ac, br, bc) = (self.rows, self.cols, other.rows, other.cols);
        Self::from_fn(ar * br, ac * bc, |r, c| {
            self[(r / br, c / bc)] * other[(r % br, c % bc)]
        })
    }

    /// Traces out one factor of a bipartite operator on `C^dA ⊗ C^dB`.
    pub fn partial_trace(&self, dims: (usize, usize), keep: Subsystem) -> Result<Self> {
        let n = self.require_square()?;
        let (da, db) = dims;
        if da == 0 || db == 0 || da * db != n {
            return Err(Error::Dimension(format!(
                "cannot split a {n}x{n} matrix as {da} x {db}"
            )));
        }
        Ok(match keep {
            Subsystem::A => Self::from_fn(da, da, |a, b| {
                (0..db).map(|i| self[(a * db + i, b * db + i)]).sum()
            }),
            Subsystem::B => Self::from_fn(db, db, |i, j| {
                (0..da).map(|a| self[(a * db + i, a * db + j)]).sum()
            }),
        })
    }

    /// Eigendecomposition of the Hermitian part of a square matrix.
    pub fn eigh(&self) -> Result<HermitianEigen> {
        let n = self.require_square()?;
        let mut a = self.hermitian_part().data;
        let mut v = Self::identity(n).data;
        let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

        for _sweep in 0..64 {
            let mut off = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    off += a[p * n + q].norm_sqr();
                }
            }
            if off.sqrt() <= 1e-17 * scale || off == 0.0 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    let r = apq.norm();
                    if r == 0.0 {
                        continue;
                    }
                    let app = a[p * n + p].re;
                    let aqq = a[q * n + q].re;
                    if r < 1e-300 || r <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
                        a[p * n + q] = C64::new(0.0, 0.0);
                        a[q * n + p] = C64::new(0.0, 0.0);
                        continue;
                    }
                    let theta = (aqq - app) / (2.0 * r);
                    let t = if theta == 0.0 {
                        1.0
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let phase = apq / r;
                    let phase_conj = phase.conj();
                    // Columns: G[p][p]=c, G[q][p]=-s e^{-iφ}, G[p][q]=s, G[q][q]=c e^{-iφ}.
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = akp * c - akq * phase_conj * s;
                        a[k * n + q] = akp * s + akq * phase_conj * c;
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * c - vkq * phase_conj * s;
                        v[k * n + q] = vkp * s + vkq * phase_conj * c;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = apk * c - aqk * phase * s;
                        a[q * n + k] = apk * s + aqk * phase * c;
                    }
                    a[p * n + q] = C64::new(0.0, 0.0);
                    a[q * n + p] = C64::new(0.0, 0.0);
                    a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
                    a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
        let values = order.iter().map(|&i| a[i * n + i].re).collect();
        let vectors = Self::from_fn(n, n, |r, c| v[r * n + order[c]]);
        Ok(HermitianEigen { values, vectors })
    }

    /// Applies a real function to the spectrum of a Hermitian matrix.
    pub fn herm_map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let eig = self.eigh()?;
        Ok(eig.reconstruct(f))
    }

    /// `M^{-1/2}` for Hermitian PSD `M`. With `pseudo`, eigenvalues below
    /// [`PSEUDO_INV_THRESHOLD`] are treated as zero.
    pub fn herm_sqrt_inv(&self, pseudo: bool) -> Result<Self> {
        let eig = self.eigh()?.clip_psd()?;
        let min = eig.values[0];
        if !pseudo && min <= PSEUDO_INV_THRESHOLD {
            return Err(Error::Singular(min));
        }
        Ok(eig.reconstruct(|l| {
            if l <= PSEUDO_INV_THRESHOLD {
                0.0
            } else {
                1.0 / l.sqrt()
            }
        }))
    }

    pub fn herm_sqrt(&self) -> Result<Self> {
        let eig = self.eigh()?.clip_psd()?;
        Ok(eig.reconstruct(f64::sqrt))
    }

    /// Sum of singular values.
    pub fn trace_norm(&self) -> Result<f64> {
        self.require_square()?;
        let scale = self.max_abs().max(1.0);
        if self.hermiticity_residual() <= 1e-14 * scale {
            return Ok(self.eigh()?.values.iter().map(|l| l.abs()).sum());
        }
        let gram = &self.adjoint() * self;
        Ok(gram
            .eigh()?
            .values
            .iter()
            .map(|&l| l.max(0.0).sqrt())
            .sum())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let (n, m, k) = (self.rows, rhs.cols, self.cols);
        let mut data = vec![C64::new(0.0, 0.0); n * m];
        for r in 0..n {
            for i in 0..k {
                let a = self.data[r * k + i];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &rhs.data[i * m..(i + 1) * m];
                for (out, b) in data[r * m..(r + 1) * m].iter_mut().zip(row) {
                    *out += a * b;
                }
            }
        }
        ComplexMatrix {
            rows: n,
            cols: m,
            data,
        }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Which factor of a bipartite space to keep in [`ComplexMatrix::partial_trace`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Eigenvalues in ascending order with eigenvectors as matching columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Clips eigenvalues in `[-PSD_TOL, 0)` to zero, rejecting anything
    /// more negative.
    pub fn clip_psd(mut self) -> Result<Self> {
        let scale = self.values.last().copied().unwrap_or(0.0).abs().max(1.0);
        for l in &mut self.values {
            if *l < -PSD_TOL * scale {
                return Err(Error::NotPositive(*l));
            }
            if *l < 0.0 {
                if *l < -1e-14 * scale {
                    log::warn!("clipping eigenvalue {l:e} to zero");
                }
                *l = 0.0;
            }
        }
        Ok(self)
    }

    pub fn reconstruct(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .filter(|&k| fv[k] != 0.0)
                .map(|k| v[(r, k)] * v[(c, k)].conj() * fv[k])
                .sum()
        })
    }

    pub fn vector(&self, k: usize) -> ComplexVector {
        self.vectors.column(k)
    }
}

/// Extends mutually orthonormal `rows` to a `dim x dim` unitary whose leading
/// rows are exactly `rows`. The remaining rows come from modified Gram-Schmidt
/// against the canonical basis scanned in index order, so the result is
/// deterministic.
pub fn orthonormal_completion(rows: &[ComplexVector], dim: usize) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(Error::Dimension("dim must be positive".into()));
    }
    if rows.len() > dim {
        return Err(Error::Dimension(format!(
            "{} rows cannot be orthonormal in dimension {dim}",
            rows.len()
        )));
    }
    if let Some(bad) = rows.iter().find(|r| r.dim() != dim) {
        return Err(Error::Dimension(format!(
            "row of dimension {} in a {dim}-dimensional completion",
            bad.dim()
        )));
    }
    let mut worst: f64 = 0.0;
    for (i, a) in rows.iter().enumerate() {
        for (j, b) in rows.iter().enumerate().skip(i) {
            // Rows r_i of a unitary satisfy Σ_k r_i[k] conj(r_j[k]) = δ_ij.
            let ip = b.inner(a);
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((ip - target).norm());
        }
    }
    if worst > 1e-10 {
        return Err(Error::NotOrthonormal(worst));
    }

    // Work with conjugated rows so the row condition becomes the usual
    // column-vector inner product.
    let mut basis: Vec<ComplexVector> = rows.iter().map(ComplexVector::conj).collect();
    let given = basis.len();
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut cand = ComplexVector::basis(dim, k);
        for _pass in 0..2 {
            for b in &basis {
                let proj = b.inner(&cand);
                cand = &cand - &b.scale(proj);
            }
        }
        let norm = cand.norm();
        if norm > 1e-8 {
            basis.push(cand.scale(C64::new(1.0 / norm, 0.0)));
        }
    }
    if basis.len() != dim {
        return Err(Error::Dimension(format!(
            "completion found only {} of {dim} rows",
            basis.len()
        )));
    }
    let mut out: Vec<ComplexVector> = rows.to_vec();
    out.extend(basis.into_iter().skip(given).map(|v| v.conj()));
    ComplexMatrix::from_rows(&out)
}
