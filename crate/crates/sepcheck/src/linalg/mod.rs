//! Dense complex-matrix kernel: arithmetic, Kronecker products, partial
//! trace/transpose over arbitrary subsystem splits, and a Hermitian
//! eigensolver. Everything downstream (state validation, criteria,
//! diagnostics) is built on these primitives.
//!
//! Index convention: subsystem 0 is the leftmost (slowest-varying)
//! Kronecker factor everywhere.
//!
//! ```
//! use num_complex::Complex64;
//! use sepcheck::linalg::{hermitian_eigen, partial_trace, partial_transpose, DimsSpec, Matrix};
//!
//! let half = Complex64::new(0.5, 0.0);
//! let zero = Complex64::new(0.0, 0.0);
//! // |phi+><phi+| as a 4x4 matrix.
//! let bell = Matrix::new(4, 4, vec![
//!     half, zero, zero, half,
//!     zero, zero, zero, zero,
//!     zero, zero, zero, zero,
//!     half, zero, zero, half,
//! ]).unwrap();
//! let dims = DimsSpec::new(vec![2, 2]).unwrap();
//!
//! // Either reduced state is maximally mixed.
//! let reduced = partial_trace(&bell, &dims, &[0]).unwrap();
//! assert!((reduced.at(0, 0).re - 0.5).abs() < 1e-12);
//!
//! // The partial transpose exposes a -1/2 eigenvalue.
//! let pt = partial_transpose(&bell, &dims, 1).unwrap();
//! let eig = hermitian_eigen(&pt).unwrap();
//! assert!((eig.eigenvalues[0] + 0.5).abs() < 1e-9);
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};

mod eigen;

pub use eigen::{hermitian_eigen, HermitianEigenResult};

/// Subsystem dimension signature; the product of the entries is the side
/// length of any matrix carrying this signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimsSpec {
    dims: Vec<usize>,
}

impl DimsSpec {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument("dims must be nonempty".into()));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidArgument("every dimension must be >= 1".into()));
        }
        Ok(DimsSpec { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Row-major strides: stride of subsystem k is the product of all
    /// dimensions to its right.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    /// Decompose a flat index into per-subsystem indices.
    pub fn unrank(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0usize; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = index % self.dims[k];
            index /= self.dims[k];
        }
        out
    }

    /// Flatten per-subsystem indices back into a flat index.
    pub fn rank(&self, multi: &[usize]) -> usize {
        let mut index = 0usize;
        for (k, &i) in multi.iter().enumerate() {
            index = index * self.dims[k] + i;
        }
        index
    }
}

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimMismatch(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        for (i, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    row: i / cols,
                    col: i % cols,
                });
            }
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build from rows of (re, im) pairs; rows must have equal lengths.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimMismatch("ragged rows".into()));
        }
        Matrix::new(r, c, rows.concat())
    }

    /// Real-valued convenience constructor.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let data = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Matrix::new(rows, cols, data)
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

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn mat_mul(&self, b: &Matrix) -> Result<Matrix> {
        if self.cols != b.rows {
            return Err(Error::DimMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, b.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.at(i, k);
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..b.cols {
                    let v = out.at(i, j) + aik * b.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, b: &Matrix) -> Result<Matrix> {
        self.zip(b, |x, y| x + y)
    }

    pub fn sub(&self, b: &Matrix) -> Result<Matrix> {
        self.zip(b, |x, y| x - y)
    }

    fn zip(&self, b: &Matrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Matrix> {
        if self.rows != b.rows || self.cols != b.cols {
            return Err(Error::DimMismatch(format!(
                "shape {}x{} vs {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&b.data)
            .map(|(&x, &y)| f(x, y))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, s: Complex64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Matrix {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.at(r, c).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self.at(i, i)).sum())
    }

    /// Kronecker product; `self` is the slower-varying (subsystem-major) factor.
    pub fn kron(&self, b: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * b.rows, self.cols * b.cols);
        for ra in 0..self.rows {
            for ca in 0..self.cols {
                let x = self.at(ra, ca);
                if x == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for rb in 0..b.rows {
                    for cb in 0..b.cols {
                        out.set(ra * b.rows + rb, ca * b.cols + cb, x * b.at(rb, cb));
                    }
                }
            }
        }
        out
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from Hermiticity, max |a_rc - conj(a_cr)|.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut defect: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                defect = defect.max((self.at(r, c) - self.at(c, r).conj()).norm());
            }
        }
        defect
    }

    /// (a + a†)/2.
    pub fn hermitized(&self) -> Matrix {
        let mut out = self.clone();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = (self.at(r, c) + self.at(c, r).conj()) * 0.5;
                out.set(r, c, v);
            }
        }
        out
    }
}

/// Scale-relative tolerance used throughout: base * max(1, ||a||_F).
pub fn scaled_tol(a: &Matrix, base: f64) -> f64 {
    base * a.fro_norm().max(1.0)
}

/// Default PSD/Hermiticity tolerance for a matrix: 1e-9 * max(1, ||a||_F).
pub fn default_tol(a: &Matrix) -> f64 {
    scaled_tol(a, 1e-9)
}

/// Reduced matrix on the kept subsystems; kept-index order is the order
/// given in `keep`.
pub fn partial_trace(a: &Matrix, dims: &DimsSpec, keep: &[usize]) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() != dims.total() {
        return Err(Error::DimMismatch(format!(
            "matrix side {} does not match dims product {}",
            a.rows(),
            dims.total()
        )));
    }
    if keep.is_empty() {
        return Err(Error::InvalidArgument("keep set must be nonempty".into()));
    }
    let n = dims.len();
    for &k in keep {
        if k >= n {
            return Err(Error::InvalidArgument(format!(
                "subsystem index {k} out of range (n = {n})"
            )));
        }
    }
    let mut seen = vec![false; n];
    for &k in keep {
        if seen[k] {
            return Err(Error::InvalidArgument(format!("duplicate subsystem index {k}")));
        }
        seen[k] = true;
    }
    let traced: Vec<usize> = (0..n).filter(|k| !seen[*k]).collect();
    let strides = dims.strides();

    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims.dims()[k]).collect();
    let kept_spec = DimsSpec::new(kept_dims)?;
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims.dims()[k]).collect();
    let traced_total: usize = traced_dims.iter().product::<usize>().max(1);
    let traced_spec = if traced.is_empty() {
        None
    } else {
        Some(DimsSpec::new(traced_dims)?)
    };

    let dk = kept_spec.total();
    let mut out = Matrix::zeros(dk, dk);
    for ri in 0..dk {
        let rk = kept_spec.unrank(ri);
        for ci in 0..dk {
            let ck = kept_spec.unrank(ci);
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..traced_total {
                let tm = traced_spec.as_ref().map(|s| s.unrank(t)).unwrap_or_default();
                let mut row = 0usize;
                let mut col = 0usize;
                for (pos, &k) in keep.iter().enumerate() {
                    row += rk[pos] * strides[k];
                    col += ck[pos] * strides[k];
                }
                for (pos, &k) in traced.iter().enumerate() {
                    row += tm[pos] * strides[k];
                    col += tm[pos] * strides[k];
                }
                acc += a.at(row, col);
            }
            out.set(ri, ci, acc);
        }
    }
    Ok(out)
}

/// Transpose applied only to the named subsystem's indices.
pub fn partial_transpose(a: &Matrix, dims: &DimsSpec, subsystem: usize) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() != dims.total() {
        return Err(Error::DimMismatch(format!(
            "matrix side {} does not match dims product {}",
            a.rows(),
            dims.total()
        )));
    }
    if subsystem >= dims.len() {
        return Err(Error::InvalidArgument(format!(
            "subsystem index {} out of range (n = {})",
            subsystem,
            dims.len()
        )));
    }
    let d = dims.total();
    let mut out = Matrix::zeros(d, d);
    for r in 0..d {
        let mut rm = dims.unrank(r);
        for c in 0..d {
            let mut cm = dims.unrank(c);
            std::mem::swap(&mut rm[subsystem], &mut cm[subsystem]);
            let v = a.at(dims.rank(&rm), dims.rank(&cm));
            std::mem::swap(&mut rm[subsystem], &mut cm[subsystem]);
            out.set(r, c, v);
        }
    }
    Ok(out)
}

/// tr(a^2) for Hermitian a, computed as the squared Frobenius norm.
pub fn purity(a: &Matrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.fro_norm();
    Ok(n * n)
}

/// PSD test: returns (min_eigenvalue >= -tol, min_eigenvalue).
///
/// The input is hermitized first when its Hermiticity defect is below the
/// scale-relative tolerance; a larger defect is an input error.
pub fn is_psd(a: &Matrix, tol: f64) -> Result<(bool, f64)> {
    let defect = a.hermiticity_defect();
    let herm_tol = scaled_tol(a, 1e-9);
    if defect > herm_tol {
        return Err(Error::NotHermitian {
            defect,
            tol: herm_tol,
        });
    }
    let eig = hermitian_eigen(&a.hermitized())?;
    let min = eig.eigenvalues[0];
    Ok((min >= -tol, min))
}

/// The Pauli matrices and the 2x2 identity.
pub fn pauli_x() -> Matrix {
    Matrix::from_rows(&[
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    ])
    .unwrap()
}

pub fn pauli_y() -> Matrix {
    Matrix::from_rows(&[
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
        vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
    ])
    .unwrap()
}

pub fn pauli_z() -> Matrix {
    Matrix::from_rows(&[
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
    ])
    .unwrap()
}
