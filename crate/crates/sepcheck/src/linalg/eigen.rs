//! Cyclic complex Jacobi eigensolver for Hermitian matrices.
//!
//! Each sweep visits every off-diagonal pair (p, q) and applies the unitary
//! plane rotation that zeroes the (p, q) entry. Convergence is declared when
//! the off-diagonal Frobenius norm drops below 1e-12 * max(1, ||a||_F); the
//! sweep count is hard-capped, exceeding it is a numerical failure.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{scaled_tol, Matrix};

const MAX_SWEEPS: usize = 100;

/// Full eigendecomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigenResult {
    /// Ascending eigenvalues.
    pub eigenvalues: Vec<f64>,
    /// Columns are the matching unit eigenvectors.
    pub eigenvectors: Matrix,
    /// Frobenius norm of A*V - V*Lambda against the original input.
    pub residual: f64,
}

fn offdiag_fro(w: &Matrix) -> f64 {
    let n = w.rows();
    let mut s = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                s += w.at(p, q).norm_sqr();
            }
        }
    }
    s.sqrt()
}

pub fn hermitian_eigen(a: &Matrix) -> Result<HermitianEigenResult> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let herm_tol = scaled_tol(a, 1e-9);
    let defect = a.hermiticity_defect();
    if defect > herm_tol {
        return Err(Error::NotHermitian {
            defect,
            tol: herm_tol,
        });
    }

    let n = a.rows();
    let mut w = a.hermitized();
    let mut v = Matrix::identity(n);
    let target = scaled_tol(a, 1e-12);
    // rotations on entries far below the target contribute nothing
    let skip = target / ((n * n) as f64 * 10.0);

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        if offdiag_fro(&w) < target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w.at(p, q);
                let r = apq.norm();
                if r <= skip {
                    continue;
                }
                let phase = apq / r;
                let app = w.at(p, p).re;
                let aqq = w.at(q, q).re;
                let tau = (app - aqq) / (2.0 * r);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (tau * tau + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // A <- U† A U with U[p][p]=c, U[p][q]=-s*phase,
                // U[q][p]=s*conj(phase), U[q][q]=c.
                let sp = phase * s;
                let spc = phase.conj() * s;
                // column update (A U)
                for k in 0..n {
                    let akp = w.at(k, p);
                    let akq = w.at(k, q);
                    w.set(k, p, akp * c + akq * spc);
                    w.set(k, q, akq * c - akp * sp);
                }
                // row update (U† A)
                for k in 0..n {
                    let apk = w.at(p, k);
                    let aqk = w.at(q, k);
                    w.set(p, k, apk * c + aqk * sp);
                    w.set(q, k, aqk * c - apk * spc);
                }
                // the rotation zeroes (p, q) analytically; pin it
                w.set(p, q, Complex64::new(0.0, 0.0));
                w.set(q, p, Complex64::new(0.0, 0.0));
                w.set(p, p, Complex64::new(w.at(p, p).re, 0.0));
                w.set(q, q, Complex64::new(w.at(q, q).re, 0.0));

                // V <- V U
                for k in 0..n {
                    let vkp = v.at(k, p);
                    let vkq = v.at(k, q);
                    v.set(k, p, vkp * c + vkq * spc);
                    v.set(k, q, vkq * c - vkp * sp);
                }
            }
        }
    }
    if !converged && offdiag_fro(&w) >= target {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| w.at(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, col, v.at(row, src));
        }
    }

    // residual against the original input
    let av = a.mat_mul(&vectors)?;
    let mut vl = vectors.clone();
    for col in 0..n {
        for row in 0..n {
            vl.set(row, col, vectors.at(row, col) * eigenvalues[col]);
        }
    }
    let residual = av.sub(&vl)?.fro_norm();

    Ok(HermitianEigenResult {
        eigenvalues,
        eigenvectors: vectors,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli_y, pauli_z};

    #[test]
    fn pauli_z_spectrum() {
        let eig = hermitian_eigen(&pauli_z()).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_y_spectrum() {
        let eig = hermitian_eigen(&pauli_y()).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn identity_spectrum() {
        let eig = hermitian_eigen(&Matrix::identity(5)).unwrap();
        for l in eig.eigenvalues {
            assert!((l - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        // deterministic pseudo-random Hermitian 8x8
        let n = 8;
        let mut a = Matrix::zeros(n, n);
        let mut x = 0.17f64;
        let mut next = || {
            x = (x * 997.13 + 0.31).fract();
            x - 0.5
        };
        for r in 0..n {
            for c in r..n {
                if r == c {
                    a.set(r, c, Complex64::new(next(), 0.0));
                } else {
                    let z = Complex64::new(next(), next());
                    a.set(r, c, z);
                    a.set(c, r, z.conj());
                }
            }
        }
        let eig = hermitian_eigen(&a).unwrap();
        assert!(eig.residual <= 1e-10 * a.fro_norm().max(1.0));
        // V† V = I within 1e-10 per entry
        let v = &eig.eigenvectors;
        let gram = v.adjoint().mat_mul(v).unwrap();
        for r in 0..n {
            for c in 0..n {
                let expect = if r == c { 1.0 } else { 0.0 };
                assert!((gram.at(r, c) - Complex64::new(expect, 0.0)).norm() < 1e-10);
            }
        }
        // eigenvalues ascending
        for w in eig.eigenvalues.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut a = Matrix::identity(3);
        a.set(0, 2, Complex64::new(1.0, 0.0));
        assert!(matches!(
            hermitian_eigen(&a),
            Err(Error::NotHermitian { .. })
        ));
    }
}
