//! Exploratory diagnostics: purification-based cross-Gram comparison and
//! the N(mu) affine family. These emit numbers only; no pass/fail rule is
//! attached to them.
//!
//! ```
//! use sepcheck::diagnostics::{cross_gram_diagnostic, n_mu_interval};
//! use sepcheck::linalg::DimsSpec;
//! use sepcheck::states::random_separable;
//!
//! // A single product term: the cross-Gram matrix equals rho^2 exactly.
//! let dims = DimsSpec::new(vec![2, 2]).unwrap();
//! let (rho, _) = random_separable(&dims, 1, 7).unwrap();
//! let report = cross_gram_diagnostic(&rho, 1).unwrap();
//! assert!(report.dist_full < 1e-10);
//!
//! // Product states keep the affine family positive over the whole search range.
//! let interval = n_mu_interval(&rho, 1, 64.0, 1e-6).unwrap();
//! assert!(interval.bound_hit_min && interval.bound_hit_max);
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eigen, partial_trace, DimsSpec, Matrix};
use crate::states::{DensityMatrix, PureState};

/// Pure tripartite extension of a bipartite state; tracing out the third
/// register recovers the input.
#[derive(Clone, Debug)]
pub struct Purification {
    /// (dA, dB, dC) with dC equal to the kept rank.
    pub dims: (usize, usize, usize),
    pub state: PureState,
    pub kept_rank: usize,
}

fn bipartite_dims(rho: &DensityMatrix, cut: usize) -> Result<(usize, usize)> {
    let dims = rho.dims().dims();
    if cut == 0 || cut >= dims.len() {
        return Err(Error::InvalidArgument(format!(
            "cut {} must split {} subsystems into two nonempty groups",
            cut,
            dims.len()
        )));
    }
    let da: usize = dims[..cut].iter().product();
    let db: usize = dims[cut..].iter().product();
    Ok((da, db))
}

/// Minimal-rank purification from the eigendecomposition: amplitudes
/// sqrt(lambda_i) on eigenvector i paired with basis state i of the third
/// register, eigenvalues sorted descending, values at or below tolerance
/// dropped.
pub fn purify(rho: &DensityMatrix, cut: usize) -> Result<Purification> {
    let (da, db) = bipartite_dims(rho, cut)?;
    let eig = hermitian_eigen(rho.mat())?;
    let eps = linalg::default_tol(rho.mat());
    let d = da * db;
    // ascending from the solver; walk from the top
    let kept: Vec<usize> = (0..d)
        .rev()
        .filter(|&i| eig.eigenvalues[i] > eps)
        .collect();
    let rank = kept.len();
    if rank == 0 {
        return Err(Error::InvalidState("state has no positive eigenvalues".into()));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); d * rank];
    for (c_index, &i) in kept.iter().enumerate() {
        let w = eig.eigenvalues[i].sqrt();
        for m in 0..d {
            amps[m * rank + c_index] = eig.eigenvectors.at(m, i) * w;
        }
    }
    let state = PureState::new(DimsSpec::new(vec![da, db, rank])?, amps)?;
    Ok(Purification {
        dims: (da, db, rank),
        state,
        kept_rank: rank,
    })
}

/// Comparison of tr_C(rho_AC rho_BC) against rho_AB^2.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CrossGramReport {
    /// tr_C(rho_AC rho_BC), reindexed onto the AB space.
    #[serde(skip)]
    pub k: Option<Matrix>,
    /// rho_AB^2.
    #[serde(skip)]
    pub s: Option<Matrix>,
    pub dist_full: f64,
    pub dist_traced_a: f64,
    pub dist_traced_b: f64,
}

// Matrix is not serde-visible; the distances are the report payload and the
// matrices ride along for library callers.
impl CrossGramReport {
    pub fn distances(&self) -> (f64, f64, f64) {
        (self.dist_full, self.dist_traced_a, self.dist_traced_b)
    }
}

/// k[(a,b),(a',b')] = sum_{c,c''} rho_AC[(a,c),(a',c'')] rho_BC[(b,c''),(b',c)],
/// the C-trace of (rho_AC x I_B)(I_A x rho_BC) in A,B,C ordering.
pub fn cross_gram_from_purification(p: &Purification) -> Result<Matrix> {
    let (da, db, dc) = p.dims;
    let psi = crate::states::projector(&p.state)?;
    let tri = DimsSpec::new(vec![da, db, dc])?;
    let rho_ac = partial_trace(psi.mat(), &tri, &[0, 2])?;
    let rho_bc = partial_trace(psi.mat(), &tri, &[1, 2])?;

    let d = da * db;
    let mut k = Matrix::zeros(d, d);
    for a in 0..da {
        for b in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for c in 0..dc {
                        for c2 in 0..dc {
                            acc += rho_ac.at(a * dc + c, a2 * dc + c2)
                                * rho_bc.at(b * dc + c2, b2 * dc + c);
                        }
                    }
                    k.set(a * db + b, a2 * db + b2, acc);
                }
            }
        }
    }
    Ok(k)
}

/// Computes k = tr_C(rho_AC rho_BC) and s = rho_AB^2 and their distances,
/// both in full and after tracing either side out of both.
pub fn cross_gram_diagnostic(rho: &DensityMatrix, cut: usize) -> Result<CrossGramReport> {
    let (da, db) = bipartite_dims(rho, cut)?;
    let p = purify(rho, cut)?;
    let k = cross_gram_from_purification(&p)?;
    let s = rho.mat().mat_mul(rho.mat())?;

    let ab = DimsSpec::new(vec![da, db])?;
    let diff = k.sub(&s)?;
    let dist_full = diff.fro_norm();
    let dist_traced_a = partial_trace(&k, &ab, &[1])?
        .sub(&partial_trace(&s, &ab, &[1])?)?
        .fro_norm();
    let dist_traced_b = partial_trace(&k, &ab, &[0])?
        .sub(&partial_trace(&s, &ab, &[0])?)?
        .fro_norm();
    Ok(CrossGramReport {
        k: Some(k),
        s: Some(s),
        dist_full,
        dist_traced_a,
        dist_traced_b,
    })
}

/// N(mu) = (1 + mu) rho_A x rho_B - mu rho_AB.
pub fn n_mu(rho: &DensityMatrix, cut: usize, mu: f64) -> Result<Matrix> {
    let dims = rho.dims().dims();
    let keep_a: Vec<usize> = (0..cut).collect();
    let keep_b: Vec<usize> = (cut..dims.len()).collect();
    bipartite_dims(rho, cut)?;
    let rho_a = rho.reduced(&keep_a)?;
    let rho_b = rho.reduced(&keep_b)?;
    let prod = rho_a.kron(&rho_b);
    prod.scale_re(1.0 + mu).sub(&rho.mat().scale_re(mu))
}

/// Maximal interval around 0 on which N(mu) stays positive semidefinite.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MuInterval {
    pub mu_min: f64,
    pub mu_max: f64,
    pub bound_hit_min: bool,
    pub bound_hit_max: bool,
}

fn n_mu_min_eig(rho: &DensityMatrix, cut: usize, mu: f64) -> Result<(f64, f64)> {
    let n = n_mu(rho, cut, mu)?;
    let eps = linalg::default_tol(&n);
    let (_, min_eig) = linalg::is_psd(&n, eps)?;
    Ok((min_eig, eps))
}

fn feasible(rho: &DensityMatrix, cut: usize, mu: f64) -> Result<bool> {
    let (min_eig, eps) = n_mu_min_eig(rho, cut, mu)?;
    Ok(min_eig >= -eps)
}

/// Locates each endpoint of the feasible mu-interval by bisection. The
/// minimum eigenvalue of the affine family is concave in mu, so the
/// feasible set is an interval and bisection from 0 is exact to `tol`.
pub fn n_mu_interval(
    rho: &DensityMatrix,
    cut: usize,
    search_bound: f64,
    tol: f64,
) -> Result<MuInterval> {
    if search_bound <= 0.0 || tol <= 0.0 {
        return Err(Error::InvalidArgument(
            "search bound and tolerance must be positive".into(),
        ));
    }
    if !feasible(rho, cut, 0.0)? {
        return Err(Error::InvalidState(
            "N(0) = rho_A x rho_B is not PSD; input is not a valid state".into(),
        ));
    }
    let endpoint = |sign: f64| -> Result<(f64, bool)> {
        if feasible(rho, cut, sign * search_bound)? {
            return Ok((sign * search_bound, true));
        }
        let mut lo = 0.0f64;
        let mut hi = search_bound;
        for _ in 0..200 {
            let (min_eig_lo, eps_lo) = n_mu_min_eig(rho, cut, sign * lo)?;
            if hi - lo <= tol && min_eig_lo <= 10.0 * eps_lo {
                break;
            }
            if hi - lo <= f64::EPSILON * hi.max(1.0) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if feasible(rho, cut, sign * mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((sign * lo, false))
    };
    let (mu_max, bound_hit_max) = endpoint(1.0)?;
    let (mu_min, bound_hit_min) = endpoint(-1.0)?;
    Ok(MuInterval {
        mu_min,
        mu_max,
        bound_hit_min,
        bound_hit_max,
    })
}
