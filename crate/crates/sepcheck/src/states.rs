//! Construction, validation, and seeded random generation of pure states,
//! density matrices, and separable ensembles.
//!
//! Validation is strict: a matrix that fails the density-matrix invariants
//! is rejected with a diagnostic, never normalized silently.
//!
//! ```
//! use sepcheck::states::{phi_mixture, spectra_twins};
//! use sepcheck::linalg::purity;
//!
//! // Equal mixture of the two phi Bell states: classical, purity 1/2.
//! let rho = phi_mixture(0.5).unwrap();
//! assert!((purity(rho.mat()).unwrap() - 0.5).abs() < 1e-12);
//!
//! // Identical spectra, and therefore identical purities.
//! let (rho, sigma) = spectra_twins();
//! assert!((purity(rho.mat()).unwrap() - purity(sigma.mat()).unwrap()).abs() < 1e-12);
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, default_tol, DimsSpec, Matrix};
use crate::rng::SplitMix64;

/// Normalized state vector over a subsystem split.
#[derive(Clone, Debug)]
pub struct PureState {
    dims: DimsSpec,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(dims: DimsSpec, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::DimMismatch(format!(
                "expected {} amplitudes, got {}",
                dims.total(),
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState(format!(
                "pure state norm {norm} deviates from 1 beyond 1e-9"
            )));
        }
        Ok(PureState { dims, amplitudes })
    }

    pub fn dims(&self) -> &DimsSpec {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

/// Hermitian, unit-trace, PSD matrix with a subsystem signature.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    dims: DimsSpec,
    mat: Matrix,
}

impl DensityMatrix {
    /// Validates all invariants; rejects rather than repairs.
    pub fn new(dims: DimsSpec, mat: Matrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::InvalidState(format!(
                "matrix is {}x{}, not square",
                mat.rows(),
                mat.cols()
            )));
        }
        if mat.rows() != dims.total() {
            return Err(Error::InvalidState(format!(
                "matrix side {} does not match dims product {}",
                mat.rows(),
                dims.total()
            )));
        }
        let tol = default_tol(&mat);
        let defect = mat.hermiticity_defect();
        if defect > tol {
            return Err(Error::InvalidState(format!(
                "Hermiticity defect {defect:.3e} exceeds tolerance {tol:.3e}"
            )));
        }
        let tr = mat.trace()?;
        if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
            return Err(Error::InvalidState(format!(
                "trace {tr} deviates from 1 beyond 1e-9"
            )));
        }
        let (_, min_eig) = linalg::is_psd(&mat, tol)?;
        if min_eig < -tol {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min_eig:.3e} below -{tol:.3e}"
            )));
        }
        Ok(DensityMatrix { dims, mat })
    }

    pub fn dims(&self) -> &DimsSpec {
        &self.dims
    }

    pub fn mat(&self) -> &Matrix {
        &self.mat
    }

    /// Reduced density matrix on the given subsystems.
    pub fn reduced(&self, keep: &[usize]) -> Result<Matrix> {
        linalg::partial_trace(&self.mat, &self.dims, keep)
    }

    /// Same matrix viewed with the two subsystems of a bipartite state
    /// exchanged.
    pub fn swap_bipartite(&self) -> Result<DensityMatrix> {
        if self.dims.len() != 2 {
            return Err(Error::InvalidArgument(
                "subsystem swap requires a bipartite state".into(),
            ));
        }
        let (da, db) = (self.dims.dims()[0], self.dims.dims()[1]);
        let d = da * db;
        let mut out = Matrix::zeros(d, d);
        for a in 0..da {
            for b in 0..db {
                for a2 in 0..da {
                    for b2 in 0..db {
                        out.set(b * da + a, b2 * da + a2, self.mat.at(a * db + b, a2 * db + b2));
                    }
                }
            }
        }
        DensityMatrix::new(DimsSpec::new(vec![db, da])?, out)
    }
}

/// Convex combination of product pure states, the explicit witness of
/// separability.
#[derive(Clone, Debug)]
pub struct SeparableEnsemble {
    dims: DimsSpec,
    weights: Vec<f64>,
    /// One pure state per subsystem for each ensemble member.
    members: Vec<Vec<PureState>>,
}

impl SeparableEnsemble {
    pub fn new(dims: DimsSpec, weights: Vec<f64>, members: Vec<Vec<PureState>>) -> Result<Self> {
        if weights.len() != members.len() {
            return Err(Error::DimMismatch(
                "weights and members must have equal length".into(),
            ));
        }
        if weights.iter().any(|&w| w <= 0.0) {
            return Err(Error::InvalidArgument("every weight must be > 0".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        for member in &members {
            if member.len() != dims.len() {
                return Err(Error::DimMismatch(
                    "each member needs one pure state per subsystem".into(),
                ));
            }
            for (s, state) in member.iter().enumerate() {
                if state.dims().total() != dims.dims()[s] {
                    return Err(Error::DimMismatch(format!(
                        "member factor {s} has dimension {}, expected {}",
                        state.dims().total(),
                        dims.dims()[s]
                    )));
                }
            }
        }
        Ok(SeparableEnsemble {
            dims,
            weights,
            members,
        })
    }

    pub fn dims(&self) -> &DimsSpec {
        &self.dims
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn members(&self) -> &[Vec<PureState>] {
        &self.members
    }

    /// Sum of weighted Kronecker products of member projectors.
    pub fn assemble(&self) -> Result<Matrix> {
        let d = self.dims.total();
        let mut acc = Matrix::zeros(d, d);
        for (w, member) in self.weights.iter().zip(&self.members) {
            let mut prod = projector(&member[0])?.mat().clone();
            for factor in &member[1..] {
                prod = prod.kron(projector(factor)?.mat());
            }
            acc = acc.add(&prod.scale_re(*w))?;
        }
        Ok(acc)
    }
}

/// |psi><psi|.
pub fn projector(psi: &PureState) -> Result<DensityMatrix> {
    let d = psi.dims().total();
    let mut m = Matrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            m.set(r, c, psi.amplitudes()[r] * psi.amplitudes()[c].conj());
        }
    }
    DensityMatrix::new(psi.dims().clone(), m)
}

/// Convex combination of density matrices with matching dims.
pub fn mix(weights: &[f64], states: &[DensityMatrix]) -> Result<DensityMatrix> {
    if weights.len() != states.len() || states.is_empty() {
        return Err(Error::DimMismatch(
            "weights and states must be nonempty and of equal length".into(),
        ));
    }
    if weights.iter().any(|&w| w <= 0.0) {
        return Err(Error::InvalidArgument("every weight must be > 0".into()));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "weights sum to {sum}, not 1"
        )));
    }
    let dims = states[0].dims().clone();
    let d = dims.total();
    let mut acc = Matrix::zeros(d, d);
    for (w, s) in weights.iter().zip(states) {
        if s.dims() != &dims {
            return Err(Error::DimMismatch("mixed states must share dims".into()));
        }
        acc = acc.add(&s.mat().scale_re(*w))?;
    }
    DensityMatrix::new(dims, acc)
}

/// The four maximally entangled two-qubit states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "phi+" => Ok(BellKind::PhiPlus),
            "phi-" => Ok(BellKind::PhiMinus),
            "psi+" => Ok(BellKind::PsiPlus),
            "psi-" => Ok(BellKind::PsiMinus),
            other => Err(Error::InvalidArgument(format!(
                "unknown Bell state '{other}' (expected phi+, phi-, psi+, psi-)"
            ))),
        }
    }
}

pub fn bell_state(kind: BellKind) -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let p = Complex64::new(h, 0.0);
    let m = Complex64::new(-h, 0.0);
    let amps = match kind {
        BellKind::PhiPlus => vec![p, z, z, p],
        BellKind::PhiMinus => vec![p, z, z, m],
        BellKind::PsiPlus => vec![z, p, p, z],
        BellKind::PsiMinus => vec![z, p, m, z],
    };
    PureState::new(DimsSpec::new(vec![2, 2]).unwrap(), amps).unwrap()
}

#[cfg(test)]
fn basis_state(dim: usize, index: usize) -> PureState {
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[index] = Complex64::new(1.0, 0.0);
    PureState::new(DimsSpec::new(vec![dim]).unwrap(), amps).unwrap()
}

/// The isospectral pair: an entangled rank-2 mixture and a separable
/// diagonal state with identical global and local spectra.
pub fn spectra_twins() -> (DensityMatrix, DensityMatrix) {
    let dims = DimsSpec::new(vec![2, 2]).unwrap();
    let d = 4;

    // 1/3 |00><00| + 2/3 |psi+><psi+|
    let mut rho = Matrix::zeros(d, d);
    rho.set(0, 0, Complex64::new(1.0 / 3.0, 0.0));
    let psi_plus = projector(&bell_state(BellKind::PsiPlus)).unwrap();
    rho = rho.add(&psi_plus.mat().scale_re(2.0 / 3.0)).unwrap();
    let rho = DensityMatrix::new(dims.clone(), rho).unwrap();

    // 2/3 |00><00| + 1/3 |11><11|
    let mut sigma = Matrix::zeros(d, d);
    sigma.set(0, 0, Complex64::new(2.0 / 3.0, 0.0));
    sigma.set(3, 3, Complex64::new(1.0 / 3.0, 0.0));
    let sigma = DensityMatrix::new(dims, sigma).unwrap();

    (rho, sigma)
}

/// lambda |phi+><phi+| + (1 - lambda) |phi-><phi-| on dims (2, 2).
pub fn phi_mixture(lambda: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!(
            "lambda must lie in [0, 1], got {lambda}"
        )));
    }
    let plus = projector(&bell_state(BellKind::PhiPlus))?;
    let minus = projector(&bell_state(BellKind::PhiMinus))?;
    let m = plus
        .mat()
        .scale_re(lambda)
        .add(&minus.mat().scale_re(1.0 - lambda))?;
    DensityMatrix::new(DimsSpec::new(vec![2, 2])?, m)
}

/// Haar-distributed unit vector: i.i.d. standard complex Gaussian entries,
/// normalized; deterministic per seed.
pub fn random_pure(dim: usize, seed: u64) -> Result<PureState> {
    let mut rng = SplitMix64::new(seed);
    random_pure_with(dim, &mut rng)
}

pub(crate) fn random_pure_with(dim: usize, rng: &mut SplitMix64) -> Result<PureState> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dim must be >= 1".into()));
    }
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.next_gaussian(), rng.next_gaussian()))
        .collect();
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    PureState::new(DimsSpec::new(vec![dim])?, amps)
}

/// k product terms with Dirichlet-uniform weights and independent Haar pure
/// factors; returns the assembled density matrix together with the
/// generating ensemble.
pub fn random_separable(
    dims: &DimsSpec,
    k: usize,
    seed: u64,
) -> Result<(DensityMatrix, SeparableEnsemble)> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    let mut rng = SplitMix64::new(seed);
    // Dirichlet(1,...,1) via normalized exponentials
    let mut weights: Vec<f64> = (0..k).map(|_| -rng.next_f64_open().ln()).collect();
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    let mut members = Vec::with_capacity(k);
    for _ in 0..k {
        let mut factors = Vec::with_capacity(dims.len());
        for &d in dims.dims() {
            factors.push(random_pure_with(d, &mut rng)?);
        }
        members.push(factors);
    }
    let ensemble = SeparableEnsemble::new(dims.clone(), weights, members)?;
    let rho = DensityMatrix::new(dims.clone(), ensemble.assemble()?)?;
    Ok((rho, ensemble))
}

/// Ginibre construction G G† / tr(G G†); full rank with probability 1.
pub fn random_density(dim: usize, seed: u64) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dim must be >= 1".into()));
    }
    let mut rng = SplitMix64::new(seed);
    random_density_with(dim, &mut rng)
}

pub(crate) fn random_density_with(dim: usize, rng: &mut SplitMix64) -> Result<DensityMatrix> {
    let mut g = Matrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            g.set(r, c, Complex64::new(rng.next_gaussian(), rng.next_gaussian()));
        }
    }
    let gg = g.mat_mul(&g.adjoint())?;
    let tr = gg.trace()?.re;
    let m = gg.scale_re(1.0 / tr).hermitized();
    DensityMatrix::new(DimsSpec::new(vec![dim])?, m)
}

/// Ginibre state reinterpreted over a subsystem split.
pub fn random_density_dims(dims: &DimsSpec, seed: u64) -> Result<DensityMatrix> {
    let flat = random_density(dims.total(), seed)?;
    DensityMatrix::new(dims.clone(), flat.mat().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{partial_trace, purity, pauli_z};

    fn close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
        a.sub(b).unwrap().fro_norm() <= tol
    }

    #[test]
    fn projector_basics() {
        let zero = basis_state(2, 0);
        let p = projector(&zero).unwrap();
        assert!(close(
            p.mat(),
            &Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap(),
            0.0
        ));

        let phi = projector(&bell_state(BellKind::PhiPlus)).unwrap();
        for &(r, c) in &[(0usize, 0usize), (0, 3), (3, 0), (3, 3)] {
            assert!((phi.mat().at(r, c) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
        assert!((purity(phi.mat()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mix_recovers_single_state() {
        let rho = phi_mixture(0.3).unwrap();
        let same = mix(&[1.0], std::slice::from_ref(&rho)).unwrap();
        assert!(close(rho.mat(), same.mat(), 0.0));
    }

    #[test]
    fn mix_of_phi_pair_is_classical() {
        let plus = projector(&bell_state(BellKind::PhiPlus)).unwrap();
        let minus = projector(&bell_state(BellKind::PhiMinus)).unwrap();
        let m = mix(&[0.5, 0.5], &[plus, minus]).unwrap();
        // corner terms cancel: (|00><00| + |11><11|)/2
        let mut expect = Matrix::zeros(4, 4);
        expect.set(0, 0, Complex64::new(0.5, 0.0));
        expect.set(3, 3, Complex64::new(0.5, 0.0));
        assert!(close(m.mat(), &expect, 1e-15));
    }

    #[test]
    fn mix_rejects_bad_weights() {
        let rho = phi_mixture(0.5).unwrap();
        assert!(mix(&[0.9], std::slice::from_ref(&rho)).is_err());
        assert!(mix(&[0.5, 0.5], &[rho]).is_err());
    }

    #[test]
    fn bell_state_amplitudes() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi = bell_state(BellKind::PhiPlus);
        assert!((phi.amplitudes()[0].re - h).abs() < 1e-15);
        assert!((phi.amplitudes()[3].re - h).abs() < 1e-15);
        let psi = bell_state(BellKind::PsiPlus);
        assert!((psi.amplitudes()[1].re - h).abs() < 1e-15);
        assert!((psi.amplitudes()[2].re - h).abs() < 1e-15);
    }

    #[test]
    fn bell_states_are_maximally_entangled() {
        for kind in [
            BellKind::PhiPlus,
            BellKind::PhiMinus,
            BellKind::PsiPlus,
            BellKind::PsiMinus,
        ] {
            let p = projector(&bell_state(kind)).unwrap();
            let red = p.reduced(&[0]).unwrap();
            assert!(close(&red, &Matrix::identity(2).scale_re(0.5), 1e-12));
        }
    }

    #[test]
    fn spectra_twins_structure() {
        let (rho, sigma) = spectra_twins();
        // sigma is diag(2/3, 0, 0, 1/3)
        let mut expect = Matrix::zeros(4, 4);
        expect.set(0, 0, Complex64::new(2.0 / 3.0, 0.0));
        expect.set(3, 3, Complex64::new(1.0 / 3.0, 0.0));
        assert!(close(sigma.mat(), &expect, 1e-15));
        // both have local spectra {2/3, 1/3}
        for s in [&rho, &sigma] {
            let red = s.reduced(&[0]).unwrap();
            let eig = crate::linalg::hermitian_eigen(&red).unwrap();
            assert!((eig.eigenvalues[0] - 1.0 / 3.0).abs() < 1e-12);
            assert!((eig.eigenvalues[1] - 2.0 / 3.0).abs() < 1e-12);
        }
        // rho has purity 5/9
        assert!((purity(rho.mat()).unwrap() - 5.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn phi_mixture_endpoints_and_purity() {
        let one = phi_mixture(1.0).unwrap();
        let plus = projector(&bell_state(BellKind::PhiPlus)).unwrap();
        assert!(close(one.mat(), plus.mat(), 1e-15));

        let half = phi_mixture(0.5).unwrap();
        let mut expect = Matrix::zeros(4, 4);
        expect.set(0, 0, Complex64::new(0.5, 0.0));
        expect.set(3, 3, Complex64::new(0.5, 0.0));
        assert!(close(half.mat(), &expect, 1e-15));

        for lambda in [0.0, 0.2, 0.5, 0.9] {
            let p = purity(phi_mixture(lambda).unwrap().mat()).unwrap();
            let expect = lambda * lambda + (1.0 - lambda) * (1.0 - lambda);
            assert!((p - expect).abs() < 1e-12);
        }
        assert!(phi_mixture(1.1).is_err());
    }

    #[test]
    fn phi_mixture_conjugation_symmetry() {
        // phi_mixture(lambda) and phi_mixture(1-lambda) are related by I x sigma_z
        let lambda = 0.3;
        let a = phi_mixture(lambda).unwrap();
        let b = phi_mixture(1.0 - lambda).unwrap();
        let u = Matrix::identity(2).kron(&pauli_z());
        let conj = u.mat_mul(a.mat()).unwrap().mat_mul(&u.adjoint()).unwrap();
        assert!(close(&conj, b.mat(), 1e-12));
    }

    #[test]
    fn random_pure_contract() {
        let a = random_pure(5, 9).unwrap();
        let norm: f64 = a.amplitudes().iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        let b = random_pure(5, 9).unwrap();
        assert_eq!(a.amplitudes(), b.amplitudes());
        let one = random_pure(1, 3).unwrap();
        assert!((one.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_separable_assembles() {
        let dims = DimsSpec::new(vec![2, 3]).unwrap();
        let (rho, ensemble) = random_separable(&dims, 4, 11).unwrap();
        let assembled = ensemble.assemble().unwrap();
        assert!(close(rho.mat(), &assembled, 1e-12));

        let (pure_prod, _) = random_separable(&dims, 1, 5).unwrap();
        assert!((purity(pure_prod.mat()).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn random_density_contract() {
        let rho = random_density(4, 2).unwrap();
        assert!((rho.mat().trace().unwrap().re - 1.0).abs() < 1e-12);
        let eig = crate::linalg::hermitian_eigen(rho.mat()).unwrap();
        assert!(eig.eigenvalues[0] >= -1e-12);
        let again = random_density(4, 2).unwrap();
        assert_eq!(rho.mat().entries(), again.mat().entries());
    }

    #[test]
    fn density_matrix_rejects_invalid() {
        let dims = DimsSpec::new(vec![2]).unwrap();
        // wrong trace
        let m = Matrix::identity(2);
        assert!(DensityMatrix::new(dims.clone(), m).is_err());
        // negative eigenvalue
        let m = pauli_z().scale_re(0.5).add(&Matrix::identity(2).scale_re(0.0)).unwrap();
        assert!(DensityMatrix::new(dims.clone(), m).is_err());
        // non-Hermitian
        let mut m = Matrix::identity(2).scale_re(0.5);
        m.set(0, 1, Complex64::new(0.3, 0.0));
        assert!(DensityMatrix::new(dims, m).is_err());
    }

    #[test]
    fn swap_bipartite_round_trip() {
        let dims = DimsSpec::new(vec![2, 3]).unwrap();
        let rho = random_density_dims(&dims, 8).unwrap();
        let swapped = rho.swap_bipartite().unwrap();
        assert_eq!(swapped.dims().dims(), &[3, 2]);
        let back = swapped.swap_bipartite().unwrap();
        assert!(close(rho.mat(), back.mat(), 0.0));
        // reduced matrices exchange roles
        let ra = partial_trace(rho.mat(), rho.dims(), &[0]).unwrap();
        let rb = partial_trace(swapped.mat(), swapped.dims(), &[1]).unwrap();
        assert!(close(&ra, &rb, 1e-12));
    }
}
