//! Separability criteria and verdict aggregation.
//!
//! Every check here is necessary for separability: a violation is an
//! entanglement certificate, while satisfaction proves nothing in general.
//! The one exception is the positive-partial-transpose test on 2x2 and 2x3
//! systems, where satisfaction does guarantee separability; `full_verdict`
//! only emits a `Separable` conclusion in that case.
//!
//! ```
//! use sepcheck::criteria::{theorem3_trace_check, upsilon_r, CriteriaConfig, RMatrix};
//! use sepcheck::linalg::partial_transpose;
//! use sepcheck::states::phi_mixture;
//!
//! let rho = phi_mixture(1.0).unwrap();
//!
//! // The Peres member of the family reproduces the partial transpose.
//! let via_blocks = upsilon_r(&rho, &RMatrix::peres()).unwrap();
//! let via_pt = partial_transpose(rho.mat(), rho.dims(), 0).unwrap();
//! for (a, b) in via_blocks.entries().iter().zip(via_pt.entries()) {
//!     assert!((a - b).norm() < 1e-15);
//! }
//!
//! // The trace check flags the pure Bell state.
//! let report = theorem3_trace_check(&rho, &CriteriaConfig::default()).unwrap();
//! assert!(!report.satisfied);
//! assert!((report.margin + 0.25).abs() < 1e-12);
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, hermitian_eigen, partial_transpose, pauli_x, pauli_y, pauli_z, purity, Matrix,
};
use crate::rng::SplitMix64;
use crate::states::DensityMatrix;

/// The four Hermitian N x N coefficient matrices of a (2, N) state in the
/// basis I, sigma_x, sigma_y, sigma_z of the qubit factor.
#[derive(Clone, Debug)]
pub struct PauliBlocks {
    n: usize,
    pub m0: Matrix,
    pub mx: Matrix,
    pub my: Matrix,
    pub mz: Matrix,
}

impl PauliBlocks {
    pub fn subsystem_dim(&self) -> usize {
        self.n
    }
}

/// Real 3x3 matrix acting on the Bloch-side blocks; admissible when all
/// singular values are at most 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RMatrix(pub [[f64; 3]; 3]);

impl RMatrix {
    pub fn identity() -> Self {
        RMatrix([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        RMatrix([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    /// The member that realizes the partial transpose of the qubit side.
    pub fn peres() -> Self {
        RMatrix::diag(1.0, -1.0, 1.0)
    }

    pub fn zero() -> Self {
        RMatrix([[0.0; 3]; 3])
    }

    /// Largest singular value, via the eigenvalues of R^T R.
    pub fn spectral_norm(&self) -> f64 {
        let r = &self.0;
        let mut rtr = Matrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for k in 0..3 {
                    acc += r[k][i] * r[k][j];
                }
                rtr.set(i, j, Complex64::new(acc, 0.0));
            }
        }
        let eig = hermitian_eigen(&rtr).expect("R^T R is symmetric");
        eig.eigenvalues[2].max(0.0).sqrt()
    }

    /// I - R^T R >= 0 within tolerance.
    pub fn is_admissible(&self) -> bool {
        self.spectral_norm() <= 1.0 + 1e-12
    }

    pub fn mat_mul(&self, other: &RMatrix) -> RMatrix {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[i][j] += self.0[i][k] * other.0[k][j];
                }
            }
        }
        RMatrix(out)
    }
}

/// Unit vector on the Bloch sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Direction {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n2 = x * x + y * y + z * z;
        if (n2 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "direction has squared norm {n2}, expected 1"
            )));
        }
        Ok(Direction { x, y, z })
    }

    fn normalized(x: f64, y: f64, z: f64) -> Self {
        let n = (x * x + y * y + z * z).sqrt();
        Direction {
            x: x / n,
            y: y / n,
            z: z / n,
        }
    }
}

/// Numeric payload attached to a violated criterion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Witness {
    RMatrix { r: RMatrix, min_eigenvalue: f64 },
    Direction { direction: Direction, min_eigenvalue: f64 },
    SubsetPair { smaller: Vec<usize>, larger: Vec<usize> },
    Eigenvalue { value: f64 },
    PartialSum { subsystem: usize, terms: usize },
}

/// Result of one named criterion: satisfied flag, signed margin (smallest
/// slack observed; negative means violation), and an optional witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub satisfied: bool,
    pub margin: f64,
    pub witness: Option<Witness>,
}

impl CriterionReport {
    fn new(criterion: &str, margin: f64, eps: f64, witness: Option<Witness>) -> Self {
        CriterionReport {
            criterion: criterion.to_string(),
            satisfied: margin >= -eps,
            margin,
            witness,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    Entangled,
    Separable,
    Inconclusive,
}

/// Aggregate conclusion with the violated reports as certificates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub conclusion: Conclusion,
    pub certificates: Vec<CriterionReport>,
}

/// Knobs shared by the sampled checks.
#[derive(Clone, Debug)]
pub struct CriteriaConfig {
    /// Base of the scale-relative tolerance.
    pub tol_base: f64,
    /// Random admissible R matrices tried by the block-transform battery.
    pub samples: usize,
    /// Fibonacci-lattice directions tried by the sphere check.
    pub dirs: usize,
    pub seed: u64,
}

impl Default for CriteriaConfig {
    fn default() -> Self {
        CriteriaConfig {
            tol_base: 1e-9,
            samples: 512,
            dirs: 512,
            seed: 0,
        }
    }
}

fn eps_for(rho: &DensityMatrix, config: &CriteriaConfig) -> f64 {
    linalg::scaled_tol(rho.mat(), config.tol_base)
}

fn subset_indices(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&k| mask & (1 << k) != 0).collect()
}

/// Purity monotonicity over nested subsystem subsets: for every pair of
/// nonempty subsets S strictly inside T, tr(rho_S^2) >= tr(rho_T^2).
pub fn purity_chain_check(rho: &DensityMatrix, config: &CriteriaConfig) -> Result<CriterionReport> {
    let n = rho.dims().len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "purity chain requires at least 2 subsystems".into(),
        ));
    }
    if n > 8 {
        return Err(Error::InvalidArgument(
            "purity chain supports at most 8 subsystems".into(),
        ));
    }
    let full: u32 = (1u32 << n) - 1;
    let mut purities = vec![0.0f64; (full as usize) + 1];
    for mask in 1..=full {
        let keep = subset_indices(mask, n);
        let reduced = rho.reduced(&keep)?;
        purities[mask as usize] = purity(&reduced)?;
    }
    let mut margin = f64::INFINITY;
    let mut witness = None;
    for small in 1..=full {
        for large in (small + 1)..=full {
            if small & large != small {
                continue; // not nested
            }
            let slack = purities[small as usize] - purities[large as usize];
            if slack < margin {
                margin = slack;
                witness = Some(Witness::SubsetPair {
                    smaller: subset_indices(small, n),
                    larger: subset_indices(large, n),
                });
            }
        }
    }
    let eps = eps_for(rho, config);
    Ok(CriterionReport::new("purity_chain", margin, eps, witness))
}

/// Decompose a (2, N) state into its four Pauli coefficient blocks.
pub fn pauli_blocks(rho: &DensityMatrix) -> Result<PauliBlocks> {
    let dims = rho.dims().dims();
    if dims.len() != 2 || dims[0] != 2 {
        return Err(Error::InvalidArgument(format!(
            "Pauli-block decomposition requires dims (2, N), got {dims:?}"
        )));
    }
    let n = dims[1];
    let m = rho.mat();
    let block = |br: usize, bc: usize| {
        let mut out = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, m.at(br * n + r, bc * n + c));
            }
        }
        out
    };
    let r00 = block(0, 0);
    let r01 = block(0, 1);
    let r10 = block(1, 0);
    let r11 = block(1, 1);
    let m0 = r00.add(&r11)?.scale_re(0.5);
    let mz = r00.sub(&r11)?.scale_re(0.5);
    let mx = r01.add(&r10)?.scale_re(0.5);
    let my = r01.sub(&r10)?.scale(Complex64::new(0.0, 0.5));
    Ok(PauliBlocks { n, m0, mx, my, mz })
}

/// Reassemble I x M0 + sigma_x x Mx + sigma_y x My + sigma_z x Mz.
pub fn blocks_to_state(blocks: &PauliBlocks) -> Matrix {
    let i2 = Matrix::identity(2);
    i2.kron(&blocks.m0)
        .add(&pauli_x().kron(&blocks.mx))
        .and_then(|m| m.add(&pauli_y().kron(&blocks.my)))
        .and_then(|m| m.add(&pauli_z().kron(&blocks.mz)))
        .expect("block shapes agree")
}

/// The block transform: rotate/contract (Mx, My, Mz) by R and reassemble.
pub fn upsilon_r(rho: &DensityMatrix, r: &RMatrix) -> Result<Matrix> {
    let blocks = pauli_blocks(rho)?;
    Ok(blocks_to_state(&apply_r(&blocks, r)))
}

fn apply_r(blocks: &PauliBlocks, r: &RMatrix) -> PauliBlocks {
    let rot = |row: &[f64; 3]| {
        blocks
            .mx
            .scale_re(row[0])
            .add(&blocks.my.scale_re(row[1]))
            .and_then(|m| m.add(&blocks.mz.scale_re(row[2])))
            .expect("block shapes agree")
    };
    PauliBlocks {
        n: blocks.n,
        m0: blocks.m0.clone(),
        mx: rot(&r.0[0]),
        my: rot(&r.0[1]),
        mz: rot(&r.0[2]),
    }
}

/// Uniform random rotation from a normalized Gaussian quaternion.
fn random_rotation(rng: &mut SplitMix64) -> [[f64; 3]; 3] {
    let (w, x, y, z) = loop {
        let q = [
            rng.next_gaussian(),
            rng.next_gaussian(),
            rng.next_gaussian(),
            rng.next_gaussian(),
        ];
        let n = (q.iter().map(|v| v * v).sum::<f64>()).sqrt();
        if n > 1e-12 {
            break (q[0] / n, q[1] / n, q[2] / n, q[3] / n);
        }
    };
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

/// Random admissible R: O1 diag(s1, s2, s3) O2^T with uniform rotations and
/// singular values uniform on [0, 1].
fn random_admissible_r(rng: &mut SplitMix64) -> RMatrix {
    let o1 = random_rotation(rng);
    let o2 = random_rotation(rng);
    let s = [rng.next_f64(), rng.next_f64(), rng.next_f64()];
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] += o1[i][k] * s[k] * o2[j][k];
            }
        }
    }
    RMatrix(out)
}

/// All eight diagonal sign patterns; includes the identity, its negation,
/// and the partial-transpose member diag(1, -1, 1).
fn sign_battery() -> Vec<RMatrix> {
    let mut out = Vec::with_capacity(8);
    for bits in 0..8u8 {
        let sign = |b: u8| if bits & (1 << b) == 0 { 1.0 } else { -1.0 };
        out.push(RMatrix::diag(sign(0), sign(1), sign(2)));
    }
    out
}

/// Block-transform battery: the deterministic sign patterns plus sampled
/// random admissible R; positivity of every transformed matrix is necessary
/// for separability.
pub fn theorem2_check(
    rho: &DensityMatrix,
    n_samples: usize,
    seed: u64,
    config: &CriteriaConfig,
) -> Result<CriterionReport> {
    let blocks = pauli_blocks(rho)?;
    let eps = eps_for(rho, config);
    let mut margin = f64::INFINITY;
    let mut worst: Option<RMatrix> = None;

    let consider = |r: RMatrix, margin: &mut f64, worst: &mut Option<RMatrix>| -> Result<()> {
        let transformed = blocks_to_state(&apply_r(&blocks, &r));
        let (_, min_eig) = linalg::is_psd(&transformed, eps)?;
        if min_eig < *margin {
            *margin = min_eig;
            *worst = Some(r);
        }
        Ok(())
    };

    for r in sign_battery() {
        consider(r, &mut margin, &mut worst)?;
    }
    for i in 0..n_samples {
        let mut rng = SplitMix64::stream(seed, i as u64);
        consider(random_admissible_r(&mut rng), &mut margin, &mut worst)?;
    }

    let witness = worst.map(|r| Witness::RMatrix {
        r,
        min_eigenvalue: margin,
    });
    Ok(CriterionReport::new("theorem2", margin, eps, witness))
}

/// Evenly distributed unit directions: a Fibonacci lattice plus the axes.
fn direction_battery(n_dirs: usize) -> Vec<Direction> {
    let mut dirs = Vec::with_capacity(n_dirs + 6);
    for &(x, y, z) in &[
        (1.0, 0.0, 0.0),
        (-1.0, 0.0, 0.0),
        (0.0, 1.0, 0.0),
        (0.0, -1.0, 0.0),
        (0.0, 0.0, 1.0),
        (0.0, 0.0, -1.0),
    ] {
        dirs.push(Direction { x, y, z });
    }
    let golden_angle = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    for i in 0..n_dirs {
        let z = 1.0 - (2.0 * i as f64 + 1.0) / n_dirs as f64;
        let r = (1.0 - z * z).max(0.0).sqrt();
        let theta = golden_angle * i as f64;
        dirs.push(Direction::normalized(r * theta.cos(), r * theta.sin(), z));
    }
    dirs
}

/// Positivity of M0 - r.M over sampled unit directions. Positivity at all
/// unit directions extends to the whole ball by convexity since M0 >= 0.
pub fn theorem3_sphere_check(
    rho: &DensityMatrix,
    n_dirs: usize,
    config: &CriteriaConfig,
) -> Result<CriterionReport> {
    let blocks = pauli_blocks(rho)?;
    let eps = eps_for(rho, config);
    let mut margin = f64::INFINITY;
    let mut worst = None;
    for dir in direction_battery(n_dirs) {
        let m = blocks
            .m0
            .sub(&blocks.mx.scale_re(dir.x))?
            .sub(&blocks.my.scale_re(dir.y))?
            .sub(&blocks.mz.scale_re(dir.z))?;
        let (_, min_eig) = linalg::is_psd(&m, eps)?;
        if min_eig < margin {
            margin = min_eig;
            worst = Some(dir);
        }
    }
    let witness = worst.map(|direction| Witness::Direction {
        direction,
        min_eigenvalue: margin,
    });
    Ok(CriterionReport::new("theorem3_sphere", margin, eps, witness))
}

/// tr(M0^2 - Mx^2 - My^2 - Mz^2) >= 0.
pub fn theorem3_trace_check(
    rho: &DensityMatrix,
    config: &CriteriaConfig,
) -> Result<CriterionReport> {
    let blocks = pauli_blocks(rho)?;
    let margin = purity(&blocks.m0)? - purity(&blocks.mx)? - purity(&blocks.my)?
        - purity(&blocks.mz)?;
    let eps = eps_for(rho, config);
    Ok(CriterionReport::new("theorem3_trace", margin, eps, None))
}

/// Positive partial transpose over the named subsystem; works for arbitrary
/// dims, and is also sufficient for separability on 2x2 and 2x3 systems.
pub fn ppt_check(
    rho: &DensityMatrix,
    subsystem: usize,
    config: &CriteriaConfig,
) -> Result<CriterionReport> {
    if rho.dims().len() < 2 {
        return Err(Error::InvalidArgument(
            "partial transpose requires at least 2 subsystems".into(),
        ));
    }
    let pt = partial_transpose(rho.mat(), rho.dims(), subsystem)?;
    let eps = eps_for(rho, config);
    let (_, min_eig) = linalg::is_psd(&pt, eps)?;
    Ok(CriterionReport::new(
        &format!("ppt:{subsystem}"),
        min_eig,
        eps,
        Some(Witness::Eigenvalue { value: min_eig }),
    ))
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

/// Disorder criterion: the global spectrum must be majorized by each local
/// spectrum (sorted descending, zero-padded, all partial sums).
pub fn majorization_check(
    rho: &DensityMatrix,
    config: &CriteriaConfig,
) -> Result<CriterionReport> {
    if rho.dims().len() != 2 {
        return Err(Error::InvalidArgument(
            "majorization check requires a bipartite state".into(),
        ));
    }
    let global = sorted_desc(hermitian_eigen(rho.mat())?.eigenvalues);
    let d = global.len();
    let mut margin = f64::INFINITY;
    let mut witness = None;
    for side in 0..2 {
        let local = hermitian_eigen(&rho.reduced(&[side])?)?.eigenvalues;
        let mut local = sorted_desc(local);
        local.resize(d, 0.0);
        let mut sum_local = 0.0;
        let mut sum_global = 0.0;
        for k in 0..d {
            sum_local += local[k];
            sum_global += global[k];
            let slack = sum_local - sum_global;
            if slack < margin {
                margin = slack;
                witness = Some(Witness::PartialSum {
                    subsystem: side,
                    terms: k + 1,
                });
            }
        }
    }
    let eps = eps_for(rho, config);
    Ok(CriterionReport::new("majorization", margin, eps, witness))
}

/// Whether a bipartite state has a qubit factor, and whether it is the
/// second one (needing a swap before the (2, N) checks).
fn qubit_layout(rho: &DensityMatrix) -> Option<bool> {
    let dims = rho.dims().dims();
    if dims.len() != 2 {
        return None;
    }
    if dims[0] == 2 {
        Some(false)
    } else if dims[1] == 2 {
        Some(true)
    } else {
        None
    }
}

/// Runs every criterion applicable to the state's dimension signature.
pub fn run_all_criteria(
    rho: &DensityMatrix,
    config: &CriteriaConfig,
) -> Result<Vec<CriterionReport>> {
    let n = rho.dims().len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "at least 2 subsystems required".into(),
        ));
    }
    let mut reports = vec![purity_chain_check(rho, config)?];
    if n == 2 {
        reports.push(majorization_check(rho, config)?);
    }
    for s in 0..n {
        reports.push(ppt_check(rho, s, config)?);
    }
    if let Some(swap) = qubit_layout(rho) {
        let viewed;
        let view = if swap {
            viewed = rho.swap_bipartite()?;
            &viewed
        } else {
            rho
        };
        let suffix = if swap { "+swap" } else { "" };
        let mut t2 = theorem2_check(view, config.samples, config.seed, config)?;
        t2.criterion = format!("theorem2{suffix}");
        reports.push(t2);
        let mut t3s = theorem3_sphere_check(view, config.dirs, config)?;
        t3s.criterion = format!("theorem3_sphere{suffix}");
        reports.push(t3s);
        let mut t3t = theorem3_trace_check(view, config)?;
        t3t.criterion = format!("theorem3_trace{suffix}");
        reports.push(t3t);
    }
    Ok(reports)
}

/// Aggregate all applicable criteria into a verdict. `Separable` is emitted
/// only for 2x2 and 2x3 systems with a positive partial transpose.
pub fn full_verdict(rho: &DensityMatrix, config: &CriteriaConfig) -> Result<Verdict> {
    let reports = run_all_criteria(rho, config)?;
    Ok(verdict_from_reports(rho, &reports))
}

/// Assemble the verdict from already-computed reports.
pub fn verdict_from_reports(rho: &DensityMatrix, reports: &[CriterionReport]) -> Verdict {
    let certificates: Vec<CriterionReport> = reports
        .iter()
        .filter(|r| !r.satisfied)
        .cloned()
        .collect();
    if !certificates.is_empty() {
        return Verdict {
            conclusion: Conclusion::Entangled,
            certificates,
        };
    }
    let mut dims: Vec<usize> = rho.dims().dims().to_vec();
    dims.sort_unstable();
    let ppt_ok = reports
        .iter()
        .filter(|r| r.criterion.starts_with("ppt:"))
        .all(|r| r.satisfied);
    let conclusion = if (dims == [2, 2] || dims == [2, 3]) && ppt_ok {
        Conclusion::Separable
    } else {
        Conclusion::Inconclusive
    };
    Verdict {
        conclusion,
        certificates: Vec::new(),
    }
}
