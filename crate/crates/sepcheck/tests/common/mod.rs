//! Shared oracles for the integration tests: characteristic-polynomial
//! eigenvalues computed without the crate's eigensolver, and random
//! Hermitian matrix generation.

use num_complex::Complex64;
use sepcheck::linalg::Matrix;
use sepcheck::rng::SplitMix64;

/// Random Hermitian matrix (G + G^dagger)/2 with standard Gaussian entries.
pub fn random_hermitian(dim: usize, rng: &mut SplitMix64) -> Matrix {
    let mut g = Matrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            g.set(
                r,
                c,
                Complex64::new(rng.next_gaussian(), rng.next_gaussian()),
            );
        }
    }
    g.add(&g.adjoint()).unwrap().scale_re(0.5)
}

/// Characteristic polynomial of a Hermitian matrix via Faddeev-LeVerrier.
/// Returns monic coefficients `c` with `c[i]` multiplying `x^i` and
/// `c[n] = 1`; they are real because the matrix is Hermitian.
pub fn char_poly(a: &Matrix) -> Vec<f64> {
    let n = a.rows();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut m = Matrix::identity(n);
    for k in 1..=n {
        m = a.mat_mul(&m).unwrap();
        let c = -m.trace().unwrap().re / k as f64;
        coeffs[n - k] = c;
        for i in 0..n {
            let v = m.at(i, i);
            m.set(i, i, v + Complex64::new(c, 0.0));
        }
    }
    coeffs
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn poly_deriv(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &ci)| i as f64 * ci)
        .collect()
}

fn bisect_root(c: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = poly_eval(c, lo);
    if flo == 0.0 {
        return lo;
    }
    if flo > 0.0 {
        std::mem::swap(&mut lo, &mut hi);
        flo = poly_eval(c, lo);
        debug_assert!(flo <= 0.0);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = poly_eval(c, mid);
        if fm <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All real roots of a monic real polynomial, ascending, found recursively:
/// the roots of the derivative split the line into monotonic intervals, and
/// each sign change is bracketed and bisected. Repeated roots touching zero
/// at a critical point are picked up by a residual check there.
pub fn real_roots(c: &[f64]) -> Vec<f64> {
    let n = c.len() - 1;
    assert!(n >= 1 && c[n] != 0.0);
    if n == 1 {
        return vec![-c[0] / c[1]];
    }
    // Cauchy bound on root magnitude for the monic polynomial c / c[n].
    let bound = 1.0 + c[..n].iter().map(|x| (x / c[n]).abs()).fold(0.0, f64::max);
    let crit = real_roots(&poly_deriv(c));
    let mut nodes = vec![-bound];
    nodes.extend(crit.iter().copied().filter(|x| x.abs() < bound));
    nodes.push(bound);
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let scale = c.iter().map(|x| x.abs()).fold(1.0, f64::max);
    let mut roots = Vec::new();
    for w in nodes.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (flo, fhi) = (poly_eval(c, lo), poly_eval(c, hi));
        if flo == 0.0 {
            push_unique(&mut roots, lo);
        }
        if flo * fhi < 0.0 {
            push_unique(&mut roots, bisect_root(c, lo, hi));
        } else if fhi.abs() <= 1e-11 * scale {
            // Even-multiplicity root sitting at a critical point.
            push_unique(&mut roots, hi);
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

fn push_unique(roots: &mut Vec<f64>, x: f64) {
    if roots.iter().all(|&r| (r - x).abs() > 1e-9) {
        roots.push(x);
    }
}

/// Eigenvalues of a Hermitian matrix from its characteristic polynomial,
/// ascending. Multiplicities are recovered by counting how many derivatives
/// of the polynomial vanish at each root.
pub fn char_poly_eigenvalues(a: &Matrix) -> Vec<f64> {
    let c = char_poly(a);
    let roots = real_roots(&c);
    let n = a.rows();
    if roots.len() == n {
        return roots;
    }
    let scale = c.iter().map(|x| x.abs()).fold(1.0, f64::max);
    let mut vals = Vec::with_capacity(n);
    for &r in &roots {
        let mut p = c.clone();
        let mut mult = 0;
        while p.len() > 1 && poly_eval(&p, r).abs() <= 1e-6 * scale {
            mult += 1;
            p = poly_deriv(&p);
        }
        vals.extend(std::iter::repeat_n(r, mult.max(1)));
    }
    assert_eq!(vals.len(), n, "multiplicity recovery failed");
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}
