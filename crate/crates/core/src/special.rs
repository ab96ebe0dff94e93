//! Orthogonal polynomial and quadrature primitives.
//!
//! Everything here is evaluated by exact three-term recurrences; no
//! asymptotic expansions are used.

use crate::{Error, Result, Vec3};

/// Dimension `Z(d, ell)` of the space of spherical harmonics of exact degree
/// `ell` on the sphere `S^d`.
///
/// Evaluated as `(2ell + d - 1) * C(ell + d - 2, d - 2) / (d - 1)` in checked
/// integer arithmetic, so the result is exact whenever it fits in a `u64`.
pub fn dim_harmonic(d: u32, ell: u64) -> Result<u64> {
    assert!(d >= 2, "sphere dimension must be at least 2");
    let overflow = || Error::DegreeTooLarge { d, ell };
    let r = u128::from(d - 2);
    let n = u128::from(ell) + r;
    let mut binom: u128 = 1;
    for i in 1..=r {
        // Exact at every step: binom holds C(n - r + i, i).
        binom = binom.checked_mul(n - r + i).ok_or_else(overflow)? / i;
    }
    let lead = 2 * u128::from(ell) + u128::from(d) - 1;
    let value = lead.checked_mul(binom).ok_or_else(overflow)? / u128::from(d - 1);
    u64::try_from(value).map_err(|_| overflow())
}

/// `Z(d, ell)` as a float; panics only if the exact value overflows `u64`,
/// which does not happen for any degree used by the kernels here.
pub(crate) fn dim_harmonic_f64(d: u32, ell: usize) -> f64 {
    dim_harmonic(d, ell as u64).expect("harmonic dimension overflow") as f64
}

/// Half of `d - 1`: the Gegenbauer index `lambda` for `S^d`.
#[inline]
fn gegenbauer_lambda(d: u32) -> f64 {
    0.5 * f64::from(d - 1)
}

/// Normalized Gegenbauer (for `d = 2`, Legendre) polynomial `P_ell^{(d)}(t)`
/// with `P_ell^{(d)}(1) = 1`.
///
/// The recurrence is carried on the normalized polynomial
///
/// ```text
/// R_{n+1}(t) = (2 (n + lambda) t R_n(t) - n R_{n-1}(t)) / (n + 2 lambda),
/// ```
///
/// which keeps every iterate bounded by one in magnitude on `[-1, 1]` and
/// returns exactly one at `t = 1`.
pub fn gegenbauer_norm(d: u32, ell: usize, t: f64) -> f64 {
    let lambda = gegenbauer_lambda(d);
    let mut prev = 1.0;
    if ell == 0 {
        return prev;
    }
    let mut cur = t;
    for n in 1..ell {
        let nf = n as f64;
        let next = (2.0 * (nf + lambda) * t * cur - nf * prev) / (nf + 2.0 * lambda);
        prev = cur;
        cur = next;
    }
    cur
}

/// Fills `out[ell] = P_ell^{(d)}(t)` for `ell = 0..out.len()`.
pub fn gegenbauer_norm_table(d: u32, t: f64, out: &mut [f64]) {
    let lambda = gegenbauer_lambda(d);
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = t;
    for n in 1..out.len() - 1 {
        let nf = n as f64;
        out[n + 1] = (2.0 * (nf + lambda) * t * out[n] - nf * out[n - 1]) / (nf + 2.0 * lambda);
    }
}

/// `sum_ell coeffs[ell] * P_ell^{(d)}(t)`, accumulated in increasing `ell`.
pub fn gegenbauer_series(d: u32, coeffs: &[f64], t: f64) -> f64 {
    let lambda = gegenbauer_lambda(d);
    let Some((&c0, rest)) = coeffs.split_first() else {
        return 0.0;
    };
    let mut sum = c0;
    if rest.is_empty() {
        return sum;
    }
    let mut prev = 1.0;
    let mut cur = t;
    sum += rest[0] * cur;
    for (n, &c) in rest.iter().enumerate().skip(1) {
        let nf = n as f64;
        let next = (2.0 * (nf + lambda) * t * cur - nf * prev) / (nf + 2.0 * lambda);
        prev = cur;
        cur = next;
        sum += c * cur;
    }
    sum
}

/// Legendre polynomial `P_ell(t)`.
#[inline]
pub fn legendre(ell: usize, t: f64) -> f64 {
    gegenbauer_norm(2, ell, t)
}

/// Gauss-Legendre rule on `[-1, 1]` for the unit weight function.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussLegendreRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendreRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies the rule to `f` on the interval `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// `(P_n(x), P_n'(x))` for `|x| < 1`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut cur = x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    let nf = n as f64;
    let deriv = nf * (x * cur - prev) / (x * x - 1.0);
    (cur, deriv)
}

/// `n`-point Gauss-Legendre rule, exact for polynomials of degree `2n - 1`.
///
/// Nodes are the roots of `P_n`, found by Newton iteration from the
/// Tricomi-type guesses `cos(pi (i + 3/4) / (n + 1/2))`; weights use
/// `2 / ((1 - x^2) P_n'(x)^2)`. Nodes are returned in increasing order and
/// are exactly antisymmetric.
pub fn gauss_legendre(n: usize) -> Result<GaussLegendreRule> {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        if n % 2 == 1 && i == n / 2 {
            x = 0.0;
        }
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { n, index: i });
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    Ok(GaussLegendreRule { nodes, weights })
}

/// Position of the real harmonic `(ell, m)` in the flat tables produced by
/// [`real_harmonics`]; `m` runs over `-ell..=ell`.
#[inline]
pub fn harmonic_index(ell: usize, m: i64) -> usize {
    ((ell * ell + ell) as i64 + m) as usize
}

/// Inverse of [`harmonic_index`].
pub fn harmonic_degree_order(index: usize) -> (usize, i64) {
    let ell = (index as f64).sqrt() as usize;
    let ell = if (ell + 1) * (ell + 1) <= index { ell + 1 } else { ell };
    (ell, index as i64 - (ell * ell + ell) as i64)
}

/// All real spherical harmonics of degree `<= lmax` at the unit vector `x`.
///
/// The basis is orthonormal for the normalized surface measure: `Y_00 = 1`
/// and `sum_m Y_lm(x) Y_lm(y) = (2l + 1) P_l(x . y)`. Order `m > 0` carries
/// `cos(m phi)`, `m < 0` carries `sin(|m| phi)`. The `sin^m theta` factor is
/// produced as `Re/Im (x + i y)^m`, so poles need no special casing.
pub fn real_harmonics(lmax: usize, x: &Vec3) -> Vec<f64> {
    let mut out = vec![0.0; (lmax + 1) * (lmax + 1)];
    let t = x[2];
    // q[l] holds the reduced associated Legendre function for the current m.
    let mut q = vec![0.0; lmax + 1];
    let mut qmm = 1.0;
    let (mut re, mut im) = (1.0, 0.0);
    for m in 0..=lmax {
        if m == 1 {
            qmm = 3f64.sqrt();
        } else if m >= 2 {
            let mf = m as f64;
            qmm *= ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt();
        }
        if m >= 1 {
            let (nre, nim) = (re * x[0] - im * x[1], re * x[1] + im * x[0]);
            re = nre;
            im = nim;
        }
        let mf = m as f64;
        q[m] = qmm;
        if m < lmax {
            q[m + 1] = t * (2.0 * mf + 3.0).sqrt() * qmm;
        }
        for l in m + 2..=lmax {
            let lf = l as f64;
            let a = ((2.0 * lf - 1.0) * (2.0 * lf + 1.0) / ((lf - mf) * (lf + mf))).sqrt();
            let b = ((2.0 * lf + 1.0) * (lf + mf - 1.0) * (lf - mf - 1.0)
                / ((lf - mf) * (lf + mf) * (2.0 * lf - 3.0)))
                .sqrt();
            q[l] = a * t * q[l - 1] - b * q[l - 2];
        }
        for l in m..=lmax {
            if m == 0 {
                out[harmonic_index(l, 0)] = q[l];
            } else {
                out[harmonic_index(l, m as i64)] = q[l] * re;
                out[harmonic_index(l, -(m as i64))] = q[l] * im;
            }
        }
    }
    out
}

/// Single real spherical harmonic `Y_{ell, m}(x)`; see [`real_harmonics`].
pub fn real_harmonic(ell: usize, m: i64, x: &Vec3) -> f64 {
    assert!(m.unsigned_abs() as usize <= ell, "|m| must not exceed ell");
    real_harmonics(ell, x)[harmonic_index(ell, m)]
}
