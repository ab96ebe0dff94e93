//! Wendland test functions and their Fourier-Laplace coefficients.
//!
//! The test function is `f_k(x) = sum_i phi~_k(|z_i - x|)` over the six
//! centres `±e_1, ±e_2, ±e_3`, where `phi~_k(r) = phi_k(r / delta_k)` is the
//! equal-area rescaling of the original Wendland function. `f_k` lies in the
//! Sobolev space of order `k + 3/2`.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::filter::FrameFilter;
use crate::needlet::level_scale;
use crate::quadrature::QuadratureRule;
use crate::special::{gauss_legendre, gegenbauer_norm_table, legendre};
use crate::{dot, Error, Result, Vec3};

pub const MAX_WENDLAND_INDEX: u32 = 4;

/// Default truncation degree of the Fourier-Laplace series.
pub const DEFAULT_TRUNCATION: usize = 500;

pub const CENTERS: [Vec3; 6] = [
    [1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.0, -1.0, 0.0],
    [0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0],
];

fn check_index(k: u32) -> Result<()> {
    if k > MAX_WENDLAND_INDEX {
        return Err(Error::Domain(format!(
            "Wendland index must lie in 0..={MAX_WENDLAND_INDEX}, got {k}"
        )));
    }
    Ok(())
}

/// Original (unscaled) Wendland function; `k` must already be validated.
fn wendland_raw(k: u32, r: f64) -> f64 {
    let u = (1.0 - r).max(0.0);
    match k {
        0 => u * u,
        1 => u.powi(4) * (4.0 * r + 1.0),
        2 => u.powi(6) * (35.0 * r * r + 18.0 * r + 3.0) / 3.0,
        3 => u.powi(8) * (((32.0 * r + 25.0) * r + 8.0) * r + 1.0),
        4 => u.powi(10) * ((((429.0 * r + 450.0) * r + 210.0) * r + 50.0) * r + 5.0) / 5.0,
        _ => unreachable!("index checked by caller"),
    }
}

/// `delta_k = (3k + 3) Gamma(k + 1/2) / (2 Gamma(k + 1))`.
///
/// `Gamma(k + 1/2) / Gamma(k + 1) = sqrt(pi) prod_{i=1}^{k} (i - 1/2) / i`,
/// so the ratio is formed from exact half-integer factors.
pub fn wendland_delta(k: u32) -> f64 {
    let ratio: f64 = (1..=k).map(|i| (f64::from(i) - 0.5) / f64::from(i)).product();
    f64::from(3 * k + 3) * ratio * std::f64::consts::PI.sqrt() / 2.0
}

/// Wendland function `phi_k(r)`, or its equal-area rescaling
/// `phi_k(r / delta_k)` when `normalized` is set.
pub fn wendland_eval(k: u32, r: f64, normalized: bool) -> Result<f64> {
    check_index(k)?;
    let arg = if normalized { r / wendland_delta(k) } else { r };
    Ok(wendland_raw(k, arg))
}

/// `f_k` together with its scale.
#[derive(Clone, Debug, PartialEq)]
pub struct WendlandTestFunction {
    k: u32,
    delta: f64,
}

impl WendlandTestFunction {
    pub fn new(k: u32) -> Result<Self> {
        check_index(k)?;
        Ok(Self {
            k,
            delta: wendland_delta(k),
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Sobolev smoothness `k + 3/2`.
    pub fn smoothness(&self) -> f64 {
        f64::from(self.k) + 1.5
    }

    pub fn centers(&self) -> &'static [Vec3; 6] {
        &CENTERS
    }

    /// `phi~_k(r)`.
    #[inline]
    pub fn radial(&self, r: f64) -> f64 {
        wendland_raw(self.k, r / self.delta)
    }

    /// `f_k(x)`; `x` is expected on the unit sphere.
    pub fn eval(&self, x: &Vec3) -> f64 {
        CENTERS
            .iter()
            .map(|z| {
                let d = [z[0] - x[0], z[1] - x[1], z[2] - x[2]];
                self.radial(dot(&d, &d).sqrt())
            })
            .sum()
    }

    /// Fourier-Laplace coefficient `(1/2) int_{-1}^{1} phi~(sqrt(2 - 2t)) P_l(t) dt`.
    ///
    /// Under `t = 1 - r^2 / 2` the integral becomes
    /// `(1/2) int_0^R phi~(r) P_l(1 - r^2/2) r dr` with `R = min(2, delta)`,
    /// whose integrand is a polynomial of degree `2l + 3k + 3`; an
    /// `n_gl`-point Gauss-Legendre rule is exact once `n_gl >= l + k + 4`.
    pub fn fourier_coeff(&self, ell: usize, n_gl: usize) -> Result<f64> {
        let min_nodes = ell + self.k as usize + 4;
        if n_gl < min_nodes {
            return Err(Error::Domain(format!(
                "{n_gl} Gauss-Legendre nodes cannot resolve degree {ell}; need at least {min_nodes}"
            )));
        }
        let rule = gauss_legendre(n_gl)?;
        let upper = self.delta.min(2.0);
        Ok(0.5 * rule.integrate(0.0, upper, |r| {
            self.radial(r) * legendre(ell, 1.0 - 0.5 * r * r) * r
        }))
    }

    /// Gram sum `sum_i sum_j (2l + 1) P_l(z_i . z_j)` over the centres.
    pub fn center_gram(&self, ell: usize) -> f64 {
        let mut s = 0.0;
        for zi in &CENTERS {
            for zj in &CENTERS {
                s += legendre(ell, dot(zi, zj));
            }
        }
        (2 * ell + 1) as f64 * s
    }
}

/// `phi~_hat_l` for `l = 0..=l_trunc`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoeffTable {
    function: WendlandTestFunction,
    coeffs: Vec<f64>,
}

impl FourierCoeffTable {
    /// All coefficients from one Gauss-Legendre rule with `l_trunc + 50`
    /// nodes, exact for every degree in the table.
    pub fn compute(k: u32, l_trunc: usize) -> Result<Self> {
        let function = WendlandTestFunction::new(k)?;
        let rule = gauss_legendre(l_trunc + 50)?;
        let upper = function.delta.min(2.0);
        let half = 0.5 * upper;
        let mut coeffs = vec![0.0; l_trunc + 1];
        let mut table = vec![0.0; l_trunc + 1];
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let r = half * (x + 1.0);
            let weight = 0.5 * half * w * function.radial(r) * r;
            gegenbauer_norm_table(2, 1.0 - 0.5 * r * r, &mut table);
            for (c, p) in coeffs.iter_mut().zip(&table) {
                *c += weight * p;
            }
        }
        Ok(Self { function, coeffs })
    }

    pub fn function(&self) -> &WendlandTestFunction {
        &self.function
    }

    pub fn k(&self) -> u32 {
        self.function.k
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Truncated series `sum_l phi_hat_l (2l + 1) P_l(t)`, which converges to
    /// `phi~(sqrt(2 - 2t))`.
    pub fn reconstruct(&self, t: f64) -> f64 {
        let mut table = vec![0.0; self.coeffs.len()];
        gegenbauer_norm_table(2, t, &mut table);
        self.coeffs
            .iter()
            .zip(&table)
            .enumerate()
            .map(|(l, (c, p))| c * (2 * l + 1) as f64 * p)
            .sum()
    }

    /// Reads the cache at `path` when it matches `k` and `l_trunc`; otherwise
    /// computes the table and rewrites the cache.
    pub fn load_or_compute(path: &Path, k: u32, l_trunc: usize) -> Result<Self> {
        if let Some(table) = Self::read_cache(path, k, l_trunc)? {
            return Ok(table);
        }
        let table = Self::compute(k, l_trunc)?;
        table.write_cache(path)?;
        Ok(table)
    }

    fn header(k: u32, l_trunc: usize) -> String {
        format!("# wendland k={k} l_trunc={l_trunc}")
    }

    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(fs::File::create(path)?);
        writeln!(out, "{}", Self::header(self.k(), self.truncation()))?;
        writeln!(out, "ell,coeff")?;
        for (l, c) in self.coeffs.iter().enumerate() {
            writeln!(out, "{l},{c:.16e}")?;
        }
        out.flush()?;
        Ok(())
    }

    fn read_cache(path: &Path, k: u32, l_trunc: usize) -> Result<Option<Self>> {
        let Ok(file) = fs::File::open(path) else {
            return Ok(None);
        };
        let mut lines = BufReader::new(file).lines();
        match lines.next() {
            Some(Ok(h)) if h == Self::header(k, l_trunc) => {}
            _ => return Ok(None),
        }
        match lines.next() {
            Some(Ok(h)) if h == "ell,coeff" => {}
            _ => return Ok(None),
        }
        let mut coeffs = Vec::with_capacity(l_trunc + 1);
        for (i, line) in lines.enumerate() {
            let line = line?;
            let Some((l, c)) = line.split_once(',') else {
                return Ok(None);
            };
            match (l.parse::<usize>(), c.parse::<f64>()) {
                (Ok(l), Ok(c)) if l == i => coeffs.push(c),
                _ => return Ok(None),
            }
        }
        if coeffs.len() != l_trunc + 1 {
            return Ok(None);
        }
        Ok(Some(Self {
            function: WendlandTestFunction::new(k)?,
            coeffs,
        }))
    }

    /// `L2` error of the order-`J` semidiscrete needlet approximation from
    /// Parseval's identity:
    /// `sum_{l > 2^{J-1}} (1 - H(l / 2^{J-1}))^2 phi_hat_l^2 gram(l)`, square
    /// rooted, truncated at the table's degree.
    pub fn semidiscrete_l2_error(&self, order: u32, filter: &FrameFilter) -> Result<f64> {
        let scale = level_scale(order as usize);
        let first = scale.floor() as usize + 1;
        let l_trunc = self.truncation();
        if l_trunc < first {
            return Err(Error::BelowTruncationFloor {
                order,
                l_trunc,
                first,
            });
        }
        let sum: f64 = (first..=l_trunc)
            .map(|l| {
                let g = 1.0 - filter.eval(l as f64 / scale);
                g * g * self.coeffs[l] * self.coeffs[l] * self.function.center_gram(l)
            })
            .sum();
        Ok(sum.sqrt())
    }

    /// `||f||^2` from the truncated Fourier-Laplace series.
    pub fn squared_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(l, c)| c * c * self.function.center_gram(l))
            .sum()
    }
}

/// `sqrt(sum_i w_i (approx_i - f(x_i))^2)` over the nodes of `rule`.
pub fn discrete_l2_error<F: Fn(&Vec3) -> f64>(
    approx: &[f64],
    f: F,
    rule: &QuadratureRule,
) -> Result<f64> {
    if approx.len() != rule.len() {
        return Err(Error::Domain(format!(
            "{} approximation values for a rule with {} nodes",
            approx.len(),
            rule.len()
        )));
    }
    let sum: f64 = approx
        .iter()
        .zip(rule.nodes().iter().zip(rule.weights()))
        .map(|(a, (x, w))| {
            let d = a - f(x);
            w * d * d
        })
        .sum();
    Ok(sum.sqrt())
}
