//! Needlet filters.
//!
//! The needlet filter `h` is built from the polynomial
//! `p(s) = sum_{k = kappa+1}^{2 kappa + 2} a_k (1 - s)^k` with `p(0) = 1` and
//! `p^{(i)}(0) = 0` for `1 <= i <= kappa + 1`:
//!
//! ```text
//! h(t) = p(t - 1)                   for 1 <= t <= 2
//!      = sqrt(1 - p(2t - 1)^2)      for 1/2 <= t <= 1
//!      = 0                          elsewhere
//! ```
//!
//! so `h(t)^2 + h(2t)^2 = 1` on `[1/2, 1]`. The frame filter `H` is one on
//! `[0, 1)` and `h^2` beyond.

use std::io::Write;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Anything usable as the filter of a filtered kernel.
pub trait Filter: Sync {
    fn eval(&self, t: f64) -> f64;
}

impl<F: Fn(f64) -> f64 + Sync> Filter for F {
    fn eval(&self, t: f64) -> f64 {
        self(t)
    }
}

pub const DEFAULT_KAPPA: u32 = 5;

/// Conditioning cap for the coefficient solve.
pub const MAX_KAPPA: u32 = 12;

/// `C^kappa` needlet filter supported on `[1/2, 2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NeedletFilter {
    kappa: u32,
    exact: Vec<BigRational>,
    coeffs: Vec<f64>,
    /// `r_0, ..., r_kappa` with `1 - p(s) = s^{kappa+2} sum_m r_m s^m`.
    complement: Vec<f64>,
}

impl NeedletFilter {
    /// Solves for `a_{kappa+1}, ..., a_{2 kappa + 2}` in exact rational
    /// arithmetic.
    pub fn new(kappa: u32) -> Result<Self> {
        if kappa == 0 || kappa > MAX_KAPPA {
            return Err(Error::Domain(format!(
                "filter smoothness kappa must lie in 1..={MAX_KAPPA}, got {kappa}"
            )));
        }
        let exact = solve_filter_system(kappa)?;
        let to_f64 = |a: &BigRational| a.to_f64().expect("finite rational");
        let coeffs = exact.iter().map(to_f64).collect();
        let complement = complement_coefficients(kappa, &exact)?
            .iter()
            .map(to_f64)
            .collect();
        Ok(Self {
            kappa,
            exact,
            coeffs,
            complement,
        })
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    /// `a_{kappa+1}, ..., a_{2 kappa + 2}` as exact rationals.
    pub fn exact_coefficients(&self) -> &[BigRational] {
        &self.exact
    }

    /// The coefficients as integers, when every one of them is integral.
    pub fn integer_coefficients(&self) -> Option<Vec<i64>> {
        self.exact
            .iter()
            .map(|a| if a.is_integer() { a.to_integer().to_i64() } else { None })
            .collect()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// `p(s)` for `s` in `[0, 1]`.
    pub fn p(&self, s: f64) -> f64 {
        if s < 0.5 {
            1.0 - self.p_complement(s)
        } else {
            self.p_near_one(s)
        }
    }

    /// `1 - p(s)`, without cancellation near `s = 0`.
    pub fn p_complement(&self, s: f64) -> f64 {
        if s < 0.5 {
            let mut acc = 0.0;
            for &r in self.complement.iter().rev() {
                acc = acc * s + r;
            }
            acc * s.powi(self.kappa as i32 + 2)
        } else {
            1.0 - self.p_near_one(s)
        }
    }

    fn p_near_one(&self, s: f64) -> f64 {
        let u = 1.0 - s;
        let mut acc = 0.0;
        for &a in self.coeffs.iter().rev() {
            acc = acc * u + a;
        }
        acc * u.powi(self.kappa as i32 + 1)
    }

    /// `h(t)`; zero outside `[1/2, 2]`.
    pub fn eval(&self, t: f64) -> f64 {
        if (1.0..=2.0).contains(&t) {
            self.p(t - 1.0)
        } else if (0.5..1.0).contains(&t) {
            let s = 2.0 * t - 1.0;
            let arg = if s < 0.5 {
                // 1 - p^2 = q (2 - q) with q = 1 - p small.
                let q = self.p_complement(s);
                q * (2.0 - q)
            } else {
                let p = self.p_near_one(s);
                1.0 - p * p
            };
            arg.clamp(0.0, 1.0).sqrt()
        } else {
            0.0
        }
    }

    pub fn squared(&self) -> SquaredFilter {
        SquaredFilter(self.clone())
    }

    pub fn frame(&self) -> FrameFilter {
        FrameFilter {
            base: self.clone(),
        }
    }
}

impl Filter for NeedletFilter {
    fn eval(&self, t: f64) -> f64 {
        NeedletFilter::eval(self, t)
    }
}

/// `h(t)^2`, the filter of the level-`j` needlet kernel products.
#[derive(Clone, Debug, PartialEq)]
pub struct SquaredFilter(pub NeedletFilter);

impl Filter for SquaredFilter {
    fn eval(&self, t: f64) -> f64 {
        let h = self.0.eval(t);
        h * h
    }
}

/// `H(t) = 1` on `[0, 1)` and `h(t)^2` for `t >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameFilter {
    pub base: NeedletFilter,
}

impl FrameFilter {
    pub fn eval(&self, t: f64) -> f64 {
        if t < 1.0 {
            1.0
        } else {
            let h = self.base.eval(t);
            h * h
        }
    }
}

impl Filter for FrameFilter {
    fn eval(&self, t: f64) -> f64 {
        FrameFilter::eval(self, t)
    }
}

/// Falling factorial `k (k-1) ... (k-i+1)`.
fn falling(k: u32, i: u32) -> BigInt {
    (0..i).fold(BigInt::one(), |acc, j| acc * BigInt::from(k - j))
}

/// Row `i` of the system is `sum_k falling(k, i) a_k = [i == 0]`; the sign
/// `(-1)^i` of the `i`-th derivative of `(1 - s)^k` at zero drops out because
/// every row but the first has a zero right-hand side.
fn solve_filter_system(kappa: u32) -> Result<Vec<BigRational>> {
    let n = (kappa + 2) as usize;
    let mut m: Vec<Vec<BigRational>> = (0..n as u32)
        .map(|i| {
            let mut row: Vec<BigRational> = (kappa + 1..=2 * kappa + 2)
                .map(|k| BigRational::from_integer(falling(k, i)))
                .collect();
            row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(Error::SingularFilterSystem { kappa })?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let (src, dst) = if r < col {
                    let (a, b) = m.split_at_mut(col);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = m.split_at_mut(r);
                    (&a[col], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d -= &factor * s;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Coefficients of `(1 - p(s)) / s^{kappa+2}` in powers of `s`, from the
/// binomial expansion of `p`; the lower powers cancel exactly.
fn complement_coefficients(kappa: u32, a: &[BigRational]) -> Result<Vec<BigRational>> {
    let degree = (2 * kappa + 2) as usize;
    let mut power = vec![BigRational::zero(); degree + 1];
    for (offset, ak) in a.iter().enumerate() {
        let k = kappa as usize + 1 + offset;
        // (1 - s)^k = sum_m C(k, m) (-s)^m
        let mut binom = BigInt::one();
        for (m, c) in power.iter_mut().enumerate().take(k + 1) {
            let term = ak * BigRational::from_integer(binom.clone());
            if m % 2 == 0 {
                *c += term;
            } else {
                *c -= term;
            }
            binom = binom * BigInt::from(k - m) / BigInt::from(m + 1);
        }
    }
    power[0] -= BigRational::one();
    let split = kappa as usize + 2;
    if power[..split].iter().any(|c| !c.is_zero()) {
        return Err(Error::SingularFilterSystem { kappa });
    }
    Ok(power[split..].iter().map(|c| -c).collect())
}

/// Writes `t,h,H` samples on `[t_min, t_max]` as CSV.
pub fn write_filter_csv<W: Write>(
    out: &mut W,
    filter: &NeedletFilter,
    t_min: f64,
    t_max: f64,
    samples: usize,
) -> std::io::Result<()> {
    let frame = filter.frame();
    writeln!(out, "t,h,H")?;
    let steps = samples.max(2) - 1;
    for i in 0..=steps {
        let t = t_min + (t_max - t_min) * i as f64 / steps as f64;
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e}",
            t,
            filter.eval(t),
            frame.eval(t)
        )?;
    }
    Ok(())
}
