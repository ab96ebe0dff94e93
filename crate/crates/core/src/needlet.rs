//! Filtered kernels, needlet frames, and discrete needlet analysis and
//! synthesis.
//!
//! A level-`j` needlet centred at node `x_jk` of the needlet quadrature `Q_j`
//! is `psi_jk(x) = sqrt(w_jk) v_{2^{j-1}, h}(x . x_jk)`, where
//! `v_{T, g}(c) = sum_l g(l / T) Z(d, l) P_l(c)` and `v_{T, g} = 1` for
//! `T < 1`. Coefficients are discrete inner products `<f, psi_jk>_N` over a
//! discretization rule exact to degree `3 * 2^{J-1} - 1`.
//!
//! Two synthesis paths are provided. The per-needlet path sums
//! `<f, psi_jk>_N psi_jk(x)` directly. The kernel path collapses each level
//! (or the whole approximation) into a single filtered kernel against the
//! discretization nodes, which is exact because `Q_j` integrates the product
//! of two level-`j` kernels exactly. The two agree to rounding.

use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::filter::{Filter, FrameFilter, NeedletFilter};
use crate::quadrature::{discretization_degree, needlet_degree, QuadratureRule};
use crate::special::dim_harmonic_f64;
use crate::{dot, Error, Result, Vec3};

/// `v_{T, g}` with its Legendre coefficients `g(l / T) Z(d, l)` precomputed.
///
/// The sum is truncated at `l = ceil(2T) - 1`, the last degree a filter
/// supported in `[0, 2]` can reach.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredKernel {
    dim: u32,
    scale: f64,
    coeffs: Vec<f64>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl FilteredKernel {
    pub fn new<F: Filter + ?Sized>(filter: &F, scale: f64, dim: u32) -> Self {
        assert!(scale >= 0.0, "kernel scale must be non-negative");
        assert!(dim >= 2, "sphere dimension must be at least 2");
        let coeffs = if scale < 1.0 {
            vec![1.0]
        } else {
            let lmax = (2.0 * scale).ceil() as usize - 1;
            (0..=lmax)
                .map(|l| filter.eval(l as f64 / scale) * dim_harmonic_f64(dim, l))
                .collect()
        };
        let lambda = 0.5 * f64::from(dim - 1);
        let (alpha, beta) = (0..coeffs.len())
            .map(|n| {
                let nf = n as f64;
                let denom = nf + 2.0 * lambda;
                (2.0 * (nf + lambda) / denom, nf / denom)
            })
            .unzip();
        Self {
            dim,
            scale,
            coeffs,
            alpha,
            beta,
        }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Highest Legendre degree carried.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// `v_{T, g}(c)`, accumulated in increasing degree; `c` is clamped to
    /// `[-1, 1]`.
    #[inline]
    pub fn eval(&self, c: f64) -> f64 {
        let t = c.clamp(-1.0, 1.0);
        let n = self.coeffs.len();
        let mut sum = self.coeffs[0];
        if n == 1 {
            return sum;
        }
        let mut prev = 1.0;
        let mut cur = t;
        sum += self.coeffs[1] * cur;
        for l in 1..n - 1 {
            let next = self.alpha[l] * t * cur - self.beta[l] * prev;
            prev = cur;
            cur = next;
            sum += self.coeffs[l + 1] * cur;
        }
        sum
    }
}

/// One-shot evaluation of `v_{T, g}(c)` on `S^d`.
pub fn filtered_kernel<F: Filter + ?Sized>(filter: &F, scale: f64, dim: u32, c: f64) -> f64 {
    FilteredKernel::new(filter, scale, dim).eval(c)
}

/// Kernel scale `2^{j-1}` of level `j` (one half for level zero).
pub fn level_scale(level: usize) -> f64 {
    0.5 * (1u64 << level) as f64
}

static FRAME_IDS: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Debug)]
pub struct FrameLevel {
    rule: QuadratureRule,
    sqrt_weights: Vec<f64>,
    kernel: FilteredKernel,
}

impl FrameLevel {
    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn len(&self) -> usize {
        self.rule.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule.is_empty()
    }

    pub fn kernel(&self) -> &FilteredKernel {
        &self.kernel
    }

    #[inline]
    fn needlet(&self, k: usize, x: &Vec3) -> f64 {
        self.sqrt_weights[k] * self.kernel.eval(dot(x, &self.rule.nodes()[k]))
    }
}

/// Needlets of levels `0..=order` over a fixed filter and needlet quadratures.
#[derive(Clone, Debug)]
pub struct NeedletFrame {
    id: u64,
    order: usize,
    filter: NeedletFilter,
    levels: Vec<FrameLevel>,
}

impl NeedletFrame {
    /// Requires `quadratures[j]` to be certified for degree `2^{j+1} - 1`.
    pub fn new(order: usize, filter: NeedletFilter, quadratures: Vec<QuadratureRule>) -> Result<Self> {
        if quadratures.len() != order + 1 {
            return Err(Error::Config(format!(
                "order-{order} frame needs {} needlet quadratures, got {}",
                order + 1,
                quadratures.len()
            )));
        }
        let mut levels = Vec::with_capacity(order + 1);
        for (j, rule) in quadratures.into_iter().enumerate() {
            let required = needlet_degree(j);
            if rule.exactness_degree() < required {
                return Err(Error::Config(format!(
                    "needlet quadrature for level {j} is certified to degree {} but needs {required}",
                    rule.exactness_degree()
                )));
            }
            let sqrt_weights = rule.weights().iter().map(|w| w.sqrt()).collect();
            let kernel = FilteredKernel::new(&filter, level_scale(j), 2);
            levels.push(FrameLevel {
                rule,
                sqrt_weights,
                kernel,
            });
        }
        Ok(Self {
            id: FRAME_IDS.fetch_add(1, Ordering::Relaxed),
            order,
            filter,
            levels,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn filter(&self) -> &NeedletFilter {
        &self.filter
    }

    pub fn levels(&self) -> &[FrameLevel] {
        &self.levels
    }

    pub fn level(&self, j: usize) -> Result<&FrameLevel> {
        self.levels
            .get(j)
            .ok_or_else(|| Error::OutOfRange(format!("level {j} exceeds frame order {}", self.order)))
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(FrameLevel::len).collect()
    }

    pub fn total_needlets(&self) -> usize {
        self.levels.iter().map(FrameLevel::len).sum()
    }

    /// `psi_jk(x)`; `k` is zero-based.
    pub fn eval_needlet(&self, j: usize, k: usize, x: &Vec3) -> Result<f64> {
        let level = self.level(j)?;
        if k >= level.len() {
            return Err(Error::OutOfRange(format!(
                "needlet index {k} at level {j} with {} needlets",
                level.len()
            )));
        }
        Ok(level.needlet(k, x))
    }
}

/// Whether the discretization rule must carry the `3 * 2^{J-1} - 1`
/// exactness certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Certification {
    #[default]
    Required,
    Waived,
}

impl Certification {
    pub(crate) fn check(self, rule: &QuadratureRule, order: usize) -> Result<()> {
        let required = discretization_degree(order);
        if self == Certification::Required && rule.exactness_degree() < required {
            return Err(Error::Config(format!(
                "discretization rule is certified to degree {} but order {order} needs {required}",
                rule.exactness_degree()
            )));
        }
        Ok(())
    }
}

/// A function sampled once at the nodes of a discretization rule.
#[derive(Clone, Debug)]
pub struct FunctionSample<'a> {
    rule: &'a QuadratureRule,
    values: Vec<f64>,
}

impl<'a> FunctionSample<'a> {
    pub fn new<F: Fn(&Vec3) -> f64 + Sync>(f: F, rule: &'a QuadratureRule) -> Self {
        let values = rule.nodes().par_iter().map(|x| f(x)).collect();
        Self { rule, values }
    }

    pub fn from_values(rule: &'a QuadratureRule, values: Vec<f64>) -> Result<Self> {
        if values.len() != rule.len() {
            return Err(Error::Domain(format!(
                "{} sample values for a rule with {} nodes",
                values.len(),
                rule.len()
            )));
        }
        Ok(Self { rule, values })
    }

    pub fn rule(&self) -> &'a QuadratureRule {
        self.rule
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Weighted values `w_i f(x_i)`.
    fn weighted(&self) -> Vec<f64> {
        self.values
            .iter()
            .zip(self.rule.weights())
            .map(|(v, w)| v * w)
            .collect()
    }
}

/// Discrete needlet coefficients `<f, psi_jk>_N`, one vector per level.
#[derive(Clone, Debug, PartialEq)]
pub struct NeedletCoefficients {
    frame_id: u64,
    levels: Vec<Vec<f64>>,
}

impl NeedletCoefficients {
    /// All-zero coefficients shaped for `frame`.
    pub fn zeros(frame: &NeedletFrame) -> Self {
        Self {
            frame_id: frame.id,
            levels: frame.levels.iter().map(|l| vec![0.0; l.len()]).collect(),
        }
    }

    pub fn level(&self, j: usize) -> &[f64] {
        &self.levels[j]
    }

    pub fn level_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.levels[j]
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn get(&self, j: usize, k: usize) -> Option<f64> {
        self.levels.get(j).and_then(|l| l.get(k)).copied()
    }

    fn check_frame(&self, frame: &NeedletFrame) -> Result<()> {
        if self.frame_id != frame.id {
            return Err(Error::FrameMismatch);
        }
        Ok(())
    }

    /// CSV with columns `j,k,x,y,z,weight,coefficient`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: &mut W, frame: &NeedletFrame) -> Result<()> {
        self.check_frame(frame)?;
        writeln!(out, "j,k,x,y,z,weight,coefficient")?;
        for (j, (coeffs, level)) in self.levels.iter().zip(&frame.levels).enumerate() {
            for (k, (c, (x, w))) in coeffs
                .iter()
                .zip(level.rule.nodes().iter().zip(level.rule.weights()))
                .enumerate()
            {
                writeln!(
                    out,
                    "{j},{k},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    x[0], x[1], x[2], w, c
                )?;
            }
        }
        Ok(())
    }
}

fn check_same_rule(samples: &[FunctionSample<'_>]) -> Result<()> {
    if let Some(first) = samples.first() {
        if samples.iter().any(|s| !std::ptr::eq(s.rule, first.rule)) {
            return Err(Error::Domain("samples must share one discretization rule".into()));
        }
    }
    Ok(())
}

/// `<f, psi_jk>_N` for every needlet of `frame`.
pub fn analyze(sample: &FunctionSample<'_>, frame: &NeedletFrame) -> Result<NeedletCoefficients> {
    analyze_with(sample, frame, Certification::Required)
}

pub fn analyze_with(
    sample: &FunctionSample<'_>,
    frame: &NeedletFrame,
    certification: Certification,
) -> Result<NeedletCoefficients> {
    Ok(analyze_batch(std::slice::from_ref(sample), frame, certification)?
        .pop()
        .expect("one sample in, one coefficient set out"))
}

/// Analysis of several functions sampled on the same rule; each needlet is
/// evaluated once per node and shared across the functions.
pub fn analyze_batch(
    samples: &[FunctionSample<'_>],
    frame: &NeedletFrame,
    certification: Certification,
) -> Result<Vec<NeedletCoefficients>> {
    check_same_rule(samples)?;
    let Some(first) = samples.first() else {
        return Ok(Vec::new());
    };
    let rule = first.rule;
    certification.check(rule, frame.order)?;
    let weighted: Vec<Vec<f64>> = samples.iter().map(FunctionSample::weighted).collect();
    let mut out: Vec<NeedletCoefficients> =
        samples.iter().map(|_| NeedletCoefficients::zeros(frame)).collect();
    for (j, level) in frame.levels.iter().enumerate() {
        let per_needlet: Vec<Vec<f64>> = (0..level.len())
            .into_par_iter()
            .map(|k| {
                let mut acc = vec![0.0; samples.len()];
                for (i, x) in rule.nodes().iter().enumerate() {
                    let psi = level.needlet(k, x);
                    for (a, wf) in acc.iter_mut().zip(&weighted) {
                        *a += wf[i] * psi;
                    }
                }
                acc
            })
            .collect();
        for (k, acc) in per_needlet.into_iter().enumerate() {
            for (coeffs, a) in out.iter_mut().zip(acc) {
                coeffs.levels[j][k] = a;
            }
        }
    }
    Ok(out)
}

/// `<f, psi_jk>_N` for a single needlet.
pub fn needlet_coefficient(
    sample: &FunctionSample<'_>,
    frame: &NeedletFrame,
    j: usize,
    k: usize,
) -> Result<f64> {
    let level = frame.level(j)?;
    if k >= level.len() {
        return Err(Error::OutOfRange(format!("needlet index {k} at level {j}")));
    }
    Ok(sample
        .rule
        .nodes()
        .iter()
        .zip(sample.rule.weights())
        .zip(&sample.values)
        .map(|((x, w), v)| w * v * level.needlet(k, x))
        .sum())
}

/// `sum_j sum_k c_jk psi_jk(x)` at each point.
pub fn synthesize(coeffs: &NeedletCoefficients, frame: &NeedletFrame, points: &[Vec3]) -> Result<Vec<f64>> {
    Ok(synthesize_batch(std::slice::from_ref(coeffs), frame, points)?
        .pop()
        .expect("one coefficient set in, one result out"))
}

/// Synthesis of several coefficient sets; each needlet is evaluated once per
/// point.
pub fn synthesize_batch(
    coeffs: &[NeedletCoefficients],
    frame: &NeedletFrame,
    points: &[Vec3],
) -> Result<Vec<Vec<f64>>> {
    for c in coeffs {
        c.check_frame(frame)?;
    }
    let per_point: Vec<Vec<f64>> = points
        .par_iter()
        .map(|x| {
            let mut acc = vec![0.0; coeffs.len()];
            for (j, level) in frame.levels.iter().enumerate() {
                for k in 0..level.len() {
                    let psi = level.needlet(k, x);
                    for (a, c) in acc.iter_mut().zip(coeffs) {
                        *a += c.levels[j][k] * psi;
                    }
                }
            }
            acc
        })
        .collect();
    Ok(transpose(per_point, coeffs.len()))
}

/// Level-`j` slice `sum_k c_jk psi_jk(x)` of a synthesis.
pub fn synthesize_level(
    coeffs: &NeedletCoefficients,
    frame: &NeedletFrame,
    j: usize,
    points: &[Vec3],
) -> Result<Vec<f64>> {
    coeffs.check_frame(frame)?;
    let level = frame.level(j)?;
    let c = &coeffs.levels[j];
    Ok(points
        .par_iter()
        .map(|x| (0..level.len()).map(|k| c[k] * level.needlet(k, x)).sum())
        .collect())
}

fn transpose(per_point: Vec<Vec<f64>>, count: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = (0..count).map(|_| Vec::with_capacity(per_point.len())).collect();
    for row in per_point {
        for (o, v) in out.iter_mut().zip(row) {
            o.push(v);
        }
    }
    out
}

/// `sum_i w_i f(x_i) v(x_i . x)` at each point, for several functions at once.
pub fn discrete_kernel_operator(
    samples: &[FunctionSample<'_>],
    kernel: &FilteredKernel,
    points: &[Vec3],
) -> Result<Vec<Vec<f64>>> {
    check_same_rule(samples)?;
    let Some(first) = samples.first() else {
        return Ok(Vec::new());
    };
    let nodes = first.rule.nodes();
    let weighted: Vec<Vec<f64>> = samples.iter().map(FunctionSample::weighted).collect();
    let per_point: Vec<Vec<f64>> = points
        .par_iter()
        .map(|x| {
            let mut acc = vec![0.0; samples.len()];
            for (i, y) in nodes.iter().enumerate() {
                let v = kernel.eval(dot(x, y));
                for (a, wf) in acc.iter_mut().zip(&weighted) {
                    *a += wf[i] * v;
                }
            }
            acc
        })
        .collect();
    Ok(transpose(per_point, samples.len()))
}

/// Filtered hyperinterpolation `sum_i w_i f(x_i) v_{2^{J-1}, H}(x_i . x)`,
/// identical to the order-`J` discrete needlet approximation.
pub fn filtered_hyperinterpolation(
    sample: &FunctionSample<'_>,
    order: usize,
    filter: &FrameFilter,
    points: &[Vec3],
) -> Result<Vec<f64>> {
    Ok(filtered_hyperinterpolation_batch(
        std::slice::from_ref(sample),
        order,
        filter,
        points,
        Certification::Required,
    )?
    .pop()
    .expect("one sample in, one result out"))
}

pub fn filtered_hyperinterpolation_batch(
    samples: &[FunctionSample<'_>],
    order: usize,
    filter: &FrameFilter,
    points: &[Vec3],
    certification: Certification,
) -> Result<Vec<Vec<f64>>> {
    if let Some(first) = samples.first() {
        certification.check(first.rule, order)?;
    }
    let kernel = FilteredKernel::new(filter, level_scale(order), 2);
    discrete_kernel_operator(samples, &kernel, points)
}

/// Level-`j` contribution `U_{j,N}(f; x) = sum_k <f, psi_jk>_N psi_jk(x)`,
/// evaluated in kernel form with filter `h^2` at scale `2^{j-1}`.
pub fn level_contribution(
    sample: &FunctionSample<'_>,
    frame: &NeedletFrame,
    j: usize,
    points: &[Vec3],
) -> Result<Vec<f64>> {
    frame.level(j)?;
    Certification::Required.check(sample.rule, frame.order)?;
    Ok(level_contribution_unchecked(sample, frame.filter(), j, points))
}

/// Kernel-form level contribution without frame or certification checks.
pub fn level_contribution_unchecked(
    sample: &FunctionSample<'_>,
    filter: &NeedletFilter,
    j: usize,
    points: &[Vec3],
) -> Vec<f64> {
    let kernel = FilteredKernel::new(&filter.squared(), level_scale(j), 2);
    discrete_kernel_operator(std::slice::from_ref(sample), &kernel, points)
        .expect("single sample")
        .pop()
        .expect("single sample")
}
