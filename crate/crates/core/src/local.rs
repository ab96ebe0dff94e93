//! Needlet approximation refined inside a spherical cap.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::filter::NeedletFilter;
use crate::needlet::{level_contribution_unchecked, Certification, FunctionSample, NeedletFrame};
use crate::quadrature::QuadratureRule;
use crate::{dot, geodesic_distance, norm, normalize, Error, Result, Vec3};

/// Closed geodesic ball `{x : arccos(center . x) <= radius}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalCap {
    center: Vec3,
    radius: f64,
}

impl SphericalCap {
    /// `center` is normalized; `radius` must lie in `[0, pi]`. A zero radius
    /// gives an empty cap.
    pub fn new(center: Vec3, radius: f64) -> Result<Self> {
        let n = norm(&center);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::Domain(format!("cap centre {center:?} has no direction")));
        }
        if !(0.0..=std::f64::consts::PI).contains(&radius) {
            return Err(Error::Domain(format!("cap radius {radius} outside [0, pi]")));
        }
        Ok(Self {
            center: normalize(&center),
            radius,
        })
    }

    pub fn center(&self) -> &Vec3 {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, x: &Vec3) -> bool {
        self.radius > 0.0 && geodesic_distance(&self.center, x) <= self.radius
    }

    /// `|cap| / |S^2| = (1 - cos r) / 2`.
    pub fn area_fraction(&self) -> f64 {
        (1.0 - self.radius.cos()) / 2.0
    }

    /// Concentric cap with the radius scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.center, self.radius * factor)
    }

    /// Indices of the nodes of `rule` that lie in the cap.
    pub fn nodes_inside(&self, rule: &QuadratureRule) -> Vec<usize> {
        rule.nodes()
            .iter()
            .enumerate()
            .filter(|(_, x)| self.contains(x))
            .map(|(i, _)| i)
            .collect()
    }
}

impl FromStr for SphericalCap {
    type Err = Error;

    /// `"cx,cy,cz:radius"` with the radius in radians.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cap must look like cx,cy,cz:radius, got {s:?}"));
        let (c, r) = s.split_once(':').ok_or_else(bad)?;
        let parts: Vec<f64> = c
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let [x, y, z] = parts[..] else {
            return Err(bad());
        };
        let radius = r.trim().parse::<f64>().map_err(|_| bad())?;
        Self::new([x, y, z], radius)
    }
}

impl fmt::Display for SphericalCap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.center;
        write!(f, "{},{},{}:{}", c[0], c[1], c[2], self.radius)
    }
}

/// `sum_{j <= order} U_{j,N}(f; x)`, summed level by level in a fixed order.
///
/// Both the plain low-order approximation and the exterior of a localized
/// approximation go through here, so they agree bit for bit.
pub fn low_order_approximation(
    sample: &FunctionSample<'_>,
    filter: &NeedletFilter,
    order: usize,
    points: &[Vec3],
) -> Vec<f64> {
    let mut total = vec![0.0; points.len()];
    for j in 0..=order {
        let u = level_contribution_unchecked(sample, filter, j, points);
        for (t, v) in total.iter_mut().zip(u) {
            *t += v;
        }
    }
    total
}

/// Full needlets up to level `low`, plus needlets of levels `low + 1..=high`
/// whose centres lie in `cap`, added only at points inside the cap.
///
/// `frame` must reach level `high` and `sample.rule()` must be certified for
/// the discretization degree of order `high`.
pub fn localized_approximate(
    sample: &FunctionSample<'_>,
    cap: &SphericalCap,
    low: usize,
    high: usize,
    frame: &NeedletFrame,
    points: &[Vec3],
) -> Result<Vec<f64>> {
    if low > high {
        return Err(Error::Domain(format!(
            "low order {low} exceeds high order {high}"
        )));
    }
    if frame.order() < high {
        return Err(Error::Domain(format!(
            "frame of order {} cannot supply level {high}",
            frame.order()
        )));
    }
    Certification::Required.check(sample.rule(), high)?;

    let mut out = low_order_approximation(sample, frame.filter(), low, points);
    let inside: Vec<usize> = (0..points.len())
        .filter(|&i| cap.contains(&points[i]))
        .collect();
    if inside.is_empty() {
        return Ok(out);
    }

    let nodes = sample.rule().nodes();
    let weighted: Vec<f64> = sample
        .values()
        .iter()
        .zip(sample.rule().weights())
        .map(|(v, w)| v * w)
        .collect();
    for j in low + 1..=high {
        let level = frame.level(j)?;
        let centers = cap.nodes_inside(level.rule());
        let coeffs: Vec<f64> = centers
            .par_iter()
            .map(|&k| {
                nodes
                    .iter()
                    .zip(&weighted)
                    .map(|(x, wf)| wf * frame.eval_needlet(j, k, x).expect("index in range"))
                    .sum()
            })
            .collect();
        let detail: Vec<f64> = inside
            .par_iter()
            .map(|&i| {
                centers
                    .iter()
                    .zip(&coeffs)
                    .map(|(&k, c)| c * frame.eval_needlet(j, k, &points[i]).expect("index in range"))
                    .sum()
            })
            .collect();
        for (&i, d) in inside.iter().zip(detail) {
            out[i] += d;
        }
    }
    Ok(out)
}

/// Fraction of the nodes of `rule` inside `cap`.
pub fn node_fraction(rule: &QuadratureRule, cap: &SphericalCap) -> f64 {
    cap.nodes_inside(rule).len() as f64 / rule.len() as f64
}

/// Whether `x` is strictly separated from `cap`.
pub fn outside(cap: &SphericalCap, x: &Vec3) -> bool {
    cap.radius == 0.0 || dot(&cap.center, x).clamp(-1.0, 1.0).acos() > cap.radius
}
