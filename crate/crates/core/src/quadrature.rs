//! Positive-weight quadrature rules on S² with certified polynomial exactness.
//!
//! Weights integrate against the normalized surface measure, so every rule's
//! weights sum to one. Rules come either from a Gauss-Legendre × equispaced
//! azimuth tensor product or from spherical design files (one `x y z` triple
//! per line, equal weights).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;

use crate::special::{gauss_legendre, gegenbauer_series, harmonic_degree_order, real_harmonics};
use crate::{dot, Error, Result, Vec3};

/// Per-harmonic tolerance used when certifying exactness.
pub const EXACTNESS_TOL: f64 = 1e-10;

/// Distance from the sphere beyond which a design node is rejected.
pub const SPHERE_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub enum RuleSource {
    Tensor,
    DesignFile(PathBuf),
    Custom,
}

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    nodes: Vec<Vec3>,
    weights: Vec<f64>,
    exactness_degree: usize,
    source: RuleSource,
}

impl QuadratureRule {
    /// Builds a rule from raw nodes and weights and certifies it at `degree`.
    pub fn new(nodes: Vec<Vec3>, weights: Vec<f64>, degree: usize) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::Domain(format!(
                "rule needs matching non-empty node and weight lists ({} nodes, {} weights)",
                nodes.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0)) {
            return Err(Error::Domain(format!("non-positive quadrature weight {w}")));
        }
        let rule = Self {
            nodes,
            weights,
            exactness_degree: degree,
            source: RuleSource::Custom,
        };
        rule.certify(degree)?;
        Ok(rule)
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn exactness_degree(&self) -> usize {
        self.exactness_degree
    }

    pub fn source(&self) -> &RuleSource {
        &self.source
    }

    /// `sum_i w_i f(x_i)`.
    pub fn integrate<F: Fn(&Vec3) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(x))
            .sum()
    }

    fn certify(&self, degree: usize) -> Result<()> {
        let report = verify_exactness(self, degree);
        if report.passed {
            Ok(())
        } else {
            let (ell, m) = report.witness.unwrap_or((0, 0));
            Err(Error::Certification {
                degree,
                residual: report.worst_residual,
                ell,
                m,
            })
        }
    }
}

/// Gauss-Legendre in `cos(theta)` with `ceil((degree + 1) / 2)` nodes crossed
/// with `degree + 1` equispaced azimuths starting at zero.
pub fn tensor_rule(degree: usize) -> Result<QuadratureRule> {
    let n = (degree + 2) / 2;
    let m = degree + 1;
    let gl = gauss_legendre(n)?;
    let mut nodes = Vec::with_capacity(n * m);
    let mut weights = Vec::with_capacity(n * m);
    let azimuths: Vec<(f64, f64)> = (0..m)
        .map(|j| (2.0 * std::f64::consts::PI * j as f64 / m as f64).sin_cos())
        .collect();
    for (&z, &w) in gl.nodes.iter().zip(&gl.weights) {
        let s = (1.0 - z * z).sqrt();
        for &(sp, cp) in &azimuths {
            nodes.push([s * cp, s * sp, z]);
            weights.push(0.5 * w / m as f64);
        }
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        exactness_degree: degree,
        source: RuleSource::Tensor,
    })
}

/// Outcome of an exactness check against the real harmonic basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactnessReport {
    pub passed: bool,
    pub degree: usize,
    pub worst_residual: f64,
    /// Harmonic `(ell, m)` attaining the worst residual.
    pub witness: Option<(usize, i64)>,
}

/// Checks `|sum_i w_i Y_lm(x_i) - [l = 0]| <= EXACTNESS_TOL` for every real
/// orthonormal harmonic of degree `<= degree`.
pub fn verify_exactness(rule: &QuadratureRule, degree: usize) -> ExactnessReport {
    let size = (degree + 1) * (degree + 1);
    const CHUNK: usize = 256;
    let partials: Vec<Vec<f64>> = rule
        .nodes
        .par_chunks(CHUNK)
        .zip(rule.weights.par_chunks(CHUNK))
        .map(|(xs, ws)| {
            let mut acc = vec![0.0; size];
            for (x, &w) in xs.iter().zip(ws) {
                for (a, y) in acc.iter_mut().zip(real_harmonics(degree, x)) {
                    *a += w * y;
                }
            }
            acc
        })
        .collect();
    let mut sums = vec![0.0; size];
    for p in &partials {
        for (s, v) in sums.iter_mut().zip(p) {
            *s += v;
        }
    }
    sums[0] -= 1.0;
    let (worst_index, worst_residual) = sums
        .iter()
        .map(|v| v.abs())
        .enumerate()
        .fold((0, 0.0), |best, (i, v)| if v > best.1 { (i, v) } else { best });
    let passed = worst_residual <= EXACTNESS_TOL;
    ExactnessReport {
        passed,
        degree,
        worst_residual,
        witness: (worst_residual > 0.0).then(|| harmonic_degree_order(worst_index)),
    }
}

/// `sum_i sum_j w_i w_j sum_{l <= degree} (2l + 1) P_l(x_i . x_j) - 1`.
///
/// The double sum equals `1 + sum_{l >= 1} sum_m (sum_i w_i Y_lm(x_i))^2`,
/// so it returns zero exactly when the rule is exact at `degree`.
pub fn kernel_exactness_residual(rule: &QuadratureRule, degree: usize) -> f64 {
    let coeffs: Vec<f64> = (0..=degree).map(|l| (2 * l + 1) as f64).collect();
    let rows: Vec<f64> = rule
        .nodes
        .par_iter()
        .zip(rule.weights.par_iter())
        .map(|(xi, wi)| {
            wi * rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(xj, wj)| wj * gegenbauer_series(2, &coeffs, dot(xi, xj).clamp(-1.0, 1.0)))
                .sum::<f64>()
        })
        .collect();
    rows.iter().sum::<f64>() - 1.0
}

/// Reads a design file (one `x y z` triple per line, blank lines ignored)
/// and certifies it at `degree` with equal weights.
pub fn load_design(path: &Path, degree: usize) -> Result<QuadratureRule> {
    let text = fs::read_to_string(path)?;
    let mut nodes = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message,
        };
        let values = trimmed
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|e| parse_err(format!("cannot parse {tok:?}: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != 3 {
            return Err(parse_err(format!("expected 3 values, found {}", values.len())));
        }
        let x = [values[0], values[1], values[2]];
        let r = crate::norm(&x);
        if !r.is_finite() || (r - 1.0).abs() > SPHERE_TOL {
            return Err(Error::OffSphere {
                path: path.to_path_buf(),
                line: line_no,
                distance: (r - 1.0).abs(),
            });
        }
        // Nodes already unit to rounding are kept as read so that a
        // save/load cycle is the identity.
        if (r - 1.0).abs() > 4.0 * f64::EPSILON {
            nodes.push([x[0] / r, x[1] / r, x[2] / r]);
        } else {
            nodes.push(x);
        }
    }
    if nodes.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "design file contains no nodes".into(),
        });
    }
    let w = 1.0 / nodes.len() as f64;
    let weights = vec![w; nodes.len()];
    let rule = QuadratureRule {
        nodes,
        weights,
        exactness_degree: degree,
        source: RuleSource::DesignFile(path.to_path_buf()),
    };
    rule.certify(degree)?;
    Ok(rule)
}

/// Writes the nodes of `rule` in design-file format with 17 significant
/// digits, which round-trips every `f64` exactly.
pub fn save_design(path: &Path, rule: &QuadratureRule) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    for x in &rule.nodes {
        writeln!(out, "{:.16e} {:.16e} {:.16e}", x[0], x[1], x[2])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Deserialize)]
struct ManifestEntry {
    strength: usize,
    path: PathBuf,
}

/// Available design files keyed by strength.
#[derive(Clone, Debug, Default)]
pub struct DesignCatalog {
    entries: Vec<(usize, PathBuf)>,
}

impl DesignCatalog {
    /// Scans `dir` for files named `sd<strength>.<N>`; a `manifest.json` in
    /// the directory, when present, is read instead.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let manifest = dir.join("manifest.json");
        if manifest.is_file() {
            return Self::from_manifest(&manifest);
        }
        let mut entries = Vec::new();
        for entry in fs::read_dir(dir)? {
            let path = entry?.path();
            let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
                continue;
            };
            if let Some(strength) = parse_design_name(name) {
                entries.push((strength, path));
            }
        }
        entries.sort();
        Ok(Self { entries })
    }

    /// Reads a JSON list of `{"strength": t, "path": "..."}`; relative paths
    /// resolve against the manifest's directory.
    pub fn from_manifest(path: &Path) -> Result<Self> {
        let list: Vec<ManifestEntry> = serde_json::from_str(&fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let mut entries: Vec<(usize, PathBuf)> = list
            .into_iter()
            .map(|e| {
                let p = if e.path.is_absolute() {
                    e.path
                } else {
                    base.join(e.path)
                };
                (e.strength, p)
            })
            .collect();
        entries.sort();
        Ok(Self { entries })
    }

    pub fn strengths(&self) -> Vec<usize> {
        self.entries.iter().map(|(s, _)| *s).collect()
    }

    /// Smallest available design of strength `>= degree`, certified at its
    /// own strength.
    pub fn rule_for_degree(&self, degree: usize) -> Option<Result<QuadratureRule>> {
        self.entries
            .iter()
            .find(|(s, _)| *s >= degree)
            .map(|(s, p)| load_design(p, *s))
    }
}

/// `sd<strength>.<N>` → strength.
fn parse_design_name(name: &str) -> Option<usize> {
    let rest = name.strip_prefix("sd")?;
    let (strength, count) = rest.split_once('.')?;
    if count.is_empty() || !count.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    strength.parse().ok()
}

/// Where quadrature rules come from.
#[derive(Clone, Debug)]
pub enum QuadratureSource {
    Tensor,
    Designs(DesignCatalog),
}

impl QuadratureSource {
    pub fn design_dir(dir: &Path) -> Result<Self> {
        Ok(Self::Designs(DesignCatalog::from_dir(dir)?))
    }

    pub fn manifest(path: &Path) -> Result<Self> {
        Ok(Self::Designs(DesignCatalog::from_manifest(path)?))
    }

    /// A rule exact for at least `degree`. Design sources report a missing
    /// strength as [`Error::MissingDesign`] with `level` set to `usize::MAX`;
    /// callers that know the level rewrite it.
    pub fn rule_for_degree(&self, degree: usize) -> Result<QuadratureRule> {
        match self {
            Self::Tensor => tensor_rule(degree),
            Self::Designs(catalog) => catalog.rule_for_degree(degree).unwrap_or(Err(
                Error::MissingDesign {
                    level: usize::MAX,
                    required: degree,
                },
            )),
        }
    }
}

/// Exactness required of the level-`j` needlet quadrature: `2^{j+1} - 1`.
pub fn needlet_degree(level: usize) -> usize {
    (1usize << (level + 1)) - 1
}

/// Exactness required of the discretization rule for order `J`:
/// `3 * 2^{J-1} - 1`, and degree zero for `J = 0`.
pub fn discretization_degree(order: usize) -> usize {
    if order == 0 {
        0
    } else {
        3 * (1usize << (order - 1)) - 1
    }
}

/// Needlet quadratures `Q_0, ..., Q_order`, rule `j` exact for `2^{j+1} - 1`.
pub fn needlet_quadrature_sequence(
    order: usize,
    source: &QuadratureSource,
) -> Result<Vec<QuadratureRule>> {
    (0..=order)
        .map(|level| {
            let required = needlet_degree(level);
            source.rule_for_degree(required).map_err(|e| match e {
                Error::MissingDesign { .. } => Error::MissingDesign { level, required },
                other => other,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_file(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        let mut f = fs::File::create(&p).unwrap();
        f.write_all(body.as_bytes()).unwrap();
        p
    }

    const OCTAHEDRON: &str = "1 0 0\n-1 0 0\n0 1 0\n0 -1 0\n0 0 1\n0 0 -1\n";

    #[test]
    fn tensor_degree_zero_is_single_node() {
        let r = tensor_rule(0).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r.weights()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tensor_integrates_z_squared() {
        let r = tensor_rule(2).unwrap();
        assert!((r.integrate(|x| x[2] * x[2]) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn tensor_annihilates_nonconstant_harmonics() {
        let r = tensor_rule(5).unwrap();
        for ell in 1..=5usize {
            for m in -(ell as i64)..=ell as i64 {
                let v = r.integrate(|x| crate::special::real_harmonic(ell, m, x));
                assert!(v.abs() < 1e-13, "({ell}, {m}): {v}");
            }
        }
    }

    #[test]
    fn tensor_structure() {
        for t in [0usize, 1, 2, 5, 8, 31] {
            let r = tensor_rule(t).unwrap();
            assert_eq!(r.len(), (t + 2) / 2 * (t + 1));
            assert!((r.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(r.weights().iter().all(|w| *w > 0.0));
            assert!(r.nodes().iter().all(|x| (crate::norm(x) - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn verify_tensor_pass_and_fail() {
        let r = tensor_rule(5).unwrap();
        assert!(verify_exactness(&r, 5).passed);
        let fail = verify_exactness(&r, 6);
        assert!(!fail.passed);
        let (ell, _) = fail.witness.unwrap();
        assert_eq!(ell, 6);
        assert!(fail.worst_residual > 1e-3);
    }

    #[test]
    fn degree_zero_checks_weight_sum() {
        let nodes = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let rule = QuadratureRule::new(nodes.clone(), vec![0.5, 0.5], 0).unwrap();
        assert!(verify_exactness(&rule, 0).passed);
        assert!(matches!(
            QuadratureRule::new(nodes, vec![0.5, 0.6], 0),
            Err(Error::Certification { .. })
        ));
    }

    #[test]
    fn kernel_identity_agrees_with_harmonic_check() {
        let r = tensor_rule(7).unwrap();
        assert!(kernel_exactness_residual(&r, 7).abs() < 1e-9);
        assert!(kernel_exactness_residual(&r, 8).abs() > 1e-3);
        let oct = QuadratureRule::new(
            vec![
                [1.0, 0.0, 0.0],
                [-1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, -1.0, 0.0],
                [0.0, 0.0, 1.0],
                [0.0, 0.0, -1.0],
            ],
            vec![1.0 / 6.0; 6],
            3,
        )
        .unwrap();
        assert!(kernel_exactness_residual(&oct, 3).abs() < 1e-9);
    }

    #[test]
    fn load_poles_and_octahedron() {
        let dir = tempfile::tempdir().unwrap();
        let poles = write_file(dir.path(), "poles.txt", "0 0 1\n0 0 -1\n");
        let r = load_design(&poles, 1).unwrap();
        assert_eq!(r.weights(), &[0.5, 0.5]);
        let oct = write_file(dir.path(), "oct.txt", OCTAHEDRON);
        let r = load_design(&oct, 3).unwrap();
        assert_eq!(r.exactness_degree(), 3);
        assert!(matches!(load_design(&oct, 4), Err(Error::Certification { .. })));
    }

    #[test]
    fn load_errors() {
        let dir = tempfile::tempdir().unwrap();
        let empty = write_file(dir.path(), "empty.txt", "");
        assert!(matches!(load_design(&empty, 0), Err(Error::Parse { .. })));
        let bad = write_file(dir.path(), "bad.txt", "1 0 0\n0 1 zero\n");
        match load_design(&bad, 0) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let short = write_file(dir.path(), "short.txt", "1 0\n");
        assert!(matches!(load_design(&short, 0), Err(Error::Parse { line: 1, .. })));
        let off = write_file(dir.path(), "off.txt", "1 0 0\n0 1.001 0\n");
        assert!(matches!(load_design(&off, 0), Err(Error::OffSphere { line: 2, .. })));
    }

    #[test]
    fn near_unit_nodes_are_renormalized() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_file(dir.path(), "n.txt", "0 0 1.000000001\n0 0 -1\n");
        let r = load_design(&p, 1).unwrap();
        assert_eq!(r.nodes()[0], [0.0, 0.0, 1.0]);
    }

    #[test]
    fn design_names() {
        assert_eq!(parse_design_name("sd007.00032"), Some(7));
        assert_eq!(parse_design_name("sd63.2018"), Some(63));
        assert_eq!(parse_design_name("sd7"), None);
        assert_eq!(parse_design_name("ss007.00032"), None);
        assert_eq!(parse_design_name("sd7.txt"), None);
    }

    /// Equal-weight Chebyshev rule on [-1, 1]: power sums match the moments
    /// of the uniform density, node polynomial from Newton's identities,
    /// roots by bisection.
    fn chebyshev_equal_weight_nodes(n: usize) -> Vec<f64> {
        let power = |k: usize| if k % 2 == 1 { 0.0 } else { n as f64 / (k as f64 + 1.0) };
        let mut e = vec![1.0];
        for k in 1..=n {
            let mut acc = 0.0;
            for i in 1..=k {
                let sign = if (i - 1) % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * e[k - i] * power(i);
            }
            e.push(acc / k as f64);
        }
        let poly = |x: f64| {
            (0..=n)
                .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } * e[k] * x.powi((n - k) as i32))
                .sum::<f64>()
        };
        let grid = 20000;
        let mut roots = Vec::new();
        for i in 0..grid {
            let (mut a, mut b) = (
                -1.0 + 2.0 * i as f64 / grid as f64,
                -1.0 + 2.0 * (i + 1) as f64 / grid as f64,
            );
            if poly(a) == 0.0 {
                roots.push(a);
                continue;
            }
            if poly(a) * poly(b) < 0.0 {
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if poly(a) * poly(mid) <= 0.0 {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                roots.push(0.5 * (a + b));
            }
        }
        assert_eq!(roots.len(), n);
        roots
    }

    /// Equal-weight degree-7 set: 7 Chebyshev heights × 8 azimuths.
    fn equal_weight_seven_design() -> String {
        let mut body = String::new();
        for z in chebyshev_equal_weight_nodes(7) {
            let s = (1.0 - z * z).sqrt();
            for j in 0..8 {
                let phi = 2.0 * std::f64::consts::PI * j as f64 / 8.0;
                body.push_str(&format!(
                    "{:.16e} {:.16e} {:.16e}\n",
                    s * phi.cos(),
                    s * phi.sin(),
                    z
                ));
            }
        }
        body
    }

    #[test]
    fn directory_sequence_and_missing_level() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "sd1.2", "0 0 1\n0 0 -1\n");
        write_file(dir.path(), "sd3.6", OCTAHEDRON);
        let source = QuadratureSource::design_dir(dir.path()).unwrap();
        match needlet_quadrature_sequence(2, &source) {
            Err(Error::MissingDesign { level, required }) => {
                assert_eq!((level, required), (2, 7));
            }
            other => panic!("unexpected {other:?}"),
        }
        write_file(dir.path(), "sd7.56", &equal_weight_seven_design());
        write_file(dir.path(), "notes.txt", "ignored");
        let source = QuadratureSource::design_dir(dir.path()).unwrap();
        let seq = needlet_quadrature_sequence(2, &source).unwrap();
        let degrees: Vec<usize> = seq.iter().map(|r| r.exactness_degree()).collect();
        assert_eq!(degrees, vec![1, 3, 7]);
        assert_eq!(seq[2].len(), 56);
        assert!(!verify_exactness(&seq[2], 8).passed);
    }

    #[test]
    fn higher_strength_design_serves_lower_requirement() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "sd3.6", OCTAHEDRON);
        let source = QuadratureSource::design_dir(dir.path()).unwrap();
        let seq = needlet_quadrature_sequence(1, &source).unwrap();
        assert_eq!(seq[0].exactness_degree(), 3);
    }

    #[test]
    fn manifest_source() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "octa.xyz", OCTAHEDRON);
        let manifest = write_file(
            dir.path(),
            "designs.json",
            r#"[{"strength": 3, "path": "octa.xyz"}]"#,
        );
        let source = QuadratureSource::manifest(&manifest).unwrap();
        let seq = needlet_quadrature_sequence(1, &source).unwrap();
        assert_eq!(seq[0].len(), 6);
        assert_eq!(seq[1].len(), 6);
    }

    #[test]
    fn tensor_sequence_degrees() {
        let seq = needlet_quadrature_sequence(3, &QuadratureSource::Tensor).unwrap();
        let degrees: Vec<usize> = seq.iter().map(|r| r.exactness_degree()).collect();
        assert_eq!(degrees, vec![1, 3, 7, 15]);
        for r in &seq {
            assert!(verify_exactness(r, r.exactness_degree()).passed);
        }
        assert_eq!(discretization_degree(0), 0);
        assert_eq!(discretization_degree(1), 2);
        assert_eq!(discretization_degree(5), 47);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn save_load_is_bit_exact(raw in proptest::collection::vec(
                (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), 1..20)) {
                let mut nodes: Vec<Vec3> = raw
                    .into_iter()
                    .map(|(a, b, c)| [a, b, c + 2.0])
                    .map(|x| crate::normalize(&x))
                    .collect();
                // Antipodal completion keeps degree-1 exactness out of the way;
                // certify at degree 0 only.
                let extra: Vec<Vec3> = nodes.iter().map(|x| [-x[0], -x[1], -x[2]]).collect();
                nodes.extend(extra);
                let n = nodes.len();
                let rule = QuadratureRule::new(nodes, vec![1.0 / n as f64; n], 0).unwrap();
                let dir = tempfile::tempdir().unwrap();
                let p1 = dir.path().join("a.txt");
                save_design(&p1, &rule).unwrap();
                let first = load_design(&p1, 0).unwrap();
                let p2 = dir.path().join("b.txt");
                save_design(&p2, &first).unwrap();
                let second = load_design(&p2, 0).unwrap();
                prop_assert_eq!(first.nodes(), second.nodes());
                prop_assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
            }
        }
    }
}
