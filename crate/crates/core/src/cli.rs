//! Command-line harness producing CSV artifacts.
//!
//! Every output starts with `#` comment lines echoing the version and the
//! resolved configuration. Bodies are deterministic for a fixed
//! configuration; wall-clock timings are only written with `--timing`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::filter::{write_filter_csv, Filter, NeedletFilter, DEFAULT_KAPPA};
use crate::local::{localized_approximate, low_order_approximation, SphericalCap};
use crate::needlet::{
    analyze, filtered_hyperinterpolation_batch, synthesize, Certification, FilteredKernel,
    FunctionSample, NeedletFrame,
};
use crate::quadrature::{
    discretization_degree, needlet_degree, tensor_rule, QuadratureRule, QuadratureSource,
};
use crate::wendland::{discrete_l2_error, FourierCoeffTable, WendlandTestFunction, DEFAULT_TRUNCATION};
use crate::{from_spherical, Error, Result, Vec3};

/// Environment variable naming a default spherical-design directory.
pub const DESIGN_DIR_ENV: &str = "NEEDLET_DESIGN_DIR";

/// Degree of the rule on which discrete errors are measured.
pub const DEFAULT_EVAL_DEGREE: usize = 301;

#[derive(Debug, Parser)]
#[command(name = "needlets", version, about = "Spherical needlet approximation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the needlet filter h and the frame filter H.
    Filter(FilterArgs),
    /// Sample a filtered kernel v_{T,g}(c) on [-1, 1].
    Kernel(KernelArgs),
    /// Approximate a Wendland test function by discrete needlets.
    Approx(ApproxArgs),
    /// Semidiscrete and discrete L2 errors over orders and test functions.
    Convergence(ConvergenceArgs),
    /// Low-order approximation refined by high-level needlets in a cap.
    Local(LocalArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Smoothness index of the needlet filter.
    #[arg(long, default_value_t = DEFAULT_KAPPA)]
    pub kappa: u32,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FilterArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 2.5)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1001)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum KernelFilter {
    /// The needlet filter h.
    H,
    /// Its square h^2.
    H2,
    /// The frame filter H.
    Frame,
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub common: Common,
    /// Scale T of the kernel.
    #[arg(long, default_value_t = 8.0)]
    pub scale: f64,
    #[arg(long, value_enum, default_value_t = KernelFilter::H)]
    pub filter: KernelFilter,
    #[arg(long, default_value_t = 1001)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// `tensor` or `dir:<path>`; defaults to the design directory in
    /// NEEDLET_DESIGN_DIR when set, otherwise tensor rules.
    #[arg(long)]
    pub quad: Option<QuadSpec>,
}

#[derive(Debug, Clone, Args)]
pub struct ApproxArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 4)]
    pub order: usize,
    /// Wendland index k of the test function.
    #[arg(long, default_value_t = 2)]
    pub wendland: u32,
    /// `NLATxNLON` equiangular grid or `quad:<degree>`.
    #[arg(long, default_value = "45x90")]
    pub grid: GridSpec,
    /// Also write the needlet coefficients to this file.
    #[arg(long)]
    pub coefficients: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub source: SourceArgs,
    /// Orders J, e.g. `1-5` or `2,4,6`.
    #[arg(long, default_value = "1-5")]
    pub orders: IndexList,
    /// Wendland indices k, e.g. `0-2`.
    #[arg(long, default_value = "0-2")]
    pub wendland: IndexList,
    /// Exactness degree of the rule on which discrete errors are measured.
    #[arg(long, default_value_t = DEFAULT_EVAL_DEGREE)]
    pub eval_degree: usize,
    /// Truncation degree of the Fourier-Laplace series.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    pub l_trunc: usize,
    /// Fill the wall_time column.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct LocalArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 2)]
    pub wendland: u32,
    /// `cx,cy,cz:radius` with the radius in radians.
    #[arg(long, default_value = "0,1,0:0.5235987755982988")]
    pub cap: SphericalCap,
    #[arg(long, default_value_t = 4)]
    pub low: usize,
    #[arg(long, default_value_t = 6)]
    pub high: usize,
    #[arg(long, default_value = "90x180")]
    pub grid: GridSpec,
}

/// Quadrature source named on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum QuadSpec {
    Tensor,
    Dir(PathBuf),
}

impl FromStr for QuadSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "tensor" {
            Ok(Self::Tensor)
        } else if let Some(p) = s.strip_prefix("dir:") {
            Ok(Self::Dir(PathBuf::from(p)))
        } else {
            Err(Error::Config(format!("quadrature must be tensor or dir:<path>, got {s:?}")))
        }
    }
}

impl std::fmt::Display for QuadSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Tensor => write!(f, "tensor"),
            Self::Dir(p) => write!(f, "dir:{}", p.display()),
        }
    }
}

impl SourceArgs {
    pub fn resolve(&self) -> QuadSpec {
        match &self.quad {
            Some(q) => q.clone(),
            None => match std::env::var_os(DESIGN_DIR_ENV) {
                Some(dir) if !dir.is_empty() => QuadSpec::Dir(PathBuf::from(dir)),
                _ => QuadSpec::Tensor,
            },
        }
    }
}

/// Evaluation points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    /// `nlat` colatitudes at cell centres times `nlon` azimuths from 0.
    LatLon { nlat: usize, nlon: usize },
    /// Nodes of a quadrature rule of the given degree.
    Quadrature { degree: usize },
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("grid must be NLATxNLON or quad:<degree>, got {s:?}"));
        if let Some(d) = s.strip_prefix("quad:") {
            let degree = d.parse().map_err(|_| bad())?;
            return Ok(Self::Quadrature { degree });
        }
        let (a, b) = s.split_once(['x', 'X', '×']).ok_or_else(bad)?;
        let nlat: usize = a.trim().parse().map_err(|_| bad())?;
        let nlon: usize = b.trim().parse().map_err(|_| bad())?;
        if nlat == 0 || nlon == 0 {
            return Err(bad());
        }
        Ok(Self::LatLon { nlat, nlon })
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::LatLon { nlat, nlon } => write!(f, "{nlat}x{nlon}"),
            Self::Quadrature { degree } => write!(f, "quad:{degree}"),
        }
    }
}

impl GridSpec {
    pub fn points(&self, source: &mut Source) -> Result<Vec<Vec3>> {
        match *self {
            Self::LatLon { nlat, nlon } => Ok(latlon_grid(nlat, nlon)),
            Self::Quadrature { degree } => Ok(source.rule(degree, "grid")?.nodes().to_vec()),
        }
    }
}

pub fn latlon_grid(nlat: usize, nlon: usize) -> Vec<Vec3> {
    let mut pts = Vec::with_capacity(nlat * nlon);
    for i in 0..nlat {
        let theta = (i as f64 + 0.5) * std::f64::consts::PI / nlat as f64;
        for l in 0..nlon {
            let phi = l as f64 * 2.0 * std::f64::consts::PI / nlon as f64;
            pts.push(from_spherical(theta, phi));
        }
    }
    pts
}

/// Sorted, deduplicated list of non-negative integers such as `1-3,6`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexList(pub Vec<usize>);

impl FromStr for IndexList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("expected a list like 1-5 or 0,2,4, got {s:?}"));
        let mut out = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            if let Some((a, b)) = part.split_once('-') {
                let a: usize = a.trim().parse().map_err(|_| bad())?;
                let b: usize = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            } else {
                out.push(part.parse().map_err(|_| bad())?);
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(Self(out))
    }
}

impl std::fmt::Display for IndexList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Quadrature provider that falls back to tensor rules when a design of the
/// requested strength is missing, recording a warning each time.
pub struct Source {
    source: QuadratureSource,
    warnings: Vec<String>,
}

impl Source {
    pub fn new(spec: &QuadSpec) -> Result<Self> {
        let source = match spec {
            QuadSpec::Tensor => QuadratureSource::Tensor,
            QuadSpec::Dir(dir) => QuadratureSource::design_dir(dir)?,
        };
        Ok(Self {
            source,
            warnings: Vec::new(),
        })
    }

    pub fn rule(&mut self, degree: usize, purpose: &str) -> Result<QuadratureRule> {
        match self.source.rule_for_degree(degree) {
            Err(Error::MissingDesign { required, .. }) => {
                self.warnings.push(format!(
                    "no design of strength >= {required} for {purpose}; using tensor rule"
                ));
                tensor_rule(degree)
            }
            other => other,
        }
    }

    pub fn needlet_rules(&mut self, order: usize) -> Result<Vec<QuadratureRule>> {
        (0..=order)
            .map(|j| self.rule(needlet_degree(j), &format!("needlet level {j}")))
            .collect()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// Reproducibility header: version and resolved configuration.
fn header(command: &str, config: &[(&str, String)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# needlets {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "# command: {command}");
    for (k, v) in config {
        let _ = writeln!(s, "# {k}: {v}");
    }
    s
}

fn write_warnings<W: Write + ?Sized>(out: &mut W, warnings: &[String]) -> Result<()> {
    for w in warnings {
        writeln!(out, "# warning: {w}")?;
    }
    Ok(())
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
    })
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Filter(a) => {
            let mut out = open_output(&a.common.out)?;
            run_filter(&a, &mut out)?;
            out.flush()?;
        }
        Command::Kernel(a) => {
            let mut out = open_output(&a.common.out)?;
            run_kernel(&a, &mut out)?;
            out.flush()?;
        }
        Command::Approx(a) => {
            let mut out = open_output(&a.common.out)?;
            run_approx(&a, &mut out)?;
            out.flush()?;
        }
        Command::Convergence(a) => {
            let mut out = open_output(&a.common.out)?;
            let rows = run_convergence(&a, &mut out)?;
            out.flush()?;
            drop(out);
            for r in &rows {
                if r.truncation_floor {
                    eprintln!(
                        "warning: k = {} J = {}: truncation degree below the first omitted degree; semidiscrete error reported as 0",
                        r.k, r.order
                    );
                }
            }
        }
        Command::Local(a) => {
            let mut out = open_output(&a.common.out)?;
            run_local(&a, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

pub fn run_filter<W: Write + ?Sized>(args: &FilterArgs, out: &mut W) -> Result<()> {
    if !(args.t_min < args.t_max) {
        return Err(Error::Config("t-min must be below t-max".into()));
    }
    let filter = NeedletFilter::new(args.common.kappa)?;
    let coeffs: Vec<String> = match filter.integer_coefficients() {
        Some(c) => c.iter().map(i64::to_string).collect(),
        None => filter.exact_coefficients().iter().map(|c| c.to_string()).collect(),
    };
    out.write_all(
        header(
            "filter",
            &[
                ("kappa", args.common.kappa.to_string()),
                ("coefficients", coeffs.join(" ")),
                ("t_range", format!("{} {}", args.t_min, args.t_max)),
                ("samples", args.samples.to_string()),
            ],
        )
        .as_bytes(),
    )?;
    let mut buf = Vec::new();
    write_filter_csv(&mut buf, &filter, args.t_min, args.t_max, args.samples)?;
    out.write_all(&buf)?;
    Ok(())
}

pub fn run_kernel<W: Write + ?Sized>(args: &KernelArgs, out: &mut W) -> Result<()> {
    if !(args.scale >= 0.0 && args.scale.is_finite()) {
        return Err(Error::Config(format!("kernel scale must be non-negative, got {}", args.scale)));
    }
    let filter = NeedletFilter::new(args.common.kappa)?;
    let g: Box<dyn Filter> = match args.filter {
        KernelFilter::H => Box::new(filter.clone()),
        KernelFilter::H2 => Box::new(filter.squared()),
        KernelFilter::Frame => Box::new(filter.frame()),
    };
    let kernel = FilteredKernel::new(g.as_ref(), args.scale, 2);
    out.write_all(
        header(
            "kernel",
            &[
                ("kappa", args.common.kappa.to_string()),
                ("filter", format!("{:?}", args.filter).to_lowercase()),
                ("scale", args.scale.to_string()),
                ("degree", kernel.degree().to_string()),
                ("samples", args.samples.to_string()),
            ],
        )
        .as_bytes(),
    )?;
    writeln!(out, "c,value")?;
    let steps = args.samples.max(2) - 1;
    for i in 0..=steps {
        let c = -1.0 + 2.0 * i as f64 / steps as f64;
        writeln!(out, "{c:.16e},{:.16e}", kernel.eval(c))?;
    }
    Ok(())
}

fn write_point_row<W: Write + ?Sized>(out: &mut W, x: &Vec3, f: f64, a: f64) -> std::io::Result<()> {
    write!(
        out,
        "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
        x[0],
        x[1],
        x[2],
        f,
        a,
        (a - f).abs()
    )
}

pub fn run_approx<W: Write + ?Sized>(args: &ApproxArgs, out: &mut W) -> Result<()> {
    let f = WendlandTestFunction::new(args.wendland)?;
    let filter = NeedletFilter::new(args.common.kappa)?;
    let spec = args.source.resolve();
    let mut source = Source::new(&spec)?;
    let frame = NeedletFrame::new(args.order, filter, source.needlet_rules(args.order)?)?;
    let disc = source.rule(discretization_degree(args.order), "discretization")?;
    let points = args.grid.points(&mut source)?;

    let sample = FunctionSample::new(|x| f.eval(x), &disc);
    let coeffs = analyze(&sample, &frame)?;
    let approx = synthesize(&coeffs, &frame, &points)?;

    out.write_all(
        header(
            "approx",
            &[
                ("kappa", args.common.kappa.to_string()),
                ("order", args.order.to_string()),
                ("wendland", args.wendland.to_string()),
                ("quad", spec.to_string()),
                ("grid", args.grid.to_string()),
                ("discretization_nodes", disc.len().to_string()),
                ("needlets", frame.total_needlets().to_string()),
            ],
        )
        .as_bytes(),
    )?;
    write_warnings(out, source.warnings())?;
    writeln!(out, "x,y,z,f_value,approx_value,abs_error")?;
    for (x, a) in points.iter().zip(&approx) {
        write_point_row(out, x, f.eval(x), *a)?;
        writeln!(out)?;
    }
    if let Some(path) = &args.coefficients {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        coeffs.write_csv(&mut w, &frame)?;
        w.flush()?;
    }
    Ok(())
}

/// One line of the convergence table.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub k: u32,
    pub order: usize,
    /// Zero when `truncation_floor` is set.
    pub semidiscrete_error: f64,
    pub truncation_floor: bool,
    pub discrete_error: f64,
    pub discretization_nodes: usize,
    pub needlets: usize,
    pub eval_nodes: usize,
    pub wall_time: Option<f64>,
}

/// Semidiscrete and discrete `L2` errors for each order and Wendland index.
///
/// The discrete approximation is evaluated in its filtered-hyperinterpolation
/// form, which equals the needlet synthesis; all test functions share one
/// pass over the kernel.
pub fn run_convergence<W: Write + ?Sized>(args: &ConvergenceArgs, out: &mut W) -> Result<Vec<ConvergenceRow>> {
    if args.orders.0.is_empty() || args.wendland.0.is_empty() {
        return Err(Error::Config("orders and wendland indices must be non-empty".into()));
    }
    let filter = NeedletFilter::new(args.common.kappa)?;
    let frame_filter = filter.frame();
    let functions: Vec<WendlandTestFunction> = args
        .wendland
        .0
        .iter()
        .map(|&k| u32::try_from(k).map_err(|_| Error::Config(format!("Wendland index {k}"))).and_then(WendlandTestFunction::new))
        .collect::<Result<_>>()?;
    let tables: Vec<FourierCoeffTable> = functions
        .iter()
        .map(|f| FourierCoeffTable::compute(f.k(), args.l_trunc))
        .collect::<Result<_>>()?;
    let spec = args.source.resolve();
    let mut source = Source::new(&spec)?;
    let eval = source.rule(args.eval_degree, "error evaluation")?;

    let mut rows = Vec::new();
    for &order in &args.orders.0 {
        let start = Instant::now();
        let needlets: usize = source.needlet_rules(order)?.iter().map(QuadratureRule::len).sum();
        let disc = source.rule(discretization_degree(order), "discretization")?;
        let samples: Vec<FunctionSample<'_>> = functions
            .iter()
            .map(|f| FunctionSample::new(|x| f.eval(x), &disc))
            .collect();
        let approx = filtered_hyperinterpolation_batch(
            &samples,
            order,
            &frame_filter,
            eval.nodes(),
            Certification::Required,
        )?;
        let elapsed = start.elapsed().as_secs_f64();
        for (i, f) in functions.iter().enumerate() {
            let (semidiscrete_error, truncation_floor) =
                match tables[i].semidiscrete_l2_error(order as u32, &frame_filter) {
                    Ok(e) => (e, false),
                    Err(Error::BelowTruncationFloor { .. }) => (0.0, true),
                    Err(e) => return Err(e),
                };
            let discrete_error = discrete_l2_error(&approx[i], |x| f.eval(x), &eval)?;
            rows.push(ConvergenceRow {
                k: f.k(),
                order,
                semidiscrete_error,
                truncation_floor,
                discrete_error,
                discretization_nodes: disc.len(),
                needlets,
                eval_nodes: eval.len(),
                wall_time: args.timing.then_some(elapsed),
            });
        }
    }

    out.write_all(
        header(
            "convergence",
            &[
                ("kappa", args.common.kappa.to_string()),
                ("orders", args.orders.to_string()),
                ("wendland", args.wendland.to_string()),
                ("quad", spec.to_string()),
                ("eval_degree", args.eval_degree.to_string()),
                ("l_trunc", args.l_trunc.to_string()),
                ("timing", args.timing.to_string()),
            ],
        )
        .as_bytes(),
    )?;
    write_warnings(out, source.warnings())?;
    writeln!(
        out,
        "k,J,semidiscrete_error,discrete_error,discretization_nodes,needlets,eval_nodes,truncation_floor,wall_time"
    )?;
    rows.sort_by_key(|r| (r.k, r.order));
    for r in &rows {
        let time = r.wall_time.map(|t| format!("{t:.3}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{:.16e},{:.16e},{},{},{},{},{}",
            r.k,
            r.order,
            r.semidiscrete_error,
            r.discrete_error,
            r.discretization_nodes,
            r.needlets,
            r.eval_nodes,
            r.truncation_floor,
            time
        )?;
    }
    Ok(rows)
}

/// Summary of a localized run.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalSummary {
    pub max_error_inside: f64,
    pub max_error_outside: f64,
    pub max_low_order_error_inside: f64,
    /// `(level, centres in cap, centres)` for each refined level.
    pub centers: Vec<(usize, usize, usize)>,
}

pub fn run_local<W: Write + ?Sized>(args: &LocalArgs, out: &mut W) -> Result<LocalSummary> {
    if args.low > args.high {
        return Err(Error::Config(format!(
            "low order {} exceeds high order {}",
            args.low, args.high
        )));
    }
    let f = WendlandTestFunction::new(args.wendland)?;
    let filter = NeedletFilter::new(args.common.kappa)?;
    let spec = args.source.resolve();
    let mut source = Source::new(&spec)?;
    let frame = NeedletFrame::new(args.high, filter, source.needlet_rules(args.high)?)?;
    let disc = source.rule(discretization_degree(args.high), "discretization")?;
    let points = args.grid.points(&mut source)?;

    let sample = FunctionSample::new(|x| f.eval(x), &disc);
    let local = localized_approximate(&sample, &args.cap, args.low, args.high, &frame, &points)?;
    let low = low_order_approximation(&sample, frame.filter(), args.low, &points);

    let mut summary = LocalSummary {
        max_error_inside: 0.0,
        max_error_outside: 0.0,
        max_low_order_error_inside: 0.0,
        centers: Vec::new(),
    };
    for j in args.low + 1..=args.high {
        let level = frame.level(j)?;
        summary
            .centers
            .push((j, args.cap.nodes_inside(level.rule()).len(), level.len()));
    }
    let values: Vec<f64> = points.iter().map(|x| f.eval(x)).collect();
    for ((x, v), (a, l)) in points.iter().zip(&values).zip(local.iter().zip(&low)) {
        let err = (a - v).abs();
        if args.cap.contains(x) {
            summary.max_error_inside = summary.max_error_inside.max(err);
            summary.max_low_order_error_inside = summary.max_low_order_error_inside.max((l - v).abs());
        } else {
            summary.max_error_outside = summary.max_error_outside.max(err);
        }
    }

    let mut config = vec![
        ("kappa", args.common.kappa.to_string()),
        ("wendland", args.wendland.to_string()),
        ("cap", args.cap.to_string()),
        ("low", args.low.to_string()),
        ("high", args.high.to_string()),
        ("quad", spec.to_string()),
        ("grid", args.grid.to_string()),
        ("discretization_nodes", disc.len().to_string()),
    ];
    let centre_lines: Vec<String> = summary
        .centers
        .iter()
        .map(|(j, inside, total)| format!("level {j}: {inside} of {total}"))
        .collect();
    config.push(("centres_in_cap", centre_lines.join("; ")));
    config.push(("max_error_inside", format!("{:.6e}", summary.max_error_inside)));
    config.push(("max_error_outside", format!("{:.6e}", summary.max_error_outside)));
    config.push((
        "max_low_order_error_inside",
        format!("{:.6e}", summary.max_low_order_error_inside),
    ));
    out.write_all(header("local", &config).as_bytes())?;
    write_warnings(out, source.warnings())?;
    writeln!(out, "x,y,z,f_value,approx_value,abs_error,in_cap")?;
    for ((x, v), a) in points.iter().zip(&values).zip(&local) {
        write_point_row(out, x, *v, *a)?;
        writeln!(out, ",{}", u8::from(args.cap.contains(x)))?;
    }
    Ok(summary)
}
