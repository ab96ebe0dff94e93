//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use sphere_needlets::cli::{run_convergence, Common, ConvergenceArgs, IndexList, SourceArgs, QuadSpec};
use sphere_needlets::local::{localized_approximate, low_order_approximation, node_fraction, outside};
use sphere_needlets::needlet::{
    analyze_batch, filtered_hyperinterpolation_batch, level_contribution, level_scale,
    synthesize_batch, Certification,
};
use sphere_needlets::quadrature::{
    discretization_degree, load_design, needlet_degree, needlet_quadrature_sequence, tensor_rule,
    verify_exactness,
};
use sphere_needlets::special::{harmonic_index, real_harmonics};
use sphere_needlets::wendland::{discrete_l2_error, FourierCoeffTable, WendlandTestFunction};
use sphere_needlets::{
    dot, FilteredKernel, FunctionSample, NeedletFilter, NeedletFrame, QuadratureSource,
    SphericalCap, Vec3,
};

use common::{random_points, rng, slope, RandomPolynomial};

type Outcome = Result<String, String>;

fn tensor_frame(order: usize) -> NeedletFrame {
    let quads = needlet_quadrature_sequence(order, &QuadratureSource::Tensor).unwrap();
    NeedletFrame::new(order, NeedletFilter::new(5).unwrap(), quads).unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn filter_coefficients() -> Outcome {
    let start = Instant::now();
    let h = NeedletFilter::new(5).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    let got = h.integer_coefficients();
    let want = vec![924, -4752, 10395, -12320, 8316, -3024, 462];
    check(
        got.as_ref() == Some(&want) && elapsed < 1.0,
        format!("coefficients {got:?}, {elapsed:.3} s"),
    )
}

fn partition_of_unity() -> Outcome {
    let mut worst_partition = 0.0f64;
    for kappa in 1..=8 {
        let h = NeedletFilter::new(kappa).unwrap();
        for i in 0..10_000 {
            let t = 0.5 + 0.5 * i as f64 / 9_999.0;
            let s = h.eval(t).powi(2) + h.eval(2.0 * t).powi(2);
            worst_partition = worst_partition.max((s - 1.0).abs());
        }
    }
    let mut worst_telescope = 0.0f64;
    for kappa in 1..=8 {
        let h = NeedletFilter::new(kappa).unwrap();
        let big_h = h.frame();
        for i in 0..=400 {
            // t from 1 to 2^9 on a geometric grid.
            let t = 2f64.powf(9.0 * i as f64 / 400.0);
            for levels in 0..=8 {
                let lhs = big_h.eval(t / 2f64.powi(levels));
                let rhs: f64 = (0..=levels).map(|j| h.eval(t / 2f64.powi(j)).powi(2)).sum();
                worst_telescope = worst_telescope.max((lhs - rhs).abs());
            }
        }
    }
    check(
        worst_partition <= 1e-12 && worst_telescope <= 1e-12,
        format!("partition {worst_partition:.2e}, telescoping {worst_telescope:.2e}"),
    )
}

fn quadrature_certification() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for t in [1usize, 3, 7, 15, 31, 47] {
        let rule = tensor_rule(t).unwrap();
        let at = verify_exactness(&rule, t);
        let above = verify_exactness(&rule, t + 1);
        ok &= at.passed && !above.passed;
        notes.push(format!("{t}:{:.0e}/{:.0e}", at.worst_residual, above.worst_residual));
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("octahedron.txt");
    std::fs::write(&path, "1 0 0\n-1 0 0\n0 1 0\n0 -1 0\n0 0 1\n0 0 -1\n").unwrap();
    let octa = load_design(&path, 3);
    let octa_ok = octa.as_ref().map(|r| r.len() == 6).unwrap_or(false);
    ok &= octa_ok;
    check(
        ok,
        format!("residuals at t/t+1 {}; octahedron certified: {octa_ok}", notes.join(" ")),
    )
}

fn frame_identity() -> Outcome {
    let start = Instant::now();
    let frame = tensor_frame(5);
    let squared = frame.filter().squared();
    let mut r = rng(4);
    let xs = random_points(&mut r, 50);
    let ys = random_points(&mut r, 50);
    let mut worst = 0.0f64;
    for j in 0..=5 {
        let kernel = FilteredKernel::new(&squared, level_scale(j), 2);
        let level = frame.level(j).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            let sum: f64 = (0..level.len())
                .map(|k| frame.eval_needlet(j, k, x).unwrap() * frame.eval_needlet(j, k, y).unwrap())
                .sum();
            worst = worst.max((sum - kernel.eval(dot(x, y))).abs());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    check(
        worst <= 1e-9 && elapsed < 30.0,
        format!("max deviation {worst:.2e}, {elapsed:.1} s"),
    )
}

fn equivalence() -> Outcome {
    let mut r = rng(5);
    let f2 = WendlandTestFunction::new(2).unwrap();
    let polys: Vec<RandomPolynomial> = (0..5).map(|i| RandomPolynomial::new(&mut r, 2 + i)).collect();
    let points = random_points(&mut r, 100);
    let mut worst = 0.0f64;
    for order in 1..=5 {
        let frame = tensor_frame(order);
        let disc = tensor_rule(discretization_degree(order)).unwrap();
        let mut samples = vec![FunctionSample::new(|x| f2.eval(x), &disc)];
        samples.extend(polys.iter().map(|p| FunctionSample::new(|x| p.eval(x), &disc)));
        let coeffs = analyze_batch(&samples, &frame, Certification::Required).unwrap();
        let needlet = synthesize_batch(&coeffs, &frame, &points).unwrap();
        let kernel = filtered_hyperinterpolation_batch(
            &samples,
            order,
            &frame.filter().frame(),
            &points,
            Certification::Required,
        )
        .unwrap();
        for (a, b) in needlet.iter().flatten().zip(kernel.iter().flatten()) {
            worst = worst.max((a - b).abs());
        }
    }
    check(worst <= 1e-10, format!("max deviation {worst:.2e}"))
}

fn polynomial_reproduction() -> Outcome {
    let mut r = rng(6);
    let points = random_points(&mut r, 100);
    let mut worst = 0.0f64;
    let mut count = 0;
    for order in 1..=5 {
        let frame = tensor_frame(order);
        let disc = tensor_rule(discretization_degree(order)).unwrap();
        let lmax = 1usize << (order - 1);
        let size = (lmax + 1) * (lmax + 1);
        let node_values: Vec<Vec<f64>> = disc.nodes().iter().map(|x| real_harmonics(lmax, x)).collect();
        let samples: Vec<FunctionSample<'_>> = (0..size)
            .map(|i| {
                FunctionSample::from_values(&disc, node_values.iter().map(|v| v[i]).collect()).unwrap()
            })
            .collect();
        let coeffs = analyze_batch(&samples, &frame, Certification::Required).unwrap();
        let approx = synthesize_batch(&coeffs, &frame, &points).unwrap();
        for (p, x) in points.iter().enumerate() {
            let exact = real_harmonics(lmax, x);
            for ell in 0..=lmax {
                for m in -(ell as i64)..=ell as i64 {
                    let i = harmonic_index(ell, m);
                    worst = worst.max((approx[i][p] - exact[i]).abs());
                }
            }
        }
        count += size;
    }
    check(worst <= 1e-10, format!("{count} harmonics, max deviation {worst:.2e}"))
}

fn convergence_rates() -> Outcome {
    let start = Instant::now();
    let args = ConvergenceArgs {
        common: Common { kappa: 5, out: None },
        source: SourceArgs { quad: Some(QuadSpec::Tensor) },
        orders: IndexList(vec![3, 4, 5]),
        wendland: IndexList(vec![0, 1, 2]),
        eval_degree: 301,
        l_trunc: 500,
        timing: false,
    };
    let rows = run_convergence(&args, &mut std::io::sink()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    let mut ok = elapsed < 300.0;
    let mut notes = Vec::new();
    for k in 0..=2u32 {
        let errs: Vec<f64> = rows.iter().filter(|r| r.k == k).map(|r| r.discrete_error).collect();
        let js: Vec<f64> = rows.iter().filter(|r| r.k == k).map(|r| r.order as f64).collect();
        let logs: Vec<f64> = errs.iter().map(|e| e.log2()).collect();
        let s = slope(&js, &logs);
        let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
        let bound = -(f64::from(k) + 1.5);
        ok &= s <= bound && decreasing;
        notes.push(format!("k={k} slope {s:.2} (<= {bound})"));
    }
    check(ok, format!("{}, {elapsed:.1} s", notes.join(", ")))
}

fn semidiscrete_vs_discrete() -> Outcome {
    let f = WendlandTestFunction::new(2).unwrap();
    let table = FourierCoeffTable::compute(2, 500).unwrap();
    let big_h = NeedletFilter::new(5).unwrap().frame();
    let eval = tensor_rule(301).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for order in 2..=5 {
        let semi = table.semidiscrete_l2_error(order as u32, &big_h).unwrap();
        let disc = tensor_rule(discretization_degree(order)).unwrap();
        let sample = FunctionSample::new(|x| f.eval(x), &disc);
        let approx = filtered_hyperinterpolation_batch(
            std::slice::from_ref(&sample),
            order,
            &big_h,
            eval.nodes(),
            Certification::Required,
        )
        .unwrap()
        .pop()
        .unwrap();
        let discrete = discrete_l2_error(&approx, |x| f.eval(x), &eval).unwrap();
        let rel = (discrete - semi).abs() / semi;
        ok &= rel <= 0.2;
        notes.push(format!("J={order} {semi:.3e}/{discrete:.3e} ({:.1}%)", 100.0 * rel));
    }
    check(ok, notes.join(", "))
}

fn level_decay() -> Outcome {
    let f = WendlandTestFunction::new(2).unwrap();
    let frame = tensor_frame(6);
    let disc = tensor_rule(discretization_degree(6)).unwrap();
    let sample = FunctionSample::new(|x| f.eval(x), &disc);
    let points = sphere_needlets::cli::latlon_grid(60, 120);
    let sups: Vec<f64> = (3..=6)
        .map(|j| {
            level_contribution(&sample, &frame, j, &points)
                .unwrap()
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()))
        })
        .collect();
    let ratios: Vec<f64> = sups.windows(2).map(|w| w[0] / w[1]).collect();
    check(
        ratios.iter().all(|r| *r >= 2.0),
        format!(
            "sup U_j for j=3..6: {}; ratios {}",
            sups.iter().map(|s| format!("{s:.2e}")).collect::<Vec<_>>().join(" "),
            ratios.iter().map(|r| format!("{r:.1}")).collect::<Vec<_>>().join(" ")
        ),
    )
}

fn local_refinement() -> Outcome {
    let f = WendlandTestFunction::new(2).unwrap();
    let frame = tensor_frame(6);
    let disc = tensor_rule(discretization_degree(6)).unwrap();
    let sample = FunctionSample::new(|x| f.eval(x), &disc);
    let cap = SphericalCap::new([0.0, 1.0, 0.0], PI / 6.0).unwrap();
    let sub = cap.scaled(0.5).unwrap();
    let points: Vec<Vec3> = sphere_needlets::cli::latlon_grid(90, 180);
    let local = localized_approximate(&sample, &cap, 4, 6, &frame, &points).unwrap();
    let low = low_order_approximation(&sample, frame.filter(), 4, &points);
    let mut sub_local = 0.0f64;
    let mut sub_low = 0.0f64;
    let mut sub_count = 0;
    let mut outside_max = 0.0f64;
    let mut identical = true;
    for (i, x) in points.iter().enumerate() {
        let v = f.eval(x);
        if sub.contains(x) {
            sub_count += 1;
            sub_local = sub_local.max((local[i] - v).abs());
            sub_low = sub_low.max((low[i] - v).abs());
        }
        if outside(&cap, x) {
            identical &= local[i].to_bits() == low[i].to_bits();
            outside_max = outside_max.max((local[i] - v).abs());
        }
    }
    check(
        sub_count > 0 && sub_local < sub_low && identical,
        format!(
            "half-radius cap ({sub_count} points): localized {sub_local:.2e} < low-order {sub_low:.2e}; exterior bit-identical: {identical}; exterior max error {outside_max:.2e}"
        ),
    )
}

fn local_center_fraction() -> Outcome {
    let cap = SphericalCap::new([0.0, 1.0, 0.0], PI / 6.0).unwrap();
    let rule = tensor_rule(needlet_degree(6)).unwrap();
    let fraction = node_fraction(&rule, &cap);
    let area = cap.area_fraction();
    let rel = (fraction - area) / area;
    check(
        rel.abs() <= 0.3,
        format!(
            "level-6 tensor rule (degree {}): {} of {} centres in cap = {:.2}% vs area {:.2}% ({:+.1}%)",
            needlet_degree(6),
            cap.nodes_inside(&rule).len(),
            rule.len(),
            100.0 * fraction,
            100.0 * area,
            100.0 * rel
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("1  filter coefficients", filter_coefficients),
        ("2  partition of unity and telescoping", partition_of_unity),
        ("3  quadrature certification", quadrature_certification),
        ("4  frame identity", frame_identity),
        ("5  analysis-synthesis equals filtered hyperinterpolation", equivalence),
        ("6  polynomial reproduction", polynomial_reproduction),
        ("7  convergence rates", convergence_rates),
        ("8  semidiscrete vs discrete errors", semidiscrete_vs_discrete),
        ("9  level decay", level_decay),
        ("10 local refinement", local_refinement),
        ("10 local refinement, centre-count fraction", local_center_fraction),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into());
                Err(format!("panicked: {msg}"))
            });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail} ({secs:.1} s)"),
            Err(detail) => {
                failures += 1;
                println!("FAIL [{name}] {detail} ({secs:.1} s)");
            }
        }
    }
    println!("{} of {} criteria passed", 11 - failures, 11);
    if failures > 0 {
        std::process::exit(1);
    }
}
