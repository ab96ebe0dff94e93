#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sphere_needlets::special::real_harmonics;
use sphere_needlets::Vec3;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Uniform point on the sphere (Archimedes: z uniform, azimuth uniform).
pub fn random_point<R: Rng>(rng: &mut R) -> Vec3 {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

pub fn random_points<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec3> {
    (0..n).map(|_| random_point(rng)).collect()
}

/// Random expansion in real harmonics of degree at most `degree`.
#[derive(Clone, Debug)]
pub struct RandomPolynomial {
    pub degree: usize,
    pub coeffs: Vec<f64>,
}

impl RandomPolynomial {
    pub fn new<R: Rng>(rng: &mut R, degree: usize) -> Self {
        let coeffs = (0..(degree + 1) * (degree + 1))
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        Self { degree, coeffs }
    }

    pub fn eval(&self, x: &Vec3) -> f64 {
        real_harmonics(self.degree, x)
            .iter()
            .zip(&self.coeffs)
            .map(|(y, c)| y * c)
            .sum()
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
