//! Seeded, reproducible sampling of ℍ, 𝕊 and polynomials.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::series::RegularSeries;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction in ℝ⁴ (unit quaternion).
pub fn unit_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    loop {
        let q = Quaternion::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        let n = q.norm();
        if n > 1e-12 {
            return q / n;
        }
    }
}

/// Uniform point of 𝕊.
pub fn imaginary_unit<R: Rng + ?Sized>(rng: &mut R) -> ImaginaryUnit {
    loop {
        let (a, b, c): (f64, f64, f64) = (
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        if let Ok(u) = ImaginaryUnit::new(a, b, c) {
            if a * a + b * b + c * c > 1e-24 {
                return u;
            }
        }
    }
}

/// Uniform point of the open 4-ball `B(center, radius)`.
pub fn in_ball<R: Rng + ?Sized>(rng: &mut R, center: Quaternion, radius: f64) -> Quaternion {
    let dir = unit_quaternion(rng);
    let u: f64 = rng.random();
    center + dir * (radius * u.powf(0.25))
}

/// Quaternion with components uniform in `[-1, 1]`.
pub fn cube_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    let d = Uniform::new_inclusive(-1.0, 1.0).expect("valid range");
    Quaternion::new(d.sample(rng), d.sample(rng), d.sample(rng), d.sample(rng))
}

/// Polynomial of exact degree `degree` with coefficients uniform in `[-1, 1]⁴`.
pub fn random_polynomial<R: Rng + ?Sized>(rng: &mut R, degree: usize) -> RegularSeries {
    let mut coeffs: Vec<Quaternion> = (0..=degree).map(|_| cube_quaternion(rng)).collect();
    if coeffs[degree].norm() < 1e-3 {
        coeffs[degree] = Quaternion::ONE;
    }
    RegularSeries::polynomial(coeffs)
}

/// `n` nearly evenly spread points of 𝕊 (golden-angle spiral).
pub fn fibonacci_sphere(n: usize) -> Vec<ImaginaryUnit> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let theta = golden * k as f64;
            ImaginaryUnit::new(r * theta.cos(), r * theta.sin(), z).expect("spiral points are unit")
        })
        .collect()
}
