//! Open mapping probes: does `f(U)` contain a neighbourhood of `f(center)`?

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::descent::{least_squares, DescentOptions, Outcome};
use crate::error::{Error, Result};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::sampling::{imaginary_unit, in_ball, rng, SeededRng};
use crate::series::RegularSeries;
use crate::spheres::Sphere2;

use super::{require_trusted, Verdict};

/// Random region points drawn per probe; the best `RANDOM_STARTS` by residual seed descents.
const CANDIDATE_POOL: usize = 64;
/// Random starts per probe, besides the region's center point.
const RANDOM_STARTS: usize = 8;
const MAX_REPORTED_FAILURES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Region {
    Ball {
        center: Quaternion,
        radius: f64,
    },
    /// Points within `radius` of the sphere `x + y𝕊`: `{q : |q - (x + yI)| < radius for some I}`.
    Circular {
        sphere: Sphere2,
        radius: f64,
    },
}

impl Region {
    pub fn radius(&self) -> f64 {
        match *self {
            Self::Ball { radius, .. } | Self::Circular { radius, .. } => radius,
        }
    }

    fn validate(&self) -> Result<()> {
        let r = self.radius();
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidInput(format!(
                "region radius must be positive and finite, got {r}"
            )));
        }
        Ok(())
    }

    pub fn contains(&self, q: Quaternion) -> bool {
        match *self {
            Self::Ball { center, radius } => (q - center).norm() < radius,
            Self::Circular { sphere, radius } => {
                q.distance_to_sphere(sphere.x(), sphere.y()) < radius
            }
        }
    }

    /// Largest `|q|` over the region.
    pub fn reach(&self) -> f64 {
        match *self {
            Self::Ball { center, radius } => center.norm() + radius,
            Self::Circular { sphere, radius } => sphere.radius() + radius,
        }
    }

    /// Center of a ball; `x + y·i` for a circular region.
    pub fn center_point(&self) -> Quaternion {
        match *self {
            Self::Ball { center, .. } => center,
            Self::Circular { sphere, .. } => sphere.point(ImaginaryUnit::I),
        }
    }

    fn sample(&self, r: &mut SeededRng) -> Quaternion {
        match *self {
            Self::Ball { center, radius } => in_ball(r, center, radius),
            Self::Circular { sphere, radius } => {
                // uniform offset in the (x, y) disc, uniform unit
                let rho = radius * r.random::<f64>().sqrt();
                let theta = std::f64::consts::TAU * r.random::<f64>();
                let x = sphere.x() + rho * theta.cos();
                let y = sphere.y() + rho * theta.sin();
                Quaternion::from_slice(x, y, imaginary_unit(r))
            }
        }
    }
}

/// Where the probe targets `p` are placed around `p₀ = f(center)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProbeTargets {
    /// Uniform in the ball `B(p₀, ε)`.
    Ball,
    /// `p₀ + δ·direction` with `δ` uniform in `(0, ε]`; `direction` is normalized.
    Segment { direction: Quaternion },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverageVerdict {
    Covered,
    NotCovered,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeFailure {
    pub target: Quaternion,
    pub best_residual: f64,
    /// Some attempt ran out of iterations inside the region.
    pub unfinished: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub target_center: Quaternion,
    pub epsilon: f64,
    pub probes: usize,
    pub solved: usize,
    /// Largest `|f(q) - p|` over solved probes.
    pub max_residual: f64,
    pub verdict: CoverageVerdict,
    /// The first unsolved probes, in probe order.
    pub failures: Vec<ProbeFailure>,
}

/// Per-probe generator: probe `k` does not depend on `ε` or on the other probes.
fn probe_rng(seed: u64, k: usize) -> SeededRng {
    let mut r = rng(seed);
    r.set_stream(k as u64 + 1);
    r
}

/// Open mapping probe with default tolerances.
pub fn open_mapping_probe(
    f: &RegularSeries,
    region: Region,
    epsilon: f64,
    n_probes: usize,
    targets: ProbeTargets,
    seed: u64,
) -> Result<CoverageReport> {
    open_mapping_probe_with(
        f,
        region,
        epsilon,
        n_probes,
        targets,
        seed,
        &Config::default(),
    )
}

/// Tries to solve `f(q) = p` inside `region` for `n_probes` seeded targets `p`
/// near `f(center)`.
///
/// `covered` when every probe is solved to `probe_residual_tol · scale(f, reach)`;
/// `not-covered` when some probe's every attempt left the region or stalled above
/// tolerance; `inconclusive` otherwise.
pub fn open_mapping_probe_with(
    f: &RegularSeries,
    region: Region,
    epsilon: f64,
    n_probes: usize,
    targets: ProbeTargets,
    seed: u64,
    cfg: &Config,
) -> Result<CoverageReport> {
    region.validate()?;
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidInput(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    if n_probes == 0 {
        return Err(Error::InvalidInput("at least one probe is required".into()));
    }
    let direction = match targets {
        ProbeTargets::Ball => None,
        ProbeTargets::Segment { direction } => {
            let n = direction.norm();
            if n.is_nan() || n <= 0.0 {
                return Err(Error::InvalidInput(
                    "probe direction must be nonzero".into(),
                ));
            }
            Some(direction / n)
        }
    };
    require_trusted(f, region.reach())?;

    let center = region.center_point();
    let p0 = f.evaluate(center);
    let tol = cfg.probe_residual_tol * f.scale(region.reach());
    // descend well past the tolerance so reported residuals are tight
    let opts = DescentOptions {
        target: 1e-6 * tol,
        max_iterations: 500,
    };

    let mut report = CoverageReport {
        target_center: p0,
        epsilon,
        probes: n_probes,
        solved: 0,
        max_residual: 0.0,
        verdict: CoverageVerdict::Covered,
        failures: Vec::new(),
    };
    let mut any_unfinished = false;
    let mut any_refuted = false;
    for k in 0..n_probes {
        let mut r = probe_rng(seed, k);
        let offset = match direction {
            None => in_ball(&mut r, Quaternion::ZERO, 1.0),
            Some(d) => d * (1.0 - r.random::<f64>()),
        };
        let target = p0 + offset * epsilon;
        let mut pool: Vec<(f64, Quaternion)> = (0..CANDIDATE_POOL)
            .map(|_| {
                let q = region.sample(&mut r);
                ((f.evaluate(q) - target).norm(), q)
            })
            .collect();
        pool.sort_by(|a, b| a.0.total_cmp(&b.0));
        let starts: Vec<Quaternion> = std::iter::once(center)
            .chain(pool.iter().take(RANDOM_STARTS).map(|&(_, q)| q))
            .collect();

        let mut best = f64::INFINITY;
        let mut unfinished = false;
        let mut solved = None;
        for start in starts {
            let d = least_squares(
                |q| f.evaluate(q) - target,
                |q| region.contains(q),
                start,
                opts,
            );
            let inside = d.outcome != Outcome::Exited && region.contains(d.point);
            if inside && d.residual <= tol {
                solved = Some(d.residual);
                break;
            }
            if inside {
                best = best.min(d.residual);
                unfinished |= d.outcome == Outcome::MaxIterations;
            }
        }
        match solved {
            Some(res) => {
                report.solved += 1;
                report.max_residual = report.max_residual.max(res);
            }
            None => {
                any_unfinished |= unfinished;
                any_refuted |= !unfinished;
                if report.failures.len() < MAX_REPORTED_FAILURES {
                    report.failures.push(ProbeFailure {
                        target,
                        best_residual: best,
                        unfinished,
                    });
                }
            }
        }
    }
    report.verdict = if report.solved == n_probes {
        CoverageVerdict::Covered
    } else if any_refuted {
        CoverageVerdict::NotCovered
    } else {
        debug_assert!(any_unfinished);
        CoverageVerdict::Inconclusive
    };
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub verdict: Verdict,
    pub unit: ImaginaryUnit,
    pub orthogonal: ImaginaryUnit,
    /// `|f(I)|` for `f = q² + 1`.
    pub value_at_unit: f64,
    pub samples: usize,
    /// Deterministic samples `bI`, `b ∈ [1/2, 3/2]`, whose images are real.
    pub axis_samples: usize,
    /// Samples whose image lies within the tolerance of `L_K = span(1, K)`.
    pub near_line: usize,
    /// Samples whose image is near `L_K` with a `K`-component above the tolerance.
    pub violations: usize,
    /// Largest `K`-component of an image near `L_K`.
    pub max_k_component: f64,
    /// Largest `|⟨f(q), K⟩| / dist(f(q), L_K)` over all samples.
    pub max_k_ratio: f64,
}

const WITNESS_TOL: f64 = 1e-9;
const AXIS_SAMPLES: usize = 101;

/// Checks that `f(q) = q² + 1` maps `B(I, 1/2)` into a set that meets the plane
/// `L_K = span(1, K)` (`K ⊥ I`) only on the real axis, so `f(B(I, 1/2))` contains
/// no neighbourhood of `f(I) = 0`.
pub fn counterexample_witness(
    unit: ImaginaryUnit,
    orthogonal: ImaginaryUnit,
    n_samples: usize,
    seed: u64,
) -> Result<WitnessReport> {
    let dot = unit.dot(orthogonal);
    if dot.abs() > WITNESS_TOL {
        return Err(Error::UnitsNotOrthogonal { dot });
    }
    let f = RegularSeries::from_real(&[1.0, 0.0, 1.0]);
    let i = unit.as_quaternion();
    let k = orthogonal.as_quaternion();
    let value_at_unit = f.evaluate(i).norm();

    let mut r = rng(seed);
    let axis = (0..AXIS_SAMPLES).map(|n| i * (0.5 + n as f64 / (AXIS_SAMPLES - 1) as f64));
    let random: Vec<Quaternion> = (0..n_samples).map(|_| in_ball(&mut r, i, 0.5)).collect();

    let mut report = WitnessReport {
        verdict: Verdict::Pass,
        unit,
        orthogonal,
        value_at_unit,
        samples: n_samples + AXIS_SAMPLES,
        axis_samples: AXIS_SAMPLES,
        near_line: 0,
        violations: 0,
        max_k_component: 0.0,
        max_k_ratio: 0.0,
    };
    for q in axis.chain(random) {
        let v = f.evaluate(q).imag();
        let along = v.dot(k);
        let off_line = (v - k * along).norm();
        if off_line <= WITNESS_TOL {
            report.near_line += 1;
            report.max_k_component = report.max_k_component.max(along.abs());
            if along.abs() > WITNESS_TOL {
                report.violations += 1;
            }
        }
        if off_line > 0.0 {
            report.max_k_ratio = report.max_k_ratio.max(along.abs() / off_line);
        }
    }
    report.verdict = if value_at_unit < 1e-12 && report.violations == 0 {
        Verdict::Pass
    } else {
        Verdict::Violation
    };
    Ok(report)
}
