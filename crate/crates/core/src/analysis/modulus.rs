//! Maximum and minimum modulus checks on a ball `B(0, R)`.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::descent::{
    ascend_modulus, least_squares, numeric_gradient, AscentOutcome, DescentOptions, Outcome,
};
use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::sampling::{in_ball, rng};
use crate::series::RegularSeries;

use super::{is_grid_local_max, is_grid_local_min, require_trusted, Verdict};

/// Starting points taken from the extreme end of the sample list.
const EXTREME_STARTS: usize = 32;
/// Upper bound on refinement runs per check.
const MAX_RUNS: usize = 256;
const ASCENT_SHELL: f64 = 1e-3;
const ASCENT_ITERATIONS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulusPoint {
    pub point: Quaternion,
    pub modulus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxModulusReport {
    pub verdict: Verdict,
    pub radius: f64,
    pub samples: usize,
    pub ascents: usize,
    pub reached_boundary: usize,
    /// Interior stalls that are not local maxima (saddles, flat spots).
    pub saddles: usize,
    pub unfinished: usize,
    pub interior_maxima: Vec<ModulusPoint>,
    pub best_boundary: Option<ModulusPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteriorMinimum {
    pub point: Quaternion,
    pub modulus: f64,
    /// `|f| / scale(f, |q|)`.
    pub relative_modulus: f64,
    /// `|∇|f|²| / scale(f, |q|)²`.
    pub relative_gradient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinModulusReport {
    pub verdict: Verdict,
    pub radius: f64,
    pub samples: usize,
    pub descents: usize,
    pub exited: usize,
    /// Descents that stopped at a point the local grid test does not confirm as a minimum.
    pub unconfirmed: usize,
    pub minima: Vec<InteriorMinimum>,
    pub violations: Vec<InteriorMinimum>,
}

fn validate(f: &RegularSeries, radius: f64, n_samples: usize) -> Result<()> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidInput(format!(
            "ball radius must be positive and finite, got {radius}"
        )));
    }
    if n_samples == 0 {
        return Err(Error::InvalidInput(
            "at least one sample is required".into(),
        ));
    }
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    require_trusted(f, radius)
}

/// Samples with `|f|`, in draw order.
fn sample_ball(f: &RegularSeries, radius: f64, n: usize, seed: u64) -> Vec<ModulusPoint> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let point = in_ball(&mut r, Quaternion::ZERO, radius);
            ModulusPoint {
                point,
                modulus: f.evaluate(point).norm(),
            }
        })
        .collect()
}

/// Discrete local extrema (by `keep`) followed by the extreme samples, best first, deduplicated.
fn starting_points(
    mut samples: Vec<ModulusPoint>,
    keep: impl Fn(&ModulusPoint) -> bool,
    descending: bool,
) -> Vec<ModulusPoint> {
    let order = |a: &ModulusPoint, b: &ModulusPoint| {
        let o = a.modulus.total_cmp(&b.modulus);
        if descending {
            o.reverse()
        } else {
            o
        }
    };
    samples.sort_by(order);
    let mut starts: Vec<ModulusPoint> = samples.iter().copied().filter(|s| keep(s)).collect();
    starts.extend(samples.iter().take(EXTREME_STARTS).copied());
    starts.sort_by(order);
    starts.dedup_by(|a, b| a.point == b.point);
    starts.truncate(MAX_RUNS);
    starts
}

/// Searches for interior local maxima of `|f|` on `B(0, radius)`.
///
/// Non-constant regular functions have none; a confirmed one is a violation.
pub fn check_max_modulus(
    f: &RegularSeries,
    radius: f64,
    n_samples: usize,
    seed: u64,
) -> Result<MaxModulusReport> {
    validate(f, radius, n_samples)?;
    let mut report = MaxModulusReport {
        verdict: Verdict::Pass,
        radius,
        samples: n_samples,
        ascents: 0,
        reached_boundary: 0,
        saddles: 0,
        unfinished: 0,
        interior_maxima: Vec::new(),
        best_boundary: None,
    };
    if f.is_constant() {
        report.verdict = Verdict::Constant;
        return Ok(report);
    }

    let g = |q: Quaternion| f.evaluate(q).norm();
    let h = 0.05 * radius;
    let starts = starting_points(
        sample_ball(f, radius, n_samples, seed),
        |s| is_grid_local_max(&g, s.point, s.modulus, h, 0.0),
        true,
    );
    for s in starts {
        report.ascents += 1;
        let a = ascend_modulus(
            g,
            Quaternion::ZERO,
            radius,
            ASCENT_SHELL,
            s.point,
            ASCENT_ITERATIONS,
        );
        let found = ModulusPoint {
            point: a.point,
            modulus: a.value,
        };
        match a.outcome {
            AscentOutcome::ReachedBoundary => {
                report.reached_boundary += 1;
                if report
                    .best_boundary
                    .is_none_or(|b| b.modulus < found.modulus)
                {
                    report.best_boundary = Some(found);
                }
            }
            AscentOutcome::InteriorStall => {
                let slack = 1e-13 * f.scale(a.point.norm());
                let h = 1e-4 * radius;
                if is_grid_local_max(&g, a.point, a.value, h, slack) {
                    report.interior_maxima.push(found);
                } else {
                    report.saddles += 1;
                }
            }
            AscentOutcome::MaxIterations => report.unfinished += 1,
        }
    }
    report.verdict = if !report.interior_maxima.is_empty() {
        Verdict::Violation
    } else if report.unfinished > 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(report)
}

/// Minimum modulus check with default tolerances.
pub fn check_min_modulus(
    f: &RegularSeries,
    radius: f64,
    n_samples: usize,
    seed: u64,
) -> Result<MinModulusReport> {
    check_min_modulus_with(f, radius, n_samples, seed, &Config::default())
}

/// Searches for interior local minima of `|f|` on `B(0, radius)` and checks that
/// each one is a zero: `|f| ≤ min_modulus_tol · scale` with a vanishing gradient of `|f|²`.
pub fn check_min_modulus_with(
    f: &RegularSeries,
    radius: f64,
    n_samples: usize,
    seed: u64,
    cfg: &Config,
) -> Result<MinModulusReport> {
    validate(f, radius, n_samples)?;
    let mut report = MinModulusReport {
        verdict: Verdict::Pass,
        radius,
        samples: n_samples,
        descents: 0,
        exited: 0,
        unconfirmed: 0,
        minima: Vec::new(),
        violations: Vec::new(),
    };
    if f.is_constant() {
        report.verdict = Verdict::Constant;
        return Ok(report);
    }

    let g = |q: Quaternion| f.evaluate(q).norm();
    let h = 0.05 * radius;
    let starts = starting_points(
        sample_ball(f, radius, n_samples, seed),
        |s| is_grid_local_min(&g, s.point, s.modulus, h, 0.0),
        false,
    );
    let opts = DescentOptions {
        target: 1e-14 * f.scale(radius),
        max_iterations: 200,
    };
    for s in starts {
        report.descents += 1;
        let d = least_squares(|q| f.evaluate(q), |q| q.norm() < radius, s.point, opts);
        if d.outcome == Outcome::Exited {
            report.exited += 1;
            continue;
        }
        let p = d.point;
        let scale = f.scale(p.norm());
        if !is_grid_local_min(&g, p, d.residual, 1e-4 * radius, 1e-13 * scale) {
            report.unconfirmed += 1;
            continue;
        }
        let gradient = numeric_gradient(|q| f.evaluate(q).norm_sqr(), p).norm();
        let m = InteriorMinimum {
            point: p,
            modulus: d.residual,
            relative_modulus: if scale > 0.0 { d.residual / scale } else { 0.0 },
            relative_gradient: if scale > 0.0 {
                gradient / (scale * scale)
            } else {
                0.0
            },
        };
        if report
            .minima
            .iter()
            .any(|o| (o.point - p).norm() <= 1e-6 * (1.0 + p.norm()))
        {
            continue;
        }
        if m.relative_modulus > cfg.min_modulus_tol || m.relative_gradient >= 1e-5 {
            report.violations.push(m);
        }
        report.minima.push(m);
    }
    report.verdict = if report.violations.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Violation
    };
    Ok(report)
}
