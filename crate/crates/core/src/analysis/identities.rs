//! Seeded pointwise checks of the algebraic identities of the regular product.

use serde::{Deserialize, Serialize};

use crate::config::EPS_EQ;
use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::sampling::{in_ball, rng};
use crate::series::{product_eval_identity, RegularSeries};
use crate::spheres::{spherical_split, Sphere2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentitySuiteOptions {
    /// Sample radius; `None` uses 1, or 0.9 times the smallest trust radius.
    pub radius: Option<f64>,
    pub tolerance: f64,
    /// Points with `|f^s(q)| < guard_band · scale(f^s, |q|)` are skipped.
    pub guard_band: f64,
    /// Order of the reciprocal series checked against `f * f^{-*} = 1`.
    pub reciprocal_order: usize,
}

impl Default for IdentitySuiteOptions {
    fn default() -> Self {
        Self {
            radius: None,
            tolerance: EPS_EQ,
            guard_band: 1e-6,
            reciprocal_order: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub checked: usize,
    pub skipped: usize,
    /// Largest `|lhs - rhs| / (1 + |lhs|)`; the affine law is measured against `scale(f, |q|)`.
    pub max_rel_dev: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub seed: u64,
    pub points: usize,
    pub radius: f64,
    pub tolerance: f64,
    pub identities: Vec<IdentityCheck>,
    pub all_passed: bool,
}

struct Tally {
    name: &'static str,
    checked: usize,
    skipped: usize,
    max: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            skipped: 0,
            max: 0.0,
        }
    }

    fn record(&mut self, dev: f64) {
        self.checked += 1;
        // NaN must not hide
        self.max = if dev.is_nan() {
            f64::INFINITY
        } else {
            self.max.max(dev)
        };
    }

    fn pair(&mut self, r: Result<(Quaternion, Quaternion)>) {
        match r {
            Ok((l, rhs)) => self.record((l - rhs).norm() / (1.0 + l.norm())),
            Err(_) => self.skipped += 1,
        }
    }

    fn finish(self, tol: f64) -> IdentityCheck {
        IdentityCheck {
            name: self.name.into(),
            checked: self.checked,
            skipped: self.skipped,
            max_rel_dev: self.max,
            passed: self.max <= tol,
        }
    }
}

/// Identity suite with default options.
pub fn identity_suite(
    f: &RegularSeries,
    g: &RegularSeries,
    n_points: usize,
    seed: u64,
) -> Result<IdentityReport> {
    identity_suite_with(f, g, n_points, seed, IdentitySuiteOptions::default())
}

/// Checks, at `n_points` seeded points of a ball:
///
/// * `product-evaluation`: `(f*g)(q) = f(q) g(f(q)^{-1} q f(q))`;
/// * `reciprocal-evaluation`: `f^{-*}(q) = f(T_f(q))^{-1}`;
/// * `transform-inverse`: `T_{f^c}(T_f(q)) = q`;
/// * `spherical-affine`: `f(x + yI) = b + Ic`;
///
/// and once per call, coefficientwise:
///
/// * `conjugate-of-product`: `(f*g)^c = g^c * f^c`;
/// * `reciprocal-series`: `f * f^{-*} = f^{-*} * f = 1` up to the truncation order
///   (skipped when `f(0) = 0`).
pub fn identity_suite_with(
    f: &RegularSeries,
    g: &RegularSeries,
    n_points: usize,
    seed: u64,
    opts: IdentitySuiteOptions,
) -> Result<IdentityReport> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let trust = [f.trust_radius(), g.trust_radius()]
        .into_iter()
        .flatten()
        .reduce(f64::min);
    let radius = match (opts.radius, trust) {
        (Some(r), Some(t)) if r >= t => {
            return Err(Error::RegionOutsideTrust {
                reach: r,
                trust_radius: t,
            })
        }
        (Some(r), _) if !(r.is_finite() && r > 0.0) => {
            return Err(Error::InvalidInput(format!(
                "sample radius must be positive and finite, got {r}"
            )))
        }
        (Some(r), _) => r,
        (None, Some(t)) => 0.9 * t,
        (None, None) => 1.0,
    };
    let prepared = f.prepare()?;

    let mut product = Tally::new("product-evaluation");
    let mut reciprocal = Tally::new("reciprocal-evaluation");
    let mut inverse = Tally::new("transform-inverse");
    let mut affine = Tally::new("spherical-affine");

    let mut r = rng(seed);
    for _ in 0..n_points {
        let q = in_ball(&mut r, Quaternion::ZERO, radius);

        let scale = f.scale(q.norm());
        let split = spherical_split(f, Sphere2::through(q));
        let value = q
            .slice_decompose()
            .unit
            .map_or(split.b, |u| split.value_at(u));
        affine.record(if scale > 0.0 {
            (value - f.evaluate(q)).norm() / scale
        } else {
            0.0
        });

        let sym = prepared.sym.evaluate(q).norm();
        if sym < opts.guard_band * prepared.sym.scale(q.norm()) {
            product.skipped += 1;
            reciprocal.skipped += 1;
            inverse.skipped += 1;
            continue;
        }
        product.pair(product_eval_identity(f, g, q));
        reciprocal.pair(prepared.reciprocal_at(q).and_then(|lhs| {
            let rhs = f.evaluate(prepared.transform_t(q)?).inverse()?;
            Ok((lhs, rhs))
        }));
        inverse.pair(
            prepared
                .transform_t(q)
                .and_then(|t| prepared.transform_t_conj(t))
                .map(|back| (q, back)),
        );
    }

    let mut conj = Tally::new("conjugate-of-product");
    let lhs = f.regular_product(g).regular_conjugate();
    let rhs = g
        .regular_conjugate()
        .regular_product(&f.regular_conjugate());
    conj.record(coefficient_deviation(
        lhs.coeffs(),
        rhs.coeffs(),
        f.coeffs(),
        g.coeffs(),
    ));

    let mut series = Tally::new("reciprocal-series");
    match f.reciprocal_series(opts.reciprocal_order) {
        Ok(inv) => {
            let one = [Quaternion::ONE];
            for prod in [f.regular_product(&inv), inv.regular_product(f)] {
                series.record(coefficient_deviation(
                    prod.coeffs(),
                    &one,
                    f.coeffs(),
                    inv.coeffs(),
                ));
            }
        }
        Err(Error::ReciprocalUndefined) => series.skipped += 1,
        Err(e) => return Err(e),
    }

    let tol = opts.tolerance;
    let identities: Vec<IdentityCheck> = [product, reciprocal, inverse, affine, conj, series]
        .into_iter()
        .map(|t| t.finish(tol))
        .collect();
    let all_passed = identities.iter().all(|c| c.passed);
    Ok(IdentityReport {
        seed,
        points: n_points,
        radius,
        tolerance: tol,
        identities,
        all_passed,
    })
}

/// `max_n |lhs_n - rhs_n| / (1 + Σ_k |a_k||b_{n-k}|)` over the common truncation.
fn coefficient_deviation(
    lhs: &[Quaternion],
    rhs: &[Quaternion],
    a: &[Quaternion],
    b: &[Quaternion],
) -> f64 {
    let len = lhs.len().max(rhs.len());
    (0..len)
        .map(|n| {
            let l = lhs.get(n).copied().unwrap_or(Quaternion::ZERO);
            let r = rhs.get(n).copied().unwrap_or(Quaternion::ZERO);
            let mass: f64 = (0..=n)
                .filter_map(|k| Some(a.get(k)?.norm() * b.get(n - k)?.norm()))
                .sum();
            (l - r).norm() / (1.0 + mass)
        })
        .fold(0.0, f64::max)
}
