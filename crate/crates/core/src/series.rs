//! Regular functions as power series `f(q) = Σ qⁿ aₙ` with coefficients on the right.
//!
//! Polynomials are stored exactly (trailing zeros trimmed). Truncated series
//! keep `order + 1` coefficients and every result derived from them is only
//! claimed modulo `q^(order+1)`.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::config::EPS_EQ;
use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::roots;

pub const FORMAT_VERSION: u32 = 1;

/// Relative imaginary magnitude above which a symmetrization coefficient is rejected.
const SYMMETRIZATION_REAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Polynomial,
    Truncated { order: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionDocument", into = "FunctionDocument")]
pub struct RegularSeries {
    coeffs: Vec<Quaternion>,
    flavor: Flavor,
    /// `None` means unbounded.
    trust_radius: Option<f64>,
}

impl RegularSeries {
    /// Exact polynomial `Σ qⁿ coeffs[n]`; trailing zero coefficients are dropped.
    pub fn polynomial(coeffs: impl Into<Vec<Quaternion>>) -> Self {
        let mut coeffs = coeffs.into();
        while coeffs.last() == Some(&Quaternion::ZERO) {
            coeffs.pop();
        }
        Self {
            coeffs,
            flavor: Flavor::Polynomial,
            trust_radius: None,
        }
    }

    /// Series known modulo `q^(order+1)`. Extra coefficients are discarded, missing ones are zero.
    pub fn truncated(coeffs: impl Into<Vec<Quaternion>>, order: usize) -> Self {
        let mut coeffs = coeffs.into();
        coeffs.resize(order + 1, Quaternion::ZERO);
        Self {
            coeffs,
            flavor: Flavor::Truncated { order },
            trust_radius: None,
        }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::polynomial(
            coeffs
                .iter()
                .map(|&c| Quaternion::real(c))
                .collect::<Vec<_>>(),
        )
    }

    pub fn constant(a: Quaternion) -> Self {
        Self::polynomial(vec![a])
    }

    pub fn one() -> Self {
        Self::constant(Quaternion::ONE)
    }

    /// `Σ_{n≤order} qⁿ`, the truncation of `(1 - q)^{-1}`, trusted on the unit ball.
    pub fn geometric(order: usize) -> Self {
        Self::truncated(vec![Quaternion::ONE; order + 1], order).with_trust_radius(Some(1.0))
    }

    pub fn with_trust_radius(mut self, radius: Option<f64>) -> Self {
        self.trust_radius = radius;
        self
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn order(&self) -> Option<usize> {
        match self.flavor {
            Flavor::Polynomial => None,
            Flavor::Truncated { order } => Some(order),
        }
    }

    pub fn is_truncated(&self) -> bool {
        matches!(self.flavor, Flavor::Truncated { .. })
    }

    pub fn trust_radius(&self) -> Option<f64> {
        self.trust_radius
    }

    /// Index of the highest non-zero coefficient; `None` for the zero function.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&a| a != Quaternion::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Constant functions (including zero).
    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_real())
    }

    /// Real parts of the coefficients, if all of them are real.
    pub fn real_coefficients(&self) -> Option<Vec<f64>> {
        self.has_real_coefficients()
            .then(|| self.coeffs.iter().map(|a| a.w).collect())
    }

    /// `Σ |aₙ| rⁿ`, the yardstick for every "is this zero?" decision at radius `r`.
    pub fn scale(&self, r: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * r + a.norm())
    }

    /// `a₀ + q(a₁ + q(a₂ + …))`.
    pub fn evaluate(&self, q: Quaternion) -> Quaternion {
        if let (Flavor::Truncated { .. }, Some(r)) = (self.flavor, self.trust_radius) {
            if q.norm() >= r {
                warn!(
                    "evaluating truncated series at |q| = {} outside trust radius {r}",
                    q.norm()
                );
            }
        }
        self.coeffs
            .iter()
            .rev()
            .fold(Quaternion::ZERO, |acc, &a| a + q * acc)
    }

    /// `c_n = Σ_k a_k b_{n-k}`, with `a_k` on the left.
    pub fn regular_product(&self, other: &Self) -> Self {
        let flavor = match (self.flavor, other.flavor) {
            (Flavor::Polynomial, Flavor::Polynomial) => Flavor::Polynomial,
            (Flavor::Truncated { order }, Flavor::Polynomial)
            | (Flavor::Polynomial, Flavor::Truncated { order }) => Flavor::Truncated { order },
            (Flavor::Truncated { order: a }, Flavor::Truncated { order: b }) => {
                Flavor::Truncated { order: a.min(b) }
            }
        };
        let trust_radius = match (self.trust_radius, other.trust_radius) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let len = match flavor {
            Flavor::Polynomial if self.coeffs.is_empty() || other.coeffs.is_empty() => 0,
            Flavor::Polynomial => self.coeffs.len() + other.coeffs.len() - 1,
            Flavor::Truncated { order } => order + 1,
        };
        let coeffs = (0..len)
            .map(|n| {
                (0..self.coeffs.len().min(n + 1))
                    .filter(|&k| n - k < other.coeffs.len())
                    .fold(Quaternion::ZERO, |acc, k| {
                        acc + self.coeffs[k] * other.coeffs[n - k]
                    })
            })
            .collect::<Vec<_>>();
        let mut out = match flavor {
            Flavor::Polynomial => Self::polynomial(coeffs),
            Flavor::Truncated { order } => Self::truncated(coeffs, order),
        };
        out.trust_radius = trust_radius;
        out
    }

    /// `f^c(q) = Σ qⁿ āₙ`.
    pub fn regular_conjugate(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.conj()).collect(),
            flavor: self.flavor,
            trust_radius: self.trust_radius,
        }
    }

    /// `f^s = f * f^c`, returned with exactly real coefficients.
    pub fn symmetrization(&self) -> Result<Self> {
        let mut s = self.regular_product(&self.regular_conjugate());
        for (n, c) in s.coeffs.iter_mut().enumerate() {
            let size: f64 = (0..=n)
                .filter(|&k| k < self.coeffs.len() && n - k < self.coeffs.len())
                .map(|k| self.coeffs[k].norm() * self.coeffs[n - k].norm())
                .sum();
            let imag = c.imag_norm();
            if imag > SYMMETRIZATION_REAL_TOL * size {
                return Err(Error::SymmetrizationNotReal {
                    index: n,
                    magnitude: imag / size,
                });
            }
            *c = Quaternion::real(c.w);
        }
        if s.flavor == Flavor::Polynomial {
            s = Self::polynomial(s.coeffs).with_trust_radius(s.trust_radius);
        }
        Ok(s)
    }

    pub fn prepare(&self) -> Result<PreparedSeries> {
        PreparedSeries::new(self.clone())
    }

    /// `f^{-*}(q) = f^s(q)^{-1} f^c(q)`.
    pub fn reciprocal_at(&self, q: Quaternion) -> Result<Quaternion> {
        self.prepare()?.reciprocal_at(q)
    }

    /// `T_f(q) = f^c(q)^{-1} q f^c(q)`.
    pub fn transform_t(&self, q: Quaternion) -> Result<Quaternion> {
        self.prepare()?.transform_t(q)
    }

    /// Truncated series of `f^{-*}` to order `order`: the real series `1/f^s`
    /// (commutative recursive inversion) multiplied by `f^c`.
    pub fn reciprocal_series(&self, order: usize) -> Result<Self> {
        let a0 = self.coeffs.first().copied().unwrap_or(Quaternion::ZERO);
        if a0.norm() <= EPS_EQ {
            return Err(Error::ReciprocalUndefined);
        }
        let sym = self.symmetrization()?;
        let s: Vec<f64> = (0..=order)
            .map(|n| sym.coeffs.get(n).map_or(0.0, |c| c.w))
            .collect();
        let inv = invert_real_series(&s);
        let mut out = Self::truncated(
            inv.iter().map(|&r| Quaternion::real(r)).collect::<Vec<_>>(),
            order,
        )
        .regular_product(&Self::truncated(self.regular_conjugate().coeffs, order));
        out.flavor = Flavor::Truncated { order };
        out.trust_radius = reciprocal_trust_radius(&sym, self.trust_radius);
        Ok(out)
    }
}

/// `r` with `(Σ sₙ qⁿ)(Σ rₙ qⁿ) ≡ 1` modulo `q^(len)`; requires `s[0] != 0`.
fn invert_real_series(s: &[f64]) -> Vec<f64> {
    let mut r = vec![0.0; s.len()];
    r[0] = 1.0 / s[0];
    for n in 1..s.len() {
        let acc: f64 = (1..=n).map(|k| s[k] * r[n - k]).sum();
        r[n] = -acc / s[0];
    }
    r
}

/// Distance from 0 to the nearest root sphere of `f^s`, capped by the operand trust radius.
fn reciprocal_trust_radius(sym: &RegularSeries, operand: Option<f64>) -> Option<f64> {
    let Some(coeffs) = sym.real_coefficients() else {
        return operand;
    };
    let Ok(found) = roots::polynomial_roots(&coeffs) else {
        return operand;
    };
    let nearest = found
        .iter()
        .map(|z| z.norm())
        .filter(|&r| operand.is_none_or(|t| r < t))
        .fold(f64::INFINITY, f64::min);
    match (nearest.is_finite(), operand) {
        (true, _) => Some(nearest),
        (false, t) => t,
    }
}

/// `f` together with `f^c` and `f^s`, for repeated pointwise reciprocal work.
#[derive(Debug, Clone)]
pub struct PreparedSeries {
    pub f: RegularSeries,
    pub conj: RegularSeries,
    pub sym: RegularSeries,
}

impl PreparedSeries {
    pub fn new(f: RegularSeries) -> Result<Self> {
        let conj = f.regular_conjugate();
        let sym = f.symmetrization()?;
        Ok(Self { f, conj, sym })
    }

    /// `f^s(q)` checked against `EPS_EQ · scale(f^s, |q|)`.
    pub fn symmetrization_off_zero_set(&self, q: Quaternion) -> Result<Quaternion> {
        let value = self.sym.evaluate(q);
        let threshold = EPS_EQ * self.sym.scale(q.norm());
        if value.norm() > threshold {
            Ok(value)
        } else {
            Err(Error::OnSymmetrizationZeroSet {
                value: value.norm(),
                threshold,
            })
        }
    }

    pub fn reciprocal_at(&self, q: Quaternion) -> Result<Quaternion> {
        let s = self.symmetrization_off_zero_set(q)?;
        Ok(s.inverse()? * self.conj.evaluate(q))
    }

    pub fn transform_t(&self, q: Quaternion) -> Result<Quaternion> {
        self.symmetrization_off_zero_set(q)?;
        let fc = self.conj.evaluate(q);
        Ok(fc.inverse()? * q * fc)
    }

    /// `T_{f^c}`, i.e. `q ↦ f(q)^{-1} q f(q)`.
    pub fn transform_t_conj(&self, q: Quaternion) -> Result<Quaternion> {
        self.symmetrization_off_zero_set(q)?;
        let fv = self.f.evaluate(q);
        Ok(fv.inverse()? * q * fv)
    }
}

pub fn evaluate(f: &RegularSeries, q: Quaternion) -> Quaternion {
    f.evaluate(q)
}

pub fn regular_product(f: &RegularSeries, g: &RegularSeries) -> RegularSeries {
    f.regular_product(g)
}

pub fn regular_conjugate(f: &RegularSeries) -> RegularSeries {
    f.regular_conjugate()
}

pub fn symmetrization(f: &RegularSeries) -> Result<RegularSeries> {
    f.symmetrization()
}

pub fn reciprocal_pointwise(f: &RegularSeries, q: Quaternion) -> Result<Quaternion> {
    f.reciprocal_at(q)
}

pub fn reciprocal_series(f: &RegularSeries, order: usize) -> Result<RegularSeries> {
    f.reciprocal_series(order)
}

pub fn transform_t(f: &RegularSeries, q: Quaternion) -> Result<Quaternion> {
    f.transform_t(q)
}

/// `(f*g)(q)` evaluated from coefficients, and `f(q) g(f(q)^{-1} q f(q))`.
pub fn product_eval_identity(
    f: &RegularSeries,
    g: &RegularSeries,
    q: Quaternion,
) -> Result<(Quaternion, Quaternion)> {
    let fq = f.evaluate(q);
    let threshold = EPS_EQ * f.scale(q.norm());
    if fq.norm() <= threshold {
        return Err(Error::VanishesAt {
            value: fq.norm(),
            threshold,
        });
    }
    let lhs = f.regular_product(g).evaluate(q);
    let rhs = fq * g.evaluate(fq.inverse()? * q * fq);
    Ok((lhs, rhs))
}

/// `f^{-*}(q)` and `f(T_f(q))^{-1}`.
pub fn reciprocal_eval_identity(
    f: &RegularSeries,
    q: Quaternion,
) -> Result<(Quaternion, Quaternion)> {
    let prepared = f.prepare()?;
    let lhs = prepared.reciprocal_at(q)?;
    let rhs = f.evaluate(prepared.transform_t(q)?).inverse()?;
    Ok((lhs, rhs))
}

/// On-disk function document: `{"format_version":1,"coeffs":[[w,x,y,z],…],"flavor":…,"order":N?,"trust_radius":r?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDocument {
    #[serde(default = "default_format_version")]
    pub format_version: u32,
    pub coeffs: Vec<Quaternion>,
    pub flavor: FlavorTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trust_radius: Option<f64>,
}

fn default_format_version() -> u32 {
    FORMAT_VERSION
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlavorTag {
    Polynomial,
    Truncated,
}

impl TryFrom<FunctionDocument> for RegularSeries {
    type Error = Error;

    fn try_from(doc: FunctionDocument) -> Result<Self> {
        if doc.format_version != FORMAT_VERSION {
            return Err(Error::InvalidInput(format!(
                "field 'format_version': unsupported version {}",
                doc.format_version
            )));
        }
        if let Some(r) = doc.trust_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "field 'trust_radius': expected a positive finite radius, got {r}"
                )));
            }
        }
        let series = match (doc.flavor, doc.order) {
            (FlavorTag::Polynomial, None) => Self::polynomial(doc.coeffs),
            (FlavorTag::Polynomial, Some(_)) => {
                return Err(Error::InvalidInput(
                    "field 'order': only allowed with flavor \"truncated\"".into(),
                ))
            }
            (FlavorTag::Truncated, Some(order)) => {
                if doc.coeffs.len() > order + 1 {
                    return Err(Error::InvalidInput(format!(
                        "field 'coeffs': {} coefficients exceed order {order}",
                        doc.coeffs.len()
                    )));
                }
                Self::truncated(doc.coeffs, order)
            }
            (FlavorTag::Truncated, None) => {
                return Err(Error::InvalidInput(
                    "field 'order': required for flavor \"truncated\"".into(),
                ))
            }
        };
        Ok(series.with_trust_radius(doc.trust_radius))
    }
}

impl From<RegularSeries> for FunctionDocument {
    fn from(f: RegularSeries) -> Self {
        let (flavor, order) = match f.flavor {
            Flavor::Polynomial => (FlavorTag::Polynomial, None),
            Flavor::Truncated { order } => (FlavorTag::Truncated, Some(order)),
        };
        Self {
            format_version: FORMAT_VERSION,
            coeffs: f.coeffs,
            flavor,
            order,
            trust_radius: f.trust_radius,
        }
    }
}

impl RegularSeries {
    /// Parses a function document; errors carry the line/column or the offending field.
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("function documents always serialize")
    }
}
