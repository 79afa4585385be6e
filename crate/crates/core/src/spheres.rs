//! Values of a regular function on the spheres `x + y𝕊`.
//!
//! On every such sphere `f(x + yI) = b + Ic` with `b, c` independent of `I`:
//! writing `(x + yI)ⁿ = xₙ + yₙI` gives `b = Σ xₙaₙ` and `c = Σ yₙaₙ`.
//! The restriction is constant exactly when `c = 0`; otherwise it is an
//! affine bijection of the sphere onto `b + 𝕊c`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{EPS_EQ, EPS_STRICT};
use crate::error::{Error, Result};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::series::RegularSeries;

/// The sphere `x + y𝕊` with `y ≥ 0`; `y = 0` is the real singleton `{x}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "SphereRepr")]
pub struct Sphere2 {
    x: f64,
    y: f64,
}

#[derive(Deserialize)]
struct SphereRepr {
    x: f64,
    y: f64,
}

impl From<SphereRepr> for Sphere2 {
    fn from(r: SphereRepr) -> Self {
        Self::new(r.x, r.y)
    }
}

impl Sphere2 {
    /// `x + y𝕊 = x + (-y)𝕊`, so the sign of `y` is dropped.
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y: y.abs() }
    }

    pub fn real_point(x: f64) -> Self {
        Self { x, y: 0.0 }
    }

    /// The sphere through `q`.
    pub fn through(q: Quaternion) -> Self {
        Self::new(q.w, q.imag_norm())
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn is_real_point(&self) -> bool {
        self.y == 0.0
    }

    /// Common modulus `|x + yI|` of all points on the sphere.
    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn point(&self, unit: ImaginaryUnit) -> Quaternion {
        Quaternion::from_slice(self.x, self.y, unit)
    }
}

/// `f(x + yI) = b + Ic` on `sphere`, plus `scale(f, |x + yI|)` for relative tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalValue {
    pub sphere: Sphere2,
    pub b: Quaternion,
    pub c: Quaternion,
    pub scale: f64,
}

impl SphericalValue {
    /// `b + Ic`, with `I` on the left of `c`.
    pub fn value_at(&self, unit: ImaginaryUnit) -> Quaternion {
        self.b + unit.as_quaternion() * self.c
    }
}

/// Splits `f` on the sphere `s`; `(xₙ, yₙ)` come from repeated complex multiplication.
pub fn spherical_split(f: &RegularSeries, s: Sphere2) -> SphericalValue {
    let z = Complex64::new(s.x, s.y);
    let mut power = Complex64::new(1.0, 0.0);
    let mut b = Quaternion::ZERO;
    let mut c = Quaternion::ZERO;
    for &a in f.coeffs() {
        b += a * power.re;
        c += a * power.im;
        power *= z;
    }
    SphericalValue {
        sphere: s,
        b,
        c,
        scale: f.scale(s.radius()),
    }
}

pub fn value_at(v: &SphericalValue, unit: ImaginaryUnit) -> Quaternion {
    v.value_at(unit)
}

/// `|c| ≤ tol · scale(f, |x + yI|)`; only genuine spheres (`y > 0`) qualify.
pub fn is_degenerate(f: &RegularSeries, s: Sphere2, tol: f64) -> Result<bool> {
    if s.is_real_point() {
        return Err(Error::NotASphere { x: s.x });
    }
    let v = spherical_split(f, s);
    Ok(v.c.norm() <= tol * v.scale)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ZeroOnSphere {
    /// `f` vanishes on the whole sphere (on the real point when `y = 0`).
    WholeSphere,
    Point {
        at: Quaternion,
    },
    #[serde(rename = "none")]
    NoZero,
}

impl ZeroOnSphere {
    pub fn label(&self) -> &'static str {
        match self {
            Self::WholeSphere => "whole",
            Self::Point { .. } => "point",
            Self::NoZero => "none",
        }
    }

    /// Same kind, ignoring where a point zero sits.
    pub fn same_kind(&self, other: &Self) -> bool {
        self.label() == other.label()
    }
}

/// Classification with the default tolerances (`EPS_EQ` on values, `1e-6` on the unit test).
pub fn sphere_zero(v: &SphericalValue) -> ZeroOnSphere {
    sphere_zero_with(v, EPS_EQ, 1e-6)
}

/// `b + Ic = 0` has the solution `I* = -b c^{-1}`, which must lie on 𝕊.
pub fn sphere_zero_with(v: &SphericalValue, value_tol: f64, unit_tol: f64) -> ZeroOnSphere {
    let threshold = value_tol * v.scale;
    let c_small = v.c.norm() <= threshold;
    let b_small = v.b.norm() <= threshold;
    match (c_small, b_small) {
        (true, true) => return ZeroOnSphere::WholeSphere,
        (true, false) => return ZeroOnSphere::NoZero,
        _ => {}
    }
    let Ok(c_inv) = v.c.inverse() else {
        return ZeroOnSphere::NoZero;
    };
    let candidate = -(v.b * c_inv);
    let size = candidate.imag_norm();
    if candidate.w.abs() > unit_tol * size.max(1.0) || (size - 1.0).abs() > unit_tol {
        return ZeroOnSphere::NoZero;
    }
    match ImaginaryUnit::from_imaginary_part(candidate) {
        Ok(unit) => ZeroOnSphere::Point {
            at: v.sphere.point(unit),
        },
        Err(_) => ZeroOnSphere::NoZero,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    /// Absent when the modulus is constant on the sphere.
    pub unit: Option<ImaginaryUnit>,
    pub modulus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremaReport {
    pub min: Extremum,
    pub max: Extremum,
    pub constant_modulus: bool,
}

/// Extremes of `|b + Ic|` over `I ∈ 𝕊`.
///
/// `|b + Ic|² = |b|² + |c|² − 2⟨I, Im(c b̄)⟩`, so the minimum sits at the
/// direction of `Im(c b̄)` and the maximum at its antipode.
pub fn modulus_extrema_on_sphere(v: &SphericalValue) -> ExtremaReport {
    let w = (v.c * v.b.conj()).imag();
    let tilt = w.norm();
    if tilt <= EPS_STRICT * v.b.norm() * v.c.norm() {
        let modulus = (v.b.norm_sqr() + v.c.norm_sqr()).sqrt();
        let e = Extremum {
            unit: None,
            modulus,
        };
        return ExtremaReport {
            min: e,
            max: e,
            constant_modulus: true,
        };
    }
    let unit = ImaginaryUnit::from_imaginary_part(w).expect("non-zero tilt normalizes");
    ExtremaReport {
        min: Extremum {
            unit: Some(unit),
            modulus: v.value_at(unit).norm(),
        },
        max: Extremum {
            unit: Some(-unit),
            modulus: v.value_at(-unit).norm(),
        },
        constant_modulus: false,
    }
}
