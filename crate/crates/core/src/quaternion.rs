//! Hamilton quaternions and the slice parametrization `q = x + yI`.
//!
//! Scalar-first convention: `[w, x, y, z]` is `w + x i + y j + z k`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::config::EPS_INV;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    /// `x + y·unit`.
    #[inline]
    pub fn from_slice(x: f64, y: f64, unit: ImaginaryUnit) -> Self {
        Self::real(x) + unit.as_quaternion() * y
    }

    #[inline]
    pub const fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        // hypot-style scaling keeps tiny and huge inputs from under/overflowing
        let m = self
            .w
            .abs()
            .max(self.x.abs())
            .max(self.y.abs())
            .max(self.z.abs());
        if m == 0.0 || !m.is_finite() {
            return m;
        }
        (self / m).norm_sqr().sqrt() * m
    }

    /// Imaginary part as a pure quaternion.
    #[inline]
    pub fn imag(self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    #[inline]
    pub fn imag_norm(self) -> f64 {
        self.imag().norm()
    }

    /// Euclidean inner product on ℍ ≅ ℝ⁴.
    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn is_real(self) -> bool {
        self.x == 0.0 && self.y == 0.0 && self.z == 0.0
    }

    pub fn inverse(self) -> Result<Self> {
        self.inverse_with_guard(EPS_INV)
    }

    pub fn inverse_with_guard(self, guard: f64) -> Result<Self> {
        let n = self.norm();
        if n <= guard || !n.is_finite() {
            return Err(Error::NonInvertible { norm: n });
        }
        // divide twice by the norm rather than once by norm² to stay in range
        Ok((self.conj() / n) / n)
    }

    /// `q = x + yI`, with `I` absent for real `q`.
    pub fn slice_decompose(self) -> SliceCoordinates {
        let y = self.imag_norm();
        let unit = if y > 0.0 {
            Some(ImaginaryUnit::from_unit_quaternion(self.imag() / y))
        } else {
            None
        };
        SliceCoordinates { x: self.w, y, unit }
    }

    /// Distance to the nearest point of the sphere `x + y𝕊` (the real point `x` when `y = 0`).
    pub fn distance_to_sphere(self, x: f64, y: f64) -> f64 {
        (self.w - x).hypot(self.imag_norm() - y.abs())
    }
}

impl TryFrom<[f64; 4]> for Quaternion {
    type Error = Error;

    fn try_from(a: [f64; 4]) -> Result<Self> {
        let q = Self::from_array(a);
        if q.is_finite() {
            Ok(q)
        } else {
            Err(Error::InvalidInput(format!(
                "non-finite quaternion component in {a:?}"
            )))
        }
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::real(w)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product: `ij = k`, `jk = i`, `ki = j`.
impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        let (a, b) = (self, o);
        Self::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

/// Free-function form of the Hamilton product.
#[inline]
pub fn hamilton_mul(p: Quaternion, q: Quaternion) -> Quaternion {
    p * q
}

/// A point of 𝕊 = {q : q² = −1}, i.e. a unit pure quaternion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct ImaginaryUnit {
    u1: f64,
    u2: f64,
    u3: f64,
}

impl ImaginaryUnit {
    pub const I: Self = Self {
        u1: 1.0,
        u2: 0.0,
        u3: 0.0,
    };
    pub const J: Self = Self {
        u1: 0.0,
        u2: 1.0,
        u3: 0.0,
    };
    pub const K: Self = Self {
        u1: 0.0,
        u2: 0.0,
        u3: 1.0,
    };

    /// Normalizes `(u1, u2, u3)`; fails on the zero vector or non-finite input.
    pub fn new(u1: f64, u2: f64, u3: f64) -> Result<Self> {
        let n = Quaternion::new(0.0, u1, u2, u3).norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "imaginary unit direction ({u1}, {u2}, {u3}) cannot be normalized"
            )));
        }
        Ok(Self {
            u1: u1 / n,
            u2: u2 / n,
            u3: u3 / n,
        })
    }

    /// Projects the imaginary part of `q` onto 𝕊.
    pub fn from_imaginary_part(q: Quaternion) -> Result<Self> {
        Self::new(q.x, q.y, q.z)
    }

    fn from_unit_quaternion(q: Quaternion) -> Self {
        // renormalize once more so |u| = 1 holds to the last ulp or two
        Self::new(q.x, q.y, q.z).unwrap_or(Self::I)
    }

    #[inline]
    pub fn components(self) -> [f64; 3] {
        [self.u1, self.u2, self.u3]
    }

    #[inline]
    pub fn as_quaternion(self) -> Quaternion {
        Quaternion::new(0.0, self.u1, self.u2, self.u3)
    }

    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.u1 * other.u1 + self.u2 * other.u2 + self.u3 * other.u3
    }
}

impl Neg for ImaginaryUnit {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            u1: -self.u1,
            u2: -self.u2,
            u3: -self.u3,
        }
    }
}

impl TryFrom<[f64; 3]> for ImaginaryUnit {
    type Error = Error;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<ImaginaryUnit> for [f64; 3] {
    fn from(u: ImaginaryUnit) -> Self {
        u.components()
    }
}

/// `q = x + y·unit` with `y ≥ 0`; `unit` is absent exactly when `y = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceCoordinates {
    pub x: f64,
    pub y: f64,
    pub unit: Option<ImaginaryUnit>,
}

impl SliceCoordinates {
    pub fn reassemble(&self) -> Quaternion {
        match self.unit {
            Some(u) => Quaternion::from_slice(self.x, self.y, u),
            None => Quaternion::real(self.x),
        }
    }
}
