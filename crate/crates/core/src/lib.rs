//! Computation with slice-regular (Cullen-regular) quaternionic functions
//! given by power series `f(q) = Σ qⁿ aₙ`.
//!
//! - [`quaternion`]: Hamilton algebra and the slice parametrization `x + yI`.
//! - [`series`]: the regular product, conjugate, symmetrization and reciprocal.
//! - [`spheres`]: the splitting `f(x + yI) = b + Ic` on each sphere `x + y𝕊`.
//! - [`zeros`]: isolated zeros and zero spheres.
//! - [`analysis`]: seeded numerical checks of the modulus principles and open mapping.

pub mod analysis;
pub mod config;
pub mod descent;
pub mod error;
pub mod quaternion;
pub mod roots;
pub mod sampling;
pub mod series;
pub mod spheres;
pub mod zeros;

pub use config::Config;
pub use error::{Error, Result};
pub use quaternion::{hamilton_mul, ImaginaryUnit, Quaternion, SliceCoordinates};
pub use series::{Flavor, PreparedSeries, RegularSeries};
pub use spheres::{ExtremaReport, Sphere2, SphericalValue, ZeroOnSphere};
pub use zeros::ZeroSet;
