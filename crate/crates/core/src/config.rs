//! The single place where numeric tolerances and harness defaults live.
//!
//! Every field can be overridden from the environment with the `REGQUAT_`
//! prefix and the upper-cased field name, e.g. `REGQUAT_EPS_EQ=1e-10`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Semantic equality tolerance (zero tests, affine law, identity checks).
pub const EPS_EQ: f64 = 1e-9;
/// Tolerance for algebraic identities that hold up to rounding.
pub const EPS_STRICT: f64 = 1e-12;
/// Norm below which a quaternion is treated as non-invertible.
pub const EPS_INV: f64 = 1e-300;

pub const ENV_PREFIX: &str = "REGQUAT_";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub eps_eq: f64,
    pub eps_strict: f64,
    pub eps_inv: f64,
    /// Relative tolerance on |c| for calling a sphere degenerate.
    pub degeneracy_tol: f64,
    /// Tolerance on the real part and norm of I* = -b c^{-1} when locating a zero on a sphere.
    pub unit_tol: f64,
    /// Absolute distance below which two root spheres are merged.
    pub dedup_tol: f64,
    /// Scale-relative residual a reported zero must satisfy.
    pub zero_residual_tol: f64,
    /// Points with |f^s(q)| below this fraction of scale are skipped by identity checks.
    pub guard_band: f64,
    /// Scale-relative bound on |f| at a refined interior minimum.
    pub min_modulus_tol: f64,
    /// Scale-relative residual for a solved open-mapping probe.
    pub probe_residual_tol: f64,
    pub seed: u64,
    pub samples: usize,
    pub probes: usize,
    pub epsilon: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            eps_eq: EPS_EQ,
            eps_strict: EPS_STRICT,
            eps_inv: EPS_INV,
            degeneracy_tol: EPS_EQ,
            unit_tol: 1e-6,
            dedup_tol: 1e-7,
            zero_residual_tol: 1e-8,
            guard_band: 1e-6,
            min_modulus_tol: 1e-6,
            probe_residual_tol: 1e-8,
            seed: 42,
            samples: 2000,
            probes: 200,
            epsilon: 0.01,
        }
    }
}

impl Config {
    /// Defaults with `REGQUAT_*` environment overrides applied.
    pub fn from_env() -> Result<Self> {
        Self::default().with_overrides(std::env::vars())
    }

    /// Applies `REGQUAT_<FIELD>=value` pairs; unrelated keys are ignored.
    pub fn with_overrides<I, K, V>(mut self, vars: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        for (key, value) in vars {
            let Some(field) = key.as_ref().strip_prefix(ENV_PREFIX) else {
                continue;
            };
            self.set(&field.to_ascii_lowercase(), value.as_ref())?;
        }
        Ok(self)
    }

    pub fn set(&mut self, field: &str, value: &str) -> Result<()> {
        fn real(field: &str, value: &str) -> Result<f64> {
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("{field}: '{value}' is not a number")))?;
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "{field}: expected a finite non-negative number, got {value}"
                )));
            }
            Ok(v)
        }
        fn count(field: &str, value: &str) -> Result<u64> {
            value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("{field}: '{value}' is not an integer")))
        }
        match field {
            "eps_eq" => self.eps_eq = real(field, value)?,
            "eps_strict" => self.eps_strict = real(field, value)?,
            "eps_inv" => self.eps_inv = real(field, value)?,
            "degeneracy_tol" => self.degeneracy_tol = real(field, value)?,
            "unit_tol" => self.unit_tol = real(field, value)?,
            "dedup_tol" => self.dedup_tol = real(field, value)?,
            "zero_residual_tol" => self.zero_residual_tol = real(field, value)?,
            "guard_band" => self.guard_band = real(field, value)?,
            "min_modulus_tol" => self.min_modulus_tol = real(field, value)?,
            "probe_residual_tol" => self.probe_residual_tol = real(field, value)?,
            "seed" => self.seed = count(field, value)?,
            "samples" => self.samples = count(field, value)? as usize,
            "probes" => self.probes = count(field, value)? as usize,
            "epsilon" => self.epsilon = real(field, value)?,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown config field '{other}'"
                )));
            }
        }
        Ok(())
    }
}
