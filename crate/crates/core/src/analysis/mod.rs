//! Seeded numerical checks of the analytic statements about regular functions:
//! degenerate-set scans, maximum/minimum modulus, open mapping coverage, the
//! `q² + 1` counterexample and the pointwise identity suite.
//!
//! Every operation taking a seed is a pure function of its inputs and that seed.

pub mod identities;
pub mod modulus;
pub mod open_mapping;
pub mod scan;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::series::RegularSeries;

pub use identities::{identity_suite, IdentityCheck, IdentityReport, IdentitySuiteOptions};
pub use modulus::{check_max_modulus, check_min_modulus, MaxModulusReport, MinModulusReport};
pub use open_mapping::{
    counterexample_witness, open_mapping_probe, CoverageReport, CoverageVerdict, ProbeTargets,
    Region, WitnessReport,
};
pub use scan::{degenerate_scan, modulus_scan, DegenerateScan, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Violation,
    Inconclusive,
    /// The check does not apply to constant functions.
    Constant,
}

impl Verdict {
    pub fn passed(self) -> bool {
        matches!(self, Self::Pass)
    }
}

/// Truncated series are only trusted strictly inside their trust radius.
pub(crate) fn require_trusted(f: &RegularSeries, reach: f64) -> Result<()> {
    match (f.is_truncated(), f.trust_radius()) {
        (true, Some(t)) if reach >= t => Err(Error::RegionOutsideTrust {
            reach,
            trust_radius: t,
        }),
        _ => Ok(()),
    }
}

/// The 80 points `q + h·d`, `d ∈ {-1, 0, 1}⁴ \ {0}`.
pub(crate) fn grid_neighbors(q: Quaternion, h: f64) -> impl Iterator<Item = Quaternion> {
    (0..81usize).filter(|&n| n != 40).map(move |n| {
        let d = [n % 3, (n / 3) % 3, (n / 9) % 3, n / 27].map(|k| k as f64 - 1.0);
        q + Quaternion::from_array(d) * h
    })
}

/// No neighbour on the local grid of scale `h` is lower than `value - slack`.
pub(crate) fn is_grid_local_min(
    g: &impl Fn(Quaternion) -> f64,
    q: Quaternion,
    value: f64,
    h: f64,
    slack: f64,
) -> bool {
    grid_neighbors(q, h).all(|p| g(p) >= value - slack)
}

/// No neighbour on the local grid of scale `h` is higher than `value + slack`.
pub(crate) fn is_grid_local_max(
    g: &impl Fn(Quaternion) -> f64,
    q: Quaternion,
    value: f64,
    h: f64,
    slack: f64,
) -> bool {
    grid_neighbors(q, h).all(|p| g(p) <= value + slack)
}
