//! Zero sets: the spheres carrying zeros come from the complex roots of the
//! real-coefficient symmetrization, and each sphere is then classified with
//! the `b + Ic` splitting.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::roots;
use crate::sampling::fibonacci_sphere;
use crate::series::RegularSeries;
use crate::spheres::{sphere_zero_with, spherical_split, Sphere2, ZeroOnSphere};

/// Points sampled on a zero sphere to certify it.
const SPHERE_CERTIFICATE_POINTS: usize = 20;

/// A root sphere of `f^s`, i.e. a sphere on which `f` has at least one zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootSphere {
    pub sphere: Sphere2,
    /// The underlying root of `f^s` was repeated; its multiplicity is not reported.
    pub repeated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetrizationRoots {
    pub spheres: Vec<RootSphere>,
    /// Set for truncated series: only roots inside the search disc, up to tail effects.
    pub approximate: bool,
}

/// A root sphere of `f^s` on which no zero of `f` could be confirmed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpuriousSphere {
    pub sphere: Sphere2,
    pub b_norm: f64,
    pub c_norm: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    #[serde(rename = "points")]
    pub isolated_points: Vec<Quaternion>,
    #[serde(rename = "spheres")]
    pub zero_spheres: Vec<Sphere2>,
    /// Scale-relative `|f|`: one entry per point, then one per sphere (worst certificate point).
    pub residuals: Vec<f64>,
    pub approximate: bool,
    /// Components that came from a repeated root of `f^s`.
    pub multiplicity_unknown: Vec<Sphere2>,
    pub spurious: Vec<SpuriousSphere>,
}

impl ZeroSet {
    pub fn component_count(&self) -> usize {
        self.isolated_points.len() + self.zero_spheres.len()
    }
}

fn check_search_radius(f: &RegularSeries, search_radius: f64) -> Result<()> {
    if !(search_radius > 0.0 && search_radius.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "search radius must be positive and finite, got {search_radius}"
        )));
    }
    if let (true, Some(t)) = (f.is_truncated(), f.trust_radius()) {
        if search_radius >= t {
            return Err(Error::RegionOutsideTrust {
                reach: search_radius,
                trust_radius: t,
            });
        }
    }
    Ok(())
}

pub fn symmetrization_roots(f: &RegularSeries, search_radius: f64) -> Result<SymmetrizationRoots> {
    symmetrization_roots_with(f, search_radius, &Config::default())
}

pub fn symmetrization_roots_with(
    f: &RegularSeries,
    search_radius: f64,
    cfg: &Config,
) -> Result<SymmetrizationRoots> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    check_search_radius(f, search_radius)?;
    let sym = f.symmetrization()?;
    let coeffs = sym
        .real_coefficients()
        .expect("symmetrization stores real coefficients");
    let clusters = roots::clustered_roots(&coeffs)?;

    // one representative per conjugate pair: the upper half plane plus the real axis
    let mut found: Vec<RootSphere> = clusters
        .iter()
        .filter(|c| c.center.norm() < search_radius && c.center.im >= -cfg.dedup_tol)
        .map(|c| {
            let y = if c.center.im.abs() <= cfg.dedup_tol {
                0.0
            } else {
                c.center.im
            };
            RootSphere {
                sphere: Sphere2::new(c.center.re, y),
                repeated: c.multiplicity > 1,
            }
        })
        .collect();
    found.sort_by(|a, b| {
        a.sphere
            .x()
            .total_cmp(&b.sphere.x())
            .then(a.sphere.y().total_cmp(&b.sphere.y()))
    });

    let mut spheres: Vec<RootSphere> = Vec::with_capacity(found.len());
    for r in found {
        let duplicate = spheres.iter_mut().find(|s| {
            (s.sphere.x() - r.sphere.x()).hypot(s.sphere.y() - r.sphere.y()) <= cfg.dedup_tol
        });
        match duplicate {
            Some(s) => s.repeated = true,
            None => spheres.push(r),
        }
    }
    Ok(SymmetrizationRoots {
        spheres,
        approximate: f.is_truncated(),
    })
}

pub fn zero_set(f: &RegularSeries, search_radius: f64) -> Result<ZeroSet> {
    zero_set_with(f, search_radius, &Config::default())
}

pub fn zero_set_with(f: &RegularSeries, search_radius: f64, cfg: &Config) -> Result<ZeroSet> {
    let roots = symmetrization_roots_with(f, search_radius, cfg)?;
    let mut out = ZeroSet {
        isolated_points: Vec::new(),
        zero_spheres: Vec::new(),
        residuals: Vec::new(),
        approximate: roots.approximate,
        multiplicity_unknown: Vec::new(),
        spurious: Vec::new(),
    };
    let mut sphere_residuals = Vec::new();
    let relative = |q: Quaternion| {
        let scale = f.scale(q.norm());
        if scale > 0.0 {
            f.evaluate(q).norm() / scale
        } else {
            0.0
        }
    };

    for root in roots.spheres {
        let s = root.sphere;
        let v = spherical_split(f, s);
        let spurious = SpuriousSphere {
            sphere: s,
            b_norm: v.b.norm(),
            c_norm: v.c.norm(),
            scale: v.scale,
        };
        match sphere_zero_with(&v, cfg.eps_eq, cfg.unit_tol) {
            ZeroOnSphere::WholeSphere if s.is_real_point() => {
                let p = Quaternion::real(s.x());
                out.residuals.push(relative(p));
                out.isolated_points.push(p);
            }
            ZeroOnSphere::WholeSphere => {
                let worst = fibonacci_sphere(SPHERE_CERTIFICATE_POINTS)
                    .into_iter()
                    .map(|u| relative(s.point(u)))
                    .fold(0.0, f64::max);
                if worst > cfg.zero_residual_tol {
                    out.spurious.push(spurious);
                    continue;
                }
                sphere_residuals.push(worst);
                out.zero_spheres.push(s);
            }
            ZeroOnSphere::Point { at } => {
                let r = relative(at);
                if r > cfg.zero_residual_tol {
                    out.spurious.push(spurious);
                    continue;
                }
                out.residuals.push(r);
                out.isolated_points.push(at);
            }
            ZeroOnSphere::NoZero => {
                out.spurious.push(spurious);
                continue;
            }
        }
        if root.repeated {
            out.multiplicity_unknown.push(s);
        }
    }
    out.residuals.extend(sphere_residuals);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugateZeroCheck {
    pub sphere: Sphere2,
    pub zero_f: ZeroOnSphere,
    pub zero_fc: ZeroOnSphere,
}

impl ConjugateZeroCheck {
    pub fn agree(&self) -> bool {
        self.zero_f.same_kind(&self.zero_fc)
    }
}

/// Zeros of `f` and `f^c` on one sphere, which must be of the same kind.
pub fn conjugate_zero_check(f: &RegularSeries, s: Sphere2) -> ConjugateZeroCheck {
    let cfg = Config::default();
    let classify =
        |g: &RegularSeries| sphere_zero_with(&spherical_split(g, s), cfg.eps_eq, cfg.unit_tol);
    ConjugateZeroCheck {
        sphere: s,
        zero_f: classify(f),
        zero_fc: classify(&f.regular_conjugate()),
    }
}
