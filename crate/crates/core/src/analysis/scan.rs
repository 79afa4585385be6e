//! Scan of `|c(x, y)|` over a rectangle of the `(x, y)` half plane.
//!
//! A sphere `x + y𝕊` (`y > 0`) is degenerate exactly where `c` vanishes; for a
//! non-constant function these spheres form curves, never open patches.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::series::RegularSeries;
use crate::spheres::{spherical_split, Sphere2};

use super::require_trusted;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x_range: [f64; 2], y_range: [f64; 2], nx: usize, ny: usize) -> Result<Self> {
        let finite = x_range.iter().chain(&y_range).all(|v| v.is_finite());
        if !finite || x_range[0] >= x_range[1] || y_range[0] >= y_range[1] {
            return Err(Error::InvalidInput(format!(
                "grid ranges must be finite and increasing, got x {x_range:?}, y {y_range:?}"
            )));
        }
        if y_range[0] < 0.0 {
            return Err(Error::InvalidInput(format!(
                "grid y range must satisfy y >= 0, got {y_range:?}"
            )));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidInput(format!(
                "grid needs at least 2 samples per axis, got {nx}x{ny}"
            )));
        }
        Ok(Self {
            x_range,
            y_range,
            nx,
            ny,
        })
    }

    pub fn x(&self, i: usize) -> f64 {
        let [a, b] = self.x_range;
        a + (b - a) * i as f64 / (self.nx - 1) as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        let [a, b] = self.y_range;
        a + (b - a) * j as f64 / (self.ny - 1) as f64
    }

    /// Largest `|x + yI|` on the grid.
    pub fn reach(&self) -> f64 {
        let x = self.x_range[0].abs().max(self.x_range[1].abs());
        x.hypot(self.y_range[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanCell {
    pub x: f64,
    pub y: f64,
    pub abs_c: f64,
    /// `|c| / scale(f, |x + yI|)`.
    pub relative_c: f64,
    /// `y > 0` and `relative_c ≤ tol`.
    pub candidate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegenerateCandidate {
    pub sphere: Sphere2,
    pub relative_c: f64,
    /// `|b| / scale`: near zero when the degenerate sphere is also a zero sphere.
    pub relative_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegenerateScan {
    pub grid: GridSpec,
    pub tol: f64,
    /// Row-major: `y` outer, `x` inner.
    pub field: Vec<ScanCell>,
    pub candidates: Vec<DegenerateCandidate>,
}

impl DegenerateScan {
    pub fn cell(&self, i: usize, j: usize) -> &ScanCell {
        &self.field[j * self.grid.nx + i]
    }

    /// Whether some 3×3 block of grid cells is entirely made of candidates.
    pub fn has_filled_block(&self) -> bool {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        (1..ny.saturating_sub(1)).any(|j| {
            (1..nx.saturating_sub(1)).any(|i| {
                (j - 1..=j + 1).all(|jj| (i - 1..=i + 1).all(|ii| self.cell(ii, jj).candidate))
            })
        })
    }

    /// CSV with header `x,y,abs_c`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,abs_c\n");
        for c in &self.field {
            out.push_str(&format!("{:?},{:?},{:?}\n", c.x, c.y, c.abs_c));
        }
        out
    }
}

fn relative_c(f: &RegularSeries, x: f64, y: f64) -> (f64, f64) {
    let v = spherical_split(f, Sphere2::new(x, y));
    let rel = if v.scale > 0.0 {
        v.c.norm() / v.scale
    } else {
        0.0
    };
    (v.c.norm(), rel)
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
fn golden_min(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    while (b - a).abs() > 1e-13 * (1.0 + a.abs().max(b.abs())) {
        if gc <= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d);
        }
    }
    if gc <= gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

/// `|c|` on every grid cell plus degenerate-sphere candidates, refined by
/// line searches along grid rows and columns around each discrete local minimum.
pub fn degenerate_scan(f: &RegularSeries, grid: GridSpec, tol: f64) -> Result<DegenerateScan> {
    require_trusted(f, grid.reach())?;
    let (nx, ny) = (grid.nx, grid.ny);
    let mut field = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (x, y) = (grid.x(i), grid.y(j));
            let (abs_c, rel) = relative_c(f, x, y);
            field.push(ScanCell {
                x,
                y,
                abs_c,
                relative_c: rel,
                candidate: y > 0.0 && rel <= tol,
            });
        }
    }
    let rel_at = |i: usize, j: usize| field[j * nx + i].relative_c;

    let mut found: Vec<(f64, f64)> = Vec::new();
    // rows: fixed y, search in x
    for j in 0..ny {
        let y = grid.y(j);
        if y <= 0.0 {
            continue;
        }
        for i in 1..nx - 1 {
            if rel_at(i, j) <= rel_at(i - 1, j) && rel_at(i, j) <= rel_at(i + 1, j) {
                let (x, r) = golden_min(|x| relative_c(f, x, y).1, grid.x(i - 1), grid.x(i + 1));
                if r <= tol {
                    found.push((x, y));
                }
            }
        }
    }
    // columns: fixed x, search in y
    for i in 0..nx {
        let x = grid.x(i);
        for j in 1..ny - 1 {
            if rel_at(i, j) <= rel_at(i, j - 1) && rel_at(i, j) <= rel_at(i, j + 1) {
                let lo = grid.y(j - 1).max(f64::MIN_POSITIVE);
                let (y, r) = golden_min(|y| relative_c(f, x, y).1, lo, grid.y(j + 1));
                if r <= tol && y > 0.0 {
                    found.push((x, y));
                }
            }
        }
    }
    found.extend(field.iter().filter(|c| c.candidate).map(|c| (c.x, c.y)));

    let merge = 1e-6 * ((grid.x_range[1] - grid.x_range[0]).max(grid.y_range[1] - grid.y_range[0]));
    found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut candidates: Vec<DegenerateCandidate> = Vec::new();
    for (x, y) in found {
        if candidates
            .iter()
            .any(|c| (c.sphere.x() - x).hypot(c.sphere.y() - y) <= merge)
        {
            continue;
        }
        let v = spherical_split(f, Sphere2::new(x, y));
        let (rc, rb) = if v.scale > 0.0 {
            (v.c.norm() / v.scale, v.b.norm() / v.scale)
        } else {
            (0.0, 0.0)
        };
        candidates.push(DegenerateCandidate {
            sphere: Sphere2::new(x, y),
            relative_c: rc,
            relative_b: rb,
        });
    }
    Ok(DegenerateScan {
        grid,
        tol,
        field,
        candidates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulusCell {
    pub x: f64,
    pub y: f64,
    pub abs_f: f64,
}

/// `|f(x + yI)|` over the grid, for one fixed unit `I`.
pub fn modulus_scan(
    f: &RegularSeries,
    grid: GridSpec,
    unit: ImaginaryUnit,
) -> Result<Vec<ModulusCell>> {
    require_trusted(f, grid.reach())?;
    let mut out = Vec::with_capacity(grid.nx * grid.ny);
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let (x, y) = (grid.x(i), grid.y(j));
            out.push(ModulusCell {
                x,
                y,
                abs_f: f.evaluate(Quaternion::from_slice(x, y, unit)).norm(),
            });
        }
    }
    Ok(out)
}

/// CSV with header `x,y,abs_f`.
pub fn modulus_csv(cells: &[ModulusCell]) -> String {
    let mut out = String::from("x,y,abs_f\n");
    for c in cells {
        out.push_str(&format!("{:?},{:?},{:?}\n", c.x, c.y, c.abs_f));
    }
    out
}
