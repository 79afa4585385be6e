//! All complex roots of a real-coefficient polynomial.
//!
//! Simultaneous Aberth–Ehrlich iteration with a backward-error stopping rule,
//! followed by clustering: symmetrizations carry every spherical zero and
//! every real zero as a double root, and the iteration only resolves a root of
//! multiplicity `m` to about `eps^(1/m)`. The mean of a cluster is accurate to
//! about `eps`, and Newton on the `(m-1)`-th derivative polishes it further.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 2000;
/// Relative radius within which Aberth roots are treated as one multiple root.
const CLUSTER_RADIUS: f64 = 1e-5;
/// Contract on every reported root: |p(r)| <= RESIDUAL_BOUND · Σ|c_i| · max(1,|r|)^deg.
pub const RESIDUAL_BOUND: f64 = 1e-8;

/// A root together with how many Aberth roots collapsed onto it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub center: Complex64,
    pub multiplicity: usize,
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// `(p(z), p'(z), Σ|c_i||z|^i)`.
fn horner_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    let zero = Complex64::new(0.0, 0.0);
    let r = z.norm();
    let mut p = zero;
    let mut dp = zero;
    let mut bound = 0.0;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        bound = bound * r + c.abs();
    }
    (p, dp, bound)
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, &c)| c * n as f64)
        .collect()
}

/// Residual bound used by the root contract.
pub fn residual_allowance(coeffs: &[f64], root: Complex64) -> f64 {
    let deg = coeffs.len().saturating_sub(1) as i32;
    let sum: f64 = coeffs.iter().map(|c| c.abs()).sum();
    RESIDUAL_BOUND * sum * root.norm().max(1.0).powi(deg)
}

/// Every complex root of `Σ coeffs[n] zⁿ`, repeated according to multiplicity.
///
/// Trailing (highest-order) exact zeros are dropped before the degree is
/// taken. Roots at the origin are split off exactly.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let Some(top) = coeffs.iter().rposition(|&c| c != 0.0) else {
        return Err(Error::ZeroFunction);
    };
    let coeffs = &coeffs[..=top];
    let zeros_at_origin = coeffs.iter().position(|&c| c != 0.0).unwrap_or(0);
    let reduced = &coeffs[zeros_at_origin..];

    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    roots.extend(aberth(reduced)?);
    Ok(roots)
}

fn aberth(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![Complex64::new(-coeffs[0] / coeffs[1], 0.0)]),
        _ => {}
    }

    // start on a circle whose radius is the geometric mean of the root moduli
    let radius = (coeffs[0].abs() / coeffs[n].abs()).powf(1.0 / n as f64);
    let radius = if radius.is_finite() && radius > 0.0 {
        radius
    } else {
        1.0
    };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    let mut done = vec![false; n];
    let stop = 8.0 * n as f64 * f64::EPSILON;

    let mut max_correction = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        if done.iter().all(|&d| d) {
            return Ok(z);
        }
        max_correction = 0.0;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (p, dp, bound) = horner_with_derivative(coeffs, z[k]);
            if p.norm() <= stop * bound {
                done[k] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[k] -= step;
            let size = step.norm();
            max_correction = max_correction.max(size / z[k].norm().max(1.0));
            if size <= f64::EPSILON * z[k].norm() {
                done[k] = true;
            }
        }
    }

    // tolerate non-convergence of the stopping rule when the contract still holds
    let max_residual = z
        .iter()
        .map(|&r| horner(coeffs, r).norm() / residual_allowance(coeffs, r))
        .fold(0.0, f64::max);
    if max_residual <= 1.0 {
        Ok(z)
    } else {
        Err(Error::RootFinderFailed {
            iterations: MAX_ITERATIONS,
            max_correction,
            max_residual,
        })
    }
}

/// Roots grouped into clusters, each reported once with its multiplicity.
///
/// Clusters are sorted by real part, then imaginary part.
pub fn clustered_roots(coeffs: &[f64]) -> Result<Vec<RootCluster>> {
    let roots = polynomial_roots(coeffs)?;
    let Some(top) = coeffs.iter().rposition(|&c| c != 0.0) else {
        return Err(Error::ZeroFunction);
    };
    let coeffs = &coeffs[..=top];

    // union-find over "close" pairs
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut i = i;
        while parent[i] != r {
            let next = parent[i];
            parent[i] = r;
            i = next;
        }
        r
    }
    for a in 0..n {
        for b in a + 1..n {
            let scale = roots[a].norm().max(roots[b].norm()).max(1.0);
            if (roots[a] - roots[b]).norm() <= CLUSTER_RADIUS * scale {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[rb.max(ra)] = rb.min(ra);
                }
            }
        }
    }
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    let mut group_of = vec![usize::MAX; n];
    for (i, &root) in roots.iter().enumerate() {
        let r = find(&mut parent, i);
        if group_of[r] == usize::MAX {
            group_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[group_of[r]].push(root);
    }

    let mut clusters = Vec::with_capacity(groups.len());
    for group in groups {
        let m = group.len();
        let mean = group.iter().sum::<Complex64>() / m as f64;
        if m == 1 {
            clusters.push(RootCluster {
                center: mean,
                multiplicity: 1,
            });
            continue;
        }
        let center = polish_multiple(coeffs, mean, m);
        if horner(coeffs, center).norm() <= residual_allowance(coeffs, center) {
            clusters.push(RootCluster {
                center,
                multiplicity: m,
            });
        } else {
            // not a genuine multiple root: keep the members separate
            clusters.extend(group.into_iter().map(|center| RootCluster {
                center,
                multiplicity: 1,
            }));
        }
    }
    clusters.sort_by(|a, b| {
        a.center
            .re
            .total_cmp(&b.center.re)
            .then(a.center.im.total_cmp(&b.center.im))
    });
    Ok(clusters)
}

/// Newton on the `(m-1)`-th derivative, where a root of multiplicity `m` is simple.
fn polish_multiple(coeffs: &[f64], start: Complex64, m: usize) -> Complex64 {
    let mut d = coeffs.to_vec();
    for _ in 1..m {
        d = derivative(&d);
    }
    if d.len() < 2 {
        return start;
    }
    let limit = CLUSTER_RADIUS * start.norm().max(1.0);
    let mut z = start;
    for _ in 0..20 {
        let (p, dp, _) = horner_with_derivative(&d, z);
        let step = p / dp;
        if !step.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 2.0 * f64::EPSILON * z.norm().max(1.0) {
            break;
        }
    }
    if (z - start).norm() <= limit {
        z
    } else {
        start
    }
}
