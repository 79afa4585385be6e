//! Local refinement on ℍ ≅ ℝ⁴ with central-difference derivatives.
//!
//! [`least_squares`] drives `|F(q)|²` down for maps `F: ℍ → ℍ` (a zero of
//! `f` or a solution of `f(q) = p`); [`ascend_modulus`] climbs `|f|`.

use nalgebra::{Matrix4, Vector4};

use crate::quaternion::Quaternion;

/// Central-difference step `1e-6 · (1 + |q|)`.
pub fn difference_step(q: Quaternion) -> f64 {
    1e-6 * (1.0 + q.norm())
}

fn basis(k: usize) -> Quaternion {
    let mut a = [0.0; 4];
    a[k] = 1.0;
    Quaternion::from_array(a)
}

fn to_vector(q: Quaternion) -> Vector4<f64> {
    Vector4::new(q.w, q.x, q.y, q.z)
}

fn from_vector(v: &Vector4<f64>) -> Quaternion {
    Quaternion::new(v[0], v[1], v[2], v[3])
}

/// Gradient of a real function on ℍ, as a quaternion.
pub fn numeric_gradient(g: impl Fn(Quaternion) -> f64, q: Quaternion) -> Quaternion {
    let h = difference_step(q);
    let mut out = [0.0; 4];
    for (k, slot) in out.iter_mut().enumerate() {
        let e = basis(k) * h;
        *slot = (g(q + e) - g(q - e)) / (2.0 * h);
    }
    Quaternion::from_array(out)
}

/// Jacobian of `F: ℍ → ℍ`; column `k` is `∂F/∂e_k`.
pub fn numeric_jacobian(map: &impl Fn(Quaternion) -> Quaternion, q: Quaternion) -> Matrix4<f64> {
    let h = difference_step(q);
    let mut jac = Matrix4::zeros();
    for k in 0..4 {
        let e = basis(k) * h;
        let col = (map(q + e) - map(q - e)) / (2.0 * h);
        jac.set_column(k, &to_vector(col));
    }
    jac
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// `|F| ≤ target`.
    Converged,
    /// No further decrease possible: a local minimum of `|F|²` above target.
    Stationary,
    /// An accepted step left the admissible region.
    Exited,
    MaxIterations,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentResult {
    pub point: Quaternion,
    pub residual: f64,
    pub iterations: usize,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Copy)]
pub struct DescentOptions {
    pub target: f64,
    pub max_iterations: usize,
}

impl Default for DescentOptions {
    fn default() -> Self {
        Self {
            target: 0.0,
            max_iterations: 200,
        }
    }
}

/// Levenberg–Marquardt on `|F(q)|²` starting from `start`.
///
/// Stops as soon as `|F| ≤ opts.target`, or when an accepted iterate fails `inside`.
pub fn least_squares(
    map: impl Fn(Quaternion) -> Quaternion,
    inside: impl Fn(Quaternion) -> bool,
    start: Quaternion,
    opts: DescentOptions,
) -> DescentResult {
    let mut q = start;
    let mut r = map(q);
    let mut cost = r.norm_sqr();
    let mut lambda = 1e-3;
    let done = |q, r: Quaternion, iterations, outcome| DescentResult {
        point: q,
        residual: r.norm(),
        iterations,
        outcome,
    };

    for it in 0..opts.max_iterations {
        if r.norm() <= opts.target {
            return done(q, r, it, Outcome::Converged);
        }
        let jac = numeric_jacobian(&map, q);
        let jtj = jac.transpose() * jac;
        let grad = jac.transpose() * to_vector(r);
        let mut accepted = false;
        while lambda < 1e16 {
            let damped =
                jtj + Matrix4::from_diagonal(&(jtj.diagonal().map(|d| d.max(1e-300)) * lambda));
            let Some(step) = damped.lu().solve(&(-grad)) else {
                lambda *= 10.0;
                continue;
            };
            let candidate = q + from_vector(&step);
            let rc = map(candidate);
            let cc = rc.norm_sqr();
            if cc.is_finite() && cc < cost {
                let stalled = (candidate - q).norm() <= 4.0 * f64::EPSILON * (1.0 + q.norm());
                q = candidate;
                r = rc;
                cost = cc;
                lambda = (lambda / 3.0).max(1e-12);
                accepted = true;
                if !inside(q) {
                    return done(q, r, it + 1, Outcome::Exited);
                }
                if stalled {
                    let outcome = if r.norm() <= opts.target {
                        Outcome::Converged
                    } else {
                        Outcome::Stationary
                    };
                    return done(q, r, it + 1, outcome);
                }
                break;
            }
            lambda *= 4.0;
        }
        if !accepted {
            let outcome = if r.norm() <= opts.target {
                Outcome::Converged
            } else {
                Outcome::Stationary
            };
            return done(q, r, it + 1, outcome);
        }
    }
    let outcome = if r.norm() <= opts.target {
        Outcome::Converged
    } else {
        Outcome::MaxIterations
    };
    done(q, r, opts.max_iterations, outcome)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AscentOutcome {
    /// The climb reached the boundary shell `|q - center| ≥ (1 - shell) · radius`.
    ReachedBoundary,
    /// Step size collapsed at an interior point: a local maximum candidate.
    InteriorStall,
    MaxIterations,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentResult {
    pub point: Quaternion,
    pub value: f64,
    pub iterations: usize,
    pub outcome: AscentOutcome,
}

/// Adaptive normalized-gradient ascent of `g` inside `B(center, radius)`.
pub fn ascend_modulus(
    g: impl Fn(Quaternion) -> f64,
    center: Quaternion,
    radius: f64,
    shell: f64,
    start: Quaternion,
    max_iterations: usize,
) -> AscentResult {
    let boundary = (1.0 - shell) * radius;
    let mut q = start;
    let mut value = g(q);
    let mut step = 0.05 * radius;
    for it in 0..max_iterations {
        if (q - center).norm() >= boundary {
            return AscentResult {
                point: q,
                value,
                iterations: it,
                outcome: AscentOutcome::ReachedBoundary,
            };
        }
        let grad = numeric_gradient(&g, q);
        let n = grad.norm();
        if n.is_nan() || n <= 0.0 || step < 1e-12 * (1.0 + q.norm()) {
            return AscentResult {
                point: q,
                value,
                iterations: it,
                outcome: AscentOutcome::InteriorStall,
            };
        }
        let candidate = q + grad * (step / n);
        let vc = g(candidate);
        if vc > value {
            q = candidate;
            value = vc;
            step = (step * 1.5).min(0.25 * radius);
        } else {
            step *= 0.5;
        }
    }
    AscentResult {
        point: q,
        value,
        iterations: max_iterations,
        outcome: AscentOutcome::MaxIterations,
    }
}
