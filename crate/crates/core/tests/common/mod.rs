//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls the library's arithmetic: products are written out by
//! component so the tests do not check the code against itself.
#![allow(dead_code)]

use regquat::Quaternion;

pub type Q4 = [f64; 4];

/// Hamilton product written out by component (`ij = k`, `jk = i`, `ki = j`).
pub fn hamilton(a: Q4, b: Q4) -> Q4 {
    let [a0, a1, a2, a3] = a;
    let [b0, b1, b2, b3] = b;
    [
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ]
}

pub fn add(a: Q4, b: Q4) -> Q4 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

pub fn sub(a: Q4, b: Q4) -> Q4 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

pub fn norm(a: Q4) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn arrays(q: &[Quaternion]) -> Vec<Q4> {
    q.iter().map(|c| c.to_array()).collect()
}

/// `(f*g)_n = Σ_k a_k b_{n-k}` with the left factor's coefficient on the left.
pub fn convolve(a: &[Q4], b: &[Q4]) -> Vec<Q4> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![[0.0; 4]; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add(out[i + j], hamilton(x, y));
        }
    }
    out
}

/// `Σ qⁿ aₙ` by explicit powers.
pub fn evaluate_by_powers(coeffs: &[Q4], q: Q4) -> Q4 {
    let mut power = [1.0, 0.0, 0.0, 0.0];
    let mut acc = [0.0; 4];
    for &a in coeffs {
        acc = add(acc, hamilton(power, a));
        power = hamilton(power, q);
    }
    acc
}

/// Largest componentwise difference between two coefficient lists (missing entries are zero).
pub fn max_coeff_diff(a: &[Q4], b: &[Q4]) -> f64 {
    (0..a.len().max(b.len()))
        .map(|n| {
            let x = a.get(n).copied().unwrap_or([0.0; 4]);
            let y = b.get(n).copied().unwrap_or([0.0; 4]);
            x.iter()
                .zip(&y)
                .map(|(p, q)| (p - q).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `n` points of the unit 2-sphere on a golden-angle spiral.
pub fn spiral(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let t = golden * k as f64;
            [r * t.cos(), r * t.sin(), z]
        })
        .collect()
}

/// Brute-force extremum of `g` over the unit 2-sphere: best of `n` spiral
/// points, then a shrinking-step pattern search in the tangent plane.
/// `sense = 1` minimizes, `sense = -1` maximizes.
pub fn sphere_extremum(g: impl Fn([f64; 3]) -> f64, n: usize, sense: f64) -> ([f64; 3], f64) {
    let score = |u: [f64; 3]| sense * g(u);
    let mut best = spiral(n)
        .into_iter()
        .map(|u| (u, score(u)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("n > 0");
    let mut step = 0.05;
    while step > 1e-10 {
        let u = best.0;
        let seed = if u[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let e1 = normalize3(cross(u, seed));
        let e2 = cross(u, e1);
        let mut improved = false;
        for e in [e1, e2] {
            for s in [step, -step] {
                let cand = normalize3([u[0] + s * e[0], u[1] + s * e[1], u[2] + s * e[2]]);
                let v = score(cand);
                if v < best.1 {
                    best = (cand, v);
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best.0, sense * best.1)
}
