//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{arrays, convolve, hamilton, max_coeff_diff, norm, sphere_extremum, sub, Q4};
use rand::Rng;
use regquat::analysis::{
    check_min_modulus, counterexample_witness, identities::identity_suite_with, open_mapping_probe,
    CoverageVerdict, IdentitySuiteOptions, ProbeTargets, Region, Verdict,
};
use regquat::sampling::{cube_quaternion, imaginary_unit, random_polynomial, rng};
use regquat::spheres::{modulus_extrema_on_sphere, spherical_split, SphericalValue};
use regquat::zeros::{conjugate_zero_check, symmetrization_roots, zero_set};
use regquat::{ImaginaryUnit, Quaternion, RegularSeries, Sphere2};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn q_minus(a: Quaternion) -> RegularSeries {
    RegularSeries::polynomial(vec![-a, Quaternion::ONE])
}

fn zero_sphere_of_q_squared_plus_one() -> Outcome {
    let f = RegularSeries::from_real(&[1.0, 0.0, 1.0]);
    let z = zero_set(&f, 2.0).map_err(|e| e.to_string())?;
    let sphere_ok = z.zero_spheres.len() == 1
        && z.zero_spheres[0].x().abs() < 1e-12
        && (z.zero_spheres[0].y() - 1.0).abs() < 1e-12;
    let mut r = rng(101);
    let worst = (0..50)
        .map(|_| {
            let unit = imaginary_unit(&mut r);
            f.evaluate(Quaternion::from_slice(0.0, 1.0, unit)).norm()
        })
        .fold(0.0, f64::max);
    check(
        sphere_ok && z.isolated_points.is_empty() && worst < 1e-10,
        format!(
            "spheres {:?}, points {}, max |f| on sphere {worst:e}",
            z.zero_spheres,
            z.isolated_points.len()
        ),
    )
}

fn hand_symmetrization_and_product() -> Outcome {
    let f = q_minus(Quaternion::I);
    let g = q_minus(Quaternion::J);
    let sym = f.symmetrization().map_err(|e| e.to_string())?;
    let sym_dev = max_coeff_diff(
        &arrays(sym.coeffs()),
        &[[1.0, 0.0, 0.0, 0.0], [0.0; 4], [1.0, 0.0, 0.0, 0.0]],
    );

    // (q - i) * (q - j) = q² - q(i + j) + ij
    let expected: Vec<Q4> = vec![
        [0.0, 0.0, 0.0, 1.0],
        [0.0, -1.0, -1.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
    ];
    let product = f.regular_product(&g);
    let prod_dev = max_coeff_diff(&arrays(product.coeffs()), &expected);
    let oracle_dev = max_coeff_diff(
        &convolve(&arrays(f.coeffs()), &arrays(g.coeffs())),
        &expected,
    );
    check(
        sym_dev <= 1e-12 && prod_dev <= 1e-12 && oracle_dev == 0.0,
        format!("symmetrization dev {sym_dev:e}, product dev {prod_dev:e}"),
    )
}

fn reciprocal_of_one_minus_q() -> Outcome {
    let f = RegularSeries::from_real(&[1.0, -1.0]);
    let inv = f.reciprocal_series(32).map_err(|e| e.to_string())?;
    let ones = vec![[1.0, 0.0, 0.0, 0.0]; 33];
    let coeff_dev = max_coeff_diff(&arrays(inv.coeffs()), &ones);
    let mut identity = vec![[0.0; 4]; 33];
    identity[0][0] = 1.0;
    let left = convolve(&arrays(f.coeffs()), &arrays(inv.coeffs()));
    let right = convolve(&arrays(inv.coeffs()), &arrays(f.coeffs()));
    let prod_dev =
        max_coeff_diff(&left[..33], &identity).max(max_coeff_diff(&right[..33], &identity));
    let lib_dev = max_coeff_diff(&arrays(f.regular_product(&inv).coeffs()), &identity);
    check(
        inv.coeffs().len() == 33 && coeff_dev <= 1e-12 && prod_dev <= 1e-10 && lib_dev <= 1e-10,
        format!("coefficients dev {coeff_dev:e}, product dev {prod_dev:e} (library {lib_dev:e})"),
    )
}

fn geometric_series_split() -> Outcome {
    let f = RegularSeries::geometric(64);
    let bound = 2.0 * 0.5f64.powi(65) / (1.0 - 0.5) + 1e-12;
    let mut worst = 0.0f64;
    let mut count = 0;
    for a in 1..=10 {
        for t in 0..10 {
            let rho = 0.05 * a as f64;
            let theta = std::f64::consts::PI * (t as f64 + 0.5) / 10.0;
            let (x, y) = (rho * theta.cos(), rho * theta.sin());
            let v = spherical_split(&f, Sphere2::new(x, y));
            let exact = y / ((1.0 - x).powi(2) + y * y);
            worst = worst.max(norm(sub(v.c.to_array(), [exact, 0.0, 0.0, 0.0])));
            count += 1;
        }
    }
    check(
        count == 100 && worst <= bound,
        format!("{count} grid points, max |c - exact| {worst:e} (bound {bound:e})"),
    )
}

fn identity_suite_on_random_pairs() -> Outcome {
    let mut r = rng(202);
    let opts = IdentitySuiteOptions {
        radius: Some(1.0),
        ..Default::default()
    };
    let names = [
        "product-evaluation",
        "reciprocal-evaluation",
        "transform-inverse",
    ];
    let mut worst = [0.0f64; 3];
    let mut checked = [0usize; 3];
    let mut skipped = [0usize; 3];
    for pair in 0..100 {
        let f = {
            let d = r.random_range(1..=6);
            random_polynomial(&mut r, d)
        };
        let g = {
            let d = r.random_range(0..=6);
            random_polynomial(&mut r, d)
        };
        let report =
            identity_suite_with(&f, &g, 10, 3000 + pair, opts).map_err(|e| e.to_string())?;
        for (k, name) in names.iter().enumerate() {
            let c = report
                .identities
                .iter()
                .find(|c| c.name == *name)
                .expect("identity present");
            worst[k] = worst[k].max(c.max_rel_dev);
            checked[k] += c.checked;
            skipped[k] += c.skipped;
        }
    }
    let ok = worst.iter().all(|&w| w <= 1e-9)
        && checked.iter().zip(&skipped).all(|(c, s)| c + s == 1000);
    check(
        ok,
        format!(
            "max rel dev {:e} / {:e} / {:e}, checked {checked:?}, guarded {skipped:?}",
            worst[0], worst[1], worst[2]
        ),
    )
}

/// Cauchy bound on the moduli of the zeros, slightly enlarged.
fn cauchy_radius(f: &RegularSeries) -> f64 {
    let c = f.coeffs();
    let lead = c[c.len() - 1].norm();
    1.01 * (1.0
        + c[..c.len() - 1]
            .iter()
            .map(|a| a.norm() / lead)
            .fold(0.0, f64::max))
}

fn zero_correspondence() -> Outcome {
    let mut r = rng(303);
    let (mut spheres, mut disagreements, mut kinds) = (0, Vec::new(), [0usize; 3]);
    for _ in 0..200 {
        let f = {
            let d = r.random_range(1..=8);
            random_polynomial(&mut r, d)
        };
        let roots = symmetrization_roots(&f, cauchy_radius(&f)).map_err(|e| e.to_string())?;
        for s in roots.spheres {
            spheres += 1;
            let c = conjugate_zero_check(&f, s.sphere);
            match c.zero_f.label() {
                "whole" => kinds[0] += 1,
                "point" => kinds[1] += 1,
                _ => kinds[2] += 1,
            }
            if !c.agree() && disagreements.len() < 5 {
                disagreements.push(c);
            }
        }
    }
    check(
        disagreements.is_empty(),
        format!("{spheres} spheres (whole/point/none {kinds:?}), disagreements {disagreements:?}"),
    )
}

fn minimum_modulus() -> Outcome {
    let mut r = rng(404);
    let (mut minima, mut exited, mut worst) = (0, 0, 0.0f64);
    let mut failures = Vec::new();
    for n in 0..100u64 {
        let f = {
            let d = r.random_range(1..=5);
            random_polynomial(&mut r, d)
        };
        let report = check_min_modulus(&f, 1.0, 2000, 5000 + n).map_err(|e| e.to_string())?;
        minima += report.minima.len();
        exited += report.exited;
        worst = report
            .minima
            .iter()
            .map(|m| m.relative_modulus)
            .fold(worst, f64::max);
        if report.verdict != Verdict::Pass && failures.len() < 3 {
            failures.push(report.violations);
        }
    }
    check(
        failures.is_empty(),
        format!("{minima} interior minima, worst |f|/scale {worst:e}, {exited} descents left the ball, failures {failures:?}"),
    )
}

fn counterexample() -> Outcome {
    let w = counterexample_witness(ImaginaryUnit::I, ImaginaryUnit::J, 100_000, 505)
        .map_err(|e| e.to_string())?;
    check(
        w.verdict == Verdict::Pass && w.value_at_unit < 1e-12 && w.violations == 0,
        format!(
            "|f(i)| {:e}, {} samples, {} near L_K, {} off the real axis",
            w.value_at_unit, w.samples, w.near_line, w.violations
        ),
    )
}

fn circular_open_mapping() -> Outcome {
    let f = RegularSeries::from_real(&[1.0, 0.0, 1.0]);
    let region = Region::Circular {
        sphere: Sphere2::new(0.0, 1.0),
        radius: 0.3,
    };
    let c = open_mapping_probe(&f, region, 0.01, 200, ProbeTargets::Ball, 606)
        .map_err(|e| e.to_string())?;
    check(
        c.verdict == CoverageVerdict::Covered && c.solved == 200 && c.max_residual < 1e-8,
        format!(
            "{:?}, solved {}/{}, max residual {:e}",
            c.verdict, c.solved, c.probes, c.max_residual
        ),
    )
}

fn modulus_extrema_closed_form() -> Outcome {
    let mut r = rng(707);
    let (mut worst_pos, mut worst_val, mut flat) = (0.0f64, 0.0f64, 0);
    for _ in 0..1000 {
        let (b, c) = (cube_quaternion(&mut r), cube_quaternion(&mut r));
        let v = SphericalValue {
            sphere: Sphere2::new(0.0, 1.0),
            b,
            c,
            scale: 1.0,
        };
        let report = modulus_extrema_on_sphere(&v);
        if report.constant_modulus {
            flat += 1;
            continue;
        }
        let (ba, ca) = (b.to_array(), c.to_array());
        let modulus = |u: [f64; 3]| norm(common::add(ba, hamilton([0.0, u[0], u[1], u[2]], ca)));
        for (sense, ext) in [(1.0, report.min), (-1.0, report.max)] {
            let (u, val) = sphere_extremum(modulus, 10_000, sense);
            let unit = ext
                .unit
                .expect("non-constant modulus has a location")
                .components();
            let d =
                ((u[0] - unit[0]).powi(2) + (u[1] - unit[1]).powi(2) + (u[2] - unit[2]).powi(2))
                    .sqrt();
            worst_pos = worst_pos.max(d);
            worst_val = worst_val.max((val - ext.modulus).abs());
        }
    }
    check(
        flat == 0 && worst_pos <= 1e-3 && worst_val <= 1e-6,
        format!("max position error {worst_pos:e}, max value error {worst_val:e}, constant-modulus draws {flat}"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("zero sphere of q^2+1", zero_sphere_of_q_squared_plus_one),
        (
            "hand symmetrization and product",
            hand_symmetrization_and_product,
        ),
        ("reciprocal series of 1-q", reciprocal_of_one_minus_q),
        ("geometric series spherical split", geometric_series_split),
        (
            "identity suite on random pairs",
            identity_suite_on_random_pairs,
        ),
        ("zero correspondence f / f^c", zero_correspondence),
        ("minimum modulus", minimum_modulus),
        ("counterexample witness", counterexample),
        ("circular open mapping", circular_open_mapping),
        ("modulus extrema closed form", modulus_extrema_closed_form),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {detail}", n + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
