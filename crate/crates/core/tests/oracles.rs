//! Library values against independent evaluations written here from the
//! defining formulas, plus frozen fixtures produced by those evaluations.

use num_complex::Complex64 as C;
use qdilog::dilog::{gb, gbv};
use qdilog::gamma::{gamma, hyp2f1_contour, hyp2f1_series};
use qdilog::ModularParam;
use std::f64::consts::PI;

const I: C = C::new(0.0, 1.0);

/// Ruijsenaars' exponent by the trapezoid rule in `u = ln y` with the first
/// Euler-Maclaurin end correction, plus the leading Taylor term on `[0, y_min]`.
fn ruijsenaars_trapezoid(z: C, b: f64) -> C {
    let (y_min, y_max, h) = (1e-4f64, 60.0f64, 2e-3);
    let f = |y: f64| {
        let s = (2.0 * y * z).sin() / (2.0 * (b * y).sinh() * (y / b).sinh()) - z / y;
        s / y
    };
    let (u0, u1) = (y_min.ln(), y_max.ln());
    let n = ((u1 - u0) / h).ceil() as usize;
    let h = (u1 - u0) / n as f64;
    let g = |u: f64| f(u.exp()) * u.exp();
    let mut sum = C::new(0.0, 0.0);
    for k in 0..=n {
        let w = if k == 0 || k == n { 0.5 } else { 1.0 };
        sum += w * g(u0 + k as f64 * h);
    }
    let d = 1e-3;
    let dg = |u: f64| (g(u + d) - g(u - d)) / (2.0 * d);
    sum -= h / 12.0 * (dg(u1) - dg(u0));
    let b2 = b * b;
    let head = z * (-2.0 * z * z / 3.0 - (b2 + 1.0 / b2) / 6.0) * y_min;
    // int_{y_max}^inf of -z / y^2
    sum * h + head - z / y_max
}

/// `G_b(x)` for real `b` from the integral, `0 < Re x < Q`.
fn gb_integral_oracle(x: C, b: f64) -> C {
    let q = b + 1.0 / b;
    let z = I * (x - q / 2.0);
    (I * ruijsenaars_trapezoid(z, b)).exp() * (-PI * I * z * z / 2.0 - PI * I * q * q / 8.0).exp()
}

/// `G_b(x)` for `Im b^2 > 0` from the two products truncated at `n` factors.
fn gb_product_oracle(x: C, b2: C, n: usize) -> C {
    let b = b2.sqrt();
    let zeta_bar = (-PI * I / 4.0 - PI * I * (b2 + 1.0 / b2) / 12.0).exp();
    let mut num = C::new(1.0, 0.0);
    let mut den = C::new(1.0, 0.0);
    for k in 0..n {
        let kf = k as f64;
        num *= 1.0 - (2.0 * PI * I * (x - (kf + 1.0) / b) / b).exp();
        den *= 1.0 - (2.0 * PI * I * b * (x + kf * b)).exp();
    }
    zeta_bar * num / den
}

/// Gamma from the Stirling series after shifting `Re z` above 15.
fn gamma_oracle(z: C) -> C {
    let mut w = z;
    let mut shift = C::new(1.0, 0.0);
    while w.re < 15.0 {
        shift *= w;
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    ((w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series).exp() / shift
}

fn close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

/// `G_b` at `b = 0.8`, `x = 0.5`, frozen from the trapezoid evaluation above.
const GB_08_HALF: C = C::new(0.2372083709438566, -0.6429814245704344);
/// `G_b` at `b^2 = 0.3 + 0.4i`, `x = 0.5`, frozen from the product above.
const GB_PROD_HALF: C = C::new(0.36556292499296217, -0.4725214804987509);

#[test]
fn integral_backend_matches_trapezoid() {
    let p = ModularParam::from_b(0.8).unwrap();
    for x in [C::new(0.5, 0.0), C::new(0.3, 0.2), C::new(1.6, -0.4), C::new(0.9, 0.0)] {
        let lib = gbv(x, &p, 1e-13).unwrap();
        let oracle = gb_integral_oracle(x, 0.8);
        assert!(close(lib, oracle, 1e-10), "x = {x}: {lib} vs {oracle}");
    }
}

#[test]
fn product_backend_matches_direct_product() {
    let b2 = C::new(0.3, 0.4);
    let p = ModularParam::from_b2(b2).unwrap();
    for x in [C::new(0.5, 0.0), C::new(0.2, 0.3), C::new(1.0, -0.2)] {
        let lib = gbv(x, &p, 1e-14).unwrap();
        let oracle = gb_product_oracle(x, b2, 400);
        assert!(close(lib, oracle, 1e-11), "x = {x}: {lib} vs {oracle}");
    }
}

#[test]
fn frozen_gb_fixtures() {
    let p = ModularParam::from_b(0.8).unwrap();
    let v = gb(C::new(0.5, 0.0), &p, 1e-12).unwrap();
    assert!(close(v.value, GB_08_HALF, 1e-11), "{}", v.value);
    assert!(close(gb_integral_oracle(C::new(0.5, 0.0), 0.8), GB_08_HALF, 1e-11));

    let b2 = C::new(0.3, 0.4);
    let p = ModularParam::from_b2(b2).unwrap();
    let v = gbv(C::new(0.5, 0.0), &p, 1e-14).unwrap();
    assert!(close(v, GB_PROD_HALF, 1e-12), "{v}");
    assert!(close(gb_product_oracle(C::new(0.5, 0.0), b2, 400), GB_PROD_HALF, 1e-12));
}

#[test]
fn gamma_matches_stirling() {
    for z in [C::new(0.5, 0.0), C::new(0.3, 0.7), C::new(-2.5, 1.0), C::new(7.2, -3.1), C::new(0.01, -0.02)] {
        let lib = gamma(z).unwrap();
        let oracle = gamma_oracle(z);
        assert!((lib - oracle).norm() <= 1e-12 * oracle.norm(), "z = {z}: {lib} vs {oracle}");
    }
    assert!((gamma(C::new(0.5, 0.0)).unwrap() - PI.sqrt()).norm() < 1e-14);
}

#[test]
fn hyp2f1_elementary_cases() {
    let one = C::new(1.0, 0.0);
    // 2F1(1, 1; 2; z) = -ln(1 - z) / z
    for z in [C::new(-0.4, 0.0), C::new(0.3, 0.2), C::new(-3.0, 0.5)] {
        let want = -(1.0 - z).ln() / z;
        let got = if z.norm() < 0.9 { hyp2f1_series(one, one, 2.0 * one, z) } else { hyp2f1_contour(one, one, 2.0 * one, z) };
        assert!((got.unwrap() - want).norm() < 1e-10, "z = {z}");
    }
    // 2F1(a, b; b; z) = (1 - z)^{-a}
    let (a, b) = (C::new(0.5, 0.2), C::new(1.3, 0.0));
    for z in [C::new(-0.5, 0.0), C::new(-2.0, 1.0)] {
        let want = (1.0 - z).powc(-a);
        let got = hyp2f1_contour(a, b, b, z).unwrap();
        assert!((got - want).norm() < 1e-9, "z = {z}: {got} vs {want}");
    }
}


