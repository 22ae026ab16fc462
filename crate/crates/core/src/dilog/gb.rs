//! Regime dispatch for `G_b` and the functional-equation continuation of the
//! integral backend.

use super::param::{ModularParam, Regime};
use super::product::gb_product;
use super::ruijsenaars::ruijsenaars_g;
use super::{Backend, QDValue};
use crate::error::{Error, Result};
use crate::numerics::cplx::{one_minus_exp, I};
use crate::Complex;
use std::f64::consts::PI;

/// Distance from the edges of `0 < Re x < Re Q` kept by the base strip.
pub const STRIP_MARGIN: f64 = 0.1;
const MAX_SHIFTS: i64 = 10_000;

/// Is `x` within `eps` of `-n b - m/b` for some `n, m >= 0`?
fn on_lattice(x: Complex, b: Complex, eps: f64) -> bool {
    let step = b.re.max(1e-300);
    let mut n = 0i64;
    while (n as f64) * step <= -x.re + eps + 1e-9 {
        let rest = x + b * n as f64;
        // -rest = m / b
        let m = (-rest * b).re.round();
        if m >= 0.0 && (rest + m / b).norm() < eps {
            return true;
        }
        n += 1;
        if n > MAX_SHIFTS {
            break;
        }
    }
    false
}

fn lattice_eps(x: Complex) -> f64 {
    1e-12 * (1.0 + x.norm())
}

/// Pole / zero screening shared by every backend.
pub fn check_lattice(x: Complex, p: &ModularParam) -> Result<()> {
    let eps = lattice_eps(x);
    if on_lattice(x, p.b, eps) {
        return Err(Error::Pole(x));
    }
    if on_lattice(p.big_q - x, p.b, eps) {
        return Err(Error::Zero(x));
    }
    Ok(())
}

/// Integral backend on the base strip, converted from Ruijsenaars' `G`.
fn gb_integral_base(x: Complex, p: &ModularParam, tol: f64) -> Result<QDValue> {
    let z = I * (x - p.big_q / 2.0);
    let g = ruijsenaars_g(z, p, tol)?;
    let conv = (-PI * I * z * z / 2.0 - PI * I * p.big_q * p.big_q / 8.0).exp();
    Ok(QDValue { value: g.value * conv, backend: Backend::Integral, err_estimate: g.err_estimate * conv.norm() })
}

/// Integral backend with continuation by `x -> x +- b`.
pub fn gb_integral(x: Complex, p: &ModularParam, tol: f64) -> Result<QDValue> {
    check_lattice(x, p)?;
    let b = p.b;
    let lo = STRIP_MARGIN;
    let hi = p.big_q.re - STRIP_MARGIN;
    if hi - lo <= b.re {
        return Err(Error::Domain(format!("base strip too narrow for b = {b}")));
    }
    let k = if x.re < lo {
        ((lo - x.re) / b.re).ceil() as i64
    } else if x.re > hi {
        -(((x.re - hi) / b.re).ceil() as i64)
    } else {
        0
    };
    if k.abs() > MAX_SHIFTS {
        return Err(Error::Domain(format!("x = {x} too far from the base strip")));
    }
    let base = x + b * k as f64;
    let g = gb_integral_base(base, p, tol)?;
    // G(x + b) = (1 - e^{2 pi i b x}) G(x)
    let mut factor = Complex::new(1.0, 0.0);
    if k > 0 {
        for j in 0..k {
            factor /= one_minus_exp(2.0 * PI * I * b * (x + b * j as f64));
        }
    } else {
        for j in 1..=-k {
            factor *= one_minus_exp(2.0 * PI * I * b * (x - b * j as f64));
        }
    }
    let value = g.value * factor;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(QDValue {
        value,
        backend: if k == 0 { Backend::Integral } else { Backend::FunctionalContinuation },
        err_estimate: g.err_estimate * factor.norm(),
    })
}

/// `G_b(x)`, dispatched on the regime of `p`.
pub fn gb(x: Complex, p: &ModularParam, tol: f64) -> Result<QDValue> {
    if !(x.re.is_finite() && x.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    match p.regime {
        Regime::Product => {
            check_lattice(x, p)?;
            gb_product(x, p, tol)
        }
        Regime::Integral => gb_integral(x, p, tol),
    }
}

/// Value-only shorthand.
pub fn gbv(x: Complex, p: &ModularParam, tol: f64) -> Result<Complex> {
    Ok(gb(x, p, tol)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_value() {
        let p = ModularParam::from_b(0.7).unwrap();
        let v = gbv(p.big_q / 2.0, &p, 1e-13).unwrap();
        let want = (-PI * I * p.big_q * p.big_q / 8.0).exp();
        assert!((v - want).norm() < 1e-12);
    }

    #[test]
    fn lattice_points_are_flagged() {
        let p = ModularParam::from_b(0.7).unwrap();
        let pole = Complex::new(-2.0 * 0.7 - 1.0 / 0.7, 0.0);
        assert!(matches!(gb(pole, &p, 1e-10), Err(Error::Pole(_))));
        assert!(matches!(gb(p.big_q + 0.7, &p, 1e-10), Err(Error::Zero(_))));
    }
}
