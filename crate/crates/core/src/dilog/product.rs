//! `G_b` for `Im b^2 > 0` from its infinite product
//! `zeta_bar * prod_{n>=1} (1 - e^{2 pi i (x - n/b)/b}) / prod_{n>=0} (1 - e^{2 pi i b (x + n b)})`.

use super::param::{ModularParam, Regime};
use super::{Backend, QDValue};
use crate::error::{Error, Result};
use crate::numerics::cplx::{ln_1p, one_minus_exp, I};
use crate::Complex;
use std::f64::consts::PI;

/// Factor magnitude below which the point counts as a pole or zero.
const PROXIMITY: f64 = 1e-12;
const MAX_TERMS: usize = 50_000_000;

/// `sum_{n >= start} log(1 - e^{a0 + n d})` with `|e^d| < 1`, truncated once
/// the geometric tail is below `tol / 10`. Returns the sum, the tail bound and
/// the smallest factor magnitude seen.
fn log_product(a0: Complex, d: Complex, start: usize, tol: f64) -> Result<(Complex, f64, f64)> {
    let ratio = d.re.exp();
    if !(ratio < 1.0) {
        return Err(Error::Domain("product does not converge".into()));
    }
    let mut sum = Complex::new(0.0, 0.0);
    let mut min_factor = f64::INFINITY;
    let mut n = start;
    let mut w = Complex::new(0.0, 0.0);
    loop {
        let a = if (n - start).is_multiple_of(64) {
            let a = a0 + d * n as f64;
            w = a.exp();
            a
        } else {
            w *= d.exp();
            a0 + d * n as f64
        };
        let mag = w.norm();
        let term = if mag < 0.5 { ln_1p(-w) } else {
            let f = one_minus_exp(a);
            min_factor = min_factor.min(f.norm());
            f.ln()
        };
        if mag < 0.5 {
            min_factor = min_factor.min(1.0 - mag);
        }
        sum += term;
        n += 1;
        let tail = mag * ratio / (1.0 - ratio) * 1.5;
        if tail < 0.1 * tol && mag < 0.5 {
            return Ok((sum, tail, min_factor));
        }
        if n - start > MAX_TERMS {
            return Err(Error::BudgetExhausted { value: sum, err: tail, tol });
        }
    }
}

/// `log G_b(x)` from the product, with the relative truncation error. The
/// imaginary part is not reduced to the principal branch.
pub fn log_gb_product(x: Complex, p: &ModularParam, tol: f64) -> Result<(Complex, f64)> {
    if p.regime != Regime::Product {
        return Err(Error::Precondition("gb_product needs Im b^2 > 0".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Precondition("tol must be positive".into()));
    }
    let b = p.b;
    let b2 = b * b;
    // numerator: n >= 1, exponent 2 pi i (x/b - n/b^2)
    let (num, tail1, min1) = log_product(2.0 * PI * I * x / b, -2.0 * PI * I / b2, 1, tol)?;
    // denominator: n >= 0, exponent 2 pi i (b x + n b^2)
    let (den, tail2, min2) = log_product(2.0 * PI * I * b * x, 2.0 * PI * I * b2, 0, tol)?;
    if min2 < PROXIMITY {
        return Err(Error::Pole(x));
    }
    if min1 < PROXIMITY {
        return Err(Error::Zero(x));
    }
    Ok((-p.zeta.ln() + num - den, tail1 + tail2))
}

/// Product-backend evaluation. Requires `Im b^2 > 0`.
pub fn gb_product(x: Complex, p: &ModularParam, tol: f64) -> Result<QDValue> {
    let (log_g, tail) = log_gb_product(x, p, tol)?;
    let value = log_g.exp();
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(QDValue { value, backend: Backend::Product, err_estimate: value.norm() * tail })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_origin_residue() {
        let p = ModularParam::from_b2(Complex::new(0.0, 0.5)).unwrap();
        let v = gb_product(Complex::new(0.01, 0.0), &p, 1e-14).unwrap().value;
        let want = 1.0 / (2.0 * PI * 0.01);
        assert!((v.norm() - want).abs() < 0.02 * want);
    }

    #[test]
    fn pole_is_flagged() {
        let p = ModularParam::from_b2(Complex::new(0.3, 0.4)).unwrap();
        assert!(matches!(gb_product(-p.b, &p, 1e-12), Err(Error::Pole(_))));
        assert!(matches!(gb_product(p.big_q, &p, 1e-12), Err(Error::Zero(_))));
    }
}
