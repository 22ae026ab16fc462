//! Ruijsenaars' integral
//! `G(z) = exp(i int_0^inf (dy/y) (sin(2yz) / (2 sinh(by) sinh(y/b)) - z/y))`.

use super::param::ModularParam;
use super::{Backend, QDValue};
use crate::error::{Error, Result};
use crate::numerics::cplx::{expm1, I};
use crate::numerics::quad::{de_rule, exp_sinh, tanh_sinh};
use crate::Complex;

/// `sin(2yz) / (2 sinh(by) sinh(y/b))`, written with decaying exponentials so
/// that nothing overflows for large `y`.
#[inline]
fn ratio(y: f64, z: Complex, b: Complex, q: Complex) -> Complex {
    let e1 = ((2.0 * I * z - q) * y).exp();
    let e2 = ((-2.0 * I * z - q) * y).exp();
    let sin_part = (e1 - e2) / (2.0 * I);
    let d = expm1(-2.0 * b * y) * expm1(-2.0 * y / b);
    2.0 * sin_part / d
}

/// `sin(w)/w - 1` (`sign = -1`) or `sinh(w)/w - 1` (`sign = 1`) without
/// cancellation near `w = 0`.
fn sinc_m1(w: Complex, sign: f64) -> Complex {
    if w.norm() < 0.5 {
        let w2 = w * w * sign;
        let mut term = Complex::new(1.0, 0.0);
        let mut sum = Complex::new(0.0, 0.0);
        for k in 1..=8 {
            term *= w2 / ((2 * k) * (2 * k + 1)) as f64;
            sum += term;
        }
        sum
    } else if sign < 0.0 {
        w.sin() / w - 1.0
    } else {
        w.sinh() / w - 1.0
    }
}

/// The integrand `(ratio - z/y) / y` on `(0, 1]`, assembled from
/// `sinc - 1` pieces so that the `O(y^2)` difference keeps full precision.
#[inline]
fn small_y(y: f64, z: Complex, b: Complex) -> Complex {
    let s = sinc_m1(2.0 * y * z, -1.0);
    let d1 = sinc_m1(b * y, 1.0);
    let d2 = sinc_m1(y / b, 1.0);
    let d = d1 + d2 + d1 * d2;
    z * (s - d) / ((1.0 + d) * y * y)
}

/// The integral in the exponent, without the factor `i`.
pub fn ruijsenaars_exponent(z: Complex, p: &ModularParam, tol: f64) -> Result<(Complex, f64)> {
    let b = p.b;
    let q = p.big_q;
    let kappa = q.re - 2.0 * z.im.abs();
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!("z = {z} outside the strip |Im z| < Re Q / 2")));
    }
    let y0 = 1e-3 / z.norm().max(1.0);
    // Taylor part on [0, y0]
    let b2 = b * b;
    let a1 = (b2 + 1.0 / b2) / 6.0;
    let a2 = (b2 * b2 + 1.0 / (b2 * b2)) / 120.0 + 1.0 / 36.0;
    let z2 = z * z;
    let c1 = -2.0 * z2 / 3.0 - a1;
    let c2 = 2.0 / 15.0 * z2 * z2 + 2.0 / 3.0 * z2 * a1 + a1 * a1 - a2;
    let head = z * c1 * y0 + z * c2 * y0 * y0 * y0 / 3.0;
    let mid = de_rule(tanh_sinh(y0, 1.0), |y| small_y(y, z, b), 0.5 * tol, 12)?;
    // on [1, inf) the -z/y^2 part integrates to -z
    let tail = de_rule(exp_sinh(1.0), |y| ratio(y, z, b, q) / y, 0.5 * tol, 12)?;
    Ok((head + mid.value + tail.value - z, mid.err_estimate + tail.err_estimate))
}

/// `G(b, 1/b; z)` for `|Im z| < Re Q / 2`.
pub fn ruijsenaars_g(z: Complex, p: &ModularParam, tol: f64) -> Result<QDValue> {
    let (e, err) = ruijsenaars_exponent(z, p, tol)?;
    let value = (I * e).exp();
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(QDValue { value, backend: Backend::Integral, err_estimate: value.norm() * err })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument() {
        let p = ModularParam::from_b(0.8).unwrap();
        let v = ruijsenaars_g(Complex::new(0.0, 0.0), &p, 1e-13).unwrap().value;
        assert!((v - 1.0).norm() < 1e-13);
    }

    #[test]
    fn odd_in_z() {
        let p = ModularParam::from_b(0.8).unwrap();
        let a = ruijsenaars_g(Complex::new(0.3, 0.0), &p, 1e-13).unwrap().value;
        let b = ruijsenaars_g(Complex::new(-0.3, 0.0), &p, 1e-13).unwrap().value;
        assert!((a * b - 1.0).norm() < 1e-10);
    }
}
