//! Small complex helpers that the standard `Complex64` API lacks.

use crate::Complex;
use std::f64::consts::PI;

pub const I: Complex = Complex::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// `e^w - 1` without cancellation for small `|w|`.
pub fn expm1(w: Complex) -> Complex {
    if w.norm() > 0.5 {
        return w.exp() - 1.0;
    }
    let (s, co) = w.im.sin_cos();
    let half = (0.5 * w.im).sin();
    let em1 = w.re.exp_m1();
    Complex::new(em1 * co - 2.0 * half * half, w.re.exp() * s)
}

/// `1 - e^w`, accurate near the zeros of the factor.
#[inline]
pub fn one_minus_exp(w: Complex) -> Complex {
    -expm1(w)
}

/// Principal `log(1 + z)`, accurate for small `|z|`.
pub fn ln_1p(z: Complex) -> Complex {
    if z.norm() > 0.5 {
        return (z + 1.0).ln();
    }
    let m = 2.0 * z.re + z.re * z.re + z.im * z.im;
    Complex::new(0.5 * m.ln_1p(), z.im.atan2(1.0 + z.re))
}

/// `e^{2 pi i z}`.
#[inline]
pub fn e2pi(z: Complex) -> Complex {
    (2.0 * PI * I * z).exp()
}

/// Principal power `base^expo` with `arg(base)` in `(-pi, pi]`.
pub fn cpow(base: Complex, expo: Complex) -> Complex {
    if base.re == 0.0 && base.im == 0.0 {
        return Complex::new(0.0, 0.0);
    }
    (expo * base.ln()).exp()
}

/// Real positive base raised to a complex power.
#[inline]
pub fn rpow(base: f64, expo: Complex) -> Complex {
    (expo * base.ln()).exp()
}

/// Relative difference `|a - b| / |b|`, falling back to absolute when `b` vanishes.
pub fn rel_diff(a: Complex, b: Complex) -> f64 {
    let d = (a - b).norm();
    let s = b.norm();
    if s > 0.0 {
        d / s
    } else {
        d
    }
}

#[inline]
pub fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
