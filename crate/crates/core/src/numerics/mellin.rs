//! Mellin transform, its inverse on a vertical line, and the weighted
//! Parseval identity.

use crate::error::{Error, Result};
use crate::numerics::contour::{integrate_contour_with, Contour, QuadOptions};
use crate::numerics::quad::{de_rule, integrate_interval, tanh_sinh};
use crate::Complex;
use std::f64::consts::PI;

/// Open strip `lo < Re s < hi` where a Mellin transform converges.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Strip {
    pub lo: f64,
    pub hi: f64,
}

impl Strip {
    pub fn new(lo: f64, hi: f64) -> Self {
        Strip { lo, hi }
    }

    pub fn contains(&self, sigma: f64) -> bool {
        sigma > self.lo && sigma < self.hi
    }
}

/// Range of `u` outside which `|e^{u sigma} f(e^u)|` is negligible.
fn support<F: Fn(f64) -> Complex>(f: &F, sigma: f64) -> (f64, f64) {
    let g = |u: f64| {
        let x = u.exp();
        if x == 0.0 || !x.is_finite() {
            return 0.0;
        }
        let v = f(x).norm();
        if v == 0.0 {
            0.0
        } else {
            (u * sigma + v.ln()).exp()
        }
    };
    let mut peak: f64 = 0.0;
    for k in -8..=8 {
        peak = peak.max(g(k as f64 * 0.5));
    }
    let mut ends = [0.0; 2];
    for (i, dir) in [-1.0, 1.0].into_iter().enumerate() {
        let mut u: f64 = 0.0;
        let mut small = 0;
        while u.abs() < 745.0 {
            u += dir;
            let v = g(u);
            peak = peak.max(v);
            if v <= 1e-18 * peak {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        ends[i] = u;
    }
    (ends[0], ends[1])
}

/// `int_0^inf x^{s-1} f(x) dx`, computed as `int e^{us} f(e^u) du` with
/// tanh-sinh nodes in `u` over the range where the integrand is significant.
pub fn mellin_forward<F: Fn(f64) -> Complex>(f: F, s: Complex, strip: Strip, tol: f64) -> Result<Complex> {
    if !strip.contains(s.re) {
        return Err(Error::Divergent(format!(
            "Re s = {} outside strip ({}, {})",
            s.re, strip.lo, strip.hi
        )));
    }
    let (a, b) = support(&f, s.re);
    let r = de_rule(
        tanh_sinh(a, b),
        |u| {
            let fx = f(u.exp());
            if fx == Complex::new(0.0, 0.0) {
                fx
            } else {
                (s * u).exp() * fx
            }
        },
        tol,
        14,
    )?;
    Ok(r.value)
}

/// `(1/2 pi) int x^{-s} phi(s) dt` over `s = c + it`.
pub fn mellin_inverse<P: FnMut(Complex) -> Complex>(mut phi: P, x: f64, c: f64, tol: f64) -> Result<Complex> {
    if !(x > 0.0) {
        return Err(Error::Domain("mellin_inverse needs x > 0".into()));
    }
    let lx = x.ln();
    let mut g = |t: Complex| {
        let s = Complex::new(c, 0.0) + Complex::new(0.0, 1.0) * t;
        (-s * lx).exp() * phi(s) / (2.0 * PI)
    };
    let mut contour = Contour::real_line(8.0);
    contour.fit_truncation(&mut g, 0.1 * tol, 400.0);
    let r = integrate_contour_with(g, &contour, tol, QuadOptions::default())?;
    Ok(r.value)
}

/// `| int_0^inf |f|^2 x^{2 sigma - 1} dx - (1/2 pi) int |Mf(sigma + it)|^2 dt |`
/// with both sides computed by quadrature. At `sigma = 1/2` the weight drops
/// out and this is the unweighted Plancherel identity.
pub fn parseval_residual<F: Fn(f64) -> Complex>(f: F, sigma: f64, strip: Strip, tol: f64) -> Result<f64> {
    let lhs = {
        let (a, b) = support(&|x: f64| Complex::new(f(x).norm_sqr(), 0.0), 2.0 * sigma);
        de_rule(
            tanh_sinh(a, b),
            |u| {
                let v = f(u.exp()).norm_sqr();
                if v == 0.0 {
                    Complex::new(0.0, 0.0)
                } else {
                    Complex::new((2.0 * sigma * u + v.ln()).exp(), 0.0)
                }
            },
            0.01 * tol,
            14,
        )?
        .value
        .re
    };
    let inner_tol = 1e-3 * tol;
    let m2 = |t: f64| -> Result<f64> {
        Ok(mellin_forward(&f, Complex::new(sigma, t), strip, inner_tol)?.norm_sqr())
    };
    let mut t_max = 4.0;
    while t_max < 400.0 && m2(t_max)?.max(m2(-t_max)?) > 0.01 * tol {
        t_max *= 1.5;
    }
    let mut failure = None;
    let rhs = integrate_interval(
        |t| match m2(t) {
            Ok(v) => Complex::new(v, 0.0),
            Err(e) => {
                failure.get_or_insert(e);
                Complex::new(0.0, 0.0)
            }
        },
        -t_max,
        t_max,
        8,
        0.1 * tol,
        200_000,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((lhs - rhs.value.re / (2.0 * PI)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(x: f64) -> Complex {
        Complex::new((-x).exp(), 0.0)
    }

    #[test]
    fn forward_examples() {
        let pos = Strip::new(0.0, f64::INFINITY);
        assert!((mellin_forward(e, Complex::new(1.0, 0.0), pos, 1e-13).unwrap() - 1.0).norm() < 1e-12);
        assert!((mellin_forward(e, Complex::new(4.0, 0.0), pos, 1e-13).unwrap() - 6.0).norm() < 1e-11);
        let v = mellin_forward(|x| Complex::new(1.0 / (1.0 + x), 0.0), Complex::new(0.5, 0.0), Strip::new(0.0, 1.0), 1e-12)
            .unwrap();
        assert!((v - PI).norm() < 1e-10);
    }

    #[test]
    fn forward_outside_strip_is_divergent() {
        let r = mellin_forward(e, Complex::new(-0.5, 0.0), Strip::new(0.0, f64::INFINITY), 1e-10);
        assert!(matches!(r, Err(Error::Divergent(_))));
    }
}
