//! The `b^2 = i r -> i0+` limit of `G_b` towards the gamma function.

use super::gb::gbv;
use super::identities::GB_TOL;
use super::param::ModularParam;
use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::numerics::cplx::{ln_1p, one_minus_exp, rpow, I};
use crate::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitKind {
    /// `(2 pi b) G_b(bx) / (2 pi r)^x -> Gamma(x)`
    Glim,
    /// `(2 pi b) G_b(Q + bx) / (2 pi r)^{x+1} -> (1 - e^{2 pi i x}) Gamma(x + 1)`
    GlimQ,
    /// `eta(i/r) = sqrt(r) eta(ir)`, relative residual; `x` is unused
    Eta,
    /// the product of the two scaled limits at `x` and `-x`, which should tend to 1
    ReflectionCompat,
}

/// `(2 pi b) G_b(bx) / (2 pi r)^x`.
pub fn glim_approximant(x: Complex, p: &ModularParam, r: f64) -> Result<Complex> {
    Ok(2.0 * PI * p.b * gbv(p.b * x, p, GB_TOL)? / rpow(2.0 * PI * r, x))
}

/// `(2 pi b) G_b(Q + bx) / (2 pi r)^{x+1}`. At positive integers `x` the
/// point `Q + bx` is a zero of `G_b` and the value is 0.
pub fn glimq_approximant(x: Complex, p: &ModularParam, r: f64) -> Result<Complex> {
    let g = match gbv(p.big_q + p.b * x, p, GB_TOL) {
        Err(Error::Zero(_)) => return Ok(Complex::new(0.0, 0.0)),
        g => g?,
    };
    Ok(2.0 * PI * p.b * g / rpow(2.0 * PI * r, x + 1.0))
}

/// `log prod_{n>=1} (1 - e^{-2 pi t n})` for `t > 0`, summed until the terms
/// drop below `1e-18`.
fn log_euler(t: f64) -> f64 {
    let mut s = 0.0;
    let mut n = 1.0;
    loop {
        let w = (-2.0 * PI * t * n).exp();
        s += ln_1p(Complex::new(-w, 0.0)).re;
        if w < 1e-18 {
            return s;
        }
        n += 1.0;
    }
}

/// `eta(i t) = e^{-pi t/12} prod (1 - e^{-2 pi t n})`.
pub fn eta_imag(t: f64) -> f64 {
    (-PI * t / 12.0 + log_euler(t)).exp()
}

pub fn classical_limit_residual(kind: LimitKind, x: Complex, r: f64) -> Result<f64> {
    let p = ModularParam::limit(r)?;
    match kind {
        LimitKind::Glim => {
            let g = gamma(x)?;
            Ok((glim_approximant(x, &p, r)? - g).norm())
        }
        LimitKind::GlimQ => {
            let target = one_minus_exp(2.0 * PI * I * x) * gamma(x + 1.0)?;
            Ok((glimq_approximant(x, &p, r)? - target).norm())
        }
        LimitKind::Eta => {
            let lhs = eta_imag(1.0 / r);
            let rhs = r.sqrt() * eta_imag(r);
            Ok((lhs - rhs).abs() / rhs.abs())
        }
        LimitKind::ReflectionCompat => {
            if x.im == 0.0 && x.re.fract() == 0.0 {
                return Err(Error::Pole(x));
            }
            let a = glim_approximant(x, &p, r)?;
            let bq = glimq_approximant(-x, &p, r)?;
            // (2 pi r) / (2 pi b)^2 = -i / (2 pi) exactly; e^{-pi i bx(bx - Q)} tends to e^{pi i x}
            let v = a * bq * (-I / (2.0 * PI)) * (PI * I * x).exp();
            Ok((v - 1.0).norm())
        }
    }
}
