//! The b-hypergeometric function `F_b`.

use super::gb::gbv;
use super::identities::GB_TOL;
use super::param::{ModularParam, Regime};
use super::product::log_gb_product;
use crate::error::{Error, Result};
use crate::numerics::contour::{integrate_contour, Contour, Side};
use crate::numerics::cplx::I;
use crate::Complex;
use std::f64::consts::PI;

/// Largest `|Im s|` of a pole that still gets an explicit detour.
const POLE_BAND: f64 = 4.0;

/// `F_b(alpha, beta, gamma; z)`.
///
/// The integral over `tau` is taken along `tau = b s` with real `s`, which is
/// the real `tau` line for real `b` and the ray `arg b` otherwise. Poles of
/// `G_b(alpha + i tau) G_b(beta + i tau)` are kept above the path and those of
/// `G_b(-i tau) / G_b(gamma + i tau)` below it; any that fall on the wrong
/// side of `Im s = 0` within the truncation window get a detour.
pub fn fb_hypergeometric(alpha: Complex, beta: Complex, gamma: Complex, z: Complex, p: &ModularParam) -> Result<Complex> {
    if z.im == 0.0 && z.re >= 0.0 {
        return Err(Error::Branch(format!("F_b needs z off [0, inf), got {z}")));
    }
    let b = p.b;
    let mz = -z;
    let pre = lg(gamma, p)? - lg(alpha, p)? - lg(beta, p)?;
    let log_mz = mz.ln();
    let mut f = |s: Complex| {
        let tau = b * s;
        match (lg(alpha + I * tau, p), lg(beta + I * tau, p), lg(-I * tau, p), lg(gamma + I * tau, p)) {
            (Ok(ga), Ok(gbeta), Ok(g0), Ok(gg)) => {
                b * (I * s * log_mz + PI * I * tau * tau + ga + gbeta + g0 - gg).exp()
            }
            _ => Complex::new(f64::NAN, 0.0),
        }
    };
    let mut t = 8.0;
    let mut contour = build_contour(alpha, beta, gamma, p, t)?;
    // F_b is O(1) for moderate arguments, so the integral is about exp(-pre) in size
    let scale = (-pre.re).exp().max(1.0);
    contour.fit_truncation(&mut f, 1e-14 * scale, 64.0);
    if contour.truncation != t {
        t = contour.truncation;
        contour = build_contour(alpha, beta, gamma, p, t)?;
    }
    let v = integrate_contour(f, &contour, 1e-12 * scale)?.value;
    Ok(pre.exp() * v)
}

/// `log G_b`, in log form for the product regime so that large factors that
/// cancel in the integrand do not overflow.
fn lg(y: Complex, p: &ModularParam) -> Result<Complex> {
    match p.regime {
        Regime::Product => Ok(log_gb_product(y, p, GB_TOL)?.0),
        Regime::Integral => Ok(gbv(y, p, GB_TOL)?.ln()),
    }
}

fn build_contour(alpha: Complex, beta: Complex, gamma: Complex, p: &ModularParam, t: f64) -> Result<Contour> {
    let (upper, lower) = pole_families(alpha, beta, gamma, p, t + 1.0);
    let all: Vec<Complex> = upper.iter().chain(lower.iter()).copied().collect();
    let mut c = Contour::real_line(t);
    for (family, side, wrong) in [(&upper, Side::Below, true), (&lower, Side::Above, false)] {
        for &s in family.iter() {
            // an upper-family pole needs a detour when it is not strictly above the line, and vice versa
            let needs = if wrong { s.im <= 1e-9 } else { s.im >= -1e-9 };
            if needs && s.im.abs() < POLE_BAND {
                if s.re.abs() >= t {
                    return Err(Error::Precondition(format!("pole at s = {s} on the wrong side outside the window")));
                }
                c = c.with_default_detour(s, side, &all);
            }
        }
    }
    c.validate()?;
    Ok(c)
}

/// Poles in the `s` variable, split into the family that must lie above the
/// path and the family that must lie below it.
fn pole_families(alpha: Complex, beta: Complex, gamma: Complex, p: &ModularParam, window: f64) -> (Vec<Complex>, Vec<Complex>) {
    let b = p.b;
    let ib2 = 1.0 / p.b2();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let push = |v: &mut Vec<Complex>, s: Complex| {
        if s.re.abs() < window && s.im.abs() < POLE_BAND + 1.0 {
            v.push(s);
        }
    };
    for n in 0..12 {
        for m in 0..12 {
            let (nf, mf) = (n as f64, m as f64);
            for a in [alpha, beta] {
                push(&mut upper, I * (a / b + nf + mf * ib2));
            }
            push(&mut lower, -I * (nf + mf * ib2));
            push(&mut lower, -I * (nf + 1.0 - gamma / b + (mf + 1.0) * ib2));
        }
    }
    (upper, lower)
}

/// `F_b(alpha, beta, alpha; z)` collapses to `G_b(beta') / G_b(beta + beta')`
/// with `beta' = Q/2 - i log(-z) / (2 pi b)`; returns the relative residual.
pub fn fb_reduction_residual(alpha: Complex, beta: Complex, z: Complex, p: &ModularParam) -> Result<f64> {
    let lhs = fb_hypergeometric(alpha, beta, alpha, z, p)?;
    let bp = p.big_q / 2.0 - I * (-z).ln() / (2.0 * PI * p.b);
    let rhs = gbv(bp, p, GB_TOL)? / gbv(beta + bp, p, GB_TOL)?;
    Ok((lhs - rhs).norm() / rhs.norm())
}

/// `|F_b(b a, b b', b c; z) - 2F1(a, b', c; z)|` on the schedule `b^2 = i r`.
pub fn fb_limit_residual(a: f64, bb: f64, c: f64, z: f64, r: f64) -> Result<f64> {
    let p = ModularParam::limit(r)?;
    let q = fb_hypergeometric(p.b * a, p.b * bb, p.b * c, Complex::new(z, 0.0), &p)?;
    let cl = crate::gamma::hyp2f1_contour(a.into(), bb.into(), c.into(), Complex::new(z, 0.0))?;
    Ok((q - cl).norm())
}
