//! Residuals of the functional identities and integral theorems for `G_b`.

use super::gb::gbv;
use super::param::{ModularParam, Regime};
use crate::error::{Error, Result};
use crate::numerics::contour::{integrate_contour, Contour, Side};
use crate::numerics::cplx::{one_minus_exp, rel_diff, I};
use crate::numerics::residue::{circle_mean, residue_at};
use crate::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Accuracy requested from every `G_b` evaluation in this module.
pub const GB_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    FunctionalB,
    FunctionalBinv,
    Reflection,
    Conjugation,
    SelfDuality,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 5] = [
        IdentityKind::FunctionalB,
        IdentityKind::FunctionalBinv,
        IdentityKind::Reflection,
        IdentityKind::Conjugation,
        IdentityKind::SelfDuality,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IdentityKind::FunctionalB => "functional_b",
            IdentityKind::FunctionalBinv => "functional_binv",
            IdentityKind::Reflection => "reflection",
            IdentityKind::Conjugation => "conjugation",
            IdentityKind::SelfDuality => "selfduality",
        }
    }
}

/// Relative residual of one identity at `x`.
///
/// For `Im b^2 > 0` the conjugate of `G_b` is the reciprocal of `G` at the
/// parameter `1/conj(b)` (again in the product regime), and `G_{1/b}` is taken
/// from the integral backend at complex `1/b`.
pub fn verify_identity(kind: IdentityKind, x: Complex, p: &ModularParam) -> Result<f64> {
    let g = |y: Complex| gbv(y, p, GB_TOL);
    let q = p.big_q;
    match kind {
        IdentityKind::FunctionalB => {
            let lhs = g(x + p.b)?;
            let rhs = one_minus_exp(2.0 * PI * I * p.b * x) * g(x)?;
            Ok(rel_diff(lhs, rhs))
        }
        IdentityKind::FunctionalBinv => {
            let lhs = g(x + 1.0 / p.b)?;
            let rhs = one_minus_exp(2.0 * PI * I * x / p.b) * g(x)?;
            Ok(rel_diff(lhs, rhs))
        }
        IdentityKind::Reflection => {
            let lhs = g(x)? * g(q - x)?;
            let rhs = (PI * I * x * (x - q)).exp();
            Ok(rel_diff(lhs, rhs))
        }
        IdentityKind::Conjugation => {
            let other = match p.regime {
                Regime::Integral if p.is_real_b() => *p,
                _ => p.conj_dual(),
            };
            let lhs = g(x)?.conj() * gbv(other.big_q - x.conj(), &other, GB_TOL)?;
            Ok(rel_diff(lhs, Complex::new(1.0, 0.0)))
        }
        IdentityKind::SelfDuality => {
            let d = if p.is_real_b() { ModularParam::from_b(1.0 / p.b.re)? } else { p.dual() };
            let d = if d.regime == Regime::Product { d } else { ModularParam::integral_complex(d.b)? };
            Ok(rel_diff(gbv(x, &d, GB_TOL)?, g(x)?))
        }
    }
}

/// `-(1/2 pi) prod_{k=1}^n (1 - q^{2k})^{-1} prod_{l=1}^m (1 - qt^{-2l})^{-1}`.
pub fn residue_closed_form(n: u32, m: u32, p: &ModularParam) -> Complex {
    let q2 = p.q * p.q;
    let qt2 = 1.0 / (p.q_tilde() * p.q_tilde());
    let mut v = Complex::new(-1.0 / (2.0 * PI), 0.0);
    for k in 1..=n {
        v /= 1.0 - q2.powu(k);
    }
    for l in 1..=m {
        v /= 1.0 - qt2.powu(l);
    }
    v
}

/// Distance from `z0 = nb + m/b` to the nearest other point of that lattice.
fn lattice_gap(n: u32, m: u32, b: Complex) -> f64 {
    let z0 = b * n as f64 + m as f64 / b;
    let mut gap = f64::INFINITY;
    for i in 0..=(n + 3) {
        for j in 0..=(m + 3) {
            if i == n && j == m {
                continue;
            }
            gap = gap.min((b * i as f64 + j as f64 / b - z0).norm());
        }
    }
    gap
}

/// Residue of `1/G_b(Q + z)` at `z = nb + m/b` against the closed form.
pub fn residue_check(n: u32, m: u32, p: &ModularParam) -> Result<f64> {
    let z0 = p.b * n as f64 + m as f64 / p.b;
    let radius = 0.25 * lattice_gap(n, m, p.b).min(1.0);
    let r = residue_at(
        |z| match gbv(p.big_q + z, p, GB_TOL) {
            Ok(v) => 1.0 / v,
            Err(_) => Complex::new(f64::NAN, 0.0),
        },
        z0,
        radius,
    )?;
    Ok(rel_diff(r, residue_closed_form(n, m, p)))
}

/// Offset of the shifted lines used for integrals written along `R +- i0`.
fn line_offset(p: &ModularParam) -> f64 {
    0.5 * p.b.re.min((1.0 / p.b).re).min(0.5 * p.big_q.re)
}

fn fit_and_integrate<F: FnMut(Complex) -> Complex>(mut f: F, mut c: Contour, scale: f64) -> Result<Complex> {
    let tol = 1e-10 * scale.max(1e-3);
    c.fit_truncation(&mut f, 1e-2 * tol, 120.0);
    Ok(integrate_contour(f, &c, tol)?.value)
}

/// Nearest poles of `1/G_b(Q + i tau)` and `G_b(alpha + i tau)` other than 0.
fn tau_neighbours(alpha: Complex, p: &ModularParam) -> Vec<Complex> {
    let b = p.b;
    vec![-I * b, -I / b, I * alpha, I * (alpha + b), I * (alpha + 1.0 / b)]
}

/// Relative residual of
/// `int_C e^{-2 pi tau beta} G_b(alpha + i tau) / G_b(Q + i tau) d tau = G_b(alpha) G_b(beta) / G_b(alpha + beta)`
/// with `C` the real line passing above `tau = 0`.
pub fn tau_beta_residual(alpha: Complex, beta: Complex, p: &ModularParam) -> Result<f64> {
    if p.is_real_b() && !(beta.re > 0.0 && (alpha + beta - p.big_q).re < 0.0 && alpha.re > 0.0) {
        return Err(Error::Decay(format!(
            "tau-beta needs Re beta > 0, Re alpha > 0 and Re(alpha + beta) < Q (alpha = {alpha}, beta = {beta})"
        )));
    }
    let rhs = gbv(alpha, p, GB_TOL)? * gbv(beta, p, GB_TOL)? / gbv(alpha + beta, p, GB_TOL)?;
    let f = |tau: Complex| {
        match (gbv(alpha + I * tau, p, GB_TOL), gbv(p.big_q + I * tau, p, GB_TOL)) {
            (Ok(a), Ok(d)) => (-2.0 * PI * tau * beta).exp() * a / d,
            _ => Complex::new(f64::NAN, 0.0),
        }
    };
    let zero = Complex::new(0.0, 0.0);
    let c = Contour::real_line(4.0).with_default_detour(zero, Side::Above, &tau_neighbours(alpha, p));
    let lhs = fit_and_integrate(f, c, rhs.norm())?;
    Ok(rel_diff(lhs, rhs))
}

/// Left and right sides of one of the four Fourier transformation formulas.
pub fn fourier_gb_sides(which: u8, r: f64, p: &ModularParam) -> Result<(Complex, Complex)> {
    let q = p.big_q;
    let mid = gbv(q / 2.0 - I * r, p, GB_TOL)?;
    let zero = Complex::new(0.0, 0.0);
    let c = line_offset(p);
    let nb = [I * p.b, -I * p.b, I / p.b, -I / p.b];
    let inv = |t: Complex| gbv(q + I * t, p, GB_TOL).map(|v| 1.0 / v);
    let fwd = |t: Complex| gbv(I * t, p, GB_TOL);
    let nan = Complex::new(f64::NAN, 0.0);
    match which {
        1 => {
            let rhs = p.zeta_bar() / mid;
            let f = |t: Complex| inv(t).map_or(nan, |v| (2.0 * PI * I * t * r - PI * I * t * t).exp() * v);
            let cont = Contour::line(-c, 4.0).with_default_detour(zero, Side::Above, &nb);
            Ok((fit_and_integrate(f, cont, rhs.norm())?, rhs))
        }
        2 => {
            let rhs = p.zeta * mid;
            let f = |t: Complex| inv(t).map_or(nan, |v| (2.0 * PI * I * t * r - PI * q * t).exp() * v);
            let cont = Contour::line(-c, 4.0).with_default_detour(zero, Side::Above, &nb);
            Ok((fit_and_integrate(f, cont, rhs.norm())?, rhs))
        }
        3 => {
            let rhs = p.zeta_bar() / mid;
            let f = |t: Complex| fwd(t).map_or(nan, |v| (-2.0 * PI * I * t * r - PI * q * t).exp() * v);
            let cont = Contour::line(c, 4.0).with_default_detour(zero, Side::Below, &nb);
            Ok((fit_and_integrate(f, cont, rhs.norm())?, rhs))
        }
        4 => {
            let rhs = p.zeta * mid;
            let f = |t: Complex| fwd(t).map_or(nan, |v| (-2.0 * PI * I * t * r + PI * I * t * t).exp() * v);
            let cont = Contour::line(c, 4.0).with_default_detour(zero, Side::Below, &nb);
            Ok((fit_and_integrate(f, cont, rhs.norm())?, rhs))
        }
        _ => Err(Error::Precondition(format!("Fourier formula index {which} not in 1..=4"))),
    }
}

pub fn fourier_gb_residual(which: u8, r: f64, p: &ModularParam) -> Result<f64> {
    let (lhs, rhs) = fourier_gb_sides(which, r, p)?;
    Ok(rel_diff(lhs, rhs))
}

/// `b [t; tau]_b = b G_b(-ib tau) G_b(ib tau - ib t) / G_b(-ib t)`.
pub fn qbinom_kernel(t: Complex, tau: Complex, p: &ModularParam) -> Result<Complex> {
    let b = p.b;
    Ok(b * gbv(-I * b * tau, p, GB_TOL)? * gbv(I * b * (tau - t), p, GB_TOL)? / gbv(-I * b * t, p, GB_TOL)?)
}

/// Gaussian binomial coefficient in base `x`.
pub fn gauss_binomial(n: u32, k: u32, x: Complex) -> Complex {
    let mut v = Complex::new(1.0, 0.0);
    for i in 0..k {
        v *= (1.0 - x.powu(n - i)) / (1.0 - x.powu(i + 1));
    }
    v
}

/// `2 pi i` times the residue of `b [t; tau]_b` at `tau = t + ik`, evaluated at
/// `t = -in`. The kernel vanishes identically at that `t`, so the residue is
/// taken as a function of `t` on a small circle around `-in`, where it is
/// holomorphic, and its mean is returned.
pub fn qbinom_residue(n: u32, k: u32, p: &ModularParam) -> Result<Complex> {
    const DELTA: f64 = 0.05;
    const TAU_RADIUS: f64 = 0.02;
    let t0 = Complex::new(0.0, -(n as f64));
    let mut fail = None;
    let mean = circle_mean(
        |t| {
            let centre = t + I * k as f64;
            let r = residue_at(
                |tau| qbinom_kernel(t, tau, p).unwrap_or(Complex::new(f64::NAN, 0.0)),
                centre,
                TAU_RADIUS,
            );
            match r {
                Ok(v) => 2.0 * PI * I * v / (t - t0),
                Err(e) => {
                    fail.get_or_insert(e);
                    Complex::new(0.0, 0.0)
                }
            }
        },
        t0,
        DELTA,
    )?;
    if let Some(e) = fail {
        return Err(e);
    }
    // circle_mean integrates f(t) dt / (2 pi i); dividing by (t - t0) turns that into a mean value
    Ok(mean)
}

/// Largest relative deviation over `k = 0..=n` of the residues from the
/// Gaussian binomials `[n, k]` in base `q^{-2}`.
pub fn qbinom_residue_check(n: u32, p: &ModularParam) -> Result<f64> {
    if !(1..=5).contains(&n) {
        return Err(Error::Precondition(format!("n = {n} outside 1..=5")));
    }
    let x = 1.0 / (p.q * p.q);
    let mut worst: f64 = 0.0;
    for k in 0..=n {
        worst = worst.max(rel_diff(qbinom_residue(n, k, p)?, gauss_binomial(n, k, x)));
    }
    Ok(worst)
}

/// `|2 pi x G_b(x) - 1|` after Richardson extrapolation of the values at
/// `x = h, h/2, h/4` with `h = 1e-2`, assuming an expansion in powers of `x`.
pub fn origin_residue_extrapolated(p: &ModularParam) -> Result<f64> {
    let v = |x: f64| -> Result<Complex> {
        let x = Complex::new(x, 0.0);
        Ok(2.0 * PI * x * gbv(x, p, GB_TOL)?)
    };
    let (v0, v1, v2) = (v(1e-2)?, v(5e-3)?, v(2.5e-3)?);
    let r1 = 2.0 * v1 - v0;
    let r2 = 2.0 * v2 - v1;
    let r = (4.0 * r2 - r1) / 3.0;
    Ok((r - 1.0).norm())
}

/// Relative difference between the integral backend at real `b` and the
/// product backend at `b^2 + i eps`, extrapolated linearly to `eps = 0` from
/// `eps = 1e-2` and `1e-3`.
pub fn backend_agreement(x: Complex, b: f64) -> Result<f64> {
    let real = ModularParam::from_b(b)?;
    let g = gbv(x, &real, GB_TOL)?;
    let at = |eps: f64| -> Result<Complex> {
        let p = ModularParam::from_b2(Complex::new(b * b, eps))?;
        gbv(x, &p, GB_TOL)
    };
    let (g1, g2) = (at(1e-2)?, at(1e-3)?);
    let extrapolated = (10.0 * g2 - g1) / 9.0;
    Ok(rel_diff(extrapolated, g))
}
