//! The classical ax+b group, its representations `R_lambda` in the point and
//! Mellin pictures, the tensor product decompositions and the gamma-kernel
//! intertwiners of `R_+ (x) R_+`.
//!
//! Mellin picture convention: `f(x) = int x^{-iw} F(w) dw`, so that
//! `F(w) = (1/2 pi) (Mf)(iw)`.

use crate::error::{Error, Result};
use crate::gamma::{gamma, rgamma};
use crate::numerics::contour::{integrate_contour, Contour, Side};
use crate::numerics::cplx::{cpow, rel_diff, I};
use crate::numerics::mellin::{mellin_forward, Strip};
use crate::numerics::quad::{de_rule, gauss_legendre, tanh_sinh};
use crate::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    /// `(a b; 0 1)`
    Standard,
    /// `(a 0; c 1)`
    Transpose,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: f64,
    pub shift: f64,
    pub form: Form,
}

impl GroupElement {
    pub fn new(a: f64, shift: f64) -> Result<Self> {
        Self::with_form(a, shift, Form::Standard)
    }

    pub fn transpose(a: f64, c: f64) -> Result<Self> {
        Self::with_form(a, c, Form::Transpose)
    }

    fn with_form(a: f64, shift: f64, form: Form) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && shift.is_finite()) {
            return Err(Error::Precondition(format!("group element needs a > 0, got a = {a}")));
        }
        Ok(GroupElement { a, shift, form })
    }

    pub fn identity() -> Self {
        GroupElement { a: 1.0, shift: 0.0, form: Form::Standard }
    }

    /// Matrix product `self * other`; both must have the same form.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.form != other.form {
            return Err(Error::Precondition("cannot compose standard and transpose elements".into()));
        }
        let shift = match self.form {
            Form::Standard => self.a * other.shift + self.shift,
            Form::Transpose => self.shift * other.a + other.shift,
        };
        Ok(GroupElement { a: self.a * other.a, shift, form: self.form })
    }

    /// The standard-form element whose action equals this one: a transpose
    /// element acts as the inverse `(1/a, -c/a)`.
    fn acting(&self) -> (f64, f64) {
        match self.form {
            Form::Standard => (self.a, self.shift),
            Form::Transpose => (1.0 / self.a, -self.shift / self.a),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepLabel {
    Lambda(Complex),
    Rho(f64),
}

impl RepLabel {
    /// `R_+ = R_{-i}`
    pub fn plus() -> Self {
        RepLabel::Lambda(Complex::new(0.0, -1.0))
    }

    /// `R_- = R_{i}`
    pub fn minus() -> Self {
        RepLabel::Lambda(Complex::new(0.0, 1.0))
    }
}

/// `R(g) f (x)`; for `T_rho` the value `f(x)` is multiplied by `a^{i rho}`.
pub fn act_point<F: Fn(f64) -> Complex>(g: &GroupElement, lab: RepLabel, f: F, x: f64) -> Complex {
    match lab {
        RepLabel::Lambda(l) => {
            let (a, b) = g.acting();
            (l * b * x).exp() * f(a * x)
        }
        RepLabel::Rho(rho) => Complex::new(0.0, rho * g.a.ln()).exp() * f(x),
    }
}

/// Offset of the Mellin-picture line above `Im w`.
pub const MELLIN_LINE_OFFSET: f64 = 0.25;

/// `R(g) F (w) = int K(w, z; g) F(z) dz` with
/// `K = Gamma(iw - iz) a^{-iw} (-lambda b / a)^{iz - iw} / (2 pi)` along
/// `Im z = Im w + 0.25`, above the kernel poles at `z = w - in`. `F` must be
/// analytic between that line and the real axis where it is evaluated and
/// decay along it.
pub fn act_mellin<F: Fn(Complex) -> Complex>(g: &GroupElement, lab: RepLabel, f: F, w: Complex, tol: f64) -> Result<Complex> {
    let (a, b) = g.acting();
    let l = match lab {
        RepLabel::Lambda(l) => l,
        RepLabel::Rho(rho) => return Ok(Complex::new(0.0, rho * g.a.ln()).exp() * f(w)),
    };
    let phase = Complex::new(a, 0.0).powc(-I * w);
    if b == 0.0 {
        return Ok(phase * f(w));
    }
    let base = -l * b / a;
    if base.im == 0.0 && base.re <= 0.0 {
        return Err(Error::Branch(format!("-lambda b / a = {base} lies on the cut")));
    }
    let mut k = |z: Complex| match gamma(I * (w - z)) {
        Ok(gm) => gm * phase * cpow(base, I * (z - w)) * f(z) / (2.0 * PI),
        Err(_) => Complex::new(f64::NAN, 0.0),
    };
    let mut c = Contour::line(w.im + MELLIN_LINE_OFFSET, 8.0);
    c.fit_truncation(&mut k, 0.01 * tol, 256.0);
    Ok(integrate_contour(k, &c, tol)?.value)
}

/// Residual between the two routes to `R(g) F (w)` for `F = (1/2 pi) Mf(i.)`:
/// `act_mellin` on the supplied `F`, and the Mellin transform of `act_point`.
pub fn mellin_route_residual<P, M>(g: &GroupElement, lab: RepLabel, f: P, mf: M, w: Complex, strip: Strip, tol: f64) -> Result<f64>
where
    P: Fn(f64) -> Complex,
    M: Fn(Complex) -> Complex,
{
    let via_kernel = act_mellin(g, lab, mf, w, tol)?;
    let via_point = mellin_forward(|x| act_point(g, lab, &f, x), I * w, strip, tol)? / (2.0 * PI);
    Ok(rel_diff(via_kernel, via_point))
}

/// Which tensor product decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecompCase {
    /// `R_+- (x) R_+-`
    Pp,
    /// `R_+- (x) R_-+`, split at `alpha = 1`
    Pm,
}

/// Half-width of the excluded band around `alpha = 1` in case `Pm`.
pub const PM_BAND: f64 = 1e-8;

/// `F(alpha, x)` from `f(x1, x2)`.
pub fn decompose<F: Fn(f64, f64) -> Complex>(case: DecompCase, f: F, alpha: f64, x: f64) -> Result<Complex> {
    let d = match case {
        DecompCase::Pp => alpha + 1.0,
        DecompCase::Pm => {
            let d = (alpha - 1.0).abs();
            if d < PM_BAND {
                return Err(Error::Domain(format!("alpha = {alpha} inside the excluded band around 1")));
            }
            d
        }
    };
    Ok(f(alpha * x / d, x / d))
}

/// `f(x1, x2)` from `F(alpha, x)`.
pub fn recompose<F: Fn(f64, f64) -> Complex>(case: DecompCase, big_f: F, x1: f64, x2: f64) -> Result<Complex> {
    match case {
        DecompCase::Pp => Ok(big_f(x1 / x2, x1 + x2)),
        DecompCase::Pm => {
            if (x1 / x2 - 1.0).abs() < PM_BAND {
                return Err(Error::Domain("x1 / x2 inside the excluded band around 1".into()));
            }
            Ok(big_f(x1 / x2, (x1 - x2).abs()))
        }
    }
}

/// `R_+ (x) T_rho` in the Mellin picture: `F(w) = f(w - rho)`.
pub fn decompose_rho<F: Fn(Complex) -> Complex>(f: F, w: Complex, rho: f64) -> Complex {
    f(w - rho)
}

pub fn recompose_rho<F: Fn(Complex) -> Complex>(big_f: F, x: Complex, rho: f64) -> Complex {
    big_f(x + rho)
}

/// `int_0^inf |f|^2 dx / x`, by tanh-sinh in `u = log x` over `[lo, hi]`.
pub fn norm2_dx_over_x<F: Fn(f64) -> Complex>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    Ok(de_rule(tanh_sinh(lo, hi), |u| Complex::new(f(u.exp()).norm_sqr(), 0.0), tol, 14)?.value.re)
}

/// Tensor-product Gauss–Legendre rule on `[lo, hi]^2` in log coordinates,
/// `panels` panels of `order` nodes per axis; returns `int int |f|^2 dx1/x1 dx2/x2`.
pub fn norm2_log_box<F: Fn(f64, f64) -> Complex>(f: F, lo: f64, hi: f64, panels: usize, order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let h = (hi - lo) / panels as f64;
    let nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            let m = lo + h * (p as f64 + 0.5);
            x.iter().zip(w.iter()).map(move |(xi, wi)| (m + 0.5 * h * xi, 0.5 * h * wi)).collect::<Vec<_>>()
        })
        .collect();
    let mut s = 0.0;
    for &(u, wu) in &nodes {
        for &(v, wv) in &nodes {
            s += wu * wv * f(u.exp(), v.exp()).norm_sqr();
        }
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Floor,
    Ceil,
}

/// Reduced classical kernels, with `t = t1 + t2` imposed:
/// floor `(1/2 pi) Gamma(i lam - i t1) Gamma(-i t2 - i lam) / Gamma(-i t)`,
/// ceil `(1/2 pi) Gamma(-i lam + i t1) Gamma(i t2 + i lam) / Gamma(i t)`.
pub fn classical_kernel(kind: KernelKind, lam: Complex, t1: Complex, t2: Complex) -> Result<Complex> {
    let t = t1 + t2;
    let v = match kind {
        KernelKind::Floor => gamma(I * (lam - t1))? * gamma(-I * (t2 + lam))? * rgamma(-I * t),
        KernelKind::Ceil => gamma(I * (t1 - lam))? * gamma(I * (t2 + lam))? * rgamma(I * t),
    };
    Ok(v / (2.0 * PI))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

fn contour_tol(tol: f64) -> f64 {
    0.01 * tol
}

fn initial_truncation(p1: Complex, p2: Complex) -> f64 {
    8.0f64.max(p1.re.abs() + 4.0).max(p2.re.abs() + 4.0)
}

/// `F(lam, t) = (1/2 pi) int_C Gamma(i t2 - i t + i lam) Gamma(-i t2 - i lam) / Gamma(-i t) f(t - t2, t2) dt2`,
/// with `C` above `t2 = -lam` and below `t2 = t - lam`.
pub fn classical_forward<F: Fn(Complex, Complex) -> Complex>(f: F, lam: Complex, t: Complex, tol: f64) -> Result<Complex> {
    let lower = -lam;
    let upper = t - lam;
    let r = rgamma(-I * t);
    let mut k = |t2: Complex| match (gamma(I * (t2 - t + lam)), gamma(-I * (t2 + lam))) {
        (Ok(g1), Ok(g2)) => g1 * g2 * r * f(t - t2, t2) / (2.0 * PI),
        _ => Complex::new(f64::NAN, 0.0),
    };
    let others = [lower, upper, lower - I, upper + I];
    let mut c = Contour::real_line(initial_truncation(lower, upper))
        .with_default_detour(lower, Side::Above, &others)
        .with_default_detour(upper, Side::Below, &others);
    c.fit_truncation(&mut k, contour_tol(tol), 128.0);
    Ok(integrate_contour(k, &c, tol)?.value)
}

/// `f(t1, t2) = (1/2 pi) int_C' Gamma(-i lam + i t1) Gamma(i lam + i t2) / Gamma(i t1 + i t2) F(lam, t1 + t2) dlam`,
/// with `C'` above `lam = t1` and below `lam = -t2`.
pub fn classical_inverse<F: Fn(Complex, Complex) -> Complex>(big_f: F, t1: Complex, t2: Complex, tol: f64) -> Result<Complex> {
    let t = t1 + t2;
    let lower = t1;
    let upper = -t2;
    let r = rgamma(I * t);
    let mut k = |lam: Complex| match (gamma(I * (t1 - lam)), gamma(I * (lam + t2))) {
        (Ok(g1), Ok(g2)) => g1 * g2 * r * big_f(lam, t) / (2.0 * PI),
        _ => Complex::new(f64::NAN, 0.0),
    };
    let others = [lower, upper, lower - I, upper + I];
    let mut c = Contour::real_line(initial_truncation(lower, upper))
        .with_default_detour(lower, Side::Above, &others)
        .with_default_detour(upper, Side::Below, &others);
    c.fit_truncation(&mut k, contour_tol(tol), 128.0);
    Ok(integrate_contour(k, &c, tol)?.value)
}

/// Forward: `(u, v) = (lam, t)`; inverse: `(u, v) = (t1, t2)`.
pub fn apply_intertwiner<F: Fn(Complex, Complex) -> Complex>(dir: Direction, f: F, u: Complex, v: Complex, tol: f64) -> Result<Complex> {
    match dir {
        Direction::Forward => classical_forward(f, u, v, tol),
        Direction::Inverse => classical_inverse(f, u, v, tol),
    }
}

/// Largest absolute round-trip error of forward then inverse over the points.
pub fn intertwiner_round_trip<F: Fn(Complex, Complex) -> Complex>(f: F, points: &[(f64, f64)], tol: f64) -> Result<f64> {
    let inner_tol = 0.1 * tol;
    let fail = std::cell::RefCell::new(None::<Error>);
    let mut worst: f64 = 0.0;
    for &(t1, t2) in points {
        let big_f = |lam: Complex, t: Complex| match classical_forward(&f, lam, t, inner_tol) {
            Ok(v) => v,
            Err(e) => {
                fail.borrow_mut().get_or_insert(e);
                Complex::new(f64::NAN, 0.0)
            }
        };
        let (a, b) = (Complex::new(t1, 0.0), Complex::new(t2, 0.0));
        let back = classical_inverse(big_f, a, b, tol);
        if let Some(e) = fail.borrow_mut().take() {
            return Err(e);
        }
        worst = worst.max((back? - f(a, b)).norm());
    }
    Ok(worst)
}

/// Gauss–Legendre nodes and weights on `[-half, half]`, `panels` panels.
fn gl_box(half: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let h = 2.0 * half / panels as f64;
    (0..panels)
        .flat_map(|p| {
            let m = -half + h * (p as f64 + 0.5);
            x.iter().zip(w.iter()).map(move |(xi, wi)| (m + 0.5 * h * xi, 0.5 * h * wi)).collect::<Vec<_>>()
        })
        .collect()
}

/// `(||F||^2, ||f||^2)` on the boxes `|lam| <= lam_half, |t| <= t_half` and
/// `|t1|, |t2| <= t_half`, with Gauss–Legendre product rules.
pub fn intertwiner_norms<F: Fn(Complex, Complex) -> Complex>(f: F, lam_half: f64, t_half: f64, tol: f64) -> Result<(f64, f64)> {
    let lam_nodes = gl_box(lam_half, (2.0 * lam_half).ceil() as usize, 8);
    let t_nodes = gl_box(t_half, (2.0 * t_half).ceil() as usize, 8);
    let mut big = 0.0;
    for &(l, wl) in &lam_nodes {
        for &(t, wt) in &t_nodes {
            let v = classical_forward(&f, Complex::new(l, 0.0), Complex::new(t, 0.0), tol)?;
            big += wl * wt * v.norm_sqr();
        }
    }
    let mut small = 0.0;
    for &(a, wa) in &t_nodes {
        for &(b, wb) in &t_nodes {
            small += wa * wb * f(Complex::new(a, 0.0), Complex::new(b, 0.0)).norm_sqr();
        }
    }
    Ok((big, small))
}

/// Equivariance of the forward transform for a separable input
/// `f(t1, t2) = h(t1) h(t2)`: compares the transform of
/// `(R_+ (x) R_+)(g) f` with `R_+(g)` applied in `t` to the transform of `f`.
/// Returns the largest absolute difference over the `(lam, t)` points.
pub fn intertwiner_equivariance<H: Fn(Complex) -> Complex>(h: H, g: &GroupElement, points: &[(f64, f64)], tol: f64) -> Result<f64> {
    let lab = RepLabel::plus();
    let inner = 0.1 * tol;
    let fail = std::cell::RefCell::new(None::<Error>);
    let record = |r: Result<Complex>| match r {
        Ok(v) => v,
        Err(e) => {
            fail.borrow_mut().get_or_insert(e);
            Complex::new(f64::NAN, 0.0)
        }
    };
    let acted = |t: Complex| record(act_mellin(g, lab, &h, t, inner));
    let f = |t1: Complex, t2: Complex| h(t1) * h(t2);
    let mut worst: f64 = 0.0;
    for &(l, t) in points {
        let (l, t) = (Complex::new(l, 0.0), Complex::new(t, 0.0));
        let lhs = classical_forward(|t1, t2| acted(t1) * acted(t2), l, t, tol);
        let rhs = act_mellin(g, lab, |z| record(classical_forward(f, l, z, inner)), t, tol);
        if let Some(e) = fail.borrow_mut().take() {
            return Err(e);
        }
        worst = worst.max((lhs? - rhs?).norm());
    }
    Ok(worst)
}
