//! Horizontal integration contours with explicit pole detours.

use crate::error::{Error, Result};
use crate::numerics::quad::adaptive_gl;
use crate::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which side of a pole the contour passes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Above,
    Below,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Detour {
    pub pole: Complex,
    pub side: Side,
    pub radius: f64,
}

/// The line `Im z = imag_shift`, truncated to `|Re z| <= truncation`, plus
/// detours. A pole within `radius` of the line is bypassed by a semicircle on
/// the requested side; a pole further away on the wrong side is corrected by a
/// full circle around it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub imag_shift: f64,
    pub detours: Vec<Detour>,
    pub truncation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: Complex,
    pub err_estimate: f64,
    pub n_evals: usize,
}

/// Knobs for [`integrate_contour_with`].
#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub max_evals: usize,
    /// Initial panel width on straight pieces.
    pub panel_width: f64,
    /// Fail with [`Error::Decay`] unless `|f|` at both ends is below `tol`.
    pub check_decay: bool,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { max_evals: 400_000, panel_width: 2.0, check_decay: true }
    }
}

impl Contour {
    pub fn line(imag_shift: f64, truncation: f64) -> Self {
        Contour { imag_shift, detours: Vec::new(), truncation }
    }

    pub fn real_line(truncation: f64) -> Self {
        Self::line(0.0, truncation)
    }

    pub fn with_detour(mut self, pole: Complex, side: Side, radius: f64) -> Self {
        self.detours.push(Detour { pole, side, radius });
        self
    }

    /// Detour with the default radius `0.05 * min(1, gap)`, where `gap` is the
    /// distance to the nearest pole in `others` and already listed poles.
    pub fn with_default_detour(self, pole: Complex, side: Side, others: &[Complex]) -> Self {
        let gap = others
            .iter()
            .chain(self.detours.iter().map(|d| &d.pole))
            .map(|p| (p - pole).norm())
            .filter(|d| *d > 0.0)
            .fold(f64::INFINITY, f64::min);
        let r = 0.05 * gap.min(1.0);
        self.with_detour(pole, side, r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.truncation > 0.0 && self.truncation.is_finite() && self.imag_shift.is_finite()) {
            return Err(Error::Precondition("contour truncation must be positive".into()));
        }
        for (i, d) in self.detours.iter().enumerate() {
            if !(d.radius > 0.0) {
                return Err(Error::Precondition("detour radius must be positive".into()));
            }
            if d.pole.re - d.radius <= -self.truncation || d.pole.re + d.radius >= self.truncation {
                return Err(Error::Precondition(format!("detour at {} outside |Re| < T", d.pole)));
            }
            for (j, e) in self.detours.iter().enumerate() {
                if i != j && d.radius >= 0.5 * (d.pole - e.pole).norm() {
                    return Err(Error::Precondition(format!(
                        "detour radius {} at {} too large for neighbour {}",
                        d.radius, d.pole, e.pole
                    )));
                }
            }
        }
        let mut near: Vec<&Detour> = self.near_detours();
        near.sort_by(|a, b| a.pole.re.total_cmp(&b.pole.re));
        for w in near.windows(2) {
            if w[0].pole.re + w[0].radius >= w[1].pole.re - w[1].radius {
                return Err(Error::Precondition(format!(
                    "detours at {} and {} overlap along the line",
                    w[0].pole, w[1].pole
                )));
            }
        }
        Ok(())
    }

    fn near_detours(&self) -> Vec<&Detour> {
        self.detours.iter().filter(|d| (d.pole.im - self.imag_shift).abs() < d.radius).collect()
    }

    /// Doubles the truncation from its current value until `|f|` is below
    /// `tol` near both ends, or `t_max` is reached.
    pub fn fit_truncation<F: FnMut(Complex) -> Complex>(&mut self, f: &mut F, tol: f64, t_max: f64) {
        while self.truncation < t_max && end_size(f, self.imag_shift, self.truncation) > tol {
            self.truncation = (2.0 * self.truncation).min(t_max);
        }
    }
}

/// Largest `|f|` sampled on the last unit of each end of the line.
fn end_size<F: FnMut(Complex) -> Complex>(f: &mut F, c: f64, t: f64) -> f64 {
    let mut m: f64 = 0.0;
    for k in 0..4 {
        let x = t - 0.25 * k as f64;
        for s in [1.0, -1.0] {
            let v = f(Complex::new(s * x, c)).norm();
            m = m.max(if v.is_finite() { v } else { f64::INFINITY });
        }
    }
    m
}

enum Piece {
    Line { c: f64 },
    Arc { center: Complex, r: f64, theta0: f64, dtheta: f64 },
}

impl Piece {
    #[inline]
    fn at(&self, s: f64) -> (Complex, Complex) {
        match *self {
            Piece::Line { c } => (Complex::new(s, c), Complex::new(1.0, 0.0)),
            Piece::Arc { center, r, theta0, dtheta } => {
                let e = Complex::from_polar(r, theta0 + dtheta * s);
                (center + e, Complex::new(0.0, dtheta) * e)
            }
        }
    }
}

/// Integrates `f` along the contour to absolute accuracy `tol`.
pub fn integrate_contour<F: FnMut(Complex) -> Complex>(f: F, c: &Contour, tol: f64) -> Result<QuadResult> {
    integrate_contour_with(f, c, tol, QuadOptions::default())
}

pub fn integrate_contour_with<F: FnMut(Complex) -> Complex>(
    mut f: F,
    c: &Contour,
    tol: f64,
    opts: QuadOptions,
) -> Result<QuadResult> {
    if !(tol > 0.0) {
        return Err(Error::Precondition("tol must be positive".into()));
    }
    c.validate()?;
    if opts.check_decay {
        let e = end_size(&mut f, c.imag_shift, c.truncation);
        if !(e <= tol) {
            return Err(Error::Decay(format!(
                "|f| = {e:.3e} at |Re z| = {} exceeds tol {tol:.3e}",
                c.truncation
            )));
        }
    }
    let t = c.truncation;
    let mut near = c.near_detours();
    near.sort_by(|a, b| a.pole.re.total_cmp(&b.pole.re));

    let mut pieces: Vec<Piece> = Vec::new();
    let mut spans: Vec<(f64, f64, usize)> = Vec::new();
    let push_line = |pieces: &mut Vec<Piece>, spans: &mut Vec<(f64, f64, usize)>, a: f64, b: f64| {
        if b > a {
            let n = ((b - a) / opts.panel_width).ceil().max(1.0) as usize;
            pieces.push(Piece::Line { c: c.imag_shift });
            spans.push((a, b, n));
        }
    };
    let mut x = -t;
    for d in &near {
        push_line(&mut pieces, &mut spans, x, d.pole.re - d.radius);
        let center = Complex::new(d.pole.re, c.imag_shift);
        let dtheta = match d.side {
            Side::Above => -PI,
            Side::Below => PI,
        };
        pieces.push(Piece::Arc { center, r: d.radius, theta0: PI, dtheta });
        spans.push((0.0, 1.0, 2));
        x = d.pole.re + d.radius;
    }
    push_line(&mut pieces, &mut spans, x, t);
    for d in &c.detours {
        let off = d.pole.im - c.imag_shift;
        if off.abs() < d.radius {
            continue;
        }
        let dtheta = match (d.side, off > 0.0) {
            (Side::Above, true) => -2.0 * PI,
            (Side::Below, false) => 2.0 * PI,
            _ => continue,
        };
        pieces.push(Piece::Arc { center: d.pole, r: d.radius, theta0: 0.0, dtheta });
        spans.push((0.0, 1.0, 4));
    }
    adaptive_gl(
        &spans,
        |k, s| {
            let (z, dz) = pieces[k].at(s);
            f(z) * dz
        },
        tol,
        opts.max_evals,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::cplx::I;

    #[test]
    fn gaussian_line() {
        let r = integrate_contour(|z| (-PI * z * z).exp(), &Contour::real_line(6.0), 1e-13).unwrap();
        assert!((r.value - 1.0).norm() < 1e-12);
        assert!(r.n_evals > 0);
    }

    #[test]
    fn half_residue_below() {
        let c = Contour::real_line(10.0).with_detour(Complex::new(0.0, 0.0), Side::Below, 0.1);
        let r = integrate_contour_with(
            |z| 1.0 / z,
            &c,
            1e-12,
            QuadOptions { check_decay: false, ..Default::default() },
        )
        .unwrap();
        assert!((r.value - PI * I).norm() < 1e-11, "{}", r.value);
    }

    #[test]
    fn gaussian_fourier() {
        let r = integrate_contour(|z| (-PI * z * z + 2.0 * PI * I * z * 0.3).exp(), &Contour::real_line(6.0), 1e-13)
            .unwrap();
        assert!((r.value - (-PI * 0.09f64).exp()).norm() < 1e-12);
    }

    #[test]
    fn far_pole_circle_matches_semicircle() {
        let f = |z: Complex| (-z * z).exp() / (z - Complex::new(0.3, 0.02));
        let semi = Contour::real_line(8.0).with_detour(Complex::new(0.3, 0.02), Side::Above, 0.1);
        let full = Contour::line(-0.5, 8.0).with_detour(Complex::new(0.3, 0.02), Side::Above, 0.1);
        let a = integrate_contour(f, &semi, 1e-12).unwrap().value;
        let b = integrate_contour(f, &full, 1e-12).unwrap().value;
        assert!((a - b).norm() < 1e-11);
    }

    #[test]
    fn decay_failure_is_reported() {
        let e = integrate_contour(|_| Complex::new(1.0, 0.0), &Contour::real_line(5.0), 1e-8).unwrap_err();
        assert!(matches!(e, Error::Decay(_)));
    }

    #[test]
    fn radius_invariant_is_enforced() {
        let c = Contour::real_line(5.0)
            .with_detour(Complex::new(0.0, 0.0), Side::Above, 0.3)
            .with_detour(Complex::new(0.5, 0.0), Side::Below, 0.1);
        assert!(matches!(c.validate(), Err(Error::Precondition(_))));
    }
}
