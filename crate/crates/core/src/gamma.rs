//! Complex gamma function and the classical integral identities built on it.

use crate::error::{Error, Result};
use crate::numerics::contour::{integrate_contour, Contour, Side};
use crate::numerics::cplx::{cpow, rel_diff, I};
use crate::numerics::mellin::{mellin_forward, Strip};
use crate::numerics::residue::residue_at;
use crate::Complex;
use std::f64::consts::PI;

const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

/// Lanczos core, valid for `Re z >= 1/2`.
fn ln_gamma_right(z: Complex) -> Complex {
    let tmp = z + 5.242_187_5;
    let tmp = (z + 0.5) * tmp.ln() - tmp;
    let mut ser = Complex::new(0.999_999_999_999_997_092, 0.0);
    for (j, c) in LANCZOS.iter().enumerate() {
        ser += *c / (z + (j + 1) as f64);
    }
    tmp + (ser * 2.506_628_274_631_000_5 / z).ln()
}

fn is_pole(z: Complex) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// `log Gamma(z)` on some branch; the real part is always `ln |Gamma(z)|`.
pub fn ln_gamma(z: Complex) -> Result<Complex> {
    if is_pole(z) {
        return Err(Error::Pole(z));
    }
    if z.re >= 0.5 {
        return Ok(ln_gamma_right(z));
    }
    let s = (PI * z).sin();
    Ok(Complex::new(PI.ln(), 0.0) - s.ln() - ln_gamma_right(1.0 - z))
}

pub fn gamma(z: Complex) -> Result<Complex> {
    if is_pole(z) {
        return Err(Error::Pole(z));
    }
    if z.re >= 0.5 {
        return Ok(ln_gamma_right(z).exp());
    }
    Ok(PI / ((PI * z).sin() * ln_gamma_right(1.0 - z).exp()))
}

/// `1 / Gamma(z)`, entire, zero at the non-positive integers.
pub fn rgamma(z: Complex) -> Complex {
    if is_pole(z) {
        return Complex::new(0.0, 0.0);
    }
    if z.re >= 0.5 {
        return (-ln_gamma_right(z)).exp();
    }
    (PI * z).sin() * ln_gamma_right(1.0 - z).exp() / PI
}

/// Relative residual of the gamma-beta integral
/// `int_0^inf t^{w+u-1} (1+t)^{-w} dt = Gamma(w+u) Gamma(-u) / Gamma(w)`.
pub fn gamma_beta_residual(w: Complex, u: Complex) -> Result<f64> {
    if !((w + u).re > 0.0 && u.re < 0.0) {
        return Err(Error::Precondition("gamma-beta needs Re(w+u) > 0 and Re u < 0".into()));
    }
    let lhs = mellin_forward(
        |t| cpow(Complex::new(1.0 + t, 0.0), -w),
        w + u,
        Strip::new(0.0, w.re),
        1e-13,
    )?;
    let rhs = gamma(w + u)? * gamma(-u)? / gamma(w)?;
    Ok(rel_diff(lhs, rhs))
}

/// Mellin–Barnes side of the binomial formula,
/// `(1/2 pi) int Gamma(-is) Gamma(-it+is) / Gamma(-it) x^{is} y^{it-is} ds`.
pub fn binomial_mellin_barnes(x: f64, y: f64, t: f64) -> Result<Complex> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::Domain("binomial formula needs x, y > 0".into()));
    }
    let (lx, ly) = (x.ln(), y.ln());
    if t == 0.0 {
        // pinched contour; only the residue of Gamma(-is) at s = 0 survives
        let r = residue_at(|s| gamma(-I * s).unwrap_or_default(), Complex::new(0.0, 0.0), 0.25)?;
        return Ok(-I * r);
    }
    let it = I * t;
    let f = |s: Complex| {
        let is = I * s;
        match (ln_gamma(-is), ln_gamma(is - it)) {
            (Ok(a), Ok(b)) => (a + b + is * lx + (it - is) * ly).exp() * rgamma(-it) / (2.0 * PI),
            _ => Complex::new(f64::NAN, 0.0),
        }
    };
    let zero = Complex::new(0.0, 0.0);
    let tt = Complex::new(t, 0.0);
    let c = Contour::real_line(16.0 + t.abs())
        .with_default_detour(zero, Side::Above, &[tt])
        .with_default_detour(tt, Side::Below, &[zero]);
    Ok(integrate_contour(f, &c, 1e-12)?.value)
}

/// `|(x+y)^{it} - MB| / |(x+y)^{it}|`.
pub fn binomial_mellin_residual(x: f64, y: f64, t: f64) -> Result<f64> {
    let lhs = Complex::new(0.0, t * (x + y).ln()).exp();
    Ok(rel_diff(binomial_mellin_barnes(x, y, t)?, lhs))
}

/// Gauss series for `|z| < 1`.
pub fn hyp2f1_series(a: Complex, b: Complex, c: Complex, z: Complex) -> Result<Complex> {
    if z.norm() >= 1.0 {
        return Err(Error::Domain("Gauss series needs |z| < 1".into()));
    }
    if is_pole(c) {
        return Err(Error::Pole(c));
    }
    let mut term = Complex::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..10_000 {
        let n = n as f64;
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::Divergent("Gauss series did not converge".into()))
}

/// Barnes integral
/// `Gamma(c)/(Gamma(a)Gamma(b)) (1/2 pi) int Gamma(a+is)Gamma(b+is)Gamma(-is)/Gamma(c+is) (-z)^{is} ds`
/// along the real line, above the poles `s = -in` and below `s = i(a+n)`,
/// `s = i(b+n)`.
pub fn hyp2f1_contour(a: Complex, b: Complex, c: Complex, z: Complex) -> Result<Complex> {
    if is_pole(c) {
        return Err(Error::Pole(c));
    }
    if is_pole(a) || is_pole(b) {
        return Err(Error::Pole(if is_pole(a) { a } else { b }));
    }
    if z.im == 0.0 && z.re >= 0.0 {
        return Err(Error::Branch(format!("z = {z} on the cut [0, inf)")));
    }
    let lmz = (-z).ln();
    let f = |s: Complex| {
        let is = I * s;
        match (ln_gamma(a + is), ln_gamma(b + is), ln_gamma(-is)) {
            (Ok(ga), Ok(gb), Ok(gs)) => (ga + gb + gs + is * lmz).exp() * rgamma(c + is),
            _ => Complex::new(f64::NAN, 0.0),
        }
    };
    let mut upper = Vec::new();
    for p in [a, b] {
        let mut n = 0.0;
        while p.re + n < 0.5 {
            upper.push(I * (p + n));
            n += 1.0;
        }
    }
    let zero = Complex::new(0.0, 0.0);
    let mut all = upper.clone();
    all.push(zero);
    let mut contour = Contour::real_line(8.0);
    for p in &upper {
        contour = contour.with_default_detour(*p, Side::Below, &all);
    }
    contour = contour.with_default_detour(zero, Side::Above, &all);
    let mut g = f;
    contour.fit_truncation(&mut g, 1e-14, 200.0);
    let r = integrate_contour(g, &contour, 1e-12)?;
    Ok(gamma(c)? * rgamma(a) * rgamma(b) * r.value / (2.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_values() {
        assert!((gamma(Complex::new(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!((gamma(Complex::new(0.5, 0.0)).unwrap().re - PI.sqrt()).abs() < 1e-14);
        assert!(matches!(gamma(Complex::new(-2.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn gamma_residue_at_minus_one() {
        let r = residue_at(|z| gamma(z).unwrap(), Complex::new(-1.0, 0.0), 0.2).unwrap();
        assert!((r + 1.0).norm() < 1e-12);
    }

    #[test]
    fn log2_closed_form() {
        let one = Complex::new(1.0, 0.0);
        let v = hyp2f1_contour(one, one, Complex::new(2.0, 0.0), Complex::new(-1.0, 0.0)).unwrap();
        assert!((v - 2f64.ln()).norm() < 1e-9);
    }
}
