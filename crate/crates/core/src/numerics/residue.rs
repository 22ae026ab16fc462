//! Residues by periodic trapezoid quadrature on circles.

use crate::error::{Error, Result};
use crate::Complex;
use std::f64::consts::PI;

/// `(1/2 pi i) * loop integral of f` over the circle `|z - z0| = radius`, with the
/// number of nodes doubled until successive sums agree to near machine
/// precision.
pub fn circle_mean<F: FnMut(Complex) -> Complex>(mut f: F, z0: Complex, radius: f64) -> Result<Complex> {
    let mut m = 16usize;
    let mut sum = Complex::new(0.0, 0.0);
    let mut l1 = 0.0;
    for j in 0..m {
        let (v, a) = node(&mut f, z0, radius, j as f64 / m as f64)?;
        sum += v;
        l1 += a;
    }
    let mut prev = sum / m as f64;
    while m < 1 << 14 {
        for j in 0..m {
            let (v, a) = node(&mut f, z0, radius, (2 * j + 1) as f64 / (2 * m) as f64)?;
            sum += v;
            l1 += a;
        }
        m *= 2;
        let est = sum / m as f64;
        if (est - prev).norm() <= 1e-14 * (l1 / m as f64) {
            return Ok(est);
        }
        prev = est;
    }
    Ok(prev)
}

#[inline]
fn node<F: FnMut(Complex) -> Complex>(f: &mut F, z0: Complex, r: f64, frac: f64) -> Result<(Complex, f64)> {
    let e = Complex::from_polar(r, 2.0 * PI * frac);
    let v = f(z0 + e) * e;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok((v, v.norm()))
}

/// Residue of `f` at `z0`, computed on radii `radius` and `radius / 2`.
/// Disagreement beyond `1e-8` relative signals a higher-order pole or another
/// singularity inside the larger circle.
pub fn residue_at<F: FnMut(Complex) -> Complex>(mut f: F, z0: Complex, radius: f64) -> Result<Complex> {
    residue_two_radii(&mut f, z0, radius, 0.5 * radius, 1e-8)
}

/// Residue with an explicit radius pair and relative agreement tolerance.
pub fn residue_two_radii<F: FnMut(Complex) -> Complex>(
    f: &mut F,
    z0: Complex,
    r1: f64,
    r2: f64,
    rel_tol: f64,
) -> Result<Complex> {
    if !(r1 > 0.0 && r2 > 0.0) {
        return Err(Error::Precondition("residue radius must be positive".into()));
    }
    let a = circle_mean(&mut *f, z0, r1)?;
    let b = circle_mean(&mut *f, z0, r2)?;
    let scale = a.norm().max(b.norm());
    if (a - b).norm() > rel_tol * scale.max(1e-300) && (a - b).norm() > 1e-14 {
        return Err(Error::ResidueMismatch { a, b });
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_poles() {
        let one = Complex::new(1.0, 0.0);
        assert!((residue_at(|z| 1.0 / z, Complex::new(0.0, 0.0), 0.5).unwrap() - one).norm() < 1e-14);
        assert!((residue_at(|z| z.exp() / z, Complex::new(0.0, 0.0), 0.3).unwrap() - one).norm() < 1e-14);
    }

    #[test]
    fn double_pole_is_flagged() {
        let r = residue_at(|z| 1.0 / (z * z) + 1.0 / (z - 0.3), Complex::new(0.0, 0.0), 0.5);
        assert!(matches!(r, Err(Error::ResidueMismatch { .. })));
    }
}
