//! Scalar kernels of the coaction of the quantum ax+b semigroup, the
//! corepresentation identity, the pairing with the generators and the
//! classical limit of the coaction.

use crate::dilog::gb::gbv;
use crate::dilog::identities::GB_TOL;
use crate::dilog::param::ModularParam;
use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::numerics::cplx::{cpow, I};
use crate::numerics::residue::residue_two_radii;
use crate::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Residue radii for the pairing, checked against each other.
pub const RESIDUE_RADII: (f64, f64) = (0.1, 0.05);

/// `coeff * A^{i a_exp / b} B^{i b_exp / b}`, always kept in this order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalOrderedMonomial {
    pub a_exp: Complex,
    pub b_exp: Complex,
    pub coeff: Complex,
}

impl NormalOrderedMonomial {
    pub fn new(a_exp: Complex, b_exp: Complex) -> Self {
        NormalOrderedMonomial { a_exp, b_exp, coeff: Complex::new(1.0, 0.0) }
    }

    /// Product in normal order. Moving `B^{iv/b}` past `A^{ia/b}` uses
    /// `AB = q^2 BA`, which gives the factor `q^{2 v a / b^2} = e^{2 pi i v a}`.
    pub fn mul(&self, other: &Self) -> Self {
        NormalOrderedMonomial {
            a_exp: self.a_exp + other.a_exp,
            b_exp: self.b_exp + other.b_exp,
            coeff: self.coeff * other.coeff * (2.0 * PI * I * self.b_exp * other.a_exp).exp(),
        }
    }
}

/// `2 sin(pi b^2)`, positive for real `b` with `b^2 < 1`.
fn s_factor(p: &ModularParam) -> Complex {
    2.0 * (PI * p.b2()).sin()
}

/// Coaction integrand at `(x, t)`: the scalar
/// `e^{pi Q (t - x)} G_b(ix - it) (2 sin pi b^2)^{-i(x - t)/b}` and the
/// monomial `A^{ix/b} B^{i(t - x)/b}`.
pub fn coaction_kernel(x: f64, t: f64, p: &ModularParam) -> Result<(Complex, NormalOrderedMonomial)> {
    let (x, t) = (Complex::new(x, 0.0), Complex::new(t, 0.0));
    let scalar = coaction_scalar(x, t, p)?;
    Ok((scalar, NormalOrderedMonomial::new(x, t - x)))
}

fn coaction_scalar(x: Complex, t: Complex, p: &ModularParam) -> Result<Complex> {
    let g = gbv(I * (x - t), p, GB_TOL)?;
    Ok((PI * p.big_q * (t - x)).exp() * g * cpow(s_factor(p), -I * (x - t) / p.b))
}

/// The coaction kernel after `x -> bx`, `t -> bz`, including the factor `b`
/// from `dt = b dz`.
fn scaled_kernel(x: Complex, z: Complex, p: &ModularParam) -> Result<Complex> {
    Ok(p.b * coaction_scalar(p.b * x, p.b * z, p)?)
}

/// Kernel of the coproduct term at `tau = -w`:
/// `b G_b(ibx - ibw) G_b(ibw - ibz) / G_b(ibx - ibz)`.
pub fn coproduct_kernel(x: f64, w: f64, z: f64, p: &ModularParam) -> Result<Complex> {
    distinct(x, w, z)?;
    let ib = I * p.b;
    let g = |y: f64| gbv(ib * y, p, GB_TOL);
    Ok(p.b * g(x - w)? * g(w - z)? / g(x - z)?)
}

fn distinct(x: f64, w: f64, z: f64) -> Result<()> {
    if x == w || w == z || x == z {
        return Err(Error::Precondition(format!("points must be pairwise distinct, got ({x}, {w}, {z})")));
    }
    Ok(())
}

/// Relative residual of `K(x, z) K_coproduct(x, w, z) = K(x, w) K(w, z)` in
/// scaled variables.
pub fn corep_axiom_residual(x: f64, w: f64, z: f64, p: &ModularParam) -> Result<f64> {
    distinct(x, w, z)?;
    if !p.is_real_b() {
        return Err(Error::Precondition("the corepresentation identity is checked for real b".into()));
    }
    let (xc, wc, zc) = (Complex::new(x, 0.0), Complex::new(w, 0.0), Complex::new(z, 0.0));
    let lhs = scaled_kernel(xc, zc, p)? * coproduct_kernel(x, w, z, p)?;
    let rhs = scaled_kernel(xc, wc, p)? * scaled_kernel(wc, zc, p)?;
    Ok((lhs - rhs).norm() / rhs.norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Generator {
    X,
    Y,
}

/// Integrand of the pairing in the scaled variable `z`:
/// `f(bz + x) b G_b(-ibz) e^{pi Q b z} (2 sin pi b^2)^{iz}`.
fn pairing_integrand<F: Fn(Complex) -> Complex>(f: &F, x: Complex, z: Complex, p: &ModularParam) -> Complex {
    match gbv(-I * p.b * z, p, GB_TOL) {
        Ok(g) => f(p.b * z + x) * p.b * g * (PI * p.big_q * p.b * z).exp() * cpow(s_factor(p), I * z),
        Err(_) => Complex::new(f64::NAN, 0.0),
    }
}

/// Action of a generator on `f` at `x`, read off from residues of the
/// coaction integrand: `X` at `z = 0` with `(-2 pi i) q^{-2ix/b}`, `Y` at
/// `z = -i` with `(-i)(-2 pi i)`.
pub fn pairing<F: Fn(Complex) -> Complex>(gen: Generator, f: F, x: f64, p: &ModularParam) -> Result<Complex> {
    if !p.is_real_b() {
        return Err(Error::Precondition("pairing needs real b".into()));
    }
    let xc = Complex::new(x, 0.0);
    let mut h = |z: Complex| pairing_integrand(&f, xc, z, p);
    let (r1, r2) = RESIDUE_RADII;
    match gen {
        Generator::X => {
            let res = residue_two_radii(&mut h, Complex::new(0.0, 0.0), r1, r2, 1e-8)?;
            Ok(-2.0 * PI * I * cpow(p.q, -2.0 * I * xc / p.b) * res)
        }
        Generator::Y => {
            let res = residue_two_radii(&mut h, -I, r1, r2, 1e-8)?;
            Ok(-I * (-2.0 * PI * I) * res)
        }
    }
}

/// `Res_{z=0} G_b(-ibz) (-2 pi i b) - 1` and
/// `Res_{z=-i} G_b(-ibz) (-2 pi i b)(1 - q^{-2}) - 1`, both in absolute value.
pub fn residue_constants(p: &ModularParam) -> Result<(f64, f64)> {
    let mut g = |z: Complex| gbv(-I * p.b * z, p, GB_TOL).unwrap_or(Complex::new(f64::NAN, 0.0));
    let (r1, r2) = RESIDUE_RADII;
    let k = -2.0 * PI * I * p.b;
    let r0 = residue_two_radii(&mut g, Complex::new(0.0, 0.0), r1, r2, 1e-8)?;
    let rm = residue_two_radii(&mut g, -I, r1, r2, 1e-8)?;
    let q2 = p.q.powi(-2);
    Ok(((r0 * k - 1.0).norm(), (rm * k * (1.0 - q2) - 1.0).norm()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoactionKind {
    /// the coaction itself, limit `R_+`
    V,
    /// the conjugate coaction, limit `R_-`
    VStar,
}

/// `| scaled kernel - classical kernel |` on `b^2 = i r`. The classical
/// kernels are `(1/2 pi) Gamma(ix - iz) (-i)^{iz - ix}` for `V` and
/// `(1/2 pi) Gamma(iz - ix) i^{ix - iz}` for `V*`.
pub fn coaction_limit_residual(kind: CoactionKind, x: f64, z: f64, r: f64) -> Result<f64> {
    if x == z {
        return Err(Error::Pole(Complex::new(x, 0.0)));
    }
    let p = ModularParam::limit(r)?;
    let (xc, zc) = (Complex::new(x, 0.0), Complex::new(z, 0.0));
    // (-i)^{iz - ix} = i^{ix - iz} = e^{pi (z - x) / 2}
    let phase = (PI * (z - x) / 2.0).exp();
    match kind {
        CoactionKind::V => {
            let q = scaled_kernel(xc, zc, &p)?;
            Ok((q - gamma(I * (xc - zc))? * phase / (2.0 * PI)).norm())
        }
        CoactionKind::VStar => {
            let (bx, bz) = (p.b * xc, p.b * zc);
            let q = p.b * (PI * p.big_q * (bz - bx)).exp() * cpow(s_factor(&p), I * (bx - bz) / p.b)
                / gbv(p.big_q + I * (bx - bz), &p, GB_TOL)?;
            Ok((q - gamma(I * (zc - xc))? * phase / (2.0 * PI)).norm())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_commutation_factor() {
        let a = NormalOrderedMonomial::new(Complex::new(0.3, 0.0), Complex::new(0.0, 0.0));
        let b = NormalOrderedMonomial::new(Complex::new(0.0, 0.0), Complex::new(0.5, 0.0));
        assert_eq!(a.mul(&b).coeff, Complex::new(1.0, 0.0));
        let ba = b.mul(&a);
        assert!((ba.coeff - (2.0 * PI * I * 0.15).exp()).norm() < 1e-15);
    }

    #[test]
    fn axiom_and_residues() {
        let p = ModularParam::from_b(0.8).unwrap();
        assert!(corep_axiom_residual(0.3, -0.4, 1.1, &p).unwrap() < 1e-12);
        assert!(corep_axiom_residual(0.3, 0.3, 1.1, &p).is_err());
        let (r0, rm) = residue_constants(&p).unwrap();
        assert!(r0 < 1e-8 && rm < 1e-8);
    }

    #[test]
    fn pairing_on_exponential() {
        let p = ModularParam::from_b(0.8).unwrap();
        let f = |z: Complex| (-z * z).exp();
        let x = 0.4;
        let gx = pairing(Generator::X, f, x, &p).unwrap();
        assert!((gx - (2.0 * PI * p.b * x).exp() * f(Complex::new(x, 0.0))).norm() < 1e-8);
        let gy = pairing(Generator::Y, f, x, &p).unwrap();
        assert!((gy - f(Complex::new(x, 0.0) - I * p.b)).norm() < 1e-8);
    }

    #[test]
    fn coaction_limit_shrinks() {
        for kind in [CoactionKind::V, CoactionKind::VStar] {
            let a = coaction_limit_residual(kind, 0.3, 0.9, 0.1).unwrap();
            let b = coaction_limit_residual(kind, 0.3, 0.9, 0.01).unwrap();
            assert!(b < a / 5.0);
        }
    }
}
