//! The quantum dilogarithm transform: its kernels, the Fourier-picture
//! transforms and their rescaled classical limit.

use crate::axb::{classical_kernel, KernelKind};
use crate::dilog::gb::gbv;
use crate::dilog::identities::GB_TOL;
use crate::dilog::param::ModularParam;
use crate::error::{Error, Result};
use crate::numerics::cplx::I;
use crate::Complex;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QKernelKind {
    Floor,
    Ceil,
    FloorStar,
    CeilStar,
    FFloorStar,
    FCeilStar,
}

impl QKernelKind {
    /// Number of arguments: `(alpha, x, x1, x2)` or `(lam, t1, t2)`.
    pub fn arity(&self) -> usize {
        match self {
            QKernelKind::FFloorStar | QKernelKind::FCeilStar => 3,
            _ => 4,
        }
    }
}

/// Kernel value. Plain and starred kinds take `(alpha, x, x1, x2)`; the
/// Fourier kinds take `(lam, t1, t2)` with `t = t1 + t2` imposed.
///
/// The starred ceil kernel multiplies the plain ceil kernel by
/// `zeta_b e^{pi i (x - x1)^2} G_b(Q/2 + i alpha)`.
pub fn q_kernel(kind: QKernelKind, args: &[Complex], p: &ModularParam) -> Result<Complex> {
    if args.len() != kind.arity() {
        return Err(Error::Precondition(format!("{kind:?} takes {} arguments, got {}", kind.arity(), args.len())));
    }
    let g = |y: Complex| gbv(y, p, GB_TOL);
    match kind {
        QKernelKind::Floor | QKernelKind::Ceil | QKernelKind::FloorStar | QKernelKind::CeilStar => {
            let (alpha, x, x1, x2) = (args[0], args[1], args[2], args[3]);
            let e = 2.0 * PI * I * (x - x1) * (x2 - x1 + alpha);
            let floor = || -> Result<Complex> { Ok(p.zeta_bar() * e.exp() / g(p.big_q + I * x - I * x2)?) };
            let ceil = || -> Result<Complex> { Ok(p.zeta * (-e).exp() * g(I * x - I * x2)?) };
            let mid = || g(p.big_q / 2.0 + I * alpha);
            let d2 = PI * I * (x - x1) * (x - x1);
            match kind {
                QKernelKind::Floor => floor(),
                QKernelKind::Ceil => ceil(),
                QKernelKind::FloorStar => Ok(p.zeta_bar() * (-d2).exp() / mid()? * floor()?),
                _ => Ok(p.zeta * d2.exp() * mid()? * ceil()?),
            }
        }
        QKernelKind::FFloorStar => {
            let (l, t1, t2) = (args[0], args[1], args[2]);
            let t = t1 + t2;
            Ok(g(-I * t1 + I * l)? * g(-I * t2 - I * l)? / g(-I * t)? * (PI * I * l * (l - 2.0 * t1)).exp())
        }
        QKernelKind::FCeilStar => {
            let (l, t1, t2) = (args[0], args[1], args[2]);
            let t = t1 + t2;
            Ok(g(-I * l + I * t1)? * g(I * t2 + I * l)? / g(I * t)?
                * (PI * I * l * (l + 2.0 * t2) - 2.0 * PI * I * t1 * t2).exp())
        }
    }
}

/// Memoised `G_b` on a quantised argument grid, so that nested transforms
/// sharing a lattice evaluate each `G_b` value once.
struct GbCache<'a> {
    p: &'a ModularParam,
    map: RefCell<HashMap<(i64, i64), Complex>>,
}

impl<'a> GbCache<'a> {
    fn new(p: &'a ModularParam) -> Self {
        GbCache { p, map: RefCell::new(HashMap::new()) }
    }

    fn get(&self, y: Complex) -> Result<Complex> {
        const SCALE: f64 = (1u64 << 36) as f64;
        let key = ((y.re * SCALE).round() as i64, (y.im * SCALE).round() as i64);
        if let Some(v) = self.map.borrow().get(&key) {
            return Ok(*v);
        }
        let v = gbv(y, self.p, GB_TOL)?;
        self.map.borrow_mut().insert(key, v);
        Ok(v)
    }
}

/// Shared settings of the Fourier-picture transforms. Both contours are
/// moved to straight lines half a lattice spacing `m = min(b, 1/b)` below the
/// nearest pole they must pass above, the crossed pole is added back as a
/// residue, and the lines are integrated with the trapezoid rule.
pub struct QTransform<'a> {
    cache: GbCache<'a>,
    h: f64,
    tol: f64,
    offset: f64,
}

/// Nodes further out than this are never summed.
const MAX_REACH: f64 = 40.0;

impl<'a> QTransform<'a> {
    pub fn new(p: &'a ModularParam, tol: f64) -> Result<Self> {
        if !(p.is_real_b() && tol > 0.0) {
            return Err(Error::Precondition("the quantum transform needs real b and tol > 0".into()));
        }
        let b = p.b.re;
        let m = b.min(1.0 / b);
        let offset = 0.5 * m;
        // trapezoid error ~ exp(-2 pi d / h) with d = offset the distance to the nearest pole
        let h = 2.0 * PI * offset / (1e-2 * tol).ln().abs();
        Ok(QTransform { cache: GbCache::new(p), h, tol, offset })
    }

    /// `sum_k h g(c + kh)` over the line `Im = c`, outward from the node
    /// nearest `centre` until the terms stay below `1e-3 tol` for six nodes.
    fn line_sum<F: FnMut(Complex) -> Result<Complex>>(&self, mut g: F, c: f64, centre: f64) -> Result<Complex> {
        let h = self.h;
        let k0 = (centre / h).round() as i64;
        let node = |k: i64| Complex::new(k as f64 * h, c);
        let mut sum = g(node(k0))?;
        for dir in [1i64, -1] {
            let mut quiet = 0;
            let mut k = k0 + dir;
            while quiet < 6 {
                if ((k - k0) as f64 * h).abs() > MAX_REACH {
                    return Err(Error::Decay(format!("integrand still above tolerance at distance {MAX_REACH}")));
                }
                let v = g(node(k))?;
                sum += v;
                quiet = if v.norm() * h < 1e-3 * self.tol { quiet + 1 } else { 0 };
                k += dir;
            }
        }
        Ok(sum * h)
    }

    /// `phi(lam, t) = int_C G_b(i t2 - i t + i lam) G_b(-i t2 - i lam) / G_b(-i t) e^{pi i lam (lam - 2t + 2 t2)} f(t - t2, t2) dt2`.
    pub fn forward<F: Fn(Complex, Complex) -> Complex>(&self, f: F, lam: Complex, t: Complex) -> Result<Complex> {
        if (t.im - 0.0).abs() > 0.5 * self.offset {
            return Err(Error::Precondition(format!("forward transform expects t near the real axis, got {t}")));
        }
        let g = &self.cache;
        let gt = g.get(-I * t)?;
        let c = (-lam).im - self.offset;
        let line = self.line_sum(
            |t2| Ok(g.get(I * (t2 - t + lam))? * g.get(-I * (t2 + lam))? / gt * (PI * I * lam * (lam - 2.0 * t + 2.0 * t2)).exp() * f(t - t2, t2)),
            c,
            (-lam).re,
        )?;
        // the line passes below the pole at t2 = -lam that C keeps underneath
        Ok(line + (-PI * I * lam * (lam + 2.0 * t)).exp() * f(t + lam, -lam))
    }

    /// `f(t1, t2) = int_C' G_b(-i lam + i t1) G_b(i lam + i t2) / G_b(i t) e^{pi i lam (lam + 2 t2)} e^{-2 pi i t1 t2} phi(lam, t1 + t2) dlam`.
    pub fn inverse<F: Fn(Complex, Complex) -> Complex>(&self, phi: F, t1: Complex, t2: Complex) -> Result<Complex> {
        let g = &self.cache;
        let t = t1 + t2;
        let gt = g.get(I * t)?;
        let c = t1.im - self.offset;
        let e12 = (-2.0 * PI * I * t1 * t2).exp();
        let line = self.line_sum(
            |l| Ok(g.get(-I * l + I * t1)? * g.get(I * l + I * t2)? / gt * (PI * I * l * (l + 2.0 * t2)).exp() * e12 * phi(l, t)),
            c,
            t1.re,
        )?;
        Ok(line + (PI * I * t1 * t1).exp() * phi(t1, t))
    }

    /// Largest absolute error of forward then inverse over the points; the
    /// inner forward transforms share this transform's `G_b` cache.
    pub fn round_trip<F: Fn(Complex, Complex) -> Complex>(&self, f: F, points: &[(f64, f64)]) -> Result<f64> {
        let fail = RefCell::new(None::<Error>);
        let phi = |l: Complex, t: Complex| match self.forward(&f, l, t) {
            Ok(v) => v,
            Err(e) => {
                fail.borrow_mut().get_or_insert(e);
                Complex::new(f64::NAN, 0.0)
            }
        };
        let mut worst: f64 = 0.0;
        for &(a, b) in points {
            let (a, b) = (Complex::new(a, 0.0), Complex::new(b, 0.0));
            let back = self.inverse(phi, a, b);
            if let Some(e) = fail.borrow_mut().take() {
                return Err(e);
            }
            worst = worst.max((back? - f(a, b)).norm());
        }
        Ok(worst)
    }
}

pub fn apply_q_forward<F: Fn(Complex, Complex) -> Complex>(f: F, lam: f64, t: f64, p: &ModularParam, tol: f64) -> Result<Complex> {
    QTransform::new(p, tol)?.forward(f, Complex::new(lam, 0.0), Complex::new(t, 0.0))
}

pub fn apply_q_inverse<F: Fn(Complex, Complex) -> Complex>(phi: F, t1: f64, t2: f64, p: &ModularParam, tol: f64) -> Result<Complex> {
    QTransform::new(p, tol)?.inverse(phi, Complex::new(t1, 0.0), Complex::new(t2, 0.0))
}

/// `| b F[b lam, b t; b t1, b t2]_* - classical kernel |` on `b^2 = i r`, with
/// the delta factor removed on both sides.
pub fn kernel_limit_residual(kind: KernelKind, lam: f64, t1: f64, t2: f64, r: f64) -> Result<f64> {
    let p = ModularParam::limit(r)?;
    let b = p.b;
    let args = [b * lam, b * t1, b * t2];
    let (qk, ck) = match kind {
        KernelKind::Floor => (QKernelKind::FFloorStar, classical_kernel(KernelKind::Floor, lam.into(), t1.into(), t2.into())?),
        KernelKind::Ceil => (QKernelKind::FCeilStar, classical_kernel(KernelKind::Ceil, lam.into(), t1.into(), t2.into())?),
    };
    Ok((b * q_kernel(qk, &args, &p)? - ck).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    #[test]
    fn arity_is_enforced() {
        let p = ModularParam::from_b(0.8).unwrap();
        assert!(matches!(q_kernel(QKernelKind::Floor, &[c(0.1); 3], &p), Err(Error::Precondition(_))));
        assert!(q_kernel(QKernelKind::FFloorStar, &[c(0.1), c(0.4), c(0.9)], &p).is_ok());
    }

    #[test]
    fn starred_kernels_keep_modulus() {
        let p = ModularParam::from_b(0.75).unwrap();
        let args = [c(0.3), c(0.2), c(-0.4), c(0.9)];
        for (star, plain) in [(QKernelKind::FloorStar, QKernelKind::Floor), (QKernelKind::CeilStar, QKernelKind::Ceil)] {
            let r = q_kernel(star, &args, &p).unwrap() / q_kernel(plain, &args, &p).unwrap();
            assert!((r.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_round_trip() {
        let p = ModularParam::from_b(0.8).unwrap();
        let q = QTransform::new(&p, 1e-6).unwrap();
        let f = |a: Complex, b: Complex| (-a * a - b * b).exp();
        assert!(q.round_trip(f, &[(0.2, 0.3), (-0.6, 0.1)]).unwrap() < 1e-4);
    }

    #[test]
    fn complex_b_is_rejected() {
        let p = ModularParam::from_b2(Complex::new(0.3, 0.4)).unwrap();
        assert!(QTransform::new(&p, 1e-6).is_err());
    }

    #[test]
    fn kernel_limit_shrinks() {
        let a = kernel_limit_residual(KernelKind::Floor, 0.5, 1.0, 1.5, 0.1).unwrap();
        let b = kernel_limit_residual(KernelKind::Floor, 0.5, 1.0, 1.5, 0.01).unwrap();
        assert!(b < a / 5.0);
    }
}
