use crate::error::{Error, Result};
use crate::numerics::cplx::I;
use crate::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// How `G_b` is evaluated for a given `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `Im b^2 > 0`: both infinite products converge.
    Product,
    /// `Re b > 0` and `Re 1/b > 0`, in practice real `b`: Ruijsenaars integral.
    Integral,
}

/// The deformation parameter `b` and the constants derived from it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModularParam {
    pub b: Complex,
    pub regime: Regime,
    /// `b + 1/b`
    pub big_q: Complex,
    /// `e^{pi i b^2}`
    pub q: Complex,
    /// `e^{pi i/4 + (pi i/12)(b^2 + b^-2)}`
    pub zeta: Complex,
    /// `(pi/24)(b^2 + b^-2)`
    pub chi: Complex,
}

impl ModularParam {
    /// Real `b > 0`, integral regime.
    pub fn from_b(b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::Domain(format!("b must be a positive real, got {b}")));
        }
        Ok(Self::build(Complex::new(b, 0.0), Regime::Integral))
    }

    /// `b` is the principal square root of `b2`. `Im b2 > 0` selects the
    /// product regime, a positive real `b2` the integral regime.
    pub fn from_b2(b2: Complex) -> Result<Self> {
        if !(b2.re.is_finite() && b2.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if b2.im > 0.0 {
            Ok(Self::build(b2.sqrt(), Regime::Product))
        } else if b2.im == 0.0 && b2.re > 0.0 {
            Ok(Self::build(Complex::new(b2.re.sqrt(), 0.0), Regime::Integral))
        } else {
            Err(Error::Domain(format!("b^2 = {b2} has Im b^2 < 0 or lies on the cut")))
        }
    }

    /// Arbitrary complex `b` with `|arg b| < pi/2`. Uses the product regime
    /// when `Im b^2 > 0` and the integral otherwise.
    pub fn from_b_complex(b: Complex) -> Result<Self> {
        if !(b.re > 0.0 && b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::Domain(format!("b = {b} must have Re b > 0")));
        }
        let regime = if (b * b).im > 0.0 { Regime::Product } else { Regime::Integral };
        Ok(Self::build(b, regime))
    }

    /// Integral-regime evaluation at a complex `b`, regardless of `Im b^2`.
    pub fn integral_complex(b: Complex) -> Result<Self> {
        if !(b.re > 0.0 && b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::Domain(format!("b = {b} must have Re b > 0")));
        }
        Ok(Self::build(b, Regime::Integral))
    }

    /// The classical-limit schedule `b^2 = i r`.
    pub fn limit(r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("r must be positive, got {r}")));
        }
        Self::from_b2(Complex::new(0.0, r))
    }

    fn build(b: Complex, regime: Regime) -> Self {
        let b2 = b * b;
        let s = b2 + 1.0 / b2;
        ModularParam {
            b,
            regime,
            big_q: b + 1.0 / b,
            q: (PI * I * b2).exp(),
            zeta: (I * PI / 4.0 + I * PI / 12.0 * s).exp(),
            chi: PI / 24.0 * s,
        }
    }

    pub fn b2(&self) -> Complex {
        self.b * self.b
    }

    pub fn zeta_bar(&self) -> Complex {
        1.0 / self.zeta
    }

    /// `e^{-pi i b^-2}`
    pub fn q_tilde(&self) -> Complex {
        (-PI * I / self.b2()).exp()
    }

    /// `b -> 1/b`, keeping the integral backend when the product would diverge.
    pub fn dual(&self) -> Self {
        let bd = 1.0 / self.b;
        let regime = if (bd * bd).im > 0.0 { Regime::Product } else { Regime::Integral };
        Self::build(bd, regime)
    }

    /// The parameter `1/conj(b)`, which is in the product regime whenever `b`
    /// is and describes the same function as `conj(b)`.
    pub fn conj_dual(&self) -> Self {
        Self::build(1.0 / self.b.conj(), self.regime)
    }

    pub fn is_real_b(&self) -> bool {
        self.b.im == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_constants() {
        let p = ModularParam::from_b(0.8).unwrap();
        assert!((p.big_q.re - 2.05).abs() < 1e-15);
        assert!((p.zeta.norm() - 1.0).abs() < 1e-15);
        let l = ModularParam::limit(0.1).unwrap();
        assert_eq!(l.regime, Regime::Product);
        assert!((l.b2() - Complex::new(0.0, 0.1)).norm() < 1e-15);
        assert!(ModularParam::from_b2(Complex::new(0.3, -0.1)).is_err());
    }
}
