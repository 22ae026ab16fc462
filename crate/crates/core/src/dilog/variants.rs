//! `S_b`, `g_b` and `V_eta`, all expressed through `G_b`.

use super::gb::gb;
use super::param::ModularParam;
use super::QDValue;
use crate::error::{Error, Result};
use crate::numerics::cplx::I;
use crate::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantKind {
    /// `S_b(x) = e^{-(pi i/2) x (x - Q)} G_b(x)`
    Sb,
    /// `g_b(x) = zeta_bar / G_b(Q/2 + log(x) / (2 pi i b))`
    GbSmall,
    /// `V(z) = zeta_b G_b(Q/2 - iz/(2 pi b))`, with `eta = 1/b^2`
    Veta,
}

pub fn variant(kind: VariantKind, arg: Complex, p: &ModularParam, tol: f64) -> Result<QDValue> {
    match kind {
        VariantKind::Sb => {
            let g = gb(arg, p, tol)?;
            let f = (-PI * I / 2.0 * arg * (arg - p.big_q)).exp();
            Ok(QDValue { value: g.value * f, backend: g.backend, err_estimate: g.err_estimate * f.norm() })
        }
        VariantKind::GbSmall => {
            if arg.im == 0.0 && arg.re <= 0.0 {
                return Err(Error::Branch(format!("g_b needs x off (-inf, 0], got {arg}")));
            }
            let g = gb(p.big_q / 2.0 + arg.ln() / (2.0 * PI * I * p.b), p, tol)?;
            let v = p.zeta_bar() / g.value;
            Ok(QDValue { value: v, backend: g.backend, err_estimate: g.err_estimate * v.norm() / g.value.norm() })
        }
        VariantKind::Veta => {
            let g = gb(p.big_q / 2.0 - I * arg / (2.0 * PI * p.b), p, tol)?;
            Ok(QDValue { value: p.zeta * g.value, backend: g.backend, err_estimate: g.err_estimate })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn veta_is_inverse_of_small_g() {
        let p = ModularParam::from_b(0.7).unwrap();
        let z = Complex::new(0.4, 0.0);
        let v = variant(VariantKind::Veta, z, &p, 1e-12).unwrap().value;
        let g = variant(VariantKind::GbSmall, z.exp(), &p, 1e-12).unwrap().value;
        assert!((v * g - 1.0).norm() < 1e-10);
        assert!((v * v.conj() - 1.0).norm() < 1e-10);
    }

    #[test]
    fn sb_midpoint() {
        let p = ModularParam::from_b(0.8).unwrap();
        let s = variant(VariantKind::Sb, p.big_q / 2.0, &p, 1e-12).unwrap().value;
        assert!((s.norm() - 1.0).abs() < 1e-10);
        assert!((s * s - 1.0).norm() < 1e-10);
    }
}
