//! Finite sums of Gaussians times polynomials, closed under the Fourier
//! transform `(Ff)(xi) = int f(x) e^{-2 pi i x xi} dx`.

use crate::error::{Error, Result};
use crate::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `e^{-a x^2 + b x} * sum_k poly[k] x^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassWTerm {
    pub a: f64,
    pub b: Complex,
    pub poly: Vec<Complex>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassWFunction {
    pub terms: Vec<ClassWTerm>,
}

impl ClassWTerm {
    pub fn new(a: f64, b: Complex, poly: Vec<Complex>) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Precondition(format!("class W term needs A > 0, got {a}")));
        }
        Ok(ClassWTerm { a, b, poly })
    }

    pub fn eval(&self, z: Complex) -> Complex {
        let mut p = Complex::new(0.0, 0.0);
        for c in self.poly.iter().rev() {
            p = p * z + c;
        }
        (-self.a * z * z + self.b * z).exp() * p
    }

    fn fourier(&self) -> ClassWTerm {
        let a = self.a;
        let c0 = self.b / (2.0 * a);
        let c1 = Complex::new(0.0, -PI / a);
        let deg = self.poly.len();
        // moments int e^{-a y^2} y^j dy
        let moments: Vec<f64> = (0..deg)
            .map(|j| {
                if j % 2 == 1 {
                    0.0
                } else {
                    let dfact: f64 = (1..j).step_by(2).map(|v| v as f64).product();
                    (PI / a).sqrt() * dfact / (2.0 * a).powi(j as i32 / 2)
                }
            })
            .collect();
        let binom = binomial_rows(deg);
        // int e^{-a x^2 + b' x} x^k dx = e^{b'^2/4a} sum_j C(k,j) m_j c^{k-j}, c = c0 + c1 xi
        let mut out = vec![Complex::new(0.0, 0.0); deg.max(1)];
        for (k, pk) in self.poly.iter().enumerate() {
            for j in (0..=k).step_by(2) {
                let w = pk * binom[k][j] * moments[j];
                let n = k - j;
                for (i, bn) in binom[n].iter().enumerate().take(n + 1) {
                    out[i] += w * bn * c0.powu((n - i) as u32) * c1.powu(i as u32);
                }
            }
        }
        let pref = (self.b * self.b / (4.0 * a)).exp();
        for v in out.iter_mut() {
            *v *= pref;
        }
        ClassWTerm { a: PI * PI / a, b: Complex::new(0.0, -PI) * self.b / a, poly: out }
    }

    fn reflect(&self) -> ClassWTerm {
        ClassWTerm {
            a: self.a,
            b: -self.b,
            poly: self
                .poly
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { *c })
                .collect(),
        }
    }
}

fn binomial_rows(n: usize) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![1.0]];
    for k in 1..n.max(1) {
        let prev = &rows[k - 1];
        let mut r = vec![1.0; k + 1];
        for j in 1..k {
            r[j] = prev[j - 1] + prev[j];
        }
        rows.push(r);
    }
    rows
}

impl ClassWFunction {
    pub fn new(terms: Vec<ClassWTerm>) -> Self {
        ClassWFunction { terms }
    }

    /// `e^{-a (x - center)^2}`.
    pub fn gaussian(a: f64, center: f64) -> Result<Self> {
        let t = ClassWTerm::new(a, Complex::new(2.0 * a * center, 0.0), vec![Complex::new((-a * center * center).exp(), 0.0)])?;
        Ok(ClassWFunction { terms: vec![t] })
    }

    pub fn validate(&self) -> Result<()> {
        for t in &self.terms {
            if !(t.a > 0.0 && t.a.is_finite()) {
                return Err(Error::Precondition(format!("class W term needs A > 0, got {}", t.a)));
            }
        }
        Ok(())
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.terms.iter().map(|t| t.eval(z)).sum()
    }

    pub fn fourier(&self) -> ClassWFunction {
        ClassWFunction { terms: self.terms.iter().map(ClassWTerm::fourier).collect() }
    }

    /// Inverse transform, `f(x) = int F(xi) e^{2 pi i x xi} d xi`.
    pub fn inverse_fourier(&self) -> ClassWFunction {
        ClassWFunction { terms: self.terms.iter().map(|t| t.fourier().reflect()).collect() }
    }

    pub fn add(&self, other: &ClassWFunction) -> ClassWFunction {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        ClassWFunction { terms }
    }

    pub fn scale(&self, c: Complex) -> ClassWFunction {
        ClassWFunction {
            terms: self
                .terms
                .iter()
                .map(|t| ClassWTerm { a: t.a, b: t.b, poly: t.poly.iter().map(|p| p * c).collect() })
                .collect(),
        }
    }
}

/// Sum of separable products `f(t1) g(t2)` of class-W functions.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassW2 {
    pub products: Vec<(ClassWFunction, ClassWFunction)>,
}

impl ClassW2 {
    pub fn product(f: ClassWFunction, g: ClassWFunction) -> Self {
        ClassW2 { products: vec![(f, g)] }
    }

    pub fn eval(&self, t1: Complex, t2: Complex) -> Complex {
        self.products.iter().map(|(f, g)| f.eval(t1) * g.eval(t2)).sum()
    }

    pub fn add(&self, other: &ClassW2) -> ClassW2 {
        let mut products = self.products.clone();
        products.extend(other.products.iter().cloned());
        ClassW2 { products }
    }

    pub fn validate(&self) -> Result<()> {
        for (f, g) in &self.products {
            f.validate()?;
            g.validate()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    #[test]
    fn gaussian_fixed_point() {
        let f = ClassWFunction::gaussian(PI, 0.0).unwrap().fourier();
        for xi in [-1.3, 0.0, 0.4, 2.0] {
            assert!((f.eval(c(xi)) - (-PI * xi * xi).exp()).norm() < 1e-14);
        }
    }

    #[test]
    fn scaled_gaussian() {
        let a = 2.7;
        let f = ClassWFunction::gaussian(a, 0.0).unwrap().fourier();
        for xi in [-0.8, 0.0, 0.5] {
            let want = (PI / a).sqrt() * (-PI * PI * xi * xi / a).exp();
            assert!((f.eval(c(xi)) - want).norm() < 1e-14);
        }
    }

    #[test]
    fn odd_gaussian() {
        let f = ClassWFunction::new(vec![ClassWTerm::new(PI, c(0.0), vec![c(0.0), c(1.0)]).unwrap()]).fourier();
        for xi in [-0.7, 0.3, 1.1] {
            let want = Complex::new(0.0, -xi) * (-PI * xi * xi).exp();
            assert!((f.eval(c(xi)) - want).norm() < 1e-14);
        }
    }
}
