//! Gauss–Legendre panels with global adaptive refinement, and double
//! exponential rules for infinite intervals.

use crate::error::{Error, Result};
use crate::numerics::contour::QuadResult;
use crate::Complex;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

/// Points per Gauss–Legendre panel.
pub const GL_ORDER: usize = 20;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// One GL panel on `[a, b]`; returns the integral and the L1 mass.
fn panel<G: FnMut(usize, f64) -> Complex>(
    g: &mut G,
    seg: usize,
    a: f64,
    b: f64,
) -> Result<(Complex, f64)> {
    let (x, w) = gl20();
    let h = 0.5 * (b - a);
    let m = 0.5 * (a + b);
    let mut s = Complex::new(0.0, 0.0);
    let mut l1 = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        let v = g(seg, m + h * xi);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        s += v * *wi;
        l1 += v.norm() * wi;
    }
    Ok((s * h, l1 * h.abs()))
}

struct Panel {
    seg: usize,
    a: f64,
    b: f64,
    left: Complex,
    right: Complex,
    l1: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err.total_cmp(&o.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

fn refine<G: FnMut(usize, f64) -> Complex>(
    g: &mut G,
    seg: usize,
    a: f64,
    b: f64,
    whole: Complex,
) -> Result<Panel> {
    let m = 0.5 * (a + b);
    let (left, l1a) = panel(g, seg, a, m)?;
    let (right, l1b) = panel(g, seg, m, b)?;
    Ok(Panel {
        seg,
        a,
        b,
        left,
        right,
        l1: l1a + l1b,
        err: (left + right - whole).norm(),
    })
}

/// Global adaptive Gauss–Legendre integration over several parametrised
/// pieces. `pieces[k] = (a, b, n)` splits `[a, b]` into `n` initial panels and
/// `g(k, s)` must already include the path Jacobian.
///
/// Panels are bisected in order of decreasing local error until the summed
/// error is below `tol` (or below the rounding floor of the L1 mass).
pub fn adaptive_gl<G: FnMut(usize, f64) -> Complex>(
    pieces: &[(f64, f64, usize)],
    mut g: G,
    tol: f64,
    max_evals: usize,
) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    let mut evals = 0usize;
    for (seg, &(a, b, n)) in pieces.iter().enumerate() {
        let n = n.max(1);
        let h = (b - a) / n as f64;
        for k in 0..n {
            let lo = a + h * k as f64;
            let hi = if k + 1 == n { b } else { lo + h };
            let (whole, _) = panel(&mut g, seg, lo, hi)?;
            heap.push(refine(&mut g, seg, lo, hi, whole)?);
            evals += 3 * GL_ORDER;
        }
    }
    loop {
        let mut value = Complex::new(0.0, 0.0);
        let mut err = 0.0;
        let mut l1 = 0.0;
        for p in heap.iter() {
            value += p.left + p.right;
            err += p.err;
            l1 += p.l1;
        }
        let floor = 64.0 * f64::EPSILON * l1;
        if err <= tol.max(floor) {
            return Ok(QuadResult { value, err_estimate: err, n_evals: evals });
        }
        if evals + 4 * GL_ORDER > max_evals {
            return Err(Error::BudgetExhausted { value, err, tol });
        }
        let p = heap.pop().expect("non-empty panel set");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // interval cannot be split further in floating point
            return Err(Error::BudgetExhausted { value, err, tol });
        }
        heap.push(refine(&mut g, p.seg, p.a, m, p.left)?);
        heap.push(refine(&mut g, p.seg, m, p.b, p.right)?);
        evals += 4 * GL_ORDER;
    }
}

/// Adaptive GL on a single real interval.
pub fn integrate_interval<F: FnMut(f64) -> Complex>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    tol: f64,
    max_evals: usize,
) -> Result<QuadResult> {
    adaptive_gl(&[(a, b, panels)], |_, s| f(s), tol, max_evals)
}

/// Double exponential rule for a map `t -> (x(t), x'(t))` of the real line.
/// `map` returns `None` once `x(t)` leaves the representable range. Levels
/// halve the step and are compared until they agree within `tol`.
pub fn de_rule<M, F>(map: M, mut f: F, tol: f64, max_level: u32) -> Result<QuadResult>
where
    M: Fn(f64) -> Option<(f64, f64)>,
    F: FnMut(f64) -> Complex,
{
    const T_MAX: f64 = 7.0;
    let mut evals = 0usize;
    let mut term = |t: f64, evals: &mut usize| -> Result<Option<Complex>> {
        match map(t) {
            Some((x, dx)) if dx != 0.0 && dx.is_finite() => {
                *evals += 1;
                let v = f(x);
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite);
                }
                Ok(Some(v * dx))
            }
            Some(_) => Ok(Some(Complex::new(0.0, 0.0))),
            None => Ok(None),
        }
    };
    // sum of terms at t = offset + k*step, k >= 0, walking both directions
    let mut sweep = |offset: f64, step: f64, scale: f64, evals: &mut usize| -> Result<(Complex, f64)> {
        let mut s = Complex::new(0.0, 0.0);
        let mut l1 = 0.0;
        for dir in [1.0, -1.0] {
            let mut k = usize::from(offset == 0.0 && dir < 0.0);
            let mut small = 0;
            loop {
                let t = dir * (offset + step * k as f64);
                if t.abs() > T_MAX {
                    break;
                }
                match term(t, evals)? {
                    None => break,
                    Some(v) => {
                        s += v;
                        l1 += v.norm();
                        if v.norm() <= 1e-18 * scale.max(s.norm()) + 1e-300 {
                            small += 1;
                            if small >= 3 {
                                break;
                            }
                        } else {
                            small = 0;
                        }
                    }
                }
                k += 1;
            }
        }
        Ok((s, l1))
    };
    let mut h = 1.0;
    let (mut sum, mut l1) = sweep(0.0, h, 0.0, &mut evals)?;
    let mut prev = sum * h;
    let mut last_err = f64::INFINITY;
    for level in 1..=max_level {
        h *= 0.5;
        let scale = sum.norm();
        let (s, a) = sweep(h, 2.0 * h, scale, &mut evals)?;
        sum += s;
        l1 += a;
        let est = sum * h;
        last_err = (est - prev).norm();
        if level >= 3 && last_err <= tol.max(1e-14 * l1 * h) {
            return Ok(QuadResult { value: est, err_estimate: last_err, n_evals: evals });
        }
        prev = est;
    }
    Err(Error::BudgetExhausted { value: prev, err: last_err, tol })
}

/// Map of the exp-sinh rule onto `[a, inf)`.
pub fn exp_sinh(a: f64) -> impl Fn(f64) -> Option<(f64, f64)> {
    move |t: f64| {
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        if u > 700.0 {
            return None;
        }
        let e = u.exp();
        Some((a + e, e * std::f64::consts::FRAC_PI_2 * t.cosh()))
    }
}

/// Map of the tanh-sinh rule onto `[a, b]`.
pub fn tanh_sinh(a: f64, b: f64) -> impl Fn(f64) -> Option<(f64, f64)> {
    let m = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    move |t: f64| {
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        let ch = u.cosh();
        if !ch.is_finite() {
            return Some((m, 0.0));
        }
        // offsets from the nearer endpoint keep full relative precision
        let x = if u < 0.0 { a + 2.0 * h / (1.0 + (-2.0 * u).exp()) } else { b - 2.0 * h / (1.0 + (2.0 * u).exp()) };
        if x <= a || x >= b {
            return Some((m, 0.0));
        }
        Some((x, h * std::f64::consts::FRAC_PI_2 * t.cosh() / (ch * ch)))
    }
}

/// Map of the sinh-sinh rule onto the whole real line.
pub fn sinh_sinh() -> impl Fn(f64) -> Option<(f64, f64)> {
    |t: f64| {
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        if u.abs() > 700.0 {
            return None;
        }
        Some((u.sinh(), u.cosh() * std::f64::consts::FRAC_PI_2 * t.cosh()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(GL_ORDER);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(38)).sum();
        assert!((s - 2.0 / 39.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let r = integrate_interval(|x| Complex::new(1.0 / (1e-4 + x * x), 0.0), -1.0, 1.0, 2, 1e-10, 200_000)
            .unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((r.value.re - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn exp_sinh_half_line() {
        let r = de_rule(exp_sinh(0.0), |x| Complex::new((-x).exp(), 0.0), 1e-13, 10).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        let r = de_rule(tanh_sinh(0.0, 1.0), |x| Complex::new(1.0 / x.sqrt(), 0.0), 1e-12, 10).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-11);
    }

    #[test]
    fn sinh_sinh_whole_line() {
        let r = de_rule(sinh_sinh(), |x| Complex::new(1.0 / (1.0 + x * x), 0.0), 1e-12, 12).unwrap();
        assert!((r.value.re - std::f64::consts::PI).abs() < 1e-11);
    }
}
