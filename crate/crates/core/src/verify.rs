//! Verification suites shared by the command line and the test targets.
//!
//! Checks of exact identities use the caller's tolerance. Checks whose
//! residual is a discretisation or limit error carry their own pinned bound.

use crate::axb::{
    act_mellin, act_point, decompose, intertwiner_equivariance, intertwiner_norms, intertwiner_round_trip,
    mellin_route_residual, norm2_dx_over_x, recompose, DecompCase, GroupElement, KernelKind, RepLabel,
};
use crate::corep::{coaction_limit_residual, corep_axiom_residual, pairing, residue_constants, CoactionKind, Generator};
use crate::dilog::fb::{fb_limit_residual, fb_reduction_residual};
use crate::dilog::identities::{
    backend_agreement, fourier_gb_residual, origin_residue_extrapolated, qbinom_residue_check, residue_check,
    tau_beta_residual, verify_identity, IdentityKind,
};
use crate::dilog::limits::{classical_limit_residual, LimitKind};
use crate::dilog::param::ModularParam;
use crate::error::{Error, Result};
use crate::gamma::{gamma, hyp2f1_contour, hyp2f1_series};
use crate::numerics::cplx::{rel_diff, I};
use crate::numerics::mellin::Strip;
use crate::qintertwiner::{kernel_limit_residual, q_kernel, QKernelKind, QTransform};
use crate::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    GbIdentities,
    TauBeta,
    QBinomial,
    FourierGb,
    ClassicalRep,
    QIntertwiner,
    Corep,
    Limits,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::GbIdentities,
        Suite::TauBeta,
        Suite::QBinomial,
        Suite::FourierGb,
        Suite::ClassicalRep,
        Suite::QIntertwiner,
        Suite::Corep,
        Suite::Limits,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::GbIdentities => "gb-identities",
            Suite::TauBeta => "tau-beta",
            Suite::QBinomial => "q-binomial",
            Suite::FourierGb => "fourier-gb",
            Suite::ClassicalRep => "classical-rep",
            Suite::QIntertwiner => "q-intertwiner",
            Suite::Corep => "corep",
            Suite::Limits => "limits",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.iter().copied().find(|x| x.name() == s)
    }
}

/// Residuals at or below this count as an exact identity when a limit
/// sequence is required to decrease.
pub const EXACT_FLOOR: f64 = 1e-12;

/// The `r` schedule of the classical limit checks.
pub const LIMIT_SCHEDULE: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub suite: &'static str,
    pub name: String,
    pub params: Value,
    pub residual: Option<f64>,
    pub tol: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub domain_error: bool,
}

struct Checks {
    suite: &'static str,
    out: Vec<CheckRecord>,
}

impl Checks {
    fn new(suite: Suite) -> Self {
        Checks { suite: suite.name(), out: Vec::new() }
    }

    fn failed(&mut self, name: &str, params: Value, tol: Option<f64>, e: Error) {
        self.out.push(CheckRecord {
            suite: self.suite,
            name: name.into(),
            params,
            residual: None,
            tol,
            pass: false,
            domain_error: e.is_domain(),
            error: Some(e.to_string()),
        });
    }

    /// `residual < tol`.
    fn bound(&mut self, name: &str, params: Value, r: Result<f64>, tol: f64) {
        match r {
            Ok(v) => self.out.push(CheckRecord {
                suite: self.suite,
                name: name.into(),
                params,
                residual: Some(v),
                tol: Some(tol),
                pass: v < tol,
                error: None,
                domain_error: false,
            }),
            Err(e) => self.failed(name, params, Some(tol), e),
        }
    }

    /// Strictly decreasing along the schedule, or an exact identity
    /// throughout; the reported residual is the last one.
    fn decreasing(&mut self, name: &str, mut params: Value, seq: Result<Vec<f64>>) {
        match seq {
            Ok(v) => {
                let exact = v.iter().all(|&x| x <= EXACT_FLOOR);
                let dec = v.windows(2).all(|w| w[1] < w[0]);
                params["residuals"] = json!(v);
                self.out.push(CheckRecord {
                    suite: self.suite,
                    name: name.into(),
                    params,
                    residual: v.last().copied(),
                    tol: None,
                    pass: exact || dec,
                    error: None,
                    domain_error: false,
                });
            }
            Err(e) => self.failed(name, params, None, e),
        }
    }
}

fn cjson(z: Complex) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn max_of<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    let mut m: f64 = 0.0;
    for r in it {
        m = m.max(r?);
    }
    Ok(m)
}

/// Parameters of the identity suite: two real `b` and two complex `b^2`.
pub fn identity_params() -> Vec<(Value, ModularParam)> {
    let mut v = Vec::new();
    for b in [0.7, 0.9] {
        v.push((json!({"b": b}), ModularParam::from_b(b).unwrap()));
    }
    for b2 in [Complex::new(0.3, 0.4), Complex::new(0.1, 0.5)] {
        v.push((json!({"b2": cjson(b2)}), ModularParam::from_b2(b2).unwrap()));
    }
    v
}

/// `5 x 5` grid of `x` in the strip: `Re x = k Re Q / 6`, `Im x` in `[-1, 1]`.
pub fn identity_grid(p: &ModularParam) -> Vec<Complex> {
    let q = p.big_q.re;
    let mut g = Vec::new();
    for k in 1..=5 {
        for j in 0..5 {
            g.push(Complex::new(k as f64 * q / 6.0, -1.0 + 0.5 * j as f64));
        }
    }
    g
}

pub fn run_suite(suite: Suite, tol: f64, seed: u64) -> Vec<CheckRecord> {
    let mut c = Checks::new(suite);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        Suite::GbIdentities => gb_identities(&mut c, tol, &mut rng),
        Suite::TauBeta => tau_beta(&mut c, tol),
        Suite::QBinomial => q_binomial(&mut c, tol),
        Suite::FourierGb => fourier_gb(&mut c, tol),
        Suite::ClassicalRep => classical_rep(&mut c),
        Suite::QIntertwiner => q_intertwiner(&mut c, tol),
        Suite::Corep => corep(&mut c, tol, &mut rng),
        Suite::Limits => limits(&mut c, tol),
    }
    c.out
}

fn gb_identities(c: &mut Checks, tol: f64, rng: &mut ChaCha8Rng) {
    for (pj, p) in identity_params() {
        let mut pts = identity_grid(&p);
        let q = p.big_q.re;
        for _ in 0..5 {
            pts.push(Complex::new(rng.random_range(0.05 * q..0.95 * q), rng.random_range(-1.0..1.0)));
        }
        for kind in IdentityKind::ALL {
            let r = max_of(pts.iter().map(|&x| verify_identity(kind, x, &p)));
            c.bound(kind.name(), json!({"param": pj, "points": pts.len()}), r, tol);
        }
        c.bound("origin_residue", json!({"param": pj}), origin_residue_extrapolated(&p), 1e-6);
        for (n, m) in [(0u32, 0u32), (1, 0), (0, 1)] {
            c.bound("residue", json!({"param": pj, "n": n, "m": m}), residue_check(n, m, &p), 1e-6);
        }
        if p.is_real_b() {
            let r = max_of((-4..=4).map(|k| {
                let g = crate::dilog::gbv(p.big_q / 2.0 + I * (0.5 * k as f64), &p, 1e-13)?;
                Ok((g.norm() - 1.0).abs())
            }));
            c.bound("unimodular_mid_line", json!({"param": pj}), r, tol);
        }
    }
    let pts = [
        Complex::new(0.5, 0.0),
        Complex::new(0.3, 0.2),
        Complex::new(1.2, -0.7),
        Complex::new(0.9, 0.5),
        Complex::new(1.5, 0.1),
    ];
    for x in pts {
        c.bound("backend_agreement", json!({"b": 0.7, "x": cjson(x)}), backend_agreement(x, 0.7), 1e-4);
    }
}

fn tau_beta(c: &mut Checks, tol: f64) {
    let p8 = ModularParam::from_b(0.8).unwrap();
    let pc = ModularParam::from_b2(Complex::new(0.1, 0.4)).unwrap();
    let q8 = p8.big_q;
    let cases = [
        (json!({"b": 0.8, "alpha": "Q/4", "beta": "Q/4"}), q8 / 4.0, q8 / 4.0, &p8),
        (json!({"b": 0.8, "alpha": "Q/3", "beta": "Q/6"}), q8 / 3.0, q8 / 6.0, &p8),
        (json!({"b2": cjson(pc.b2()), "alpha": "Q/4+0.1i", "beta": "Q/4"}), pc.big_q / 4.0 + 0.1 * I, pc.big_q / 4.0, &pc),
    ];
    for (pj, a, b, p) in cases {
        c.bound("tau_beta", pj, tau_beta_residual(a, b, p), tol);
    }
    let pf = ModularParam::from_b(0.8).unwrap();
    let a = pf.b * 0.4;
    c.bound(
        "fb_reduction",
        json!({"b": 0.8, "alpha": "0.4b", "beta": "0.3b", "z": -0.5}),
        fb_reduction_residual(a, pf.b * 0.3, Complex::new(-0.5, 0.0), &pf),
        tol,
    );
}

fn q_binomial(c: &mut Checks, tol: f64) {
    let p = ModularParam::from_b(0.8).unwrap();
    for n in 1..=5 {
        c.bound("qbinom_residue", json!({"b": 0.8, "n": n}), qbinom_residue_check(n, &p), tol);
    }
}

fn fourier_gb(c: &mut Checks, tol: f64) {
    for b in [0.8, 0.75] {
        let p = ModularParam::from_b(b).unwrap();
        for which in 1..=4u8 {
            for r in [-0.2, 0.0, 0.3] {
                c.bound("fourier_gb", json!({"b": b, "which": which, "r": r}), fourier_gb_residual(which, r, &p), tol);
            }
        }
    }
}

fn gauss2(t1: Complex, t2: Complex) -> Complex {
    (-t1 * t1 - t2 * t2).exp()
}

fn classical_rep(c: &mut Checks) {
    let g1 = GroupElement::new(2.0, 3.0).unwrap();
    let g2 = GroupElement::new(0.7, -0.4).unwrap();
    let f = |x: f64| Complex::new(x * (-x * x).exp(), 0.0);
    for (name, lab) in [("plus", RepLabel::plus()), ("minus", RepLabel::minus())] {
        let r = max_of([0.3, 1.0, 2.2].iter().map(|&x| {
            let lhs = act_point(&g1, lab, |y| act_point(&g2, lab, f, y), x);
            let rhs = act_point(&g1.compose(&g2)?, lab, f, x);
            Ok((lhs - rhs).norm())
        }));
        c.bound("group_law", json!({"rep": name}), r, 1e-12);
        let r = (|| {
            let n0 = norm2_dx_over_x(f, -12.0, 4.0, 1e-13)?;
            let n1 = norm2_dx_over_x(|x| act_point(&g1, lab, f, x), -12.0, 4.0, 1e-13)?;
            Ok((n1 - n0).abs() / n0)
        })();
        c.bound("point_unitarity", json!({"rep": name, "g": [2.0, 3.0]}), r, 1e-8);
    }
    let f2 = |x1: f64, x2: f64| Complex::new(x1 * (-x1 * x1 - x2 * x2).exp(), 0.0);
    for case in [DecompCase::Pp, DecompCase::Pm] {
        let r = max_of([(0.3, 0.8), (1.1, 0.4), (2.0, 1.7)].iter().map(|&(x1, x2)| {
            let back = recompose(case, |a, x| decompose(case, f2, a, x).unwrap_or(Complex::new(f64::NAN, 0.0)), x1, x2)?;
            Ok((back - f2(x1, x2)).norm())
        }));
        c.bound("decompose_round_trip", json!({"case": format!("{case:?}").to_lowercase()}), r, 1e-12);
    }
    let g = GroupElement::new(1.5, 0.7).unwrap();
    let mf = |z: Complex| gamma(I * z).unwrap_or(Complex::new(f64::NAN, 0.0)) / (2.0 * PI);
    let r = mellin_route_residual(&g, RepLabel::plus(), |x| Complex::new((-x).exp(), 0.0), mf, Complex::new(0.3, -0.5), Strip::new(0.0, f64::INFINITY), 1e-10);
    c.bound("mellin_route", json!({"f": "exp(-x)", "g": [1.5, 0.7], "w": cjson(Complex::new(0.3, -0.5))}), r, 1e-6);
    let h = GroupElement::new(0.8, -0.4).unwrap();
    let w = Complex::new(0.3, -0.8);
    let r = (|| {
        let fail = std::cell::RefCell::new(None::<Error>);
        let inner = |z: Complex| match act_mellin(&g, RepLabel::plus(), mf, z, 1e-11) {
            Ok(v) => v,
            Err(e) => {
                fail.borrow_mut().get_or_insert(e);
                Complex::new(f64::NAN, 0.0)
            }
        };
        let lhs = act_mellin(&h, RepLabel::plus(), inner, w, 1e-10);
        if let Some(e) = fail.borrow_mut().take() {
            return Err(e);
        }
        let rhs = act_mellin(&h.compose(&g)?, RepLabel::plus(), mf, w, 1e-10)?;
        Ok(rel_diff(lhs?, rhs))
    })();
    c.bound("mellin_composition", json!({"g1": [0.8, -0.4], "g2": [1.5, 0.7], "w": cjson(w)}), r, 1e-6);
    let pts: Vec<(f64, f64)> = [-0.7, 0.3, 1.1].iter().flat_map(|&a| [-0.5, 0.4, 1.3].iter().map(move |&b| (a, b))).collect();
    c.bound("intertwiner_round_trip", json!({"f": "exp(-t1^2-t2^2)", "points": pts.len()}), intertwiner_round_trip(gauss2, &pts, 1e-8), 1e-3);
    let r = intertwiner_norms(gauss2, 8.0, 4.0, 1e-9).map(|(big, small)| (big - small).abs() / small);
    c.bound("intertwiner_norms", json!({"f": "exp(-t1^2-t2^2)", "lam_half": 8.0, "t_half": 4.0}), r, 1e-3);
    let g = GroupElement::new(1.3, 0.4).unwrap();
    let r = intertwiner_equivariance(|t| (-t * t).exp(), &g, &[(0.2, 0.5), (-0.4, 1.0), (0.7, -0.6)], 1e-8);
    c.bound("intertwiner_equivariance", json!({"g": [1.3, 0.4], "points": 3}), r, 1e-3);
}

/// Grid for the kernel limit checks.
pub const KERNEL_LIMIT_GRID: ([f64; 3], [f64; 3], [f64; 3]) = ([0.2, 0.5, 0.9], [0.6, 1.0, 1.4], [0.8, 1.5, 2.1]);

fn q_intertwiner(c: &mut Checks, tol: f64) {
    let p = ModularParam::from_b(0.8).unwrap();
    let r = max_of([(0.3, 0.8, 1.1), (-0.5, 0.2, 0.7), (1.2, -0.4, 0.9)].iter().map(|&(l, a, b)| {
        let args = [Complex::new(l, 0.0), Complex::new(a, 0.0), Complex::new(b, 0.0)];
        let fl = q_kernel(QKernelKind::FFloorStar, &args, &p)?;
        let ce = q_kernel(QKernelKind::FCeilStar, &args, &p)?;
        Ok(rel_diff(ce, fl.conj()))
    }));
    c.bound("fourier_kernel_conjugation", json!({"b": 0.8, "points": 3}), r, tol);
    let r = max_of([(0.3, 0.2, -0.4, 0.9), (-0.7, 1.1, 0.5, -0.2)].iter().map(|&(al, x, x1, x2)| {
        let args: Vec<Complex> = [al, x, x1, x2].iter().map(|&v| Complex::new(v, 0.0)).collect();
        let ratio = q_kernel(QKernelKind::FloorStar, &args, &p)? / q_kernel(QKernelKind::Floor, &args, &p)?;
        Ok((ratio.norm() - 1.0).abs())
    }));
    c.bound("star_unimodular", json!({"b": 0.8, "points": 2}), r, tol);
    let pts: Vec<(f64, f64)> = [-0.5, 0.3, 0.8].iter().flat_map(|&a| [-0.2, 0.4, 1.0].iter().map(move |&b| (a, b))).collect();
    let r = QTransform::new(&p, 1e-6).and_then(|q| q.round_trip(gauss2, &pts));
    c.bound("round_trip", json!({"b": 0.8, "f": "exp(-t1^2-t2^2)", "points": pts.len()}), r, 1e-3);
    let (ls, as_, bs) = KERNEL_LIMIT_GRID;
    for kind in [KernelKind::Floor, KernelKind::Ceil] {
        let kname = format!("{kind:?}").to_lowercase();
        for &l in &ls {
            for &a in &as_ {
                for &b in &bs {
                    let seq = LIMIT_SCHEDULE[..3].iter().map(|&r| kernel_limit_residual(kind, l, a, b, r)).collect();
                    c.decreasing("kernel_limit", json!({"kind": kname, "lam": l, "t1": a, "t2": b, "schedule": &LIMIT_SCHEDULE[..3]}), seq);
                }
            }
        }
        c.bound("kernel_limit_small_r", json!({"kind": kname, "lam": 0.5, "t1": 1.0, "t2": 1.5, "r": 1e-3}), kernel_limit_residual(kind, 0.5, 1.0, 1.5, 1e-3), 1e-2);
    }
}

fn corep(c: &mut Checks, tol: f64, rng: &mut ChaCha8Rng) {
    for b in [0.7, 0.8] {
        let p = ModularParam::from_b(b).unwrap();
        let mut triples = Vec::new();
        while triples.len() < 20 {
            let t: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            if (t[0] - t[1]).abs() > 1e-3 && (t[1] - t[2]).abs() > 1e-3 && (t[0] - t[2]).abs() > 1e-3 {
                triples.push(t);
            }
        }
        let r = max_of(triples.iter().map(|t| corep_axiom_residual(t[0], t[1], t[2], &p)));
        c.bound("corep_axiom", json!({"b": b, "triples": 20}), r, tol);
        c.bound("residue_constants", json!({"b": b}), residue_constants(&p).map(|(a, b)| a.max(b)), 1e-6);
        type Corpus = (&'static str, fn(Complex) -> Complex);
        let corpus: [Corpus; 3] = [
            ("exp(-pi x^2)", |z| (-PI * z * z).exp()),
            ("exp(-(x-0.4)^2)", |z| (-(z - 0.4) * (z - 0.4)).exp()),
            ("x exp(-x^2)", |z| z * (-z * z).exp()),
        ];
        for (fname, f) in corpus {
            for x in [-0.6, 0.3, 1.1] {
                let xc = Complex::new(x, 0.0);
                let rx = pairing(Generator::X, f, x, &p).map(|v| rel_diff(v, (2.0 * PI * b * x).exp() * f(xc)));
                c.bound("pairing_x", json!({"b": b, "f": fname, "x": x}), rx, 1e-6);
                let ry = pairing(Generator::Y, f, x, &p).map(|v| rel_diff(v, f(xc - I * b)));
                c.bound("pairing_y", json!({"b": b, "f": fname, "x": x}), ry, 1e-6);
            }
        }
    }
    for (kind, kname) in [(CoactionKind::V, "v"), (CoactionKind::VStar, "v_star")] {
        for (x, z) in [(0.3, 0.9), (0.0, 0.5), (-0.4, 0.7)] {
            let seq = LIMIT_SCHEDULE.iter().map(|&r| coaction_limit_residual(kind, x, z, r)).collect();
            c.decreasing("coaction_limit", json!({"kind": kname, "x": x, "z": z, "schedule": LIMIT_SCHEDULE}), seq);
        }
        c.bound("coaction_limit_small_r", json!({"kind": kname, "x": 0.0, "z": 0.5, "r": 1e-3}), coaction_limit_residual(kind, 0.0, 0.5, 1e-3), 1e-2);
    }
}

/// Points with `|z| <= 0.5` off the cut `[0, inf)` of the contour form.
pub const HYP2F1_POINTS: [(f64, f64); 5] = [(-0.5, 0.0), (-0.2, 0.0), (0.0, 0.3), (0.25, 0.35), (-0.3, -0.4)];

/// Sample points of the gamma limit.
pub fn glim_points() -> [Complex; 4] {
    [Complex::new(0.5, 0.0), Complex::new(1.0, 0.0), Complex::new(1.5, 0.0), Complex::new(1.0, 0.3)]
}

fn limits(c: &mut Checks, tol: f64) {
    for x in glim_points() {
        for (kind, kname) in [(LimitKind::Glim, "glim"), (LimitKind::GlimQ, "glimq")] {
            let seq = LIMIT_SCHEDULE.iter().map(|&r| classical_limit_residual(kind, x, r)).collect();
            c.decreasing(kname, json!({"x": cjson(x), "schedule": LIMIT_SCHEDULE}), seq);
        }
        c.bound("glim_small_r", json!({"x": cjson(x), "r": 1e-3}), classical_limit_residual(LimitKind::Glim, x, 1e-3), 1e-2);
    }
    for x in [0.5, 0.3] {
        let r = classical_limit_residual(LimitKind::ReflectionCompat, Complex::new(x, 0.0), 1e-3);
        c.bound("reflection_compat", json!({"x": x, "r": 1e-3}), r, 1e-3);
    }
    for r in [0.37, 0.8] {
        c.bound("eta", json!({"r": r}), classical_limit_residual(LimitKind::Eta, Complex::new(0.0, 0.0), r), tol.min(1e-10));
    }
    c.bound(
        "fb_limit",
        json!({"a": 0.5, "b": 1.3, "c": 2.1, "z": -0.4, "r": 1e-3}),
        fb_limit_residual(0.5, 1.3, 2.1, -0.4, 1e-3),
        1e-2,
    );
    let r = max_of(HYP2F1_POINTS.iter().map(|&(zr, zi)| {
        let (a, b, cc, z) = (Complex::new(0.5, 0.0), Complex::new(1.3, 0.0), Complex::new(2.1, 0.0), Complex::new(zr, zi));
        Ok(rel_diff(hyp2f1_contour(a, b, cc, z)?, hyp2f1_series(a, b, cc, z)?))
    }));
    c.bound("hyp2f1_contour_vs_series", json!({"a": 0.5, "b": 1.3, "c": 2.1, "points": HYP2F1_POINTS.len()}), r, tol.min(1e-8));
}
