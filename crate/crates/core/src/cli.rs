//! The `qdilog` command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 a numerical or
//! domain error, 64 a usage or input error.

use crate::axb::{classical_forward, classical_inverse, classical_kernel, KernelKind};
use crate::corep::{coaction_kernel, coaction_limit_residual, CoactionKind};
use crate::dilog::fb::fb_hypergeometric;
use crate::dilog::limits::{classical_limit_residual, LimitKind};
use crate::dilog::param::ModularParam;
use crate::dilog::variants::{variant, VariantKind};
use crate::dilog::{gb, ruijsenaars_g, QDValue};
use crate::error::Error;
use crate::gamma::{gamma, hyp2f1_contour, hyp2f1_series};
use crate::numerics::classw::{ClassW2, ClassWFunction, ClassWTerm};
use crate::qintertwiner::{kernel_limit_residual, q_kernel, QKernelKind, QTransform};
use crate::verify::{glim_points, run_suite, CheckRecord, Suite, KERNEL_LIMIT_GRID};
use crate::Complex;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "qdilog", version, about = "Quantum dilogarithm evaluation, verification suites and limit tables")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate one function and print a JSON record
    Eval(EvalArgs),
    /// Run a verification suite
    Verify(VerifyArgs),
    /// Residual tables of the classical limits, as CSV
    Table(TableArgs),
    /// Apply the classical or quantum transform to class-W input
    Transform(TransformArgs),
}

#[derive(Args, Debug, Clone)]
#[group(multiple = false)]
struct BSpec {
    /// Real b > 0
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Complex b^2, e.g. 0.3+0.4i
    #[arg(long, allow_hyphen_values = true)]
    b2: Option<String>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    function: String,
    /// Arguments; complex numbers like 0.3-0.2i, or Q, Q/2, b, 1/b
    args: Vec<String>,
    /// Further arguments, appended after the positional ones
    #[arg(long = "x", allow_hyphen_values = true)]
    x: Vec<String>,
    #[command(flatten)]
    bspec: BSpec,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// gb-identities, tau-beta, q-binomial, fourier-gb, classical-rep, q-intertwiner, corep, limits or all
    suite: String,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print the report as JSON instead of one line per check
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TableKind {
    Glim,
    KernelLimit,
    CoactionLimit,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(value_enum)]
    kind: TableKind,
    /// Points separated by ';', coordinates by ','; defaults to the standard sample
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    /// Strictly decreasing r schedule, comma separated
    #[arg(long, default_value = "0.1,0.05,0.025")]
    r: String,
    /// glim: glim|glimq; kernel-limit: floor|ceil; coaction-limit: v|v_star
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Which {
    Classical,
    Quantum,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Dir {
    Forward,
    Inverse,
    RoundTrip,
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[arg(value_enum)]
    which: Which,
    #[arg(value_enum)]
    direction: Dir,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Numeric(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numeric(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args.into_iter().map(|a| protect_negative(a.into()))) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let res = match cli.cmd {
        Cmd::Eval(a) => cmd_eval(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Table(a) => cmd_table(a),
        Cmd::Transform(a) => cmd_transform(a),
    };
    match res {
        Ok(code) => code,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(CliError::Numeric(e)) => {
            eprintln!("error: {e}");
            EXIT_DOMAIN
        }
    }
}

/// Marker standing in for a leading minus, so that `-0.4+0.1i` reaches the
/// positional arguments instead of being read as a flag.
const NEG: char = '\u{2212}';

fn protect_negative(a: OsString) -> OsString {
    match a.to_str() {
        Some(s) if s.len() > 1 && s.starts_with('-') && matches!(s.as_bytes()[1], b'0'..=b'9' | b'.' | b'i') => {
            format!("{NEG}{}", &s[1..]).into()
        }
        _ => a,
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(text.as_bytes()).map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}")))
        }
    }
}

fn cjson(z: Complex) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn parse_f64(s: &str) -> Option<f64> {
    let t = s.trim();
    if t.is_empty() {
        return None;
    }
    t.parse::<f64>().ok()
}

/// Parses `a+bi`-style complex numbers. Terms may also be the symbols `Q`,
/// `Q/n`, `b` and `1/b`, optionally preceded by `c*`, when a parameter is
/// known.
pub fn parse_complex(s: &str, p: Option<&ModularParam>) -> Result<Complex, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).map(|c| if c == NEG { '-' } else { c }).collect();
    if s.is_empty() {
        return Err("empty number".into());
    }
    let bytes = s.as_bytes();
    let mut terms = Vec::new();
    let mut start = 0;
    for k in 1..bytes.len() {
        let ch = bytes[k];
        if (ch == b'+' || ch == b'-') && !matches!(bytes[k - 1], b'e' | b'E' | b'*' | b'/') {
            terms.push(&s[start..k]);
            start = k;
        }
    }
    terms.push(&s[start..]);
    let mut z = Complex::new(0.0, 0.0);
    for t in terms {
        let (sign, body) = match t.as_bytes()[0] {
            b'-' => (-1.0, &t[1..]),
            b'+' => (1.0, &t[1..]),
            _ => (1.0, t),
        };
        z += sign * parse_term(body, p).ok_or_else(|| format!("cannot parse '{t}' in '{s}'"))?;
    }
    Ok(z)
}

fn parse_term(t: &str, p: Option<&ModularParam>) -> Option<Complex> {
    if let Some(v) = parse_f64(t) {
        return Some(Complex::new(v, 0.0));
    }
    if let Some(c) = t.strip_suffix('i') {
        let c = c.strip_suffix('*').unwrap_or(c);
        let v = if c.is_empty() { 1.0 } else { parse_f64(c)? };
        return Some(Complex::new(0.0, v));
    }
    let (coef, sym) = match t.split_once('*') {
        Some((c, s)) => (parse_f64(c)?, s),
        None => (1.0, t),
    };
    let p = p?;
    let v = match sym {
        "Q" => p.big_q,
        "b" => p.b,
        "1/b" => 1.0 / p.b,
        _ => {
            let d = parse_f64(sym.strip_prefix("Q/")?)?;
            p.big_q / d
        }
    };
    Some(coef * v)
}

fn param_from(bs: &BSpec) -> CliResult<Option<(ModularParam, Value)>> {
    match (bs.b, &bs.b2) {
        (Some(b), _) => Ok(Some((ModularParam::from_b(b)?, json!({"b": b})))),
        (None, Some(s)) => {
            let b2 = parse_complex(s, None).map_err(CliError::Usage)?;
            Ok(Some((ModularParam::from_b2(b2)?, json!({"b2": cjson(b2)}))))
        }
        _ => Ok(None),
    }
}

fn need<'a>(p: &'a Option<(ModularParam, Value)>, f: &str) -> CliResult<&'a ModularParam> {
    p.as_ref().map(|x| &x.0).ok_or_else(|| CliError::Usage(format!("{f} needs --b or --b2")))
}

struct Evaluated {
    value: Complex,
    err: Option<f64>,
    backend: Option<&'static str>,
}

impl From<QDValue> for Evaluated {
    fn from(q: QDValue) -> Self {
        Evaluated { value: q.value, err: Some(q.err_estimate), backend: Some(q.backend.as_str()) }
    }
}

fn plain(value: Complex, backend: Option<&'static str>) -> Evaluated {
    Evaluated { value, err: None, backend }
}

const FUNCTIONS: &str = "gamma, gb, sb, gb_small, veta, ruijsenaars_g, fb, hyp2f1, floor, ceil, floor_star, ceil_star, \
f_floor_star, f_ceil_star, classical_floor, classical_ceil, coaction";

fn evaluate(name: &str, a: &[Complex], pm: &Option<(ModularParam, Value)>, tol: f64) -> CliResult<Evaluated> {
    let arity = match name {
        "gamma" | "gb" | "sb" | "gb_small" | "veta" | "ruijsenaars_g" => 1,
        "coaction" => 2,
        "f_floor_star" | "f_ceil_star" | "classical_floor" | "classical_ceil" => 3,
        "fb" | "hyp2f1" | "floor" | "ceil" | "floor_star" | "ceil_star" => 4,
        _ => return Err(CliError::Usage(format!("unknown function '{name}'; expected one of {FUNCTIONS}"))),
    };
    if a.len() != arity {
        return Err(CliError::Usage(format!("{name} takes {arity} argument(s), got {}", a.len())));
    }
    let real = |z: Complex| -> CliResult<f64> {
        if z.im != 0.0 {
            return Err(CliError::Usage(format!("{name} needs real arguments, got {z}")));
        }
        Ok(z.re)
    };
    Ok(match name {
        "gamma" => plain(gamma(a[0])?, None),
        "gb" => gb(a[0], need(pm, name)?, tol)?.into(),
        "sb" => variant(VariantKind::Sb, a[0], need(pm, name)?, tol)?.into(),
        "gb_small" => variant(VariantKind::GbSmall, a[0], need(pm, name)?, tol)?.into(),
        "veta" => variant(VariantKind::Veta, a[0], need(pm, name)?, tol)?.into(),
        "ruijsenaars_g" => ruijsenaars_g(a[0], need(pm, name)?, tol)?.into(),
        "fb" => plain(fb_hypergeometric(a[0], a[1], a[2], a[3], need(pm, name)?)?, Some("contour")),
        "hyp2f1" => {
            if a[3].norm() < 0.9 {
                plain(hyp2f1_series(a[0], a[1], a[2], a[3])?, Some("series"))
            } else {
                plain(hyp2f1_contour(a[0], a[1], a[2], a[3])?, Some("contour"))
            }
        }
        "floor" | "ceil" | "floor_star" | "ceil_star" | "f_floor_star" | "f_ceil_star" => {
            let kind = match name {
                "floor" => QKernelKind::Floor,
                "ceil" => QKernelKind::Ceil,
                "floor_star" => QKernelKind::FloorStar,
                "ceil_star" => QKernelKind::CeilStar,
                "f_floor_star" => QKernelKind::FFloorStar,
                _ => QKernelKind::FCeilStar,
            };
            plain(q_kernel(kind, a, need(pm, name)?)?, None)
        }
        "classical_floor" => plain(classical_kernel(KernelKind::Floor, a[0], a[1], a[2])?, None),
        "classical_ceil" => plain(classical_kernel(KernelKind::Ceil, a[0], a[1], a[2])?, None),
        _ => plain(coaction_kernel(real(a[0])?, real(a[1])?, need(pm, name)?)?.0, None),
    })
}

fn cmd_eval(a: EvalArgs) -> CliResult<i32> {
    let pm = param_from(&a.bspec)?;
    let p = pm.as_ref().map(|x| &x.0);
    let mut args = Vec::new();
    for s in a.args.iter().chain(a.x.iter()) {
        args.push(parse_complex(s, p).map_err(CliError::Usage)?);
    }
    let mut rec = json!({
        "function": a.function,
        "args": args.iter().map(|&z| cjson(z)).collect::<Vec<_>>(),
        "param": pm.as_ref().map(|x| x.1.clone()),
    });
    let code = match evaluate(&a.function, &args, &pm, a.tol) {
        Ok(v) => {
            rec["value"] = cjson(v.value);
            rec["err_estimate"] = json!(v.err);
            rec["backend"] = json!(v.backend);
            EXIT_OK
        }
        Err(CliError::Numeric(e)) => {
            rec["error"] = json!({"kind": e.kind(), "message": e.to_string()});
            EXIT_DOMAIN
        }
        Err(u) => return Err(u),
    };
    emit(&a.out, &format!("{rec}\n"))?;
    Ok(code)
}

fn cmd_verify(a: VerifyArgs) -> CliResult<i32> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::parse(&a.suite).ok_or_else(|| CliError::Usage(format!("unknown suite '{}'", a.suite)))?]
    };
    if !(a.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", a.tol)));
    }
    let mut checks: Vec<CheckRecord> = Vec::new();
    for s in suites {
        checks.extend(run_suite(s, a.tol, a.seed));
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let text = if a.json {
        let report = json!({
            "suite": a.suite,
            "tol": a.tol,
            "seed": a.seed,
            "checks": checks,
            "passed": checks.len() - failed,
            "failed": failed,
            "pass": failed == 0,
        });
        format!("{}\n", serde_json::to_string_pretty(&report).expect("report serialises"))
    } else {
        let mut t = String::new();
        for c in &checks {
            let res = c.residual.map(|r| format!("{r:.3e}")).unwrap_or_else(|| "-".into());
            let tol = c.tol.map(|r| format!("{r:.1e}")).unwrap_or_else(|| "decreasing".into());
            t.push_str(&format!(
                "{} {} {} residual={} tol={} {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.suite,
                c.name,
                res,
                tol,
                c.params
            ));
            if let Some(e) = &c.error {
                t.push_str(&format!(" error=\"{e}\""));
            }
            t.push('\n');
        }
        t.push_str(&format!("{} passed, {} failed\n", checks.len() - failed, failed));
        t
    };
    emit(&a.out, &text)?;
    Ok(if checks.iter().any(|c| c.domain_error) {
        EXIT_DOMAIN
    } else if failed > 0 {
        EXIT_FAIL
    } else {
        EXIT_OK
    })
}

fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_f64(t).ok_or_else(|| CliError::Usage(format!("not a number: '{t}'"))))
        .collect()
}

fn parse_points(s: &str, dim: usize) -> CliResult<Vec<Vec<Complex>>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|pt| {
            let c: Vec<Complex> = pt.split(',').map(|x| parse_complex(x, None)).collect::<Result<_, _>>().map_err(CliError::Usage)?;
            if c.len() != dim {
                return Err(CliError::Usage(format!("point '{pt}' needs {dim} coordinate(s)")));
            }
            Ok(c)
        })
        .collect()
}

fn cmd_table(a: TableArgs) -> CliResult<i32> {
    let rs = parse_list(&a.r)?;
    if rs.iter().any(|&r| !(r > 0.0)) || rs.windows(2).any(|w| w[1] >= w[0]) {
        return Err(CliError::Usage("the r schedule must be positive and strictly decreasing".into()));
    }
    let variant = a.variant.as_deref();
    let (header, dim, default): (Vec<&str>, usize, Vec<Vec<Complex>>) = match a.kind {
        TableKind::Glim => (vec!["x_re", "x_im", "r", "residual"], 1, glim_points().iter().map(|&x| vec![x]).collect()),
        TableKind::KernelLimit => (vec!["lam", "t1", "t2", "r", "residual"], 3, {
            let (l, _, _) = KERNEL_LIMIT_GRID;
            l.iter().map(|&v| vec![v.into(), 1.0.into(), 1.5.into()]).collect()
        }),
        TableKind::CoactionLimit => (vec!["x", "z", "r", "residual"], 2, vec![vec![0.3.into(), 0.9.into()], vec![0.0.into(), 0.5.into()]]),
    };
    let points = match &a.points {
        Some(s) => parse_points(s, dim)?,
        None => default,
    };
    let real = |z: Complex| -> CliResult<f64> {
        if z.im != 0.0 {
            return Err(CliError::Usage(format!("coordinates must be real, got {z}")));
        }
        Ok(z.re)
    };
    let bad_variant = |v: &str| CliError::Usage(format!("unknown variant '{v}' for this table"));
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Usage(format!("csv: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    for pt in &points {
        for &r in &rs {
            let (mut row, res): (Vec<String>, f64) = match a.kind {
                TableKind::Glim => {
                    let kind = match variant {
                        None | Some("glim") => LimitKind::Glim,
                        Some("glimq") => LimitKind::GlimQ,
                        Some(v) => return Err(bad_variant(v)),
                    };
                    (vec![pt[0].re.to_string(), pt[0].im.to_string()], classical_limit_residual(kind, pt[0], r)?)
                }
                TableKind::KernelLimit => {
                    let kind = match variant {
                        None | Some("floor") => KernelKind::Floor,
                        Some("ceil") => KernelKind::Ceil,
                        Some(v) => return Err(bad_variant(v)),
                    };
                    let (l, t1, t2) = (real(pt[0])?, real(pt[1])?, real(pt[2])?);
                    (vec![l.to_string(), t1.to_string(), t2.to_string()], kernel_limit_residual(kind, l, t1, t2, r)?)
                }
                TableKind::CoactionLimit => {
                    let kind = match variant {
                        None | Some("v") => CoactionKind::V,
                        Some("v_star") => CoactionKind::VStar,
                        Some(v) => return Err(bad_variant(v)),
                    };
                    let (x, z) = (real(pt[0])?, real(pt[1])?);
                    (vec![x.to_string(), z.to_string()], coaction_limit_residual(kind, x, z, r)?)
                }
            };
            row.push(r.to_string());
            row.push(format!("{res:e}"));
            w.write_record(&row).map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    emit(&a.out, &String::from_utf8(bytes).expect("csv output is utf-8"))?;
    Ok(EXIT_OK)
}

#[derive(Deserialize, Serialize, Clone, Copy, Debug)]
struct CJson {
    re: f64,
    im: f64,
}

impl From<CJson> for Complex {
    fn from(c: CJson) -> Self {
        Complex::new(c.re, c.im)
    }
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct TermSpec {
    a: f64,
    #[serde(default = "zero")]
    b: CJson,
    poly: Vec<CJson>,
}

fn zero() -> CJson {
    CJson { re: 0.0, im: 0.0 }
}

/// Transform input: a sum of separable products `f(u) g(v)` of class-W
/// functions and the grid of `(u, v)` points.
#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct TransformInput {
    #[serde(default)]
    b: Option<f64>,
    #[serde(default = "default_tol")]
    tol: f64,
    function: Vec<[Vec<TermSpec>; 2]>,
    grid: Vec<[f64; 2]>,
}

fn default_tol() -> f64 {
    1e-8
}

fn build_function(spec: &[[Vec<TermSpec>; 2]]) -> CliResult<ClassW2> {
    let one = |ts: &Vec<TermSpec>| -> CliResult<ClassWFunction> {
        let terms = ts
            .iter()
            .map(|t| ClassWTerm::new(t.a, t.b.into(), t.poly.iter().map(|&c| c.into()).collect()))
            .collect::<crate::Result<Vec<_>>>()
            .map_err(|e| CliError::Usage(format!("bad class-W term: {e}")))?;
        Ok(ClassWFunction::new(terms))
    };
    let mut out = ClassW2::default();
    for [f, g] in spec {
        out = out.add(&ClassW2::product(one(f)?, one(g)?));
    }
    Ok(out)
}

/// Value at `tol` and, as its error estimate, the distance to the value at `100 tol`.
fn with_estimate<F: Fn(f64) -> crate::Result<Complex>>(f: F, tol: f64) -> crate::Result<(Complex, f64)> {
    let v = f(tol)?;
    let coarse = f(100.0 * tol)?;
    Ok((v, (v - coarse).norm()))
}

fn cmd_transform(a: TransformArgs) -> CliResult<i32> {
    let text = std::fs::read_to_string(&a.input).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", a.input.display())))?;
    let input: TransformInput = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("input schema: {e}")))?;
    if !(input.tol > 0.0) {
        return Err(CliError::Usage("tol must be positive".into()));
    }
    let f = build_function(&input.function)?;
    let fe = |u: Complex, v: Complex| f.eval(u, v);
    let tol = input.tol;
    let p = match (a.which, input.b) {
        (Which::Quantum, Some(b)) => Some(ModularParam::from_b(b)?),
        (Which::Quantum, None) => return Err(CliError::Usage("quantum transform input needs \"b\"".into())),
        _ => None,
    };
    let mut values = Vec::new();
    let mut worst: f64 = 0.0;
    for &[u, v] in &input.grid {
        let (uc, vc) = (Complex::new(u, 0.0), Complex::new(v, 0.0));
        let (val, err) = match (a.which, a.direction) {
            (Which::Classical, Dir::Forward) => with_estimate(|t| classical_forward(fe, uc, vc, t), tol)?,
            (Which::Classical, Dir::Inverse) => with_estimate(|t| classical_inverse(fe, uc, vc, t), tol)?,
            (Which::Classical, Dir::RoundTrip) => with_estimate(
                |t| {
                    let fail = std::cell::RefCell::new(None::<Error>);
                    let phi = |l: Complex, s: Complex| match classical_forward(fe, l, s, 0.1 * t) {
                        Ok(x) => x,
                        Err(e) => {
                            fail.borrow_mut().get_or_insert(e);
                            Complex::new(f64::NAN, 0.0)
                        }
                    };
                    let r = classical_inverse(phi, uc, vc, t);
                    match fail.into_inner() {
                        Some(e) => Err(e),
                        None => r,
                    }
                },
                tol,
            )?,
            (Which::Quantum, dir) => {
                let p = p.as_ref().expect("checked above");
                with_estimate(
                    |t| {
                        let q = QTransform::new(p, t)?;
                        match dir {
                            Dir::Forward => q.forward(fe, uc, vc),
                            Dir::Inverse => q.inverse(fe, uc, vc),
                            Dir::RoundTrip => {
                                let fail = std::cell::RefCell::new(None::<Error>);
                                let phi = |l: Complex, s: Complex| match q.forward(fe, l, s) {
                                    Ok(x) => x,
                                    Err(e) => {
                                        fail.borrow_mut().get_or_insert(e);
                                        Complex::new(f64::NAN, 0.0)
                                    }
                                };
                                let r = q.inverse(phi, uc, vc);
                                match fail.into_inner() {
                                    Some(e) => Err(e),
                                    None => r,
                                }
                            }
                        }
                    },
                    tol,
                )?
            }
        };
        let mut rec = json!({"point": [u, v], "value": cjson(val), "err_estimate": err});
        if a.direction == Dir::RoundTrip {
            let res = (val - fe(uc, vc)).norm();
            worst = worst.max(res);
            rec["residual"] = json!(res);
        }
        values.push(rec);
    }
    let mut report = json!({
        "which": format!("{:?}", a.which).to_lowercase(),
        "direction": match a.direction { Dir::Forward => "forward", Dir::Inverse => "inverse", Dir::RoundTrip => "round-trip" },
        "b": input.b,
        "tol": tol,
        "values": values,
    });
    if a.direction == Dir::RoundTrip {
        report["round_trip_max"] = json!(worst);
    }
    emit(&a.out, &format!("{}\n", serde_json::to_string_pretty(&report).expect("report serialises")))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_grammar() {
        let p = ModularParam::from_b(0.8).unwrap();
        assert_eq!(parse_complex("0.3+0.4i", None).unwrap(), Complex::new(0.3, 0.4));
        assert_eq!(parse_complex("0.5i+0.1", None).unwrap(), Complex::new(0.1, 0.5));
        assert_eq!(parse_complex("-1e-3-i", None).unwrap(), Complex::new(-1e-3, -1.0));
        assert_eq!(parse_complex("2.5", None).unwrap(), Complex::new(2.5, 0.0));
        assert!((parse_complex("Q/2", Some(&p)).unwrap() - p.big_q / 2.0).norm() < 1e-15);
        assert!((parse_complex("Q/2+0.3i", Some(&p)).unwrap() - p.big_q / 2.0 - Complex::new(0.0, 0.3)).norm() < 1e-15);
        assert!((parse_complex("-2*b", Some(&p)).unwrap() + 2.0 * p.b).norm() < 1e-15);
        assert!(parse_complex("Q", None).is_err());
        assert!(parse_complex("1.2.3", None).is_err());
        assert!(parse_complex("", None).is_err());
    }
}
