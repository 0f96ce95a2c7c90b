use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use affine_floer::affine_base::{
    count_points, fractional_points, validate, Dp6Params, FractionalPoint,
};
use affine_floer::coordinate_ring::{expand_in_qbasis, multiply, q_monomial, QBasisIndex};
use affine_floer::floer_algebra::{mu2 as product, BasisVector};
use affine_floer::rational::format_rational;
use affine_floer::syz_numeric::{critical_points, hessian_identity, log_integral, DEFAULT_TOL};
use affine_floer::tropical::{build_triangle, check_balancing};
use affine_floer::verify::{
    class_p_suite, default_windows, homotopy_suite, numeric_suite, ring_suite, tropical_suite,
    wrapped_suite, SuiteReport,
};
use affine_floer::Execution;

use crate::error::{CliError, CliResult};
use crate::instance::{Instance, InstanceArgs};
use crate::render::render_svg;
use crate::report::{Check, CommandReport};

fn split_instance(args: &[String], wanted: usize) -> (Option<&str>, &[String]) {
    if args.len() > wanted {
        (Some(args[0].as_str()), &args[1..])
    } else {
        (None, args)
    }
}

fn parse_num<T: std::str::FromStr>(what: &str, s: &str) -> CliResult<T> {
    s.parse()
        .map_err(|_| CliError::Usage(format!("{what}: cannot parse {s:?}")))
}

#[derive(Debug, Args)]
pub struct PointsArgs {
    /// `[INSTANCE] D`: builtin name (cp2, dp6) or JSON file, then the denominator.
    #[arg(num_args = 1..=2, required = true, value_name = "ARGS")]
    args: Vec<String>,
    #[command(flatten)]
    instance: InstanceArgs,
}

pub fn points(a: &PointsArgs) -> CliResult<CommandReport> {
    let start = Instant::now();
    let (name, rest) = split_instance(&a.args, 1);
    let inst = a.instance.resolve(name)?;
    let d: u32 = parse_num("d", &rest[0])?;
    let pts = fractional_points(&inst.manifold, d);
    let mut report = CommandReport::new("points", json!({ "instance": inst.name, "d": d }));
    let listed: Vec<Value> = pts
        .iter()
        .map(|p| {
            let mut v = json!({ "a": p.a, "i": p.i });
            if let Some(pos) = inst.manifold.embed(p) {
                v["eta"] = json!(format_rational(&pos.eta));
                v["xi"] = json!(format_rational(&pos.xi));
            }
            v
        })
        .collect();
    report.results = json!({ "count": pts.len(), "points": listed });
    report
        .lines
        .push(format!("{} points of {} at d = {d}:", pts.len(), inst.name));
    report.lines.push(
        pts.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" "),
    );
    let scanned = count_points(&inst.manifold, d);
    report.check(Check::simple(
        "count matches lattice scan",
        scanned == pts.len() as u64,
        Some(format!("scan found {scanned}")),
    ));
    if inst.is_cp2 {
        let expected = (u64::from(d) + 2) * (u64::from(d) + 1) / 2;
        report.check(Check::simple(
            "count = (d+2)(d+1)/2",
            expected == pts.len() as u64,
            Some(format!("expected {expected}")),
        ));
    }
    Ok(report.finish(start))
}

#[derive(Debug, Args)]
pub struct Mu2Args {
    /// `[INSTANCE] N M A I B J`: the product of q(b,j) in HF(L(n), L(n+m))
    /// with q(a,i) in HF(L(0), L(n)).
    #[arg(num_args = 6..=7, required = true, allow_negative_numbers = true, value_name = "ARGS")]
    args: Vec<String>,
    #[command(flatten)]
    instance: InstanceArgs,
}

pub fn mu2(a: &Mu2Args) -> CliResult<CommandReport> {
    let start = Instant::now();
    let (name, rest) = split_instance(&a.args, 6);
    let inst = a.instance.resolve(name)?;
    let n: i64 = parse_num("n", &rest[0])?;
    let m: i64 = parse_num("m", &rest[1])?;
    let ai: i64 = parse_num("a", &rest[2])?;
    let ii: i64 = parse_num("i", &rest[3])?;
    let bi: i64 = parse_num("b", &rest[4])?;
    let ji: i64 = parse_num("j", &rest[5])?;
    if n < 0 || m < 0 {
        return Err(CliError::Usage("denominators must be nonnegative".into()));
    }
    let model = inst.model()?;
    let q1 = BasisVector::new(0, n, ai, ii);
    let q2 = BasisVector::new(n, n + m, bi, ji);
    let prod = product(&model, &q2, &q1)?;
    let mut report = CommandReport::new(
        "mu2",
        json!({ "instance": inst.name, "n": n, "m": m, "a": ai, "i": ii, "b": bi, "j": ji }),
    );
    report.lines.push(format!("mu2({q2}, {q1}) = {prod}"));
    let mut results = json!({ "product": serde_json::to_value(&prod)?, "text": prod.to_string() });

    let outputs_ok = prod.terms().all(|(v, _)| model.is_admissible(&v));
    report.check(Check::simple("outputs are admissible", outputs_ok, None));

    if inst.is_cp2 && n > 0 && m > 0 {
        let p1 = q_monomial(QBasisIndex::new(ai, ii, n as u32)?)?;
        let p2 = q_monomial(QBasisIndex::new(bi, ji, m as u32)?)?;
        let poly = multiply(&p1, &p2);
        let expanded = expand_in_qbasis(&poly)?;
        let from_ring: Vec<(i64, i64, String)> = expanded
            .iter()
            .map(|(q, c)| (q.a, q.i, c.to_string()))
            .collect();
        let from_floer: Vec<(i64, i64, String)> = prod
            .terms()
            .map(|(v, c)| (v.a, v.i, c.to_string()))
            .collect();
        let rhs: Vec<String> = expanded
            .iter()
            .map(|(q, c)| {
                let f = q_monomial(*q).map(|p| p.to_string()).unwrap_or_default();
                if *c == 1.into() {
                    format!("({f})")
                } else {
                    format!("{c}*({f})")
                }
            })
            .collect();
        let identity = format!("({p1}) * ({p2}) = {}", rhs.join(" + "));
        report.lines.push(identity.clone());
        results["identity"] = json!(identity);
        results["polynomial_product"] = json!(poly.to_string());
        report.check(Check::simple(
            "agrees with polynomial multiplication",
            from_ring == from_floer,
            Some(format!("ring {from_ring:?}")),
        ));
    }
    report.results = results;
    Ok(report.finish(start))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Ring,
    Homotopy,
    Tropical,
    ClassP,
    Wrapped,
    Numeric,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Largest denominator (ring 6, wrapped 4, dp6 point counts 10).
    #[arg(long, value_name = "N")]
    max_degree: Option<u32>,
    /// Largest k for words (8), singularity invariance (10) and partition sums (12).
    #[arg(long, value_name = "N")]
    max_k: Option<u32>,
    /// Largest denominator for the tropical sweep (4).
    #[arg(long, value_name = "N")]
    max: Option<u32>,
    /// Quadrature tolerance for the numeric suite.
    #[arg(long, value_name = "X", default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Widths of the dp6 base used by the class-P suite.
    #[arg(long, value_name = "W0,W1,W2", value_delimiter = ',', default_values_t = [1u32, 1, 1])]
    dp6_widths: Vec<u32>,
    #[arg(long, value_name = "H", default_value_t = 1)]
    dp6_left_height: u32,
}

fn add_suites(report: &mut CommandReport, suites: Vec<SuiteReport>) -> CliResult<()> {
    let mut results = Vec::new();
    for s in suites {
        report.lines.push(format!(
            "suite {}: {}",
            s.suite,
            if s.passed() { "pass" } else { "FAIL" }
        ));
        results.push(serde_json::to_value(&s)?);
        for c in s.checks {
            let mut c = Check::from(c);
            c.name = format!("{}: {}", s.suite, c.name);
            report.check(c);
        }
    }
    report.results = json!({ "suites": results });
    Ok(())
}

pub fn verify(a: &VerifyArgs, exec: Execution) -> CliResult<CommandReport> {
    let start = Instant::now();
    let want = |s: Suite| a.suite == s || a.suite == Suite::All;
    let mut suites = Vec::new();
    if want(Suite::Ring) {
        suites.push(ring_suite(a.max_degree.unwrap_or(6).max(1), exec));
    }
    if want(Suite::Homotopy) {
        suites.push(homotopy_suite(a.max_k.unwrap_or(8) as usize, exec));
    }
    if want(Suite::Tropical) {
        suites.push(tropical_suite(
            a.max.unwrap_or(4),
            a.max_k.unwrap_or(10),
            exec,
        ));
    }
    if want(Suite::ClassP) {
        let widths: [u32; 3] = a
            .dp6_widths
            .clone()
            .try_into()
            .map_err(|_| CliError::Usage("--dp6-widths takes three values".into()))?;
        let params = Dp6Params {
            widths,
            left_height: a.dp6_left_height,
        };
        suites.push(class_p_suite(
            u64::from(a.max_k.unwrap_or(12)),
            params,
            a.max_degree.unwrap_or(10),
        ));
    }
    if want(Suite::Wrapped) {
        suites.push(wrapped_suite(
            a.max_degree.unwrap_or(4),
            default_windows().0,
            exec,
        ));
    }
    if want(Suite::Numeric) {
        suites.push(numeric_suite(a.tol, exec));
    }
    let suite_name = a
        .suite
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let mut report = CommandReport::new(
        "verify",
        json!({
            "suite": suite_name,
            "max_degree": a.max_degree,
            "max_k": a.max_k,
            "max": a.max,
            "tol": a.tol,
            "parallel": exec.is_parallel(),
        }),
    );
    add_suites(&mut report, suites)?;
    Ok(report.finish(start))
}

#[derive(Debug, Args)]
pub struct NumericArgs {
    /// Quadrature tolerance.
    #[arg(long, value_name = "X", default_value_t = DEFAULT_TOL)]
    tol: f64,
}

pub fn numeric(a: &NumericArgs, exec: Execution) -> CliResult<CommandReport> {
    let start = Instant::now();
    let mut report = CommandReport::new("numeric", json!({ "tol": a.tol }));
    let suite = numeric_suite(a.tol, exec);
    let mut crit = Vec::new();
    for lambda in [1.0, 3.0, 6.0] {
        crit.push(json!({ "lambda": lambda, "points": critical_points(lambda)? }));
    }
    let logs = json!({
        "R=0.5": log_integral(0.5, a.tol.min(1e-10))?,
        "R=2": log_integral(2.0, a.tol.min(1e-10))?,
    });
    let hessian = hessian_identity(1.3, -0.4)?;
    add_suites(&mut report, vec![suite])?;
    report.results["critical_points"] = json!(crit);
    report.results["log_integrals"] = logs;
    report.results["hessian_sample"] = serde_json::to_value(hessian)?;
    Ok(report.finish(start))
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// `[INSTANCE] OUT.svg`.
    #[arg(num_args = 1..=2, required = true, value_name = "ARGS")]
    args: Vec<String>,
    /// Mark the (1/d)-integral points.
    #[arg(long, value_name = "D")]
    points: Option<u32>,
    /// Draw the tropical triangle with inputs q(a,i)@n, q(b,j)@m and output depth h.
    #[arg(long, num_args = 7, allow_negative_numbers = true, value_names = ["A", "I", "N", "B", "J", "M", "H"])]
    triangle: Option<Vec<i64>>,
    #[command(flatten)]
    instance: InstanceArgs,
}

pub fn render(a: &RenderArgs) -> CliResult<CommandReport> {
    let start = Instant::now();
    let (name, rest) = split_instance(&a.args, 1);
    let inst: Instance = a.instance.resolve(name)?;
    let out = PathBuf::from(&rest[0]);
    let mut report = CommandReport::new(
        "render",
        json!({ "instance": inst.name, "out": out, "points": a.points, "triangle": a.triangle }),
    );
    let pts: Vec<_> = match a.points {
        Some(d) => fractional_points(&inst.manifold, d)
            .iter()
            .filter_map(|p| inst.manifold.embed(p))
            .collect(),
        None => Vec::new(),
    };
    let triangle = match &a.triangle {
        None => None,
        Some(t) => {
            if !inst.is_cp2 {
                return Err(CliError::Usage(
                    "tropical triangles are drawn on cp2 only".into(),
                ));
            }
            let to_u32 = |x: i64| {
                u32::try_from(x)
                    .map_err(|_| CliError::Usage(format!("denominator {x} must be nonnegative")))
            };
            let q1 = FractionalPoint::new(t[0], t[1], to_u32(t[2])?);
            let q2 = FractionalPoint::new(t[3], t[4], to_u32(t[5])?);
            let xi = &inst.manifold.singularities[0].xi;
            let tri = build_triangle(q1, q2, t[6], xi)?;
            if tri.is_none() {
                report.lines.push(format!(
                    "no tropical triangle from {q1}, {q2} to depth {}",
                    t[6]
                ));
            }
            tri
        }
    };
    let (svg, drawn) = render_svg(&inst.manifold, &pts, triangle.as_ref());
    std::fs::write(&out, &svg).map_err(|source| CliError::Io {
        path: out.clone(),
        source,
    })?;
    report.lines.push(format!(
        "wrote {} ({} points, {} singularities, {} legs, {} disk attachments)",
        out.display(),
        drawn.points,
        drawn.singularities,
        drawn.legs,
        drawn.disks
    ));
    let mut results = json!({
        "svg": out,
        "points": drawn.points,
        "singularities": drawn.singularities,
        "legs": drawn.legs,
        "disk_attachments": drawn.disks,
    });
    report.check(Check::simple(
        "instance is valid",
        validate(&inst.manifold).is_empty(),
        None,
    ));
    if let Some(t) = &triangle {
        results["triangle"] = serde_json::to_value(t)?;
        if let Some(b) = &t.bend {
            report
                .lines
                .push(format!("bend at {b}, multiplicity {}", t.multiplicity));
        }
        report.check(Check::simple("triangle balances", check_balancing(t), None));
    }
    report.results = results;
    Ok(report.finish(start))
}

#[derive(Debug, Args)]
pub struct InstanceCmd {
    /// Builtin name or JSON file.
    name: Option<String>,
    #[command(flatten)]
    instance: InstanceArgs,
}

pub fn instance(a: &InstanceCmd) -> CliResult<CommandReport> {
    let start = Instant::now();
    let inst = a.instance.resolve(a.name.as_deref())?;
    let mut report = CommandReport::new("instance", json!({ "instance": inst.name }));
    let text = inst.manifold.to_json();
    report.results = serde_json::from_str(&text)?;
    report.lines.push(text);
    let violations = validate(&inst.manifold);
    report.check(Check::simple(
        "instance is valid",
        violations.is_empty(),
        Some(
            violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; "),
        ),
    ));
    Ok(report.finish(start))
}
