use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use sobolev_core::basis::{system_recurrence, BasisSystem};
use sobolev_core::cascade::{connection_matrix, connection_matrix_with, exact_connection, ConnectionMethod};
use sobolev_core::coeffs::i_pow;
use sobolev_core::diffmat::diffcheck;
use sobolev_core::fastmt::{MtPlan, SobolevLaguerrePlan};
use sobolev_core::orthopoly::{recurrence_coeffs, RecurrenceMethod};
use sobolev_core::ou::{solve, OuProblem, Scheme};
use sobolev_core::sobolev::{gram_matrix, perturbed_gram, GramMethod, GramReport};
use sobolev_core::weights::SobolevSequence;

use crate::*;

/// Gram tolerances on the Fourier and physical sides.
pub const GRAM_FOURIER_TOLERANCE: f64 = 1e-10;
pub const GRAM_PHYSICAL_TOLERANCE: f64 = 1e-6;
/// A perturbed mollifier must move some off-diagonal entry by at least this.
pub const NEGATIVE_CONTROL_THRESHOLD: f64 = 1e-3;
pub const ANALYTIC_RESIDUAL_TOLERANCE: f64 = 1e-10;
pub const FD_RESIDUAL_TOLERANCE: f64 = 1e-6;

const DEFAULT_XS: [f64; 7] = [-2.5, -1.0, -0.3, 0.0, 0.4, 1.3, 3.0];

type CmdResult = std::result::Result<Outcome, Failure>;

fn invalid<T>(msg: impl Into<String>) -> std::result::Result<T, Failure> {
    Err(Failure::Invalid(msg.into()))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

pub(crate) fn dispatch(cmd: &Command) -> CmdResult {
    match cmd {
        Command::GenRecurrence(a) => gen_recurrence(a),
        Command::GenConnection(a) => gen_connection(a),
        Command::EvalBasis(a) => eval_basis(a),
        Command::EvalPolys(a) => eval_polys(a),
        Command::Gram(a) => gram(a),
        Command::Diffcheck(a) => diffcheck_cmd(a),
        Command::MtTransform(a) => mt_transform(a),
        Command::OuDemo(a) => ou_demo(a),
        Command::Selftest(a) => Ok(selftest::command(a)),
    }
}

#[derive(Serialize)]
struct RecurrenceJson<'a> {
    family: &'a str,
    s: u32,
    method: RecurrenceMethod,
    mu0: f64,
    a: &'a [f64],
    b: &'a [f64],
}

fn gen_recurrence(args: &GenRecurrenceArgs) -> CmdResult {
    let spec = args.family.spec()?;
    let method = match args.method {
        RecurrenceMethodArg::Stieltjes => RecurrenceMethod::Stieltjes,
        RecurrenceMethodArg::Exact => RecurrenceMethod::ExactMoments,
        RecurrenceMethodArg::Christoffel => RecurrenceMethod::Christoffel,
    };
    let rc = recurrence_coeffs(&spec, args.n, method)?;
    let text = match args.format {
        Format::Json => json(&RecurrenceJson {
            family: spec.family.name(),
            s: spec.sobolev_level,
            method,
            mu0: rc.mu0,
            a: &rc.a,
            b: &rc.b,
        }),
        Format::Csv => {
            let mut out = String::from("n,a,b\n");
            for (k, (a, b)) in rc.a.iter().zip(&rc.b).enumerate() {
                csv_line(&mut out, &[k.to_string(), num(*a), num(*b)]);
            }
            out
        }
    };
    Ok(Outcome::ok(text))
}

fn phase_label(k: usize) -> &'static str {
    ["1", "i", "-1", "-i"][k % 4]
}

fn gen_connection(args: &GenConnectionArgs) -> CmdResult {
    let spec = args.family.spec()?;
    let s = args.family.s as usize;
    let mut out = String::new();
    if args.exact {
        let exact = exact_connection(&spec, s, args.n)?;
        out.push_str(if args.phased { "n,j,phase,value\n" } else { "n,j,value\n" });
        for (n, row) in exact.iter().enumerate() {
            for j in n.saturating_sub(2 * s)..=n {
                let mut fields = vec![n.to_string(), j.to_string()];
                if args.phased {
                    fields.push(phase_label(n - j).into());
                }
                fields.push(row[j].to_string());
                csv_line(&mut out, &fields);
            }
        }
        return Ok(Outcome::ok(out));
    }
    let c = match args.method {
        ConnectionMethodArg::Auto => connection_matrix(&spec, s, args.n)?,
        ConnectionMethodArg::Quadrature => connection_matrix_with(&spec, s, args.n, ConnectionMethod::Quadrature)?,
        ConnectionMethodArg::Cholesky => connection_matrix_with(&spec, s, args.n, ConnectionMethod::Cholesky)?,
        ConnectionMethodArg::Christoffel => connection_matrix_with(&spec, s, args.n, ConnectionMethod::Christoffel)?,
    };
    out.push_str(if args.phased { "n,j,re,im\n" } else { "n,j,value\n" });
    for (n, j, v) in c.band_entries() {
        if args.phased {
            let z = i_pow((n - j) as i64) * v;
            csv_line(&mut out, &[n.to_string(), j.to_string(), num(z.re), num(z.im)]);
        } else {
            csv_line(&mut out, &[n.to_string(), j.to_string(), num(v)]);
        }
    }
    Ok(Outcome::ok(out))
}

fn grid(lo: f64, hi: f64, points: usize) -> std::result::Result<Vec<f64>, Failure> {
    if points == 0 || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return invalid(format!("need points >= 1 and finite bounds lo <= hi, got [{lo}, {hi}] with {points} points"));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let h = (hi - lo) / (points - 1) as f64;
    Ok((0..points).map(|k| lo + k as f64 * h).collect())
}

fn eval_basis(args: &EvalBasisArgs) -> CmdResult {
    let n_max = (if args.n >= 0 { args.n } else { -args.n - 1 }).max(1) as usize;
    let sys = BasisSystem::new(args.system.kind()?, n_max)?;
    let xs = grid(args.xmin, args.xmax, args.points)?;
    let mut out = String::from("x,re,im\n");
    for x in xs {
        let z = match (args.quadrature, args.derivative) {
            (false, 0) => sys.eval(args.n, x)?,
            (false, d) => sys.derivative(args.n, d, x)?,
            (true, d) => sys.eval_quadrature_derivative(args.n, d, x)?,
        };
        csv_line(&mut out, &[num(x), num(z.re), num(z.im)]);
    }
    Ok(Outcome::ok(out))
}

fn eval_polys(args: &EvalPolysArgs) -> CmdResult {
    let spec = args.family.spec()?;
    let rc = system_recurrence(&spec, args.n + 1)?;
    let xis = grid(args.ximin, args.ximax, args.points)?;
    let mut out = String::from("xi");
    for k in 0..=args.n {
        let _ = write!(out, ",p_{k}");
    }
    out.push('\n');
    for xi in xis {
        let mut fields = vec![num(xi)];
        fields.extend(rc.eval_polys(xi, args.n).into_iter().map(num));
        csv_line(&mut out, &fields);
    }
    Ok(Outcome::ok(out))
}

/// `h<s>`, `exp:<σ>` or `custom:v0,v1,...`.
pub fn parse_sequence(text: &str) -> std::result::Result<SobolevSequence, Failure> {
    let bad = || Failure::Invalid(format!("cannot parse Sobolev sequence '{text}' (h<s>, exp:<sigma>, custom:v0,v1,...)"));
    if let Some(rest) = text.strip_prefix("exp:") {
        let sigma: f64 = rest.trim().parse().map_err(|_| bad())?;
        return Ok(SobolevSequence::exponential(sigma)?);
    }
    if let Some(rest) = text.strip_prefix("custom:") {
        let terms = rest
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        return Ok(SobolevSequence::custom(terms)?);
    }
    if let Some(rest) = text.strip_prefix('h') {
        let s: u32 = rest.parse().map_err(|_| bad())?;
        return Ok(SobolevSequence::standard(s));
    }
    Err(bad())
}

#[derive(Serialize)]
struct GramJson {
    #[serde(flatten)]
    report: GramReport,
    max_deviation: f64,
    /// `identity` or `negative_control`.
    check: &'static str,
    tolerance: f64,
    passed: bool,
}

fn gram(args: &GramArgs) -> CmdResult {
    let method: GramMethod = args.method.parse()?;
    let n_max = args.n.max(2);
    let sys = BasisSystem::new(args.system.kind()?, n_max)?;
    let out = if let Some(eps) = args.perturb {
        if !(eps.is_finite() && eps > 0.0) {
            return invalid(format!("perturbation must be positive, got {eps}"));
        }
        let report = perturbed_gram(&sys, eps, args.n)?;
        GramJson {
            max_deviation: report.max_deviation(),
            check: "negative_control",
            tolerance: NEGATIVE_CONTROL_THRESHOLD,
            passed: report.max_off_diagonal > NEGATIVE_CONTROL_THRESHOLD,
            report,
        }
    } else {
        let seq = match &args.seq {
            Some(t) => parse_sequence(t)?,
            None => sys.sequence().clone(),
        };
        let report = gram_matrix(&sys, &seq, args.n, method)?;
        let tolerance = match method {
            GramMethod::Fourier => GRAM_FOURIER_TOLERANCE,
            GramMethod::Physical => GRAM_PHYSICAL_TOLERANCE,
        };
        GramJson {
            max_deviation: report.max_deviation(),
            check: "identity",
            tolerance,
            passed: report.max_deviation() <= tolerance,
            report,
        }
    };
    let failure = (!out.passed).then(|| {
        Failure::Tolerance(match out.check {
            "identity" => format!("Gram deviation {:.3e} exceeds {:.0e}", out.max_deviation, out.tolerance),
            _ => format!(
                "perturbed mollifier gave off-diagonal {:.3e}, not above {:.0e}",
                out.report.max_off_diagonal, out.tolerance
            ),
        })
    });
    Ok(Outcome {
        text: json(&out),
        failure,
    })
}

#[derive(Serialize)]
struct DiffcheckJson {
    #[serde(flatten)]
    report: sobolev_core::diffmat::DiffcheckReport,
    analytic_tolerance: f64,
    finite_difference_tolerance: f64,
    passed: bool,
}

fn diffcheck_cmd(args: &DiffcheckArgs) -> CmdResult {
    if args.n < 2 {
        return invalid("diffcheck needs --n >= 2");
    }
    let sys = BasisSystem::new(args.system.kind()?, args.n + 2)?;
    let xs = args.xs.clone().unwrap_or_else(|| DEFAULT_XS.to_vec());
    if xs.is_empty() || xs.iter().any(|x| !x.is_finite()) {
        return invalid("--xs must list finite sample points");
    }
    let report = diffcheck(&sys, args.n, &xs)?;
    let mut problems = Vec::new();
    if report.skew_hermitian_defect != 0.0 {
        problems.push(format!("skew-Hermitian defect {:.3e}", report.skew_hermitian_defect));
    }
    match report.analytic_residual {
        Some(r) if r >= ANALYTIC_RESIDUAL_TOLERANCE => {
            problems.push(format!("analytic residual {r:.3e} >= {ANALYTIC_RESIDUAL_TOLERANCE:.0e}"))
        }
        Some(_) => {}
        None if report.finite_difference_residual >= FD_RESIDUAL_TOLERANCE => problems.push(format!(
            "finite-difference residual {:.3e} >= {FD_RESIDUAL_TOLERANCE:.0e}",
            report.finite_difference_residual
        )),
        None => {}
    }
    let out = DiffcheckJson {
        report,
        analytic_tolerance: ANALYTIC_RESIDUAL_TOLERANCE,
        finite_difference_tolerance: FD_RESIDUAL_TOLERANCE,
        passed: problems.is_empty(),
    };
    Ok(Outcome {
        text: json(&out),
        failure: (!problems.is_empty()).then(|| Failure::Tolerance(problems.join("; "))),
    })
}

/// Samples `x,re[,im]`, one per line; a non-numeric first line is a header.
fn read_samples(text: &str) -> std::result::Result<Vec<(f64, Complex64)>, Failure> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(v) if v.len() == 2 || v.len() == 3 => {
                out.push((v[0], Complex64::new(v[1], v.get(2).copied().unwrap_or(0.0))))
            }
            Err(_) if out.is_empty() && lineno == 0 => continue,
            _ => return invalid(format!("line {}: expected x,re[,im], got '{line}'", lineno + 1)),
        }
    }
    Ok(out)
}

fn mt_transform(args: &MtTransformArgs) -> CmdResult {
    let plan = MtPlan::new(args.n)?;
    let mut out = String::new();
    if args.emit_nodes {
        out.push_str("k,x\n");
        for (k, x) in plan.nodes().iter().enumerate() {
            csv_line(&mut out, &[k.to_string(), num(*x)]);
        }
        return Ok(Outcome::ok(out));
    }
    let path = args.input.as_ref().expect("clap requires --input without --emit-nodes");
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    let samples = read_samples(&text)?;
    if samples.len() != plan.nodes().len() {
        return invalid(format!(
            "expected {} samples at the transform nodes (see --emit-nodes), got {}",
            plan.nodes().len(),
            samples.len()
        ));
    }
    for (k, ((x, _), node)) in samples.iter().zip(plan.nodes()).enumerate() {
        if (x - node).abs() > 1e-9 * (1.0 + node.abs()) {
            return invalid(format!("sample {k} is at x = {x}, but node {k} is {node}"));
        }
    }
    let values: Vec<Complex64> = samples.iter().map(|(_, v)| *v).collect();
    let mut coeffs = plan.analysis_samples(&values)?;
    if args.s > 0 {
        coeffs = SobolevLaguerrePlan::new(args.s, args.n)?.convert(&coeffs)?;
    }
    out.push_str("n,re,im\n");
    for (n, z) in coeffs.indices().zip(&coeffs.values) {
        csv_line(&mut out, &[n.to_string(), num(z.re), num(z.im)]);
    }
    Ok(Outcome::ok(out))
}

fn ou_demo(args: &OuDemoArgs) -> CmdResult {
    let scheme: Scheme = args.scheme.parse()?;
    let problem = OuProblem::new(args.a, args.n, args.dt, args.t)?;
    let traj = solve(&problem, scheme)?;
    let n0 = traj.norms[0];
    let mut out = String::from("t,h1_norm,envelope\n");
    for (t, norm) in traj.times.iter().zip(&traj.norms) {
        csv_line(&mut out, &[num(*t), num(*norm), num((-args.a * t).exp() * n0)]);
    }
    Ok(Outcome::ok(out))
}
