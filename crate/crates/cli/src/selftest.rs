//! The ten acceptance criteria, each at its pinned tolerance.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sobolev_core::basis::bessel::{
    legendre_bessel, legendre_cascade_mass, legendre_cascade_mass_digamma, legendre_cascade_phi0,
};
use sobolev_core::basis::hermite::{h_infinity_closed, PI_M14};
use sobolev_core::basis::rational::mt_function;
use sobolev_core::basis::{chebyshev_bessel_check, BasisSystem, SystemKind};
use sobolev_core::diffmat::diffcheck;
use sobolev_core::fastmt::{direct_mt_coefficients, time_analysis, time_conversion, MtPlan};
use sobolev_core::orthopoly::{recurrence_coeffs, RecurrenceMethod};
use sobolev_core::ou::{energy_identity, solve, GaussianPoly, OuProblem, Scheme};
use sobolev_core::sobolev::{gram_matrix, perturbed_gram, physical_gram, GramMethod};
use sobolev_core::weights::{SobolevSequence, WeightFamily, WeightSpec};
use sobolev_core::{CoefficientVector, Result};

use crate::commands::{
    ANALYTIC_RESIDUAL_TOLERANCE, FD_RESIDUAL_TOLERANCE, GRAM_FOURIER_TOLERANCE, NEGATIVE_CONTROL_THRESHOLD,
};
use crate::{Failure, Outcome, SelftestArgs};

pub const CRITERIA: usize = 10;

const TITLES: [&str; CRITERIA] = [
    "Hermite C^[1] golden minor",
    "Hermite w^[1] recurrence",
    "closed-form ladders vs quadrature",
    "H^infinity Hermite system",
    "Bessel identities",
    "Gram identity suites",
    "differentiation-matrix law",
    "fast MT transform",
    "Legendre cascade vanishing",
    "OU Galerkin stability",
];

/// Sample points shared by the closed-form comparisons.
const XS: [f64; 7] = [0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0];

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {} ({:.2} s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// `(passed, detail)` of one criterion body.
type Verdict = Result<(bool, String)>;

pub fn run_criterion(id: usize, seed: u64) -> CriterionResult {
    assert!((1..=CRITERIA).contains(&id), "criterion ids are 1..={CRITERIA}");
    let start = Instant::now();
    let verdict = match id {
        1 => golden_minor(),
        2 => hermite_recurrence(),
        3 => closed_ladders(),
        4 => h_infinity(),
        5 => bessel_identities(),
        6 => gram_suites(),
        7 => differentiation_law(),
        8 => fast_mt(seed),
        9 => cascade_vanishing(),
        _ => ou_stability(),
    };
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = verdict.unwrap_or_else(|e| (false, format!("error: {e}")));
    if let Some(limit) = runtime_limit(id) {
        if elapsed > limit {
            passed = false;
            let _ = write!(detail, "; runtime {:.2} s exceeds {} s", elapsed.as_secs_f64(), limit.as_secs());
        }
    }
    CriterionResult {
        id,
        title: TITLES[id - 1],
        passed,
        detail,
        elapsed,
    }
}

fn runtime_limit(id: usize) -> Option<Duration> {
    match id {
        1 | 2 => Some(Duration::from_secs(1)),
        3 => Some(Duration::from_secs(30)),
        10 => Some(Duration::from_secs(60)),
        _ => None,
    }
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    (1..=CRITERIA).map(|id| run_criterion(id, seed)).collect()
}

pub(crate) fn command(args: &SelftestArgs) -> Outcome {
    let ids: Vec<usize> = match &args.only {
        Some(ids) => ids.clone(),
        None => (1..=CRITERIA).collect(),
    };
    if let Some(bad) = ids.iter().find(|&&i| !(1..=CRITERIA).contains(&i)) {
        return Outcome {
            text: String::new(),
            failure: Some(Failure::Invalid(format!("no criterion {bad} (ids are 1..={CRITERIA})"))),
        };
    }
    let results: Vec<CriterionResult> = ids.iter().map(|&id| run_criterion(id, args.seed)).collect();
    let mut text = String::new();
    for r in &results {
        let _ = writeln!(text, "{}", r.line());
    }
    let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| r.id.to_string()).collect();
    let _ = writeln!(text, "{} of {} criteria passed", results.len() - failed.len(), results.len());
    Outcome {
        text,
        failure: (!failed.is_empty()).then(|| Failure::Tolerance(format!("criteria {} failed", failed.join(", ")))),
    }
}

/// Squares of the non-zero `C̃^[1]_{n,j}`, `n, j < 6`, all with positive sign.
const HERMITE_MINOR: [(usize, usize, &str); 10] = [
    (0, 0, "3/2"),
    (1, 1, "5/2"),
    (2, 0, "1/3"),
    (2, 2, "19/6"),
    (3, 1, "3/5"),
    (3, 3, "39/10"),
    (4, 2, "18/19"),
    (4, 4, "173/38"),
    (5, 3, "50/39"),
    (5, 5, "407/78"),
];

fn golden_square(n: usize, j: usize) -> BigRational {
    HERMITE_MINOR
        .iter()
        .find(|(a, b, _)| (*a, *b) == (n, j))
        .map(|(_, _, q)| q.parse().expect("valid rational"))
        .unwrap_or_else(|| "0".parse().unwrap())
}

fn golden_float(n: usize, j: usize) -> f64 {
    HERMITE_MINOR
        .iter()
        .find(|(a, b, _)| (*a, *b) == (n, j))
        .map(|(_, _, q)| {
            let (p, d) = q.split_once('/').expect("p/q");
            (p.parse::<f64>().unwrap() / d.parse::<f64>().unwrap()).sqrt()
        })
        .unwrap_or(0.0)
}

fn cli_output(args: &[&str]) -> Result<String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("sobolev").chain(args.iter().copied());
    match crate::run(argv, &mut out, &mut err) {
        0 => Ok(String::from_utf8(out).expect("utf-8 output")),
        code => Err(sobolev_core::Error::InvalidArgument(format!(
            "`{}` exited with {code}: {}",
            args.join(" "),
            String::from_utf8_lossy(&err).trim()
        ))),
    }
}

/// `(sign, square)` of `-sqrt(p/q)`, `p/q` and the like.
fn parse_radical(text: &str) -> Option<(i8, BigRational)> {
    let (sign, rest) = match text.strip_prefix('-') {
        Some(r) => (-1, r),
        None => (1, text),
    };
    if let Some(inner) = rest.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        return Some((sign, inner.parse().ok()?));
    }
    let r: BigRational = rest.parse().ok()?;
    let sign = if r == "0".parse().unwrap() { 0 } else { sign };
    Some((sign, &r * &r))
}

fn golden_minor() -> Verdict {
    let args = ["gen-connection", "--family", "hermite", "--s", "1", "--n", "6"];
    let float = cli_output(&args)?;
    let mut seen = 0;
    let mut err = 0.0f64;
    for line in float.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (n, j): (usize, usize) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let v: f64 = f[2].parse().unwrap();
        let want = golden_float(n, j);
        err = err.max((v - want).abs());
        seen += 1;
    }
    let exact = cli_output(&[&args[..], &["--exact"]].concat())?;
    let mut matched = 0;
    let mut total = 0;
    for line in exact.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (n, j): (usize, usize) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let want = golden_square(n, j);
        let want_sign = if want == "0".parse().unwrap() { 0 } else { 1 };
        total += 1;
        if parse_radical(f[2]) == Some((want_sign, want)) {
            matched += 1;
        }
    }
    // the band of a 6-row level-1 matrix holds 1 + 2 + 3·4 = 15 entries
    let passed = seen == 15 && err <= 1e-12 && total == 15 && matched == total;
    Ok((passed, format!("max |ΔC̃| = {err:.2e} over {seen} band entries; exact radicals {matched}/{total}")))
}

const HERMITE_B_SQUARED: [f64; 6] = [
    5.0 / 6.0,
    19.0 / 15.0,
    351.0 / 190.0,
    1730.0 / 741.0,
    38665.0 / 13494.0,
    236925.0 / 70411.0,
];

fn hermite_recurrence() -> Verdict {
    let spec = WeightSpec::hermite(1);
    let mut worst = 0.0f64;
    let mut worst_a = 0.0f64;
    for method in [RecurrenceMethod::Stieltjes, RecurrenceMethod::ExactMoments] {
        let rc = recurrence_coeffs(&spec, 6, method)?;
        for (b, want) in rc.b.iter().zip(HERMITE_B_SQUARED) {
            worst = worst.max((b - want.sqrt()).abs() / want.sqrt());
        }
        worst_a = rc.a.iter().fold(worst_a, |m, a| m.max(a.abs()));
    }
    Ok((
        worst <= 1e-12 && worst_a <= 1e-12,
        format!("max relative |Δb| = {worst:.2e}, max |a| = {worst_a:.2e} (Stieltjes and exact moments)"),
    ))
}

fn hermite_golden(n: usize, x: f64) -> f64 {
    let p = match n {
        0 => (2.0f64 / 3.0).sqrt(),
        1 => -(0.8f64).sqrt() * x,
        2 => (6.0 * x * x - 1.0) / 57f64.sqrt(),
        3 => -(2.0f64 / 585.0).sqrt() * (10.0 * x.powi(3) - 9.0 * x),
        4 => (76.0 * x.powi(4) - 156.0 * x * x + 45.0) / 39444f64.sqrt(),
        _ => -(156.0 * x.powi(5) - 580.0 * x.powi(3) + 405.0 * x) / 476190f64.sqrt(),
    };
    PI_M14 * p * (-0.5 * x * x).exp()
}

/// The bilateral list, in the sign convention of the constructed system
/// (the published list differs by `(-1)^n`).
fn bilateral_golden(n: usize, x: f64) -> f64 {
    let q = 1.0 + 4.0 * x * x;
    let v = match n {
        0 => 2.0 / 3f64.sqrt() / q,
        1 => 16.0 / 26f64.sqrt() * x / q.powi(2),
        2 => 2.0 / 1167f64.sqrt() * (1.0 + 248.0 * x * x + 208.0 * x.powi(4)) / q.powi(3),
        3 => 16.0 / 23179f64.sqrt() * (-21.0 * x + 456.0 * x.powi(3) + 496.0 * x.powi(5)) / q.powi(4),
        4 => {
            2.0 / 309347971f64.sqrt()
                * (2925.0 - 128784.0 * x * x + 1703264.0 * x.powi(4) + 3029760.0 * x.powi(6) + 1369344.0 * x.powi(8))
                / q.powi(5)
        }
        _ => {
            16.0 / 22678864934f64.sqrt()
                * (25749.0 * x - 1017424.0 * x.powi(3) + 5715040.0 * x.powi(5) + 13510400.0 * x.powi(7)
                    + 7744768.0 * x.powi(9))
                / q.powi(6)
        }
    };
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * v / std::f64::consts::PI.sqrt()
}

fn sobolev_laguerre_golden(n: usize, x: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let m = Complex64::new(1.0, -2.0 * x);
    let r = Complex64::new(1.0, 2.0 * x) / m;
    let c = |d: f64| (2.0 / (d * std::f64::consts::PI)).sqrt();
    match n {
        0 => c(3.0) / m,
        1 => c(87.0) * i * (-4.0 + 3.0 * r) / m,
        2 => c(16211.0) * i * i * (34.0 - 40.0 * r + 29.0 * r * r) / m,
        _ => c(9812127.0) * i * i * i * (-480.0 + 762.0 * r - 804.0 * r * r + 559.0 * r * r * r) / m,
    }
}

fn closed_ladders() -> Verdict {
    let hermite = BasisSystem::new(SystemKind::HermiteClosed { s: 1 }, 5)?;
    let bilateral = BasisSystem::new(SystemKind::BilateralLaguerre1, 5)?;
    let laguerre = BasisSystem::new(SystemKind::SobolevLaguerre2nd { s: 1 }, 3)?;
    let (mut eh, mut eb, mut el) = (0.0f64, 0.0f64, 0.0f64);
    for &x in &XS {
        for n in 0..=5usize {
            eh = eh.max((hermite.eval_quadrature(n as i64, x)? - hermite_golden(n, x)).norm());
            eb = eb.max((bilateral.eval_quadrature(n as i64, x)? - bilateral_golden(n, x)).norm());
        }
        for n in 0..=3usize {
            el = el.max((laguerre.eval_quadrature(n as i64, x)? - sobolev_laguerre_golden(n, x)).norm());
        }
    }
    let worst = eh.max(eb).max(el);
    Ok((
        worst <= 1e-8,
        format!("max |closed - quadrature|: Hermite {eh:.2e}, bilateral {eb:.2e}, Sobolev-Laguerre {el:.2e}"),
    ))
}

fn h_infinity() -> Verdict {
    let mut closed_err = 0.0f64;
    let mut gram_err = 0.0f64;
    for sigma in [0.25, 0.5, 0.75] {
        let sys = BasisSystem::new(SystemKind::HermiteHinf { sigma }, 5)?;
        for &x in &XS {
            for n in 0..=5usize {
                let want = h_infinity_closed(sigma, n, x)?;
                closed_err = closed_err.max((sys.eval_quadrature(n as i64, x)? - want).norm());
            }
        }
        let seq = SobolevSequence::exponential(sigma)?;
        let (g, _) = physical_gram(&sys, &seq, &[0, 1, 2, 3, 4], 30)?;
        for (r, row) in g.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                let id = if r == c { 1.0 } else { 0.0 };
                gram_err = gram_err.max((v - id).norm());
            }
        }
    }
    Ok((
        closed_err <= 1e-8 && gram_err <= 1e-6,
        format!("closed form vs quadrature {closed_err:.2e}; truncated H^inf Gram (L = 30) deviation {gram_err:.2e}"),
    ))
}

fn bessel_identities() -> Verdict {
    let mut cheb = 0.0f64;
    let mut leg = 0.0f64;
    let sys = BasisSystem::new(SystemKind::LegendreBessel, 6)?;
    for x in [0.5, 2.0, 10.0] {
        let closed = legendre_bessel(6, x);
        for n in 0..=6usize {
            cheb = cheb.max(chebyshev_bessel_check(n, x)?);
            leg = leg.max((sys.eval_quadrature(n as i64, x)? - closed[n]).norm());
        }
    }
    Ok((
        cheb < 1e-8 && leg <= 1e-8,
        format!("Chebyshev integral residual {cheb:.2e}; Legendre transform vs spherical Bessel {leg:.2e}"),
    ))
}

/// Every shipped system with its own Sobolev sequence.
pub fn shipped_systems() -> Result<Vec<SystemKind>> {
    let first_kind = |family: WeightFamily, s: u32| -> Result<SystemKind> {
        Ok(SystemKind::Quadrature {
            weight: WeightSpec::new(family, 0)?,
            sequence: SobolevSequence::standard(s),
        })
    };
    Ok(vec![
        SystemKind::HermiteClosed { s: 0 },
        SystemKind::HermiteClosed { s: 1 },
        SystemKind::HermiteClosed { s: 2 },
        SystemKind::HermiteHinf { sigma: 0.25 },
        SystemKind::HermiteHinf { sigma: 0.5 },
        SystemKind::HermiteHinf { sigma: 0.75 },
        SystemKind::BilateralLaguerre1,
        SystemKind::LegendreBessel,
        SystemKind::LegendreCascade2nd { s: 1 },
        SystemKind::LegendreCascade2nd { s: 2 },
        SystemKind::UltrasphericalCascade2nd { s: 1 },
        SystemKind::MalmquistTakenaka,
        SystemKind::SobolevLaguerre2nd { s: 1 },
        SystemKind::SobolevLaguerre2nd { s: 2 },
        SystemKind::HermiteShifted0 { rho: 0.7 },
        first_kind(WeightFamily::Hermite, 1)?,
        first_kind(WeightFamily::Legendre, 1)?,
        first_kind(WeightFamily::LaguerreHalfline, 1)?,
        first_kind(WeightFamily::BilateralLaguerre, 1)?,
    ])
}

fn gram_suites() -> Verdict {
    let mut worst = (0.0f64, String::new());
    let mut count = 0;
    for kind in shipped_systems()? {
        let n = if kind == SystemKind::MalmquistTakenaka { 32 } else { 12 };
        let sys = BasisSystem::new(kind.clone(), n)?;
        let report = gram_matrix(&sys, sys.sequence(), n, GramMethod::Fourier)?;
        count += 1;
        if report.max_deviation() >= worst.0 {
            worst = (report.max_deviation(), kind.name());
        }
    }
    let mut control = f64::INFINITY;
    for kind in [SystemKind::HermiteClosed { s: 1 }, SystemKind::MalmquistTakenaka] {
        let sys = BasisSystem::new(kind, 12)?;
        control = control.min(perturbed_gram(&sys, 0.1, 12)?.max_off_diagonal);
    }
    Ok((
        worst.0 <= GRAM_FOURIER_TOLERANCE && control > NEGATIVE_CONTROL_THRESHOLD,
        format!(
            "{count} systems, worst |G - I| = {:.2e} ({}); perturbed-mollifier off-diagonal >= {control:.2e}",
            worst.0, worst.1
        ),
    ))
}

fn differentiation_law() -> Verdict {
    let xs = [-2.5, -1.0, -0.3, 0.0, 0.4, 1.3, 3.0];
    let (mut analytic, mut fd, mut skew) = (0.0f64, 0.0f64, 0.0f64);
    let (mut closed, mut backed) = (0, 0);
    for kind in shipped_systems()? {
        let sys = BasisSystem::new(kind, 10)?;
        let report = diffcheck(&sys, 8, &xs)?;
        skew = skew.max(report.skew_hermitian_defect);
        match report.analytic_residual {
            Some(r) => {
                analytic = analytic.max(r);
                closed += 1;
            }
            None => {
                fd = fd.max(report.finite_difference_residual);
                backed += 1;
            }
        }
    }
    Ok((
        analytic < ANALYTIC_RESIDUAL_TOLERANCE && fd < FD_RESIDUAL_TOLERANCE && skew == 0.0,
        format!(
            "analytic residual {analytic:.2e} ({closed} closed-form systems); finite-difference residual {fd:.2e} \
             ({backed} quadrature-backed); skew-Hermitian defect {skew:e}"
        ),
    ))
}

fn fast_mt(seed: u64) -> Verdict {
    let plan = MtPlan::new(64)?;
    let mut unit_err = 0.0f64;
    for n in -64..64i64 {
        let c = plan.analysis(|x| mt_function(n, x));
        unit_err = unit_err.max(c.max_abs_diff(&CoefficientVector::unit(-64, 128, n)));
    }
    // random finite combinations are recovered as well
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<Complex64> = (0..128).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let coeffs = CoefficientVector::new(-64, values);
    let samples = plan.synthesis(&coeffs)?;
    let round_trip = plan.analysis_samples(&samples)?.max_abs_diff(&coeffs);
    unit_err = unit_err.max(round_trip);

    let gauss = |x: f64| Complex64::new((-x * x).exp(), 0.0);
    let fast = MtPlan::new(256)?.analysis(gauss);
    let direct = direct_mt_coefficients(gauss, -16, 16, 7.0)?;
    let oracle_err = (-16..=16i64)
        .map(|n| (fast.get(n).unwrap() - direct.get(n).unwrap()).norm())
        .fold(0.0, f64::max);

    // best over several sweeps: background load on a shared machine only ever adds time
    let budget = Duration::from_millis(40);
    let mut times = vec![f64::INFINITY; 5];
    for _ in 0..6 {
        for (t, k) in times.iter_mut().zip(12..=16) {
            *t = t.min(time_analysis(1 << k, budget)?.as_secs_f64());
        }
    }
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1] / w[0]).collect();
    let scaling_ok = ratios.iter().all(|r| (1.8..=2.6).contains(r));
    // transform plus level-4 conversion against transform plus level-0 conversion
    let conv_budget = Duration::from_millis(150);
    let (_, full) = time_conversion(1 << 14, 4, conv_budget)?;
    let (_, full0) = time_conversion(1 << 14, 0, conv_budget)?;
    let conv_ratio = full.as_secs_f64() / full0.as_secs_f64();
    let passed = unit_err <= 1e-10 && oracle_err <= 1e-8 && scaling_ok && conv_ratio < 5.0;
    let ratio_text: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    Ok((
        passed,
        format!(
            "unit/round-trip error {unit_err:.2e}; oracle |n| <= 16 error {oracle_err:.2e}; T(2N)/T(N) = [{}]; \
             T(s=4)/T(s=0) = {conv_ratio:.2}",
            ratio_text.join(", ")
        ),
    ))
}

fn cascade_vanishing() -> Verdict {
    let levels = [0u64, 1, 2, 5, 10, 100, 1_000, 10_000, 100_000];
    let u0 = legendre_cascade_mass(0);
    let mut sum_err = 0.0f64;
    let mut channel_err = 0.0f64;
    let mut last_ratio = 1.0;
    for &s in &levels {
        let us = legendre_cascade_mass(s);
        sum_err = sum_err.max((us - legendre_cascade_mass_digamma(s)).abs() / us);
        let ratio = (u0 / us).sqrt();
        // the amplitude of φ_0^[s] relative to φ_0^[0] is the same at every x
        let channel = legendre_cascade_phi0(s, 1.0) / legendre_cascade_phi0(0, 1.0);
        channel_err = channel_err.max((channel - ratio).abs());
        last_ratio = ratio;
    }
    let passed = sum_err <= 1e-12 && channel_err <= 1e-12 && last_ratio < 0.2;
    Ok((
        passed,
        format!(
            "u_s sum vs digamma closed form {sum_err:.2e}; phi_0 channel vs sqrt(u_0/u_s) {channel_err:.2e}; \
             sqrt(u_0/u_s) at s = 1e5 is {last_ratio:.4} (needs < 0.2)"
        ),
    ))
}

fn ou_stability() -> Verdict {
    let mut monotone_fail = Vec::new();
    let mut envelope_fail = Vec::new();
    let mut worst_increase = f64::NEG_INFINITY;
    for a in [0.5, 1.0, 2.0] {
        for n in [8usize, 16, 32] {
            let traj = solve(&OuProblem::new(a, n, 1e-3, 1.0)?, Scheme::Trapezoidal)?;
            let inc = traj.max_increase();
            worst_increase = worst_increase.max(inc);
            if inc > 0.0 {
                monotone_fail.push(format!("a={a} N={n}"));
            }
            let ratio = traj.envelope_ratio(a, 1e-2);
            if ratio > 1.0 {
                envelope_fail.push(format!("a={a} N={n} ({ratio:.3})"));
            }
        }
    }
    let tests = [
        GaussianPoly(vec![1.0]),
        GaussianPoly(vec![0.0, 1.0, 0.0, -0.5]),
        GaussianPoly(vec![0.3, -1.0, 2.0, 0.0, 0.25]),
    ];
    let mut identity_err = 0.0f64;
    for a in [0.5, 1.0, 2.0] {
        for u in &tests {
            let (lhs, rhs) = energy_identity(u, a);
            identity_err = identity_err.max((lhs - rhs).abs() / rhs.abs().max(1.0));
        }
    }
    let passed = monotone_fail.is_empty() && envelope_fail.is_empty() && identity_err <= 1e-10;
    let list = |v: &[String]| if v.is_empty() { "none".to_string() } else { v.join(", ") };
    Ok((
        passed,
        format!(
            "largest step increase {worst_increase:.2e}; non-monotone: {}; envelope e^(-0.99at) exceeded (max ratio): {}; \
             energy identity error {identity_err:.2e}",
            list(&monotone_fail),
            list(&envelope_fail)
        ),
    ))
}
