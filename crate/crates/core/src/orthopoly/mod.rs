//! Orthonormal polynomials of a weight: recurrence coefficients, Gauss rules
//! and evaluation.
//!
//! The orthonormal recurrence is
//! `b_n p_{n+1}(ξ) = (ξ - a_n) p_n(ξ) - b_{n-1} p_{n-1}(ξ)`, `p_0 = 1/√μ_0`,
//! so every `p_n` has a positive leading coefficient.

mod christoffel;
mod exact;
mod quadrature;

pub use christoffel::{sobolev_modification, Modification};

pub use exact::{
    chebyshev_algorithm, exact_recurrence, moments_exact, ExactMoments, ExactRecurrence,
    MomentUnit, SignedSqrt, MAX_EXACT_N,
};
pub(crate) use exact::to_f64 as rational_to_f64;
pub use quadrature::{gauss_rule, tridiagonal_eigenvalues, QuadratureRule};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::weights::{WeightFamily, WeightSpec};

/// Orthonormality tolerance for the Stieltjes self-check.
const STIELTJES_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecurrenceMethod {
    Stieltjes,
    ExactMoments,
    /// Christoffel modification of the base recurrence; see [`sobolev_modification`].
    Christoffel,
}

impl std::str::FromStr for RecurrenceMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stieltjes" => Ok(RecurrenceMethod::Stieltjes),
            "exact" | "exact_moments" | "exact-moments" => Ok(RecurrenceMethod::ExactMoments),
            "christoffel" => Ok(RecurrenceMethod::Christoffel),
            other => invalid(format!("unknown recurrence method '{other}'")),
        }
    }
}

/// Coefficients of the orthonormal three-term recurrence, truncated at `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceCoeffs {
    /// Diagonal `a_0..a_{N-1}`.
    pub a: Vec<f64>,
    /// Off-diagonal `b_0..b_{N-1}`, all positive.
    pub b: Vec<f64>,
    /// Total mass `μ_0`.
    pub mu0: f64,
}

impl RecurrenceCoeffs {
    pub fn new(a: Vec<f64>, b: Vec<f64>, mu0: f64) -> Result<Self> {
        if a.len() != b.len() {
            return invalid("recurrence needs as many a_n as b_n");
        }
        if b.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return invalid("recurrence coefficients b_n must be positive");
        }
        if !(mu0 > 0.0 && mu0.is_finite()) {
            return invalid("total mass must be positive");
        }
        Ok(RecurrenceCoeffs { a, b, mu0 })
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn p0(&self) -> f64 {
        1.0 / self.mu0.sqrt()
    }

    pub fn is_symmetric(&self) -> bool {
        self.a.iter().all(|&a| a == 0.0)
    }

    pub fn truncated(&self, n: usize) -> Self {
        let n = n.min(self.len());
        RecurrenceCoeffs {
            a: self.a[..n].to_vec(),
            b: self.b[..n].to_vec(),
            mu0: self.mu0,
        }
    }

    /// `p_0(ξ)..p_{n_max}(ξ)`; requires `n_max <= N`.
    pub fn eval_polys(&self, xi: f64, n_max: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n_max + 1);
        self.eval_polys_into(xi, n_max, &mut out);
        out
    }

    pub fn eval_polys_into(&self, xi: f64, n_max: usize, out: &mut Vec<f64>) {
        assert!(n_max <= self.len(), "degree {n_max} beyond truncation {}", self.len());
        out.clear();
        out.push(self.p0());
        let mut prev = 0.0;
        for n in 0..n_max {
            let bprev = if n > 0 { self.b[n - 1] } else { 0.0 };
            let next = ((xi - self.a[n]) * out[n] - bprev * prev) / self.b[n];
            prev = out[n];
            out.push(next);
        }
    }

    /// Leading coefficients `1/(b_0···b_{n-1}√μ_0)` for `n = 0..=n_max`.
    pub fn leading_coefficients(&self, n_max: usize) -> Vec<f64> {
        let mut out = vec![self.p0()];
        for n in 0..n_max {
            let last = out[n];
            out.push(last / self.b[n]);
        }
        out
    }

    /// Monomial coefficients (ascending) of `p_0..p_{n_max}`; only for small degrees.
    pub fn monomial_coefficients(&self, n_max: usize) -> Vec<Vec<f64>> {
        let mut polys: Vec<Vec<f64>> = vec![vec![self.p0()]];
        for n in 0..n_max {
            let mut next = vec![0.0; n + 2];
            for (i, c) in polys[n].iter().enumerate() {
                next[i + 1] += c / self.b[n];
                next[i] -= self.a[n] * c / self.b[n];
            }
            if n > 0 {
                for (i, c) in polys[n - 1].iter().enumerate() {
                    next[i] -= self.b[n - 1] * c / self.b[n];
                }
            }
            polys.push(next);
        }
        polys
    }

    pub fn gauss_rule(&self, m: usize) -> Result<QuadratureRule> {
        gauss_rule(self, m)
    }
}

/// Analytic recurrence of a base weight (level 0), when one is known.
pub fn base_recurrence(family: &WeightFamily, n: usize) -> Option<RecurrenceCoeffs> {
    let pi = std::f64::consts::PI;
    let (a, b, mu0): (Vec<f64>, Vec<f64>, f64) = match *family {
        WeightFamily::Hermite => (
            vec![0.0; n],
            (0..n).map(|k| ((k as f64 + 1.0) / 2.0).sqrt()).collect(),
            pi.sqrt(),
        ),
        WeightFamily::HermiteShifted { rho } => (
            vec![rho; n],
            (0..n).map(|k| ((k as f64 + 1.0) / 2.0).sqrt()).collect(),
            pi.sqrt(),
        ),
        WeightFamily::HermiteScaled { gamma } => (
            vec![0.0; n],
            (0..n)
                .map(|k| ((k as f64 + 1.0) / (2.0 * gamma)).sqrt())
                .collect(),
            (pi / gamma).sqrt(),
        ),
        WeightFamily::Legendre => (
            vec![0.0; n],
            (0..n)
                .map(|k| {
                    let k = k as f64;
                    (k + 1.0) / ((2.0 * k + 1.0) * (2.0 * k + 3.0)).sqrt()
                })
                .collect(),
            2.0,
        ),
        WeightFamily::Ultraspherical1m => (
            vec![0.0; n],
            (0..n)
                .map(|k| {
                    let k = k as f64;
                    ((k + 1.0) * (k + 3.0) / ((2.0 * k + 3.0) * (2.0 * k + 5.0))).sqrt()
                })
                .collect(),
            4.0 / 3.0,
        ),
        WeightFamily::LaguerreHalfline => (
            (0..n).map(|k| 2.0 * k as f64 + 1.0).collect(),
            (0..n).map(|k| k as f64 + 1.0).collect(),
            1.0,
        ),
        WeightFamily::LaguerreMirror => (
            (0..n).map(|k| -(2.0 * k as f64 + 1.0)).collect(),
            (0..n).map(|k| k as f64 + 1.0).collect(),
            1.0,
        ),
        WeightFamily::BilateralLaguerre => return None,
    };
    Some(RecurrenceCoeffs { a, b, mu0 })
}

/// Quadrature rule for the base weight `w^[0]`, exact for polynomials of
/// degree `2m - 1`.
pub fn base_rule(spec: &WeightSpec, m: usize) -> Result<QuadratureRule> {
    spec.validate()?;
    if m == 0 {
        return invalid("quadrature needs at least one point");
    }
    match base_recurrence(&spec.family, m) {
        Some(rc) => gauss_rule(&rc, m),
        None => {
            // e^{-|ξ|}: one Gauss–Laguerre rule per half-line.
            let lag = base_recurrence(&WeightFamily::LaguerreHalfline, m).expect("analytic");
            let half = gauss_rule(&lag, m)?;
            Ok(half.reflected().merged(&half))
        }
    }
}

/// Quadrature rule for `w^[s]`: the base rule with the level modifier folded
/// into the weights; exact for polynomials of degree `2m - 1 - 2s`.
pub fn modified_rule(spec: &WeightSpec, m: usize) -> Result<QuadratureRule> {
    let rule = base_rule(spec, m)?;
    let s = spec.sobolev_level;
    Ok(rule.reweighted(|x| crate::weights::level_modifier(s, x)))
}

/// Discretized Stieltjes procedure in orthonormal form.
pub fn stieltjes(rule: &QuadratureRule, n: usize) -> Result<RecurrenceCoeffs> {
    let m = rule.len();
    if n == 0 || n >= m {
        return invalid(format!("Stieltjes needs 1 <= N < M = {m}, got N = {n}"));
    }
    let mu0 = rule.mass();
    let mut q_prev = vec![0.0; m];
    let mut q: Vec<f64> = vec![1.0 / mu0.sqrt(); m];
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    let mut r = vec![0.0; m];
    for k in 0..n {
        let ak: f64 = (0..m)
            .map(|i| rule.weights[i] * rule.nodes[i] * q[i] * q[i])
            .sum();
        let bprev = if k > 0 { b[k - 1] } else { 0.0 };
        for i in 0..m {
            r[i] = (rule.nodes[i] - ak) * q[i] - bprev * q_prev[i];
        }
        let bk = (0..m)
            .map(|i| rule.weights[i] * r[i] * r[i])
            .sum::<f64>()
            .sqrt();
        if !(bk > 0.0 && bk.is_finite()) {
            return Err(Error::Singular(format!(
                "discrete measure supports only {k} orthogonal polynomials"
            )));
        }
        a.push(ak);
        b.push(bk);
        std::mem::swap(&mut q_prev, &mut q);
        for i in 0..m {
            q[i] = r[i] / bk;
        }
    }
    Ok(RecurrenceCoeffs { a, b, mu0 })
}

/// Largest `|Σ ω p_i p_j - δ_ij|` over the last few degrees (and degree 0)
/// on the given rule.
pub fn orthonormality_residual(rc: &RecurrenceCoeffs, rule: &QuadratureRule, n: usize) -> f64 {
    let mut degrees: Vec<usize> = vec![0];
    degrees.extend(n.saturating_sub(3)..=n);
    degrees.dedup();
    let mut gram = vec![vec![0.0; degrees.len()]; degrees.len()];
    let mut vals = Vec::new();
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        if w == 0.0 {
            continue;
        }
        rc.eval_polys_into(x, n, &mut vals);
        for (i, &di) in degrees.iter().enumerate() {
            for (j, &dj) in degrees.iter().enumerate() {
                gram[i][j] += w * vals[di] * vals[dj];
            }
        }
    }
    let mut worst = 0.0f64;
    for i in 0..degrees.len() {
        for j in 0..degrees.len() {
            let target = if degrees[i] == degrees[j] { 1.0 } else { 0.0 };
            worst = worst.max((gram[i][j] - target).abs());
        }
    }
    worst
}

/// Number of base-rule points used by the Stieltjes route for `N` coefficients.
pub fn stieltjes_points(spec: &WeightSpec, n: usize) -> usize {
    2 * n + 32 + spec.sobolev_level as usize
}

/// Stieltjes on an `m`-point discretization, verified on an independent
/// `m + 8`-point rule.
pub fn recurrence_coeffs_with_points(spec: &WeightSpec, n: usize, m: usize) -> Result<RecurrenceCoeffs> {
    let rule = modified_rule(spec, m)?;
    let rc = stieltjes(&rule, n)?;
    let check = modified_rule(spec, m + 8)?;
    // p_N needs b_{N-1} only, so the highest checked degree is N.
    let residual = orthonormality_residual(&rc, &check, n);
    if !(residual <= STIELTJES_TOLERANCE) {
        return Err(Error::QuadratureResolution {
            degree: n,
            residual,
            tolerance: STIELTJES_TOLERANCE,
            suggested_points: 2 * m,
        });
    }
    Ok(rc)
}

/// Recurrence coefficients `a_0..a_{N-1}`, `b_0..b_{N-1}` of `w^[s]`.
pub fn recurrence_coeffs(spec: &WeightSpec, n: usize, method: RecurrenceMethod) -> Result<RecurrenceCoeffs> {
    if n == 0 {
        return invalid("recurrence truncation N must be at least 1");
    }
    match method {
        RecurrenceMethod::Stieltjes => recurrence_coeffs_with_points(spec, n, stieltjes_points(spec, n)),
        RecurrenceMethod::ExactMoments => {
            let rec = exact_recurrence(spec, n)?;
            let a = rec.alpha.iter().map(rational_to_f64).collect();
            let b = (0..n).map(|k| rational_to_f64(rec.b_squared(k)).sqrt()).collect();
            let mu0 = rational_to_f64(&rec.beta[0]) * rec.unit.value();
            RecurrenceCoeffs::new(a, b, mu0)
        }
        RecurrenceMethod::Christoffel => {
            spec.validate()?;
            let s = spec.sobolev_level as usize;
            let base = base_coeffs(spec, n + 2 * s + 1)?;
            if s == 0 {
                return Ok(base.truncated(n));
            }
            Ok(sobolev_modification(&base, s, n)?.recurrence)
        }
    }
}

/// Recurrence of the base weight (level ignored), analytic when available.
pub fn base_coeffs(spec: &WeightSpec, n: usize) -> Result<RecurrenceCoeffs> {
    match base_recurrence(&spec.family, n) {
        Some(rc) => Ok(rc),
        None => recurrence_coeffs(&spec.base(), n, RecurrenceMethod::Stieltjes),
    }
}

/// `p_0(ξ)..p_{n_max}(ξ)`.
pub fn eval_polys(rc: &RecurrenceCoeffs, xi: f64, n_max: usize) -> Vec<f64> {
    rc.eval_polys(xi, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn shipped_specs() -> Vec<WeightSpec> {
        let mut v = Vec::new();
        for s in 0..3 {
            v.push(WeightSpec::hermite(s));
            v.push(WeightSpec::legendre(s));
            v.push(WeightSpec::laguerre(s));
            v.push(WeightSpec::new(WeightFamily::LaguerreMirror, s).unwrap());
            v.push(WeightSpec::new(WeightFamily::BilateralLaguerre, s).unwrap());
            v.push(WeightSpec::new(WeightFamily::Ultraspherical1m, s).unwrap());
            v.push(WeightSpec::new(WeightFamily::HermiteScaled { gamma: 1.5 }, s).unwrap());
            v.push(WeightSpec::new(WeightFamily::HermiteShifted { rho: 0.75 }, s).unwrap());
        }
        v
    }

    #[test]
    fn hermite_level_one_golden_b() {
        let golden: [f64; 6] = [
            5.0 / 6.0,
            19.0 / 15.0,
            351.0 / 190.0, // 315/190 in some sources is a digit transposition
            1730.0 / 741.0,
            38665.0 / 13494.0,
            236925.0 / 70411.0,
        ];
        for method in [RecurrenceMethod::Stieltjes, RecurrenceMethod::ExactMoments] {
            let rc = recurrence_coeffs(&WeightSpec::hermite(1), 6, method).unwrap();
            for (n, g) in golden.iter().enumerate() {
                assert_relative_eq!(rc.b[n], g.sqrt(), max_relative = 1e-12);
                assert_eq!(rc.a[n].abs() < 1e-14, true);
            }
        }
    }

    #[test]
    fn stieltjes_matches_exact_on_every_family() {
        for spec in shipped_specs() {
            let st = recurrence_coeffs(&spec, 13, RecurrenceMethod::Stieltjes).unwrap();
            let ex = recurrence_coeffs(&spec, 13, RecurrenceMethod::ExactMoments).unwrap();
            for n in 0..13 {
                assert_relative_eq!(st.b[n], ex.b[n], max_relative = 1e-10);
                let scale = ex.a[n].abs().max(1.0);
                assert!((st.a[n] - ex.a[n]).abs() < 1e-10 * scale, "{spec:?} a_{n}");
            }
            assert_relative_eq!(st.mu0, ex.mu0, max_relative = 1e-12);
        }
    }

    #[test]
    fn hermite_p1_p2_level_one() {
        let rc = recurrence_coeffs(&WeightSpec::hermite(1), 4, RecurrenceMethod::Stieltjes).unwrap();
        let q = std::f64::consts::PI.powf(0.25);
        for &x in &[0.0, 0.3, -1.7, 2.5] {
            let p = rc.eval_polys(x, 2);
            assert_relative_eq!(p[1], 2.0 * 5f64.sqrt() / (5.0 * q) * x, epsilon = 1e-14);
            let p2 = 2.0 * 57f64.sqrt() / (19.0 * q) * (x * x - 5.0 / 6.0);
            assert_relative_eq!(p[2], p2, epsilon = 1e-14);
        }
    }

    #[test]
    fn leading_coefficients_match_monomials() {
        let rc = recurrence_coeffs(&WeightSpec::laguerre(1), 6, RecurrenceMethod::Stieltjes).unwrap();
        let lead = rc.leading_coefficients(5);
        let mono = rc.monomial_coefficients(5);
        for n in 0..=5 {
            assert_relative_eq!(lead[n], *mono[n].last().unwrap(), max_relative = 1e-14);
        }
    }

    #[test]
    fn gauss_examples() {
        let h = base_recurrence(&WeightFamily::Hermite, 4).unwrap();
        let r1 = gauss_rule(&h, 1).unwrap();
        assert_eq!(r1.nodes[0], 0.0);
        assert_relative_eq!(r1.weights[0], std::f64::consts::PI.sqrt(), max_relative = 1e-15);
        let l = base_recurrence(&WeightFamily::Legendre, 4).unwrap();
        let r2 = gauss_rule(&l, 2).unwrap();
        assert_relative_eq!(r2.nodes[0], -1.0 / 3f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(r2.nodes[1], 1.0 / 3f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(r2.weights[0], 1.0, max_relative = 1e-14);
        assert_relative_eq!(r2.weights[1], 1.0, max_relative = 1e-14);
    }

    #[test]
    fn gauss_exactness_degree() {
        for spec in shipped_specs() {
            let m = 10;
            let exact = moments_exact(&spec, 2 * m).unwrap().to_f64();
            let rc = recurrence_coeffs(&spec, m, RecurrenceMethod::ExactMoments).unwrap();
            let rule = gauss_rule(&rc, m).unwrap();
            assert!(rule.weights.iter().all(|&w| w > 0.0));
            for j in [0, 2 * m - 2, 2 * m - 1] {
                let q = rule.moment(j as i32);
                // odd moments of symmetric weights vanish; measure them against μ_{2m-2}
                let scale = exact[j].abs().max(exact[2 * m - 2].abs());
                assert!((q - exact[j]).abs() <= 1e-12 * scale, "{spec:?} j={j}: {q} vs {}", exact[j]);
            }
        }
    }

    #[test]
    fn orthonormality_on_gauss_rule() {
        for spec in shipped_specs() {
            let rc = recurrence_coeffs(&spec, 16, RecurrenceMethod::Stieltjes).unwrap();
            let rule = gauss_rule(&rc, 14).unwrap();
            for n in 0..=12 {
                for m in 0..=12 {
                    let ip = rule.integrate(|x| {
                        let p = rc.eval_polys(x, 12);
                        p[n] * p[m]
                    });
                    let target = if n == m { 1.0 } else { 0.0 };
                    assert!((ip - target).abs() < 1e-10, "{spec:?} ({n},{m}): {ip}");
                }
            }
        }
    }

    #[test]
    fn freud_corridor() {
        let rc = recurrence_coeffs(&WeightSpec::hermite(1), 201, RecurrenceMethod::Stieltjes).unwrap();
        for n in 50..=200 {
            let r = rc.b[n] / (n as f64).sqrt();
            assert!((0.5..=1.0).contains(&r), "b_{n}/sqrt(n) = {r}");
        }
    }

    #[test]
    fn resolution_failure_is_diagnosed() {
        let err = recurrence_coeffs_with_points(&WeightSpec::hermite(2), 20, 21).unwrap_err();
        match err {
            Error::QuadratureResolution { suggested_points, .. } => assert_eq!(suggested_points, 42),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn ql_matches_known_spectrum() {
        // tridiag(1, 2, 1) of size n has eigenvalues 2 + 2cos(kπ/(n+1))
        let n = 30;
        let ev = tridiagonal_eigenvalues(&vec![2.0; n], &vec![1.0; n - 1]).unwrap();
        let mut expected: Vec<f64> = (1..=n)
            .map(|k| 2.0 + 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        expected.sort_by(|a, b| a.total_cmp(b));
        for (a, b) in ev.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
