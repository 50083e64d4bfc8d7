//! Galerkin solver for `u_t = u_xx - a (x u)_x` in the `H¹`-orthonormal
//! second-kind Hermite system `φ_n^[1]`.
//!
//! Because the basis is `H¹`-orthonormal, the `H¹` norm of the discrete
//! solution is the Euclidean norm of its coefficients, and the energy law
//! `d/dt ∫(u_x² + u²) = -∫(2u_xx² + (2+3a)u_x² + a u²)` carries over to the
//! Galerkin system exactly: `2 Re⟨v, Lv⟩ ≤ -a |v|²`.

use nalgebra::{DMatrix, DVector, SymmetricEigen, LU};
use serde::{Deserialize, Serialize};

use crate::basis::hermite::HermiteSeries;
use crate::basis::{BasisSystem, SystemKind};
use crate::error::{invalid, Error, Result};
use crate::orthopoly::{base_recurrence, gauss_rule};
use crate::weights::WeightFamily;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Trapezoidal,
    BackwardEuler,
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trapezoidal" | "crank-nicolson" => Ok(Scheme::Trapezoidal),
            "backward-euler" | "backward_euler" => Ok(Scheme::BackwardEuler),
            other => invalid(format!("unknown scheme '{other}' (trapezoidal, backward-euler)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OuProblem {
    pub a: f64,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub initial: Vec<f64>,
}

impl OuProblem {
    /// `u(0) = φ_0^[1]`.
    pub fn new(a: f64, n: usize, dt: f64, t_end: f64) -> Result<Self> {
        let mut initial = vec![0.0; n];
        if n > 0 {
            initial[0] = 1.0;
        }
        Self::with_initial(a, dt, t_end, initial)
    }

    pub fn with_initial(a: f64, dt: f64, t_end: f64, initial: Vec<f64>) -> Result<Self> {
        let p = OuProblem {
            a,
            n: initial.len(),
            dt,
            t_end,
            initial,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a.is_finite()) {
            return invalid(format!("friction a must be positive, got {}", self.a));
        }
        if self.n < 4 {
            return invalid(format!("truncation N must be at least 4, got {}", self.n));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return invalid(format!("time step must be positive, got {}", self.dt));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return invalid(format!("horizon must be non-negative, got {}", self.t_end));
        }
        if self.initial.iter().any(|v| !v.is_finite()) {
            return invalid("initial coefficients must be finite");
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// `A u = u'' - a (x u)'` on a Hermite series.
pub fn apply_ou(u: &HermiteSeries, a: f64) -> Result<HermiteSeries> {
    u.nth_derivative(2).add(&u.times_x().derivative().scaled((-a).into()))
}

/// `∫ (f conj(g) + f' conj(g'))` by `m`-point Gauss–Hermite quadrature of the
/// polynomial parts (exact when `2m - 1` covers the product degree).
pub fn h1_inner_gauss(f: &HermiteSeries, g: &HermiteSeries, m: usize) -> Result<f64> {
    if f.scale != 1.0 || g.scale != 1.0 {
        return invalid("Gauss–Hermite inner product expects unit-scale series");
    }
    let rc = base_recurrence(&WeightFamily::Hermite, m).expect("analytic");
    let rule = gauss_rule(&rc, m)?;
    let (df, dg) = (f.derivative(), g.derivative());
    let (pf, pg, pdf, pdg) = (f.polynomial_part(), g.polynomial_part(), df.polynomial_part(), dg.polynomial_part());
    let ev = |p: &[num_complex::Complex64], x: f64| p.iter().rev().fold(num_complex::Complex64::new(0.0, 0.0), |acc, c| acc * x + c);
    let mut sum = num_complex::Complex64::new(0.0, 0.0);
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        sum += w * (ev(&pf, x) * ev(&pg, x).conj() + ev(&pdf, x) * ev(&pdg, x).conj());
    }
    if sum.im.abs() > 1e-12 * (1.0 + sum.re.abs()) {
        return Err(Error::Singular("H¹ inner product of a real basis is not real".into()));
    }
    Ok(sum.re)
}

/// `L_{mn} = ⟨φ_n'' - a (x φ_n)', φ_m⟩_{H¹}` for `m, n < N`.
#[derive(Debug, Clone)]
pub struct GalerkinOperator {
    pub a: f64,
    pub matrix: DMatrix<f64>,
    /// Gauss–Hermite points used for every entry.
    pub points: usize,
}

impl GalerkinOperator {
    pub fn assemble(a: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("operator needs N >= 1");
        }
        let sys = BasisSystem::new(SystemKind::HermiteClosed { s: 1 }, n)?;
        let phi: Vec<HermiteSeries> = (0..n as i64).map(|k| sys.hermite_series(k)).collect::<Result<_>>()?;
        // λ_n has degree n; A raises it by 2 and the derivative by one more
        let points = n + 4;
        let mut matrix = DMatrix::zeros(n, n);
        for (col, p) in phi.iter().enumerate() {
            let ap = apply_ou(p, a)?;
            for (row, q) in phi.iter().enumerate() {
                matrix[(row, col)] = h1_inner_gauss(&ap, q, points)?;
            }
        }
        Ok(GalerkinOperator { a, matrix, points })
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    /// Largest eigenvalue of `(L + Lᵀ)/2`: `d/dt |u| ≤ ω |u|`.
    pub fn numerical_abscissa(&self) -> f64 {
        let sym = (&self.matrix + self.matrix.transpose()) * 0.5;
        SymmetricEigen::new(sym).eigenvalues.max()
    }
}

/// Time stepper with the implicit matrix factored once.
#[derive(Debug, Clone)]
pub struct Stepper {
    scheme: Scheme,
    explicit: DMatrix<f64>,
    implicit: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl Stepper {
    pub fn new(op: &GalerkinOperator, dt: f64, scheme: Scheme) -> Result<Self> {
        let n = op.size();
        let id = DMatrix::<f64>::identity(n, n);
        let (lhs, rhs) = match scheme {
            Scheme::Trapezoidal => (&id - &op.matrix * (dt / 2.0), &id + &op.matrix * (dt / 2.0)),
            Scheme::BackwardEuler => (&id - &op.matrix * dt, id.clone()),
        };
        let implicit = lhs.lu();
        if !implicit.is_invertible() {
            return Err(Error::Singular("implicit step matrix".into()));
        }
        Ok(Stepper {
            scheme,
            explicit: rhs,
            implicit,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn step(&self, u: &DVector<f64>) -> Result<DVector<f64>> {
        self.implicit
            .solve(&(&self.explicit * u))
            .ok_or_else(|| Error::Singular("implicit step matrix".into()))
    }
}

/// `H¹` norm of a coefficient vector in the orthonormal basis.
pub fn h1_norm(coeffs: &[f64]) -> f64 {
    coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    pub final_coeffs: Vec<f64>,
}

impl Trajectory {
    /// Largest step-to-step growth `|u_{k+1}| - |u_k|` (non-positive when monotone).
    pub fn max_increase(&self) -> f64 {
        self.norms.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest `|u(t)| / (e^{-a t (1-eps)} |u(0)|)`; at most 1 when the
    /// envelope holds.
    pub fn envelope_ratio(&self, a: f64, eps: f64) -> f64 {
        let n0 = self.norms[0];
        self.times
            .iter()
            .zip(&self.norms)
            .map(|(t, n)| n / (n0 * (-a * t * (1.0 - eps)).exp()))
            .fold(0.0, f64::max)
    }

    /// Observed mean decay rate `-ln(|u(T)|/|u(0)|)/T`.
    pub fn mean_rate(&self) -> f64 {
        let t = *self.times.last().unwrap();
        if t == 0.0 {
            return 0.0;
        }
        -(self.norms.last().unwrap() / self.norms[0]).ln() / t
    }
}

pub fn solve(problem: &OuProblem, scheme: Scheme) -> Result<Trajectory> {
    problem.validate()?;
    let op = GalerkinOperator::assemble(problem.a, problem.n)?;
    solve_with(problem, &op, scheme)
}

pub fn solve_with(problem: &OuProblem, op: &GalerkinOperator, scheme: Scheme) -> Result<Trajectory> {
    if op.size() != problem.n {
        return invalid("operator size does not match the problem");
    }
    let stepper = Stepper::new(op, problem.dt, scheme)?;
    let steps = problem.steps();
    let mut u = DVector::from_vec(problem.initial.clone());
    let mut times = Vec::with_capacity(steps + 1);
    let mut norms = Vec::with_capacity(steps + 1);
    times.push(0.0);
    norms.push(u.norm());
    for k in 1..=steps {
        u = stepper.step(&u)?;
        times.push(k as f64 * problem.dt);
        norms.push(u.norm());
    }
    Ok(Trajectory {
        times,
        norms,
        final_coeffs: u.iter().copied().collect(),
    })
}

/// Real polynomial times `e^{-x²/2}`, with exact Gaussian-moment integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPoly(pub Vec<f64>);

impl GaussianPoly {
    fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn combine(a: &[f64], b: &[f64], fb: f64) -> Vec<f64> {
        let n = a.len().max(b.len());
        (0..n)
            .map(|k| a.get(k).copied().unwrap_or(0.0) + fb * b.get(k).copied().unwrap_or(0.0))
            .collect()
    }

    /// `(P e^{-x²/2})' = (P' - xP) e^{-x²/2}`.
    pub fn derivative(&self) -> GaussianPoly {
        let dp: Vec<f64> = self.0.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
        let xp: Vec<f64> = std::iter::once(0.0).chain(self.0.iter().copied()).collect();
        GaussianPoly(Self::combine(&dp, &xp, -1.0))
    }

    pub fn times_x(&self) -> GaussianPoly {
        GaussianPoly(std::iter::once(0.0).chain(self.0.iter().copied()).collect())
    }

    pub fn sub_scaled(&self, other: &GaussianPoly, f: f64) -> GaussianPoly {
        GaussianPoly(Self::combine(&self.0, &other.0, -f))
    }

    /// `∫ P Q e^{-x²} dx` from `∫ x^{2k} e^{-x²} = Γ(k + ½)`.
    pub fn inner(&self, other: &GaussianPoly) -> f64 {
        let prod = Self::poly_mul(&self.0, &other.0);
        let mut moment = std::f64::consts::PI.sqrt(); // Γ(½)
        let mut sum = 0.0;
        for (k, c) in prod.iter().enumerate().step_by(2) {
            if k > 0 {
                moment *= (k as f64 - 1.0) / 2.0;
            }
            sum += c * moment;
        }
        sum
    }
}

/// Both sides of the energy identity at `t = 0` for `u = P e^{-x²/2}`:
/// `(d/dt ∫(u_x² + u²), -∫(2u_xx² + (2+3a)u_x² + a u²))`, where the time
/// derivative is `2⟨u_t, u⟩_{H¹}` with `u_t = u_xx - a(xu)_x`.
pub fn energy_identity(u: &GaussianPoly, a: f64) -> (f64, f64) {
    let ux = u.derivative();
    let uxx = ux.derivative();
    let ut = uxx.sub_scaled(&u.times_x().derivative(), a);
    let lhs = 2.0 * (ut.inner(u) + ut.derivative().inner(&ux));
    let rhs = -(2.0 * uxx.inner(&uxx) + (2.0 + 3.0 * a) * ux.inner(&ux) + a * u.inner(u));
    (lhs, rhs)
}
