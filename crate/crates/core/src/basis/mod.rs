//! Sobolev-orthonormal function systems
//! `φ_n(x) = (i^n/√(2π)) ∫ p_n(ξ) g(ξ) e^{ixξ} dξ`.
//!
//! Every system carries its weight, Sobolev sequence and mollifier, so it can
//! always be evaluated by quadrature of the defining transform; the named
//! families additionally have closed forms (Hermite functions and their
//! cascades, rational Malmquist–Takenaka and bilateral Laguerre functions,
//! spherical Bessel functions).
//!
//! Systems on a half-line weight (`e^{-ξ}` on `[0, ∞)`) are indexed over `ℤ`:
//! index `-k-1` uses the reflected polynomial `p_k(-ξ)` and mollifier
//! `g(-ξ)`, which gives `φ_{-k-1} = -i conj(φ_k)`.

pub mod bessel;
pub mod hermite;
pub mod quad;
pub mod rational;

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cascade::{connection_matrix, ConnectionMatrix};
use crate::coeffs::{i_pow, CoefficientVector};
use crate::error::{invalid, Error, Result};
use crate::orthopoly::{
    base_recurrence, exact_recurrence, rational_to_f64, recurrence_coeffs, RecurrenceCoeffs,
    RecurrenceMethod, MAX_EXACT_N,
};
use crate::weights::{mollifier_for, Decay, Mollifier, SobolevSequence, WeightFamily, WeightSpec};

use hermite::{h_infinity_series, HermiteSeries};
use quad::{composite_rule, panel_width, DEFAULT_PANEL_BUDGET};
use rational::{mt_derivative, mt_function, LorentzRational, MtSeries, Poly};

/// `1/√(2π)`.
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "system", content = "params", rename_all = "snake_case")]
pub enum SystemKind {
    /// Generic: polynomials of `weight`, mollifier `√(w/v)`, evaluated by quadrature.
    Quadrature {
        weight: WeightSpec,
        sequence: SobolevSequence,
    },
    /// Second-kind Hermite cascade `φ^[s]` (`s = 0`: Hermite functions).
    HermiteClosed { s: u32 },
    /// The `H^∞` Hermite system, `v(ξ) = e^{σξ²}`.
    HermiteHinf { sigma: f64 },
    /// `w = (1+ξ²) e^{-|ξ|}`, `H¹`-orthonormal.
    BilateralLaguerre1,
    /// Legendre weight with `g = 1`: spherical Bessel functions.
    LegendreBessel,
    /// Second-kind Sobolev–Legendre cascade.
    LegendreCascade2nd { s: u32 },
    /// Second-kind cascade of the weight `1 - ξ²` (quadrature only).
    UltrasphericalCascade2nd { s: u32 },
    MalmquistTakenaka,
    /// Second-kind Sobolev–Laguerre cascade, indexed over `ℤ`.
    SobolevLaguerre2nd { s: u32 },
    /// `e^{iρx}` times the Hermite functions.
    HermiteShifted0 { rho: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexSet {
    Naturals,
    Integers,
}

/// How `φ_n` decays in `x`, which decides the physical-side quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhysicalDecay {
    /// Like `e^{-x²/(2 width²)}`.
    Gaussian { width: f64 },
    /// Rational or exponential: integrable after `x = tan(θ/2)/2`.
    Algebraic,
    /// Like `1/x` (compact Fourier support); no physical-side quadrature.
    Slow,
}

impl SystemKind {
    pub fn weight_and_sequence(&self) -> Result<(WeightSpec, SobolevSequence)> {
        let std = SobolevSequence::standard;
        Ok(match self {
            SystemKind::Quadrature { weight, sequence } => (weight.clone(), sequence.clone()),
            SystemKind::HermiteClosed { s } => (WeightSpec::hermite(*s), std(*s)),
            SystemKind::HermiteHinf { sigma } => {
                (WeightSpec::hermite(0), SobolevSequence::exponential(*sigma)?)
            }
            SystemKind::BilateralLaguerre1 => {
                (WeightSpec::new(WeightFamily::BilateralLaguerre, 1)?, std(1))
            }
            SystemKind::LegendreBessel => (WeightSpec::legendre(0), std(0)),
            SystemKind::LegendreCascade2nd { s } => (WeightSpec::legendre(*s), std(*s)),
            SystemKind::UltrasphericalCascade2nd { s } => {
                (WeightSpec::new(WeightFamily::Ultraspherical1m, *s)?, std(*s))
            }
            SystemKind::MalmquistTakenaka => (WeightSpec::laguerre(0), std(0)),
            SystemKind::SobolevLaguerre2nd { s } => (WeightSpec::laguerre(*s), std(*s)),
            SystemKind::HermiteShifted0 { rho } => {
                (WeightSpec::new(WeightFamily::HermiteShifted { rho: *rho }, 0)?, std(0))
            }
        })
    }

    pub fn name(&self) -> String {
        match self {
            SystemKind::Quadrature { weight, sequence } => {
                format!("quadrature({}, s={}, {:?})", weight.family.name(), weight.sobolev_level, sequence)
            }
            SystemKind::HermiteClosed { s } => format!("hermite[{s}]"),
            SystemKind::HermiteHinf { sigma } => format!("hermite_hinf(sigma={sigma})"),
            SystemKind::BilateralLaguerre1 => "bilateral_laguerre[1]".into(),
            SystemKind::LegendreBessel => "legendre_bessel".into(),
            SystemKind::LegendreCascade2nd { s } => format!("legendre_cascade[{s}]"),
            SystemKind::UltrasphericalCascade2nd { s } => format!("ultraspherical_cascade[{s}]"),
            SystemKind::MalmquistTakenaka => "malmquist_takenaka".into(),
            SystemKind::SobolevLaguerre2nd { s } => format!("sobolev_laguerre[{s}]"),
            SystemKind::HermiteShifted0 { rho } => format!("hermite_shifted(rho={rho})"),
        }
    }
}

#[derive(Debug, Clone)]
enum Closed {
    None,
    Hermite(Vec<HermiteSeries>),
    Bilateral(Vec<LorentzRational>),
    LegendreBessel,
    /// `φ^[s]_n = Σ_j Γ_{n,j} φ^[0]_j`, rows of `Γ = C^{-1}`.
    LegendreCascade(Vec<Vec<Complex64>>),
    /// Non-negative indices; negative ones follow by reflection.
    Mt(Vec<MtSeries>),
    Shifted(f64),
}

/// An evaluatable system `{φ_n}` truncated at `|n| ≤ n_max`.
#[derive(Debug, Clone)]
pub struct BasisSystem {
    kind: SystemKind,
    weight: WeightSpec,
    mollifier: Mollifier,
    rc: RecurrenceCoeffs,
    n_max: usize,
    closed: Closed,
    panel_budget: usize,
}

/// Recurrence of `w^[s]`: Christoffel modification of an analytic base when
/// there is one, Stieltjes otherwise.
pub fn system_recurrence(spec: &WeightSpec, n: usize) -> Result<RecurrenceCoeffs> {
    if base_recurrence(&spec.family, 1).is_some() {
        recurrence_coeffs(spec, n, RecurrenceMethod::Christoffel)
    } else {
        recurrence_coeffs(spec, n, RecurrenceMethod::Stieltjes)
    }
}

/// Rows `Γ_{n,0..=n}` of the inverse of the phased connection matrix.
pub fn inverse_rows(c: &ConnectionMatrix) -> Result<Vec<Vec<Complex64>>> {
    let n = c.size();
    let zero = Complex64::new(0.0, 0.0);
    let mut rows: Vec<Vec<Complex64>> = (0..n).map(|i| vec![zero; i + 1]).collect();
    let mut e = vec![zero; n];
    for j in 0..n {
        e[j] = 1.0.into();
        let col = c.functions_s_from_0(&e)?;
        e[j] = zero;
        for i in j..n {
            rows[i][j] = col[i];
        }
    }
    Ok(rows)
}

fn reflect_mt(series: &MtSeries) -> MtSeries {
    // φ_{-j-1} = -i conj(φ_j), so -i conj(Σ c_j φ_j) = Σ conj(c_j) φ_{-j-1}
    let c = &series.coeffs;
    let lo = -c.last_index() - 1;
    let mut out = CoefficientVector::zeros(lo, c.len());
    for j in c.indices() {
        *out.get_mut(-j - 1).unwrap() = c.get(j).unwrap().conj();
    }
    MtSeries::new(out)
}

fn rational_poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact numerators of the bilateral Laguerre `φ_n^[1]`, `n ≤ n_max`, over
/// `(1+4x²)^{n+1}`: with monic `π_n = Σ m_k ξ^k` and
/// `λ_k = (2√2/√π) N_k/(1+4x²)^{k+1}`,
/// `φ_n = (2√2/√(π h_n)) Σ_k m_k i^{n-k} N_k (1+4x²)^{n-k} / (1+4x²)^{n+1}`.
fn bilateral_closed_forms(n_max: usize) -> Result<Vec<LorentzRational>> {
    let spec = WeightSpec::new(WeightFamily::BilateralLaguerre, 1)?;
    let rec = exact_recurrence(&spec, n_max + 1)?;
    let monic = rec.monic_polys(n_max);
    let int = |v: i64| BigRational::from_integer(v.into());
    let q = vec![int(1), int(0), int(4)];
    // N_{k+1} = N_k' q - 8(k+1) x N_k
    let mut numerators: Vec<Vec<BigRational>> = vec![vec![int(1)]];
    for k in 0..n_max {
        let nk = &numerators[k];
        let deriv: Vec<BigRational> = if nk.len() > 1 {
            nk.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect()
        } else {
            vec![int(0)]
        };
        let mut next = rational_poly_mul(&deriv, &q);
        let shifted: Vec<BigRational> = std::iter::once(int(0)).chain(nk.iter().cloned()).collect();
        if next.len() < shifted.len() {
            next.resize(shifted.len(), int(0));
        }
        for (i, c) in shifted.iter().enumerate() {
            next[i] -= c * int(8 * (k as i64 + 1));
        }
        numerators.push(next);
    }
    let mut out = Vec::with_capacity(n_max + 1);
    for (n, m) in monic.iter().enumerate() {
        let mut total = vec![BigRational::zero()];
        for (k, mk) in m.iter().enumerate() {
            if mk.is_zero() || (n - k) % 2 == 1 {
                continue;
            }
            let sign = if ((n - k) / 2) % 2 == 0 { BigRational::one() } else { -BigRational::one() };
            let mut term = numerators[k].clone();
            for _ in 0..(n - k) {
                term = rational_poly_mul(&term, &q);
            }
            if total.len() < term.len() {
                total.resize(term.len(), BigRational::zero());
            }
            for (i, c) in term.iter().enumerate() {
                total[i] += c * mk * &sign;
            }
        }
        let h = rational_to_f64(&rec.monic_norm(n)) * rec.unit.value();
        let factor = 2.0 * rational::SQRT_2_OVER_PI / h.sqrt();
        out.push(LorentzRational {
            numerator: Poly(total.iter().map(|c| factor * rational_to_f64(c)).collect()),
            power: n as u32 + 1,
        });
    }
    Ok(out)
}

impl BasisSystem {
    /// Build the system for indices `|n| ≤ n_max` (`0..=n_max` on `ℤ₊`,
    /// `-n_max-1..=n_max` on `ℤ`).
    pub fn new(kind: SystemKind, n_max: usize) -> Result<Self> {
        let (weight, seq) = kind.weight_and_sequence()?;
        let mollifier = mollifier_for(&weight, &seq)?;
        let rc = system_recurrence(&weight, n_max + 2)?;
        let size = n_max + 1;
        let closed = match &kind {
            SystemKind::HermiteClosed { s } => {
                let rows = if *s == 0 {
                    (0..size)
                        .map(|n| {
                            let mut r = vec![Complex64::new(0.0, 0.0); n + 1];
                            r[n] = 1.0.into();
                            r
                        })
                        .collect()
                } else {
                    inverse_rows(&connection_matrix(&weight.base(), *s as usize, size)?)?
                };
                Closed::Hermite(
                    rows.iter()
                        .map(|row| {
                            let coeffs = row
                                .iter()
                                .enumerate()
                                .map(|(j, g)| if j % 2 == 0 { *g } else { -*g })
                                .collect();
                            HermiteSeries::new(1.0, coeffs)
                        })
                        .collect(),
                )
            }
            SystemKind::HermiteHinf { sigma } => Closed::Hermite(
                (0..size)
                    .map(|n| h_infinity_series(*sigma, n))
                    .collect::<Result<_>>()?,
            ),
            SystemKind::BilateralLaguerre1 => {
                Closed::Bilateral(bilateral_closed_forms(n_max.min(MAX_EXACT_N - 2))?)
            }
            SystemKind::LegendreBessel => Closed::LegendreBessel,
            SystemKind::LegendreCascade2nd { s } => Closed::LegendreCascade(inverse_rows(
                &connection_matrix(&weight.base(), *s as usize, size)?,
            )?),
            SystemKind::MalmquistTakenaka | SystemKind::SobolevLaguerre2nd { .. } => {
                let s = weight.sobolev_level as usize;
                let rows = if s == 0 {
                    (0..size)
                        .map(|n| {
                            let mut r = vec![Complex64::new(0.0, 0.0); n + 1];
                            r[n] = 1.0.into();
                            r
                        })
                        .collect()
                } else {
                    inverse_rows(&connection_matrix(&weight.base(), s, size)?)?
                };
                Closed::Mt(
                    rows.into_iter()
                        .map(|r| MtSeries::new(CoefficientVector::new(0, r)))
                        .collect(),
                )
            }
            SystemKind::HermiteShifted0 { rho } => Closed::Shifted(*rho),
            SystemKind::Quadrature { .. } | SystemKind::UltrasphericalCascade2nd { .. } => Closed::None,
        };
        Ok(BasisSystem {
            kind,
            weight,
            mollifier,
            rc,
            n_max,
            closed,
            panel_budget: DEFAULT_PANEL_BUDGET,
        })
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    pub fn sequence(&self) -> &SobolevSequence {
        self.mollifier.sequence()
    }

    pub fn mollifier(&self) -> &Mollifier {
        &self.mollifier
    }

    /// Recurrence of the polynomials `p_n` (of `w^[s]`), `n_max + 2` terms.
    pub fn recurrence(&self) -> &RecurrenceCoeffs {
        &self.rc
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn index_set(&self) -> IndexSet {
        if self.weight.family == WeightFamily::LaguerreHalfline {
            IndexSet::Integers
        } else {
            IndexSet::Naturals
        }
    }

    /// Inclusive index window.
    pub fn index_range(&self) -> (i64, i64) {
        match self.index_set() {
            IndexSet::Naturals => (0, self.n_max as i64),
            IndexSet::Integers => (-(self.n_max as i64) - 1, self.n_max as i64),
        }
    }

    pub fn has_closed_form(&self) -> bool {
        !matches!(self.closed, Closed::None)
    }

    pub fn set_panel_budget(&mut self, budget: usize) {
        self.panel_budget = budget;
    }

    /// Copy whose mollifier is `g (1 + eps ξ²)`; evaluated by quadrature only.
    /// Used to show that orthonormality needs `v|g|² = w`.
    pub fn perturbed(&self, eps: f64) -> BasisSystem {
        BasisSystem {
            mollifier: self.mollifier.perturbed(eps),
            closed: Closed::None,
            ..self.clone()
        }
    }

    pub fn physical_decay(&self) -> PhysicalDecay {
        match (&self.weight.decay(), self.sequence()) {
            (Decay::Compact, _) => PhysicalDecay::Slow,
            (Decay::Gaussian { scale, .. }, SobolevSequence::StandardHs { s: 0 }) => {
                PhysicalDecay::Gaussian { width: scale.recip().sqrt() }
            }
            (Decay::Gaussian { scale, .. }, SobolevSequence::Exponential { sigma }) => {
                PhysicalDecay::Gaussian { width: (sigma + scale).sqrt() }
            }
            (Decay::Gaussian { scale, .. }, _) if self.weight.sobolev_level > 0 => {
                PhysicalDecay::Gaussian { width: scale.recip().sqrt() }
            }
            _ => PhysicalDecay::Algebraic,
        }
    }

    fn check_index(&self, n: i64) -> Result<()> {
        let (lo, hi) = self.index_range();
        if n < lo || n > hi {
            return invalid(format!("index {n} outside the window {lo}..={hi}"));
        }
        Ok(())
    }

    /// `φ_n(x)`, closed form when the family has one.
    pub fn eval(&self, n: i64, x: f64) -> Result<Complex64> {
        self.derivative(n, 0, x)
    }

    /// `φ_n^{(order)}(x)`: analytic for closed forms, otherwise by quadrature
    /// of the transform with the extra factor `(iξ)^order`.
    pub fn derivative(&self, n: i64, order: usize, x: f64) -> Result<Complex64> {
        self.check_index(n)?;
        match &self.closed {
            Closed::None => self.eval_quadrature_derivative(n, order, x),
            Closed::Hermite(series) => Ok(series[n as usize].nth_derivative(order).eval(x)),
            Closed::Bilateral(forms) => match forms.get(n as usize) {
                Some(f) => {
                    let d = (0..order).fold(f.clone(), |g, _| g.derivative());
                    Ok(d.eval(x).into())
                }
                None => self.eval_quadrature_derivative(n, order, x),
            },
            Closed::LegendreBessel => {
                let n = n as usize;
                match order {
                    0 => Ok(bessel::legendre_bessel(n, x)[n].into()),
                    1 => Ok(bessel::legendre_bessel_derivative(n, x)[n].into()),
                    _ => Err(Error::DerivativeUnavailable {
                        order,
                        what: self.kind.name(),
                    }),
                }
            }
            Closed::LegendreCascade(rows) => {
                let row = &rows[n as usize];
                let vals = match order {
                    0 => bessel::legendre_bessel(row.len() - 1, x),
                    1 => bessel::legendre_bessel_derivative(row.len() - 1, x),
                    _ => {
                        return Err(Error::DerivativeUnavailable {
                            order,
                            what: self.kind.name(),
                        })
                    }
                };
                Ok(row.iter().zip(&vals).map(|(g, v)| g * v).sum())
            }
            Closed::Mt(_) => {
                if matches!(self.kind, SystemKind::MalmquistTakenaka) && order <= 1 {
                    return Ok(if order == 0 { mt_function(n, x) } else { mt_derivative(n, x) });
                }
                Ok(self.mt_series(n)?.nth_derivative(order).eval(x))
            }
            Closed::Shifted(rho) => {
                // (e^{iρx} f)^{(ℓ)} = e^{iρx} Σ_j C(ℓ,j) (iρ)^{ℓ-j} f^{(j)}
                let f = HermiteSeries::level_zero(n as usize);
                let phase = Complex64::from_polar(1.0, rho * x);
                let irho = Complex64::new(0.0, *rho);
                let mut sum = Complex64::new(0.0, 0.0);
                let mut binom = 1.0;
                let mut g = f;
                for j in 0..=order {
                    sum += binom * irho.powi((order - j) as i32) * g.eval(x);
                    binom = binom * (order - j) as f64 / (j + 1) as f64;
                    g = g.derivative();
                }
                Ok(phase * sum)
            }
        }
    }

    /// `φ_n` of an `ℤ`-indexed rational system as an MT series.
    pub fn mt_series(&self, n: i64) -> Result<MtSeries> {
        self.check_index(n)?;
        match &self.closed {
            Closed::Mt(series) => {
                if n >= 0 {
                    Ok(series[n as usize].clone())
                } else {
                    Ok(reflect_mt(&series[(-n - 1) as usize]))
                }
            }
            _ => invalid("system has no MT-series representation"),
        }
    }

    /// `φ_n` of a Hermite-type closed system as a Hermite series.
    pub fn hermite_series(&self, n: i64) -> Result<HermiteSeries> {
        self.check_index(n)?;
        match &self.closed {
            Closed::Hermite(series) => Ok(series[n as usize].clone()),
            Closed::Shifted(0.0) => Ok(HermiteSeries::level_zero(n as usize)),
            _ => invalid("system has no Hermite-series representation"),
        }
    }

    /// Numerator over `(1+4x²)^{n+1}` of the bilateral Laguerre closed form.
    pub fn bilateral_form(&self, n: usize) -> Result<LorentzRational> {
        match &self.closed {
            Closed::Bilateral(forms) => forms
                .get(n)
                .cloned()
                .ok_or_else(|| Error::InvalidArgument(format!("closed form available up to n = {}", forms.len() - 1))),
            _ => invalid("not the bilateral Laguerre system"),
        }
    }

    /// Quadrature evaluation of the defining transform.
    pub fn eval_quadrature(&self, n: i64, x: f64) -> Result<Complex64> {
        self.eval_quadrature_derivative(n, 0, x)
    }

    pub fn eval_quadrature_derivative(&self, n: i64, order: usize, x: f64) -> Result<Complex64> {
        self.check_index(n)?;
        let k = if n >= 0 { n } else { -n - 1 } as usize;
        let vals = self.quadrature_all(x, order, k, n < 0)?;
        Ok(vals[k])
    }

    /// `φ^{(order)}` for every index of the window, by quadrature.
    pub fn eval_quadrature_window(&self, x: f64, order: usize) -> Result<CoefficientVector> {
        let (lo, hi) = self.index_range();
        let mut out = CoefficientVector::zeros(lo, (hi - lo + 1) as usize);
        let pos = self.quadrature_all(x, order, self.n_max, false)?;
        for (k, v) in pos.into_iter().enumerate() {
            *out.get_mut(k as i64).unwrap() = v;
        }
        if lo < 0 {
            let neg = self.quadrature_all(x, order, self.n_max, true)?;
            for (k, v) in neg.into_iter().enumerate() {
                *out.get_mut(-(k as i64) - 1).unwrap() = v;
            }
        }
        Ok(out)
    }

    /// Integration intervals in `ξ` (or in `t`, `ξ = sin t`, for compact support).
    fn intervals(&self, degree: usize, mirrored: bool) -> Vec<(f64, f64)> {
        let d = degree as f64;
        match self.weight.decay() {
            Decay::Compact => vec![(-PI / 2.0, PI / 2.0)],
            Decay::Gaussian { center, scale } => {
                let half = (12.0 + (2.0 * d).sqrt()) / scale.sqrt();
                vec![(center - half, center + half)]
            }
            Decay::Exponential => {
                // ξ/2 - deg ln(1+ξ) > 40
                let mut t = 80.0f64;
                for _ in 0..8 {
                    t = 2.0 * (40.0 + (d + 1.0) * (1.0 + t).ln());
                }
                match self.weight.family {
                    WeightFamily::LaguerreMirror => vec![(-t, 0.0)],
                    WeightFamily::LaguerreHalfline if mirrored => vec![(-t, 0.0)],
                    WeightFamily::LaguerreHalfline => vec![(0.0, t)],
                    _ => vec![(-t, 0.0), (0.0, t)],
                }
            }
        }
    }

    /// `φ_0^{(order)}..φ_{k_max}^{(order)}` (or `φ_{-1}..φ_{-k_max-1}` when
    /// `mirrored`) at `x` by panel quadrature.
    fn quadrature_all(&self, x: f64, order: usize, k_max: usize, mirrored: bool) -> Result<Vec<Complex64>> {
        let compact = matches!(self.weight.decay(), Decay::Compact);
        let mut sums = vec![Complex64::new(0.0, 0.0); k_max + 1];
        let mut p = Vec::with_capacity(k_max + 1);
        let width = panel_width(x);
        for (lo, hi) in self.intervals(k_max + order, mirrored) {
            let rule = composite_rule(lo, hi, width, self.panel_budget, x)?;
            for (&node, &w) in rule.nodes.iter().zip(&rule.weights) {
                let (xi, jac) = if compact { (node.sin(), node.cos()) } else { (node, 1.0) };
                // polynomial argument and mollifier of the (possibly reflected) index
                let arg = if mirrored { -xi } else { xi };
                let g = self.mollifier.eval(arg);
                if g == 0.0 {
                    continue;
                }
                self.rc.eval_polys_into(arg, k_max, &mut p);
                let kernel = Complex64::from_polar(w * jac * g, x * xi)
                    * Complex64::new(0.0, xi).powi(order as i32);
                for (s, pk) in sums.iter_mut().zip(&p) {
                    *s += kernel * pk;
                }
            }
        }
        Ok(sums
            .into_iter()
            .enumerate()
            .map(|(k, s)| {
                let n = if mirrored { -(k as i64) - 1 } else { k as i64 };
                i_pow(n) * INV_SQRT_2PI * s
            })
            .collect())
    }
}

/// `|∫ T_n(ξ) e^{ixξ} (1-ξ²)^{-1/2} dξ - π i^n J_n(x)|`, the integral taken as
/// `∫_0^π cos(nt) e^{ix cos t} dt` by panel quadrature.
pub fn chebyshev_bessel_check(n: usize, x: f64) -> Result<f64> {
    let rule = composite_rule(0.0, PI, panel_width(x), DEFAULT_PANEL_BUDGET, x)?;
    let lhs: Complex64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| Complex64::from_polar(w * (n as f64 * t).cos(), x * t.cos()))
        .sum();
    let rhs = i_pow(n as i64) * PI * bessel::bessel_j(n, x)[n];
    Ok((lhs - rhs).norm())
}
