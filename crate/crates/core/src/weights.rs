//! Weight functions, Sobolev weight sequences and mollifiers.
//!
//! A weight family gives the base weight `w(ξ)` of the orthonormal polynomials.
//! Its `sobolev_level` `s` multiplies it by `Σ_{k=0}^s ξ^{2k}`, which is the
//! modified weight `w^[s]` of the second-kind cascade. A [`SobolevSequence`]
//! `{v_ℓ}` defines the inner product `Σ v_ℓ ∫ f^(ℓ) conj(g^(ℓ))` and its
//! generating function `v(ξ) = Σ v_ℓ ξ^{2ℓ}`. A [`Mollifier`] `g` ties the two
//! together through `v |g|² = w`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Below this distance from `ξ² = 1` the explicit sum replaces the telescoped quotient.
const TELESCOPE_GUARD: f64 = 1e-8;

/// Closed interval `[lo, hi]`, either end possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
}

impl Support {
    pub fn contains(&self, xi: f64) -> bool {
        xi >= self.lo && xi <= self.hi
    }

    pub fn is_interior(&self, xi: f64) -> bool {
        xi > self.lo && xi < self.hi
    }

    pub fn is_compact(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

/// How a weight decays, used to size truncated integration domains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// `exp(-scale (ξ - center)²)`.
    Gaussian { center: f64, scale: f64 },
    /// `exp(-|ξ|)` on the support.
    Exponential,
    /// Compact support.
    Compact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum WeightFamily {
    /// `exp(-ξ²)` on ℝ.
    Hermite,
    /// `exp(-(ξ-ρ)²)` on ℝ.
    HermiteShifted { rho: f64 },
    /// `exp(-γ ξ²)` on ℝ.
    HermiteScaled { gamma: f64 },
    /// `exp(-|ξ|)` on ℝ; at level 1 this is `(1+ξ²) exp(-|ξ|)`.
    BilateralLaguerre,
    /// Indicator of `[-1, 1]`.
    Legendre,
    /// `(1-ξ²)` on `[-1, 1]`.
    #[serde(rename = "ultraspherical_1m")]
    Ultraspherical1m,
    /// `exp(-ξ)` on `[0, ∞)`.
    LaguerreHalfline,
    /// `exp(ξ)` on `(-∞, 0]`.
    LaguerreMirror,
}

impl WeightFamily {
    pub fn name(&self) -> &'static str {
        match self {
            WeightFamily::Hermite => "hermite",
            WeightFamily::HermiteShifted { .. } => "hermite_shifted",
            WeightFamily::HermiteScaled { .. } => "hermite_scaled",
            WeightFamily::BilateralLaguerre => "bilateral_laguerre",
            WeightFamily::Legendre => "legendre",
            WeightFamily::Ultraspherical1m => "ultraspherical_1m",
            WeightFamily::LaguerreHalfline => "laguerre_halfline",
            WeightFamily::LaguerreMirror => "laguerre_mirror",
        }
    }
}

/// A base weight together with its second-kind Sobolev level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    #[serde(flatten)]
    pub family: WeightFamily,
    pub sobolev_level: u32,
}

impl WeightSpec {
    pub fn new(family: WeightFamily, sobolev_level: u32) -> Result<Self> {
        let spec = WeightSpec {
            family,
            sobolev_level,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn hermite(sobolev_level: u32) -> Self {
        WeightSpec {
            family: WeightFamily::Hermite,
            sobolev_level,
        }
    }

    pub fn legendre(sobolev_level: u32) -> Self {
        WeightSpec {
            family: WeightFamily::Legendre,
            sobolev_level,
        }
    }

    pub fn laguerre(sobolev_level: u32) -> Self {
        WeightSpec {
            family: WeightFamily::LaguerreHalfline,
            sobolev_level,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.family {
            WeightFamily::HermiteShifted { rho } if !rho.is_finite() => {
                invalid(format!("shift rho must be finite, got {rho}"))
            }
            WeightFamily::HermiteScaled { gamma } if !(gamma.is_finite() && gamma > 0.0) => {
                invalid(format!("scale gamma must be positive, got {gamma}"))
            }
            _ => Ok(()),
        }
    }

    /// Same family at another Sobolev level.
    pub fn with_level(&self, sobolev_level: u32) -> Self {
        WeightSpec {
            family: self.family.clone(),
            sobolev_level,
        }
    }

    pub fn base(&self) -> Self {
        self.with_level(0)
    }

    pub fn support(&self) -> Support {
        match self.family {
            WeightFamily::Legendre | WeightFamily::Ultraspherical1m => Support { lo: -1.0, hi: 1.0 },
            WeightFamily::LaguerreHalfline => Support {
                lo: 0.0,
                hi: f64::INFINITY,
            },
            WeightFamily::LaguerreMirror => Support {
                lo: f64::NEG_INFINITY,
                hi: 0.0,
            },
            _ => Support {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            },
        }
    }

    /// True iff `w(-ξ) = w(ξ)`.
    pub fn is_symmetric(&self) -> bool {
        match self.family {
            WeightFamily::HermiteShifted { rho } => rho == 0.0,
            WeightFamily::LaguerreHalfline | WeightFamily::LaguerreMirror => false,
            _ => true,
        }
    }

    pub fn decay(&self) -> Decay {
        match self.family {
            WeightFamily::Hermite => Decay::Gaussian {
                center: 0.0,
                scale: 1.0,
            },
            WeightFamily::HermiteShifted { rho } => Decay::Gaussian {
                center: rho,
                scale: 1.0,
            },
            WeightFamily::HermiteScaled { gamma } => Decay::Gaussian {
                center: 0.0,
                scale: gamma,
            },
            WeightFamily::BilateralLaguerre
            | WeightFamily::LaguerreHalfline
            | WeightFamily::LaguerreMirror => Decay::Exponential,
            WeightFamily::Legendre | WeightFamily::Ultraspherical1m => Decay::Compact,
        }
    }

    /// Base weight `w^[0](ξ)`; zero outside the support.
    pub fn eval_base(&self, xi: f64) -> f64 {
        if !self.support().contains(xi) {
            return 0.0;
        }
        match self.family {
            WeightFamily::Hermite => (-xi * xi).exp(),
            WeightFamily::HermiteShifted { rho } => (-(xi - rho) * (xi - rho)).exp(),
            WeightFamily::HermiteScaled { gamma } => (-gamma * xi * xi).exp(),
            WeightFamily::BilateralLaguerre => (-xi.abs()).exp(),
            WeightFamily::Legendre => 1.0,
            WeightFamily::Ultraspherical1m => 1.0 - xi * xi,
            WeightFamily::LaguerreHalfline => (-xi).exp(),
            WeightFamily::LaguerreMirror => xi.exp(),
        }
    }

    /// `ln w^[0](ξ)`, `-∞` outside the support.
    pub fn ln_base(&self, xi: f64) -> f64 {
        if !self.support().contains(xi) {
            return f64::NEG_INFINITY;
        }
        match self.family {
            WeightFamily::Hermite => -xi * xi,
            WeightFamily::HermiteShifted { rho } => -(xi - rho) * (xi - rho),
            WeightFamily::HermiteScaled { gamma } => -gamma * xi * xi,
            WeightFamily::BilateralLaguerre => -xi.abs(),
            WeightFamily::LaguerreHalfline => -xi,
            WeightFamily::LaguerreMirror => xi,
            _ => self.eval_base(xi).ln(),
        }
    }

    /// The level-`s` polynomial factor `Σ_{k=0}^s ξ^{2k}`.
    pub fn modifier(&self, xi: f64) -> f64 {
        level_modifier(self.sobolev_level, xi)
    }

    /// `w^[s](ξ) = (Σ_{k=0}^s ξ^{2k}) w(ξ)`.
    pub fn eval(&self, xi: f64) -> f64 {
        let base = self.eval_base(xi);
        if base == 0.0 {
            return 0.0;
        }
        base * self.modifier(xi)
    }

    /// `ln w^[s](ξ)`.
    pub fn ln_eval(&self, xi: f64) -> f64 {
        self.ln_base(xi) + self.modifier(xi).ln()
    }

    /// A finite interval outside of which `w^[s]` times a polynomial of the
    /// given degree is negligible.
    pub fn truncation(&self, degree: usize) -> (f64, f64) {
        let d = degree as f64 + 2.0 * self.sobolev_level as f64;
        let support = self.support();
        match self.decay() {
            Decay::Gaussian { center, scale } => {
                let half = (12.0 + (2.0 * d).sqrt()) / scale.sqrt();
                (center - half, center + half)
            }
            Decay::Exponential => {
                let half = 90.0 + 10.0 * d;
                (support.lo.max(-half), support.hi.min(half))
            }
            Decay::Compact => (support.lo, support.hi),
        }
    }
}

/// `Σ_{k=0}^s ξ^{2k}`, telescoped as `(1 - ξ^{2(s+1)})/(1 - ξ²)` away from `ξ = ±1`.
pub fn level_modifier(s: u32, xi: f64) -> f64 {
    if s == 0 {
        return 1.0;
    }
    let x2 = xi * xi;
    let denom = 1.0 - x2;
    if denom.abs() > TELESCOPE_GUARD {
        (1.0 - x2.powi(s as i32 + 1)) / denom
    } else {
        let mut sum = 0.0;
        let mut term = 1.0;
        for _ in 0..=s {
            sum += term;
            term *= x2;
        }
        sum
    }
}

/// Evaluate `w^[s](ξ)`.
pub fn eval_weight(spec: &WeightSpec, xi: f64) -> f64 {
    spec.eval(xi)
}

/// Non-negative sequence `{v_ℓ}` defining a Sobolev inner product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum SobolevSequence {
    /// `v_ℓ = 1` for `ℓ ≤ s`, zero otherwise: the `H^s` inner product.
    StandardHs { s: u32 },
    /// `v_ℓ = σ^ℓ / ℓ!`, so that `v(ξ) = exp(σ ξ²)`.
    Exponential { sigma: f64 },
    /// A finite list `v_0, v_1, ...`; later terms are zero.
    Custom { terms: Vec<f64> },
}

impl SobolevSequence {
    pub fn standard(s: u32) -> Self {
        SobolevSequence::StandardHs { s }
    }

    pub fn exponential(sigma: f64) -> Result<Self> {
        let seq = SobolevSequence::Exponential { sigma };
        seq.validate()?;
        Ok(seq)
    }

    pub fn custom(terms: Vec<f64>) -> Result<Self> {
        let seq = SobolevSequence::Custom { terms };
        seq.validate()?;
        Ok(seq)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SobolevSequence::StandardHs { .. } => Ok(()),
            SobolevSequence::Exponential { sigma } => {
                if *sigma > 0.0 && *sigma < 1.0 {
                    Ok(())
                } else {
                    invalid(format!("exponential sequence needs sigma in (0,1), got {sigma}"))
                }
            }
            SobolevSequence::Custom { terms } => {
                if terms.iter().any(|t| !t.is_finite() || *t < 0.0) {
                    return invalid("Sobolev sequence terms must be finite and non-negative");
                }
                if terms.iter().sum::<f64>() <= 0.0 {
                    return invalid("Sobolev sequence must have a positive term");
                }
                Ok(())
            }
        }
    }

    /// `v_ℓ`.
    pub fn term(&self, l: usize) -> f64 {
        match self {
            SobolevSequence::StandardHs { s } => {
                if l <= *s as usize {
                    1.0
                } else {
                    0.0
                }
            }
            SobolevSequence::Exponential { sigma } => {
                let mut t = 1.0;
                for k in 1..=l {
                    t *= sigma / k as f64;
                }
                t
            }
            SobolevSequence::Custom { terms } => terms.get(l).copied().unwrap_or(0.0),
        }
    }

    /// Highest derivative order with a nonzero term, `None` for infinite sequences.
    pub fn max_order(&self) -> Option<usize> {
        match self {
            SobolevSequence::StandardHs { s } => Some(*s as usize),
            SobolevSequence::Exponential { .. } => None,
            SobolevSequence::Custom { terms } => terms.iter().rposition(|t| *t > 0.0),
        }
    }

    /// `ln v(ξ)`; finite wherever `v(ξ) > 0`.
    pub fn ln_eval(&self, xi: f64) -> f64 {
        match self {
            SobolevSequence::StandardHs { s } => level_modifier(*s, xi).ln(),
            SobolevSequence::Exponential { sigma } => sigma * xi * xi,
            SobolevSequence::Custom { terms } => {
                let x2 = xi * xi;
                terms.iter().rev().fold(0.0, |acc, t| acc * x2 + t).ln()
            }
        }
    }

    /// `v(ξ) = Σ v_ℓ ξ^{2ℓ}`.
    pub fn eval(&self, xi: f64) -> Result<f64> {
        let value = match self {
            SobolevSequence::StandardHs { s } => level_modifier(*s, xi),
            SobolevSequence::Exponential { sigma } => (sigma * xi * xi).exp(),
            SobolevSequence::Custom { terms } => {
                let x2 = xi * xi;
                terms.iter().rev().fold(0.0, |acc, t| acc * x2 + t)
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::DivergentSeries { xi })
        }
    }
}

/// Evaluate `v(ξ)`.
pub fn eval_v(seq: &SobolevSequence, xi: f64) -> Result<f64> {
    seq.eval(xi)
}

/// The canonical mollifier `g = sqrt(w/v)` (zero phase), optionally
/// multiplied by `(1 + ε ξ²)` to break the orthonormality condition on purpose.
#[derive(Debug, Clone, PartialEq)]
pub struct Mollifier {
    weight: WeightSpec,
    seq: SobolevSequence,
    perturbation: f64,
}

impl Mollifier {
    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    pub fn sequence(&self) -> &SobolevSequence {
        &self.seq
    }

    /// The phase `ϑ` is identically zero.
    pub fn canonical_phase(&self) -> bool {
        true
    }

    pub fn perturbation(&self) -> f64 {
        self.perturbation
    }

    /// Copy with `g(ξ)` replaced by `g(ξ)(1 + eps ξ²)`.
    pub fn perturbed(&self, eps: f64) -> Self {
        Mollifier {
            perturbation: eps,
            ..self.clone()
        }
    }

    pub fn eval(&self, xi: f64) -> f64 {
        let lnw = self.weight.ln_eval(xi);
        if lnw == f64::NEG_INFINITY {
            return 0.0;
        }
        let g = (0.5 * (lnw - self.seq.ln_eval(xi))).exp();
        g * (1.0 + self.perturbation * xi * xi)
    }

    /// `v(ξ)|g(ξ)|² / w^[0](ξ)`, the polynomial-like factor seen by a quadrature
    /// rule for the base weight. Equals the level modifier when `v|g|² = w`.
    pub fn density_over_base(&self, xi: f64) -> f64 {
        let lnw0 = self.weight.ln_base(xi);
        if lnw0 == f64::NEG_INFINITY {
            return 0.0;
        }
        let g_unpert = (0.5 * (self.weight.ln_eval(xi) - self.seq.ln_eval(xi))).exp();
        let factor = 1.0 + self.perturbation * xi * xi;
        // v g² / w0 = exp(ln v + ln w - ln v - ln w0) * factor² without overflow
        let ratio = (self.seq.ln_eval(xi) + 2.0 * g_unpert.ln() - lnw0).exp();
        ratio * factor * factor
    }

    /// Largest `|v(ξ)|g(ξ)|² - w(ξ)|` over `points` equispaced samples of the
    /// truncated support, relative to the largest sampled `w`.
    pub fn residual(&self, points: usize) -> f64 {
        let (lo, hi) = self.weight.truncation(0);
        let (lo, hi) = (lo.max(-60.0), hi.min(60.0));
        let mut max_w = 0.0f64;
        let mut max_r = 0.0f64;
        for k in 0..points {
            let xi = lo + (hi - lo) * (k as f64) / ((points - 1) as f64);
            let w = self.weight.eval(xi);
            let v = match self.seq.eval(xi) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let g = self.eval(xi);
            max_w = max_w.max(w);
            max_r = max_r.max((v * g * g - w).abs());
        }
        if max_w == 0.0 {
            max_r
        } else {
            max_r / max_w
        }
    }
}

/// Canonical mollifier `g = sqrt(w/v)` for the weight and sequence.
pub fn mollifier_for(spec: &WeightSpec, seq: &SobolevSequence) -> Result<Mollifier> {
    spec.validate()?;
    seq.validate()?;
    // v is even with v(0) = v_0, and only vanishes at 0 when v_0 = 0.
    if seq.term(0) == 0.0 && spec.support().is_interior(0.0) {
        return Err(Error::VanishingSobolevWeight { xi: 0.0 });
    }
    Ok(Mollifier {
        weight: spec.clone(),
        seq: seq.clone(),
        perturbation: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weight_examples() {
        assert_eq!(eval_weight(&WeightSpec::hermite(0), 0.0), 1.0);
        assert_relative_eq!(
            eval_weight(&WeightSpec::hermite(1), 1.0),
            2.0 * (-1.0f64).exp(),
            max_relative = 1e-15
        );
        assert_eq!(eval_weight(&WeightSpec::legendre(1), 2.0), 0.0);
    }

    #[test]
    fn telescoped_modifier_matches_sum_near_one() {
        for s in 0..6u32 {
            for &xi in &[1.0f64, -1.0, 1.0 + 1e-9, 1.0 - 3e-9, 0.7, 1.3, 3.0] {
                let direct: f64 = (0..=s).map(|k| xi.powi(2 * k as i32)).sum();
                assert_relative_eq!(level_modifier(s, xi), direct, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn ultraspherical_modified_weight_is_telescoped_product() {
        for s in 0..5u32 {
            let spec = WeightSpec::new(WeightFamily::Ultraspherical1m, s).unwrap();
            for k in 0..=200 {
                let xi = -1.0 + k as f64 / 100.0;
                let expected = 1.0 - xi.powi(2 * s as i32 + 2);
                assert!((spec.eval(xi) - expected).abs() < 1e-14, "s={s} xi={xi}");
            }
        }
    }

    #[test]
    fn v_examples() {
        assert_eq!(eval_v(&SobolevSequence::standard(1), 3.0).unwrap(), 10.0);
        let e = SobolevSequence::exponential(0.5).unwrap();
        assert_relative_eq!(eval_v(&e, 1.0).unwrap(), 0.5f64.exp(), max_relative = 1e-15);
        assert_eq!(eval_v(&SobolevSequence::standard(0), 17.0).unwrap(), 1.0);
    }

    #[test]
    fn v_divergence_is_reported() {
        let e = SobolevSequence::exponential(0.9).unwrap();
        assert!(matches!(e.eval(40.0), Err(Error::DivergentSeries { .. })));
    }

    #[test]
    fn sequence_validation() {
        assert!(SobolevSequence::exponential(1.0).is_err());
        assert!(SobolevSequence::custom(vec![0.0, 0.0]).is_err());
        assert!(SobolevSequence::custom(vec![1.0, -1.0]).is_err());
        let c = SobolevSequence::custom(vec![1.0, 0.0, 2.0]).unwrap();
        assert_eq!(c.max_order(), Some(2));
        assert_eq!(c.eval(2.0).unwrap(), 1.0 + 2.0 * 16.0);
        let e = SobolevSequence::exponential(0.5).unwrap();
        assert_relative_eq!(e.term(3), 0.125 / 6.0, max_relative = 1e-15);
    }

    #[test]
    fn mollifier_examples() {
        let h1 = mollifier_for(&WeightSpec::hermite(0), &SobolevSequence::standard(1)).unwrap();
        for &xi in &[0.0, 0.5, -2.0, 3.0] {
            let expected = (-xi * xi / 2.0f64).exp() / (1.0 + xi * xi).sqrt();
            assert_relative_eq!(h1.eval(xi), expected, max_relative = 1e-14);
        }
        let l2 = mollifier_for(&WeightSpec::legendre(0), &SobolevSequence::standard(0)).unwrap();
        assert_eq!(l2.eval(0.3), 1.0);
        assert_eq!(l2.eval(1.5), 0.0);
        let sigma = 0.25;
        let hinf = mollifier_for(
            &WeightSpec::hermite(0),
            &SobolevSequence::exponential(sigma).unwrap(),
        )
        .unwrap();
        for &xi in &[0.0, 1.0, -2.5] {
            let expected = (-(1.0 + sigma) * xi * xi / 2.0f64).exp();
            assert_relative_eq!(hinf.eval(xi), expected, max_relative = 1e-14);
        }
    }

    #[test]
    fn mollifier_rejects_vanishing_v() {
        let seq = SobolevSequence::custom(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            mollifier_for(&WeightSpec::hermite(0), &seq),
            Err(Error::VanishingSobolevWeight { .. })
        ));
        // 0 is a boundary point of the half-line, so it is allowed there
        assert!(mollifier_for(&WeightSpec::laguerre(0), &seq).is_ok());
    }

    fn shipped_pairs() -> Vec<(WeightSpec, SobolevSequence)> {
        let mut out = Vec::new();
        for s in 0..4 {
            out.push((WeightSpec::hermite(s), SobolevSequence::standard(s)));
            out.push((WeightSpec::hermite(0), SobolevSequence::standard(s)));
            out.push((WeightSpec::legendre(s), SobolevSequence::standard(s)));
            out.push((WeightSpec::laguerre(s), SobolevSequence::standard(s)));
            out.push((
                WeightSpec::new(WeightFamily::BilateralLaguerre, s).unwrap(),
                SobolevSequence::standard(s),
            ));
            out.push((
                WeightSpec::new(WeightFamily::Ultraspherical1m, s).unwrap(),
                SobolevSequence::standard(s),
            ));
        }
        for sigma in [0.25, 0.5, 0.75] {
            out.push((
                WeightSpec::hermite(0),
                SobolevSequence::exponential(sigma).unwrap(),
            ));
        }
        out.push((
            WeightSpec::new(WeightFamily::HermiteShifted { rho: 1.0 }, 0).unwrap(),
            SobolevSequence::standard(0),
        ));
        out
    }

    #[test]
    fn mollifier_residual_vanishes_for_shipped_pairs() {
        for (spec, seq) in shipped_pairs() {
            let g = mollifier_for(&spec, &seq).unwrap();
            let r = g.residual(1000);
            assert!(r < 1e-12, "{spec:?} {seq:?}: residual {r}");
        }
    }

    #[test]
    fn mollifier_decays_faster_than_polynomials() {
        for (spec, seq) in shipped_pairs() {
            if spec.decay() == Decay::Exponential {
                continue;
            }
            let g = mollifier_for(&spec, &seq).unwrap();
            for k in 0..=8 {
                for &xi in &[-50.0f64, 50.0] {
                    let v = (xi.powi(k) * g.eval(xi)).abs();
                    assert!(v < 1e-10, "{spec:?} k={k} xi={xi}: {v}");
                }
            }
        }
    }

    #[test]
    fn symmetric_specs_are_even() {
        for (spec, _) in shipped_pairs() {
            if !spec.is_symmetric() {
                continue;
            }
            for k in 0..50 {
                let xi = 0.137 * k as f64;
                assert_eq!(spec.eval(xi), spec.eval(-xi));
            }
        }
    }

    #[test]
    fn json_shapes() {
        let spec = WeightSpec::new(WeightFamily::HermiteShifted { rho: 1.5 }, 2).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            text,
            r#"{"family":"hermite_shifted","params":{"rho":1.5},"sobolev_level":2}"#
        );
        let back: WeightSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        let plain: WeightSpec =
            serde_json::from_str(r#"{"family":"legendre","sobolev_level":1}"#).unwrap();
        assert_eq!(plain, WeightSpec::legendre(1));
        let seq = SobolevSequence::exponential(0.5).unwrap();
        assert_eq!(
            serde_json::to_string(&seq).unwrap(),
            r#"{"kind":"exponential","params":{"sigma":0.5}}"#
        );
    }
}
