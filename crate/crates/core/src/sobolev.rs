//! Sobolev inner products `⟨f, g⟩_v = Σ_ℓ v_ℓ ∫ f^{(ℓ)} conj(g^{(ℓ)}) dx` and
//! Gram matrices of the function systems.
//!
//! The Fourier side uses Parseval: `⟨φ_n, φ_m⟩_v = i^{n-m} ∫ p_n p_m v |g|² dξ`,
//! which is a polynomial against the base weight when `v|g|² = w^[s]` and so is
//! integrated exactly by a Gauss rule. The physical side differentiates the
//! functions themselves and is a consistency check only.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{BasisSystem, IndexSet, PhysicalDecay};
use crate::coeffs::i_pow;
use crate::error::{invalid, Error, Result};
use crate::orthopoly::base_rule;
use crate::weights::SobolevSequence;

/// Largest tolerated `|v|g|²/w - 1|` on the Gauss nodes.
pub const MOLLIFIER_TOLERANCE: f64 = 1e-10;

/// Derivative terms kept for infinite sequences on the physical side.
pub const DEFAULT_SERIES_TERMS: usize = 30;

/// Midpoint nodes of the `θ` grid for rational-type systems.
const THETA_POINTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GramMethod {
    Fourier,
    Physical,
}

impl std::str::FromStr for GramMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fourier" => Ok(GramMethod::Fourier),
            "physical" => Ok(GramMethod::Physical),
            other => invalid(format!("unknown Gram method '{other}' (fourier, physical)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub system: String,
    pub sequence: SobolevSequence,
    pub method: GramMethod,
    /// `N`: indices `0..N` on `ℤ₊`, `-N..N` on `ℤ`.
    pub truncation: usize,
    pub first_index: i64,
    pub last_index: i64,
    pub max_off_diagonal: f64,
    pub max_diagonal_deviation: f64,
    /// Gauss points (Fourier) or physical sample points per derivative order.
    pub quadrature_points: usize,
    /// Derivative orders summed on the physical side.
    pub derivative_terms: Option<usize>,
}

impl GramReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_off_diagonal.max(self.max_diagonal_deviation)
    }

    fn from_matrix(
        sys: &BasisSystem,
        seq: &SobolevSequence,
        method: GramMethod,
        truncation: usize,
        indices: &[i64],
        gram: &[Vec<Complex64>],
        points: usize,
        terms: Option<usize>,
    ) -> Self {
        let mut off = 0.0f64;
        let mut diag = 0.0f64;
        for (i, row) in gram.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i == j {
                    diag = diag.max((v - 1.0).norm());
                } else {
                    off = off.max(v.norm());
                }
            }
        }
        GramReport {
            system: sys.kind().name(),
            sequence: seq.clone(),
            method,
            truncation,
            first_index: indices.first().copied().unwrap_or(0),
            last_index: indices.last().copied().unwrap_or(-1),
            max_off_diagonal: off,
            max_diagonal_deviation: diag,
            quadrature_points: points,
            derivative_terms: terms,
        }
    }
}

/// Indices of a Gram matrix of truncation `n`.
pub fn gram_indices(sys: &BasisSystem, n: usize) -> Result<Vec<i64>> {
    if n == 0 {
        return invalid("Gram truncation must be at least 1");
    }
    let idx: Vec<i64> = match sys.index_set() {
        IndexSet::Naturals => (0..n as i64).collect(),
        IndexSet::Integers => (-(n as i64)..n as i64).collect(),
    };
    let (lo, hi) = sys.index_range();
    if idx[0] < lo || *idx.last().unwrap() > hi {
        return invalid(format!(
            "system built to n_max = {} cannot supply a Gram matrix of truncation {n}",
            sys.n_max()
        ));
    }
    Ok(idx)
}

/// `v(ξ)|g(ξ)|²/w^[0](ξ)` for the sequence `seq` and the system's mollifier.
fn fourier_density(sys: &BasisSystem, seq: &SobolevSequence, xi: f64) -> f64 {
    let g = sys.mollifier().eval(xi);
    let lnw0 = sys.weight().ln_base(xi);
    if g == 0.0 || lnw0 == f64::NEG_INFINITY {
        return 0.0;
    }
    (seq.ln_eval(xi) + 2.0 * g.ln() - lnw0).exp()
}

/// Fourier-side Gram matrix over `indices`; `check` rejects a mollifier that
/// does not satisfy `v|g|² = w^[s]` for `seq`.
fn fourier_gram(sys: &BasisSystem, seq: &SobolevSequence, indices: &[i64], check: bool) -> Result<(Vec<Vec<Complex64>>, usize)> {
    let k_max = indices.iter().map(|&n| if n >= 0 { n } else { -n - 1 }).max().unwrap_or(0) as usize;
    let s = sys.weight().sobolev_level as usize;
    // room for the level modifier and a (1 + εξ²)² perturbation
    let m = k_max + s + 4;
    let rule = base_rule(sys.weight(), m)?;
    let rc = sys.recurrence();
    // integrals over the positive block; the mirrored block is identical
    let mut ints = vec![vec![0.0f64; k_max + 1]; k_max + 1];
    let mut p = Vec::with_capacity(k_max + 1);
    let mut mismatch = 0.0f64;
    for (&xi, &w) in rule.nodes.iter().zip(&rule.weights) {
        let d = fourier_density(sys, seq, xi);
        if check {
            let expected = crate::weights::level_modifier(s as u32, xi);
            mismatch = mismatch.max((d - expected).abs() / expected);
        }
        rc.eval_polys_into(xi, k_max, &mut p);
        for j in 0..=k_max {
            let wj = w * d * p[j];
            for k in j..=k_max {
                ints[j][k] += wj * p[k];
            }
        }
    }
    if check && !(mismatch <= MOLLIFIER_TOLERANCE) {
        return Err(Error::MollifierMismatch { residual: mismatch });
    }
    let zero = Complex64::new(0.0, 0.0);
    let gram = indices
        .iter()
        .map(|&n| {
            indices
                .iter()
                .map(|&m| {
                    if (n >= 0) != (m >= 0) {
                        return zero; // disjoint Fourier supports
                    }
                    let (j, k) = if n >= 0 { (n, m) } else { (-n - 1, -m - 1) };
                    let (j, k) = (j.min(k) as usize, j.max(k) as usize);
                    i_pow(n - m) * ints[j][k]
                })
                .collect()
        })
        .collect();
    Ok((gram, m))
}

/// `⟨φ_n, φ_m⟩_v` on the Fourier side.
pub fn sobolev_ip_fourier(sys: &BasisSystem, seq: &SobolevSequence, n: i64, m: i64) -> Result<Complex64> {
    let (lo, hi) = sys.index_range();
    for k in [n, m] {
        if k < lo || k > hi {
            return invalid(format!("index {k} outside the window {lo}..={hi}"));
        }
    }
    let (g, _) = fourier_gram(sys, seq, &[n, m], true)?;
    Ok(g[0][1])
}

/// Physical-side nodes and weights on the real line.
fn physical_rule(sys: &BasisSystem, degree: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    match sys.physical_decay() {
        PhysicalDecay::Gaussian { width } => {
            let half = width * (12.0 + (2.0 * degree as f64).sqrt());
            let h = width / 8.0;
            let count = (2.0 * half / h).ceil() as usize + 1;
            let h = 2.0 * half / (count - 1) as f64;
            let xs = (0..count).map(|k| -half + k as f64 * h).collect();
            Ok((xs, vec![h; count]))
        }
        PhysicalDecay::Algebraic => {
            if !sys.has_closed_form() {
                return Err(Error::Unsupported(format!(
                    "physical-side inner products of {} need closed forms",
                    sys.kind().name()
                )));
            }
            // x = tan(θ/2)/2, dx = sec²(θ/2)/4 dθ
            let dt = 2.0 * PI / THETA_POINTS as f64;
            let mut xs = Vec::with_capacity(THETA_POINTS);
            let mut ws = Vec::with_capacity(THETA_POINTS);
            for k in 0..THETA_POINTS {
                let t = -PI + (k as f64 + 0.5) * dt;
                let c = (t / 2.0).cos();
                xs.push(0.5 * (t / 2.0).tan());
                ws.push(dt / (4.0 * c * c));
            }
            Ok((xs, ws))
        }
        PhysicalDecay::Slow => Err(Error::Unsupported(format!(
            "{} decays like 1/x; physical-side inner products are not computed",
            sys.kind().name()
        ))),
    }
}

/// Derivative orders and weights `v_ℓ` used on the physical side.
fn physical_terms(seq: &SobolevSequence, series_terms: usize) -> Vec<(usize, f64)> {
    let top = seq.max_order().unwrap_or(series_terms);
    (0..=top).map(|l| (l, seq.term(l))).filter(|(_, v)| *v > 0.0).collect()
}

/// Physical-side Gram matrix over `indices`; infinite sequences are
/// truncated after `series_terms` derivative orders.
pub fn physical_gram(
    sys: &BasisSystem,
    seq: &SobolevSequence,
    indices: &[i64],
    series_terms: usize,
) -> Result<(Vec<Vec<Complex64>>, usize)> {
    let terms = physical_terms(seq, series_terms);
    let top = terms.last().map(|t| t.0).unwrap_or(0);
    let k_max = indices.iter().map(|n| n.unsigned_abs() as usize).max().unwrap_or(0);
    let (xs, ws) = physical_rule(sys, k_max + top + 2)?;
    let size = indices.len();
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); size]; size];
    let mut vals = vec![vec![Complex64::new(0.0, 0.0); xs.len()]; size];
    for &(l, vl) in &terms {
        if sys.has_closed_form() {
            for (i, &n) in indices.iter().enumerate() {
                for (k, &x) in xs.iter().enumerate() {
                    vals[i][k] = sys.derivative(n, l, x)?;
                }
            }
        } else {
            for (k, &x) in xs.iter().enumerate() {
                let window = sys.eval_quadrature_window(x, l)?;
                for (i, &n) in indices.iter().enumerate() {
                    vals[i][k] = window.get(n).expect("index checked");
                }
            }
        }
        for i in 0..size {
            for j in i..size {
                let s: Complex64 = vals[i]
                    .iter()
                    .zip(&vals[j])
                    .zip(&ws)
                    .map(|((a, b), w)| a * b.conj() * w)
                    .sum();
                gram[i][j] += vl * s;
                if i != j {
                    gram[j][i] += vl * s.conj();
                }
            }
        }
    }
    Ok((gram, xs.len()))
}

/// `⟨φ_n, φ_m⟩_v` on the physical side.
pub fn sobolev_ip_physical(sys: &BasisSystem, seq: &SobolevSequence, n: i64, m: i64, series_terms: usize) -> Result<Complex64> {
    let (g, _) = physical_gram(sys, seq, &[n, m], series_terms)?;
    Ok(g[0][1])
}

/// Gram matrix of truncation `n` by either method, reduced to a report.
pub fn gram_matrix(sys: &BasisSystem, seq: &SobolevSequence, n: usize, method: GramMethod) -> Result<GramReport> {
    let indices = gram_indices(sys, n)?;
    match method {
        GramMethod::Fourier => {
            let (g, pts) = fourier_gram(sys, seq, &indices, true)?;
            Ok(GramReport::from_matrix(sys, seq, method, n, &indices, &g, pts, None))
        }
        GramMethod::Physical => {
            let (g, pts) = physical_gram(sys, seq, &indices, DEFAULT_SERIES_TERMS)?;
            let terms = physical_terms(seq, DEFAULT_SERIES_TERMS).len();
            Ok(GramReport::from_matrix(sys, seq, method, n, &indices, &g, pts, Some(terms)))
        }
    }
}

/// Fourier-side Gram of the system with mollifier `g (1 + eps ξ²)`, which
/// violates `v|g|² = w` and so must not be orthonormal.
pub fn perturbed_gram(sys: &BasisSystem, eps: f64, n: usize) -> Result<GramReport> {
    let indices = gram_indices(sys, n)?;
    let p = sys.perturbed(eps);
    let (g, pts) = fourier_gram(&p, sys.sequence(), &indices, false)?;
    Ok(GramReport::from_matrix(&p, sys.sequence(), GramMethod::Fourier, n, &indices, &g, pts, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::SystemKind;
    use crate::weights::WeightSpec;

    #[test]
    fn hermite_level_one_ground_state() {
        let sys = BasisSystem::new(SystemKind::HermiteClosed { s: 1 }, 4).unwrap();
        let h1 = SobolevSequence::standard(1);
        let v = sobolev_ip_physical(&sys, &h1, 0, 0, DEFAULT_SERIES_TERMS).unwrap();
        assert!((v - 1.0).norm() < 1e-12);
        // ∫φ₀² alone is 2/3
        let l2 = sobolev_ip_physical(&sys, &SobolevSequence::standard(0), 0, 0, 0).unwrap();
        assert!((l2 - 2.0 / 3.0).norm() < 1e-12);
        let f = sobolev_ip_fourier(&sys, &h1, 2, 2).unwrap();
        assert!((f - 1.0).norm() < 1e-13);
        assert!(sobolev_ip_fourier(&sys, &h1, 1, 3).unwrap().norm() < 1e-13);
    }

    #[test]
    fn fourier_grams_are_identities() {
        let cases = [
            (SystemKind::HermiteClosed { s: 1 }, 12),
            (SystemKind::BilateralLaguerre1, 12),
            (SystemKind::MalmquistTakenaka, 32),
            (SystemKind::SobolevLaguerre2nd { s: 2 }, 12),
            (SystemKind::LegendreCascade2nd { s: 3 }, 12),
        ];
        for (kind, n) in cases {
            let sys = BasisSystem::new(kind.clone(), n).unwrap();
            let seq = sys.sequence().clone();
            let r = gram_matrix(&sys, &seq, n, GramMethod::Fourier).unwrap();
            assert!(r.max_deviation() < 1e-10, "{}: {r:?}", kind.name());
        }
    }

    #[test]
    fn physical_matches_fourier() {
        let cases = [
            SystemKind::HermiteClosed { s: 1 },
            SystemKind::MalmquistTakenaka,
            SystemKind::SobolevLaguerre2nd { s: 1 },
            SystemKind::BilateralLaguerre1,
            SystemKind::HermiteShifted0 { rho: 0.6 },
        ];
        for kind in cases {
            let sys = BasisSystem::new(kind.clone(), 5).unwrap();
            let seq = sys.sequence().clone();
            let r = gram_matrix(&sys, &seq, 4, GramMethod::Physical).unwrap();
            assert!(r.max_deviation() < 1e-8, "{}: {r:?}", kind.name());
        }
    }

    #[test]
    fn mismatched_sequence_is_rejected() {
        let sys = BasisSystem::new(SystemKind::HermiteClosed { s: 1 }, 4).unwrap();
        let err = gram_matrix(&sys, &SobolevSequence::standard(2), 3, GramMethod::Fourier).unwrap_err();
        assert!(matches!(err, Error::MollifierMismatch { .. }));
        let r = perturbed_gram(&sys, 0.1, 5).unwrap();
        assert!(r.max_off_diagonal > 1e-3);
    }

    #[test]
    fn first_kind_quadrature_system() {
        let kind = SystemKind::Quadrature {
            weight: WeightSpec::hermite(0),
            sequence: SobolevSequence::standard(1),
        };
        let sys = BasisSystem::new(kind, 6).unwrap();
        let r = gram_matrix(&sys, &SobolevSequence::standard(1), 6, GramMethod::Fourier).unwrap();
        assert!(r.max_deviation() < 1e-12);
        assert!(matches!(
            gram_matrix(&sys, &SobolevSequence::standard(1), 2, GramMethod::Physical),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn legendre_physical_side_is_unsupported() {
        let sys = BasisSystem::new(SystemKind::LegendreBessel, 3).unwrap();
        assert!(matches!(
            gram_matrix(&sys, &SobolevSequence::standard(0), 2, GramMethod::Physical),
            Err(Error::Unsupported(_))
        ));
    }
}
