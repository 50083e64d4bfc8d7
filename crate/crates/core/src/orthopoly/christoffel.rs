//! Polynomial (Christoffel) modification of a measure by the Sobolev
//! modifier `v_s(ξ) = Σ_{k≤s} ξ^{2k}`.
//!
//! `v_s` is monic of degree `2s` with roots `±e^{iπj/(s+1)}`, `j = 1..s`, none of
//! them real. Each linear factor `ξ - z` is applied as one LR step on the monic
//! Jacobi matrix: `T - z = L U`, `T' = U L + z`. The pivots are
//! `u_k = -π_{k+1}(z)/π_k(z)` and give
//!
//! `(ξ - z) π'_k = π_{k+1} + u_k π_k`.
//!
//! The intermediate measures are complex; after all `2s` steps the recurrence is
//! real again (up to rounding). Composing the bidiagonal relations gives
//! `v_s π^[s]_k = Σ_{d≤2s} E_{k,d} π^[0]_{k+d}`, which after normalization is
//! column `k` of the connection matrix. Since `Im z` is bounded away from
//! zero the pivots never come close to vanishing; the whole procedure costs
//! `O(N s²)` and keeps full relative accuracy where quadrature and mixed
//! moments run out of range.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

use super::RecurrenceCoeffs;

/// Level-`s` recurrence together with the band of `C̃` it connects to.
#[derive(Debug, Clone)]
pub struct Modification {
    pub level: usize,
    pub recurrence: RecurrenceCoeffs,
    /// `band[k * (2s+1) + d] = C̃_{k+d,k}`, for `k < N`; entries with `k + d >= N`
    /// are kept (they belong to rows beyond the truncation).
    pub band: Vec<f64>,
}

/// Roots of `v_s`: `ξ² = e^{2πij/(s+1)}`, `j = 1..s`.
fn modifier_roots(s: usize) -> Vec<Complex64> {
    (1..=s)
        .flat_map(|j| {
            let w = Complex64::from_polar(1.0, std::f64::consts::PI * j as f64 / (s + 1) as f64);
            [w, -w]
        })
        .collect()
}

/// Level-`s` recurrence (`N` coefficients) and connection band from the base
/// recurrence `base`, which needs at least `N + 2s + 1` coefficients.
pub fn sobolev_modification(base: &RecurrenceCoeffs, s: usize, n: usize) -> Result<Modification> {
    if n == 0 {
        return invalid("modification needs N >= 1");
    }
    let width = 2 * s + 1;
    let n0 = n + 2 * s + 1;
    if base.len() < n0 {
        return invalid(format!(
            "base recurrence has {} coefficients, level {s} at N = {n} needs {n0}",
            base.len()
        ));
    }
    // monic form: diagonal alpha_k, beta_k = b_{k-1}^2 couples k-1 and k
    let mut alpha: Vec<Complex64> = base.a[..n0].iter().map(|&a| a.into()).collect();
    let mut beta: Vec<Complex64> = std::iter::once(0.0)
        .chain(base.b[..n0 - 1].iter().map(|b| b * b))
        .map(Complex64::from)
        .collect();
    let mut e = vec![Complex64::new(0.0, 0.0); n0 * width];
    for k in 0..n0 {
        e[k * width] = 1.0.into();
    }
    let mut mu = Complex64::from(base.mu0);
    let mut u = Vec::with_capacity(n0);
    for z in modifier_roots(s) {
        let len = alpha.len();
        u.clear();
        u.push(alpha[0] - z);
        for k in 1..len {
            let prev = u[k - 1];
            u.push(alpha[k] - z - beta[k] / prev);
        }
        if let Some(k) = u.iter().position(|v| !(v.norm() > 0.0) || !v.is_finite()) {
            return Err(Error::Singular(format!("Christoffel step broke down at degree {k}")));
        }
        mu *= u[0];
        let mut na = Vec::with_capacity(len - 1);
        let mut nb = Vec::with_capacity(len - 1);
        nb.push(Complex64::new(0.0, 0.0));
        for k in 0..len - 1 {
            na.push(u[k] + beta[k + 1] / u[k] + z);
            if k > 0 {
                nb.push(beta[k] * u[k] / u[k - 1]);
            }
        }
        // E'_{k,d} = E_{k+1,d-1} + u_k E_{k,d}
        for k in 0..len - 1 {
            for d in (0..width).rev() {
                let shifted = if d > 0 { e[(k + 1) * width + d - 1] } else { 0.0.into() };
                e[k * width + d] = shifted + u[k] * e[k * width + d];
            }
        }
        alpha = na;
        beta = nb;
    }
    let a: Vec<f64> = alpha[..n].iter().map(|z| z.re).collect();
    let mut b = Vec::with_capacity(n);
    for k in 1..=n {
        let b2 = beta[k].re;
        if !(b2 > 0.0 && b2.is_finite()) {
            return Err(Error::Singular(format!(
                "modified recurrence lost positivity at degree {k}"
            )));
        }
        b.push(b2.sqrt());
    }
    let mu_s = mu.re;
    if !(mu_s > 0.0) {
        return Err(Error::Singular("modified mass is not positive".into()));
    }
    let recurrence = RecurrenceCoeffs::new(a, b, mu_s)?;

    // C̃_{k+d,k} = E_{k,d} sqrt(h0_{k+d} / hs_k), h the squared monic norms
    let mut band = vec![0.0; n * width];
    let mut log_ratio = base.mu0.ln() - mu_s.ln(); // ln(h0_k / hs_k)
    for k in 0..n {
        if k > 0 {
            log_ratio += 2.0 * (base.b[k - 1].ln() - recurrence.b[k - 1].ln());
        }
        let mut l = log_ratio;
        for d in 0..width {
            if d > 0 {
                l += 2.0 * base.b[k + d - 1].ln();
            }
            band[k * width + d] = e[k * width + d].re * (0.5 * l).exp();
        }
    }
    Ok(Modification {
        level: s,
        recurrence,
        band,
    })
}
