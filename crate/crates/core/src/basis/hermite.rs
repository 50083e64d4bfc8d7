//! Hermite-function series `Σ c_k h_k(x/c)` with exact derivatives and
//! multiplication by `x`.

use num_complex::Complex64;

use crate::coeffs::i_pow;
use crate::error::{invalid, Result};
use crate::orthopoly::{base_recurrence, gauss_rule};
use crate::weights::WeightFamily;

/// `π^{-1/4}`.
pub const PI_M14: f64 = 0.751_125_544_464_942_5;

/// Orthonormal Hermite functions `h_0(y)..h_{n_max}(y)`, `∫ h_j h_k = δ_{jk}`.
pub fn hermite_functions(n_max: usize, y: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(PI_M14 * (-0.5 * y * y).exp());
    if n_max >= 1 {
        out.push(std::f64::consts::SQRT_2 * y * out[0]);
    }
    for k in 1..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// `Σ_k coeffs[k] h_k(x / scale)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteSeries {
    pub scale: f64,
    pub coeffs: Vec<Complex64>,
}

impl HermiteSeries {
    pub fn new(scale: f64, coeffs: Vec<Complex64>) -> Self {
        HermiteSeries { scale, coeffs }
    }

    /// `(-1)^n h_n`, the level-0 Hermite system.
    pub fn level_zero(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = if n % 2 == 0 { 1.0 } else { -1.0 }.into();
        HermiteSeries::new(1.0, coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        if self.coeffs.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let h = hermite_functions(self.degree(), x / self.scale);
        self.coeffs.iter().zip(&h).map(|(c, h)| c * h).sum()
    }

    /// Exact derivative: `h_k' = √(k/2) h_{k-1} - √((k+1)/2) h_{k+1}`.
    pub fn derivative(&self) -> HermiteSeries {
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            let kf = k as f64;
            if k > 0 {
                out[k - 1] += c * (kf / 2.0).sqrt();
            }
            out[k + 1] -= c * ((kf + 1.0) / 2.0).sqrt();
        }
        let inv = 1.0 / self.scale;
        HermiteSeries::new(self.scale, out.into_iter().map(|c| c * inv).collect())
    }

    pub fn nth_derivative(&self, order: usize) -> HermiteSeries {
        (0..order).fold(self.clone(), |f, _| f.derivative())
    }

    /// Multiplication by `x`: `y h_k = √(k/2) h_{k-1} + √((k+1)/2) h_{k+1}`.
    pub fn times_x(&self) -> HermiteSeries {
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            let kf = k as f64;
            if k > 0 {
                out[k - 1] += c * (kf / 2.0).sqrt();
            }
            out[k + 1] += c * ((kf + 1.0) / 2.0).sqrt();
        }
        HermiteSeries::new(
            self.scale,
            out.into_iter().map(|c| c * self.scale).collect(),
        )
    }

    pub fn scaled(&self, factor: Complex64) -> HermiteSeries {
        HermiteSeries::new(self.scale, self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn add(&self, other: &HermiteSeries) -> Result<HermiteSeries> {
        if self.scale != other.scale {
            return invalid("Hermite series with different scales");
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = (0..n)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or(zero) + other.coeffs.get(k).copied().unwrap_or(zero)
            })
            .collect();
        Ok(HermiteSeries::new(self.scale, coeffs))
    }

    /// `∫ f conj(g) dx`, exact by orthonormality.
    pub fn inner(&self, other: &HermiteSeries) -> Result<Complex64> {
        if self.scale != other.scale {
            return invalid("Hermite series with different scales");
        }
        let s: Complex64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(s * self.scale)
    }

    /// Monomial coefficients of the polynomial part `λ(y)`, where
    /// `f = λ(x/scale) e^{-(x/scale)²/2}`.
    pub fn polynomial_part(&self) -> Vec<Complex64> {
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n.max(1)];
        // monomial coefficients of the polynomial factor of h_k
        let mut prev: Vec<f64> = Vec::new();
        let mut cur: Vec<f64> = vec![PI_M14];
        for (k, &c) in self.coeffs.iter().enumerate() {
            for (j, &m) in cur.iter().enumerate() {
                out[j] += c * m;
            }
            let kf = k as f64;
            let mut next = vec![0.0; k + 2];
            for (j, &m) in cur.iter().enumerate() {
                next[j + 1] += (2.0 / (kf + 1.0)).sqrt() * m;
            }
            for (j, &m) in prev.iter().enumerate() {
                next[j] -= (kf / (kf + 1.0)).sqrt() * m;
            }
            prev = cur;
            cur = next;
        }
        out
    }
}

/// The `H^∞` system for `v(ξ) = e^{σξ²}`, `g = e^{-(1+σ)ξ²/2}` as a Hermite
/// series in `x / √(1+σ)`. Substituting `ξ = η/√(1+σ)` in the transform gives
/// `φ_n(x) = (1/c) Σ_k d_k i^{n+k} h_k(x/c)`, `c = √(1+σ)`,
/// with `p_n(η/c) = Σ_k d_k p_k(η)` in orthonormal Hermite polynomials.
pub fn h_infinity_series(sigma: f64, n: usize) -> Result<HermiteSeries> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return invalid(format!("sigma must lie in (0, 1), got {sigma}"));
    }
    let c = (1.0 + sigma).sqrt();
    let rc = base_recurrence(&WeightFamily::Hermite, n + 2).expect("analytic");
    let rule = gauss_rule(&rc, n + 1)?;
    let mut d = vec![0.0; n + 1];
    for (&eta, &w) in rule.nodes.iter().zip(&rule.weights) {
        let pn = rc.eval_polys(eta / c, n)[n];
        let pk = rc.eval_polys(eta, n);
        for k in 0..=n {
            d[k] += w * pn * pk[k];
        }
    }
    let coeffs = d
        .iter()
        .enumerate()
        .map(|(k, &dk)| {
            if (n + k) % 2 == 1 {
                Complex64::new(0.0, 0.0)
            } else {
                i_pow((n + k) as i64) * (dk / c)
            }
        })
        .collect();
    Ok(HermiteSeries::new(c, coeffs))
}

/// The displayed `H^∞` closed form
/// `(1+σ)^{-1/2} ((1-σ)/(1+σ))^{n/2} φ_n^[0](x/√(1-σ²)) e^{σx²/(2(1-σ²))}`.
pub fn h_infinity_closed(sigma: f64, n: usize, x: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return invalid(format!("sigma must lie in (0, 1), got {sigma}"));
    }
    let q = 1.0 - sigma * sigma;
    let y = x / q.sqrt();
    // combine the Gaussians before evaluating to avoid overflow of the growing factor
    let h = hermite_functions(n, y);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let growth = (sigma * x * x / (2.0 * q)).exp();
    Ok((1.0 + sigma).powf(-0.5) * ((1.0 - sigma) / (1.0 + sigma)).powf(n as f64 / 2.0) * sign * h[n] * growth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_functions_are_orthonormal() {
        let rc = base_recurrence(&WeightFamily::Hermite, 40).unwrap();
        let rule = gauss_rule(&rc, 40).unwrap();
        // ∫ h_j h_k dx = ∫ (h_j h_k e^{x²}) e^{-x²} dx
        for j in 0..10 {
            for k in 0..10 {
                let s: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&x, &w)| {
                        let h = hermite_functions(10, x);
                        w * h[j] * h[k] * (x * x).exp()
                    })
                    .sum();
                assert!((s - if j == k { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let f = HermiteSeries::new(1.3, vec![0.3.into(), Complex64::new(0.0, 0.7), (-0.2).into(), 0.9.into()]);
        let d = f.derivative();
        for &x in &[-1.7, 0.0, 0.4, 2.2] {
            let h = 1e-5;
            let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
            assert!((fd - d.eval(x)).norm() < 1e-8);
            assert!((f.times_x().eval(x) - f.eval(x) * x).norm() < 1e-13);
        }
    }

    #[test]
    fn polynomial_part_reconstructs() {
        let f = HermiteSeries::new(1.0, vec![0.1.into(), 0.0.into(), 0.5.into(), (-0.25).into()]);
        let p = f.polynomial_part();
        for &x in &[-1.0f64, 0.3, 2.0] {
            let poly: Complex64 = p.iter().enumerate().map(|(k, c)| c * x.powi(k as i32)).sum();
            assert!((poly * (-0.5 * x * x).exp() - f.eval(x)).norm() < 1e-14);
        }
    }

    #[test]
    fn h_infinity_forms_agree() {
        for &sigma in &[0.25, 0.5, 0.75] {
            for n in 0..6 {
                let s = h_infinity_series(sigma, n).unwrap();
                for &x in &[-2.0, -0.5, 0.0, 1.0, 3.0] {
                    let a = s.eval(x);
                    let b = h_infinity_closed(sigma, n, x).unwrap();
                    assert!((a.re - b).abs() < 1e-13 && a.im.abs() < 1e-15, "sigma={sigma} n={n} x={x}");
                }
            }
        }
        let v = h_infinity_closed(0.5, 0, 0.0).unwrap();
        assert!((v - (2.0f64 / 3.0).sqrt() * PI_M14).abs() < 1e-15);
    }
}
