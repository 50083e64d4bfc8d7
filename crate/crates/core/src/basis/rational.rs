//! Rational systems: Malmquist–Takenaka functions, their series, and the
//! Lorentzian-derivative forms of the bilateral Laguerre system.

use num_complex::Complex64;

use crate::coeffs::{i_pow, CoefficientVector};

/// `√(2/π)`.
pub const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

/// `φ_n(x) = √(2/π) i^n (1+2ix)^n / (1-2ix)^{n+1}`, any `n ∈ ℤ`.
pub fn mt_function(n: i64, x: f64) -> Complex64 {
    let p = Complex64::new(1.0, 2.0 * x);
    let m = Complex64::new(1.0, -2.0 * x);
    // (1+2ix)/(1-2ix) is unimodular: use its argument for large |n|
    let ratio = p / m;
    let pw = if n.unsigned_abs() < 32 {
        ratio.powi(n as i32)
    } else {
        Complex64::from_polar(1.0, ratio.arg() * n as f64)
    };
    i_pow(n) * SQRT_2_OVER_PI * pw / m
}

/// All `φ_{lo}..=φ_{hi}` at `x`, by repeated multiplication with the
/// unimodular ratio.
pub fn mt_functions(lo: i64, hi: i64, x: f64) -> Vec<Complex64> {
    if hi < lo {
        return Vec::new();
    }
    let step = Complex64::new(0.0, 1.0) * Complex64::new(1.0, 2.0 * x) / Complex64::new(1.0, -2.0 * x);
    let mut cur = mt_function(lo, x);
    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    for k in lo..=hi {
        out.push(cur);
        // refresh periodically against drift
        if (k - lo) % 64 == 63 {
            cur = mt_function(k + 1, x);
        } else {
            cur *= step;
        }
    }
    out
}

/// Direct derivative of the closed form,
/// `φ_n' = √(2/π) i^n 2i [n (1+2ix)^{n-1}/(1-2ix)^{n+1} + (n+1)(1+2ix)^n/(1-2ix)^{n+2}]`.
pub fn mt_derivative(n: i64, x: f64) -> Complex64 {
    let p = Complex64::new(1.0, 2.0 * x);
    let m = Complex64::new(1.0, -2.0 * x);
    let nf = n as f64;
    let base = mt_function(n, x); // √(2/π) i^n p^n / m^{n+1}
    base * Complex64::new(0.0, 2.0) * (nf / p + (nf + 1.0) / m)
}

/// Differentiation coefficients of the MT system:
/// `φ_n' = -n φ_{n-1} + i(2n+1) φ_n + (n+1) φ_{n+1}`.
pub fn mt_b(n: i64) -> f64 {
    (n + 1) as f64
}

pub fn mt_c(n: i64) -> f64 {
    (2 * n + 1) as f64
}

/// `Σ_n c_n φ_n` over a window of `ℤ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MtSeries {
    pub coeffs: CoefficientVector,
}

impl MtSeries {
    pub fn new(coeffs: CoefficientVector) -> Self {
        MtSeries { coeffs }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        if self.coeffs.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let phi = mt_functions(self.coeffs.first_index, self.coeffs.last_index(), x);
        self.coeffs.values.iter().zip(&phi).map(|(c, p)| c * p).sum()
    }

    /// Exact derivative through the three-term relation (window grows by one each side).
    pub fn derivative(&self) -> MtSeries {
        let lo = self.coeffs.first_index - 1;
        let mut out = CoefficientVector::zeros(lo, self.coeffs.len() + 2);
        for n in self.coeffs.indices() {
            let c = self.coeffs.get(n).unwrap();
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            *out.get_mut(n - 1).unwrap() += c * (-(n as f64));
            *out.get_mut(n).unwrap() += c * Complex64::new(0.0, mt_c(n));
            *out.get_mut(n + 1).unwrap() += c * mt_b(n);
        }
        MtSeries::new(out)
    }

    pub fn nth_derivative(&self, order: usize) -> MtSeries {
        (0..order).fold(self.clone(), |f, _| f.derivative())
    }

    /// `∫ f conj(g) dx`, exact by orthonormality.
    pub fn inner(&self, other: &MtSeries) -> Complex64 {
        self.coeffs
            .indices()
            .filter_map(|n| other.coeffs.get(n).map(|b| self.coeffs.get(n).unwrap() * b.conj()))
            .sum()
    }
}

/// Real polynomial in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn add_scaled(&mut self, other: &Poly, factor: f64) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0.0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += factor * b;
        }
    }

    /// Index of the highest coefficient above `tol` times the largest one.
    pub fn degree(&self, tol: f64) -> Option<usize> {
        let max = self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        self.0.iter().rposition(|c| c.abs() > tol * max)
    }
}

/// `N(x) / (1 + 4x²)^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzRational {
    pub numerator: Poly,
    pub power: u32,
}

impl LorentzRational {
    pub fn eval(&self, x: f64) -> f64 {
        self.numerator.eval(x) / (1.0 + 4.0 * x * x).powi(self.power as i32)
    }

    /// `(N/q^m)' = (N' q - 8 m x N) / q^{m+1}`, `q = 1 + 4x²`.
    pub fn derivative(&self) -> LorentzRational {
        let q = Poly(vec![1.0, 0.0, 4.0]);
        let mut num = self.numerator.derivative().mul(&q);
        num.add_scaled(&Poly(vec![0.0, 1.0]).mul(&self.numerator), -8.0 * self.power as f64);
        LorentzRational {
            numerator: num,
            power: self.power + 1,
        }
    }

    /// Same function over `(1 + 4x²)^{power + extra}`.
    pub fn raised(&self, extra: u32) -> LorentzRational {
        let q = Poly(vec![1.0, 0.0, 4.0]);
        let mut num = self.numerator.clone();
        for _ in 0..extra {
            num = num.mul(&q);
        }
        LorentzRational {
            numerator: num,
            power: self.power + extra,
        }
    }
}

/// `λ_k = (i^k/√(2π)) ∫ ξ^k e^{-|ξ|/2} e^{ixξ} dξ = (2√2/√π) d^k/dx^k [1/(1+4x²)]`.
pub fn bilateral_lambda(k: usize) -> LorentzRational {
    // 2√2/√π = 2 √(2/π)
    let mut f = LorentzRational {
        numerator: Poly(vec![2.0 * SQRT_2_OVER_PI]),
        power: 1,
    };
    for _ in 0..k {
        f = f.derivative();
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mt_examples() {
        let x = 0.37;
        let phi0 = SQRT_2_OVER_PI / Complex64::new(1.0, -2.0 * x);
        assert!((mt_function(0, x) - phi0).norm() < 1e-15);
        for n in -5..5 {
            assert!((mt_function(n, 0.0) - i_pow(n) * SQRT_2_OVER_PI).norm() < 1e-15);
            let v = mt_function(n, x);
            assert!((v.norm_sqr() * (1.0 + 4.0 * x * x) - 2.0 / std::f64::consts::PI).abs() < 1e-15);
            // φ_{-n-1} = -i conj(φ_n)
            let refl = Complex64::new(0.0, -1.0) * v.conj();
            assert!((mt_function(-n - 1, x) - refl).norm() < 1e-15);
        }
        let all = mt_functions(-70, 70, 1.3);
        for (k, v) in all.iter().enumerate() {
            assert!((v - mt_function(k as i64 - 70, 1.3)).norm() < 1e-13);
        }
    }

    #[test]
    fn mt_derivative_relation() {
        for n in -6..6 {
            for &x in &[-2.0, -0.3, 0.0, 0.8, 5.0] {
                let rhs = -(n as f64) * mt_function(n - 1, x)
                    + Complex64::new(0.0, mt_c(n)) * mt_function(n, x)
                    + mt_b(n) * mt_function(n + 1, x);
                assert!((mt_derivative(n, x) - rhs).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn lambda_is_lorentzian_derivative() {
        let l0 = bilateral_lambda(0);
        assert!((l0.eval(0.5) - 2.0 * SQRT_2_OVER_PI / 2.0).abs() < 1e-15);
        let l2 = bilateral_lambda(2);
        let x: f64 = 0.3;
        let h = 1e-4;
        let fd = (l0.eval(x + h) - 2.0 * l0.eval(x) + l0.eval(x - h)) / (h * h);
        assert!((fd - l2.eval(x)).abs() < 1e-6);
        assert_eq!(l2.power, 3);
        assert!((l0.raised(2).eval(x) - l0.eval(x)).abs() < 1e-15);
    }
}
