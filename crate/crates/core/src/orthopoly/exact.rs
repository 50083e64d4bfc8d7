//! Exact rational moments and the Chebyshev algorithm.
//!
//! Every moment of a shipped weight is a rational number times a common
//! transcendental unit, so recurrence coefficients come out as exact
//! rationals (`a_n`, `b_n²`). This path is slow and serves as a test oracle.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::weights::{WeightFamily, WeightSpec};

/// Expression swell makes the rational path impractical beyond this size.
pub const MAX_EXACT_N: usize = 24;

/// Transcendental factor shared by all moments of a weight.
#[derive(Debug, Clone, PartialEq)]
pub enum MomentUnit {
    One,
    SqrtPi,
    /// `sqrt(π/γ)`.
    SqrtPiOverGamma(BigRational),
}

impl MomentUnit {
    pub fn value(&self) -> f64 {
        match self {
            MomentUnit::One => 1.0,
            MomentUnit::SqrtPi => std::f64::consts::PI.sqrt(),
            MomentUnit::SqrtPiOverGamma(g) => (std::f64::consts::PI / to_f64(g)).sqrt(),
        }
    }
}

impl fmt::Display for MomentUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentUnit::One => write!(f, "1"),
            MomentUnit::SqrtPi => write!(f, "sqrt(pi)"),
            MomentUnit::SqrtPiOverGamma(g) => write!(f, "sqrt(pi/({g}))"),
        }
    }
}

/// Moments `μ_j = values[j] · unit`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMoments {
    pub unit: MomentUnit,
    pub values: Vec<BigRational>,
}

impl ExactMoments {
    pub fn to_f64(&self) -> Vec<f64> {
        let u = self.unit.value();
        self.values.iter().map(|v| to_f64(v) * u).collect()
    }
}

/// Exact monic recurrence `π_{k+1} = (ξ - α_k) π_k - β_k π_{k-1}`,
/// with `β_0` the rational part of `μ_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactRecurrence {
    pub unit: MomentUnit,
    pub alpha: Vec<BigRational>,
    pub beta: Vec<BigRational>,
}

impl ExactRecurrence {
    /// Number of orthonormal coefficients `(a_n, b_n)` available.
    pub fn len(&self) -> usize {
        self.beta.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `b_n² = β_{n+1}`.
    pub fn b_squared(&self, n: usize) -> &BigRational {
        &self.beta[n + 1]
    }

    /// Squared norm of the monic `π_n`, as a rational multiple of the unit.
    pub fn monic_norm(&self, n: usize) -> BigRational {
        self.beta[..=n].iter().fold(BigRational::one(), |acc, b| acc * b)
    }

    /// Coefficients (ascending powers) of the monic polynomials `π_0..π_n`.
    pub fn monic_polys(&self, n: usize) -> Vec<Vec<BigRational>> {
        let mut polys: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
        for k in 0..n {
            let cur = &polys[k];
            let mut next = vec![BigRational::zero(); k + 2];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= &self.alpha[k] * c;
            }
            if k > 0 {
                for (i, c) in polys[k - 1].iter().enumerate() {
                    next[i] -= &self.beta[k] * c;
                }
            }
            polys.push(next);
        }
        polys
    }
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn binomial(n: usize, k: usize) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn exact_float(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::InvalidArgument(format!("parameter {x} is not finite")))
}

/// `∫ ξ^{2m} e^{-ξ²} dξ / √π = (2m)! / (4^m m!)`.
fn hermite_even(m: usize) -> BigRational {
    BigRational::new(
        factorial(2 * m),
        BigInt::from(4).pow(m as u32) * factorial(m),
    )
}

/// Base-weight moments `μ_0..μ_{j_max}` (level 0).
fn base_moments(family: &WeightFamily, j_max: usize) -> Result<ExactMoments> {
    let zero = BigRational::zero;
    let (unit, values): (MomentUnit, Vec<BigRational>) = match family {
        WeightFamily::Hermite => (
            MomentUnit::SqrtPi,
            (0..=j_max)
                .map(|j| if j % 2 == 0 { hermite_even(j / 2) } else { zero() })
                .collect(),
        ),
        WeightFamily::HermiteScaled { gamma } => {
            let g = exact_float(*gamma)?;
            let mut values = Vec::with_capacity(j_max + 1);
            let mut gpow = BigRational::one();
            for j in 0..=j_max {
                if j % 2 == 0 {
                    values.push(hermite_even(j / 2) / &gpow);
                    gpow *= &g;
                } else {
                    values.push(zero());
                }
            }
            (MomentUnit::SqrtPiOverGamma(g), values)
        }
        WeightFamily::HermiteShifted { rho } => {
            // ∫ ξ^j e^{-(ξ-ρ)²} = Σ_i C(j,i) ρ^{j-i} ∫ t^i e^{-t²}
            let r = exact_float(*rho)?;
            let centered: Vec<BigRational> = (0..=j_max)
                .map(|i| if i % 2 == 0 { hermite_even(i / 2) } else { zero() })
                .collect();
            let mut values = Vec::with_capacity(j_max + 1);
            for j in 0..=j_max {
                let mut acc = zero();
                let mut rpow = BigRational::one();
                for i in (0..=j).rev() {
                    if i % 2 == 0 {
                        acc += BigRational::from_integer(binomial(j, i)) * &rpow * &centered[i];
                    }
                    rpow *= &r;
                }
                values.push(acc);
            }
            (MomentUnit::SqrtPi, values)
        }
        WeightFamily::BilateralLaguerre => (
            MomentUnit::One,
            (0..=j_max)
                .map(|j| {
                    if j % 2 == 0 {
                        BigRational::from_integer(BigInt::from(2) * factorial(j))
                    } else {
                        zero()
                    }
                })
                .collect(),
        ),
        WeightFamily::Legendre => (
            MomentUnit::One,
            (0..=j_max)
                .map(|j| {
                    if j % 2 == 0 {
                        BigRational::new(BigInt::from(2), BigInt::from(j + 1))
                    } else {
                        zero()
                    }
                })
                .collect(),
        ),
        WeightFamily::Ultraspherical1m => (
            MomentUnit::One,
            (0..=j_max)
                .map(|j| {
                    if j % 2 == 0 {
                        BigRational::new(BigInt::from(2), BigInt::from(j + 1))
                            - BigRational::new(BigInt::from(2), BigInt::from(j + 3))
                    } else {
                        zero()
                    }
                })
                .collect(),
        ),
        WeightFamily::LaguerreHalfline => (
            MomentUnit::One,
            (0..=j_max)
                .map(|j| BigRational::from_integer(factorial(j)))
                .collect(),
        ),
        WeightFamily::LaguerreMirror => (
            MomentUnit::One,
            (0..=j_max)
                .map(|j| {
                    let f = BigRational::from_integer(factorial(j));
                    if j % 2 == 0 {
                        f
                    } else {
                        -f
                    }
                })
                .collect(),
        ),
    };
    Ok(ExactMoments { unit, values })
}

/// Exact moments `μ_0..μ_{n_max}` of `w^[s]`.
pub fn moments_exact(spec: &WeightSpec, n_max: usize) -> Result<ExactMoments> {
    spec.validate()?;
    let s = spec.sobolev_level as usize;
    let base = base_moments(&spec.family, n_max + 2 * s)?;
    let values = (0..=n_max)
        .map(|j| {
            (0..=s).fold(BigRational::zero(), |acc, k| acc + &base.values[j + 2 * k])
        })
        .collect();
    Ok(ExactMoments {
        unit: base.unit,
        values,
    })
}

/// Chebyshev algorithm: monic recurrence `α_0..α_{n-1}`, `β_0..β_{n-1}` from
/// the moments `μ_0..μ_{2n-1}`.
pub fn chebyshev_algorithm(moments: &[BigRational], n: usize) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    if moments.len() < 2 * n || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "Chebyshev algorithm needs {} moments, got {}",
            2 * n,
            moments.len()
        )));
    }
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    let mut sig_prev: Vec<BigRational> = vec![BigRational::zero(); 2 * n];
    let mut sig: Vec<BigRational> = moments[..2 * n].to_vec();
    alpha.push(&moments[1] / &moments[0]);
    beta.push(moments[0].clone());
    for k in 1..n {
        let mut next = vec![BigRational::zero(); 2 * n];
        for l in k..(2 * n - k) {
            next[l] = &sig[l + 1] - &alpha[k - 1] * &sig[l] - &beta[k - 1] * &sig_prev[l];
        }
        if next[k].is_zero() || !next[k].is_positive() {
            return Err(Error::Singular(format!(
                "moment sequence is not positive definite at order {k}"
            )));
        }
        alpha.push(&next[k + 1] / &next[k] - &sig[k] / &sig[k - 1]);
        beta.push(&next[k] / &sig[k - 1]);
        sig_prev = sig;
        sig = next;
    }
    Ok((alpha, beta))
}

/// Exact recurrence with `n` orthonormal coefficient pairs.
pub fn exact_recurrence(spec: &WeightSpec, n: usize) -> Result<ExactRecurrence> {
    if n == 0 || n > MAX_EXACT_N {
        return Err(Error::InvalidArgument(format!(
            "exact recurrence supports 1 <= N <= {MAX_EXACT_N}, got {n}"
        )));
    }
    let moments = moments_exact(spec, 2 * n + 1)?;
    let (alpha, beta) = chebyshev_algorithm(&moments.values, n + 1)?;
    Ok(ExactRecurrence {
        unit: moments.unit,
        alpha: alpha[..n].to_vec(),
        beta,
    })
}

/// A signed square root `sign · sqrt(square)` of a non-negative rational.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedSqrt {
    pub sign: i8,
    pub square: BigRational,
}

impl SignedSqrt {
    pub fn from_signed_square(value: &BigRational, square: BigRational) -> Self {
        let sign = if square.is_zero() {
            0
        } else if value.is_negative() {
            -1
        } else {
            1
        };
        SignedSqrt { sign, square }
    }

    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * to_f64(&self.square).sqrt()
    }

    pub fn negate(&self) -> Self {
        SignedSqrt {
            sign: -self.sign,
            square: self.square.clone(),
        }
    }
}

fn integer_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

impl fmt::Display for SignedSqrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return write!(f, "0");
        }
        let sign = if self.sign < 0 { "-" } else { "" };
        match (integer_sqrt(self.square.numer()), integer_sqrt(self.square.denom())) {
            (Some(p), Some(q)) => write!(f, "{sign}{}", BigRational::new(p, q)),
            _ => write!(f, "{sign}sqrt({})", self.square),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn hermite_level_one_moments() {
        let m = moments_exact(&WeightSpec::hermite(1), 9).unwrap();
        assert_eq!(m.unit, MomentUnit::SqrtPi);
        assert_eq!(m.values[0], r(3, 2));
        for j in (1..=9).step_by(2) {
            assert!(m.values[j].is_zero());
        }
        // (2n)!(2n+3) / (2^{2n+1} n!)
        for n in 0..5usize {
            let expected = BigRational::new(
                factorial(2 * n) * BigInt::from(2 * n + 3),
                BigInt::from(2).pow(2 * n as u32 + 1) * factorial(n),
            );
            assert_eq!(m.values[2 * n], expected);
        }
    }

    #[test]
    fn legendre_moment() {
        let m = moments_exact(&WeightSpec::legendre(0), 4).unwrap();
        assert_eq!(m.values[2], r(2, 3));
        assert_eq!(m.unit, MomentUnit::One);
    }

    #[test]
    fn hermite_level_one_b_squared() {
        let rec = exact_recurrence(&WeightSpec::hermite(1), 6).unwrap();
        let expected = [
            r(5, 6),
            r(19, 15),
            r(351, 190),
            r(1730, 741),
            r(38665, 13494),
            r(236925, 70411),
        ];
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(rec.b_squared(n), e, "n = {n}");
            assert!(rec.alpha[n].is_zero());
        }
    }

    #[test]
    fn hermite_and_legendre_base_recurrences() {
        let h = exact_recurrence(&WeightSpec::hermite(0), 12).unwrap();
        let l = exact_recurrence(&WeightSpec::legendre(0), 12).unwrap();
        for n in 0..12i64 {
            assert_eq!(h.b_squared(n as usize), &r(n + 1, 2));
            assert_eq!(
                l.b_squared(n as usize),
                &r((n + 1) * (n + 1), (2 * n + 1) * (2 * n + 3))
            );
        }
    }

    #[test]
    fn laguerre_recurrence() {
        let rec = exact_recurrence(&WeightSpec::laguerre(0), 8).unwrap();
        for n in 0..8i64 {
            assert_eq!(rec.alpha[n as usize], rat(2 * n + 1));
            assert_eq!(rec.b_squared(n as usize), &rat((n + 1) * (n + 1)));
        }
    }

    #[test]
    fn signed_sqrt_display() {
        let s = SignedSqrt::from_signed_square(&rat(1), r(3, 2));
        assert_eq!(s.to_string(), "sqrt(3/2)");
        let t = SignedSqrt::from_signed_square(&rat(-1), r(9, 4));
        assert_eq!(t.to_string(), "-3/2");
    }
}
