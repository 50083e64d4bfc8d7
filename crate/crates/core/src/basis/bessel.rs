//! Spherical and cylindrical Bessel functions, the Legendre–Bessel system and
//! the second-kind Legendre cascade amplitude.

use std::f64::consts::PI;

const RESCALE: f64 = 1e250;

/// Normalized downward (Miller) recurrence `f_{k-1} = c_k f_k - f_{k+1}` from
/// `start`, returning unnormalized `f_0..f_{n_max}`.
fn miller<F: Fn(usize) -> f64>(n_max: usize, start: usize, coeff: F) -> Vec<f64> {
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-300;
    for k in (1..=start).rev() {
        vals[k - 1] = coeff(k) * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > RESCALE {
            for v in vals[k - 1..].iter_mut() {
                *v /= RESCALE;
            }
        }
    }
    vals.truncate(n_max + 1);
    vals
}

fn miller_start(n_max: usize, x: f64) -> usize {
    let base = n_max.max(x.abs().ceil() as usize);
    base + 30 + (40.0 * base as f64).sqrt() as usize
}

/// Spherical Bessel functions `j_0(x)..j_{n_max}(x)`.
pub fn spherical_bessel(n_max: usize, x: f64) -> Vec<f64> {
    let ax = x.abs();
    if ax < 1e-3 {
        // j_n(x) = x^n/(2n+1)!! (1 - x²/(2(2n+3)) + x⁴/(8(2n+3)(2n+5)) - ...)
        let mut out = Vec::with_capacity(n_max + 1);
        let mut lead = 1.0;
        for n in 0..=n_max {
            if n > 0 {
                lead *= x / (2 * n + 1) as f64;
            }
            let m = (2 * n) as f64;
            let x2 = x * x;
            out.push(lead * (1.0 - x2 / (2.0 * (m + 3.0)) + x2 * x2 / (8.0 * (m + 3.0) * (m + 5.0))));
        }
        return out;
    }
    let j0 = x.sin() / x;
    let j1 = x.sin() / (x * x) - x.cos() / x;
    let mut vals = miller(n_max.max(1), miller_start(n_max, x), |k| (2 * k + 1) as f64 / x);
    // normalize against whichever of j_0, j_1 is larger
    let scale = if j0.abs() >= j1.abs() { j0 / vals[0] } else { j1 / vals[1] };
    for v in vals.iter_mut() {
        *v *= scale;
    }
    vals.truncate(n_max + 1);
    vals
}

/// Cylindrical Bessel functions `J_0(x)..J_{n_max}(x)`, Miller recurrence
/// normalized by `J_0 + 2 Σ J_{2k} = 1`.
pub fn bessel_j(n_max: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; n_max + 1];
        out[0] = 1.0;
        return out;
    }
    let start = miller_start(n_max, x) & !1; // even start keeps the sum bookkeeping simple
    let mut vals = miller(start, start, |k| 2.0 * k as f64 / x);
    let norm: f64 = vals[0] + 2.0 * vals.iter().skip(2).step_by(2).sum::<f64>();
    for v in vals.iter_mut() {
        *v /= norm;
    }
    vals.truncate(n_max + 1);
    vals
}

/// `J_n(x)` by its power series; only for moderate `|x|` (used as a check).
pub fn bessel_j_series(n: usize, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = half.powi(n as i32) / (1..=n).map(|k| k as f64).product::<f64>();
    let mut sum = term;
    for k in 1..200 {
        term *= -half * half / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Legendre–Bessel functions `φ_n(x) = (-1)^n √((2n+1)/π) j_n(x)`, `n ≤ n_max`,
/// the transforms of orthonormal Legendre polynomials with `g = 1`.
pub fn legendre_bessel(n_max: usize, x: f64) -> Vec<f64> {
    spherical_bessel(n_max, x)
        .into_iter()
        .enumerate()
        .map(|(n, j)| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * ((2 * n + 1) as f64 / PI).sqrt() * j
        })
        .collect()
}

/// First derivatives of the Legendre–Bessel functions, from
/// `(2n+1) j_n' = n j_{n-1} - (n+1) j_{n+1}`.
pub fn legendre_bessel_derivative(n_max: usize, x: f64) -> Vec<f64> {
    let j = spherical_bessel(n_max + 1, x);
    (0..=n_max)
        .map(|n| {
            let dj = if n == 0 {
                -j[1]
            } else {
                (n as f64 * j[n - 1] - (n + 1) as f64 * j[n + 1]) / (2 * n + 1) as f64
            };
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * ((2 * n + 1) as f64 / PI).sqrt() * dj
        })
        .collect()
}

/// `u_s = ∫_{-1}^{1} Σ_{ℓ≤s} ξ^{2ℓ} dξ = Σ_{ℓ≤s} 1/(ℓ+½)`.
pub fn legendre_cascade_mass(s: u64) -> f64 {
    // pairwise-friendly: sum small terms first
    (0..=s).rev().map(|l| 1.0 / (l as f64 + 0.5)).sum()
}

/// `u_s = ψ(s + 3/2) - ψ(1/2) = ψ(s + 3/2) + γ + 2 ln 2`, independent of the
/// direct sum; grows like `ln s`.
pub fn legendre_cascade_mass_digamma(s: u64) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    statrs::function::gamma::digamma(s as f64 + 1.5) + EULER_GAMMA + 2.0 * std::f64::consts::LN_2
}

/// `φ_0^[s](x) = √(2/(π u_s)) sin x / x` for the second-kind Legendre cascade.
pub fn legendre_cascade_phi0(s: u64, x: f64) -> f64 {
    let sinc = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
    (2.0 / (PI * legendre_cascade_mass(s))).sqrt() * sinc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spherical_closed_forms() {
        for &x in &[0.5, 1.0, 3.0, 10.0, 37.0, -2.5] {
            let j = spherical_bessel(12, x);
            let s = x.sin();
            let c = x.cos();
            assert!((j[0] - s / x).abs() < 1e-15);
            assert!((j[1] - (s / (x * x) - c / x)).abs() < 1e-14);
            let j2 = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
            assert!((j[2] - j2).abs() < 1e-13, "x={x}");
            // j_n(x) = √(π/(2x)) J_{n+1/2}: compare against the recurrence forwards for n <= x
            for n in 1..12 {
                let lhs = j[n + 1];
                let rhs = (2 * n + 1) as f64 / x * j[n] - j[n - 1];
                assert!((lhs - rhs).abs() < 1e-12 * (1.0 + j[n].abs() * (2 * n + 1) as f64 / x.abs()));
            }
        }
        let small = spherical_bessel(3, 1e-4);
        assert!((small[0] - 1.0).abs() < 1e-8);
        assert!((small[1] - 1e-4 / 3.0).abs() < 1e-13);
        assert_eq!(spherical_bessel(2, 0.0)[1], 0.0);
    }

    #[test]
    fn cylindrical_matches_series() {
        for &x in &[0.5, 2.0, 10.0] {
            let j = bessel_j(10, x);
            for n in 0..=10 {
                assert!((j[n] - bessel_j_series(n, x)).abs() < 1e-12, "n={n} x={x}");
            }
        }
        let j = bessel_j(1, 2.404_825_557_695_773);
        assert!(j[0].abs() < 1e-14);
    }

    #[test]
    fn legendre_bessel_examples() {
        let phi = legendre_bessel(3, 1.0);
        assert!((phi[0] - 1.0f64.sin() / PI.sqrt()).abs() < 1e-15);
        // J_{3/2}(1) = √(2/π) (sin 1 - cos 1)
        let j32 = (2.0 / PI).sqrt() * (1.0f64.sin() - 1.0f64.cos());
        assert!((phi[1] + 1.5f64.sqrt() * j32).abs() < 1e-14);
        let zero = legendre_bessel(4, 0.0);
        assert!((zero[0] - 1.0 / PI.sqrt()).abs() < 1e-15);
        assert!(zero[1..].iter().all(|v| *v == 0.0));
    }

    #[test]
    fn cascade_mass() {
        assert_eq!(legendre_cascade_mass(0), 2.0);
        let u3 = 2.0 + 2.0 / 3.0 + 2.0 / 5.0 + 2.0 / 7.0;
        assert!((legendre_cascade_mass(3) - u3).abs() < 1e-15);
        assert!((legendre_cascade_phi0(0, 0.0) - (1.0 / PI).sqrt()).abs() < 1e-15);
        for s in 1..20 {
            assert!(legendre_cascade_phi0(s, 1.0) < legendre_cascade_phi0(s - 1, 1.0));
        }
        for s in [0, 1, 7, 100, 100_000] {
            let (a, b) = (legendre_cascade_mass(s), legendre_cascade_mass_digamma(s));
            assert!((a - b).abs() < 1e-12 * a, "s={s}: {a} vs {b}");
        }
    }
}
