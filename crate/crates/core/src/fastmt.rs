//! Fast Malmquist–Takenaka transform.
//!
//! With `x = tan(θ/2)/2` we have `1 ± 2ix = e^{±iθ/2}/cos(θ/2)`, so
//! `φ_n(x(θ)) = √(2/π) i^n e^{i(n+½)θ} cos(θ/2)` and, since
//! `dx = sec²(θ/2)/4 dθ`,
//!
//! `⟨f, φ_n⟩ = ((-i)^n/4) √(2/π) ∫_{-π}^{π} f(x(θ)) sec(θ/2) e^{-iθ/2} e^{-inθ} dθ`.
//!
//! The trapezoid rule on the midpoint grid `θ_k = -π + (k+½)π/N`,
//! `k < 2N`, turns this into one DFT of length `2N`; mode `n` sits in bin
//! `n mod 2N` and the factor `(-1)^n e^{-inπ/(2N)}` from the grid offset is
//! applied afterwards. The rule is exact for MT combinations with
//! `-N ≤ n < N`.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::basis::quad::{composite_rule, gauss_legendre_32};
use crate::basis::rational::{mt_functions, SQRT_2_OVER_PI};
use crate::coeffs::{i_pow, CoefficientVector};
use crate::error::{invalid, Error, Result};
use crate::orthopoly::{base_recurrence, sobolev_modification};
use crate::weights::WeightFamily;

/// Relative change between `N` and `2N` analyses above which the input is
/// reported as under-resolved.
pub const DEFAULT_ALIASING_TOLERANCE: f64 = 1e-8;

/// Reusable buffers for repeated transforms with one plan.
#[derive(Debug, Clone)]
pub struct MtWorkspace {
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

/// Precomputed grid, weights and FFTs for modes `-N..N`.
#[derive(Clone)]
pub struct MtPlan {
    n: usize,
    theta: Vec<f64>,
    x: Vec<f64>,
    /// `(-1)^k sec(θ_k/2) e^{-iθ_k/2}`; the `(-1)^k` shifts bin `j` to mode `j - N`.
    weight: Vec<Complex64>,
    /// `(-i)^n √(2/π)/4 Δ (-1)^n e^{-inΔ/2}` for `n = -N..N`.
    post: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for MtPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MtPlan").field("n", &self.n).finish()
    }
}

fn bin_to_mode(k: usize, len: usize) -> i64 {
    if k < len / 2 {
        k as i64
    } else {
        k as i64 - len as i64
    }
}

impl MtPlan {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("MT plan needs N >= 1");
        }
        let len = 2 * n;
        let delta = PI / n as f64;
        let theta: Vec<f64> = (0..len).map(|k| -PI + (k as f64 + 0.5) * delta).collect();
        let x = theta.iter().map(|t| 0.5 * (t / 2.0).tan()).collect();
        let weight = theta
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::from_polar(sign / (t / 2.0).cos(), -t / 2.0)
            })
            .collect();
        let post = (0..len)
            .map(|k| {
                let m = k as i64 - n as i64;
                let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                i_pow(-m) * Complex64::from_polar(sign * SQRT_2_OVER_PI / 4.0 * delta, -(m as f64) * delta / 2.0)
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(MtPlan {
            n,
            theta,
            x,
            weight,
            post,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        })
    }

    /// Half-window `N`: modes `-N..N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Sample points `x_k = tan(θ_k/2)/2`, increasing.
    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    /// Buffers for [`MtPlan::analysis_into`], sized for this plan.
    pub fn workspace(&self) -> MtWorkspace {
        let len = 2 * self.n;
        MtWorkspace {
            buf: vec![Complex64::new(0.0, 0.0); len],
            scratch: vec![Complex64::new(0.0, 0.0); self.forward.get_outofplace_scratch_len()],
        }
    }

    /// `⟨f, φ_n⟩` for `-N ≤ n < N` from samples `f(x_k)`.
    pub fn analysis_samples(&self, samples: &[Complex64]) -> Result<CoefficientVector> {
        let mut out = CoefficientVector::zeros(-(self.n as i64), 2 * self.n);
        self.analysis_into(samples, &mut self.workspace(), &mut out)?;
        Ok(out)
    }

    /// Allocation-free analysis into `out`, which must span `-N..N`.
    pub fn analysis_into(&self, samples: &[Complex64], ws: &mut MtWorkspace, out: &mut CoefficientVector) -> Result<()> {
        let len = 2 * self.n;
        if samples.len() != len {
            return invalid(format!("expected {len} samples, got {}", samples.len()));
        }
        if out.first_index != -(self.n as i64) || out.len() != len || ws.buf.len() != len {
            return invalid("output window or workspace does not match the plan");
        }
        for ((b, f), w) in ws.buf.iter_mut().zip(samples).zip(&self.weight) {
            *b = f * w;
        }
        self.forward
            .process_outofplace_with_scratch(&mut ws.buf, &mut out.values, &mut ws.scratch);
        for (o, p) in out.values.iter_mut().zip(&self.post) {
            *o *= p;
        }
        Ok(())
    }

    pub fn analysis<F: Fn(f64) -> Complex64>(&self, f: F) -> CoefficientVector {
        let samples: Vec<Complex64> = self.x.iter().map(|&x| f(x)).collect();
        self.analysis_samples(&samples).expect("sample count matches the plan")
    }

    /// `Σ c_n φ_n(x_k)` for coefficients on `-N..N`.
    pub fn synthesis(&self, coeffs: &CoefficientVector) -> Result<Vec<Complex64>> {
        let len = 2 * self.n;
        if coeffs.first_index != -(self.n as i64) || coeffs.len() != len {
            return invalid(format!("expected coefficients on {}..{}", -(self.n as i64), self.n));
        }
        let delta = PI / self.n as f64;
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        for (k, slot) in buf.iter_mut().enumerate() {
            let m = bin_to_mode(k, len);
            let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            *slot = coeffs.get(m).unwrap() * i_pow(m) * Complex64::from_polar(sign, m as f64 * delta / 2.0);
        }
        self.inverse.process(&mut buf);
        Ok(buf
            .iter()
            .zip(&self.theta)
            .map(|(v, t)| v * SQRT_2_OVER_PI * Complex64::from_polar((t / 2.0).cos(), t / 2.0))
            .collect())
    }
}

/// Analysis at `N`, checked against `2N`: fails with [`Error::Aliasing`] when
/// the common coefficients move by more than `tol` relative to their norm.
pub fn analysis_checked<F: Fn(f64) -> Complex64>(n: usize, f: F, tol: f64) -> Result<CoefficientVector> {
    let coarse = MtPlan::new(n)?.analysis(&f);
    let fine = MtPlan::new(2 * n)?.analysis(&f);
    let mut diff = 0.0f64;
    for k in coarse.indices() {
        diff = diff.max((coarse.get(k).unwrap() - fine.get(k).unwrap()).norm());
    }
    let change = diff / coarse.norm().max(f64::MIN_POSITIVE);
    if change > tol {
        return Err(Error::Aliasing { change });
    }
    Ok(coarse)
}

/// Conversion from MT coefficients `f̂_j = ⟨f, φ_j⟩` to the `H^s` inner
/// products `f_n^[s] = ⟨f, φ_n^[s]⟩_{H^s}` of the second-kind Sobolev–Laguerre
/// system: `f_n^[s] = Σ_{j=n}^{n+2s} i^{j-n} C̃_{j,n} f̂_j` on `n ≥ 0`, and the
/// conjugate phases on the reflected block.
#[derive(Debug, Clone)]
pub struct SobolevLaguerrePlan {
    s: usize,
    n: usize,
    /// `band[k (2s+1) + d] = i^d C̃_{k+d,k}`.
    band: Vec<Complex64>,
}

impl SobolevLaguerrePlan {
    /// Conversion for `n < N`, banded connection precomputed by Christoffel
    /// modification of the Laguerre recurrence, `O(N s²)`.
    pub fn new(s: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("conversion needs N >= 1");
        }
        let width = 2 * s + 1;
        if s == 0 {
            return Ok(SobolevLaguerrePlan {
                s,
                n,
                band: vec![Complex64::new(1.0, 0.0); n],
            });
        }
        let base = base_recurrence(&WeightFamily::LaguerreHalfline, n + 2 * s + 1).expect("analytic");
        let m = sobolev_modification(&base, s, n)?;
        let band = m
            .band
            .iter()
            .enumerate()
            .map(|(i, c)| i_pow((i % width) as i64) * c)
            .collect();
        Ok(SobolevLaguerrePlan { s, n, band })
    }

    pub fn level(&self) -> usize {
        self.s
    }

    /// Output window `-M..M`, `M = N - 2s`, from MT coefficients on `-N..N`.
    pub fn convert(&self, mt: &CoefficientVector) -> Result<CoefficientVector> {
        let m = self.output_half_window(mt)?;
        let mut out = CoefficientVector::zeros(-m, 2 * m as usize);
        self.convert_into(mt, &mut out)?;
        Ok(out)
    }

    fn output_half_window(&self, mt: &CoefficientVector) -> Result<i64> {
        let n = mt.last_index() + 1;
        if mt.first_index != -n || n as usize > self.n + 2 * self.s {
            return invalid("MT coefficients must cover a symmetric window -N..N within the plan");
        }
        let m = n - 2 * self.s as i64;
        if m <= 0 {
            return invalid(format!("window N = {n} too small for level {}", self.s));
        }
        Ok(m)
    }

    /// [`SobolevLaguerrePlan::convert`] into a preallocated `-M..M` window.
    pub fn convert_into(&self, mt: &CoefficientVector, out: &mut CoefficientVector) -> Result<()> {
        let m = self.output_half_window(mt)?;
        if out.first_index != -m || out.len() != 2 * m as usize {
            return invalid(format!("output window must span {}..{m}", -m));
        }
        let n = mt.last_index() + 1;
        let width = 2 * self.s + 1;
        let pos = &mt.values[n as usize..];
        let neg = &mt.values[..n as usize]; // neg[n - 1 - k] = f̂_{-k-1}
        let (out_neg, out_pos) = out.values.split_at_mut(m as usize);
        for k in 0..m as usize {
            let row = &self.band[k * width..(k + 1) * width];
            let mut p = Complex64::new(0.0, 0.0);
            let mut q = Complex64::new(0.0, 0.0);
            for (d, c) in row.iter().enumerate() {
                p += c * pos[k + d];
                q += c.conj() * neg[n as usize - 1 - (k + d)];
            }
            out_pos[k] = p;
            out_neg[m as usize - 1 - k] = q;
        }
        Ok(())
    }
}

/// `∫ f conj(g) dx` by Gauss–Legendre panels after `x = t/(1 - t²)`; used as
/// an `O(N²)` reference independent of the θ grid.
pub fn direct_inner<F, G>(f: F, g: G, panels: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
    G: Fn(f64) -> Complex64,
{
    let gl = gauss_legendre_32();
    let h = 2.0 / panels as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = -1.0 + (p as f64 + 0.5) * h;
        for (t, w) in gl.nodes.iter().zip(&gl.weights) {
            let t = mid + 0.5 * h * t;
            let q = 1.0 - t * t;
            let x = t / q;
            let jac = (1.0 + t * t) / (q * q);
            sum += f(x) * g(x).conj() * (0.5 * h * w * jac);
        }
    }
    sum
}

/// `⟨f, φ_n⟩` for `lo ≤ n ≤ hi` by direct quadrature on `[-half, half]`, for
/// rapidly decaying `f`.
pub fn direct_mt_coefficients<F: Fn(f64) -> Complex64>(f: F, lo: i64, hi: i64, half: f64) -> Result<CoefficientVector> {
    let rule = composite_rule(-half, half, 0.25, usize::MAX, 0.0)?;
    let mut out = CoefficientVector::zeros(lo, (hi - lo + 1) as usize);
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let fx = f(x) * w;
        for (v, phi) in out.values.iter_mut().zip(mt_functions(lo, hi, x)) {
            *v += fx * phi.conj();
        }
    }
    Ok(out)
}

/// Smallest wall time of `reps` runs of `work`.
pub fn min_time<F: FnMut()>(reps: usize, mut work: F) -> Duration {
    (0..reps.max(1))
        .map(|_| {
            let t = Instant::now();
            work();
            t.elapsed()
        })
        .min()
        .unwrap()
}

/// Time of one analysis of fixed samples at half-window `n`, minimum over
/// repetitions sized to about `budget` of total work.
pub fn time_analysis(n: usize, budget: Duration) -> Result<Duration> {
    let plan = MtPlan::new(n)?;
    let samples: Vec<Complex64> = plan.nodes().iter().map(|&x| Complex64::new((-x * x).exp(), 0.0)).collect();
    let mut ws = plan.workspace();
    let mut out = CoefficientVector::zeros(-(n as i64), 2 * n);
    let mut run = || {
        plan.analysis_into(&samples, &mut ws, &mut out).unwrap();
        std::hint::black_box(&out);
    };
    let once = min_time(3, &mut run);
    let reps = (budget.as_secs_f64() / once.as_secs_f64().max(1e-7)).clamp(5.0, 2000.0) as usize;
    Ok(min_time(reps, run))
}

/// Times of analysis alone and analysis followed by the level-`s`
/// conversion at half-window `n`.
pub fn time_conversion(n: usize, s: usize, budget: Duration) -> Result<(Duration, Duration)> {
    let plan = MtPlan::new(n)?;
    let conv = SobolevLaguerrePlan::new(s, n)?;
    let samples: Vec<Complex64> = plan.nodes().iter().map(|&x| Complex64::new((-x * x).exp(), 0.0)).collect();
    let base = time_analysis(n, budget)?;
    let mut ws = plan.workspace();
    let mut mt = CoefficientVector::zeros(-(n as i64), 2 * n);
    let m = n - 2 * s;
    let mut out = CoefficientVector::zeros(-(m as i64), 2 * m);
    let mut run = || {
        plan.analysis_into(&samples, &mut ws, &mut mt).unwrap();
        conv.convert_into(&mt, &mut out).unwrap();
        std::hint::black_box(&out);
    };
    let once = min_time(3, &mut run);
    let reps = (budget.as_secs_f64() / once.as_secs_f64().max(1e-7)).clamp(5.0, 2000.0) as usize;
    Ok((base, min_time(reps, run)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::rational::mt_function;

    #[test]
    fn workspace_paths_match_allocating_ones() {
        let plan = MtPlan::new(16).unwrap();
        let samples: Vec<Complex64> = plan.nodes().iter().map(|&x| Complex64::new((-x * x).exp(), x / (1.0 + x * x))).collect();
        let want = plan.analysis_samples(&samples).unwrap();
        let mut ws = plan.workspace();
        let mut got = CoefficientVector::zeros(-16, 32);
        plan.analysis_into(&samples, &mut ws, &mut got).unwrap();
        plan.analysis_into(&samples, &mut ws, &mut got).unwrap();
        assert_eq!(got, want);
        assert!(plan.analysis_into(&samples, &mut ws, &mut CoefficientVector::zeros(-15, 30)).is_err());

        let conv = SobolevLaguerrePlan::new(2, 16).unwrap();
        let mut out = CoefficientVector::zeros(-12, 24);
        conv.convert_into(&want, &mut out).unwrap();
        assert_eq!(out, conv.convert(&want).unwrap());
    }

    #[test]
    fn change_of_variables() {
        for n in -5..5i64 {
            for &t in &[-3.0, -1.1, 0.0, 0.4, 2.9] {
                let x = 0.5 * (t / 2.0f64).tan();
                let lhs = mt_function(n, x);
                let rhs = i_pow(n) * SQRT_2_OVER_PI * Complex64::from_polar((t / 2.0).cos(), (n as f64 + 0.5) * t);
                assert!((lhs - rhs).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn recovers_unit_vectors() {
        let plan = MtPlan::new(64).unwrap();
        for n in [-64, -2, 0, 3, 63] {
            let c = plan.analysis(|x| mt_function(n, x));
            let e = CoefficientVector::unit(-64, 128, n);
            assert!(c.max_abs_diff(&e) < 1e-12, "n={n}");
        }
        let x = plan.nodes();
        assert!(x.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn round_trip() {
        let plan = MtPlan::new(16).unwrap();
        let mut c = CoefficientVector::zeros(-16, 32);
        for (k, v) in c.values.iter_mut().enumerate() {
            *v = Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 1.3).cos());
        }
        let f = plan.synthesis(&c).unwrap();
        let back = plan.analysis_samples(&f).unwrap();
        assert!(back.max_abs_diff(&c) < 1e-13);
        let e0 = plan.synthesis(&CoefficientVector::unit(-16, 32, 0)).unwrap();
        for (v, &x) in e0.iter().zip(plan.nodes()) {
            assert!((v - mt_function(0, x)).norm() < 1e-14);
        }
    }

    #[test]
    fn gaussian_matches_direct_quadrature() {
        let f = |x: f64| Complex64::new((-x * x).exp(), 0.0);
        let fast = MtPlan::new(256).unwrap().analysis(f);
        let direct = direct_mt_coefficients(f, -16, 16, 10.0).unwrap();
        for n in -16..=16 {
            assert!((fast.get(n).unwrap() - direct.get(n).unwrap()).norm() < 1e-10, "n={n}");
        }
        let other = direct_inner(f, |x| mt_function(5, x), 256);
        assert!((other - direct.get(5).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn aliasing_is_detected() {
        // a narrow bump is not resolved by a handful of modes
        let f = |x: f64| Complex64::new((-400.0 * (x - 3.0).powi(2)).exp(), 0.0);
        assert!(matches!(analysis_checked(8, f, 1e-8), Err(Error::Aliasing { .. })));
        assert!(analysis_checked(16, |x| mt_function(3, x), 1e-10).is_ok());
    }

    #[test]
    fn level_zero_conversion_is_identity() {
        let plan = MtPlan::new(8).unwrap();
        let c = plan.analysis(|x| Complex64::new(1.0 / (1.0 + x * x), 0.0));
        let conv = SobolevLaguerrePlan::new(0, 8).unwrap();
        assert_eq!(conv.convert(&c).unwrap(), c);
    }

    #[test]
    fn conversion_matches_direct_sobolev_products() {
        use crate::basis::{BasisSystem, SystemKind};
        let sys = BasisSystem::new(SystemKind::SobolevLaguerre2nd { s: 1 }, 9).unwrap();
        let n = 64;
        let plan = MtPlan::new(n).unwrap();
        let conv = SobolevLaguerrePlan::new(1, n).unwrap();
        // f = φ_0^[1] gives e_0
        let phi0 = |x: f64| sys.eval(0, x).unwrap();
        let c = conv.convert(&plan.analysis(phi0)).unwrap();
        assert!(c.max_abs_diff(&CoefficientVector::unit(-(n as i64) + 2, 2 * n - 4, 0)) < 1e-12);
        // f = 1/(1+x²): ⟨f, φ⟩ + ⟨f', φ'⟩
        let f = |x: f64| Complex64::new(1.0 / (1.0 + x * x), 0.0);
        let df = |x: f64| Complex64::new(-2.0 * x / (1.0 + x * x).powi(2), 0.0);
        let c = conv.convert(&plan.analysis(f)).unwrap();
        for k in -8..=8i64 {
            let direct = direct_inner(f, |x| sys.eval(k, x).unwrap(), 512)
                + direct_inner(df, |x| sys.derivative(k, 1, x).unwrap(), 512);
            assert!((c.get(k).unwrap() - direct).norm() < 1e-8, "k={k}: {} vs {direct}", c.get(k).unwrap());
        }
    }
}
