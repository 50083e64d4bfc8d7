//! Banded connection matrices between the level-0 and level-`s` systems of
//! the second-kind cascade.
//!
//! With `p^[0]` orthonormal for `w` and `p^[s]` orthonormal for
//! `w^[s] = (Σ_{k≤s} ξ^{2k}) w`, the expansion `p_n^[0] = Σ_j C̃_{n,j} p_j^[s]`
//! has `C̃_{n,j} = ∫ p_n^[0] p_j^[s] w^[s] dξ`, which vanishes for `j < n - 2s`.
//! Through the transform with phase `i^n` the functions obey
//! `φ_n^[0] = Σ_j i^{n-j} C̃_{n,j} φ_j^[s]`; we call `C_{n,j} = i^{n-j} C̃_{n,j}`
//! the phased matrix.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::coeffs::{i_pow, CoefficientVector};
use crate::error::{invalid, Error, Result};
use crate::orthopoly::{
    base_coeffs, exact_recurrence, moments_exact, modified_rule, recurrence_coeffs,
    sobolev_modification, RecurrenceCoeffs, RecurrenceMethod, SignedSqrt,
};
use crate::weights::WeightSpec;

/// Relative tolerance of the row-norm self-check on quadrature-built matrices.
const ROW_NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectionMethod {
    /// Entries as Gauss-quadrature integrals against `w^[s]`, with a row-norm
    /// self-check. Limited to moderate `N` by weight underflow.
    Quadrature,
    /// Lower Cholesky factor of `v(J)`, `J` the base Jacobi matrix. Loses
    /// accuracy quickly with `s` and `N`; kept as a cross-check.
    Cholesky,
    /// Christoffel modification of the base recurrence, `O(N s²)`; accurate
    /// for every family and any `N`. The default.
    Christoffel,
}

/// Lower-triangular band of `C̃^[s]`, `N` rows, bandwidth `2s`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionMatrix {
    level: usize,
    size: usize,
    /// Row `n` holds `C̃_{n,n}, C̃_{n,n-1}, ..., C̃_{n,n-2s}`.
    band: Vec<f64>,
}

impl ConnectionMatrix {
    fn zeros(level: usize, size: usize) -> Self {
        ConnectionMatrix {
            level,
            size,
            band: vec![0.0; size * (2 * level + 1)],
        }
    }

    pub fn identity(size: usize) -> Self {
        ConnectionMatrix {
            level: 0,
            size,
            band: vec![1.0; size],
        }
    }

    fn width(&self) -> usize {
        2 * self.level + 1
    }

    fn set(&mut self, n: usize, j: usize, value: f64) {
        let w = self.width();
        self.band[n * w + (n - j)] = value;
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bandwidth(&self) -> usize {
        2 * self.level
    }

    /// Lowest column index stored in row `n`.
    pub fn first_column(&self, n: usize) -> usize {
        n.saturating_sub(self.bandwidth())
    }

    /// Real pre-phase entry `C̃_{n,j}`; zero outside the band.
    pub fn tilde(&self, n: usize, j: usize) -> f64 {
        if j > n || n - j > self.bandwidth() || n >= self.size {
            0.0
        } else {
            self.band[n * self.width() + (n - j)]
        }
    }

    /// Phased entry `C_{n,j} = i^{n-j} C̃_{n,j}`.
    pub fn entry(&self, n: usize, j: usize) -> Complex64 {
        if j > n {
            return Complex64::new(0.0, 0.0);
        }
        i_pow((n - j) as i64) * self.tilde(n, j)
    }

    /// Dense `N×N` copy of `C̃`.
    pub fn dense_tilde(&self) -> Vec<Vec<f64>> {
        (0..self.size)
            .map(|n| (0..self.size).map(|j| self.tilde(n, j)).collect())
            .collect()
    }

    /// Band entries `(n, j, C̃_{n,j})` in row-major order.
    pub fn band_entries(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for n in 0..self.size {
            for j in self.first_column(n)..=n {
                out.push((n, j, self.tilde(n, j)));
            }
        }
        out
    }

    /// Leading `n×n` block.
    pub fn truncated(&self, n: usize) -> Self {
        let n = n.min(self.size);
        ConnectionMatrix {
            level: self.level,
            size: n,
            band: self.band[..n * self.width()].to_vec(),
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.size {
            return invalid(format!(
                "coefficient vector has length {len}, connection matrix has {} rows",
                self.size
            ));
        }
        Ok(())
    }

    /// Level-`s` expansion coefficients from level-0 ones: `a^[s] = Cᵀ a^[0]`.
    pub fn coeffs_0_to_s(&self, a0: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(a0.len())?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.size];
        for (n, &a) in a0.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in self.first_column(n)..=n {
                out[j] += self.entry(n, j) * a;
            }
        }
        Ok(out)
    }

    /// Level-0 coefficients from level-`s` ones: back substitution in `Cᵀ a^[0] = a^[s]`.
    pub fn coeffs_s_to_0(&self, a_s: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(a_s.len())?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.size];
        for j in (0..self.size).rev() {
            let mut acc = a_s[j];
            let last = (j + self.bandwidth()).min(self.size - 1);
            for n in j + 1..=last {
                acc -= self.entry(n, j) * out[n];
            }
            let d = self.tilde(j, j);
            if d == 0.0 {
                return Err(Error::Singular(format!("zero diagonal at row {j}")));
            }
            out[j] = acc / d;
        }
        Ok(out)
    }

    /// `φ^[s]` from `φ^[0]` at a point, by forward substitution in `φ^[0] = C φ^[s]`.
    pub fn functions_s_from_0(&self, phi0: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(phi0.len())?;
        let mut out: Vec<Complex64> = Vec::with_capacity(self.size);
        for n in 0..self.size {
            let mut acc = phi0[n];
            for j in self.first_column(n)..n {
                acc -= self.entry(n, j) * out[j];
            }
            out.push(acc / self.tilde(n, n));
        }
        Ok(out)
    }

    /// `φ^[0] = C φ^[s]`.
    pub fn functions_0_from_s(&self, phi_s: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(phi_s.len())?;
        Ok((0..self.size)
            .map(|n| {
                (self.first_column(n)..=n)
                    .map(|j| self.entry(n, j) * phi_s[j])
                    .sum()
            })
            .collect())
    }
}

/// `a^[s] = Cᵀ a^[0]` on a `ℤ₊`-indexed vector.
pub fn coeffs_0_to_s(c: &ConnectionMatrix, a0: &CoefficientVector) -> Result<CoefficientVector> {
    require_nonnegative(a0)?;
    Ok(CoefficientVector::new(0, c.coeffs_0_to_s(&a0.values)?))
}

/// Inverse of [`coeffs_0_to_s`].
pub fn coeffs_s_to_0(c: &ConnectionMatrix, a_s: &CoefficientVector) -> Result<CoefficientVector> {
    require_nonnegative(a_s)?;
    Ok(CoefficientVector::new(0, c.coeffs_s_to_0(&a_s.values)?))
}

fn require_nonnegative(v: &CoefficientVector) -> Result<()> {
    if v.first_index != 0 {
        return invalid("connection conversions act on coefficients indexed from 0");
    }
    Ok(())
}

/// `C̃^[s]` for the base weight of `spec` (its own level is ignored), `N` rows.
///
/// Quadrature first; when the weight underflows the Gauss rule (half-line
/// weights beyond a couple of hundred rows) the Christoffel route takes over.
pub fn connection_matrix(spec: &WeightSpec, s: usize, n: usize) -> Result<ConnectionMatrix> {
    match connection_matrix_with(spec, s, n, ConnectionMethod::Quadrature) {
        Ok(c) => Ok(c),
        Err(Error::InvalidArgument(msg)) => Err(Error::InvalidArgument(msg)),
        Err(_) => connection_matrix_with(spec, s, n, ConnectionMethod::Christoffel),
    }
}

pub fn connection_matrix_with(
    spec: &WeightSpec,
    s: usize,
    n: usize,
    method: ConnectionMethod,
) -> Result<ConnectionMatrix> {
    if n == 0 {
        return invalid("connection matrix needs N >= 1");
    }
    if s == 0 {
        return Ok(ConnectionMatrix::identity(n));
    }
    match method {
        ConnectionMethod::Quadrature => by_quadrature(spec, s, n),
        ConnectionMethod::Cholesky => by_cholesky(spec, s, n),
        ConnectionMethod::Christoffel => Ok(christoffel_connection(spec, s, n)?.0),
    }
}

fn by_quadrature(spec: &WeightSpec, s: usize, n: usize) -> Result<ConnectionMatrix> {
    let level = spec.with_level(s as u32);
    let rc0 = base_coeffs(spec, n)?;
    let rcs = recurrence_coeffs(&level, n, RecurrenceMethod::Stieltjes)?;
    // integrand p_n^[0] p_j^[s] has degree <= 2N - 2, times the degree-2s modifier
    let m = n + s + 2;
    let rule = modified_rule(&level, m)?;
    let mut c = ConnectionMatrix::zeros(s, n);
    let (mut v0, mut vs) = (Vec::new(), Vec::new());
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        if w == 0.0 {
            continue;
        }
        rc0.eval_polys_into(x, n - 1, &mut v0);
        rcs.eval_polys_into(x, n - 1, &mut vs);
        for row in 0..n {
            let wp = w * v0[row];
            for j in c.first_column(row)..=row {
                let k = row * c.width() + (row - j);
                c.band[k] += wp * vs[j];
            }
        }
    }
    // Row norms must reproduce the diagonal of v(J).
    let gram = modifier_of_jacobi(&base_coeffs(spec, n + s)?, s, n);
    for row in 0..n {
        let norm: f64 = (c.first_column(row)..=row).map(|j| c.tilde(row, j).powi(2)).sum();
        let target = gram[row * (2 * s + 1)];
        let residual = (norm - target).abs() / target;
        if !(residual <= ROW_NORM_TOLERANCE) {
            return Err(Error::QuadratureResolution {
                degree: row,
                residual,
                tolerance: ROW_NORM_TOLERANCE,
                suggested_points: 2 * m,
            });
        }
    }
    Ok(c)
}

/// Lower band of `v(J) = Σ_{k≤s} J^{2k}` restricted to the first `n` rows, stored
/// like [`ConnectionMatrix`] (row `r` holds columns `r, r-1, ..., r-2s`).
/// `rc` must have at least `n + s` coefficients.
fn modifier_of_jacobi(rc: &RecurrenceCoeffs, s: usize, n: usize) -> Vec<f64> {
    let width = 2 * s + 1;
    let size = rc.len();
    let mut out = vec![0.0; n * width];
    // local vectors indexed by offset from col - 2s
    let span = 4 * s + 1;
    let mut y = vec![0.0; span];
    let mut t = vec![0.0; span];
    let mut acc = vec![0.0; span];
    for col in 0..n {
        let base = col as isize - 2 * s as isize;
        y.iter_mut().for_each(|v| *v = 0.0);
        y[2 * s] = 1.0;
        acc.copy_from_slice(&y);
        for _ in 0..s {
            for _ in 0..2 {
                for (k, tk) in t.iter_mut().enumerate() {
                    let i = base + k as isize;
                    if i < 0 || i as usize >= size {
                        *tk = 0.0;
                        continue;
                    }
                    let i = i as usize;
                    let mut v = rc.a[i] * y[k];
                    if k > 0 && i > 0 {
                        v += rc.b[i - 1] * y[k - 1];
                    }
                    if k + 1 < span {
                        v += rc.b[i] * y[k + 1];
                    }
                    *tk = v;
                }
                std::mem::swap(&mut y, &mut t);
            }
            for k in 0..span {
                acc[k] += y[k];
            }
        }
        // entries (row, col) with row in col..=col+2s, row < n
        for d in 0..width {
            let row = col + d;
            if row < n {
                out[row * width + d] = acc[2 * s + d];
            }
        }
    }
    out
}

fn by_cholesky(spec: &WeightSpec, s: usize, n: usize) -> Result<ConnectionMatrix> {
    let rc0 = base_coeffs(spec, n + s)?;
    let a = modifier_of_jacobi(&rc0, s, n);
    let mut c = ConnectionMatrix::zeros(s, n);
    for i in 0..n {
        for j in c.first_column(i)..=i {
            let mut sum = a[i * c.width() + (i - j)];
            for k in c.first_column(i).max(c.first_column(j))..j {
                sum -= c.tilde(i, k) * c.tilde(j, k);
            }
            if i == j {
                if !(sum > 0.0) {
                    return Err(Error::Singular(format!(
                        "v(J) is not positive definite at row {i}"
                    )));
                }
                c.set(i, i, sum.sqrt());
            } else {
                let d = c.tilde(j, j);
                c.set(i, j, sum / d);
            }
        }
    }
    Ok(c)
}

/// `C̃^[s]` and the level-`s` recurrence by Christoffel modification of the
/// base recurrence, `O(N s²)`; see [`sobolev_modification`].
pub fn christoffel_connection(
    spec: &WeightSpec,
    s: usize,
    n: usize,
) -> Result<(ConnectionMatrix, RecurrenceCoeffs)> {
    if n == 0 {
        return invalid("connection matrix needs N >= 1");
    }
    let base = base_coeffs(spec, n + 2 * s + 1)?;
    if s == 0 {
        return Ok((ConnectionMatrix::identity(n), base.truncated(n)));
    }
    let m = sobolev_modification(&base, s, n)?;
    let width = 2 * s + 1;
    let mut c = ConnectionMatrix::zeros(s, n);
    for k in 0..n {
        for d in 0..width {
            if k + d < n {
                c.set(k + d, k, m.band[k * width + d]);
            }
        }
    }
    Ok((c, m.recurrence))
}

/// Full lower triangle of `C̃` by quadrature, for checking the band structure.
pub fn dense_tilde_by_quadrature(spec: &WeightSpec, s: usize, n: usize) -> Result<Vec<Vec<f64>>> {
    let level = spec.with_level(s as u32);
    let rc0 = base_coeffs(spec, n)?;
    let rcs = recurrence_coeffs(&level, n, RecurrenceMethod::Stieltjes)?;
    let rule = modified_rule(&level, n + s + 2)?;
    let mut out = vec![vec![0.0; n]; n];
    let (mut v0, mut vs) = (Vec::new(), Vec::new());
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        rc0.eval_polys_into(x, n - 1, &mut v0);
        rcs.eval_polys_into(x, n - 1, &mut vs);
        for r in 0..n {
            for j in 0..=r {
                out[r][j] += w * v0[r] * vs[j];
            }
        }
    }
    Ok(out)
}

/// Exact `C̃_{n,j}` as signed square roots of rationals, for `n, j < N`.
pub fn exact_connection(spec: &WeightSpec, s: usize, n: usize) -> Result<Vec<Vec<SignedSqrt>>> {
    let base = spec.base();
    let level = spec.with_level(s as u32);
    let r0 = exact_recurrence(&base, n)?;
    let rs = exact_recurrence(&level, n)?;
    let mom = moments_exact(&level, 2 * n)?;
    let p0 = r0.monic_polys(n - 1);
    let ps = rs.monic_polys(n - 1);
    let mut out = Vec::with_capacity(n);
    for row in 0..n {
        let mut line = Vec::with_capacity(n);
        for j in 0..n {
            let mut integral = BigRational::zero();
            if j <= row {
                for (i, ci) in p0[row].iter().enumerate() {
                    for (k, ck) in ps[j].iter().enumerate() {
                        integral += ci * ck * &mom.values[i + k];
                    }
                }
            }
            let square = &integral * &integral / (r0.monic_norm(row) * rs.monic_norm(j));
            line.push(SignedSqrt::from_signed_square(&integral, square));
        }
        out.push(line);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::WeightFamily;
    use num_bigint::BigInt;

    fn golden() -> Vec<(usize, usize, f64)> {
        vec![
            (0, 0, 1.5),
            (1, 1, 2.5),
            (2, 0, 1.0 / 3.0),
            (2, 2, 19.0 / 6.0),
            (3, 1, 0.6),
            (3, 3, 3.9),
            (4, 2, 18.0 / 19.0),
            (4, 4, 173.0 / 38.0),
            // 819/407 in some sources; the row norm forces 50/39
            (5, 3, 50.0 / 39.0),
            (5, 5, 407.0 / 78.0),
        ]
    }

    #[test]
    fn hermite_golden_minor() {
        for method in [ConnectionMethod::Quadrature, ConnectionMethod::Cholesky, ConnectionMethod::Christoffel] {
            let c = connection_matrix_with(&WeightSpec::hermite(0), 1, 6, method).unwrap();
            let mut expected = vec![vec![0.0; 6]; 6];
            for (n, j, sq) in golden() {
                expected[n][j] = f64::sqrt(sq);
            }
            for n in 0..6 {
                for j in 0..6 {
                    assert!((c.tilde(n, j) - expected[n][j]).abs() < 1e-12, "{method:?} ({n},{j})");
                }
            }
        }
    }

    #[test]
    fn hermite_golden_minor_exact() {
        let c = exact_connection(&WeightSpec::hermite(0), 1, 6).unwrap();
        for (n, j, _) in golden() {
            assert_eq!(c[n][j].sign, 1);
        }
        let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        assert_eq!(c[0][0].square, r(3, 2));
        assert_eq!(c[2][0].square, r(1, 3));
        assert_eq!(c[5][3].square, r(50, 39));
        assert_eq!(c[5][5].square, r(407, 78));
        assert_eq!(c[3][0].sign, 0);
        assert_eq!(c[4][0].sign, 0);
    }

    #[test]
    fn phased_entries() {
        let c = connection_matrix(&WeightSpec::hermite(0), 1, 6).unwrap();
        assert!((c.entry(2, 0).re + (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((c.entry(4, 2).re + (18.0f64 / 19.0).sqrt()).abs() < 1e-12);
        assert!((c.entry(2, 2).re - (19.0f64 / 6.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn level_zero_is_identity() {
        let c = connection_matrix(&WeightSpec::legendre(0), 0, 5).unwrap();
        for n in 0..5 {
            for j in 0..5 {
                assert_eq!(c.tilde(n, j), if n == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn coefficient_conversions() {
        let c = connection_matrix(&WeightSpec::hermite(0), 1, 6).unwrap();
        let e = |k: usize| {
            let mut v = vec![Complex64::new(0.0, 0.0); 6];
            v[k] = Complex64::new(1.0, 0.0);
            v
        };
        let a = c.coeffs_0_to_s(&e(0)).unwrap();
        assert!((a[0].re - 1.5f64.sqrt()).abs() < 1e-12);
        let b = c.coeffs_s_to_0(&e(0)).unwrap();
        assert!((b[0].re - 1.0 / 1.5f64.sqrt()).abs() < 1e-12);
        let r = c.coeffs_0_to_s(&e(2)).unwrap();
        assert!((r[0].re + (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!(r[1].norm() < 1e-15);
        assert!((r[2].re - (19.0f64 / 6.0).sqrt()).abs() < 1e-12);
        assert!(r[3..].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn routes_agree_on_nonsymmetric_weights() {
        for fam in [WeightFamily::LaguerreHalfline, WeightFamily::LaguerreMirror] {
            let spec = WeightSpec::new(fam, 0).unwrap();
            for s in 1..5 {
                let q = connection_matrix_with(&spec, s, 40, ConnectionMethod::Quadrature).unwrap();
                let c = connection_matrix_with(&spec, s, 40, ConnectionMethod::Christoffel).unwrap();
                for (n, j, v) in q.band_entries() {
                    let scale = (0..=n).map(|k| q.tilde(n, k).abs()).fold(0.0, f64::max);
                    assert!((v - c.tilde(n, j)).abs() < 1e-12 * scale, "s={s} ({n},{j})");
                }
            }
            // Cholesky of v(J) is only trustworthy at the first level
            let q = connection_matrix_with(&spec, 1, 30, ConnectionMethod::Quadrature).unwrap();
            let ch = connection_matrix_with(&spec, 1, 30, ConnectionMethod::Cholesky).unwrap();
            for (n, j, v) in q.band_entries() {
                assert!((v - ch.tilde(n, j)).abs() < 1e-10 * v.abs().max(1.0));
            }
        }
    }

    #[test]
    fn christoffel_matches_exact() {
        for spec in [WeightSpec::hermite(0), WeightSpec::legendre(0), WeightSpec::laguerre(0)] {
            for s in 1..4 {
                let exact = exact_connection(&spec, s, 20).unwrap();
                let (c, rc) = christoffel_connection(&spec, s, 20).unwrap();
                for n in 0..20 {
                    let scale = exact[n].iter().map(|e| e.to_f64().abs()).fold(0.0, f64::max);
                    for j in 0..=n {
                        let e = exact[n][j].to_f64();
                        assert!((c.tilde(n, j) - e).abs() < 1e-13 * scale, "{spec:?} s={s} ({n},{j})");
                    }
                }
                let level = spec.with_level(s as u32);
                let ex = recurrence_coeffs(&level, 20, RecurrenceMethod::ExactMoments).unwrap();
                for k in 0..20 {
                    assert!((rc.b[k] - ex.b[k]).abs() < 1e-13 * ex.b[k]);
                    assert!((rc.a[k] - ex.a[k]).abs() < 1e-13 * ex.b[k]);
                }
                assert!((rc.mu0 - ex.mu0).abs() < 1e-13 * ex.mu0);
            }
        }
    }

    #[test]
    fn row_norms_match_modifier_diagonal_at_large_n() {
        // quadrature cannot reach this far on the half-line
        let spec = WeightSpec::laguerre(0);
        let s = 4;
        let n = 2000;
        let c = connection_matrix(&spec, s, n).unwrap();
        let gram = modifier_of_jacobi(&base_coeffs(&spec, n + s).unwrap(), s, n);
        for row in (0..n).step_by(97) {
            let norm: f64 = (c.first_column(row)..=row).map(|j| c.tilde(row, j).powi(2)).sum();
            let target = gram[row * (2 * s + 1)];
            assert!((norm - target).abs() < 1e-12 * target, "row {row}");
        }
    }

    #[test]
    fn mirror_is_sign_alternated() {
        let lag = connection_matrix(&WeightSpec::laguerre(0), 2, 12).unwrap();
        let mir = connection_matrix(
            &WeightSpec::new(WeightFamily::LaguerreMirror, 0).unwrap(),
            2,
            12,
        )
        .unwrap();
        for (n, j, v) in lag.band_entries() {
            let sign = if (n + j) % 2 == 0 { 1.0 } else { -1.0 };
            assert!((mir.tilde(n, j) - sign * v).abs() < 1e-10 * v.abs().max(1.0));
        }
    }
}
