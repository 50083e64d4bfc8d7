//! Gauss rules from Jacobi matrices (Golub–Welsch style).

use crate::error::{Error, Result};

use super::RecurrenceCoeffs;

const MAX_QL_ITERATIONS: usize = 60;

/// Nodes and positive weights of a quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| if w == 0.0 { 0.0 } else { w * f(x) })
            .sum()
    }

    /// `Σ ω_k ξ_k^j`.
    pub fn moment(&self, j: i32) -> f64 {
        self.integrate(|x| x.powi(j))
    }

    /// Total mass `Σ ω_k`.
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Rule with every weight multiplied by `factor(node)`.
    pub fn reweighted<F: Fn(f64) -> f64>(&self, factor: F) -> QuadratureRule {
        QuadratureRule {
            nodes: self.nodes.clone(),
            weights: self
                .nodes
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| w * factor(x))
                .collect(),
        }
    }

    /// Rule for the measure reflected through the origin.
    pub fn reflected(&self) -> QuadratureRule {
        QuadratureRule {
            nodes: self.nodes.iter().rev().map(|x| -x).collect(),
            weights: self.weights.iter().rev().copied().collect(),
        }
    }

    /// Concatenation of two rules (sum of the measures).
    pub fn merged(&self, other: &QuadratureRule) -> QuadratureRule {
        let mut pairs: Vec<(f64, f64)> = self
            .nodes
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
            .chain(other.nodes.iter().copied().zip(other.weights.iter().copied()))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        QuadratureRule {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        }
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e[i]` couples `i` and `i+1`), by implicit QL with
/// Wilkinson-type shifts. Returned in ascending order.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::EigenNonConvergence { iterations: iter });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

/// `p_m(x) / p_m'(x)` for the degree-`m` polynomial of the recurrence, with
/// the last normalization dropped (it cancels in the ratio).
fn newton_ratio(rc: &RecurrenceCoeffs, m: usize, x: f64) -> f64 {
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    for j in 0..m {
        let bj = if j + 1 < m { rc.b[j] } else { 1.0 };
        let bprev = if j > 0 { rc.b[j - 1] } else { 0.0 };
        let p_next = ((x - rc.a[j]) * p - bprev * p_prev) / bj;
        let d_next = (p + (x - rc.a[j]) * d - bprev * d_prev) / bj;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        let scale = p.abs().max(d.abs());
        if scale > 1e150 {
            p /= scale;
            p_prev /= scale;
            d /= scale;
            d_prev /= scale;
        }
    }
    p / d
}

/// Christoffel weight `1 / Σ_{j<m} p_j(x)²` accumulated in log scale.
fn christoffel_weight(rc: &RecurrenceCoeffs, m: usize, x: f64) -> f64 {
    let mut p_prev = 0.0;
    let mut p = rc.p0();
    let mut sum = p * p;
    let mut log_scale = 0.0f64; // every stored value is multiplied by exp(-log_scale)
    for j in 0..m - 1 {
        let bprev = if j > 0 { rc.b[j - 1] } else { 0.0 };
        let p_next = ((x - rc.a[j]) * p - bprev * p_prev) / rc.b[j];
        p_prev = p;
        p = p_next;
        sum += p * p;
        if p.abs() > 1e100 {
            let s = p.abs();
            p /= s;
            p_prev /= s;
            sum /= s * s;
            log_scale += 2.0 * s.ln();
        }
    }
    (-(sum.ln() + log_scale)).exp()
}

/// `m`-point Gauss rule for the measure whose recurrence is `rc`.
pub fn gauss_rule(rc: &RecurrenceCoeffs, m: usize) -> Result<QuadratureRule> {
    if m == 0 || m > rc.len() {
        return Err(Error::InvalidArgument(format!(
            "Gauss rule needs 1 <= M <= {} points, got {m}",
            rc.len()
        )));
    }
    let mut nodes = tridiagonal_eigenvalues(&rc.a[..m], &rc.b[..m - 1])?;
    let spread = nodes[m - 1] - nodes[0] + 1.0;
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let step = newton_ratio(rc, m, *x);
            if !step.is_finite() || step.abs() > 1e-6 * spread {
                break;
            }
            *x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
                break;
            }
        }
    }
    let weights = nodes.iter().map(|&x| christoffel_weight(rc, m, x)).collect();
    Ok(QuadratureRule { nodes, weights })
}
