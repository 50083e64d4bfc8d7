//! Panel Gauss–Legendre quadrature for Fourier-type integrals
//! `∫ F(ξ) e^{ixξ} dξ`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::orthopoly::{base_recurrence, gauss_rule, QuadratureRule};
use crate::weights::WeightFamily;

/// Points per panel.
pub const PANEL_ORDER: usize = 32;

/// Default cap on the number of panels of a single integral.
pub const DEFAULT_PANEL_BUDGET: usize = 200_000;

pub(crate) fn gauss_legendre_32() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| {
        let rc = base_recurrence(&WeightFamily::Legendre, PANEL_ORDER).expect("analytic");
        gauss_rule(&rc, PANEL_ORDER).expect("Gauss–Legendre rule")
    })
}

/// Panel width that resolves `e^{ixξ}`: at most `π / (4|x| + 1)`.
pub fn panel_width(x: f64) -> f64 {
    PI / (4.0 * x.abs() + 1.0)
}

/// Nodes and weights of a composite rule on `[lo, hi]` with panels no wider
/// than `width`.
pub fn composite_rule(lo: f64, hi: f64, width: f64, budget: usize, x: f64) -> Result<QuadratureRule> {
    let panels = ((hi - lo) / width).ceil().max(1.0);
    if panels > budget as f64 {
        return Err(Error::OscillationBudget {
            x,
            needed: panels as usize,
            budget,
        });
    }
    let panels = panels as usize;
    let h = (hi - lo) / panels as f64;
    let gl = gauss_legendre_32();
    let mut nodes = Vec::with_capacity(panels * PANEL_ORDER);
    let mut weights = Vec::with_capacity(panels * PANEL_ORDER);
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for (t, w) in gl.nodes.iter().zip(&gl.weights) {
            nodes.push(mid + 0.5 * h * t);
            weights.push(0.5 * h * w);
        }
    }
    Ok(QuadratureRule { nodes, weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composite_rule_integrates_oscillations() {
        let x = 7.0;
        let rule = composite_rule(-1.0, 2.0, panel_width(x), DEFAULT_PANEL_BUDGET, x).unwrap();
        let re: f64 = rule.integrate(|t| (x * t).cos());
        let exact = ((2.0 * x).sin() - (-x).sin()) / x;
        assert!((re - exact).abs() < 1e-14);
        assert!(matches!(
            composite_rule(0.0, 1000.0, 1e-3, 10, x),
            Err(Error::OscillationBudget { .. })
        ));
    }
}
