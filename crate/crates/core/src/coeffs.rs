//! Coefficient vectors over `ℤ₊` or a window of `ℤ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `i^k` for any integer `k`.
pub fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Expansion coefficients `values[k]` of the function with index `first_index + k`.
///
/// Systems on `ℤ₊` start at 0; Malmquist–Takenaka-type systems use the
/// window `-N..=N-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector {
    pub first_index: i64,
    pub values: Vec<Complex64>,
}

impl CoefficientVector {
    pub fn new(first_index: i64, values: Vec<Complex64>) -> Self {
        CoefficientVector {
            first_index,
            values,
        }
    }

    pub fn zeros(first_index: i64, len: usize) -> Self {
        CoefficientVector::new(first_index, vec![Complex64::new(0.0, 0.0); len])
    }

    /// Unit vector `e_n` on the given index range.
    pub fn unit(first_index: i64, len: usize, n: i64) -> Self {
        let mut v = CoefficientVector::zeros(first_index, len);
        *v.get_mut(n).expect("index inside window") = Complex64::new(1.0, 0.0);
        v
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last_index(&self) -> i64 {
        self.first_index + self.values.len() as i64 - 1
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.values.len() as i64).map(move |k| self.first_index + k)
    }

    pub fn get(&self, n: i64) -> Option<Complex64> {
        let k = n - self.first_index;
        if k < 0 {
            return None;
        }
        self.values.get(k as usize).copied()
    }

    pub fn get_mut(&mut self, n: i64) -> Option<&mut Complex64> {
        let k = n - self.first_index;
        if k < 0 {
            return None;
        }
        self.values.get_mut(k as usize)
    }

    /// Euclidean norm `(Σ |a_n|²)^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest `|a_n - b_n|` over the common window.
    pub fn max_abs_diff(&self, other: &CoefficientVector) -> f64 {
        self.indices()
            .filter_map(|n| other.get(n).map(|b| (self.get(n).unwrap() - b).norm()))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_of_i() {
        assert_eq!(i_pow(0), Complex64::new(1.0, 0.0));
        assert_eq!(i_pow(-1), Complex64::new(0.0, -1.0));
        assert_eq!(i_pow(6), Complex64::new(-1.0, 0.0));
        assert_eq!(i_pow(-7), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn window_indexing() {
        let v = CoefficientVector::unit(-4, 8, -2);
        assert_eq!(v.last_index(), 3);
        assert_eq!(v.get(-2), Some(Complex64::new(1.0, 0.0)));
        assert_eq!(v.get(4), None);
        assert_eq!(v.norm(), 1.0);
    }
}
