//! Finite Dirichlet polynomials `F(s) = sum_{n=1}^N a_n n^{-s}`.

use crate::frame_core::CoeffVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletPolynomial {
    /// `a_1, .., a_N`.
    coeffs: Vec<Complex64>,
}

impl DirichletPolynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(value: Complex64) -> Self {
        Self {
            coeffs: vec![value],
        }
    }

    /// `a_n n^{-s}` for a single `n`.
    pub fn monomial(n: usize, coeff: Complex64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n.max(1)];
        coeffs[n.max(1) - 1] = coeff;
        Self { coeffs }
    }

    /// `F = 2 sum gamma_n n^{-s}` built from the positive half of a coefficient vector.
    pub fn from_gamma(gamma: &CoeffVector) -> Self {
        Self {
            coeffs: gamma.positive().iter().map(|g| g * 2.0).collect(),
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `sum |a_n|^2`.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(i, a)| {
                let log_n = ((i + 1) as f64).ln();
                a * Complex64::from_polar((-s.re * log_n).exp(), -s.im * log_n)
            })
            .sum()
    }
}
