//! Polynomial function specs.
//!
//! The canonical metric forms contain a handful of "arbitrary functions" of a
//! single chart coordinate (θ, ω, f₅, f₆). The conditions we verify only ever
//! involve the function value and its first two derivatives, so polynomials
//! with exact Horner evaluation cover every scenario while keeping all
//! derivatives exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum polynomial degree accepted by the loader.
pub const MAX_DEGREE: usize = 8;

/// A univariate polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub coeffs: Vec<f64>,
}

impl FunctionSpec {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        let spec = Self { coeffs };
        spec.validate()?;
        Ok(spec)
    }

    /// Constant polynomial.
    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "function spec needs at least one coefficient".into(),
            ));
        }
        if self.coeffs.len() > MAX_DEGREE + 1 {
            return Err(Error::InvalidArgument(format!(
                "function spec degree {} exceeds maximum {}",
                self.coeffs.len() - 1,
                MAX_DEGREE
            )));
        }
        if let Some(c) = self.coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite coefficient {c} in function spec"
            )));
        }
        Ok(())
    }

    /// True if every coefficient is zero (the zero polynomial).
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// True if the derivative is the zero polynomial (constant function).
    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().skip(1).all(|&c| c == 0.0)
    }

    /// Value, first and second derivative at `t`, by a fused Horner pass.
    pub fn eval2(&self, t: f64) -> (f64, f64, f64) {
        let mut f = 0.0;
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for &c in self.coeffs.iter().rev() {
            d2 = d2 * t + d1;
            d1 = d1 * t + f;
            f = f * t + c;
        }
        (f, d1, 2.0 * d2)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval2(t).0
    }

    pub fn deriv1(&self, t: f64) -> f64 {
        self.eval2(t).1
    }

    pub fn deriv2(&self, t: f64) -> f64 {
        self.eval2(t).2
    }
}
