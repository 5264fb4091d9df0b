//! Floating-point layer: zero sheets of model divisors, bump test functions
//! and mean values of the current of integration.
//!
//! For `f = g(w)` with `w(z) = ⟨z,λ⟩ + i⟨z,μ⟩`, the coefficient measures of
//! the current are
//!
//! ```text
//! (2/π) ∂²log|f| / ∂z_j∂z̄_k = c_j c̄_k · Σ_ρ δ(w(z) − ρ),   c = λ + iμ,
//! ```
//!
//! and pairing with a test function gives
//! `c_j c̄_k / (|λ|² + |μ|²) · Σ_sheets ∫_sheet φ dS`. Currents are never
//! computed by differentiating `log|g|` numerically.

mod bump;
mod current;
mod lattice;
mod sheets;

use std::fmt;

use thiserror::Error;

pub use bump::BumpFunction;
pub use current::{
    a_matrix_numeric, a_matrix_numeric_with, lemma_dis_check, mean_sheet_mass, mean_value_pairing,
    pair_current, sheet_integral,
};
pub use lattice::eval_g;
pub use sheets::{gradient_rows, normal_jacobian, w_of, zero_sheets, CubeRegion, ZeroSheet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("lambda = mu = 0 has no zero sheets")]
    DegeneratePair,
    #[error("test function support exceeds the box of half-width {0}")]
    SupportExceedsBox(f64),
    #[error("sheet ({}, {}) is needed but lies beyond lattice radius {radius}", .needed.0, .needed.1)]
    LatticeRadiusTooSmall { needed: (i64, i64), radius: f64 },
    #[error("dimension mismatch between lambda, mu and the test function")]
    DimensionMismatch,
    #[error("index out of range")]
    IndexOutOfRange,
    #[error("invalid quadrature parameters: {0}")]
    InvalidParams(&'static str),
}

/// Quadrature settings shared by all numeric operations.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureParams {
    /// Half-width `N` of the real box holding the test function, and of the
    /// averaging cube for the expanding-cube mean.
    pub half_width: f64,
    /// Midpoint nodes per axis on each sheet.
    pub nodes: usize,
    /// Midpoint nodes per axis for averaging over translations.
    pub mean_nodes: usize,
    /// Lattice truncation radius `R`.
    pub lattice_radius: f64,
    /// Bump radius `ε` for the default test function.
    pub epsilon: f64,
    /// Relative tolerance for mean-value checks.
    pub tolerance: f64,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        Self {
            half_width: 4.0,
            nodes: 24,
            mean_nodes: 16,
            lattice_radius: 40.0,
            epsilon: 0.4,
            tolerance: 1e-2,
        }
    }
}

impl QuadratureParams {
    pub fn validate(&self) -> Result<(), NumericError> {
        if self.nodes < 2 || self.mean_nodes < 2 {
            return Err(NumericError::InvalidParams(
                "node counts must be at least 2",
            ));
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !(positive(self.half_width) && positive(self.epsilon) && positive(self.lattice_radius)) {
            return Err(NumericError::InvalidParams(
                "half-width, epsilon and lattice radius must be positive",
            ));
        }
        if !positive(self.tolerance) {
            return Err(NumericError::InvalidParams("tolerance must be positive"));
        }
        Ok(())
    }

    /// Same parameters with both node counts halved (at least 2).
    pub fn coarsened(&self) -> Self {
        Self {
            nodes: (self.nodes / 2).max(2),
            mean_nodes: (self.mean_nodes / 2).max(2),
            ..self.clone()
        }
    }

    /// Unit-mass bump of radius `epsilon` on ℝ^{2m} at a fixed generic
    /// center near the origin.
    pub fn default_bump(&self, m: usize) -> BumpFunction {
        let center = (0..2 * m)
            .map(|i| 0.137 * ((i % 3) as f64 + 1.0) * if i % 2 == 0 { 1.0 } else { -0.5 })
            .collect();
        BumpFunction::new(center, self.epsilon)
    }
}

/// Outcome of a numeric check against a reference value.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericReport {
    pub value: f64,
    pub reference: f64,
    pub abs_error: f64,
    pub rel_error: f64,
    /// `|value − value at half resolution|`.
    pub error_estimate: f64,
    pub params: QuadratureParams,
}

impl NumericReport {
    pub fn new(value: f64, reference: f64, error_estimate: f64, params: QuadratureParams) -> Self {
        let abs_error = (value - reference).abs();
        let rel_error = if reference != 0.0 {
            abs_error / reference.abs()
        } else {
            abs_error
        };
        Self {
            value,
            reference,
            abs_error,
            rel_error,
            error_estimate,
            params,
        }
    }

    pub fn passed(&self) -> bool {
        self.rel_error <= self.params.tolerance
    }
}

impl fmt::Display for NumericReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        writeln!(f, "value = {:.12e}", self.value)?;
        writeln!(f, "reference = {:.12e}", self.reference)?;
        writeln!(f, "abs_error = {:.6e}", self.abs_error)?;
        writeln!(f, "rel_error = {:.6e}", self.rel_error)?;
        writeln!(f, "error_estimate = {:.6e}", self.error_estimate)?;
        write!(
            f,
            "params = half_width {} nodes {} mean_nodes {} lattice_radius {} epsilon {} tolerance {}",
            p.half_width, p.nodes, p.mean_nodes, p.lattice_radius, p.epsilon, p.tolerance
        )
    }
}
