//! Exact and numeric tools for model divisors `d[λ, μ]` on tube domains.
//!
//! `d[λ, μ]` is the zero divisor of `g(⟨z,λ⟩ + i⟨z,μ⟩)` where `g` is entire
//! with simple zeros on the Gaussian integers. A formal integer combination
//! of such divisors is the divisor of a holomorphic function with
//! almost-periodic modulus exactly when its skew matrix
//! `A(d) = Σ mult·((μ,λ) − (λ,μ))` vanishes.
//!
//! Modules:
//!
//! - [`scalar`]: exact arithmetic in a real number field ℚ(θ).
//! - [`wedge`]: the rational exterior square used as the class model.
//! - [`divisor`]: divisors, `A(d)`, Gram sums, periods and classification.
//! - [`decompose`]: certified decomposition into degenerate pairs.
//! - [`numerics`]: zero sheets, bump functions and current mean values.
//! - [`format`]: the plain-text divisor file format.

pub mod decompose;
pub mod divisor;
pub mod format;
pub mod numerics;
mod poly;
pub mod scalar;
pub mod wedge;

pub use decompose::{decompose, verify_certificate, Certificate, DegeneratePair, TermList};
pub use divisor::{
    a_matrix, ap_modulus_criterion, classify_pair, congruence, gram_sum, outer, periods, AMatrix,
    Divisor, GramMatrix, Matrix, Pair, PairClass,
};
pub use format::{parse_divisor, write_divisor, ParseError};
pub use scalar::{Field, FieldError, Scalar};
pub use wedge::{class_of, embed, wedge, QVector, Wedge2};
