//! Current specifications and the contraction engine.
//!
//! A product of normal-ordered exponentials is rewritten as
//! `(zero-mode c-number) · Π C(ratio) · :product:`, where each contraction
//! function `C` comes from commuting annihilators past creators. `C` is
//! carried symbolically as `exp Σ_m (1/m) Σ_t k_t λ_t^m / Π_d (1 - u_d^m) x^m`,
//! which sums to the convergent product `Π_t Π_{n≥0} (1 - λ_t u^n x)^{-k_t}`:
//! the analytic continuation used whenever `x` lies outside the radius of the
//! power series.

mod closed;
mod contraction;
mod engine;
mod spec;

pub use closed::{closed_form, ClosedForm, PairKind};
pub use contraction::ContractionFunction;
pub use engine::{contract, normal_order_scalar, OpeResult, Placed};
pub use spec::{compose_h, Constituent, CurrentKind, CurrentSpec};
