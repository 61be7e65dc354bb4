//! Free-field (level-1) currents of an elliptic deformation of affine
//! simply-laced algebras, with a relation checker.
//!
//! The crate is organised bottom-up:
//!
//! - [`config`]: Cartan data and the deformation parameters `p`, `q`, `c`.
//! - [`monomial`]: exact half-integer monomials in `p`, `q` and Laurent
//!   polynomials in `β`, the scalar bookkeeping shared by everything else.
//! - [`qlaurent`]: truncated Laurent series, q-Pochhammer and theta
//!   evaluation, formal delta combs.
//! - [`heisenberg`]: the deformed Heisenberg algebra, oscillator coefficient
//!   maps and zero-mode words.
//! - [`ope`]: current specifications and the contraction engine.
//! - [`fock`]: truncated Fock space and exact mode matrices.
//! - [`verifier`]: the relation catalogue, checks and report assembly.
//!
//! Branch convention: every non-integer power of `p` or `q` is taken from
//! the principal logarithms `Log p`, `Log q`; half-integer monomials are
//! integer powers of the fixed principal roots `√p`, `√q`. Spectral
//! variables are sampled with `z` on the positive real axis so that
//! `(z x)^e = z^e x^e` holds for the principal branch.

pub mod config;
pub mod error;
pub mod fock;
pub mod heisenberg;
pub mod monomial;
pub mod ope;
pub mod qlaurent;
pub mod verifier;

pub use config::{CartanMatrix, DeformationParams, SeriesType};
pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Shared context: Cartan data, parameters and the memoised Heisenberg table.
#[derive(Debug, Clone)]
pub struct Algebra {
    pub cartan: CartanMatrix,
    pub params: DeformationParams,
    pub brackets: heisenberg::ModeBracketTable,
}

impl Algebra {
    pub fn new(cartan: CartanMatrix, params: DeformationParams) -> Self {
        let brackets = heisenberg::ModeBracketTable::new(&cartan, &params, 128);
        Self {
            cartan,
            params,
            brackets,
        }
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }
}
