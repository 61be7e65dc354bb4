//! Truncated Fock space of the level-1 representation.
//!
//! States are PBW monomials `Π a_j[-k] |λ⟩` with `λ` in the root lattice.
//! Modes act exactly on sparse vectors: the annihilation exponential turns
//! each creator `a_j[-k]` into `a_j[-k] + h(k) b_ij(k) z^{-k}`, the creation
//! exponential contributes polynomials in the creators, and the zero modes
//! act by `P_i |λ⟩ = (Aλ)_i |λ⟩`. No inner product is used anywhere.
//!
//! Mode convention: `X(z) = Σ_n X[n] z^{-n}` on every sector. With level-1
//! zero modes all exponents are integers; the sector-dependent shift of the
//! oscillator degree is `Δ = -n - e_z`, where `e_z` is the power of `z`
//! produced by the zero modes on `|λ⟩`.

mod basis;
mod operator;

pub use basis::{enumerate_sector, partition_count, FockBasisState, OscState};
pub use operator::{
    commutator_check, current_mode_matrix, CommutatorReport, FockVector, ModeMatrix, ModeOperator,
};
