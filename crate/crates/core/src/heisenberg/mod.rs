//! The deformed Heisenberg algebra: mode brackets, oscillator coefficient
//! maps of the four simple currents, and zero-mode words.

mod bracket;
mod geom;
mod osc;
mod zero_mode;

pub use bracket::{bracket_closed_form, ModeBracketTable};
pub use geom::{GeometricRational, PowerSumTerm};
pub use osc::{bracket_symbolic, contraction_log_coeff, osc_coeff, osc_coeff_symbolic, SimpleKind};
pub use zero_mode::{zero_mode_reorder, MomentumFactor, SpectralPower, ZeroModeWord};
