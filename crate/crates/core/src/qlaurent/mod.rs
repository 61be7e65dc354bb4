//! Truncated Laurent series, q-Pochhammer / theta evaluation and formal
//! delta combs.

mod delta;
mod pochhammer;
mod series;

pub use delta::{delta_extract, DeltaComb, DeltaTerm};
pub use pochhammer::{qpochhammer, theta, DEFAULT_ORDER};
pub use series::{series_exp, Annulus, LaurentSeries, Variable};
