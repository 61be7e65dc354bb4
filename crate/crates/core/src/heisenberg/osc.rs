use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::geom::GeometricRational;
use crate::error::{Error, Result};
use crate::monomial::PqMonomial;
use crate::Algebra;

/// The four simple currents built on one node.
///
/// `SPlus`/`SMinus` are the screening currents, `E`/`F` their versions with
/// modified zero modes; oscillator content is shared pairwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SimpleKind {
    SPlus,
    SMinus,
    E,
    F,
}

impl SimpleKind {
    /// Whether the oscillator part is built on `s⁺` (otherwise `s⁻`).
    pub fn is_plus_type(self) -> bool {
        matches!(self, SimpleKind::SPlus | SimpleKind::E)
    }
}

/// Multiplier of `a_i[m]` in the exponent, as a function of `m > 0`, for
/// mode `+m` (`positive = true`) or `-m`.
///
/// Plus type: `s⁺[m] = a[m]/(q^{-m} - 1)`, giving `q^m/(1-q^m)` and
/// `-1/(1-q^m)`. Minus type enters with an overall minus sign:
/// `-s⁻[m] = a[m]/((q/p)^m - 1)`, giving `r^m/(1-r^m)` and `-1/(1-r^m)`
/// with `r = p/q`.
pub fn osc_coeff_symbolic(kind: SimpleKind, positive: bool) -> GeometricRational {
    let base = if kind.is_plus_type() {
        PqMonomial::q()
    } else {
        PqMonomial::r()
    };
    let num = if positive {
        GeometricRational::monomial(1, base)
    } else {
        GeometricRational::constant(-1)
    };
    num.mul(&GeometricRational::binomial(base, -1))
}

/// Numeric multiplier of `a_i[m]`, `m ≠ 0`.
pub fn osc_coeff(alg: &Algebra, kind: SimpleKind, m: i64) -> Result<C64> {
    if m == 0 {
        return Err(Error::Contract(
            "oscillator coefficient requested at m = 0; zero modes live in ZeroModeWord".into(),
        ));
    }
    Ok(osc_coeff_symbolic(kind, m > 0).eval(&alg.params, m.abs()))
}

/// `m · b(m)` for a Cartan entry `a`, `m > 0`:
/// `(1 - q^m)(p^{am/2} - p^{-am/2})(1 - r^m)/(1 - p^m)`.
///
/// The difference of powers is written as a monomial times `(1 - p^{|a| m})`
/// so that it can cancel against `1 - p^m`.
pub fn bracket_symbolic(a: i64) -> GeometricRational {
    if a == 0 {
        return GeometricRational::zero();
    }
    let a32 = a as i32;
    let diff = if a > 0 {
        GeometricRational::monomial(-1, PqMonomial::sqrt_p().pow(-a32))
            .mul(&GeometricRational::binomial(PqMonomial::p().pow(a32), 1))
    } else {
        GeometricRational::monomial(1, PqMonomial::sqrt_p().pow(a32))
            .mul(&GeometricRational::binomial(PqMonomial::p().pow(-a32), 1))
    };
    GeometricRational::binomial(PqMonomial::q(), 1)
        .mul(&diff)
        .mul(&GeometricRational::binomial(PqMonomial::r(), 1))
        .mul(&GeometricRational::binomial(PqMonomial::p(), -1))
}

/// `c_m = x(m) y(-m) b_ij(m)`: the scalar obtained by commuting the
/// annihilation part of `X` at node `i` past the creation part of `Y` at `j`.
pub fn contraction_log_coeff(
    alg: &Algebra,
    kind_x: SimpleKind,
    i: usize,
    kind_y: SimpleKind,
    j: usize,
    m: i64,
) -> Result<C64> {
    if m < 1 {
        return Err(Error::Contract(format!("contraction coefficient needs m >= 1, got {m}")));
    }
    let b = alg.brackets.bracket(i, j, m, -m)?;
    Ok(osc_coeff(alg, kind_x, m)? * osc_coeff(alg, kind_y, -m)? * b)
}
