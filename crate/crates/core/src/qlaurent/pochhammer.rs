use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Default number of factors kept in every truncated infinite product.
pub const DEFAULT_ORDER: usize = 80;

/// `∏_{n=0}^{order-1} (1 - x a^n)`.
///
/// The tail of the infinite product is bounded by `C |a|^order` for bounded
/// `|x|`.
pub fn qpochhammer(x: C64, a: C64, order: usize) -> Result<C64> {
    if a.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "q-Pochhammer base needs |a| < 1, got {}",
            a.norm()
        )));
    }
    let one = C64::new(1.0, 0.0);
    let mut acc = one;
    let mut term = x;
    for _ in 0..order {
        acc *= one - term;
        term *= a;
    }
    Ok(acc)
}

/// `θ_a(x) = (x|a)_∞ (a/x|a)_∞ (a|a)_∞`, each factor truncated at `order`.
pub fn theta(x: C64, a: C64, order: usize) -> Result<C64> {
    if x.norm() == 0.0 {
        return Err(Error::Domain("theta function needs x != 0".into()));
    }
    Ok(qpochhammer(x, a, order)? * qpochhammer(a / x, a, order)? * qpochhammer(a, a, order)?)
}
