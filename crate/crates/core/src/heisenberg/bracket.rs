use std::collections::HashMap;

use num_complex::Complex64 as C64;

use crate::config::{CartanMatrix, DeformationParams};
use crate::error::{Error, Result};
use crate::monomial::PqMonomial;

/// `b(n)` for a Cartan entry `a`:
/// `(1/n)(1 - q^n)(p^{a n/2} - p^{-a n/2})(1 - (p/q)^n)/(1 - p^n)`, and 0 at `n = 0`.
pub fn bracket_closed_form(prm: &DeformationParams, a: i64, n: i64) -> C64 {
    if n == 0 {
        return C64::new(0.0, 0.0);
    }
    let one = C64::new(1.0, 0.0);
    let nn = n as i32;
    let qn = prm.q.powi(nn);
    let pn = prm.p.powi(nn);
    let rn = PqMonomial::r().pow(nn).eval(prm);
    let half = PqMonomial::sqrt_p().pow((a * n) as i32).eval(prm);
    (one - qn) * (half - half.inv()) * (one - rn) / ((one - pn) * n as f64)
}

/// Memoised `[a_i[n], a_j[-n]]`, keyed by `(A_ij, n)`.
#[derive(Debug, Clone)]
pub struct ModeBracketTable {
    cartan: CartanMatrix,
    params: DeformationParams,
    cache: HashMap<(i64, i64), C64>,
}

impl ModeBracketTable {
    /// Precomputes every `|n| <= max_mode` for the entries present in `cartan`.
    pub fn new(cartan: &CartanMatrix, params: &DeformationParams, max_mode: i64) -> Self {
        let mut entries: Vec<i64> = cartan.entries().iter().flatten().copied().collect();
        entries.sort_unstable();
        entries.dedup();
        let mut cache = HashMap::new();
        for a in entries {
            for n in -max_mode..=max_mode {
                cache.insert((a, n), bracket_closed_form(params, a, n));
            }
        }
        Self {
            cartan: cartan.clone(),
            params: params.clone(),
            cache,
        }
    }

    /// `[a_i[n], a_j[m]]`.
    pub fn bracket(&self, i: usize, j: usize, n: i64, m: i64) -> Result<C64> {
        let r = self.cartan.rank();
        if i >= r || j >= r {
            return Err(Error::Contract(format!("node index out of range for rank {r}")));
        }
        if n + m != 0 || n == 0 {
            return Ok(C64::new(0.0, 0.0));
        }
        Ok(self.value(self.cartan.entry(i, j), n))
    }

    /// `b_{ij}(n)` through the Cartan entry.
    pub fn value(&self, a: i64, n: i64) -> C64 {
        match self.cache.get(&(a, n)) {
            Some(v) => *v,
            None => bracket_closed_form(&self.params, a, n),
        }
    }
}
