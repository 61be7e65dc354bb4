use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::series::{LaurentSeries, Variable};
use crate::error::{Error, Result};

/// One term `weight · δ(x / support)`, where `δ(u) = Σ_{n∈Z} u^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaTerm {
    pub support: C64,
    pub weight: C64,
}

/// Finite sum of weighted formal delta distributions in one variable.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DeltaComb {
    pub terms: Vec<DeltaTerm>,
    /// Largest coefficient residual left after subtracting the comb, relative to
    /// the largest input coefficient (rows scaled as in [`delta_extract`]).
    pub residual: f64,
}

impl DeltaComb {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `x^n`: `Σ_k w_k support_k^{-n}`.
    pub fn coeff(&self, n: i64) -> C64 {
        self.terms
            .iter()
            .map(|t| t.weight * t.support.powi(-(n as i32)))
            .sum()
    }

    /// Term whose support is within `tol` (relative) of `point`.
    pub fn term_at(&self, point: C64, tol: f64) -> Option<&DeltaTerm> {
        self.terms
            .iter()
            .find(|t| (t.support - point).norm() <= tol * point.norm().max(1.0))
    }
}

/// Matches `inner - outer` against `Σ_k w_k δ(x/x_k)` over the candidate
/// supports `poles`.
///
/// `inner` must be an expansion in `x` (valid near 0) and `outer` an expansion
/// in `1/x` (valid near infinity) of the same function. The comparison runs
/// over every exponent where both are known. Each coefficient row is scaled by
/// `max_k |x_k|^{-n}` so the widely different growth rates of the supports stay
/// well conditioned; the weights come from complex least squares.
pub fn delta_extract(
    inner: &LaurentSeries,
    outer: &LaurentSeries,
    poles: &[C64],
    tol: f64,
) -> Result<DeltaComb> {
    if inner.var() != Variable::X || outer.var() != Variable::InvX {
        return Err(Error::Contract(
            "delta_extract needs an inner series in x and an outer series in 1/x".into(),
        ));
    }
    if (inner.offset() - outer.offset()).norm() > 1e-14 {
        return Err(Error::Contract("inner and outer series carry different offsets".into()));
    }
    for (a, pa) in poles.iter().enumerate() {
        if pa.norm() == 0.0 {
            return Err(Error::Contract("delta support at the origin".into()));
        }
        for pb in &poles[a + 1..] {
            if (pa - pb).norm() <= 1e-12 * pa.norm() {
                return Err(Error::Contract("candidate supports are not distinct".into()));
            }
        }
    }

    let hi = inner.order() - 1;
    let lo = -(outer.order() - 1);
    if lo > hi {
        return Err(Error::Contract("inner and outer windows do not overlap".into()));
    }

    // rows: n, scaled data g_n / r_n and scaled basis x_k^{-n} / r_n
    let mut rows: Vec<(i64, f64, C64, Vec<C64>)> = Vec::new();
    // residuals are measured against the size of the inputs, so that an
    // exact cancellation reads as roundoff rather than as O(1) noise
    let mut scale = 0.0f64;
    for n in lo..=hi {
        let a = inner.coeff_x(n).unwrap_or_default();
        let b = outer.coeff_x(n).unwrap_or_default();
        let g = a - b;
        let basis: Vec<C64> = poles.iter().map(|x| x.powi(-(n as i32))).collect();
        let r = basis
            .iter()
            .map(|b| b.norm())
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE);
        let r = if poles.is_empty() { 1.0 } else { r };
        scale = scale.max(a.norm().max(b.norm()) / r);
        rows.push((n, r, g / r, basis.iter().map(|b| b / r).collect()));
    }

    let k = poles.len();
    let weights = if k == 0 {
        Vec::new()
    } else {
        let mut normal = vec![vec![C64::new(0.0, 0.0); k]; k];
        let mut rhs = vec![C64::new(0.0, 0.0); k];
        for (_, _, g, b) in &rows {
            for a in 0..k {
                for c in 0..k {
                    normal[a][c] += b[a].conj() * b[c];
                }
                rhs[a] += b[a].conj() * g;
            }
        }
        solve(normal, rhs)?
    };

    let mut profile = Vec::with_capacity(rows.len());
    let mut worst = 0.0f64;
    for (n, _, g, b) in &rows {
        let model: C64 = b.iter().zip(&weights).map(|(x, w)| x * w).sum();
        let res = if scale > 0.0 { (g - model).norm() / scale } else { 0.0 };
        worst = worst.max(res);
        profile.push((*n, res));
    }
    if worst > tol {
        return Err(Error::NotDeltaComb {
            max_residual: worst,
            residual_profile: profile,
        });
    }

    let wmax = weights.iter().map(|w| w.norm()).fold(0.0f64, f64::max);
    let terms = poles
        .iter()
        .zip(&weights)
        .filter(|(_, w)| scale > 0.0 && w.norm() > tol * wmax.max(f64::MIN_POSITIVE))
        .map(|(&support, &weight)| DeltaTerm { support, weight })
        .collect();
    Ok(DeltaComb {
        terms,
        residual: worst,
    })
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<C64>>, mut b: Vec<C64>) -> Result<Vec<C64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
            .unwrap();
        if a[piv][col].norm() < 1e-300 {
            return Err(Error::Contract("singular delta-comb fit".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let s: C64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Ok(x)
}
