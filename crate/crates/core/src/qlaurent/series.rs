use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Expansion variable: `x` itself (inner expansions) or `1/x` (outer).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variable {
    X,
    InvX,
}

/// Annulus `inner < |x| < outer` in which the series is claimed to converge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub inner: f64,
    pub outer: f64,
}

impl Annulus {
    pub const ALL: Annulus = Annulus {
        inner: 0.0,
        outer: f64::INFINITY,
    };

    pub fn intersect(self, other: Annulus) -> Annulus {
        Annulus {
            inner: self.inner.max(other.inner),
            outer: self.outer.min(other.outer),
        }
    }

    pub fn contains(self, r: f64) -> bool {
        r > self.inner && r < self.outer
    }
}

/// Truncated Laurent series `x^offset Σ_k c_k v^{min_exp + k}` in the variable
/// `v` (`x` or `1/x`), with every exponent `>= order` unknown.
///
/// The offset is a single global exponent shift shared by all coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentSeries {
    var: Variable,
    offset: C64,
    min_exp: i64,
    coeffs: Vec<C64>,
    order: i64,
    annulus: Annulus,
}

impl LaurentSeries {
    pub fn new(var: Variable, min_exp: i64, coeffs: Vec<C64>, order: i64) -> Result<Self> {
        if min_exp + coeffs.len() as i64 > order {
            return Err(Error::Contract(format!(
                "coefficients reach exponent {} beyond truncation order {order}",
                min_exp + coeffs.len() as i64 - 1
            )));
        }
        Ok(Self {
            var,
            offset: C64::new(0.0, 0.0),
            min_exp,
            coeffs,
            order,
            annulus: Annulus::ALL,
        })
    }

    /// Power series `Σ_{k<order} c_k v^k` from a coefficient vector; `order`
    /// is the vector length.
    pub fn power_series(var: Variable, coeffs: Vec<C64>) -> Self {
        let order = coeffs.len() as i64;
        Self::new(var, 0, coeffs, order).expect("length equals order")
    }

    pub fn zero(var: Variable, order: i64) -> Self {
        Self::new(var, order.min(0), Vec::new(), order).expect("empty series")
    }

    pub fn one(var: Variable, order: i64) -> Self {
        Self::monomial(var, C64::new(1.0, 0.0), 0, order)
    }

    pub fn monomial(var: Variable, c: C64, exponent: i64, order: i64) -> Self {
        if exponent >= order {
            return Self::zero(var, order);
        }
        Self::new(var, exponent, vec![c], order).expect("exponent below order")
    }

    pub fn with_annulus(mut self, annulus: Annulus) -> Self {
        self.annulus = annulus;
        self
    }

    pub fn with_offset(mut self, offset: C64) -> Self {
        self.offset = offset;
        self
    }

    pub fn var(&self) -> Variable {
        self.var
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn offset(&self) -> C64 {
        self.offset
    }

    pub fn annulus(&self) -> Annulus {
        self.annulus
    }

    pub fn min_exponent(&self) -> i64 {
        self.min_exp
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of `v^e`; `None` when `e` is at or beyond the truncation.
    pub fn coeff(&self, e: i64) -> Option<C64> {
        if e >= self.order {
            return None;
        }
        let k = e - self.min_exp;
        if k < 0 || k >= self.coeffs.len() as i64 {
            Some(C64::new(0.0, 0.0))
        } else {
            Some(self.coeffs[k as usize])
        }
    }

    /// Coefficient of `x^n` regardless of the expansion variable.
    pub fn coeff_x(&self, n: i64) -> Option<C64> {
        match self.var {
            Variable::X => self.coeff(n),
            Variable::InvX => self.coeff(-n),
        }
    }

    /// Smallest exponent with a non-zero coefficient, or `order` when none.
    pub fn valuation(&self) -> i64 {
        self.coeffs
            .iter()
            .position(|c| c.norm() != 0.0)
            .map(|k| self.min_exp + k as i64)
            .unwrap_or(self.order)
    }

    /// Strips explicit leading and trailing zeros.
    pub fn canonicalize(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_exp += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.min_exp = self.order.min(0);
        }
        self
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.var != other.var {
            return Err(Error::Contract("series in different variables".into()));
        }
        if (self.offset - other.offset).norm() > 1e-14 {
            return Err(Error::Contract("series with different exponent offsets".into()));
        }
        Ok(())
    }

    fn from_range(&self, lo: i64, order: i64, f: impl Fn(i64) -> C64) -> Self {
        let lo = lo.min(order);
        let coeffs = (lo..order).map(f).collect();
        Self {
            var: self.var,
            offset: self.offset,
            min_exp: lo,
            coeffs,
            order,
            annulus: self.annulus,
        }
        .canonicalize()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let order = self.order.min(other.order);
        let lo = self.min_exp.min(other.min_exp);
        let mut out = self.from_range(lo, order, |e| {
            self.coeff(e).unwrap_or_default() + other.coeff(e).unwrap_or_default()
        });
        out.annulus = self.annulus.intersect(other.annulus);
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for v in &mut out.coeffs {
            *v *= c;
        }
        out.canonicalize()
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.min_exp += k;
        out.order += k;
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.var != other.var {
            return Err(Error::Contract("series in different variables".into()));
        }
        let va = self.valuation();
        let vb = other.valuation();
        let order = (self.order + vb).min(other.order + va);
        let mut coeffs = vec![C64::new(0.0, 0.0); (order - (va + vb)).max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            let ea = self.min_exp + i as i64;
            if a.norm() == 0.0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let e = ea + other.min_exp + j as i64;
                if e >= order {
                    break;
                }
                coeffs[(e - va - vb) as usize] += a * b;
            }
        }
        Ok(Self {
            var: self.var,
            offset: self.offset + other.offset,
            min_exp: (va + vb).min(order),
            coeffs,
            order,
            annulus: self.annulus.intersect(other.annulus),
        }
        .canonicalize())
    }

    /// Multiplicative inverse of a series with a non-zero leading coefficient.
    pub fn inverse(&self) -> Result<Self> {
        let v = self.valuation();
        if v >= self.order {
            return Err(Error::Contract("cannot invert a series with no known non-zero term".into()));
        }
        let n = (self.order - v) as usize;
        let a: Vec<C64> = (0..n).map(|k| self.coeff(v + k as i64).unwrap()).collect();
        let mut b = vec![C64::new(0.0, 0.0); n];
        b[0] = a[0].inv();
        for k in 1..n {
            let s: C64 = (1..=k).map(|j| a[j] * b[k - j]).sum();
            b[k] = -s * b[0];
        }
        Ok(Self {
            var: self.var,
            offset: -self.offset,
            min_exp: -v,
            coeffs: b,
            order: -v + n as i64,
            annulus: self.annulus,
        }
        .canonicalize())
    }

    /// Substitutes `v = 1/x` (or back): the same coefficients now multiply
    /// powers of the other variable. Turns `f(y)` expanded at small `y` into
    /// the outer expansion of `f(1/x)`.
    pub fn substitute_inverse(&self) -> Self {
        let mut out = self.clone();
        out.var = match self.var {
            Variable::X => Variable::InvX,
            Variable::InvX => Variable::X,
        };
        out.annulus = Annulus {
            inner: if self.annulus.outer.is_finite() { 1.0 / self.annulus.outer } else { 0.0 },
            outer: if self.annulus.inner > 0.0 { 1.0 / self.annulus.inner } else { f64::INFINITY },
        };
        out
    }

    /// Partial sum at the point `x` (for `InvX` series the sum runs in `1/x`).
    pub fn eval(&self, x: C64) -> C64 {
        let v = match self.var {
            Variable::X => x,
            Variable::InvX => x.inv(),
        };
        let mut acc = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * v + c;
        }
        let lead = v.powi(self.min_exp as i32);
        let off = if self.offset.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            (self.offset * x.ln()).exp()
        };
        acc * lead * off
    }
}

/// Truncated exponential of a series with no negative exponents and zero
/// constant term; the result has constant term 1.
pub fn series_exp(log: &LaurentSeries) -> Result<LaurentSeries> {
    if log.offset.norm() != 0.0 {
        return Err(Error::Contract("series_exp needs a series without exponent offset".into()));
    }
    let v = log.valuation();
    if v < 0 {
        return Err(Error::Contract("series_exp argument has negative exponents".into()));
    }
    if v == 0 {
        return Err(Error::Contract("series_exp argument has a non-zero constant term".into()));
    }
    let order = log.order.max(0);
    let n = order as usize;
    let l: Vec<C64> = (0..n as i64).map(|k| log.coeff(k).unwrap()).collect();
    let mut e = vec![C64::new(0.0, 0.0); n];
    if n > 0 {
        e[0] = C64::new(1.0, 0.0);
    }
    // n e_n = Σ_{k=1}^{n} k l_k e_{n-k}
    for m in 1..n {
        let mut s = C64::new(0.0, 0.0);
        for k in 1..=m {
            s += l[k] * e[m - k] * k as f64;
        }
        e[m] = s / m as f64;
    }
    Ok(LaurentSeries::new(log.var, 0, e, order)?
        .with_annulus(log.annulus)
        .canonicalize())
}
