//! Exact scalar bookkeeping: half-integer monomials `p^{a/2} q^{b/2}` and
//! Laurent polynomials in `β` with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::config::DeformationParams;

/// `p^{p_half/2} q^{q_half/2}`, evaluated as `(√p)^{p_half} (√q)^{q_half}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct PqMonomial {
    pub p_half: i32,
    pub q_half: i32,
}

impl PqMonomial {
    pub const ONE: PqMonomial = PqMonomial { p_half: 0, q_half: 0 };

    pub const fn new(p_half: i32, q_half: i32) -> Self {
        Self { p_half, q_half }
    }

    pub const fn p() -> Self {
        Self::new(2, 0)
    }

    pub const fn q() -> Self {
        Self::new(0, 2)
    }

    /// `p/q`.
    pub const fn r() -> Self {
        Self::new(2, -2)
    }

    pub const fn sqrt_p() -> Self {
        Self::new(1, 0)
    }

    pub const fn sqrt_q() -> Self {
        Self::new(0, 1)
    }

    pub fn is_one(self) -> bool {
        self == Self::ONE
    }

    pub fn pow(self, k: i32) -> Self {
        Self::new(self.p_half * k, self.q_half * k)
    }

    pub fn inv(self) -> Self {
        self.pow(-1)
    }

    /// Returns `k >= 1` with `self = base^k`, if any.
    pub fn as_power_of(self, base: PqMonomial) -> Option<i32> {
        if base.is_one() {
            return None;
        }
        let k = if base.p_half != 0 {
            if self.p_half % base.p_half != 0 {
                return None;
            }
            self.p_half / base.p_half
        } else {
            if self.q_half % base.q_half != 0 {
                return None;
            }
            self.q_half / base.q_half
        };
        (k >= 1 && base.pow(k) == self).then_some(k)
    }

    pub fn eval(self, prm: &DeformationParams) -> C64 {
        prm.sqrt_p().powi(self.p_half) * prm.sqrt_q().powi(self.q_half)
    }

    /// `Log` of the monomial under the global branch convention.
    pub fn log(self, prm: &DeformationParams) -> C64 {
        prm.log_p() * (self.p_half as f64 * 0.5) + prm.log_q() * (self.q_half as f64 * 0.5)
    }
}

impl Mul for PqMonomial {
    type Output = PqMonomial;
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.p_half + rhs.p_half, self.q_half + rhs.q_half)
    }
}

impl Div for PqMonomial {
    type Output = PqMonomial;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv()
    }
}

impl fmt::Display for PqMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn part(f: &mut fmt::Formatter<'_>, sym: &str, half: i32) -> fmt::Result {
            match half {
                0 => Ok(()),
                2 => write!(f, "{sym}"),
                h if h % 2 == 0 => write!(f, "{sym}^{}", h / 2),
                h => write!(f, "{sym}^({h}/2)"),
            }
        }
        if self.is_one() {
            return f.write_str("1");
        }
        part(f, "p", self.p_half)?;
        part(f, "q", self.q_half)
    }
}

/// Laurent polynomial in `β` with integer coefficients, e.g. `2β - 1/β`.
///
/// Zero-mode exponents of the screening currents live here; for the modified
/// currents they are plain integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct BetaPoly(BTreeMap<i32, i64>);

impl BetaPoly {
    pub fn zero() -> Self {
        Self(BTreeMap::new())
    }

    pub fn constant(k: i64) -> Self {
        Self::term(k, 0)
    }

    /// `k β^power`.
    pub fn term(k: i64, power: i32) -> Self {
        let mut m = BTreeMap::new();
        if k != 0 {
            m.insert(power, k);
        }
        Self(m)
    }

    pub fn beta() -> Self {
        Self::term(1, 1)
    }

    pub fn inv_beta() -> Self {
        Self::term(1, -1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// The value when the polynomial has no `β` dependence.
    pub fn as_integer(&self) -> Option<i64> {
        match self.0.len() {
            0 => Some(0),
            1 => self.0.get(&0).copied(),
            _ => None,
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero();
        for (&pw, &c) in &self.0 {
            out.add_term(pw, c * k);
        }
        out
    }

    fn add_term(&mut self, power: i32, k: i64) {
        let e = self.0.entry(power).or_insert(0);
        *e += k;
        if *e == 0 {
            self.0.remove(&power);
        }
    }

    pub fn eval(&self, beta: C64) -> C64 {
        self.0
            .iter()
            .map(|(&pw, &k)| beta.powi(pw) * k as f64)
            .sum()
    }
}

impl Add for &BetaPoly {
    type Output = BetaPoly;
    fn add(self, rhs: &BetaPoly) -> BetaPoly {
        let mut out = self.clone();
        for (&pw, &k) in &rhs.0 {
            out.add_term(pw, k);
        }
        out
    }
}

impl Sub for &BetaPoly {
    type Output = BetaPoly;
    fn sub(self, rhs: &BetaPoly) -> BetaPoly {
        self + &(-rhs)
    }
}

impl Neg for &BetaPoly {
    type Output = BetaPoly;
    fn neg(self) -> BetaPoly {
        self.scale(-1)
    }
}

impl Mul for &BetaPoly {
    type Output = BetaPoly;
    fn mul(self, rhs: &BetaPoly) -> BetaPoly {
        let mut out = BetaPoly::zero();
        for (&a, &x) in &self.0 {
            for (&b, &y) in &rhs.0 {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl fmt::Display for BetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&pw, &k) in self.0.iter().rev() {
            if !first {
                f.write_str(if k < 0 { " - " } else { " + " })?;
            } else if k < 0 {
                f.write_str("-")?;
            }
            first = false;
            let a = k.abs();
            match pw {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    match pw {
                        1 => f.write_str("β")?,
                        _ => write!(f, "β^{pw}")?,
                    }
                }
            }
        }
        Ok(())
    }
}
