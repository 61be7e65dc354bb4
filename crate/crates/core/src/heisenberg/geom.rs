use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::config::DeformationParams;
use crate::error::{Error, Result};
use crate::monomial::PqMonomial;

/// A function of a positive integer `m` of the form
///
/// `Σ_t k_t μ_t^m · Π_v (1 - v^m)^{e_v}`
///
/// with integer `k_t`, `e_v` and monomial bases `μ_t`, `v`. Oscillator
/// coefficients and `m · b(m)` are all of this shape, and so is every
/// contraction coefficient `m · c_m`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeometricRational {
    numerator: BTreeMap<PqMonomial, i64>,
    factors: BTreeMap<PqMonomial, i32>,
}

/// `k λ^m / Π_d (1 - u_d^m)` with every `|u_d| < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSumTerm {
    pub coeff: i64,
    pub lambda: PqMonomial,
    pub denominators: Vec<PqMonomial>,
}

impl PowerSumTerm {
    pub fn eval(&self, prm: &DeformationParams, m: i64) -> C64 {
        let mm = m as i32;
        let one = C64::new(1.0, 0.0);
        let mut v = self.lambda.pow(mm).eval(prm) * self.coeff as f64;
        for u in &self.denominators {
            v /= one - u.pow(mm).eval(prm);
        }
        v
    }
}

impl GeometricRational {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `k μ^m`.
    pub fn monomial(k: i64, mu: PqMonomial) -> Self {
        let mut numerator = BTreeMap::new();
        if k != 0 {
            numerator.insert(mu, k);
        }
        Self {
            numerator,
            factors: BTreeMap::new(),
        }
    }

    pub fn constant(k: i64) -> Self {
        Self::monomial(k, PqMonomial::ONE)
    }

    /// `(1 - v^m)^e`.
    pub fn binomial(v: PqMonomial, e: i32) -> Self {
        let mut out = Self::constant(1);
        if e != 0 {
            out.factors.insert(v, e);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut numerator = BTreeMap::new();
        for (&a, &x) in &self.numerator {
            for (&b, &y) in &other.numerator {
                add_to(&mut numerator, a * b, x * y);
            }
        }
        let mut factors = self.factors.clone();
        for (&v, &e) in &other.factors {
            let s = factors.entry(v).or_insert(0);
            *s += e;
            if *s == 0 {
                factors.remove(&v);
            }
        }
        if numerator.is_empty() {
            factors.clear();
        }
        Self { numerator, factors }
    }

    /// Direct numeric value at `m`.
    pub fn eval(&self, prm: &DeformationParams, m: i64) -> C64 {
        let mm = m as i32;
        let one = C64::new(1.0, 0.0);
        let num: C64 = self
            .numerator
            .iter()
            .map(|(mu, &k)| mu.pow(mm).eval(prm) * k as f64)
            .sum();
        self.factors
            .iter()
            .fold(num, |acc, (v, &e)| acc * (one - v.pow(mm).eval(prm)).powi(e))
    }

    /// Rewrites into `Σ_t k_t λ_t^m / Π_d (1 - u_d^m)` with every `|u_d| < 1`.
    ///
    /// Factors with `|v| > 1` are flipped through
    /// `1 - v^m = -v^m (1 - v^{-m})`, ratios `(1 - u^{km})/(1 - u^m)` are
    /// reduced to finite geometric sums, and surviving numerator factors are
    /// multiplied out.
    pub fn normalize(&self, prm: &DeformationParams) -> Result<Vec<PowerSumTerm>> {
        if self.is_zero() {
            return Ok(Vec::new());
        }
        let mut numerator = self.numerator.clone();
        let mut factors: BTreeMap<PqMonomial, i32> = BTreeMap::new();
        for (&v, &e) in &self.factors {
            if v.is_one() {
                if e > 0 {
                    return Ok(Vec::new());
                }
                return Err(Error::Domain("factor (1 - 1^m) in a denominator".into()));
            }
            let modulus = v.eval(prm).norm();
            if (modulus - 1.0).abs() < 1e-13 {
                return Err(Error::Domain(format!(
                    "factor (1 - ({v})^m) lies on the unit circle"
                )));
            }
            let key = if modulus > 1.0 {
                // (1 - v^m)^e = (-1)^e v^{me} (1 - v^{-m})^e
                let sign = if e.rem_euclid(2) == 0 { 1 } else { -1 };
                numerator = numerator
                    .into_iter()
                    .map(|(mu, k)| (mu * v.pow(e), k * sign))
                    .collect();
                v.inv()
            } else {
                v
            };
            let s = factors.entry(key).or_insert(0);
            *s += e;
            if *s == 0 {
                factors.remove(&key);
            }
        }

        // (1 - u^{km}) / (1 - u^m) = Σ_{j<k} u^{jm}
        loop {
            let pair = factors.iter().filter(|(_, &e)| e > 0).find_map(|(&v, _)| {
                factors
                    .iter()
                    .filter(|(_, &e)| e < 0)
                    .find_map(|(&u, _)| v.as_power_of(u).map(|k| (v, u, k)))
            });
            let Some((v, u, k)) = pair else { break };
            for key in [v, u] {
                let d = if key == v { -1 } else { 1 };
                let s = factors.get_mut(&key).expect("present");
                *s += d;
                if *s == 0 {
                    factors.remove(&key);
                }
            }
            let mut next = BTreeMap::new();
            for (&mu, &c) in &numerator {
                for j in 0..k {
                    add_to(&mut next, mu * u.pow(j), c);
                }
            }
            numerator = next;
        }

        let mut denominators = Vec::new();
        for (&v, &e) in &factors {
            if e > 0 {
                for _ in 0..e {
                    let mut next = BTreeMap::new();
                    for (&mu, &c) in &numerator {
                        add_to(&mut next, mu, c);
                        add_to(&mut next, mu * v, -c);
                    }
                    numerator = next;
                }
            } else {
                denominators.extend(std::iter::repeat(v).take((-e) as usize));
            }
        }
        Ok(numerator
            .into_iter()
            .map(|(lambda, coeff)| PowerSumTerm {
                coeff,
                lambda,
                denominators: denominators.clone(),
            })
            .collect())
    }
}

fn add_to(map: &mut BTreeMap<PqMonomial, i64>, key: PqMonomial, k: i64) {
    let e = map.entry(key).or_insert(0);
    *e += k;
    if *e == 0 {
        map.remove(&key);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prm() -> DeformationParams {
        DeformationParams::new(C64::new(0.08, 0.03), C64::new(0.25, -0.1), 1.into()).unwrap()
    }

    fn agree(g: &GeometricRational) {
        let prm = prm();
        let terms = g.normalize(&prm).unwrap();
        for m in 1..12 {
            let direct = g.eval(&prm, m);
            let via: C64 = terms.iter().map(|t| t.eval(&prm, m)).sum();
            assert!(
                (direct - via).norm() <= 1e-11 * direct.norm().max(1.0),
                "m={m}: {direct} vs {via}"
            );
        }
    }

    #[test]
    fn cancellation_to_finite_sum() {
        // (1 - p^{2m}) / (1 - p^m) = 1 + p^m
        let g = GeometricRational::binomial(PqMonomial::p().pow(2), 1)
            .mul(&GeometricRational::binomial(PqMonomial::p(), -1));
        let terms = g.normalize(&prm()).unwrap();
        assert_eq!(terms.len(), 2);
        assert!(terms.iter().all(|t| t.denominators.is_empty()));
        agree(&g);
    }

    #[test]
    fn flipped_factor_and_products() {
        let g = GeometricRational::monomial(3, PqMonomial::new(1, -3))
            .mul(&GeometricRational::binomial(PqMonomial::q().inv(), -1))
            .mul(&GeometricRational::binomial(PqMonomial::r(), 2))
            .mul(&GeometricRational::binomial(PqMonomial::p(), -2));
        let terms = g.normalize(&prm()).unwrap();
        assert!(terms.iter().all(|t| t
            .denominators
            .iter()
            .all(|u| u.eval(&prm()).norm() < 1.0)));
        agree(&g);
    }

    #[test]
    fn unit_factor() {
        let g = GeometricRational::binomial(PqMonomial::ONE, 1);
        assert!(g.normalize(&prm()).unwrap().is_empty());
        let g = GeometricRational::binomial(PqMonomial::ONE, -1);
        assert!(g.normalize(&prm()).is_err());
    }
}
