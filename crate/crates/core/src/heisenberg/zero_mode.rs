use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::config::{CartanMatrix, DeformationParams};
use crate::monomial::{BetaPoly, PqMonomial};

/// `x_var · scale`: a spectral variable times a fixed monomial in `p`, `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpectralPower {
    pub var: usize,
    pub scale: PqMonomial,
}

impl SpectralPower {
    pub fn new(var: usize, scale: PqMonomial) -> Self {
        Self { var, scale }
    }

    /// `Log(x_var · scale) := Log x_var + Log scale`.
    pub fn log(&self, prm: &DeformationParams, var_logs: &[C64]) -> C64 {
        var_logs[self.var] + self.scale.log(prm)
    }
}

/// `base^{u·P}` with `u` a vector of `β`-polynomials.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MomentumFactor {
    pub base: SpectralPower,
    pub exponent: Vec<BetaPoly>,
}

/// A product of zero-mode operators in normal form
/// `scalars · e^{c·Q} · Π base^{u·P}`.
///
/// The `Q`s commute among themselves, as do the momentum factors, so the
/// normal form is unique once equal bases are merged.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ZeroModeWord {
    pub charge: Vec<BetaPoly>,
    pub momenta: Vec<MomentumFactor>,
    /// Commuted-out c-number factors `base^{exponent}`.
    pub scalars: BTreeMap<SpectralPower, BetaPoly>,
}

impl ZeroModeWord {
    pub fn identity(rank: usize) -> Self {
        Self {
            charge: vec![BetaPoly::zero(); rank],
            momenta: Vec::new(),
            scalars: BTreeMap::new(),
        }
    }

    /// `e^{c·Q} base^{u·P}`.
    pub fn vertex(charge: Vec<BetaPoly>, base: SpectralPower, exponent: Vec<BetaPoly>) -> Self {
        let rank = charge.len();
        let mut w = Self {
            charge,
            momenta: Vec::new(),
            scalars: BTreeMap::new(),
        };
        w.push_momentum(base, exponent);
        debug_assert!(w.momenta.iter().all(|m| m.exponent.len() == rank));
        w
    }

    pub fn rank(&self) -> usize {
        self.charge.len()
    }

    fn push_momentum(&mut self, base: SpectralPower, exponent: Vec<BetaPoly>) {
        if let Some(m) = self.momenta.iter_mut().find(|m| m.base == base) {
            for (a, b) in m.exponent.iter_mut().zip(&exponent) {
                *a = &*a + b;
            }
        } else {
            self.momenta.push(MomentumFactor { base, exponent });
        }
        self.momenta.retain(|m| m.exponent.iter().any(|e| !e.is_zero()));
        self.momenta.sort();
    }

    fn push_scalar(&mut self, base: SpectralPower, e: &BetaPoly) {
        let s = self.scalars.entry(base).or_default();
        *s = &*s + e;
        if s.is_zero() {
            self.scalars.remove(&base);
        }
    }

    /// Value of the c-number part under the global branch convention.
    pub fn scalar_value(&self, prm: &DeformationParams, var_logs: &[C64]) -> C64 {
        self.scalars
            .iter()
            .map(|(b, e)| {
                let e = e.eval(prm.beta);
                match e_as_int(e) {
                    Some(k) => (b.log(prm, var_logs)).exp().powi(k),
                    None => (b.log(prm, var_logs) * e).exp(),
                }
            })
            .product()
    }

    /// The same word with the c-number part dropped.
    pub fn operator_part(&self) -> Self {
        Self {
            charge: self.charge.clone(),
            momenta: self.momenta.clone(),
            scalars: BTreeMap::new(),
        }
    }
}

fn e_as_int(e: C64) -> Option<i32> {
    let r = e.re.round();
    ((e - C64::new(r, 0.0)).norm() < 1e-12 && r.abs() < 1e6).then_some(r as i32)
}

/// Normal form of the product `w1 · w2`.
///
/// Moving `base^{u·P}` to the right of `e^{c·Q}` produces the c-number
/// `base^{uᵀ A c}`, from `[P_i, Q_j] = A_ij`.
pub fn zero_mode_reorder(cartan: &CartanMatrix, w1: &ZeroModeWord, w2: &ZeroModeWord) -> ZeroModeWord {
    let rank = cartan.rank();
    let mut out = w1.clone();
    for (base, e) in &w2.scalars {
        out.push_scalar(*base, e);
    }
    for m in &w1.momenta {
        let mut pairing = BetaPoly::zero();
        for i in 0..rank {
            for j in 0..rank {
                let a = cartan.entry(i, j);
                if a != 0 && !m.exponent[i].is_zero() && !w2.charge[j].is_zero() {
                    pairing = &pairing + &(&m.exponent[i] * &w2.charge[j]).scale(a);
                }
            }
        }
        if !pairing.is_zero() {
            out.push_scalar(m.base, &pairing);
        }
    }
    for (a, b) in out.charge.iter_mut().zip(&w2.charge) {
        *a = &*a + b;
    }
    for m in &w2.momenta {
        out.push_momentum(m.base, m.exponent.clone());
    }
    out
}
