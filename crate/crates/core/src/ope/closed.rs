use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::spec::CurrentKind;
use crate::config::DeformationParams;
use crate::monomial::PqMonomial;

/// Ordered pair of simple current kinds, first factor leftmost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairKind {
    SPlusSMinus,
    SMinusSPlus,
    EF,
    FE,
    EE,
    FF,
}

impl PairKind {
    pub fn kinds(self) -> (CurrentKind, CurrentKind) {
        use CurrentKind::*;
        match self {
            PairKind::SPlusSMinus => (SPlus, SMinus),
            PairKind::SMinusSPlus => (SMinus, SPlus),
            PairKind::EF => (E, F),
            PairKind::FE => (F, E),
            PairKind::EE => (E, E),
            PairKind::FF => (F, F),
        }
    }

    pub const TABULATED: [PairKind; 4] = [PairKind::SPlusSMinus, PairKind::SMinusSPlus, PairKind::EF, PairKind::FE];
}

/// Tabulated normal-ordering factor `X(u) Y(v) = G(u, v) :X(u) Y(v):`.
#[derive(Debug, Clone)]
pub struct ClosedForm {
    pub pair: PairKind,
    pub a: i64,
    prm: DeformationParams,
}

impl ClosedForm {
    /// `G(u, v)` with `u` the argument of the left factor.
    pub fn eval(&self, u: C64, v: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        let m = |p_half, q_half| PqMonomial::new(p_half, q_half).eval(&self.prm);
        let (p, q) = (self.prm.p, self.prm.q);
        match (self.pair, self.a) {
            (_, 0) => one,
            // S⁺_i(z) S⁻_i(w) = 1/((z - wq)(z - w q/p))
            (PairKind::SPlusSMinus, 2) => one / ((u - v * q) * (u - v * q / p)),
            (PairKind::SPlusSMinus, -1) => u - v * m(-1, 2),
            // S⁻_i(w) S⁺_i(z) = 1/((w - z/q)(w - z p/q))
            (PairKind::SMinusSPlus, 2) => one / ((u - v / q) * (u - v * p / q)),
            (PairKind::SMinusSPlus, -1) => u - v * m(1, -2),
            // E_i(z) F_i(w) = 1/((z (p/q)^{1/2})^2 (1 - wq/z)(1 - w q/(p z)))
            (PairKind::EF, 2) => {
                let s = u * m(1, -1);
                one / (s * s * (one - v * q / u) * (one - v * q / (p * u)))
            }
            (PairKind::EF, -1) => u * m(1, -1) * (one - v / u * m(-1, 2)),
            // F_i(w) E_i(z) = 1/((w q^{1/2})^2 (1 - z/(wq))(1 - z p/(wq)))
            (PairKind::FE, 2) => {
                let s = u * m(0, 1);
                one / (s * s * (one - v / (u * q)) * (one - v * p / (u * q)))
            }
            (PairKind::FE, -1) => u * m(0, 1) * (one - v / u * m(1, -2)),
            _ => unreachable!("constructor admits only tabulated cases"),
        }
    }
}

/// The printed normal-ordering factor for a tabulated pair and Cartan entry
/// `a ∈ {2, -1, 0}`; `None` for `EE`/`FF`, whose prefactors are infinite
/// products with no printed closed form.
pub fn closed_form(prm: &DeformationParams, pair: PairKind, a: i64) -> Option<ClosedForm> {
    if matches!(pair, PairKind::EE | PairKind::FF) || !matches!(a, 2 | -1 | 0) {
        return None;
    }
    Some(ClosedForm {
        pair,
        a,
        prm: prm.clone(),
    })
}
