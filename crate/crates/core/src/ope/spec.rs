use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::{zero_mode_reorder, SimpleKind, SpectralPower, ZeroModeWord};
use crate::monomial::{BetaPoly, PqMonomial};
use crate::CartanMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CurrentKind {
    SPlus,
    SMinus,
    E,
    F,
    HPlus,
    HMinus,
}

impl fmt::Display for CurrentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurrentKind::SPlus => "S+",
            CurrentKind::SMinus => "S-",
            CurrentKind::E => "E",
            CurrentKind::F => "F",
            CurrentKind::HPlus => "H+",
            CurrentKind::HMinus => "H-",
        })
    }
}

/// A simple current evaluated at `z · shift`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constituent {
    pub kind: SimpleKind,
    pub shift: PqMonomial,
}

/// A normal-ordered exponential current on one node.
///
/// Simple currents have a single unshifted constituent; `H±` are normal
/// products of an `E` and an `F` at shifted arguments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurrentSpec {
    pub kind: CurrentKind,
    pub node: usize,
    pub constituents: Vec<Constituent>,
}

impl CurrentSpec {
    pub fn new(kind: CurrentKind, node: usize) -> Self {
        let simple = |k| vec![Constituent {
            kind: k,
            shift: PqMonomial::ONE,
        }];
        let constituents = match kind {
            CurrentKind::SPlus => simple(SimpleKind::SPlus),
            CurrentKind::SMinus => simple(SimpleKind::SMinus),
            CurrentKind::E => simple(SimpleKind::E),
            CurrentKind::F => simple(SimpleKind::F),
            CurrentKind::HPlus => return compose_h(node, true),
            CurrentKind::HMinus => return compose_h(node, false),
        };
        Self {
            kind,
            node,
            constituents,
        }
    }

    pub fn is_composite(&self) -> bool {
        self.constituents.len() > 1
    }

    /// Zero-mode word of a constituent placed at spectral variable `var`.
    ///
    /// `E`: `e^{Q_i} (z √(p/q))^{P_i}`; `F`: `e^{-Q_i} (z √q)^{-P_i}`;
    /// `S⁺`: `e^{Q_i} z^{β P_i}`; `S⁻`: `e^{-Q_i/β} z^{-P_i}` (using
    /// `s⁺[0] = a[0] = β P`, `s⁻[0] = P`).
    pub fn constituent_word(&self, c: &Constituent, rank: usize, var: usize) -> ZeroModeWord {
        let i = self.node;
        let vec_with = |p: BetaPoly| {
            let mut v = vec![BetaPoly::zero(); rank];
            v[i] = p;
            v
        };
        let one = BetaPoly::constant(1);
        let minus = BetaPoly::constant(-1);
        let (charge, scale, exponent) = match c.kind {
            SimpleKind::E => (vec_with(one.clone()), PqMonomial::new(1, -1), vec_with(one)),
            SimpleKind::F => (vec_with(minus.clone()), PqMonomial::sqrt_q(), vec_with(minus)),
            SimpleKind::SPlus => (vec_with(one), PqMonomial::ONE, vec_with(BetaPoly::beta())),
            SimpleKind::SMinus => (vec_with(-&BetaPoly::inv_beta()), PqMonomial::ONE, vec_with(minus)),
        };
        ZeroModeWord::vertex(charge, SpectralPower::new(var, c.shift * scale), exponent)
    }

    /// Zero-mode word of the whole current at `var`; constituents of a
    /// composite are normal ordered, so no c-number survives.
    pub fn zero_mode(&self, cartan: &CartanMatrix, var: usize) -> ZeroModeWord {
        let rank = cartan.rank();
        let mut w = ZeroModeWord::identity(rank);
        for c in &self.constituents {
            w = zero_mode_reorder(cartan, &w, &self.constituent_word(c, rank, var));
        }
        w.operator_part()
    }

    /// Lattice charge (coefficients of `Q_j`).
    pub fn charge(&self, cartan: &CartanMatrix) -> Vec<BetaPoly> {
        self.zero_mode(cartan, 0).charge
    }

    pub fn check_node(&self, cartan: &CartanMatrix) -> Result<()> {
        if self.node >= cartan.rank() {
            return Err(Error::Contract(format!(
                "node {} out of range for rank {}",
                self.node,
                cartan.rank()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for CurrentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.kind, self.node + 1)
    }
}

/// `H⁺_i(z) = :E_i(z q^{1/2}) F_i(z q^{-1/2}):` and
/// `H⁻_i(z) = :E_i(z (p/q)^{-1/2}) F_i(z (p/q)^{1/2}):`.
pub fn compose_h(node: usize, plus: bool) -> CurrentSpec {
    let (kind, se, sf) = if plus {
        (CurrentKind::HPlus, PqMonomial::sqrt_q(), PqMonomial::sqrt_q().inv())
    } else {
        (CurrentKind::HMinus, PqMonomial::new(-1, 1), PqMonomial::new(1, -1))
    };
    CurrentSpec {
        kind,
        node,
        constituents: vec![
            Constituent {
                kind: SimpleKind::E,
                shift: se,
            },
            Constituent {
                kind: SimpleKind::F,
                shift: sf,
            },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SeriesType;

    #[test]
    fn h_currents_are_neutral() {
        let a2 = CartanMatrix::new(SeriesType::A, 2).unwrap();
        for plus in [true, false] {
            let h = compose_h(1, plus);
            assert!(h.charge(&a2).iter().all(|c| c.is_zero()));
        }
        let e = CurrentSpec::new(CurrentKind::E, 0);
        assert_eq!(e.charge(&a2)[0], BetaPoly::constant(1));
        let sm = CurrentSpec::new(CurrentKind::SMinus, 1);
        assert_eq!(sm.charge(&a2)[1], -&BetaPoly::inv_beta());
    }

    #[test]
    fn h_zero_mode_is_sqrt_p_power() {
        // (z q^{1/2} (p/q)^{1/2})^{P} (z q^{-1/2} q^{1/2})^{-P} = (√p)^P, written on two bases
        let a1 = CartanMatrix::new(SeriesType::A, 1).unwrap();
        let w = compose_h(0, true).zero_mode(&a1, 0);
        assert!(w.scalars.is_empty());
        let net: i32 = w
            .momenta
            .iter()
            .map(|m| m.base.scale.p_half * m.exponent[0].as_integer().unwrap() as i32)
            .sum();
        assert_eq!(net, 1);
        let w = compose_h(0, false).zero_mode(&a1, 0);
        let net: i32 = w
            .momenta
            .iter()
            .map(|m| m.base.scale.p_half * m.exponent[0].as_integer().unwrap() as i32)
            .sum();
        assert_eq!(net, -1);
    }
}
