use serde::{Deserialize, Serialize};

use super::structure::ExchangeForm;
use crate::error::{Error, Result};
use crate::ope::{CurrentKind, PairKind};

/// How a relation is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Convergent products and truncated series at sample points.
    Series,
    /// Exact mode matrices on a truncated Fock space.
    Fock,
    Both,
    /// A pure function identity (no operators involved).
    Function,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Theta,
    Bracket,
    NormalOrder(PairKind),
    Exchange(ExchangeForm),
    Commutator,
    Serre(CurrentKind),
    PsiInversion,
    PhiFactorization,
    SerreCoefficients,
    SerreCoincident,
    ExchangeInversion,
}

/// One catalogue entry. `anchor` is the relation in the crate's own
/// notation: `x = w/z`, `a = A_ij`, `θ_t(x) = (x;t)(t/x;t)(t;t)`,
/// `q̃ = p^c/q`.
#[derive(Debug, Clone, Copy)]
pub struct RelationSpec {
    pub id: &'static str,
    pub anchor: &'static str,
    pub route: Route,
    /// Needs the free-field currents, hence `c = 1`.
    pub operator: bool,
    pub kind: CheckKind,
}

const fn spec(id: &'static str, anchor: &'static str, route: Route, operator: bool, kind: CheckKind) -> RelationSpec {
    RelationSpec {
        id,
        anchor,
        route,
        operator,
        kind,
    }
}

use CheckKind as K;
use Route::*;

pub const CATALOGUE: &[RelationSpec] = &[
    spec(
        "theta/quasi-periodicity",
        "θ_t(t x) = -x^{-1} θ_t(x);  θ_t(e^{u+2πi}) = θ_t(e^u)",
        Function,
        false,
        K::Theta,
    ),
    spec(
        "heisenberg/bracket",
        "[a_i(n), a_j(m)] = δ_{n+m,0} (1/n)(1-q^n)(p^{na/2}-p^{-na/2})(1-(p/q)^n)/(1-p^n)",
        Function,
        false,
        K::Bracket,
    ),
    spec(
        "normal-order/S+S-",
        "S+_i(z) S-_j(w) = G :S+_i(z) S-_j(w):,  G = 1/((z-wq)(z-wq/p)) [a=2], z - w q p^{-1/2} [a=-1], 1 [a=0]",
        Series,
        true,
        K::NormalOrder(PairKind::SPlusSMinus),
    ),
    spec(
        "normal-order/S-S+",
        "S-_i(w) S+_j(z) = G :S-_i(w) S+_j(z):,  G = 1/((w-z/q)(w-zp/q)) [a=2], w - z p^{1/2}/q [a=-1], 1 [a=0]",
        Series,
        true,
        K::NormalOrder(PairKind::SMinusSPlus),
    ),
    spec(
        "normal-order/EF",
        "E_i(z) F_j(w) = G :E_i(z) F_j(w):,  G = (z√(p/q))^{-2} / ((1-xq)(1-xq/p)) [a=2], z√(p/q)(1 - x q p^{-1/2}) [a=-1], 1 [a=0]",
        Series,
        true,
        K::NormalOrder(PairKind::EF),
    ),
    spec(
        "normal-order/FE",
        "F_i(w) E_j(z) = G :F_i(w) E_j(z):,  G = (w√q)^{-2} / ((1-1/(xq))(1-p/(xq))) [a=2], w√q (1 - p^{1/2}/(xq)) [a=-1], 1 [a=0]",
        Series,
        true,
        K::NormalOrder(PairKind::FE),
    ),
    spec(
        "exchange/S+S+",
        "S+_i(z) S+_j(w) = (-1)^{a-1} x^{a-1-βa} θ_q(x p^{a/2}) / θ_q(x^{-1} p^{a/2}) · S+_j(w) S+_i(z)",
        Series,
        true,
        K::Exchange(ExchangeForm::SPlusSPlus),
    ),
    spec(
        "exchange/S-S-",
        "S-_i(z) S-_j(w) = (-1)^{a-1} x^{a-1-a/β} θ_{p/q}(x p^{a/2}) / θ_{p/q}(x^{-1} p^{a/2}) · S-_j(w) S-_i(z)",
        Series,
        true,
        K::Exchange(ExchangeForm::SMinusSMinus),
    ),
    spec(
        "exchange/EE",
        "E_i(z) E_j(w) = ψ_ij(x) E_j(w) E_i(z),  ψ_ij(x) = (-1)^{a-1} x^{-1} θ_q(x p^{a/2}) / θ_q(x^{-1} p^{a/2})",
        Series,
        true,
        K::Exchange(ExchangeForm::EE),
    ),
    spec(
        "exchange/FF",
        "F_i(z) F_j(w) = ψ̃_ij(x) F_j(w) F_i(z),  ψ̃_ij: ψ_ij with θ_q̃",
        Series,
        true,
        K::Exchange(ExchangeForm::FF),
    ),
    spec(
        "exchange/H+H+",
        "H+_i(z) H+_j(w) = x^{-2} θ_q(x p^{a/2}) θ_q̃(x p^{a/2}) / (θ_q(x^{-1} p^{a/2}) θ_q̃(x^{-1} p^{a/2})) · H+_j(w) H+_i(z)",
        Series,
        true,
        K::Exchange(ExchangeForm::HPlusHPlus),
    ),
    spec(
        "exchange/H-H-",
        "H-_i(z) H-_j(w) = x^{-2} θ_q(x p^{a/2}) θ_q̃(x p^{a/2}) / (θ_q(x^{-1} p^{a/2}) θ_q̃(x^{-1} p^{a/2})) · H-_j(w) H-_i(z)",
        Series,
        true,
        K::Exchange(ExchangeForm::HMinusHMinus),
    ),
    spec(
        "exchange/H+H-",
        "H+_i(z) H-_j(w) = x^{-2} θ_q(x p^{(a-c)/2}) θ_q̃(x p^{(a+c)/2}) / (θ_q(x^{-1} p^{(a+c)/2}) θ_q̃(x^{-1} p^{(a-c)/2})) · H-_j(w) H+_i(z)",
        Series,
        true,
        K::Exchange(ExchangeForm::HPlusHMinus),
    ),
    spec(
        "exchange/H+E",
        "H+_i(z) E_j(w) = ε (-1)^{a-1} (x q^{-c/2})^{-1} θ_q(x p^{a/2} q^{-c/2}) / θ_q(x^{-1} p^{a/2} q^{c/2}) · E_j(w) H+_i(z),  ε = (-1)^a",
        Series,
        true,
        K::Exchange(ExchangeForm::HPlusE),
    ),
    spec(
        "exchange/H-E",
        "H-_i(z) E_j(w) = ε (-1)^{a-1} (x q̃^{c/2})^{-1} θ_q(x p^{a/2} q̃^{c/2}) / θ_q(x^{-1} p^{a/2} q̃^{-c/2}) · E_j(w) H-_i(z),  ε = (-1)^a",
        Series,
        true,
        K::Exchange(ExchangeForm::HMinusE),
    ),
    spec(
        "exchange/H+F",
        "H+_i(z) F_j(w) = ε (-1)^{a-1} (x q^{c/2})^{-1} θ_q̃(x p^{a/2} q^{c/2}) / θ_q̃(x^{-1} p^{a/2} q^{-c/2}) · F_j(w) H+_i(z),  ε = (-1)^a",
        Series,
        true,
        K::Exchange(ExchangeForm::HPlusF),
    ),
    spec(
        "exchange/H-F",
        "H-_i(z) F_j(w) = ε (-1)^{a-1} (x q̃^{-c/2})^{-1} θ_q̃(x p^{a/2} q̃^{-c/2}) / θ_q̃(x^{-1} p^{a/2} q̃^{c/2}) · F_j(w) H-_i(z),  ε = (-1)^a",
        Series,
        true,
        K::Exchange(ExchangeForm::HMinusF),
    ),
    spec(
        "commutator/EF",
        "E_i(z) F_j(w) - (-1)^a F_j(w) E_i(z) = δ_ij/((p-1) z w) [δ(z/(w q^c)) H+_i(z q^{-c/2}) - δ(w/(z q̃^c)) H-_i(w q̃^{-c/2})]",
        Both,
        true,
        K::Commutator,
    ),
    spec(
        "serre/E",
        "Sym_{z1,z2} [E_i(z1)E_i(z2)E_j(w) - f_ij(z1/w, z2/w) E_i(z1)E_j(w)E_i(z2) + E_j(w)E_i(z1)E_i(z2)] = 0,  a = -1",
        Series,
        true,
        K::Serre(CurrentKind::E),
    ),
    spec(
        "serre/F",
        "Sym_{z1,z2} [F_i(z1)F_i(z2)F_j(w) - g_ij(z1/w, z2/w) F_i(z1)F_j(w)F_i(z2) + F_j(w)F_i(z1)F_i(z2)] = 0,  a = -1",
        Series,
        true,
        K::Serre(CurrentKind::F),
    ),
    spec(
        "structure/psi-inversion",
        "ψ_ij(x) ψ_ij(1/x) = 1 and ψ̃_ij(x) ψ̃_ij(1/x) = 1",
        Function,
        false,
        K::PsiInversion,
    ),
    spec(
        "structure/phi-factorization",
        "ψ_ij(x) = x^{-a} φ_ij(x) / φ_ij(1/x),  φ_ij(x) = θ_t(x p^{a/2}) / θ_t(x t^{a/2}),  t ∈ {q, q̃}",
        Function,
        false,
        K::PhiFactorization,
    ),
    spec(
        "structure/serre-coefficients",
        "f_ij(x1, x2) = (ψ_ii(x2/x1)+1)(ψ_ij(1/x1)ψ_ij(1/x2)+1) / (ψ_ij(1/x2) + ψ_ii(x2/x1)ψ_ij(1/x1)), equal to the engine rebuild and symmetric; g_ij likewise with ψ̃",
        Series,
        true,
        K::SerreCoefficients,
    ),
    spec(
        "structure/serre-coincident",
        "lim_{x2→x1} f_ij(x1, x2): circle mean = first-order expansion",
        Function,
        false,
        K::SerreCoincident,
    ),
    spec(
        "structure/exchange-inversion",
        "R(x) R(1/x) = 1 for EE, FF, H±H±, S±S± at the configured c",
        Function,
        false,
        K::ExchangeInversion,
    ),
];

/// Catalogue entries selected by `filters`: an entry matches a filter equal
/// to its id or to a `/`-delimited prefix of it (`exchange` selects every
/// exchange relation). An empty filter list selects everything.
pub fn select(filters: &[String]) -> Result<Vec<&'static RelationSpec>> {
    if filters.is_empty() {
        return Ok(CATALOGUE.iter().collect());
    }
    let matches = |f: &str, id: &str| id == f || id.strip_prefix(f).is_some_and(|r| r.starts_with('/'));
    for f in filters {
        if !CATALOGUE.iter().any(|s| matches(f, s.id)) {
            let known: Vec<&str> = CATALOGUE.iter().map(|s| s.id).collect();
            return Err(Error::Config(format!(
                "unknown relation '{f}'; known relations: {}",
                known.join(", ")
            )));
        }
    }
    Ok(CATALOGUE
        .iter()
        .filter(|s| filters.iter().any(|f| matches(f, s.id)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn catalogue_is_complete_and_unique() {
        let ids: HashSet<&str> = CATALOGUE.iter().map(|s| s.id).collect();
        assert_eq!(ids.len(), CATALOGUE.len());
        for form in ExchangeForm::ALL {
            assert!(CATALOGUE.iter().any(|s| s.kind == CheckKind::Exchange(form)), "{form:?}");
        }
        for pair in PairKind::TABULATED {
            assert!(CATALOGUE.iter().any(|s| s.kind == CheckKind::NormalOrder(pair)), "{pair:?}");
        }
        for id in ["commutator/EF", "serre/E", "serre/F", "structure/phi-factorization"] {
            assert!(ids.contains(id));
        }
    }

    #[test]
    fn selection_by_id_and_group() {
        assert_eq!(select(&[]).unwrap().len(), CATALOGUE.len());
        let ex = select(&["exchange".into()]).unwrap();
        assert_eq!(ex.len(), ExchangeForm::ALL.len());
        let one = select(&["serre/E".into()]).unwrap();
        assert_eq!(one.len(), 1);
        // prefix must end at a separator
        assert!(select(&["serre/".into()]).is_err());
        assert!(select(&["exch".into()]).is_err());
    }
}
