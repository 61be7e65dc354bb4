use num_complex::Complex64 as C64;

use super::contraction::ContractionFunction;
use super::spec::CurrentSpec;
use crate::error::{Error, Result};
use crate::heisenberg::{zero_mode_reorder, ZeroModeWord};
use crate::monomial::PqMonomial;
use crate::qlaurent::LaurentSeries;
use crate::Algebra;

/// A current placed at spectral variable number `var`.
#[derive(Debug, Clone, PartialEq)]
pub struct Placed {
    pub spec: CurrentSpec,
    pub var: usize,
}

impl Placed {
    pub fn new(spec: CurrentSpec, var: usize) -> Self {
        Self { spec, var }
    }
}

/// `X(z) Y(w) = monomial(z, w) · prefactor(w/z) · :X(z) Y(w):`.
#[derive(Debug, Clone)]
pub struct OpeResult {
    pub x: CurrentSpec,
    pub y: CurrentSpec,
    /// Constituent contractions `C(t x)`, one per constituent pair.
    pub factors: Vec<(ContractionFunction, PqMonomial)>,
    /// Normal form of the zero modes of `X(z) Y(w)`, c-number included.
    pub zero_mode: ZeroModeWord,
    pub order: usize,
}

impl OpeResult {
    /// Power series of the prefactor in `x = w/z`, constant term 1.
    pub fn prefactor_series(&self, alg: &Algebra) -> Result<LaurentSeries> {
        let mut acc = LaurentSeries::one(crate::qlaurent::Variable::X, self.order as i64);
        for (c, t) in &self.factors {
            let s = c.series(&alg.params, t.eval(&alg.params), self.order)?;
            let annulus = acc.annulus().intersect(s.annulus());
            acc = acc.mul(&s)?.with_annulus(annulus);
        }
        Ok(acc)
    }

    /// The prefactor summed as a convergent product at `x = w/z`.
    pub fn prefactor(&self, alg: &Algebra, x: C64) -> C64 {
        self.factors
            .iter()
            .map(|(c, t)| c.eval(&alg.params, x * t.eval(&alg.params), self.order))
            .product()
    }

    /// The c-number of the zero modes at `z = exp(log_z)`, `w = z x`.
    pub fn monomial(&self, alg: &Algebra, log_z: f64, x: C64) -> C64 {
        let lz = C64::new(log_z, 0.0);
        self.zero_mode.scalar_value(&alg.params, &[lz, lz + x.ln()])
    }

    pub fn total(&self, alg: &Algebra, log_z: f64, x: C64) -> C64 {
        self.monomial(alg, log_z, x) * self.prefactor(alg, x)
    }
}

fn contraction_between(
    alg: &Algebra,
    x: &CurrentSpec,
    y: &CurrentSpec,
) -> Result<Vec<(ContractionFunction, PqMonomial)>> {
    let a = alg.cartan.entry(x.node, y.node);
    let mut out = Vec::new();
    for cx in &x.constituents {
        for cy in &y.constituents {
            let f = ContractionFunction::new(&alg.params, cx.kind, cy.kind, a)?;
            if !f.is_trivial() {
                out.push((f, cy.shift / cx.shift));
            }
        }
    }
    Ok(out)
}

/// Contracts `X` at `z` with `Y` at `w`.
pub fn contract(alg: &Algebra, x: &CurrentSpec, y: &CurrentSpec, order: usize) -> Result<OpeResult> {
    if order == 0 {
        return Err(Error::Contract("contraction order must be at least 1".into()));
    }
    x.check_node(&alg.cartan)?;
    y.check_node(&alg.cartan)?;
    let zero_mode = zero_mode_reorder(
        &alg.cartan,
        &x.zero_mode(&alg.cartan, 0),
        &y.zero_mode(&alg.cartan, 1),
    );
    Ok(OpeResult {
        x: x.clone(),
        y: y.clone(),
        factors: contraction_between(alg, x, y)?,
        zero_mode,
        order,
    })
}

/// The c-number `S` in `X_1(v_1) ⋯ X_n(v_n) = S · :X_1 ⋯ X_n:` together with
/// the normal-ordered zero-mode word, for variables `v = exp(var_logs)`.
pub fn normal_order_scalar(
    alg: &Algebra,
    currents: &[Placed],
    var_logs: &[C64],
    order: usize,
) -> Result<(C64, ZeroModeWord)> {
    let prm = &alg.params;
    let mut word = ZeroModeWord::identity(alg.rank());
    for c in currents {
        c.spec.check_node(&alg.cartan)?;
        if c.var >= var_logs.len() {
            return Err(Error::Contract(format!("spectral variable {} has no value", c.var)));
        }
        word = zero_mode_reorder(&alg.cartan, &word, &c.spec.zero_mode(&alg.cartan, c.var));
    }
    let mut scalar = word.scalar_value(prm, var_logs);
    for (ia, a) in currents.iter().enumerate() {
        for b in &currents[ia + 1..] {
            let ratio = (var_logs[b.var] - var_logs[a.var]).exp();
            for (f, t) in contraction_between(alg, &a.spec, &b.spec)? {
                scalar *= f.eval(prm, ratio * t.eval(prm), order);
            }
        }
    }
    Ok((scalar, word.operator_part()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{CartanMatrix, DeformationParams, SeriesType};
    use crate::ope::CurrentKind;

    fn a2() -> Algebra {
        Algebra::new(
            CartanMatrix::new(SeriesType::A, 2).unwrap(),
            DeformationParams::real(0.09, 0.3, 1).unwrap(),
        )
    }

    #[test]
    fn orthogonal_nodes_do_not_contract() {
        let alg = Algebra::new(
            CartanMatrix::new(SeriesType::A, 3).unwrap(),
            DeformationParams::real(0.09, 0.3, 1).unwrap(),
        );
        let r = contract(&alg, &CurrentSpec::new(CurrentKind::E, 0), &CurrentSpec::new(CurrentKind::F, 2), 80)
            .unwrap();
        assert!(r.factors.is_empty());
        assert!(r.zero_mode.scalars.is_empty());
    }

    #[test]
    fn pairwise_route_matches_normal_order_scalar() {
        let alg = a2();
        let x = C64::from_polar(0.5, 1.1);
        let lz = 0.3f64;
        for (kx, ky) in [(CurrentKind::E, CurrentKind::F), (CurrentKind::HPlus, CurrentKind::E)] {
            let r = contract(&alg, &CurrentSpec::new(kx, 0), &CurrentSpec::new(ky, 1), 80).unwrap();
            let (s, _) = normal_order_scalar(
                &alg,
                &[
                    Placed::new(CurrentSpec::new(kx, 0), 0),
                    Placed::new(CurrentSpec::new(ky, 1), 1),
                ],
                &[C64::new(lz, 0.0), C64::new(lz, 0.0) + x.ln()],
                80,
            )
            .unwrap();
            assert!((s - r.total(&alg, lz, x)).norm() < 1e-13 * s.norm());
        }
    }
}
