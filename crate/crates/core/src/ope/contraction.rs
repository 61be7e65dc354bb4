use num_complex::Complex64 as C64;

use crate::config::DeformationParams;
use crate::error::Result;
use crate::heisenberg::{bracket_symbolic, osc_coeff_symbolic, PowerSumTerm, SimpleKind};
use crate::qlaurent::{series_exp, Annulus, LaurentSeries, Variable};

/// Below this modulus a factor `1 - t` is indistinguishable from 1.
const PRODUCT_CUTOFF: f64 = 1e-18;

/// `C(x) = exp Σ_{m≥1} c_m x^m` between two simple currents, with
/// `m c_m = Σ_t k_t λ_t^m / Π_d (1 - u_d^m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionFunction {
    pub terms: Vec<PowerSumTerm>,
}

impl ContractionFunction {
    /// Contraction of `X` (annihilators, node `i`) against `Y` (creators,
    /// node `j`) for the Cartan entry `a = A_ij`.
    pub fn new(prm: &DeformationParams, kind_x: SimpleKind, kind_y: SimpleKind, a: i64) -> Result<Self> {
        let g = osc_coeff_symbolic(kind_x, true)
            .mul(&osc_coeff_symbolic(kind_y, false))
            .mul(&bracket_symbolic(a));
        Ok(Self {
            terms: g.normalize(prm)?,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn log_coeff(&self, prm: &DeformationParams, m: i64) -> C64 {
        self.terms.iter().map(|t| t.eval(prm, m)).sum::<C64>() / m as f64
    }

    /// Radius of convergence of the power series in `x`.
    pub fn radius(&self, prm: &DeformationParams) -> f64 {
        self.terms
            .iter()
            .map(|t| 1.0 / t.lambda.eval(prm).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// The power series `exp Σ c_m (s x)^m` truncated at `order`.
    pub fn series(&self, prm: &DeformationParams, scale: C64, order: usize) -> Result<LaurentSeries> {
        let mut log = vec![C64::new(0.0, 0.0); order];
        let mut s = C64::new(1.0, 0.0);
        for (m, c) in log.iter_mut().enumerate().skip(1) {
            s *= scale;
            *c = self.log_coeff(prm, m as i64) * s;
        }
        let radius = self.radius(prm) / scale.norm();
        Ok(series_exp(&LaurentSeries::power_series(Variable::X, log))?.with_annulus(Annulus {
            inner: 0.0,
            outer: radius,
        }))
    }

    /// `Π_t Π_{n} (1 - λ_t u^n x)^{-k_t}`; valid for every `x` off the poles.
    ///
    /// Each nested product over a denominator base runs up to `order` factors
    /// and stops early once the factors are numerically 1.
    pub fn eval(&self, prm: &DeformationParams, x: C64, order: usize) -> C64 {
        let mut acc = C64::new(1.0, 0.0);
        for t in &self.terms {
            let start = t.lambda.eval(prm) * x;
            let bases: Vec<C64> = t.denominators.iter().map(|u| u.eval(prm)).collect();
            let f = nested_product(start, &bases, order);
            acc *= f.powi(-(t.coeff as i32));
        }
        acc
    }

    /// Poles `x = 1/λ_t` of terms without denominators and `k_t > 0`.
    pub fn simple_poles(&self, prm: &DeformationParams) -> Vec<C64> {
        self.terms
            .iter()
            .filter(|t| t.denominators.is_empty() && t.coeff > 0)
            .map(|t| t.lambda.eval(prm).inv())
            .collect()
    }
}

/// `Π_{n_1..n_d ≥ 0} (1 - t Π u_k^{n_k})`.
fn nested_product(t: C64, bases: &[C64], order: usize) -> C64 {
    let one = C64::new(1.0, 0.0);
    match bases.split_first() {
        None => one - t,
        Some((u, rest)) => {
            let mut acc = one;
            let mut tn = t;
            for _ in 0..order {
                if tn.norm() < PRODUCT_CUTOFF {
                    break;
                }
                acc *= nested_product(tn, rest, order);
                tn *= u;
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prm() -> DeformationParams {
        DeformationParams::real(0.09, 0.3, 1).unwrap()
    }

    #[test]
    fn same_node_ef_is_two_simple_poles() {
        let prm = prm();
        let c = ContractionFunction::new(&prm, SimpleKind::E, SimpleKind::F, 2).unwrap();
        assert!(c.terms.iter().all(|t| t.denominators.is_empty()));
        let mut poles = c.simple_poles(&prm);
        poles.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        assert!((poles[0] - C64::new(0.3, 0.0)).norm() < 1e-14);
        assert!((poles[1] - C64::new(1.0 / 0.3, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn series_and_product_agree_inside_radius() {
        let prm = prm();
        for (kx, ky) in [
            (SimpleKind::E, SimpleKind::E),
            (SimpleKind::F, SimpleKind::F),
            (SimpleKind::E, SimpleKind::F),
            (SimpleKind::SMinus, SimpleKind::SPlus),
        ] {
            for a in [2, -1, 0] {
                let c = ContractionFunction::new(&prm, kx, ky, a).unwrap();
                let s = c.series(&prm, C64::new(1.0, 0.0), 80).unwrap();
                let x = C64::from_polar(0.2 * c.radius(&prm).min(1.0), 0.7);
                let d = s.eval(x) - c.eval(&prm, x, 80);
                assert!(d.norm() < 1e-12, "{kx:?}{ky:?} a={a}: {d}");
            }
        }
    }

    #[test]
    fn log_coefficients_match_direct_composition() {
        let prm = prm();
        let (p, q) = (0.09f64, 0.3f64);
        let c = ContractionFunction::new(&prm, SimpleKind::E, SimpleKind::E, -1).unwrap();
        for m in 1..15 {
            let mf = m as f64;
            let e_plus = q.powf(mf) / (1.0 - q.powf(mf));
            let e_minus = -1.0 / (1.0 - q.powf(mf));
            let b = (1.0 - q.powf(mf)) * (p.powf(-mf / 2.0) - p.powf(mf / 2.0)) * (1.0 - (p / q).powf(mf))
                / (1.0 - p.powf(mf))
                / mf;
            let direct = e_plus * e_minus * b;
            assert!((c.log_coeff(&prm, m).re - direct).abs() < 1e-12 * direct.abs());
        }
    }
}
