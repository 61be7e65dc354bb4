//! Theta-ratio structure functions and printed exchange factors.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::config::DeformationParams;
use crate::monomial::PqMonomial;
use crate::qlaurent::theta;

/// Thetas smaller than this are treated as zeros: samples touching them are
/// skipped rather than evaluated.
pub const THETA_FLOOR: f64 = 1e-10;

/// Nome of a theta function: `q` or `q̃ = p^c/q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Nome {
    Q,
    QTilde,
}

impl Nome {
    pub fn value(self, prm: &DeformationParams) -> C64 {
        match self {
            Nome::Q => prm.q,
            Nome::QTilde => prm.qtilde,
        }
    }

    /// `nome^{e}` under the global branch convention.
    pub fn pow(self, prm: &DeformationParams, e: f64) -> C64 {
        match self {
            Nome::Q => prm.pq_pow(0.0, e),
            Nome::QTilde => prm.qtilde_pow(e),
        }
    }
}

/// Theta evaluation with a floor check.
#[derive(Debug, Clone)]
pub struct StructureFunctions {
    pub prm: DeformationParams,
    pub order: usize,
}

fn sign(a: i64) -> f64 {
    if (a - 1).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

impl StructureFunctions {
    pub fn new(prm: &DeformationParams, order: usize) -> Self {
        Self {
            prm: prm.clone(),
            order,
        }
    }

    /// `θ_nome(x)`, or `None` if it is below the floor (or `x = 0`).
    pub fn theta(&self, nome: Nome, x: C64) -> Option<C64> {
        let t = theta(x, nome.value(&self.prm), self.order).ok()?;
        (t.norm() >= THETA_FLOOR).then_some(t)
    }

    fn ratio(&self, nome: Nome, num: C64, den: C64) -> Option<C64> {
        Some(self.theta(nome, num)? / self.theta(nome, den)?)
    }

    /// `p^{a/2}` through `√p`.
    pub fn p_half(&self, a: i64) -> C64 {
        PqMonomial::sqrt_p().pow(a as i32).eval(&self.prm)
    }

    /// `ψ_ij(x) = (-1)^{a-1} x^{-1} θ(x p^{a/2}) / θ(x^{-1} p^{a/2})`.
    pub fn psi(&self, nome: Nome, a: i64, x: C64) -> Option<C64> {
        let s = self.p_half(a);
        Some(sign(a) / x * self.ratio(nome, x * s, s / x)?)
    }

    /// `φ_ij(x) = θ(x p^{a/2}) / θ(x nome^{a/2})`.
    pub fn phi(&self, nome: Nome, a: i64, x: C64) -> Option<C64> {
        self.ratio(nome, x * self.p_half(a), x * nome.pow(&self.prm, a as f64 / 2.0))
    }

    /// Serre coefficient `f` (nome `q`) or `g` (nome `q̃`) at
    /// `x1 = z1/w`, `x2 = z2/w`:
    /// `(ψ_ii(z2/z1) + 1)(ψ_ij(w/z1) ψ_ij(w/z2) + 1) / (ψ_ij(w/z2) + ψ_ii(z2/z1) ψ_ij(w/z1))`.
    pub fn serre_coefficient(&self, nome: Nome, a_ij: i64, x1: C64, x2: C64) -> Option<C64> {
        let a = self.psi(nome, 2, x2 / x1)?;
        let b1 = self.psi(nome, a_ij, x1.inv())?;
        let b2 = self.psi(nome, a_ij, x2.inv())?;
        let den = b2 + a * b1;
        if den.norm() < THETA_FLOOR {
            return None;
        }
        Some((a + 1.0) * (b1 * b2 + 1.0) / den)
    }

    /// Value of the Serre coefficient at `z1 = z2`, where the formula is
    /// `0/0` because `ψ_ii(1) = -1`: the mean over a small circle around the
    /// coincident point (exact for the analytic continuation, up to `O(ε^k)`
    /// with `k` the number of nodes).
    pub fn serre_coefficient_coincident(&self, nome: Nome, a_ij: i64, x1: C64) -> Option<C64> {
        let eps = 1e-3;
        let k = 16;
        let mut acc = C64::new(0.0, 0.0);
        for s in 0..k {
            let t = 2.0 * std::f64::consts::PI * (s as f64 + 0.5) / k as f64;
            acc += self.serre_coefficient(nome, a_ij, x1, x1 * (1.0 + C64::from_polar(eps, t)))?;
        }
        Some(acc / k as f64)
    }
}

/// Printed exchange relations `X_i(z) Y_j(w) = R(w/z) Y_j(w) X_i(z)`, at
/// general `c` where a general-`c` form exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExchangeForm {
    SPlusSPlus,
    SMinusSMinus,
    EE,
    FF,
    HPlusHPlus,
    HMinusHMinus,
    HPlusHMinus,
    HPlusE,
    HMinusE,
    HPlusF,
    HMinusF,
}

impl ExchangeForm {
    pub const ALL: [ExchangeForm; 11] = [
        ExchangeForm::SPlusSPlus,
        ExchangeForm::SMinusSMinus,
        ExchangeForm::EE,
        ExchangeForm::FF,
        ExchangeForm::HPlusHPlus,
        ExchangeForm::HMinusHMinus,
        ExchangeForm::HPlusHMinus,
        ExchangeForm::HPlusE,
        ExchangeForm::HMinusE,
        ExchangeForm::HPlusF,
        ExchangeForm::HMinusF,
    ];

    /// `R(x)` for Cartan entry `a` and `x = w/z`; `None` near a theta zero.
    pub fn eval(self, sf: &StructureFunctions, a: i64, x: C64) -> Option<C64> {
        use ExchangeForm::*;
        let prm = &sf.prm;
        let c = prm.c_f64();
        let af = a as f64;
        let s = sf.p_half(a);
        let pq = |e: f64| prm.pq_pow(e, 0.0);
        let qc = |e: f64| Nome::Q.pow(prm, e * c);
        let qt = |e: f64| Nome::QTilde.pow(prm, e * c);
        let sg = sign(a);
        let one = C64::new(1.0, 0.0);
        let r = |nome: Nome, k: C64, l: C64| sf.ratio(nome, x * k, l / x);
        Some(match self {
            SPlusSPlus => {
                let e = C64::new(af - 1.0, 0.0) - prm.beta * af;
                sg * (e * x.ln()).exp() * r(Nome::Q, s, s)?
            }
            SMinusSMinus => {
                let e = C64::new(af - 1.0, 0.0) - af / prm.beta;
                // the screening relation is written with θ_{p/q}; at c = 1 this is q̃
                let pq_nome = prm.p / prm.q;
                let t = |y: C64| {
                    theta(y, pq_nome, sf.order)
                        .ok()
                        .filter(|v| v.norm() >= THETA_FLOOR)
                };
                sg * (e * x.ln()).exp() * t(x * s)? / t(s / x)?
            }
            EE => sg / x * r(Nome::Q, s, s)?,
            FF => sg / x * r(Nome::QTilde, s, s)?,
            HPlusHPlus | HMinusHMinus => one / (x * x) * r(Nome::Q, s, s)? * r(Nome::QTilde, s, s)?,
            HPlusHMinus => {
                one / (x * x)
                    * r(Nome::Q, pq((af - c) / 2.0), pq((af + c) / 2.0))?
                    * r(Nome::QTilde, pq((af + c) / 2.0), pq((af - c) / 2.0))?
            }
            HPlusE => sg / (x * qc(-0.5)) * r(Nome::Q, s * qc(-0.5), s * qc(0.5))?,
            HMinusE => sg / (x * qt(0.5)) * r(Nome::Q, s * qt(0.5), s * qt(-0.5))?,
            HPlusF => sg / (x * qc(0.5)) * r(Nome::QTilde, s * qc(0.5), s * qc(-0.5))?,
            HMinusF => sg / (x * qt(-0.5)) * r(Nome::QTilde, s * qt(-0.5), s * qt(0.5))?,
        })
    }

    /// Whether both sides are the same current type, so that
    /// `R(x) R(1/x) = 1` must hold as a function identity.
    pub fn is_symmetric(self) -> bool {
        matches!(
            self,
            ExchangeForm::SPlusSPlus
                | ExchangeForm::SMinusSMinus
                | ExchangeForm::EE
                | ExchangeForm::FF
                | ExchangeForm::HPlusHPlus
                | ExchangeForm::HMinusHMinus
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sf() -> StructureFunctions {
        StructureFunctions::new(&DeformationParams::real(0.09, 0.3, 1).unwrap(), 80)
    }

    #[test]
    fn psi_zero_is_skipped() {
        // θ_q(x p) vanishes at x = 1/p
        let sf = sf();
        assert!(sf.psi(Nome::Q, 2, C64::new(1.0 / 0.09, 0.0)).is_none());
        assert!(sf.psi(Nome::Q, 2, C64::new(1.0 / 0.09 + 0.1, 0.0)).is_some());
    }

    #[test]
    fn psi_at_one_on_the_diagonal() {
        // generic parameters: θ(p)/θ(p) = 1, so ψ_ii(1) = -1
        let generic = StructureFunctions::new(&DeformationParams::real(0.08, 0.3, 1).unwrap(), 80);
        let v = generic.psi(Nome::Q, 2, C64::new(1.0, 0.0)).unwrap();
        assert!((v + 1.0).norm() < 1e-14);
        // p = q² puts a theta zero at x = 1 itself: skipped, while nearby
        // ψ_ii(x) = x^{-4} exactly
        let sf = sf();
        assert!(sf.psi(Nome::Q, 2, C64::new(1.0, 0.0)).is_none());
        let x = C64::from_polar(1.3, 0.7);
        assert!((sf.psi(Nome::Q, 2, x).unwrap() - x.powi(-4)).norm() < 1e-10);
    }

    #[test]
    fn serre_coefficient_is_symmetric() {
        let sf = sf();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x1 = C64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..6.28));
            let x2 = C64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..6.28));
            for nome in [Nome::Q, Nome::QTilde] {
                let a = sf.serre_coefficient(nome, -1, x1, x2).unwrap();
                let b = sf.serre_coefficient(nome, -1, x2, x1).unwrap();
                assert!((a - b).norm() < 1e-10 * a.norm());
            }
        }
    }

    #[test]
    fn coincident_limit_is_continuous() {
        let sf = sf();
        let x1 = C64::from_polar(0.8, 0.4);
        let lim = sf.serre_coefficient_coincident(Nome::Q, -1, x1).unwrap();
        let near = sf
            .serre_coefficient(Nome::Q, -1, x1, x1 * C64::new(1.0 + 1e-6, 1e-6))
            .unwrap();
        assert!((lim - near).norm() < 1e-4 * lim.norm());
        assert!(lim.norm().is_finite());
    }
}
