use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::basis::{enumerate_sector, osc_degree, FockBasisState, OscState};
use crate::error::{Error, Result};
use crate::heisenberg::{osc_coeff, ZeroModeWord};
use crate::monomial::PqMonomial;
use crate::ope::{normal_order_scalar, CurrentKind, CurrentSpec, Placed};
use crate::Algebra;

/// Sparse vector in one momentum sector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FockVector {
    pub momentum: Vec<i64>,
    pub terms: BTreeMap<OscState, C64>,
}

impl FockVector {
    pub fn basis(state: &FockBasisState) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(state.oscillators.clone(), C64::new(1.0, 0.0));
        Self {
            momentum: state.momentum.clone(),
            terms,
        }
    }

    pub fn zero(momentum: Vec<i64>) -> Self {
        Self {
            momentum,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, c: C64) {
        if other.terms.is_empty() {
            return;
        }
        if self.terms.is_empty() {
            self.momentum = other.momentum.clone();
        }
        debug_assert_eq!(self.momentum, other.momentum);
        for (k, v) in &other.terms {
            *self.terms.entry(k.clone()).or_default() += v * c;
        }
    }

    pub fn component(&self, osc: &OscState) -> C64 {
        self.terms.get(osc).copied().unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Mode-by-mode action of one current on the Fock space.
#[derive(Debug, Clone)]
pub struct ModeOperator {
    pub spec: CurrentSpec,
    cartan_row: Vec<i64>,
    cartan: crate::CartanMatrix,
    zero_mode: ZeroModeWord,
    coeffs: HashMap<i64, C64>,
    alg: Algebra,
}

impl ModeOperator {
    pub fn new(alg: &Algebra, spec: &CurrentSpec) -> Result<Self> {
        spec.check_node(&alg.cartan)?;
        let zero_mode = spec.zero_mode(&alg.cartan, 0);
        if zero_mode.charge.iter().any(|c| c.as_integer().is_none())
            || zero_mode
                .momenta
                .iter()
                .any(|m| m.exponent.iter().any(|e| e.as_integer().is_none()))
        {
            return Err(Error::Contract(format!(
                "{spec} has zero modes outside the root lattice; only E, F, H± act on this Fock space"
            )));
        }
        Ok(Self {
            spec: spec.clone(),
            cartan_row: alg.cartan.entries()[spec.node].clone(),
            cartan: alg.cartan.clone(),
            zero_mode,
            coeffs: HashMap::new(),
            alg: alg.clone(),
        })
    }

    /// Multiplier of `a_i[m]` in the exponent: `Σ_c coeff_c(m) shift_c^{-m}`.
    pub fn coeff(&mut self, m: i64) -> Result<C64> {
        if let Some(v) = self.coeffs.get(&m) {
            return Ok(*v);
        }
        let mut v = C64::new(0.0, 0.0);
        for c in &self.spec.constituents {
            v += osc_coeff(&self.alg, c.kind, m)? * c.shift.pow(-(m as i32)).eval(&self.alg.params);
        }
        self.coeffs.insert(m, v);
        Ok(v)
    }

    /// `(z-power e_z, c-number, target momentum)` of the zero modes on `|λ⟩`.
    pub fn zero_mode_action(&self, momentum: &[i64]) -> (i64, C64, Vec<i64>) {
        let a_lambda = self.cartan.apply(momentum);
        let mut ez = 0i64;
        let mut scalar = C64::new(1.0, 0.0);
        for m in &self.zero_mode.momenta {
            let k: i64 = m
                .exponent
                .iter()
                .zip(&a_lambda)
                .map(|(u, l)| u.as_integer().expect("checked in new") * l)
                .sum();
            debug_assert_eq!(m.base.var, 0);
            ez += k;
            scalar *= m.base.scale.pow(k as i32).eval(&self.alg.params);
        }
        let target = momentum
            .iter()
            .zip(&self.zero_mode.charge)
            .map(|(l, c)| l + c.as_integer().expect("checked in new"))
            .collect();
        (ez, scalar, target)
    }

    /// Range of modes with a possibly non-zero matrix element between
    /// degrees `≤ cap` of sector `λ`.
    pub fn window(&self, momentum: &[i64], cap: u32) -> (i64, i64) {
        let (ez, _, _) = self.zero_mode_action(momentum);
        (-(cap as i64) - ez, cap as i64 - ez)
    }

    /// `Σ_{Σ m k_m = c} Π_m h(-m)^{k_m}/k_m!` with the parts that realise it.
    fn creation_terms(&mut self, c: u32) -> Result<Vec<(Vec<u32>, C64)>> {
        let mut out = Vec::new();
        for part in partitions_of(c) {
            let mut coeff = C64::new(1.0, 0.0);
            let mut i = 0;
            while i < part.len() {
                let m = part[i];
                let k = part[i..].iter().take_while(|&&x| x == m).count();
                let h = self.coeff(-(m as i64))?;
                coeff *= h.powi(k as i32) / factorial(k);
                i += k;
            }
            out.push((part, coeff));
        }
        Ok(out)
    }

    /// `X[n] v` for `X(z) = Σ_n X[n] z^{-n}`.
    pub fn apply(&mut self, n: i64, v: &FockVector) -> Result<FockVector> {
        let (ez, zscalar, target) = self.zero_mode_action(&v.momentum);
        let d = -n - ez;
        let node = self.spec.node;
        let mut out = FockVector::zero(target);
        let mut creation_cache: HashMap<u32, Vec<(Vec<u32>, C64)>> = HashMap::new();
        for (osc, &amp) in &v.terms {
            let factors: Vec<(usize, u32)> = osc
                .iter()
                .enumerate()
                .flat_map(|(j, parts)| parts.iter().map(move |&k| (j, k)))
                .collect();
            // contraction weight of each creator against the annihilators
            let mut weights = Vec::with_capacity(factors.len());
            for &(j, k) in &factors {
                let b = self.alg.brackets.value(self.cartan_row[j], k as i64);
                weights.push(if b.norm() == 0.0 { None } else { Some(self.coeff(k as i64)? * b) });
            }
            let removable: Vec<usize> = (0..factors.len()).filter(|&f| weights[f].is_some()).collect();
            for mask in 0u64..(1u64 << removable.len()) {
                let mut w = zscalar * amp;
                let mut removed_deg = 0i64;
                let mut keep = vec![true; factors.len()];
                for (bit, &f) in removable.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        keep[f] = false;
                        removed_deg += factors[f].1 as i64;
                        w *= weights[f].expect("removable");
                    }
                }
                let c = d + removed_deg;
                if c < 0 {
                    continue;
                }
                let mut rest: OscState = vec![Vec::new(); osc.len()];
                for (f, &(j, k)) in factors.iter().enumerate() {
                    if keep[f] {
                        rest[j].push(k);
                    }
                }
                let c = c as u32;
                if !creation_cache.contains_key(&c) {
                    let t = self.creation_terms(c)?;
                    creation_cache.insert(c, t);
                }
                for (parts, coeff) in &creation_cache[&c] {
                    let mut state = rest.clone();
                    state[node].extend_from_slice(parts);
                    state[node].sort_unstable_by(|a, b| b.cmp(a));
                    *out.terms.entry(state).or_default() += w * coeff;
                }
            }
        }
        out.terms.retain(|_, v| v.norm() != 0.0);
        Ok(out)
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

fn partitions_of(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(acc.clone());
            return;
        }
        for first in (1..=max.min(n)).rev() {
            acc.push(first);
            go(n - first, first, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Dense block of `X[n]` between sectors `λ → λ'`, degrees `≤ cap`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeMatrix {
    pub source: Vec<i64>,
    pub target: Vec<i64>,
    pub mode: i64,
    /// `e_z`: power of `z` produced by the zero modes on the source sector.
    pub offset: i64,
    pub rows: Vec<FockBasisState>,
    pub cols: Vec<FockBasisState>,
    pub entries: Vec<Vec<C64>>,
}

/// Matrix of `X[n]` on sector `λ` truncated at degree `cap`.
///
/// Entries are exact: every mode changes the oscillator degree by the fixed
/// amount `-n - e_z`, so only finitely many exponential terms contribute.
/// Modes outside `[-cap - e_z, cap - e_z]` have no entry at this cap and are
/// refused.
pub fn current_mode_matrix(
    alg: &Algebra,
    spec: &CurrentSpec,
    n: i64,
    momentum: &[i64],
    cap: u32,
) -> Result<ModeMatrix> {
    let mut op = ModeOperator::new(alg, spec)?;
    let (lo, hi) = op.window(momentum, cap);
    if n < lo || n > hi {
        return Err(Error::ModeWindow { mode: n, lo, hi });
    }
    let (ez, _, target) = op.zero_mode_action(momentum);
    let cols = enumerate_sector(momentum, cap);
    let rows = enumerate_sector(&target, cap);
    let index: HashMap<&OscState, usize> = rows.iter().enumerate().map(|(r, s)| (&s.oscillators, r)).collect();
    let mut entries = vec![vec![C64::new(0.0, 0.0); cols.len()]; rows.len()];
    for (c, state) in cols.iter().enumerate() {
        let image = op.apply(n, &FockVector::basis(state))?;
        for (osc, v) in &image.terms {
            if let Some(&r) = index.get(osc) {
                entries[r][c] = *v;
            } else {
                debug_assert!(osc_degree(osc) > cap);
            }
        }
    }
    Ok(ModeMatrix {
        source: momentum.to_vec(),
        target,
        mode: n,
        offset: ez,
        rows,
        cols,
        entries,
    })
}

/// Outcome of a brute-force commutator comparison.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CommutatorReport {
    /// Largest `|lhs - rhs|` entry divided by `scale`.
    pub max_residual: f64,
    pub max_abs_residual: f64,
    /// Largest entry of either ordered product.
    pub scale: f64,
    pub entries_checked: usize,
    /// `X Y - κ Y X` is compared; `κ = -1` for adjacent distinct nodes.
    pub kappa: f64,
    pub worst: Option<(Vec<i64>, i64, i64)>,
}

/// Checks `E_i[m] F_j[n] - κ F_j[n] E_i[m]` against its prediction on every
/// state of degree `≤ cap` in the given sectors, for `|m|, |n| ≤ window`.
///
/// For `i = j` the prediction is
/// `(1/(p-1)) (q^{(m-n)/2} H⁺_i[m+n-2] - (p/q)^{(n-m)/2} H⁻_i[m+n-2])`,
/// the modes of the two delta terms at `w = z/q` and `w = z p/q`. For
/// `i ≠ j` the prediction is zero, with `κ` the constant exchange factor of
/// the pair computed by the contraction engine.
pub fn commutator_check(
    alg: &Algebra,
    a: &CurrentSpec,
    b: &CurrentSpec,
    window: i64,
    sectors: &[Vec<i64>],
    cap: u32,
) -> Result<CommutatorReport> {
    if a.kind != CurrentKind::E || b.kind != CurrentKind::F {
        return Err(Error::Contract(format!(
            "commutator check is defined for (E, F) only, got ({}, {})",
            a.kind, b.kind
        )));
    }
    let (i, j) = (a.node, b.node);
    let same = i == j;
    let kappa = if same { C64::new(1.0, 0.0) } else { exchange_constant(alg, a, b)? };
    let ea = ModeOperator::new(alg, a)?;
    let fb = ModeOperator::new(alg, b)?;
    let hp = ModeOperator::new(alg, &CurrentSpec::new(CurrentKind::HPlus, i))?;
    let hm = ModeOperator::new(alg, &CurrentSpec::new(CurrentKind::HMinus, i))?;
    let prm = &alg.params;
    let pref = (prm.p - 1.0).inv();
    let mut report = CommutatorReport {
        kappa: kappa.re,
        ..Default::default()
    };

    let jobs: Vec<FockBasisState> = sectors.iter().flat_map(|s| enumerate_sector(s, cap)).collect();
    let partial: Vec<Result<(f64, f64, usize, Option<(Vec<i64>, i64, i64)>)>> = jobs
        .par_iter()
        .map(|state| {
            let (mut ea, mut fb, mut hp, mut hm) = (ea.clone(), fb.clone(), hp.clone(), hm.clone());
            let v = FockVector::basis(state);
            let modes: Vec<i64> = (-window..=window).collect();
            let ev: Vec<FockVector> = modes.iter().map(|&m| ea.apply(m, &v)).collect::<Result<_>>()?;
            let fv: Vec<FockVector> = modes.iter().map(|&n| fb.apply(n, &v)).collect::<Result<_>>()?;
            let mut h_cache: HashMap<i64, (FockVector, FockVector)> = HashMap::new();
            let (mut scale, mut worst, mut count, mut at) = (0.0f64, 0.0f64, 0usize, None);
            for (im, &m) in modes.iter().enumerate() {
                for (in_, &n) in modes.iter().enumerate() {
                    let ef = ea.apply(m, &fv[in_])?;
                    let fe = fb.apply(n, &ev[im])?;
                    let mut diff = ef.clone();
                    diff.add_scaled(&fe, -kappa);
                    if same {
                        let k = m + n - 2;
                        if !h_cache.contains_key(&k) {
                            let pair = (hp.apply(k, &v)?, hm.apply(k, &v)?);
                            h_cache.insert(k, pair);
                        }
                        let (hpv, hmv) = &h_cache[&k];
                        let cp = PqMonomial::new(0, (m - n) as i32).eval(prm) * pref;
                        let cm = PqMonomial::new((n - m) as i32, (m - n) as i32).eval(prm) * pref;
                        diff.add_scaled(hpv, -cp);
                        diff.add_scaled(hmv, cm);
                    }
                    scale = scale.max(ef.max_abs()).max(fe.max_abs());
                    count += diff.terms.len().max(1);
                    let r = diff.max_abs();
                    if r > worst {
                        worst = r;
                        at = Some((state.momentum.clone(), m, n));
                    }
                }
            }
            Ok((scale, worst, count, at))
        })
        .collect();
    let mut worst_abs = 0.0f64;
    for r in partial {
        let (scale, worst, count, at) = r?;
        report.scale = report.scale.max(scale);
        report.entries_checked += count;
        if worst > worst_abs {
            worst_abs = worst;
            report.worst = at;
        }
    }
    report.max_abs_residual = worst_abs;
    report.max_residual = if report.scale > 0.0 { worst_abs / report.scale } else { worst_abs };
    Ok(report)
}

/// `κ` with `X(z) Y(w) = κ Y(w) X(z)` for a pair whose exchange factor is
/// constant; errors if it is not.
fn exchange_constant(alg: &Algebra, x: &CurrentSpec, y: &CurrentSpec) -> Result<C64> {
    let mut values = Vec::new();
    for (lz, x_ratio) in [(0.2, C64::from_polar(0.6, 0.9)), (-0.3, C64::from_polar(1.7, -2.1))] {
        let logs = [C64::new(lz, 0.0), C64::new(lz, 0.0) + x_ratio.ln()];
        let (s1, _) = normal_order_scalar(alg, &[Placed::new(x.clone(), 0), Placed::new(y.clone(), 1)], &logs, 80)?;
        let (s2, _) = normal_order_scalar(alg, &[Placed::new(y.clone(), 1), Placed::new(x.clone(), 0)], &logs, 80)?;
        values.push(s1 / s2);
    }
    if (values[0] - values[1]).norm() > 1e-10 * values[0].norm() {
        return Err(Error::Contract(format!(
            "exchange factor of ({x}, {y}) is not constant; no brute-force commutator prediction"
        )));
    }
    Ok(values[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{CartanMatrix, DeformationParams, SeriesType};

    fn alg(rank: usize) -> Algebra {
        Algebra::new(
            CartanMatrix::new(SeriesType::A, rank).unwrap(),
            DeformationParams::real(0.09, 0.3, 1).unwrap(),
        )
    }

    #[test]
    fn vacuum_element_is_zero_mode_scalar() {
        let alg = alg(1);
        // on λ = 0 the zero modes give z^0; the lowest contributing mode is n = 0
        let m = current_mode_matrix(&alg, &CurrentSpec::new(CurrentKind::E, 0), 0, &[0], 0).unwrap();
        assert_eq!(m.target, vec![1]);
        assert_eq!(m.entries, vec![vec![C64::new(1.0, 0.0)]]);
        // on λ = α the zero modes give (z √(p/q))^{2}
        let m = current_mode_matrix(&alg, &CurrentSpec::new(CurrentKind::E, 0), -2, &[1], 0).unwrap();
        assert!((m.entries[0][0] - C64::new(0.09 / 0.3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn single_creation_element() {
        // ⟨a[-1] (λ+α)| E[n] |λ⟩ with n = -1 - e_z picks the first-order creation term s⁺[-1]
        let alg = alg(1);
        let m = current_mode_matrix(&alg, &CurrentSpec::new(CurrentKind::E, 0), -1, &[0], 1).unwrap();
        let r = m.rows.iter().position(|s| s.oscillators == vec![vec![1]]).unwrap();
        let expect = 1.0 / (0.3 - 1.0);
        assert!((m.entries[r][0] - C64::new(expect, 0.0)).norm() < 1e-14);
        // and ⟨λ+α| E[1] a[-1]|λ⟩ is one contraction: s⁺[1] b(1)
        let m = current_mode_matrix(&alg, &CurrentSpec::new(CurrentKind::E, 0), 1, &[0], 1).unwrap();
        let c = m.cols.iter().position(|s| s.oscillators == vec![vec![1]]).unwrap();
        let b = crate::heisenberg::bracket_closed_form(&alg.params, 2, 1);
        let expect = b * (0.3 / 0.7);
        assert!((m.entries[0][c] - expect).norm() < 1e-13);
    }

    #[test]
    fn grading_and_window() {
        let alg = alg(2);
        let spec = CurrentSpec::new(CurrentKind::F, 1);
        let lambda = [1, -1];
        let op = ModeOperator::new(&alg, &spec).unwrap();
        let (lo, hi) = op.window(&lambda, 3);
        for n in lo..=hi {
            let m = current_mode_matrix(&alg, &spec, n, &lambda, 3).unwrap();
            assert_eq!(m.target, vec![1, -2]);
            for (r, row) in m.rows.iter().enumerate() {
                for (c, col) in m.cols.iter().enumerate() {
                    if m.entries[r][c].norm() != 0.0 {
                        assert_eq!(row.degree() as i64 - col.degree() as i64, -n - m.offset);
                    }
                }
            }
        }
        match current_mode_matrix(&alg, &spec, hi + 1, &lambda, 3) {
            Err(Error::ModeWindow { lo: l, hi: h, .. }) => assert_eq!((l, h), (lo, hi)),
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn h_currents_preserve_sector() {
        let alg = alg(2);
        for kind in [CurrentKind::HPlus, CurrentKind::HMinus] {
            let m = current_mode_matrix(&alg, &CurrentSpec::new(kind, 0), 0, &[1, 0], 2).unwrap();
            assert_eq!(m.target, m.source);
            assert_eq!(m.offset, 0);
        }
    }

    #[test]
    fn orthogonal_nodes_factorise() {
        // A3 nodes 0 and 2: E_0 acts only on node-0 oscillators
        let alg = alg(3);
        let mut e0 = ModeOperator::new(&alg, &CurrentSpec::new(CurrentKind::E, 0)).unwrap();
        let mut lone = FockBasisState::vacuum(vec![0, 0, 0]);
        lone.oscillators[0] = vec![1];
        let mut with_spectator = lone.clone();
        with_spectator.oscillators[2] = vec![2];
        let a = e0.apply(1, &FockVector::basis(&lone)).unwrap();
        let b = e0.apply(1, &FockVector::basis(&with_spectator)).unwrap();
        assert_eq!(a.terms.len(), b.terms.len());
        for (osc, v) in &a.terms {
            let mut o = osc.clone();
            o[2] = vec![2];
            assert!((b.component(&o) - v).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_other_kind_pairs_and_screening_currents() {
        let alg = alg(1);
        let e = CurrentSpec::new(CurrentKind::E, 0);
        assert!(commutator_check(&alg, &e, &e, 1, &[vec![0]], 1).is_err());
        assert!(ModeOperator::new(&alg, &CurrentSpec::new(CurrentKind::SMinus, 0)).is_err());
    }
}
