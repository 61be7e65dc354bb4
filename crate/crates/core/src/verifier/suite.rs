use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::catalogue::{select, CheckKind, RelationSpec, Route};
use super::checks::{self, Outcome, Sampler};
use super::report::{RelationCheck, SkippedRelation, VerificationReport, REPORT_SCHEMA_VERSION};
use super::structure::Nome;
use crate::config::{CartanMatrix, DeformationParams};
use crate::error::{Error, Result};
use crate::ope::CurrentKind;
use crate::qlaurent::{delta_extract, DEFAULT_ORDER};
use crate::Algebra;

/// Pass thresholds per check family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Exchange, normal-ordering and series-route commutator checks.
    pub series: f64,
    pub fock: f64,
    pub serre: f64,
    /// ψ inversion, φ factorisation and exchange-factor inversion.
    pub structure: f64,
    /// Serre coefficients against their engine rebuild.
    pub coefficients: f64,
    pub coincident: f64,
    pub theta: f64,
    pub bracket: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            series: 1e-8,
            fock: 1e-8,
            serre: 1e-7,
            structure: 1e-10,
            coefficients: 1e-9,
            coincident: 1e-6,
            theta: 1e-9,
            bracket: 1e-12,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub cartan: CartanMatrix,
    pub params: DeformationParams,
    /// Factors kept in every truncated product and terms in every series.
    pub order: usize,
    /// Fock truncation degree `D`.
    pub fock_degree: u32,
    /// Mode window `|m|, |n| ≤ fock_window` for the Fock route.
    pub fock_window: i64,
    /// Points per node pair for exchange and normal-ordering checks.
    pub samples: usize,
    /// `|w/z|` for those points.
    pub radius: f64,
    /// Triples per adjacent pair for the Serre checks.
    pub serre_samples: usize,
    /// Points for the function identities.
    pub structure_samples: usize,
    pub tolerances: Tolerances,
    pub seed: u64,
    /// Relation ids or id prefixes; empty runs the whole catalogue.
    pub relations: Vec<String>,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl SuiteConfig {
    pub fn new(cartan: CartanMatrix, params: DeformationParams) -> Self {
        Self {
            cartan,
            params,
            order: DEFAULT_ORDER,
            fock_degree: 3,
            fock_window: 3,
            samples: 16,
            radius: 0.5,
            serre_samples: 8,
            structure_samples: 100,
            tolerances: Tolerances::default(),
            seed: 0,
            relations: Vec::new(),
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.cartan.validate()?;
        if self.order < 4 {
            return Err(Error::Config(format!("order must be at least 4, got {}", self.order)));
        }
        if self.samples == 0 || self.serre_samples == 0 || self.structure_samples == 0 {
            return Err(Error::Config("sample counts must be positive".into()));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) || (self.radius - 1.0).abs() < 1e-9 {
            return Err(Error::Config(format!(
                "sample radius must be positive, finite and off |w/z| = 1, got {}",
                self.radius
            )));
        }
        if self.fock_window < 0 {
            return Err(Error::Config("Fock mode window must be non-negative".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("thread count must be positive".into()));
        }
        select(&self.relations)?;
        Ok(())
    }
}

fn node_pairs(rank: usize) -> Vec<(usize, usize)> {
    (0..rank).flat_map(|i| (0..rank).map(move |j| (i, j))).collect()
}

fn pair_label(i: usize, j: usize) -> String {
    format!("(i,j)=({},{})", i + 1, j + 1)
}

/// Sectors with momenta in `{-1, 0, 1}` on nodes `i`, `j` and 0 elsewhere.
fn fock_sectors(rank: usize, i: usize, j: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for a in -1..=1 {
        for b in -1..=1 {
            if i == j && a != b {
                continue;
            }
            let mut v = vec![0; rank];
            v[i] = a;
            v[j] = b;
            out.push(v);
        }
    }
    out
}

fn degenerate_note(prm: &DeformationParams) -> Option<String> {
    ((prm.p - prm.q * prm.q).norm() < 1e-12 * prm.p.norm()).then(|| {
        "p = q^2: β = -1, θ_q(p) = 0 and ψ_ii(x) = x^{-4}; points where a theta vanishes are skipped".to_string()
    })
}

fn run_kind(cfg: &SuiteConfig, alg: &Algebra, spec: &RelationSpec) -> Result<(Outcome, f64)> {
    let tol = &cfg.tolerances;
    let order = cfg.order;
    let rank = alg.rank();
    let mut rng = Sampler::new(cfg.seed, spec.id);
    let mut out = Outcome::default();
    let tolerance = match spec.kind {
        CheckKind::Theta => {
            out = checks::check_theta(cfg.structure_samples, order, &mut rng)?;
            tol.theta
        }
        CheckKind::Bracket => {
            out = checks::check_bracket(alg, 30)?;
            tol.bracket
        }
        CheckKind::NormalOrder(pair) => {
            for (i, j) in node_pairs(rank) {
                let o = checks::check_normal_order(alg, pair, i, j, cfg.samples, cfg.radius, order, &mut rng)?;
                out.merge(o, &pair_label(i, j));
            }
            if pair == crate::ope::PairKind::EF && !alg.cartan.adjacent_pairs().is_empty() {
                out.notes.push(
                    "the a = -1 factor is the one for E_i(z) F_j(w); its reference label reads E_i(z) E_j(w)".into(),
                );
            }
            tol.series
        }
        CheckKind::Exchange(form) => {
            for (i, j) in node_pairs(rank) {
                let o = checks::check_exchange(alg, form, i, j, cfg.samples, cfg.radius, order, &mut rng)?;
                out.merge(o, &pair_label(i, j));
            }
            if form == super::ExchangeForm::HPlusHMinus {
                out.notes.push("checked in the general-c form at the configured c".into());
            }
            tol.series
        }
        CheckKind::Commutator => {
            let mut fock_worst = 0.0f64;
            for (i, j) in node_pairs(rank) {
                let o = checks::check_commutator_series(alg, i, j, order, tol.series)?;
                out.merge(o, &format!("series {}", pair_label(i, j)));
                let sectors = fock_sectors(rank, i, j);
                let o = commutator_fock(alg, i, j, cfg, &sectors)?;
                fock_worst = fock_worst.max(o.max_residual);
                out.merge(o, &format!("fock {}", pair_label(i, j)));
            }
            out.notes.push(format!(
                "fock route: D = {}, |m|,|n| <= {}, worst residual {fock_worst:.3e}",
                cfg.fock_degree, cfg.fock_window
            ));
            out.notes.push(
                "H+ term supported at w = z q^{-c}; for i != j E_i, F_j commute up to (-1)^a (anticommute for a = -1)".into(),
            );
            if let Some(n) = wrong_support_note(alg, order) {
                out.notes.push(n);
            }
            tol.series.max(tol.fock)
        }
        CheckKind::Serre(kind) => {
            for (i, j) in adjacent(alg) {
                let o = checks::check_serre(alg, kind, i, j, cfg.serre_samples, order, &mut rng)?;
                out.merge(o, &pair_label(i, j));
            }
            tol.serre
        }
        CheckKind::SerreCoefficients => {
            for (i, j) in adjacent(alg) {
                for kind in [CurrentKind::E, CurrentKind::F] {
                    let o = checks::check_serre_coefficients(alg, kind, i, j, cfg.serre_samples, order, &mut rng)?;
                    out.merge(o, &format!("{} {}", if kind == CurrentKind::E { "f" } else { "g" }, pair_label(i, j)));
                }
            }
            tol.coefficients
        }
        CheckKind::PsiInversion => {
            out = checks::check_psi_inversion(alg, cfg.structure_samples, order, &mut rng)?;
            out.notes.extend(degenerate_note(&alg.params));
            tol.structure
        }
        CheckKind::PhiFactorization => {
            out = checks::check_phi_factorization(alg, cfg.structure_samples, order, &mut rng)?;
            tol.structure
        }
        CheckKind::SerreCoincident => {
            for nome in [Nome::Q, Nome::QTilde] {
                let o = checks::check_serre_coincident(alg, nome, -1, cfg.serre_samples, order, &mut rng)?;
                out.merge(o, if nome == Nome::Q { "f" } else { "g" });
            }
            out.notes.extend(degenerate_note(&alg.params));
            tol.coincident
        }
        CheckKind::ExchangeInversion => {
            out = checks::check_exchange_inversion(alg, cfg.structure_samples, order, &mut rng)?;
            tol.structure
        }
    };
    Ok((out, tolerance))
}

fn adjacent(alg: &Algebra) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for (i, j) in alg.cartan.adjacent_pairs() {
        v.push((i, j));
        v.push((j, i));
    }
    v.sort_unstable();
    v.dedup();
    v
}

fn commutator_fock(alg: &Algebra, i: usize, j: usize, cfg: &SuiteConfig, sectors: &[Vec<i64>]) -> Result<Outcome> {
    let rep = crate::fock::commutator_check(
        alg,
        &crate::ope::CurrentSpec::new(CurrentKind::E, i),
        &crate::ope::CurrentSpec::new(CurrentKind::F, j),
        cfg.fock_window,
        sectors,
        cfg.fock_degree,
    )?;
    let mut out = Outcome::default();
    out.max_residual = rep.max_residual;
    out.n_samples = rep.entries_checked;
    Ok(out)
}

/// Whether a delta at `w = z q` (instead of `w = z/q`) is rejected.
fn wrong_support_note(alg: &Algebra, order: usize) -> Option<String> {
    let prm = &alg.params;
    let (inner, outer) = checks::ef_expansions(alg, 0, 0, order).ok()?;
    match delta_extract(&inner, &outer, &[prm.q, prm.p / prm.q], 1e-8) {
        Err(Error::NotDeltaComb { max_residual, .. }) => Some(format!(
            "an H+ delta at w = z q instead is rejected (residual {max_residual:.2e})"
        )),
        _ => None,
    }
}

fn run_one(cfg: &SuiteConfig, alg: &Algebra, spec: &RelationSpec) -> RelationCheck {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(|| run_kind(cfg, alg, spec)));
    let (outcome, tolerance, error) = match result {
        Ok(Ok((o, t))) => (o, t, None),
        Ok(Err(e)) => (Outcome::default(), f64::NAN, Some(format!("error: {e}"))),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            (Outcome::default(), f64::NAN, Some(format!("panic: {msg}")))
        }
    };
    let mut notes = outcome.notes;
    if outcome.skipped > 0 {
        notes.push(format!("{} sample(s) skipped near theta zeros or poles", outcome.skipped));
    }
    let finite = outcome.max_residual.is_finite();
    let pass = error.is_none() && outcome.n_samples > 0 && finite && outcome.max_residual <= tolerance;
    if error.is_none() && outcome.n_samples == 0 {
        notes.push("no samples evaluated".into());
    }
    notes.extend(error);
    RelationCheck {
        relation: spec.id.to_string(),
        anchor_quote: spec.anchor.to_string(),
        route: spec.route,
        n_samples: outcome.n_samples,
        max_residual: finite.then_some(outcome.max_residual),
        tolerance: if tolerance.is_nan() { 0.0 } else { tolerance },
        pass,
        notes,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn skip_reason(cfg: &SuiteConfig, alg: &Algebra, spec: &RelationSpec) -> Option<String> {
    if spec.operator && !cfg.params.is_level_one() {
        return Some(format!(
            "needs the level-one currents; c = {} admits only the function identities",
            cfg.params.c
        ));
    }
    let needs_adjacent = matches!(spec.kind, CheckKind::Serre(_) | CheckKind::SerreCoefficients);
    if needs_adjacent && alg.cartan.adjacent_pairs().is_empty() {
        return Some("no adjacent nodes".into());
    }
    if spec.kind == CheckKind::SerreCoincident && alg.cartan.adjacent_pairs().is_empty() {
        return Some("no adjacent nodes".into());
    }
    None
}

/// Runs the selected relations in parallel and assembles the report.
pub fn run_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let start = Instant::now();
    let alg = Algebra::new(cfg.cartan.clone(), cfg.params.clone());
    let specs = select(&cfg.relations)?;
    let mut skipped = Vec::new();
    let mut runnable = Vec::new();
    for s in specs {
        match skip_reason(cfg, &alg, s) {
            Some(reason) => skipped.push(SkippedRelation {
                relation: s.id.to_string(),
                reason,
            }),
            None => runnable.push(s),
        }
    }
    let work = || -> Vec<RelationCheck> { runnable.par_iter().map(|s| run_one(cfg, &alg, s)).collect() };
    let checks = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}")))?
            .install(work),
        None => work(),
    };
    let all_pass = checks.iter().all(|c| c.pass);
    let fmt_c = |z: C64| {
        if z.im == 0.0 {
            format!("{}", z.re)
        } else {
            format!("{}{:+}i", z.re, z.im)
        }
    };
    Ok(VerificationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        algebra: cfg.cartan.label(),
        p: fmt_c(cfg.params.p),
        q: fmt_c(cfg.params.q),
        c: cfg.params.c.to_string(),
        order: cfg.order,
        fock_degree: cfg.fock_degree,
        fock_window: cfg.fock_window,
        samples: cfg.samples,
        radius: cfg.radius,
        seed: cfg.seed,
        checks,
        skipped,
        all_pass,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Series => "series",
            Route::Fock => "fock",
            Route::Both => "both",
            Route::Function => "function",
        }
    }
}
