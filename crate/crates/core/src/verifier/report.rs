use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::catalogue::Route;

/// Result of one catalogue relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub relation: String,
    /// The relation in the crate's own notation.
    pub anchor_quote: String,
    pub route: Route,
    pub n_samples: usize,
    /// `None` when the residual is not finite (serialised as `null`).
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub notes: Vec<String>,
    pub elapsed_ms: f64,
}

/// A relation that was selected but could not run in this configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedRelation {
    pub relation: String,
    pub reason: String,
}

/// Bumped whenever a field of [`VerificationReport`] changes meaning or is
/// removed.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub algebra: String,
    pub p: String,
    pub q: String,
    pub c: String,
    pub order: usize,
    pub fock_degree: u32,
    pub fock_window: i64,
    pub samples: usize,
    pub radius: f64,
    pub seed: u64,
    pub checks: Vec<RelationCheck>,
    pub skipped: Vec<SkippedRelation>,
    /// Every executed check passed.
    pub all_pass: bool,
    pub elapsed_ms: f64,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Plain-text table, one line per check, followed by notes and a tally.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{}  p={}  q={}  c={}  order={}  fock D={} |m|<={}  seed={}",
            self.algebra, self.p, self.q, self.c, self.order, self.fock_degree, self.fock_window, self.seed
        );
        let width = self.checks.iter().map(|c| c.relation.len()).max().unwrap_or(8).max(8);
        for c in &self.checks {
            let res = c.max_residual.map_or("inf".to_string(), |r| format!("{r:.2e}"));
            let _ = writeln!(
                s,
                "{} {:<width$}  {:<8}  n={:<5} residual={:<9} tol={:.0e}  {:.0} ms",
                if c.pass { "PASS" } else { "FAIL" },
                c.relation,
                c.route.as_str(),
                c.n_samples,
                res,
                c.tolerance,
                c.elapsed_ms,
            );
            for n in &c.notes {
                let _ = writeln!(s, "       note: {n}");
            }
        }
        for k in &self.skipped {
            let _ = writeln!(s, "SKIP {:<width$}  {}", k.relation, k.reason);
        }
        let failed = self.failures().count();
        let _ = writeln!(
            s,
            "{} of {} checks passed, {} skipped, {:.1} s",
            self.checks.len() - failed,
            self.checks.len(),
            self.skipped.len(),
            self.elapsed_ms / 1000.0
        );
        s
    }
}
