//! Acceptance criteria 1–8, one PASS/FAIL line each.
//!
//! Run with `cargo test -p elliptic-currents --test acceptance -- --nocapture`
//! to see the lines. Expected values are recomputed here from independent
//! formulas (triple-product series, the bracket formula, the tabulated
//! normal-ordering factors) rather than taken from the library.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use elliptic_currents::fock::commutator_check;
use elliptic_currents::ope::{contract, CurrentKind, CurrentSpec};
use elliptic_currents::qlaurent::{delta_extract, theta};
use elliptic_currents::verifier::checks::{ef_expansions, engine_exchange};
use elliptic_currents::verifier::{run_suite, SuiteConfig};
use elliptic_currents::{Algebra, CartanMatrix, DeformationParams, SeriesType, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: f64 = 0.09;
const Q: f64 = 0.3;

struct Line {
    n: u32,
    pass: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

fn prm() -> DeformationParams {
    DeformationParams::real(P, Q, 1).unwrap()
}

fn algebra(series: SeriesType, rank: usize) -> Algebra {
    Algebra::new(CartanMatrix::new(series, rank).unwrap(), prm())
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

/// `θ_a(x) = Σ_n (-1)^n a^{n(n-1)/2} x^n` (Jacobi triple product).
fn theta_series(x: C64, a: C64) -> C64 {
    (-60i32..=60)
        .map(|n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let e = n * (n - 1) / 2;
            a.powi(e) * x.powi(n) * sign
        })
        .sum()
}

fn criterion_1() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = C64::from_polar(rng.gen_range(0.05..0.5), rng.gen_range(-PI..PI));
        let u = C64::new(rng.gen_range(-0.6..0.6), rng.gen_range(-PI..PI));
        let x = u.exp();
        let t = theta(x, a, 80).unwrap();
        let scale = t.norm();
        worst = worst.max(rel(t, theta_series(x, a)));
        worst = worst.max((theta(a * x, a, 80).unwrap() + t / x).norm() / scale);
        let turned = theta((u + C64::new(0.0, 2.0 * PI)).exp(), a, 80).unwrap();
        worst = worst.max((turned - t).norm() / scale);
    }
    (worst < 1e-9, format!("100 points, max residual {worst:.2e} (tol 1e-9)"))
}

fn criterion_2() -> (bool, String) {
    let (p, q) = (C64::new(P, 0.0), C64::new(Q, 0.0));
    let b = |a: i64, n: i64| -> C64 {
        let nf = n as f64;
        let one = C64::new(1.0, 0.0);
        (one - q.powf(nf)) * (p.powf(a as f64 * nf / 2.0) - p.powf(-(a as f64) * nf / 2.0)) * (one - (p / q).powf(nf))
            / (one - p.powf(nf))
            / nf
    };
    let mut worst = 0.0f64;
    let mut pairs = 0;
    for (series, rank) in [(SeriesType::A, 2), (SeriesType::D, 4)] {
        let alg = algebra(series, rank);
        for i in 0..rank {
            for j in 0..rank {
                pairs += 1;
                let a = alg.cartan.entry(i, j);
                for n in (-30..=30).filter(|&n| n != 0) {
                    let got = alg.brackets.bracket(i, j, n, -n).unwrap();
                    let back = alg.brackets.bracket(j, i, -n, n).unwrap();
                    if a == 0 {
                        worst = worst.max(got.norm());
                    } else {
                        let want = b(a, n);
                        worst = worst.max(rel(got, want)).max((got + back).norm() / want.norm());
                    }
                }
            }
        }
    }
    (worst < 1e-12, format!("{pairs} node pairs of A2 and D4, |n| <= 30, max residual {worst:.2e} (tol 1e-12)"))
}

fn criterion_3() -> (bool, String) {
    // A3: nodes (0,0), (0,1), (0,2) give A = 2, -1, 0
    let alg = algebra(SeriesType::A, 3);
    let (p, q) = (C64::new(P, 0.0), C64::new(Q, 0.0));
    let (sp, sq) = (p.sqrt(), q.sqrt());
    let one = C64::new(1.0, 0.0);
    // G(u, v) with u the argument of the left factor
    let printed = |pair: (CurrentKind, CurrentKind), a: i64, u: C64, v: C64| -> C64 {
        use CurrentKind::*;
        match (pair, a) {
            (_, 0) => one,
            ((SPlus, SMinus), 2) => one / ((u - v * q) * (u - v * q / p)),
            ((SPlus, SMinus), -1) => u - v * q / sp,
            ((SMinus, SPlus), 2) => one / ((u - v / q) * (u - v * p / q)),
            ((SMinus, SPlus), -1) => u - v * sp / q,
            ((E, F), 2) => one / ((u * sp / sq).powi(2) * (one - v * q / u) * (one - v * q / (p * u))),
            ((E, F), -1) => u * sp / sq * (one - v / u * q / sp),
            ((F, E), 2) => one / ((u * sq).powi(2) * (one - v / (u * q)) * (one - v * p / (u * q))),
            ((F, E), -1) => u * sq * (one - v / u * sp / q),
            _ => unreachable!(),
        }
    };
    let mut worst = 0.0f64;
    let mut count = 0;
    use CurrentKind::*;
    for pair in [(SPlus, SMinus), (SMinus, SPlus), (E, F), (F, E)] {
        for j in 0..3 {
            let a = alg.cartan.entry(0, j);
            let ope = contract(&alg, &CurrentSpec::new(pair.0, 0), &CurrentSpec::new(pair.1, j), 80).unwrap();
            for k in 0..16 {
                let lz = 0.2 - 0.05 * k as f64;
                let x = C64::from_polar(0.5, 2.0 * PI * (k as f64 + 0.3) / 16.0);
                let u = C64::new(lz.exp(), 0.0);
                worst = worst.max(rel(ope.total(&alg, lz, x), printed(pair, a, u, u * x)));
                count += 1;
            }
        }
    }
    (worst < 1e-8, format!("{count} points (4 pairs x A in {{2,-1,0}} x 16), max residual {worst:.2e} (tol 1e-8)"))
}

fn criterion_4() -> (bool, String) {
    let mut worst = 0.0f64;
    let mut all = true;
    let mut n = 0;
    for rank in [1, 2] {
        let mut cfg = SuiteConfig::new(CartanMatrix::new(SeriesType::A, rank).unwrap(), prm());
        cfg.relations = vec!["exchange".into()];
        let r = run_suite(&cfg).unwrap();
        for c in &r.checks {
            all &= c.pass;
            n += c.n_samples;
            worst = worst.max(c.max_residual.unwrap_or(f64::INFINITY));
        }
    }
    // inline oracle for E(z) E(w) on sl2: -x^{-1} θ_q(x p) / θ_q(p/x), x = w/z
    let alg = algebra(SeriesType::A, 1);
    let (p, q) = (C64::new(P, 0.0), C64::new(Q, 0.0));
    let e = CurrentSpec::new(CurrentKind::E, 0);
    for k in 0..16 {
        let x = C64::from_polar(0.5, 2.0 * PI * (k as f64 + 0.5) / 16.0);
        let engine = engine_exchange(&alg, &e, &e, C64::new(0.1, 0.0), x, 80).unwrap();
        let want = -theta_series(x * p, q) / theta_series(p / x, q) / x;
        worst = worst.max(rel(engine, want));
        n += 1;
    }
    (
        all && worst < 1e-8,
        format!("11 exchange relations on A1 and A2, {n} samples, max residual {worst:.2e} (tol 1e-8)"),
    )
}

fn criterion_5() -> (bool, String) {
    let mut worst_a = 0.0f64;
    for rank in [1usize, 2] {
        let alg = algebra(SeriesType::A, rank);
        let (p, q) = (C64::new(P, 0.0), C64::new(Q, 0.0));
        let (inner, outer) = ef_expansions(&alg, 0, 0, 80).unwrap();
        // a decoy candidate must come back with zero weight (at p = q^2 the
        // tempting x = q coincides with p/q, so use an unrelated point)
        let decoy_at = C64::new(0.2, 0.7);
        let supports = [q.inv(), p / q, decoy_at];
        let comb = delta_extract(&inner, &outer, &supports, 1e-8).unwrap();
        worst_a = worst_a.max(comb.residual);
        let decoy = comb.term_at(decoy_at, 1e-12).map_or(C64::new(0.0, 0.0), |t| t.weight);
        worst_a = worst_a.max(decoy.norm());
        // H+ at w = z/q with weight 1/((p-1) z w); H- at w = z p/q with the opposite sign
        for (x0, sign) in [(supports[0], 1.0), (supports[1], -1.0)] {
            let want = sign / ((p - 1.0) * x0);
            let got = comb.term_at(x0, 1e-12).unwrap().weight;
            worst_a = worst_a.max(rel(got, want));
        }
    }
    let mut worst_b = 0.0f64;
    let mut entries = 0;
    for rank in [1usize, 2] {
        let alg = algebra(SeriesType::A, rank);
        let sectors: Vec<Vec<i64>> = if rank == 1 {
            vec![vec![-1], vec![0], vec![1]]
        } else {
            (-1..=1).flat_map(|a| (-1..=1).map(move |b| vec![a, b])).collect()
        };
        for i in 0..rank {
            for j in 0..rank {
                let rep = commutator_check(
                    &alg,
                    &CurrentSpec::new(CurrentKind::E, i),
                    &CurrentSpec::new(CurrentKind::F, j),
                    3,
                    &sectors,
                    3,
                )
                .unwrap();
                worst_b = worst_b.max(rep.max_residual);
                entries += rep.entries_checked;
            }
        }
    }
    (
        worst_a < 1e-8 && worst_b < 1e-8,
        format!(
            "(a) supports {{1/q, p/q}} (decoy support rejected), weights residual {worst_a:.2e}; (b) Fock A1+A2, D=3, |m|,|n|<=3, {entries} entries, residual {worst_b:.2e} (tol 1e-8)"
        ),
    )
}

fn criterion_6() -> (bool, String) {
    let mut cfg = SuiteConfig::new(CartanMatrix::new(SeriesType::A, 2).unwrap(), prm());
    cfg.relations = vec!["serre".into()];
    let r = run_suite(&cfg).unwrap();
    let worst = r.checks.iter().filter_map(|c| c.max_residual).fold(0.0, f64::max);
    let n: usize = r.checks.iter().map(|c| c.n_samples).sum();
    (
        r.all_pass && r.checks.len() == 2 && worst < 1e-7,
        format!("E and F versions, {n} triples over both orderings of the adjacent pair, max residual {worst:.2e} (tol 1e-7)"),
    )
}

fn criterion_7() -> (bool, String) {
    let mut cfg = SuiteConfig::new(CartanMatrix::new(SeriesType::A, 2).unwrap(), prm());
    cfg.relations = vec![
        "structure/psi-inversion".into(),
        "structure/phi-factorization".into(),
        "structure/serre-coefficients".into(),
    ];
    let r = run_suite(&cfg).unwrap();
    let get = |id: &str| r.checks.iter().find(|c| c.relation == id).unwrap();
    let psi = get("structure/psi-inversion");
    let phi = get("structure/phi-factorization");
    let coef = get("structure/serre-coefficients");
    let pass = psi.pass && phi.pass && coef.pass && psi.tolerance <= 1e-10 && phi.tolerance <= 1e-10 && coef.tolerance <= 1e-9;
    let note = phi.notes.first().cloned().unwrap_or_default();
    (
        pass,
        format!(
            "ψ inversion {:.2e}, φ factorisation (with x^-A) {:.2e} [{note}], f/g rebuild {:.2e}",
            psi.max_residual.unwrap_or(f64::INFINITY),
            phi.max_residual.unwrap_or(f64::INFINITY),
            coef.max_residual.unwrap_or(f64::INFINITY),
        ),
    )
}

fn criterion_8() -> (bool, String) {
    let cfg = SuiteConfig::new(CartanMatrix::new(SeriesType::A, 2).unwrap(), prm());
    let r = run_suite(&cfg).unwrap();
    let failed: Vec<&str> = r.failures().map(|c| c.relation.as_str()).collect();
    (
        r.all_pass && r.skipped.is_empty(),
        format!("{} checks, failures: {failed:?}", r.checks.len()),
    )
}

#[test]
fn acceptance() {
    type Criterion = fn() -> (bool, String);
    let plan: [(u32, Criterion, u64); 8] = [
        (1, criterion_1, 1),
        (2, criterion_2, 5),
        (3, criterion_3, 10),
        (4, criterion_4, 60),
        (5, criterion_5, 180),
        (6, criterion_6, 60),
        (7, criterion_7, 60),
        (8, criterion_8, 300),
    ];
    let mut lines = Vec::new();
    for (n, f, secs) in plan {
        let start = Instant::now();
        let (pass, detail) = f();
        lines.push(Line {
            n,
            pass,
            detail,
            elapsed: start.elapsed(),
            budget: Duration::from_secs(secs),
        });
    }
    let mut ok = true;
    for l in &lines {
        let in_time = l.elapsed <= l.budget;
        ok &= l.pass && in_time;
        println!(
            "criterion {}: {} — {} ({:.2} s, budget {} s)",
            l.n,
            if l.pass && in_time { "PASS" } else { "FAIL" },
            l.detail,
            l.elapsed.as_secs_f64(),
            l.budget.as_secs()
        );
    }
    assert!(ok, "at least one acceptance criterion failed");
}
