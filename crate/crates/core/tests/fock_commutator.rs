//! Brute-force mode commutators on the truncated Fock space.

use elliptic_currents::fock::commutator_check;
use elliptic_currents::ope::{CurrentKind, CurrentSpec};
use elliptic_currents::{Algebra, CartanMatrix, DeformationParams, SeriesType, C64};

fn sectors(rank: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (-1..=1).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn check(alg: &Algebra, i: usize, j: usize, window: i64, cap: u32) -> f64 {
    let r = commutator_check(
        alg,
        &CurrentSpec::new(CurrentKind::E, i),
        &CurrentSpec::new(CurrentKind::F, j),
        window,
        &sectors(alg.rank()),
        cap,
    )
    .unwrap();
    assert!(r.scale > 0.0);
    r.max_residual
}

#[test]
fn sl2_same_node() {
    let alg = Algebra::new(
        CartanMatrix::new(SeriesType::A, 1).unwrap(),
        DeformationParams::real(0.09, 0.3, 1).unwrap(),
    );
    let r = check(&alg, 0, 0, 3, 3);
    assert!(r < 1e-8, "{r:e}");
}

#[test]
fn a2_all_node_pairs_complex_parameters() {
    let alg = Algebra::new(
        CartanMatrix::new(SeriesType::A, 2).unwrap(),
        DeformationParams::new(C64::new(0.08, 0.03), C64::new(0.27, -0.1), 1.into()).unwrap(),
    );
    for (i, j) in [(0, 0), (1, 1), (0, 1), (1, 0)] {
        let r = check(&alg, i, j, 2, 2);
        assert!(r < 1e-8, "({i},{j}): {r:e}");
    }
}

#[test]
fn dropping_the_second_delta_term_is_detected() {
    use elliptic_currents::fock::{FockBasisState, FockVector, ModeOperator};
    let alg = Algebra::new(
        CartanMatrix::new(SeriesType::A, 1).unwrap(),
        DeformationParams::real(0.09, 0.3, 1).unwrap(),
    );
    let mut e = ModeOperator::new(&alg, &CurrentSpec::new(CurrentKind::E, 0)).unwrap();
    let mut f = ModeOperator::new(&alg, &CurrentSpec::new(CurrentKind::F, 0)).unwrap();
    let mut hp = ModeOperator::new(&alg, &CurrentSpec::new(CurrentKind::HPlus, 0)).unwrap();
    let v = FockVector::basis(&FockBasisState::vacuum(vec![0]));
    let (m, n) = (1, 1);
    let mut diff = e.apply(m, &f.apply(n, &v).unwrap()).unwrap();
    diff.add_scaled(&f.apply(n, &e.apply(m, &v).unwrap()).unwrap(), C64::new(-1.0, 0.0));
    let scale = diff.max_abs();
    let cp = C64::new(1.0 / (0.09 - 1.0), 0.0);
    diff.add_scaled(&hp.apply(m + n - 2, &v).unwrap(), -cp);
    assert!(diff.max_abs() > 1e-3 * scale, "H⁻ term should be needed");
}
