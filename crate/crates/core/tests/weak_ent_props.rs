mod common;

use common::*;
use fermiex::antisym::is_excluded;
use fermiex::state::{SpatialMatrix, SpinVector};
use fermiex::two_fermion::{build_state, numerator_prestate, slater_report, HeliumVariant};
use fermiex::weak_ent::*;
use fermiex::{Complex64, Error, DEFAULT_TOL};

#[test]
fn schmidt_factors_rebuild_the_matrix() {
    let mut r = rng(30);
    for trial in 0..100 {
        let d = 1 + trial % 6;
        let m = random_matrix(&mut r, d);
        let dec = schmidt(&m, 1e-8).unwrap();
        let diff = (dec.reconstruct().entries() - m.entries()).norm();
        assert!(diff <= 1e-10, "d={d}: {diff}");
        let sv = &dec.report.singular_values;
        assert_eq!(sv.len(), d);
        assert!(sv.windows(2).all(|w| w[0] >= w[1]));
        assert!((sv.iter().map(|l| l * l).sum::<f64>() - 1.0).abs() <= 1e-10);
        assert!((0.0..=1.0).contains(&dec.report.strength));
        for fam in [&dec.left, &dec.right] {
            for (i, a) in fam.iter().enumerate() {
                for (j, b) in fam.iter().enumerate() {
                    let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - c(want)).norm() <= 1e-10);
                }
            }
        }
    }
}

#[test]
fn spectrum_is_invariant_under_mode_rotations() {
    let mut r = rng(31);
    for trial in 0..50 {
        let d = 2 + trial % 5;
        let m = random_matrix(&mut r, d);
        let (u, v) = (random_unitary(&mut r, d), random_unitary(&mut r, d));
        let rotated = SpatialMatrix::new(&u * m.entries() * &v).unwrap();
        let a = schmidt(&m, 1e-8).unwrap().report.singular_values;
        let b = schmidt(&rotated, 1e-8).unwrap().report.singular_values;
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-10);
        }
    }
}

#[test]
fn discarded_weight_is_the_tail_of_the_spectrum() {
    let mut r = rng(32);
    for trial in 0..60 {
        let d = 2 + trial % 4;
        let m = if trial % 2 == 0 { rank1_matrix(&mut r, d) } else { random_matrix(&mut r, d) };
        let t = rank1_truncate(&m).unwrap();
        let rep = schmidt(&m, 1e-8).unwrap().report;
        let tail: f64 = rep.singular_values[1..].iter().map(|l| l * l).sum();
        assert!((t.discarded_weight - tail).abs() <= 1e-12);
        assert_eq!(t.discarded_weight.abs() <= 1e-12, rep.schmidt_rank == 1);
        assert!((t.truncated.frobenius_norm() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn star_pauli_verdict_matches_builder_and_generic_detector() {
    let up = SpinVector::up();
    let d = 3;
    let e = |x: usize| -> Vec<Complex64> { (0..d).map(|k| c(if k == x { 1.0 } else { 0.0 })).collect() };
    for x in 0..d {
        for y in 0..d {
            let (psi, phi) = (e(x), e(y));
            let verdict = pauli_verdict_star(&psi, &phi, &up, DEFAULT_TOL).unwrap();
            let m = SpatialMatrix::outer(&psi, &phi).unwrap();
            let built = build_state(HeliumVariant::Star, &m, &up, &up, DEFAULT_TOL);
            assert_eq!(verdict.excluded, built.is_err());
            let chi = numerator_prestate(HeliumVariant::Star, &m, &up, &up).unwrap();
            assert_eq!(verdict.excluded, is_excluded(&chi, DEFAULT_TOL).unwrap().excluded);
            assert_eq!(verdict.excluded, x == y);
        }
    }
}

#[test]
fn star_entangled_iff_spatial_rank_at_least_two() {
    let mut r = rng(33);
    for trial in 0..60 {
        let d = 4 + trial % 3;
        let m = if trial % 3 == 0 { rank1_matrix(&mut r, d) } else { random_matrix(&mut r, d) };
        let s = random_spin(&mut r, 2);
        let st = build_state(HeliumVariant::Star, &m, &s, &s, DEFAULT_TOL).unwrap();
        let entangled = slater_report(st.tensor(), 1e-8).unwrap().entangled;
        assert_eq!(entangled, schmidt(&m, 1e-8).unwrap().report.schmidt_rank >= 2);
    }
}

#[test]
fn truncation_of_zero_matrix_fails() {
    let z = SpatialMatrix::from_fn(2, |_, _| c(0.0)).unwrap();
    assert!(matches!(rank1_truncate(&z), Err(Error::ZeroState { .. })));
}
