mod common;

use common::*;
use fermiex::antisym::*;
use fermiex::state::{BasisSpec, NFermionTensor};
use fermiex::Complex64;
use proptest::prelude::*;

fn specs() -> [BasisSpec; 2] {
    [BasisSpec::new(2, 2).unwrap(), BasisSpec::new(3, 2).unwrap()]
}

#[test]
fn matches_brute_force_oracle_bitwise() {
    let mut r = rng(10);
    for n in 2..=4 {
        for spec in specs() {
            for _ in 0..5 {
                let chi = random_tensor(&mut r, n, &spec);
                let fast = antisymmetrize(&chi).unwrap();
                let slow = brute_antisymmetrize(&chi);
                for (a, b) in fast.amplitudes().iter().zip(&slow) {
                    assert_eq!(a.re.to_bits(), b.re.to_bits());
                    assert_eq!(a.im.to_bits(), b.im.to_bits());
                }
            }
        }
    }
}

#[test]
fn projector_properties() {
    let mut r = rng(11);
    for trial in 0..200 {
        let n = 2 + trial % 3;
        let spec = &specs()[trial % 2];
        let chi = random_tensor(&mut r, n, spec);
        let a = antisymmetrize(&chi).unwrap();
        let aa = antisymmetrize(&a).unwrap();
        assert!(aa.distance(&a).unwrap() <= 1e-12 * chi.norm(), "idempotence");
        assert!(a.norm() <= chi.norm() + 1e-12, "contraction");
        if a.norm() > 1e-8 {
            assert!(exchange_antisymmetry_check(&a, 1e-12).unwrap());
        }
    }
}

#[test]
fn pair_symmetry_implies_exclusion() {
    let mut r = rng(12);
    for trial in 0..200 {
        let n = 2 + trial % 3;
        let spec = &specs()[trial % 2];
        let (i, j) = match n {
            2 => (0, 1),
            _ => (trial % (n - 1), n - 1),
        };
        let chi = symmetrize_pair(&random_tensor(&mut r, n, spec), i, j);
        assert!(pair_symmetric(&chi, i + 1, j + 1, 1e-12).unwrap());
        let v = is_excluded(&chi, 1e-10).unwrap();
        assert!(v.excluded, "trial {trial}: ratio {}", v.norm_ratio);
        assert!(matches!(v.condition, Condition::PairSymmetry(..)));
    }
}

#[test]
fn orthonormal_products_have_norm_one_over_sqrt_factorial() {
    let mut r = rng(13);
    for n in 2..=4 {
        let spec = BasisSpec::new(3, 2).unwrap();
        let chi = orthonormal_product(&mut r, n, &spec);
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        let oracle: f64 = brute_antisymmetrize(&chi).iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let got = antisymmetrize(&chi).unwrap().norm();
        assert!((got - 1.0 / fact.sqrt()).abs() <= 1e-12, "n={n}: {got}");
        assert!((got - oracle).abs() <= 1e-15);
    }
}

#[test]
fn swap_is_an_involution() {
    let mut r = rng(14);
    let spec = BasisSpec::new(2, 2).unwrap();
    let t = random_tensor(&mut r, 4, &spec);
    for i in 1..=4 {
        for j in i + 1..=4 {
            let twice = swap_pair(&swap_pair(&t, i, j).unwrap(), i, j).unwrap();
            assert_eq!(twice, t);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn antisymmetrizer_is_linear(seed in any::<u64>(), n in 2usize..=3, a_re in -2.0f64..2.0, a_im in -2.0f64..2.0) {
        let mut r = rng(seed);
        let spec = BasisSpec::new(2, 2).unwrap();
        let x = random_tensor(&mut r, n, &spec);
        let y = random_tensor(&mut r, n, &spec);
        let alpha = Complex64::new(a_re, a_im);
        let beta = Complex64::new(0.5, -0.25);
        let combo = x.scale(alpha).add_scaled(beta, &y).unwrap();
        let lhs = antisymmetrize(&combo).unwrap();
        let rhs = antisymmetrize(&x).unwrap().scale(alpha).add_scaled(beta, &antisymmetrize(&y).unwrap()).unwrap();
        prop_assert!(lhs.distance(&rhs).unwrap() <= 1e-12 * combo.norm().max(1.0));
    }

    #[test]
    fn repeated_factor_vanishes(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let spec = BasisSpec::new(2, 2).unwrap();
        let chi = product_with_repeat(&mut r, n, &spec, 0, n - 1);
        let v = is_excluded(&chi, 1e-10).unwrap();
        prop_assert!(v.norm_ratio <= 1e-14);
        prop_assert_eq!(v.condition, Condition::PairSymmetry(1, n));
    }
}

#[test]
fn unit_basis_tensor_ratio() {
    let spec = BasisSpec::new(3, 1).unwrap();
    let v = is_excluded(&NFermionTensor::basis(spec, &[0, 1, 2]).unwrap(), 1e-10).unwrap();
    assert!((v.norm_ratio - 0.408_248_29).abs() < 1e-8);
    assert!(!v.excluded);
}
