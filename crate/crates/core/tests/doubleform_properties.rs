use lovelock_core::doubleform::oracle::{contract_bruteforce, contract_orthonormal, kn_bruteforce};
use lovelock_core::doubleform::{contract_power_formula, metric_form, metric_inverse, DoubleForm};
use lovelock_core::random;
use lovelock_core::Q;
use proptest::prelude::*;

fn factorial(n: i64) -> Q {
    Q::factorial(n as u32)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn kn_matches_antisymmetrized_sum(seed in any::<u64>(), m in 2usize..5, p in 0usize..3, q in 0usize..3, r in 0usize..3, s in 0usize..2) {
        let mut rng = random::rng(seed);
        let w = random::form(&mut rng, p, q, m);
        let e = random::form(&mut rng, r, s, m);
        prop_assert_eq!(w.kn(&e).unwrap(), kn_bruteforce(&w, &e));
    }

    #[test]
    fn contraction_matches_index_sum(seed in any::<u64>(), m in 2usize..6, p in 0usize..4, q in 0usize..4) {
        let mut rng = random::rng(seed);
        let (g, a) = random::spd(&mut rng, m);
        let gf = metric_form(&g).unwrap();
        let ginv = metric_inverse(&gf).unwrap();
        let w = random::form(&mut rng, p, q, m);
        let c = w.contract(&gf).unwrap();
        prop_assert_eq!(&c, &contract_bruteforce(&w, &ginv));
        prop_assert_eq!(&c, &contract_orthonormal(&w, &a).unwrap());
    }

    #[test]
    fn contraction_formula(seed in any::<u64>(), m in 2usize..5, p in 0usize..3, q in 0usize..3, k in 0usize..3, l in 0usize..3) {
        prop_assume!(k + l <= 3);
        let mut rng = random::rng(seed);
        let (g, _) = random::spd(&mut rng, m);
        let gf = metric_form(&g).unwrap();
        let ginv = metric_inverse(&gf).unwrap();
        let w = random::form(&mut rng, p, q, m);
        let lhs = gf.kn_pow(k).unwrap().kn(&w).unwrap().contract_n_inv(l, &ginv);
        let rhs = contract_power_formula(k, l, &w, &gf).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn minus_one_contraction(seed in any::<u64>(), m in 3usize..6, l in 1usize..3) {
        prop_assume!(l + 1 < m);
        let mut rng = random::rng(seed);
        let (g, _) = random::spd(&mut rng, m);
        let gf = metric_form(&g).unwrap();
        let ginv = metric_inverse(&gf).unwrap();
        let eta = random::form(&mut rng, 1, 1, m);
        let lhs = gf.kn_pow(l).unwrap().kn(&eta).unwrap().contract_n_inv(l, &ginv);
        let c = &(&factorial(m as i64 - 2) * &factorial(l as i64)) / &factorial((m - l - 1) as i64);
        let tr = eta.contract_inv(&ginv).components()[0].clone();
        let rhs = eta.scale(&Q::int((m - l - 1) as i64)).add(&gf.scale(&(&tr * &Q::int(l as i64)))).unwrap().scale(&c);
        prop_assert_eq!(lhs, rhs);

        let w = random::curvature_form(&mut rng, m);
        let lhs = gf.kn_pow(l - 1).unwrap().kn(&w).unwrap().contract_n_inv(l, &ginv);
        let c = &(&factorial(m as i64 - 3) * &factorial(l as i64)) / &factorial((m - l - 1) as i64);
        let c1 = w.contract_inv(&ginv);
        let c2 = c1.contract_inv(&ginv).components()[0].clone();
        let half = &Q::new(l as i64 - 1, 2) * &c2;
        let rhs = c1.scale(&Q::int((m - l - 1) as i64)).add(&gf.scale(&half)).unwrap().scale(&c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn full_contraction(seed in any::<u64>(), m in 2usize..6, l in 2usize..4) {
        prop_assume!(l + 1 <= m);
        let mut rng = random::rng(seed);
        let (g, _) = random::spd(&mut rng, m);
        let gf = metric_form(&g).unwrap();
        let ginv = metric_inverse(&gf).unwrap();
        let tau = random::symmetric_form(&mut rng, l, m);
        let eta = random::form(&mut rng, 1, 1, m);
        let lhs = tau.kn(&eta).unwrap().contract_n_inv(l + 1, &ginv).components()[0].clone();
        let a = Q::int(-((l as i64 + 1) * (l as i64 - 1)));
        let b = Q::new((l as i64 + 1) * l as i64, 2);
        let t1 = &tau.contract_n_inv(l, &ginv).components()[0] * &eta.contract_inv(&ginv).components()[0];
        let t2 = tau.contract_n_inv(l - 1, &ginv).kn(&eta).unwrap().contract_n_inv(2, &ginv).components()[0].clone();
        prop_assert_eq!(lhs, &(&a * &t1) + &(&b * &t2));
    }

    #[test]
    fn kn_associative_and_commutative_on_symmetric(seed in any::<u64>(), m in 2usize..5) {
        let mut rng = random::rng(seed);
        let a = random::symmetric_form(&mut rng, 1, m);
        let b = random::symmetric_form(&mut rng, 1, m);
        let c = random::symmetric_form(&mut rng, 1, m);
        let ab = a.kn(&b).unwrap();
        prop_assert_eq!(&ab, &b.kn(&a).unwrap());
        prop_assert!(ab.is_symmetric());
        prop_assert_eq!(ab.kn(&c).unwrap(), a.kn(&b.kn(&c).unwrap()).unwrap());
    }
}

#[test]
fn formula_examples_k1_l1() {
    let m = 3;
    let g = lovelock_core::doubleform::identity_metric(m);
    let mut rng = random::rng(7);
    let w = random::form(&mut rng, 1, 1, m);
    let ginv = metric_inverse(&g).unwrap();
    let brute = contract_bruteforce(&kn_bruteforce(&g, &w), &ginv);
    let tr = w.contract_inv(&ginv).components()[0].clone();
    let want = w.scale(&Q::int(m as i64 - 2)).add(&g.scale(&tr)).unwrap();
    assert_eq!(brute, want);
    assert_eq!(contract_power_formula(1, 1, &w, &g).unwrap(), want);
    assert_eq!(contract_power_formula(1, 1, &g, &g).unwrap(), g.scale(&Q::int(2 * m as i64 - 2)));
}

#[test]
fn symmetric_flag() {
    let mut rng = random::rng(3);
    assert!(random::symmetric_form(&mut rng, 2, 4).is_symmetric());
    let mut f = DoubleForm::zeros(1, 1, 2, Q::ZERO);
    f.set(&[0], &[1], Q::ONE);
    assert!(!f.is_symmetric());
    assert!(!DoubleForm::zeros(1, 2, 3, Q::ZERO).is_symmetric());
}
