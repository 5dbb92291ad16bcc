use lovelock_core::curvature::kronecker::kronecker_sum;
use lovelock_core::curvature::kronecker_normalization;
use lovelock_core::curvature::gauge::trace;
use lovelock_core::curvature::{delta, einstein_2q, form_matrix, power_contractions, scalar_2q};
use lovelock_core::doubleform::{identity_metric, metric_inverse};
use lovelock_core::fg_expansion::{einstein_series, fg_solve, obstruction_tensor, BoundaryData, FgOptions, ResidualOrder};
use lovelock_core::indicial::{roots_functions, roots_sym2, IndicialPolynomial};
use lovelock_core::jets::{Chart, MetricJet};
use lovelock_core::yamabe::{yamabe_solve, YamabeProblem};
use lovelock_core::{random, CouplingVector, Geometry, Q, Ring, ScalarJet};
use proptest::prelude::*;

fn random_metric(seed: u64, m: usize, active: usize, cap: u32) -> MetricJet<ScalarJet> {
    let mut r = random::rng(seed);
    let mut g = vec![vec![ScalarJet::zero(active, cap); m]; m];
    for i in 0..m {
        for j in i..m {
            let mut s = random::poly_jet(&mut r, active, active, cap, 1, 2, 2).scale_q(&Q::new(1, 3));
            if i == j {
                s = s.add(&s.one_like());
            }
            g[i][j] = s.clone();
            g[j][i] = s;
        }
    }
    MetricJet::new(Chart::leading(m, active), g, ScalarJet::at_origin).unwrap()
}

fn boundary(seed: u64, n: usize, active: usize, cap: u32) -> BoundaryData {
    let mut r = random::rng(seed);
    BoundaryData::new(n, active, cap, random::boundary_metric(&mut r, n, active, cap)).unwrap()
}

fn block_zero(b: &[Vec<ScalarJet>]) -> bool {
    b.iter().flatten().all(ScalarJet::is_zero_jet)
}

fn order_value(o: ResidualOrder) -> i32 {
    match o {
        ResidualOrder::Exact => i32::MAX,
        ResidualOrder::AtLeast(k) | ResidualOrder::Exactly(k) => k,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn kronecker_route_is_a_fixed_multiple_of_the_lovelock_tensor(seed in any::<u64>(), m in 3usize..6, qq in 1usize..3) {
        prop_assume!(2 * qq <= m);
        let mut r = random::rng(seed);
        let g = identity_metric(m);
        let ginv = metric_inverse(&g).unwrap();
        let rm = random::curvature_form(&mut r, m);
        let k = kronecker_sum(&rm, qq);
        let (_, ric, s) = power_contractions(&rm, &ginv, &[qq]).unwrap().remove(0);
        let e = ric.sub(&g.mul_scalar(&s).scale(&Q::new(1, 2 * qq as i64))).unwrap();
        let nq = kronecker_normalization(qq);
        for i in 0..m {
            for j in 0..m {
                prop_assert_eq!(&k[i][j], &(&nq * &e.get(&[i], &[j])));
            }
        }
    }

    #[test]
    fn trace_of_einstein_tensor(seed in any::<u64>(), qq in 1usize..3) {
        let m = 5;
        let g = random_metric(seed, m, 2, 3);
        let geo = Geometry::new(&g).unwrap();
        let e = form_matrix(&einstein_2q(&g, qq).unwrap().value);
        let s = scalar_2q(&g, qq).unwrap().value;
        let want = s.scale(&(&Q::ONE - &Q::new(m as i64, 2 * qq as i64)));
        prop_assert!(trace(&geo, &e).sub(&want).is_zero());
    }

    #[test]
    fn einstein_tensor_is_divergence_free(seed in any::<u64>()) {
        let g = random_metric(seed, 4, 2, 3);
        let geo = Geometry::new(&g).unwrap();
        let e = form_matrix(&einstein_2q(&g, 1).unwrap().value);
        for v in delta(&geo, &e).unwrap() {
            prop_assert!(v.is_zero());
        }
    }

    #[test]
    fn indicial_pairs_are_symmetric(n in 1usize..12, num in -40i64..40, den in 1i64..5) {
        let c = Q::new(num, den);
        prop_assert_eq!(roots_functions(n, &c).center(), Q::new(n as i64, 2));
        for (i, p) in roots_sym2(n, &c).iter().enumerate() {
            prop_assert_eq!(p.center(), Q::new(n as i64 - 4, 2));
            let poly = IndicialPolynomial::sym2(n, i, &c);
            prop_assert_eq!(&poly.roots(), p);
            let mu = Q::new(num + 3, den + 1);
            let shift = &poly.eval(&mu) - &poly.eval(&Q::ZERO);
            prop_assert_eq!(shift, &mu * &(&(&Q::int(n as i64) - &mu) - &Q::int(4)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn fg_parity_and_monotone_residual(seed in any::<u64>(), n in 3usize..6, a2 in -3i64..4) {
        let mut alpha = vec![Q::ONE, Q::new(a2, 60)];
        alpha.truncate(n / 2);
        let cv = CouplingVector::unit(n, alpha).unwrap();
        let bd = boundary(seed, n, 1, n as u32 + 1);
        let mut last = i32::MIN;
        for order in 1..n {
            let t = fg_solve(&bd, &cv, order, &FgOptions::default()).unwrap();
            for k in (1..=order).step_by(2) {
                prop_assert!(block_zero(&t.h[k]), "h_{} at n = {}", k, n);
            }
            let now = order_value(t.residual.on_diagonal);
            prop_assert!(now >= order as i32 - 1);
            prop_assert!(now >= last);
            if order % 2 == 0 {
                prop_assert!(now > last);
            }
            last = now;
        }
    }

    #[test]
    fn einstein_specialization_matches_oracle(seed in any::<u64>(), n in 3usize..6) {
        let cv = CouplingVector::pure(n, 1).unwrap();
        let bd = boundary(seed, n, 2, 3);
        let t = fg_solve(&bd, &cv, 2.min(n - 1), &FgOptions::default()).unwrap();
        let oracle = einstein_series(&bd, 2.min(n - 1)).unwrap();
        for (a, b) in t.h.iter().zip(&oracle) {
            for (ra, rb) in a.iter().zip(b) {
                for (x, y) in ra.iter().zip(rb) {
                    prop_assert!(x.sub(y).is_zero_jet());
                }
            }
        }
    }

    #[test]
    fn fg_scaling_covariance(seed in any::<u64>(), cn in 1i64..4, cd in 1i64..4) {
        let n = 4;
        let c = Q::new(cn, cd);
        let cv = CouplingVector::unit(n, vec![Q::ONE, Q::new(1, 30)]).unwrap();
        let bd = boundary(seed, n, 1, 3);
        let t = fg_solve(&bd, &cv, 2, &FgOptions::default()).unwrap();
        let ts = fg_solve(&bd.scaled(&(&c * &c)), &cv, 2, &FgOptions::default()).unwrap();
        for k in 0..=2 {
            let f = c.pow(2 - k as i32);
            for (ra, rb) in t.h[k].iter().zip(&ts.h[k]) {
                for (x, y) in ra.iter().zip(rb) {
                    prop_assert!(y.sub(&x.scale_q(&f)).is_zero_jet());
                }
            }
        }
    }

    #[test]
    fn yamabe_updates_kill_each_order(seed in any::<u64>(), b2 in -2i64..3) {
        let n = 4;
        let p = YamabeProblem::new(boundary(seed, n, 1, 5), vec![Q::ONE, Q::new(b2, 100)]).unwrap();
        let e = yamabe_solve(&p, 4).unwrap();
        prop_assert!(e.residual_order.at_least(4));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2))]

    #[test]
    fn obstruction_is_trace_free_and_divergence_free(seed in any::<u64>(), a2 in -2i64..3) {
        let cv = CouplingVector::unit(4, vec![Q::ONE, Q::new(a2, 50)]).unwrap();
        let o = obstruction_tensor(&boundary(seed, 4, 2, 6), &cv).unwrap();
        prop_assert!(o.trace_free);
        prop_assert!(o.divergence_free);
    }
}
