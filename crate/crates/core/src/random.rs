//! Seeded generators for random exact test inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::doubleform::DoubleForm;
use crate::jets::ScalarJet;
use crate::ring::Ring;
use crate::scalar::Q;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational `a/d` with `|a| ≤ bound` and `d ∈ {1, 2, 3}`.
pub fn small_q(r: &mut TestRng, bound: i64) -> Q {
    Q::new(r.gen_range(-bound..=bound), r.gen_range(1..=3))
}

/// Random `(p, q)` form with small rational components.
pub fn form(r: &mut TestRng, p: usize, q: usize, m: usize) -> DoubleForm<Q> {
    let zero = DoubleForm::zeros(p, q, m, Q::ZERO);
    let idx: Vec<(Vec<usize>, Vec<usize>)> = zero.iter().map(|(i, j, _)| (i, j)).collect();
    let mut f = zero;
    for (i, j) in idx {
        f.set(&i, &j, small_q(r, 4));
    }
    f
}

/// Random form fixed by swapping the two blocks.
pub fn symmetric_form(r: &mut TestRng, p: usize, m: usize) -> DoubleForm<Q> {
    let mut f = DoubleForm::zeros(p, p, m, Q::ZERO);
    let idx: Vec<(Vec<usize>, Vec<usize>)> = f.iter().map(|(i, j, _)| (i, j)).collect();
    for (i, j) in idx {
        if i <= j {
            let v = small_q(r, 4);
            f.set(&i, &j, v.clone());
            f.set(&j, &i, v);
        }
    }
    f
}

/// Random algebraic curvature tensor: a sum of Kulkarni–Nomizu products of
/// symmetric `(1, 1)` forms, so both Bianchi-type symmetries hold.
pub fn curvature_form(r: &mut TestRng, m: usize) -> DoubleForm<Q> {
    let mut out = DoubleForm::zeros(2, 2, m, Q::ZERO);
    for _ in 0..3 {
        let a = symmetric_form(r, 1, m);
        let b = symmetric_form(r, 1, m);
        out = out.add(&a.kn(&b).expect("same m")).expect("same shape");
    }
    out
}

/// Random symmetric positive definite matrix `Aᵀ A + I` with the factor `A`.
pub fn spd(r: &mut TestRng, m: usize) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    loop {
        let a: Vec<Vec<Q>> = (0..m).map(|_| (0..m).map(|_| small_q(r, 2)).collect()).collect();
        let g: Vec<Vec<Q>> = (0..m)
            .map(|i| (0..m).map(|j| (0..m).map(|k| &a[k][i] * &a[k][j]).sum()).collect())
            .collect();
        if !crate::jets::determinant(&a).is_zero() {
            return (g, a);
        }
    }
}

/// Random polynomial jet with terms of degree `lo..=hi` in the first
/// `active` of `nvars` variables.
pub fn poly_jet(r: &mut TestRng, nvars: usize, active: usize, cap: u32, lo: u32, hi: u32, bound: i64) -> ScalarJet {
    let z = ScalarJet::zero(nvars, cap);
    let lay = z.layout().clone();
    let mut terms = Vec::new();
    for i in 0..lay.len() {
        let e = lay.exponents(i);
        let d = lay.degree(i);
        if d < lo || d > hi || e[active..].iter().any(|&x| x > 0) {
            continue;
        }
        if r.gen_bool(0.6) {
            terms.push((e.to_vec(), small_q(r, bound)));
        }
    }
    ScalarJet::from_terms(nvars, cap, &terms).expect("valid exponents")
}

/// Random coupling vector `α_1..α_{qmax}` with `α_1 ≠ 0`.
pub fn couplings(r: &mut TestRng, qmax: usize) -> Vec<Q> {
    let mut a: Vec<Q> = (0..qmax).map(|_| small_q(r, 3)).collect();
    if a[0].is_zero() {
        a[0] = Q::ONE;
    }
    a
}

/// Random polynomial in variables `1..nvars` (variable 0 absent).
pub fn transverse_poly(r: &mut TestRng, nvars: usize, cap: u32, lo: u32, hi: u32, bound: i64) -> ScalarJet {
    let z = ScalarJet::zero(nvars, cap);
    let lay = z.layout().clone();
    let mut terms = Vec::new();
    for i in 0..lay.len() {
        let e = lay.exponents(i);
        let d = lay.degree(i);
        if d < lo || d > hi || e[0] > 0 {
            continue;
        }
        if r.gen_bool(0.6) {
            terms.push((e.to_vec(), small_q(r, bound)));
        }
    }
    ScalarJet::from_terms(nvars, cap, &terms).expect("valid exponents")
}

/// Random symmetric matrix of [`transverse_poly`] entries.
pub fn transverse_symmetric(r: &mut TestRng, n: usize, nvars: usize, cap: u32, lo: u32, hi: u32, bound: i64) -> Vec<Vec<ScalarJet>> {
    let mut h = vec![vec![ScalarJet::zero(nvars, cap); n]; n];
    for i in 0..n {
        for j in i..n {
            let s = transverse_poly(r, nvars, cap, lo, hi, bound);
            h[i][j] = s.clone();
            h[j][i] = s;
        }
    }
    h
}

/// `δ + (terms of degree 1..=2)` in the transverse variables, scaled small.
pub fn boundary_metric(r: &mut TestRng, n: usize, active: usize, cap: u32) -> Vec<Vec<ScalarJet>> {
    let mut h = transverse_symmetric(r, n, active + 1, cap, 1, 2, 2);
    for (i, row) in h.iter_mut().enumerate() {
        for (j, s) in row.iter_mut().enumerate() {
            *s = s.scale_q(&Q::new(1, 4));
            if i == j {
                *s = s.add(&s.one_like());
            }
        }
    }
    h
}
