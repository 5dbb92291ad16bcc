//! Acceptance suite: one PASS/FAIL line per criterion. Tolerances and time
//! budgets are fixed below. The process fails if a criterion fails that is
//! not listed in `KNOWN_UNATTAINABLE`, or if a listed one starts passing.

use std::process::Command as Proc;
use std::time::{Duration, Instant};

use lovelock_cli::run::{green_check, LOG_FIT_AGREEMENT};
use lovelock_cli::spec::GreenOptions;
use lovelock_core::curvature::gauge::trace;
use lovelock_core::curvature::linearize::ModifiedLovelock;
use lovelock_core::curvature::{
    bianchi, form_matrix, laplace_type_formula, limsec_check, linearize, linearize_exact, lovelock_tensor,
    modified_lovelock, ricci_2q,
};
use lovelock_core::doubleform::oracle::{contract_bruteforce, kn_bruteforce};
use lovelock_core::doubleform::{contract_power_formula, metric_form, metric_inverse, DoubleForm};
use lovelock_core::fg_expansion::{
    einstein_series, fg_solve, obstruction_leading_check, obstruction_tensor, schouten, BoundaryData, FgOptions,
};
use lovelock_core::indicial::{indicial_spectrum, Surd};
use lovelock_core::jets::{Chart, MetricJet};
use lovelock_core::models::{self, exp_jet};
use lovelock_core::yamabe::{measure_linear_factor, yamabe_conformal_check, yamabe_solve, YamabeProblem};
use lovelock_core::{random, CouplingVector, Geometry, Q, Ring, ScalarJet};

const BUDGET_HYPERBOLIC: Duration = Duration::from_secs(60);
const BUDGET_CONTRACTIONS: Duration = Duration::from_secs(30);
const BUDGET_OBSTRUCTION_LEADING: Duration = Duration::from_secs(600);
const LEADING_MAX_RELATIVE: f64 = 1e-4;
const GREEN_MAX_RESIDUAL: f64 = 1e-6;
const GREEN_POINTS: usize = 10_000;

/// Criteria whose statement cannot be met; each is still evaluated.
const KNOWN_UNATTAINABLE: &[u32] = &[10];

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn random_bd(seed: u64, n: usize, active: usize, cap: u32) -> BoundaryData {
    let mut r = random::rng(seed);
    BoundaryData::new(n, active, cap, random::boundary_metric(&mut r, n, active, cap)).unwrap()
}

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

fn random_direction(seed: u64, m: usize, nv: usize, cap: u32, lo: u32, hi: u32) -> Vec<Vec<ScalarJet>> {
    let mut r = random::rng(seed);
    let mut t = vec![vec![ScalarJet::zero(nv, cap); m]; m];
    for i in 0..m {
        for j in i..m {
            let s = random::poly_jet(&mut r, nv, nv, cap, lo, hi, 3);
            t[i][j] = s.clone();
            t[j][i] = s;
        }
    }
    t
}

fn blocks_equal(a: &[Vec<ScalarJet>], b: &[Vec<ScalarJet>]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.iter().zip(y).all(|(s, t)| s.sub(t).is_zero()))
}

fn block_zero(a: &[Vec<ScalarJet>]) -> bool {
    a.iter().flatten().all(ScalarJet::is_zero_jet)
}

fn random_alpha(r: &mut random::TestRng, n: usize) -> Vec<Q> {
    random::couplings(r, n / 2)
}

fn c1_hyperbolic() -> Check {
    let t0 = Instant::now();
    let mut r = random::rng(1001);
    let mut runs = 0;
    for n in [4, 5, 6] {
        let g = models::hyperbolic(n + 1, 6, &Q::ONE).map_err(e2s)?;
        for _ in 0..5 {
            let cv = CouplingVector::unit(n, random_alpha(&mut r, n)).map_err(e2s)?;
            let f = lovelock_tensor(&g, &cv).map_err(e2s)?;
            ensure(f.is_zero(), || format!("F_α ≠ 0 at n = {n}, α = {:?}", cv.alpha))?;
            runs += 1;
        }
    }
    let dt = t0.elapsed();
    ensure(dt < BUDGET_HYPERBOLIC, || format!("took {dt:.1?}, budget {BUDGET_HYPERBOLIC:?}"))?;
    Ok(format!("{runs} couplings, cap 6, {dt:.1?}"))
}

fn c2_constant_curvature() -> Check {
    let mut checked = 0;
    for kappa in [Q::ONE, Q::int(2), Q::new(1, 2)] {
        for m in 3..=6 {
            let g = models::hyperbolic(m, 4, &kappa).map_err(e2s)?;
            let gf = Geometry::new(&g).map_err(e2s)?.metric_form();
            for q in 1..=2usize.min(m / 2) {
                let lam = CouplingVector::lambda_at(m - 1, q, &Q::ONE);
                let want = gf.scale(&(&kappa.pow(q as i32) * &lam));
                let got = ricci_2q(&g, q).map_err(e2s)?.value;
                ensure(got == want, || format!("m = {m}, q = {q}, κ = {kappa}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (κ, m, q) cases exact"))
}

fn contract_n(w: &DoubleForm<Q>, l: usize, ginv: &[Vec<Q>]) -> DoubleForm<Q> {
    (0..l).fold(w.clone(), |acc, _| contract_bruteforce(&acc, ginv))
}

fn kn_pow_brute(g: &DoubleForm<Q>, k: usize, m: usize) -> DoubleForm<Q> {
    let mut one = DoubleForm::zeros(0, 0, m, Q::ZERO);
    one.set(&[], &[], Q::ONE);
    (0..k).fold(one, |acc, _| kn_bruteforce(&acc, g))
}

fn fact(k: usize) -> Q {
    Q::factorial(k as u32)
}

fn c3_contractions() -> Check {
    let t0 = Instant::now();
    let mut r = random::rng(3003);
    let mut forms = 0;
    // contraction formula
    for _ in 0..40 {
        let m = 2 + (forms % 4);
        let (g, _) = random::spd(&mut r, m);
        let gf = metric_form(&g).map_err(e2s)?;
        let ginv = metric_inverse(&gf).map_err(e2s)?;
        let (p, q) = (forms % 3, (forms / 3) % 3);
        let (k, l) = ((forms / 2) % 3, (forms / 5) % 2);
        let w = random::form(&mut r, p, q, m);
        let lhs = contract_n(&kn_bruteforce(&kn_pow_brute(&gf, k, m), &w), l, &ginv);
        let rhs = contract_power_formula(k, l, &w, &gf).map_err(e2s)?;
        ensure(lhs == rhs, || format!("contraction formula, m = {m}, (p,q,k,l) = ({p},{q},{k},{l})"))?;
        forms += 1;
    }
    // contraction of g^l ∘ η and g^{l−1} ∘ ω for a curvature-type ω
    for i in 0..40 {
        let m = 3 + i % 3;
        let l = 1 + (i / 3) % 2;
        if l + 1 >= m {
            continue;
        }
        let (g, _) = random::spd(&mut r, m);
        let gf = metric_form(&g).map_err(e2s)?;
        let ginv = metric_inverse(&gf).map_err(e2s)?;
        let eta = random::form(&mut r, 1, 1, m);
        let lhs = contract_n(&kn_bruteforce(&kn_pow_brute(&gf, l, m), &eta), l, &ginv);
        let c = &(&fact(m - 2) * &fact(l)) / &fact(m - l - 1);
        let tr = contract_bruteforce(&eta, &ginv).components()[0].clone();
        let rhs = eta.scale(&Q::int((m - l - 1) as i64)).add(&gf.scale(&(&tr * &Q::int(l as i64)))).unwrap().scale(&c);
        ensure(lhs == rhs, || format!("−1 contraction on η, m = {m}, l = {l}"))?;
        let w = random::curvature_form(&mut r, m);
        let lhs = contract_n(&kn_bruteforce(&kn_pow_brute(&gf, l - 1, m), &w), l, &ginv);
        let c = &(&fact(m - 3) * &fact(l)) / &fact(m - l - 1);
        let c1 = contract_bruteforce(&w, &ginv);
        let c2 = contract_bruteforce(&c1, &ginv).components()[0].clone();
        let half = &Q::new(l as i64 - 1, 2) * &c2;
        let rhs = c1.scale(&Q::int((m - l - 1) as i64)).add(&gf.scale(&half)).unwrap().scale(&c);
        ensure(lhs == rhs, || format!("−1 contraction on ω, m = {m}, l = {l}"))?;
        forms += 2;
    }
    // full contraction of τ ∘ η
    for i in 0..40 {
        let m = 3 + i % 3;
        let l = 2 + (i / 3) % 2;
        if l + 1 > m {
            continue;
        }
        let (g, _) = random::spd(&mut r, m);
        let gf = metric_form(&g).map_err(e2s)?;
        let ginv = metric_inverse(&gf).map_err(e2s)?;
        let tau = random::symmetric_form(&mut r, l, m);
        let eta = random::form(&mut r, 1, 1, m);
        let lhs = contract_n(&kn_bruteforce(&tau, &eta), l + 1, &ginv).components()[0].clone();
        let a = Q::int(-((l as i64 + 1) * (l as i64 - 1)));
        let b = Q::new((l as i64 + 1) * l as i64, 2);
        let t1 = &contract_n(&tau, l, &ginv).components()[0] * &contract_bruteforce(&eta, &ginv).components()[0];
        let t2 = contract_n(&kn_bruteforce(&contract_n(&tau, l - 1, &ginv), &eta), 2, &ginv).components()[0].clone();
        ensure(lhs == &(&a * &t1) + &(&b * &t2), || format!("full contraction, m = {m}, l = {l}"))?;
        forms += 2;
    }
    let dt = t0.elapsed();
    ensure(forms >= 100, || format!("only {forms} random forms"))?;
    ensure(dt < BUDGET_CONTRACTIONS, || format!("took {dt:.1?}, budget {BUDGET_CONTRACTIONS:?}"))?;
    Ok(format!("{forms} random forms against brute-force sums, {dt:.1?}"))
}

fn c4_bianchi_gauge() -> Check {
    let mut r = random::rng(4004);
    for k in 0..20u64 {
        let m = 3 + (k as usize % 3);
        let g = random_metric(4100 + k, m, 2, 3);
        let geo = Geometry::new(&g).map_err(e2s)?;
        ensure(bianchi(&geo, &g.g).map_err(e2s)?.iter().all(Ring::is_zero), || format!("B_g(g) ≠ 0 on metric {k}"))?;
        let cv = CouplingVector::unit(m - 1, random_alpha(&mut r, m - 1)).map_err(e2s)?;
        let qg = modified_lovelock(&g, &g, &cv).map_err(e2s)?;
        let f = form_matrix(&lovelock_tensor(&g, &cv).map_err(e2s)?);
        ensure(blocks_equal(&qg, &f), || format!("Q_α(g, g) ≠ F_α(g) on metric {k}"))?;
    }
    Ok("20 random metric jets".into())
}

fn c5_linearization() -> Check {
    let mut r = random::rng(5005);
    let cap = 4;
    let mut runs = 0;
    for n in [3, 4] {
        let g0 = models::hyperbolic(n + 1, cap, &Q::ONE).map_err(e2s)?;
        let geo = Geometry::new(&g0).map_err(e2s)?;
        for k in 0..2u64 {
            let cv = CouplingVector::unit(n, random_alpha(&mut r, n)).map_err(e2s)?;
            let map = ModifiedLovelock { cv: cv.clone(), t: g0.clone() };
            let generic = random_direction(5100 + k + 10 * n as u64, n + 1, 2, cap, 0, 3);
            let exact = linearize_exact(&map, &g0, &generic).map_err(e2s)?;
            let want = laplace_type_formula(&geo, &generic, &cv.a1()).map_err(e2s)?;
            ensure(blocks_equal(&exact, &want), || format!("dual-number route, n = {n}, α = {:?}", cv.alpha))?;
            let high = random_direction(5200 + k + 10 * n as u64, n + 1, 2, cap, cap / 2 + 1, cap);
            let rich = linearize(&map, &g0, &high, &[Q::new(1, 8), Q::new(1, 16)]).map_err(e2s)?;
            let want = laplace_type_formula(&geo, &high, &cv.a1()).map_err(e2s)?;
            ensure(blocks_equal(&rich, &want), || format!("Richardson route, n = {n}, α = {:?}", cv.alpha))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} couplings, exact dual-number and Richardson routes, remainder 0 to cap {cap}"))
}

fn c6_fg_parity() -> Check {
    let mut r = random::rng(6006);
    let mut notes = Vec::new();
    for n in [4, 5] {
        for k in 0..2u64 {
            let bd = random_bd(6100 + k + 10 * n as u64, n, 1, n as u32 + 1);
            let cv = CouplingVector::unit(n, vec![Q::ONE, random::small_q(&mut r, 1) * Q::new(1, 20)]).map_err(e2s)?;
            let t = fg_solve(&bd, &cv, n, &FgOptions::default()).map_err(e2s)?;
            for odd in (1..n).step_by(2) {
                ensure(block_zero(&t.h[odd]), || format!("h_{odd} ≠ 0 at n = {n}"))?;
            }
            if n == 5 {
                let geo = Geometry::new(&bd.boundary_metric()).map_err(e2s)?;
                ensure(trace(&geo, &t.h[5]).is_zero_jet(), || "tr h₅ ≠ 0".into())?;
            }
            ensure(t.residual.off_diagonal.at_least(n as i32 - 1), || {
                format!("off-diagonal order {} < n − 1 at n = {n}", t.residual.off_diagonal)
            })?;
            notes.push(format!("n={n}: off-diag {}", t.residual.off_diagonal));
        }
    }
    Ok(notes.join("; "))
}

fn c7_einstein_oracle() -> Check {
    let cases: Vec<(u64, usize, usize, u32)> =
        (0..6).map(|k| (7100 + k, 4, 2, 4)).chain((0..4).map(|k| (7200 + k, 5, 1, 4))).collect();
    for &(seed, n, active, cap) in &cases {
        let bd = random_bd(seed, n, active, cap);
        let cv = CouplingVector::pure(n, 1).map_err(e2s)?;
        let order = n - 2;
        let t = fg_solve(&bd, &cv, order, &FgOptions::default()).map_err(e2s)?;
        let oracle = einstein_series(&bd, order).map_err(e2s)?;
        for k in 0..=order {
            ensure(blocks_equal(&t.h[k], &oracle[k]), || format!("h_{k} differs, seed {seed}, n = {n}"))?;
        }
        let p = schouten(&bd.boundary_metric()).map_err(e2s)?;
        let minus_p: Vec<Vec<ScalarJet>> = p.iter().map(|r| r.iter().map(|s| s.neg()).collect()).collect();
        ensure(blocks_equal(&t.h[2], &minus_p), || format!("h₂ ≠ −P, seed {seed}"))?;
    }
    Ok(format!("{} random boundary jets, n ∈ {{4, 5}}", cases.len()))
}

fn c8_obstruction_leading() -> Check {
    let t0 = Instant::now();
    let n = 4;
    let c4 = CouplingVector::c_n(n).expect("n = 4");
    ensure(c4 == Q::int(2), || format!("c₄ = {c4}"))?;
    let mut r = random::rng(8008);
    let phi = random::transverse_symmetric(&mut r, n, 3, 6, 2, 4, 2);
    let eps = [Q::new(1, 100), Q::new(1, 200)];
    let mut worst: f64 = 0.0;
    for alpha in [vec![Q::ONE], vec![Q::ONE, Q::ONE], vec![Q::ONE, Q::int(-1)]] {
        let cv = CouplingVector::unit(n, alpha).map_err(e2s)?;
        let rep = obstruction_leading_check(&cv, n, 2, 6, &phi, &eps).map_err(e2s)?;
        ensure(rep.predicted.iter().flatten().any(|v| !v.is_zero()), || "prediction vanishes identically".into())?;
        ensure(rep.max_relative <= LEADING_MAX_RELATIVE, || {
            format!("α = {:?}: relative discrepancy {:e}", cv.alpha, rep.max_relative)
        })?;
        worst = worst.max(rep.max_relative);
    }
    let dt = t0.elapsed();
    ensure(dt < BUDGET_OBSTRUCTION_LEADING, || format!("took {dt:.1?}"))?;
    Ok(format!("max relative discrepancy {worst:e} (≤ {LEADING_MAX_RELATIVE:e}), one Richardson step, {dt:.1?}"))
}

fn c9_obstruction_algebra() -> Check {
    let mut runs = 0;
    for (k, alpha) in [vec![Q::ONE], vec![Q::ONE, Q::ONE], vec![Q::ONE, Q::int(-1)]].into_iter().enumerate() {
        let cv = CouplingVector::unit(4, alpha).map_err(e2s)?;
        let o = obstruction_tensor(&random_bd(9100 + k as u64, 4, 2, 6), &cv).map_err(e2s)?;
        ensure(o.trace_free && o.divergence_free, || format!("structure fails for α = {:?}", cv.alpha))?;
        ensure(!o.is_zero(), || "obstruction of random data vanished".into())?;
        runs += 1;
    }
    let cv = CouplingVector::pure(4, 1).map_err(e2s)?;
    let flat = obstruction_tensor(&BoundaryData::flat(4, 2, 6), &cv).map_err(e2s)?;
    ensure(flat.is_zero() && flat.trace_free && flat.divergence_free, || "flat data".into())?;
    let mut r = random::rng(9200);
    let phi = random::transverse_poly(&mut r, 3, 6, 1, 3, 2).scale_q(&Q::new(1, 3));
    let e = exp_jet(&phi.scale_q(&Q::int(2))).map_err(e2s)?;
    let h = (0..4).map(|i| (0..4).map(|j| if i == j { e.clone() } else { e.zero_like() }).collect()).collect();
    let cf = obstruction_tensor(&BoundaryData::new(4, 2, 6, h).map_err(e2s)?, &cv).map_err(e2s)?;
    ensure(cf.is_zero() && cf.trace_free && cf.divergence_free, || "conformally flat data".into())?;
    Ok(format!("{} runs trace- and divergence-free; flat and conformally flat give 𝒪 = 0", runs + 2))
}

fn c10_yamabe() -> Check {
    let mut failures = Vec::new();
    // flat product collar
    for n in [3, 4] {
        let p = YamabeProblem::new(BoundaryData::flat(n, 1, n as u32 + 3), vec![Q::ONE]).map_err(e2s)?;
        let e = yamabe_solve(&p, n + 2).map_err(e2s)?;
        let x = p.bd.x();
        ensure(e.u_plain().sub(&x).is_zero_jet(), || format!("flat collar: u ≠ x at n = {n}"))?;
        ensure(e.log.as_ref().is_some_and(ScalarJet::is_zero_jet), || format!("flat collar: ℒ ≠ 0 at n = {n}"))?;
    }
    // linear factors on random inputs
    let mut r = random::rng(10_010);
    let mut measured = 0;
    let mut matched = 0;
    let mut twice = 0;
    let inputs: Vec<(u64, usize)> = vec![(10_100, 3), (10_101, 3), (10_102, 4), (10_103, 4), (10_104, 4)];
    for (seed, n) in inputs {
        let beta = if n >= 4 { vec![Q::ONE, random::small_q(&mut r, 2) * Q::new(1, 50)] } else { vec![Q::ONE] };
        let p = YamabeProblem::new(random_bd(seed, n, 1, n as u32 + 2), beta).map_err(e2s)?;
        for s in 0..=n {
            let f = measure_linear_factor(&p, s).map_err(e2s)?;
            measured += 1;
            if f.matches_printed() {
                matched += 1;
            } else if f.derivative == &f.printed * &Q::int(2) {
                twice += 1;
            }
        }
    }
    if matched != measured {
        failures.push(format!(
            "measured factor equals n(s−(n+1))B̃ in {matched}/{measured} cases; it equals 2n(s−(n+1))B̃ in {twice}/{measured}"
        ));
    }
    // conformal rescaling
    let p = YamabeProblem::new(random_bd(10_200, 3, 1, 6), vec![Q::ONE]).map_err(e2s)?;
    let c = yamabe_conformal_check(&p, &Q::int(2)).map_err(e2s)?;
    ensure(!c.log.is_zero_jet(), || "ℒ vanished at n = 3".into())?;
    ensure(c.holds && c.expected_ratio == Q::new(1, 16), || "ℒ does not scale by Ω^{−n−1}".into())?;
    let p4 = YamabeProblem::new(random_bd(10_201, 4, 1, 7), vec![Q::ONE, Q::new(1, 20)]).map_err(e2s)?;
    let c4 = yamabe_conformal_check(&p4, &Q::int(2)).map_err(e2s)?;
    ensure(c4.holds, || "ℒ scaling at n = 4".into())?;
    let ok = "flat collar exact; Ω = 2 scales ℒ by 2^{−n−1} (n = 3, 4)";
    if failures.is_empty() {
        Ok(format!("{ok}; all {measured} linear factors match"))
    } else {
        Err(format!("{}; {ok}", failures.join("; ")))
    }
}

fn c11_indicial() -> Check {
    let s = indicial_spectrum(4, &Q::int(-2));
    let pairs: Vec<Option<(Q, Q)>> = s.roots_sym2.iter().map(|p| p.as_rationals()).collect();
    ensure(pairs.contains(&Some((Q::int(2), Q::int(-2)))), || "(2, −2) missing".into())?;
    ensure(pairs.contains(&Some((Q::int(3), Q::int(-3)))), || "(3, −3) missing".into())?;
    let root = Surd::new(Q::ZERO, Q::int(2), &Q::int(3));
    let neg = Surd::new(Q::ZERO, Q::int(-2), &Q::int(3));
    ensure(s.roots_sym2.iter().any(|p| p.plus == root && p.minus == neg), || "±2√3 missing".into())?;
    let am = s.roots_functions.minus.to_f64().expect("real");
    let ap = s.roots_functions.plus.to_f64().expect("real");
    let opts = GreenOptions { points: GREEN_POINTS, ..GreenOptions::default() };
    let g = green_check(&opts, am, ap).map_err(e2s)?;
    ensure(g.residual_infinity <= GREEN_MAX_RESIDUAL && g.residual_zero <= GREEN_MAX_RESIDUAL, || {
        format!("right-inverse residuals {:e}, {:e}", g.residual_infinity, g.residual_zero)
    })?;
    ensure(g.log_fine != 0.0 && g.log_stable(), || format!("log fits {} vs {}", g.log_coarse, g.log_fine))?;
    Ok(format!(
        "roots exact; residuals G∞ {:.1e}, G₀ {:.1e} on {GREEN_POINTS} points; log coefficient {:.6} vs {:.6} (agree to {LOG_FIT_AGREEMENT:e})",
        g.residual_infinity, g.residual_zero, g.log_coarse, g.log_fine
    ))
}

fn cli_status(args: &[&str]) -> i32 {
    Proc::new(env!("CARGO_BIN_EXE_lovelock")).args(args).output().expect("binary runs").status.code().unwrap_or(-1)
}

fn c12_limsec() -> Check {
    for n in [4, 5, 6] {
        for q in 1..=n / 2 {
            for kappa in [Q::new(1, 2), Q::ONE, Q::int(2), Q::int(3)] {
                let mut a = vec![Q::ZERO; q];
                a[q - 1] = Q::ONE;
                let cv = CouplingVector::new(n, a, kappa.clone()).map_err(e2s)?;
                let member = limsec_check(&cv).member;
                ensure(member == kappa.is_one(), || format!("pure α = e_{q}, n = {n}, κ = {kappa}: member = {member}"))?;
            }
        }
        let alt: Vec<Q> = (0..n / 2).map(|i| if i % 2 == 0 { Q::ONE } else { Q::int(-1) }).collect();
        let cv = CouplingVector::unit(n, alt).map_err(e2s)?;
        ensure(limsec_check(&cv).member, || format!("alternating α rejected at n = {n}"))?;
    }
    let dead = CouplingVector::unit(4, vec![Q::ONE, Q::new(1, 12)]).map_err(e2s)?;
    ensure(dead.a1().is_zero(), || "test coupling has A₁ ≠ 0".into())?;
    let codes = [
        cli_status(&["limsec", "--n", "4", "--alpha", "1,1/12", "--gate"]),
        cli_status(&["fg-expand", "--n", "4", "--alpha", "1,1/12"]),
        cli_status(&["obstruction", "--n", "4", "--alpha", "1,1/12"]),
    ];
    ensure(codes.iter().all(|&c| c == 3), || format!("exit codes {codes:?} for A₁ = 0"))?;
    Ok("pure α only at κ = 1; alternating α at κ = 1; A₁ = 0 exits 3".into())
}

fn main() {
    let criteria: Vec<(u32, &'static str, fn() -> Check)> = vec![
        (1, "hyperbolic exactness", c1_hyperbolic),
        (2, "constant curvature", c2_constant_curvature),
        (3, "contraction identities", c3_contractions),
        (4, "Bianchi and gauge", c4_bianchi_gauge),
        (5, "linearization", c5_linearization),
        (6, "FG parity and structure", c6_fg_parity),
        (7, "Einstein oracle", c7_einstein_oracle),
        (8, "obstruction leading order", c8_obstruction_leading),
        (9, "obstruction algebra", c9_obstruction_algebra),
        (10, "Yamabe", c10_yamabe),
        (11, "indicial", c11_indicial),
        (12, "LimSec gate", c12_limsec),
    ];
    let outcomes: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(id, name, f)| {
                let h = std::thread::Builder::new().stack_size(64 << 20).spawn_scoped(s, f).expect("thread starts");
                (id, name, h)
            })
            .collect();
        handles
            .into_iter()
            .map(|(id, name, h)| {
                let r = h.join().unwrap_or_else(|_| Err("panicked".into()));
                let (pass, detail) = match r {
                    Ok(d) => (true, d),
                    Err(d) => (false, d),
                };
                Outcome { id, name, pass, detail }
            })
            .collect()
    });
    let mut unexpected = Vec::new();
    for o in &outcomes {
        println!("{} {:>2} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.id, o.name, o.detail);
        let known = KNOWN_UNATTAINABLE.contains(&o.id);
        if o.pass == known {
            unexpected.push(o.id);
        }
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("{passed}/{} criteria pass; known unattainable: {KNOWN_UNATTAINABLE:?}", outcomes.len());
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
