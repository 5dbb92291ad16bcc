//! Formal singular Yamabe-(2q) expansion `u = x + u₂x² + ⋯ + u_{n+1}x^{n+1}
//! + ℒ x^{n+2} log x` for product collars `ḡ = dx² + h(y)`, solved from the
//! residual `F̃_β(u^{−2}ḡ)`.

use serde::Serialize;

use crate::curvature::{b_tilde, Compactified, Dual};
use crate::error::{Error, Result};
use crate::fg_expansion::{lowest_x_order, BoundaryData, ResidualOrder};
use crate::jets::{MetricJet, ScalarJet, XJet};
use crate::ring::{DiffRing, Ring};
use crate::scalar::Q;


/// Background `dx² + h(y)` with scalar couplings `β`.
#[derive(Clone, Debug)]
pub struct YamabeProblem {
    pub bd: BoundaryData,
    pub beta: Vec<Q>,
    /// `|du|²_ḡ` on the boundary; 1 for a product collar.
    pub kappa: Q,
}

impl YamabeProblem {
    pub fn new(bd: BoundaryData, beta: Vec<Q>) -> Result<YamabeProblem> {
        let n = bd.n;
        if let Some(q) = beta.iter().rposition(|b| !b.is_zero()).map(|i| i + 1) {
            if 2 * q == n + 1 {
                return Err(Error::Unsupported(format!("2q = n + 1 = {} is outside the solver range", n + 1)));
            }
            if 2 * q > n {
                return Err(Error::Dimension(format!("β_{q} needs 2q ≤ n = {n}")));
            }
        }
        let p = YamabeProblem { bd, beta, kappa: Q::ONE };
        if p.b_tilde().is_zero() {
            return Err(Error::Gate(format!("B̃₁,₂(β, κ) = 0 for β = {:?}", p.beta)));
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.bd.n
    }

    pub fn b_tilde(&self) -> Q {
        b_tilde(&self.beta, &self.kappa, self.bd.n)
    }

    fn background<S: Ring>(&self, lift: impl Fn(&ScalarJet) -> S) -> MetricJet<S> {
        let n = self.bd.n;
        let zero = lift(&self.bd.zero());
        let mut g = vec![vec![zero.clone(); n + 1]; n + 1];
        g[0][0] = zero.one_like();
        for i in 0..n {
            for j in 0..n {
                g[i + 1][j + 1] = lift(&self.bd.h[i][j]);
            }
        }
        MetricJet { chart: self.bd.bulk_chart(), g }
    }

    /// `F̃_β(u^{−2} ḡ)` for a defining function given in any jet ring.
    pub fn residual<S: DiffRing>(&self, u: &S, lift: impl Fn(&ScalarJet) -> S) -> Result<S> {
        Compactified::new(&self.background(lift), u)?.scalar_combination(&self.beta)
    }
}

/// Coefficient-normalized linear factor: the `x^s` coefficient of the
/// residual responds to `u_{s+1}` by `2n(s+1)(s−n−1) B̃₁,₂`.
pub fn linear_factor(n: usize, s: usize, bt: &Q) -> Q {
    let (n, s) = (n as i64, s as i64);
    bt * &Q::int(2 * n * (s + 1) * (s - n - 1))
}

/// Response of the `x^{n+1}` coefficient to `ℒ x^{n+2} log x`, as found by
/// calibration: `2n(n+2) B̃₁,₂`.
pub fn log_factor(n: usize, bt: &Q) -> Q {
    let n = n as i64;
    bt * &Q::int(2 * n * (n + 2))
}

#[derive(Clone, Debug)]
pub struct YamabeExpansion {
    pub n: usize,
    /// `u[k]` is the coefficient of `x^k` for `k ≤ order.min(n + 1)`;
    /// `u[0] = 0`, `u[1] = 1`.
    pub u: Vec<ScalarJet>,
    /// `ℒ`, present when solved to order `n + 2`.
    pub log: Option<ScalarJet>,
    /// Calibrated response of the residual to the log term.
    pub log_factor: Option<Q>,
    pub order: usize,
    pub residual_order: ResidualOrder,
}

impl YamabeExpansion {
    /// `Σ u_k x^k` without the log term.
    pub fn u_plain(&self) -> ScalarJet {
        let mut acc = self.u[0].clone();
        for (k, c) in self.u.iter().enumerate().skip(1) {
            acc = acc.add(&c.shift(0, k as u32));
        }
        acc
    }

    pub fn u_jet(&self) -> XJet {
        let log = match &self.log {
            Some(l) => l.shift(0, self.n as u32 + 2),
            None => self.u[0].zero_like(),
        };
        XJet::new(self.u_plain(), log)
    }
}

fn series(u: &[ScalarJet]) -> ScalarJet {
    u.iter().enumerate().skip(1).fold(u[0].clone(), |acc, (k, c)| acc.add(&c.shift(0, k as u32)))
}

fn coefficient(r: &ScalarJet, s: usize) -> Result<ScalarJet> {
    if !r.is_exact() && r.prec() <= s as i32 {
        return Err(Error::Invalid(format!("truncation cap {} leaves nothing known at x^{s}", r.cap())));
    }
    Ok(r.coeff_in(0, s as u32))
}

fn constant_value(j: &ScalarJet, what: &str) -> Result<Q> {
    let c = j.at_origin();
    if !j.sub(&j.constant_like(&c)).is_zero_jet() {
        return Err(Error::Consistency(format!("{what} is not constant along the boundary")));
    }
    Ok(c)
}

/// Solves through `x^order`, `order ≤ n + 2`; `order = n + 2` adds the log
/// term and determines `ℒ`.
pub fn yamabe_solve(p: &YamabeProblem, order: usize) -> Result<YamabeExpansion> {
    let n = p.n();
    if order > n + 2 || order < 1 {
        return Err(Error::Invalid(format!("order must lie in 1..={}", n + 2)));
    }
    if p.bd.cap < order as u32 {
        return Err(Error::Invalid(format!("cap {} is below the order {order}", p.bd.cap)));
    }
    let bt = p.b_tilde();
    let zero = p.bd.zero();
    let mut u = vec![zero.clone(), p.bd.x().constant_like(&Q::ONE)];
    let lift = |s: &ScalarJet| s.clone();
    for s in 0..order.min(n + 1) {
        let r = coefficient(&p.residual(&series(&u), lift)?, s)?;
        if s == 0 {
            if !r.is_zero_jet() {
                return Err(Error::Consistency("residual does not vanish on the boundary".into()));
            }
            continue;
        }
        let next = r.scale_q(&(-&linear_factor(n, s, &bt).recip().expect("s ≤ n and B̃ ≠ 0")));
        u.push(next);
        let check = coefficient(&p.residual(&series(&u), lift)?, s)?;
        if !check.is_zero_jet() {
            return Err(Error::Consistency(format!("residual survives at x^{s} after the update")));
        }
    }
    let (log, factor) = if order == n + 2 {
        let (l, f) = solve_log(p, &series(&u))?;
        (Some(l), Some(f))
    } else {
        (None, None)
    };
    let upto = order.min(n + 1);
    let mut out = YamabeExpansion { n, u, log, log_factor: factor, order, residual_order: ResidualOrder::Exact };
    let res = p.residual(&out.u_jet(), |s: &ScalarJet| XJet::from_plain(s.clone()))?;
    for s in 0..upto {
        if !coefficient(&res.plain, s)?.is_zero_jet() || !res.log.coeff_in(0, s as u32).is_zero_jet() {
            return Err(Error::Consistency(format!("final residual survives at x^{s}")));
        }
    }
    out.residual_order = match lowest_x_order([&res]) {
        ResidualOrder::Exactly(k) => ResidualOrder::Exactly(k + 2),
        ResidualOrder::AtLeast(k) => ResidualOrder::AtLeast(k + 2),
        ResidualOrder::Exact => ResidualOrder::Exact,
    };
    Ok(out)
}

/// Residual for `u + ℓ x^{n+2} log x` with constant `ℓ`, coefficient of
/// `x^{n+1}` in the plain slot.
fn log_probe(p: &YamabeProblem, u: &ScalarJet, l: &Q) -> Result<ScalarJet> {
    let n = p.n();
    let log = u.constant_like(l).shift(0, n as u32 + 2);
    let res = p.residual(&XJet::new(u.clone(), log), |s: &ScalarJet| XJet::from_plain(s.clone()))?;
    if !res.log.coeff_in(0, n as u32 + 1).is_zero_jet() && !l.is_zero() {
        return Err(Error::Consistency("log term feeds the log slot at x^{n+1}".into()));
    }
    coefficient(&res.plain, n + 1)
}

fn solve_log(p: &YamabeProblem, u: &ScalarJet) -> Result<(ScalarJet, Q)> {
    let n = p.n();
    let r0 = log_probe(p, u, &Q::ZERO)?;
    let r1 = log_probe(p, u, &Q::ONE)?;
    let r2 = log_probe(p, u, &Q::int(2))?;
    let f = constant_value(&r1.sub(&r0), "log response")?;
    let f2 = constant_value(&r2.sub(&r0), "log response")?;
    if f2 != &f * &Q::int(2) {
        return Err(Error::Consistency("log response is not linear".into()));
    }
    if f.is_zero() {
        return Err(Error::DegenerateCoupling(n as u32 + 1));
    }
    if f != log_factor(n, &p.b_tilde()) {
        return Err(Error::Consistency(format!("calibrated log factor {f} disagrees with the frozen value")));
    }
    Ok((r0.scale_q(&(-&f.recip().expect("checked nonzero"))), f))
}

/// Measured response of the order-`s` residual to `u_{s+1}`.
#[derive(Clone, Debug, Serialize)]
pub struct LinearFactor {
    pub s: usize,
    /// `[x^s] F̃` per unit `u_{s+1}`.
    pub coefficient: Q,
    /// `∂_x^s F̃ |₀` per unit `∂_x^{s+1} u |₀`: `coefficient / (s+1)`.
    pub derivative: Q,
    /// `n(s − (n+1)) B̃₁,₂`.
    pub printed: Q,
}

impl LinearFactor {
    pub fn matches_printed(&self) -> bool {
        self.derivative == self.printed
    }
}

/// Exact linear factor at order `s ≤ n`, via a dual-number perturbation of
/// `u_{s+1}` around the solution through `x^s`.
pub fn measure_linear_factor(p: &YamabeProblem, s: usize) -> Result<LinearFactor> {
    let n = p.n();
    if s > n {
        return Err(Error::Invalid(format!("s must lie in 0..={n}")));
    }
    let base = if s == 0 { p.bd.x() } else { yamabe_solve(p, s)?.u_plain() };
    let dir = p.bd.x().constant_like(&Q::ONE).shift(0, s as u32 + 1);
    let res = p.residual(&Dual::new(base, dir), |s: &ScalarJet| Dual::constant(s.clone()))?;
    let coefficient = constant_value(&coefficient(&res.b, s)?, "linear response")?;
    let derivative = &coefficient * &Q::new(1, s as i64 + 1);
    let printed = &p.b_tilde() * &Q::int(n as i64 * (s as i64 - n as i64 - 1));
    Ok(LinearFactor { s, coefficient, derivative, printed })
}

/// Outcome of solving on `ḡ` and `Ω² ḡ`.
#[derive(Clone, Debug)]
pub struct ConformalReport {
    pub omega: Q,
    pub log: ScalarJet,
    pub log_rescaled: ScalarJet,
    /// `Ω^{−n−1}`.
    pub expected_ratio: Q,
    pub holds: bool,
}

/// `Ω² ḡ = d(Ωx)² + Ω² h` is again a product collar in `Ωx`; its log
/// coefficient should be `Ω^{−n−1} ℒ`.
pub fn yamabe_conformal_check(p: &YamabeProblem, omega: &Q) -> Result<ConformalReport> {
    if omega.signum() <= 0 {
        return Err(Error::Invalid("Ω must be positive".into()));
    }
    let n = p.n();
    let scaled = YamabeProblem::new(p.bd.scaled(&(omega * omega)), p.beta.clone())?;
    let log = yamabe_solve(p, n + 2)?.log.expect("order n + 2 carries ℒ");
    let log_rescaled = yamabe_solve(&scaled, n + 2)?.log.expect("order n + 2 carries ℒ");
    let expected_ratio = omega.pow(-(n as i32) - 1);
    let holds = log_rescaled.sub(&log.scale_q(&expected_ratio)).is_zero_jet();
    Ok(ConformalReport { omega: omega.clone(), log, log_rescaled, expected_ratio, holds })
}
