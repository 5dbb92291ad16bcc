//! Formal Fefferman–Graham expansion `ḡ = dx² + h_x` of conformally compact
//! Lovelock metrics `g = x^{−2} ḡ`, solved order by order from the residual
//! `x² F_α(g)`.
//!
//! Jets live in `1 + active` variables: variable 0 is `x` and variable
//! `1 + i` is the boundary coordinate `y_i` for `i < active`. Boundary
//! coordinates past `active` are directions along which the data is
//! constant.

pub mod einstein;
pub mod obstruction;

pub use einstein::{einstein_series, schouten};
pub use obstruction::{obstruction_leading_check, obstruction_tensor, LeadingReport, ObstructionTensor};

use serde::Serialize;

use crate::curvature::{form_matrix, lovelock_tensor_compact, CouplingVector};
use crate::error::{Error, Result};
use crate::jets::{is_positive_definite, Chart, MetricJet, ScalarJet, XJet};
use crate::ring::{invert_matrix, Ring};
use crate::scalar::Q;

/// Boundary metric `h₀` as jets in the bulk layout (no `x` dependence).
#[derive(Clone, Debug)]
pub struct BoundaryData {
    pub n: usize,
    pub active: usize,
    pub cap: u32,
    pub h: Vec<Vec<ScalarJet>>,
}

impl BoundaryData {
    pub fn new(n: usize, active: usize, cap: u32, h: Vec<Vec<ScalarJet>>) -> Result<BoundaryData> {
        if active > n {
            return Err(Error::Dimension(format!("{active} active coordinates but n = {n}")));
        }
        if h.len() != n || h.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("boundary metric must be {n}x{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                let s = &h[i][j];
                if s.nvars() != active + 1 || s.cap() != cap {
                    return Err(Error::CapMismatch { left: (s.nvars(), s.cap()), right: (active + 1, cap) });
                }
                if (1..=cap).any(|k| !s.coeff_in(0, k).is_zero_jet()) {
                    return Err(Error::Invalid("boundary data must not depend on x".into()));
                }
                if j < i && !s.sub(&h[j][i]).is_zero() {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        let base: Vec<Vec<Q>> = h.iter().map(|r| r.iter().map(ScalarJet::at_origin).collect()).collect();
        if !is_positive_definite(&base) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(BoundaryData { n, active, cap, h })
    }

    /// `h₀ = δ`.
    pub fn flat(n: usize, active: usize, cap: u32) -> BoundaryData {
        let nv = active + 1;
        let h = (0..n)
            .map(|i| (0..n).map(|j| ScalarJet::constant(nv, cap, if i == j { Q::ONE } else { Q::ZERO })).collect())
            .collect();
        BoundaryData { n, active, cap, h }
    }

    pub fn nvars(&self) -> usize {
        self.active + 1
    }

    pub fn zero(&self) -> ScalarJet {
        ScalarJet::zero(self.nvars(), self.cap)
    }

    /// Chart of the boundary coordinates `y`.
    pub fn boundary_chart(&self) -> Chart {
        Chart { dim: self.n, var_of: (0..self.n).map(|i| (i < self.active).then_some(i + 1)).collect() }
    }

    /// Chart of the bulk coordinates `(x, y)`.
    pub fn bulk_chart(&self) -> Chart {
        let mut var_of = vec![Some(0)];
        var_of.extend((0..self.n).map(|i| (i < self.active).then_some(i + 1)));
        Chart { dim: self.n + 1, var_of }
    }

    pub fn boundary_metric(&self) -> MetricJet<ScalarJet> {
        MetricJet { chart: self.boundary_chart(), g: self.h.clone() }
    }

    /// `c h₀` for a constant `c`.
    pub fn scaled(&self, c: &Q) -> BoundaryData {
        let h = self.h.iter().map(|r| r.iter().map(|s| s.scale_q(c)).collect()).collect();
        BoundaryData { h, ..self.clone() }
    }

    /// `h₀ + ε φ`.
    pub fn perturbed(&self, phi: &[Vec<ScalarJet>], eps: &Q) -> Result<BoundaryData> {
        let h = self.h.iter().zip(phi).map(|(hr, pr)| hr.iter().zip(pr).map(|(a, b)| a.add(&b.scale_q(eps))).collect()).collect();
        BoundaryData::new(self.n, self.active, self.cap, h)
    }

    pub fn x(&self) -> ScalarJet {
        ScalarJet::var(self.nvars(), self.cap, 0)
    }
}

/// Vanishing order in `x` of a residual, in the normalization of the
/// components of `F_α(g)` (two less than the order of `x² F_α(g)`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualOrder {
    /// Every coefficient vanishes and the jets are exact.
    Exact,
    /// All coefficients known to the cap vanish through this order.
    AtLeast(i32),
    /// Lowest order with a nonzero coefficient (plain or log).
    Exactly(i32),
}

impl ResidualOrder {
    /// Whether the order is known to be at least `k`.
    pub fn at_least(&self, k: i32) -> bool {
        match *self {
            ResidualOrder::Exact => true,
            ResidualOrder::AtLeast(p) | ResidualOrder::Exactly(p) => p >= k,
        }
    }
}

impl std::fmt::Display for ResidualOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ResidualOrder::Exact => write!(f, "∞ (exact)"),
            ResidualOrder::AtLeast(p) => write!(f, "≥ {p}"),
            ResidualOrder::Exactly(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualReport {
    pub on_diagonal: ResidualOrder,
    pub off_diagonal: ResidualOrder,
}

/// Lowest order in `x` among `entries`, on the `x² F` scale.
pub fn lowest_x_order<'a>(entries: impl IntoIterator<Item = &'a XJet>) -> ResidualOrder {
    let mut best: Option<i32> = None;
    let mut known = i32::MAX;
    let mut exact = true;
    for e in entries {
        for s in [&e.plain, &e.log] {
            exact &= s.is_exact() && s.is_zero_jet();
            let limit = if s.is_exact() { s.cap() as i32 } else { s.prec() };
            let mut k = 0;
            while k <= limit && best.is_none_or(|b| k < b) {
                if !s.coeff_in(0, k as u32).is_zero_jet() {
                    best = Some(k);
                    break;
                }
                k += 1;
            }
            if !s.is_exact() {
                known = known.min(limit + 1);
            }
        }
    }
    match best {
        Some(b) => ResidualOrder::Exactly(b - 2),
        None if exact => ResidualOrder::Exact,
        None => ResidualOrder::AtLeast(known.saturating_sub(2)),
    }
}

/// Options for [`fg_solve`].
#[derive(Clone, Debug, Default)]
pub struct FgOptions {
    /// Trace-free part of `h_n`; zero when absent.
    pub hn_tracefree: Option<Vec<Vec<ScalarJet>>>,
}

/// Solved expansion.
#[derive(Clone, Debug)]
pub struct ExpansionTable {
    pub n: usize,
    /// `h[k]` for `k = 0..=order`.
    pub h: Vec<Vec<Vec<ScalarJet>>>,
    /// `h_{n,1}`, the coefficient of `x^n log x` (even `n`, order `n`).
    pub log: Option<Vec<Vec<ScalarJet>>>,
    pub order: usize,
    pub residual: ResidualReport,
}

impl ExpansionTable {
    /// `h_x` truncated at `order`, as jets in `(x, y)`.
    pub fn h_x(&self) -> Vec<Vec<ScalarJet>> {
        sum_series(&self.h)
    }
}

fn sum_series(h: &[Vec<Vec<ScalarJet>>]) -> Vec<Vec<ScalarJet>> {
    let n = h[0].len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = h[0][i][j].clone();
                    for (k, hk) in h.iter().enumerate().skip(1) {
                        acc = acc.add(&hk[i][j].shift(0, k as u32));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Residual engine: `x² F_α(g)` for `ḡ = dx² + h_x (+ x^n log x H)`.
pub(crate) struct Engine<'a> {
    pub bd: &'a BoundaryData,
    pub cv: &'a CouplingVector,
    pub h0inv: Vec<Vec<ScalarJet>>,
}

impl<'a> Engine<'a> {
    pub fn new(bd: &'a BoundaryData, cv: &'a CouplingVector) -> Result<Engine<'a>> {
        let h0inv = invert_matrix(&bd.h).ok_or_else(|| Error::Singular("boundary metric".into()))?;
        Ok(Engine { bd, cv, h0inv })
    }

    fn bulk<S: Ring>(&self, block: Vec<Vec<S>>) -> MetricJet<S> {
        let n = self.bd.n;
        let zero = block[0][0].zero_like();
        let mut g = vec![vec![zero.clone(); n + 1]; n + 1];
        g[0][0] = zero.one_like();
        for i in 0..n {
            for j in 0..n {
                g[i + 1][j + 1] = block[i][j].clone();
            }
        }
        MetricJet { chart: self.bd.bulk_chart(), g }
    }

    pub fn residual(&self, hx: &[Vec<ScalarJet>], log: Option<&[Vec<ScalarJet>]>) -> Result<Vec<Vec<XJet>>> {
        let x = self.bd.x();
        match log {
            None => {
                let g = self.bulk(hx.to_vec());
                let f = form_matrix(&lovelock_tensor_compact(&g, &x, self.cv)?);
                Ok(f.into_iter().map(|r| r.into_iter().map(XJet::from_plain).collect()).collect())
            }
            Some(l) => {
                let n = self.bd.n;
                let xn = self.bd.n as u32;
                let block = (0..n)
                    .map(|i| (0..n).map(|j| XJet::new(hx[i][j].clone(), l[i][j].shift(0, xn))).collect())
                    .collect();
                let g = self.bulk(block);
                Ok(form_matrix(&lovelock_tensor_compact(&g, &XJet::from_plain(x), self.cv)?))
            }
        }
    }

    pub fn trace(&self, r: &[Vec<ScalarJet>]) -> ScalarJet {
        let n = self.bd.n;
        let mut acc = self.bd.zero();
        for a in 0..n {
            for b in 0..n {
                acc.add_mul_assign(&self.h0inv[a][b], &r[a][b]);
            }
        }
        acc
    }

    /// Trace-free part with respect to `h₀`.
    pub fn trace_free(&self, r: &[Vec<ScalarJet>]) -> Vec<Vec<ScalarJet>> {
        let t = self.trace(r).scale_q(&Q::new(1, self.bd.n as i64));
        r.iter().zip(&self.bd.h).map(|(rr, hr)| rr.iter().zip(hr).map(|(a, h)| a.sub(&t.mul(h))).collect()).collect()
    }

    /// Coefficient of `x^k` in the boundary block of a residual (plain slot).
    pub fn block_coeff(&self, res: &[Vec<XJet>], k: u32) -> Vec<Vec<ScalarJet>> {
        let n = self.bd.n;
        (0..n).map(|i| (0..n).map(|j| res[i + 1][j + 1].plain.coeff_in(0, k)).collect()).collect()
    }
}

/// Residual orders of `x² F` split into the diagonal blocks (`00` and the
/// boundary block) and the mixed `0i` components.
pub fn residual_report(res: &[Vec<XJet>]) -> ResidualReport {
    let m = res.len();
    let mut on = vec![&res[0][0]];
    for i in 1..m {
        for j in 1..m {
            on.push(&res[i][j]);
        }
    }
    let off: Vec<&XJet> = (1..m).map(|i| &res[0][i]).collect();
    ResidualReport { on_diagonal: lowest_x_order(on), off_diagonal: lowest_x_order(off) }
}

/// Linear response coefficients at order `x^k` on the `x² F` scale:
/// trace-free boundary block `½ k (n−k) A₁`.
pub fn tracefree_coefficient(cv: &CouplingVector, k: usize) -> Q {
    let (n, k) = (cv.n as i64, k as i64);
    &(&cv.a1() * &Q::int(k * (n - k))) * &Q::new(1, 2)
}

/// `00` component response to `tr_{h₀} h_k`:
/// `½ k ((2−k) A₁ + 2(n−k+1) B₁,₂)`.
pub fn trace_coefficient(cv: &CouplingVector, k: usize) -> Q {
    let (n, k) = (cv.n as i64, k as i64);
    let inner = &(&cv.a1() * &Q::int(2 - k)) + &(&cv.b12() * &Q::int(2 * (n - k + 1)));
    &(&inner * &Q::int(k)) * &Q::new(1, 2)
}

/// Response of the boundary block at `x^n` to `x^n log x · H`, trace-free
/// part: `−½ n A₁`.
pub fn log_coefficient(cv: &CouplingVector) -> Q {
    &(&cv.a1() * &Q::int(cv.n as i64)) * &Q::new(-1, 2)
}

fn check_coupling(bd: &BoundaryData, cv: &CouplingVector) -> Result<()> {
    if cv.n != bd.n {
        return Err(Error::Dimension(format!("couplings for n = {}, boundary data for n = {}", cv.n, bd.n)));
    }
    if !cv.kappa.is_one() {
        return Err(Error::Invalid("rescale the metric to κ = 1 before solving".into()));
    }
    if !cv.in_limsec() {
        return Err(Error::Gate(format!(
            "κ = 1 is not in LimSec(α): asymptotic sum {}, A₁ = {}",
            cv.limsec_sum(),
            cv.a1()
        )));
    }
    Ok(())
}

fn require_vanishing(res: &[Vec<XJet>], upto: u32) -> Result<()> {
    for (i, row) in res.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if (i == 0) != (j == 0) {
                continue;
            }
            for k in 0..=upto {
                let c = e.plain.coeff_in(0, k);
                if !c.is_zero_jet() {
                    return Err(Error::Consistency(format!(
                        "residual component ({i},{j}) has a nonzero x^{k} coefficient after solving through order {upto}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Solves `F_α(g) = 0` formally through order `order ≤ n`.
pub fn fg_solve(bd: &BoundaryData, cv: &CouplingVector, order: usize, opts: &FgOptions) -> Result<ExpansionTable> {
    check_coupling(bd, cv)?;
    let n = bd.n;
    if order > n {
        return Err(Error::Invalid(format!("order {order} exceeds n = {n}; higher orders need a choice of h_n")));
    }
    if bd.cap < order as u32 + 1 {
        return Err(Error::Invalid(format!("cap {} too small for order {order}", bd.cap)));
    }
    let eng = Engine::new(bd, cv)?;
    let zero_block = vec![vec![bd.zero(); n]; n];
    let mut h = vec![bd.h.clone()];
    let mut log: Option<Vec<Vec<ScalarJet>>> = None;
    let mut res = eng.residual(&bd.h, None)?;
    for k in 1..=order {
        if k > 1 {
            require_vanishing(&res, k as u32 - 1)?;
        }
        let r00 = res[0][0].plain.coeff_in(0, k as u32);
        let rb = eng.block_coeff(&res, k as u32);
        if r00.prec() < 0 {
            return Err(Error::Invalid(format!("cap {} leaves the order-{k} residual unknown", bd.cap)));
        }
        let c00 = trace_coefficient(cv, k);
        if c00.is_zero() {
            return Err(Error::DegenerateCoupling(k as u32));
        }
        let tr = r00.scale_q(&-&c00.recip().expect("nonzero"));
        let tfr = eng.trace_free(&rb);
        let tf: Vec<Vec<ScalarJet>> = if k < n {
            let a = tracefree_coefficient(cv, k);
            let ainv = -&a.recip().ok_or(Error::DegenerateCoupling(k as u32))?;
            tfr.iter().map(|r| r.iter().map(|s| s.scale_q(&ainv)).collect()).collect()
        } else {
            if n % 2 == 0 {
                let cl = log_coefficient(cv).recip().ok_or(Error::DegenerateCoupling(k as u32))?;
                log = Some(tfr.iter().map(|r| r.iter().map(|s| s.scale_q(&-&cl)).collect()).collect());
            } else {
                if !tr.is_zero_jet() {
                    return Err(Error::Consistency("odd n: order-n trace residual does not vanish".into()));
                }
                if tfr.iter().flatten().any(|s| !s.is_zero_jet()) {
                    return Err(Error::Consistency("odd n: order-n trace-free residual does not vanish".into()));
                }
            }
            match &opts.hn_tracefree {
                Some(t) => eng.trace_free(t),
                None => zero_block.clone(),
            }
        };
        let trn = tr.scale_q(&Q::new(1, n as i64));
        let hk: Vec<Vec<ScalarJet>> =
            tf.iter().zip(&bd.h).map(|(tr_row, hr)| tr_row.iter().zip(hr).map(|(t, h0)| t.add(&trn.mul(h0))).collect()).collect();
        h.push(hk);
        res = eng.residual(&sum_series(&h), log.as_deref())?;
    }
    if order >= 1 {
        require_vanishing(&res, order as u32)?;
    }
    Ok(ExpansionTable { n, h, log, order, residual: residual_report(&res) })
}
