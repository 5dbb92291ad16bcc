//! Directional derivatives of metric-to-tensor maps.

use super::gauge::{rough_laplacian, trace};
use super::{form_matrix, lovelock_tensor, modified_lovelock, CouplingVector, Dual, Geometry};
use crate::error::{Error, Result};
use crate::jets::{MetricJet, ScalarJet};
use crate::ring::{DiffRing, Ring};
use crate::scalar::Q;

/// A map from metric jets to symmetric 2-tensor jets, evaluable over any
/// ring that contains [`ScalarJet`].
pub trait FieldMap {
    fn apply<S: DiffRing + From<ScalarJet>>(&self, g: &MetricJet<S>) -> Result<Vec<Vec<S>>>;
}

impl From<ScalarJet> for Dual<ScalarJet> {
    fn from(a: ScalarJet) -> Self {
        Dual::constant(a)
    }
}

/// `g ↦ g`.
pub struct Identity;

impl FieldMap for Identity {
    fn apply<S: DiffRing + From<ScalarJet>>(&self, g: &MetricJet<S>) -> Result<Vec<Vec<S>>> {
        Ok(g.g.clone())
    }
}

/// `g ↦ F_α(g)`.
pub struct Lovelock(pub CouplingVector);

impl FieldMap for Lovelock {
    fn apply<S: DiffRing + From<ScalarJet>>(&self, g: &MetricJet<S>) -> Result<Vec<Vec<S>>> {
        Ok(form_matrix(&lovelock_tensor(g, &self.0)?))
    }
}

/// `g ↦ Q_α(g, t)` for a fixed `t`.
pub struct ModifiedLovelock {
    pub cv: CouplingVector,
    pub t: MetricJet<ScalarJet>,
}

impl FieldMap for ModifiedLovelock {
    fn apply<S: DiffRing + From<ScalarJet>>(&self, g: &MetricJet<S>) -> Result<Vec<Vec<S>>> {
        let t = MetricJet {
            chart: self.t.chart.clone(),
            g: self.t.g.iter().map(|r| r.iter().map(|s| S::from(s.clone())).collect()).collect(),
        };
        modified_lovelock(g, &t, &self.cv)
    }
}

fn offset(g0: &MetricJet<ScalarJet>, r: &[Vec<ScalarJet>], eps: &Q) -> MetricJet<ScalarJet> {
    let g = g0.g.iter().zip(r).map(|(gr, rr)| gr.iter().zip(rr).map(|(a, b)| a.add(&b.scale(eps))).collect()).collect();
    MetricJet { chart: g0.chart.clone(), g }
}

/// Exact derivative `d/dε F(g₀ + εr)|₀` via dual numbers.
pub fn linearize_exact<F: FieldMap>(f: &F, g0: &MetricJet<ScalarJet>, r: &[Vec<ScalarJet>]) -> Result<Vec<Vec<ScalarJet>>> {
    let g = g0.g.iter().zip(r).map(|(gr, rr)| gr.iter().zip(rr).map(|(a, b)| Dual::new(a.clone(), b.clone())).collect()).collect();
    let out = f.apply(&MetricJet { chart: g0.chart.clone(), g })?;
    Ok(out.into_iter().map(|row| row.into_iter().map(|d| d.b).collect()).collect())
}

/// Extrapolates `D(ε) = D₀ + c₁ε² + c₂ε⁴ + ⋯` to `ε = 0` from samples at
/// distinct nonzero `eps` (Neville's scheme in `ε²`).
pub fn richardson<S: Ring>(eps: &[Q], samples: Vec<S>) -> Result<S> {
    if eps.is_empty() || eps.len() != samples.len() {
        return Err(Error::Invalid("need one sample per eps value".into()));
    }
    let h: Vec<Q> = eps.iter().map(|e| e * e).collect();
    for (i, a) in h.iter().enumerate() {
        if a.is_zero() || h[..i].contains(a) {
            return Err(Error::Invalid("eps values must be nonzero with distinct squares".into()));
        }
    }
    let mut p = samples;
    for k in 1..h.len() {
        for i in (k..h.len()).rev() {
            // P_i ← (h_{i−k} P_i − h_i P_{i−1}) / (h_{i−k} − h_i)
            let den = (&h[i - k] - &h[i]).recip().expect("distinct");
            let v = p[i].scale(&h[i - k]).sub(&p[i - 1].scale(&h[i])).scale(&den);
            p[i] = v;
        }
    }
    Ok(p.pop().expect("nonempty"))
}

/// Richardson-extrapolated central difference
/// `(F(g₀ + εr) − F(g₀ − εr))/(2ε)` over `eps`.
pub fn linearize<F: FieldMap>(
    f: &F,
    g0: &MetricJet<ScalarJet>,
    r: &[Vec<ScalarJet>],
    eps: &[Q],
) -> Result<Vec<Vec<ScalarJet>>> {
    let m = g0.dim();
    let mut per_entry: Vec<Vec<ScalarJet>> = vec![Vec::new(); m * m];
    for e in eps {
        if e.is_zero() {
            return Err(Error::Invalid("eps must be nonzero".into()));
        }
        let plus = f.apply(&offset(g0, r, e))?;
        let minus = f.apply(&offset(g0, r, &-e))?;
        let inv2e = (e * &Q::int(2)).recip().expect("nonzero");
        for i in 0..m {
            for j in 0..m {
                per_entry[i * m + j].push(plus[i][j].sub(&minus[i][j]).scale(&inv2e));
            }
        }
    }
    let mut out = Vec::with_capacity(m);
    let mut it = per_entry.into_iter();
    for _ in 0..m {
        let mut row = Vec::with_capacity(m);
        for _ in 0..m {
            row.push(richardson(eps, it.next().expect("m*m entries"))?);
        }
        out.push(row);
    }
    Ok(out)
}

/// `(A₁/4)[−(n−1)(Δ + 2n)(τ g) + 2(Δ − 2) r₀]` with `τ = tr_g r/(n+1)` and
/// `r₀ = r − τ g`.
pub fn laplace_type_formula<S: DiffRing>(geo: &Geometry<S>, r: &[Vec<S>], a1: &Q) -> Result<Vec<Vec<S>>> {
    let m = geo.dim();
    let n = m as i64 - 1;
    let tau = trace(geo, r).scale(&Q::new(1, m as i64));
    let pure: Vec<Vec<S>> = geo.g.iter().map(|row| row.iter().map(|g| g.mul(&tau)).collect()).collect();
    let r0: Vec<Vec<S>> = r.iter().zip(&pure).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()).collect();
    let lp = rough_laplacian(geo, &pure)?;
    let l0 = rough_laplacian(geo, &r0)?;
    let quarter = a1 * &Q::new(1, 4);
    let c_pure = -&Q::int(n - 1);
    Ok((0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let t1 = lp[i][j].add(&pure[i][j].scale(&Q::int(2 * n))).scale(&c_pure);
                    let t2 = l0[i][j].sub(&r0[i][j].scale(&Q::int(2))).scale(&Q::int(2));
                    t1.add(&t2).scale(&quarter)
                })
                .collect()
        })
        .collect())
}
