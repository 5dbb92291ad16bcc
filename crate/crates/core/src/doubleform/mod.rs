//! Double forms: elements of `Λ^p ⊗ Λ^q` over an `m`-dimensional space.
//!
//! Components are stored densely on sorted multi-index representatives,
//! encoded as bitmasks and ranked lexicographically. Values come from any
//! [`Ring`], so the same code serves pointwise rational forms and jet-valued
//! curvature forms.

pub mod oracle;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::jets::determinant;
use crate::ring::{invert_matrix, Ring};
use crate::scalar::Q;

/// Sorted `k`-subsets of `0..m` in lexicographic order.
#[derive(Debug)]
struct Subsets {
    masks: Vec<u32>,
    rank: HashMap<u32, usize>,
}

fn subsets(m: usize, k: usize) -> Arc<Subsets> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Subsets>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    cache
        .lock()
        .expect("subset cache poisoned")
        .entry((m, k))
        .or_insert_with(|| {
            let mut masks = Vec::new();
            let mut cur = Vec::new();
            combos(m, k, 0, &mut cur, &mut masks);
            let rank = masks.iter().enumerate().map(|(i, &s)| (s, i)).collect();
            Arc::new(Subsets { masks, rank })
        })
        .clone()
}

fn combos(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<u32>) {
    if cur.len() == k {
        out.push(cur.iter().fold(0u32, |acc, &i| acc | (1 << i)));
        return;
    }
    for i in start..m {
        cur.push(i);
        combos(m, k, i + 1, cur, out);
        cur.pop();
    }
}

fn below(i: usize) -> u32 {
    (1u32 << i) - 1
}

/// Sign of the permutation sorting the concatenation `a ++ c` of two disjoint
/// sorted index sets.
fn concat_sign(a: u32, c: u32) -> bool {
    let mut inv = 0u32;
    let mut s = a;
    while s != 0 {
        let i = s.trailing_zeros() as usize;
        inv += (c & below(i)).count_ones();
        s &= s - 1;
    }
    inv % 2 == 1
}

/// Sorts an index list, returning the bitmask and whether the sort was odd,
/// or `None` on a repeated index.
fn sort_indices(idx: &[usize]) -> Option<(u32, bool)> {
    let mut mask = 0u32;
    let mut odd = false;
    for &i in idx {
        if mask & (1 << i) != 0 {
            return None;
        }
        odd ^= (mask & !below(i + 1)).count_ones() % 2 == 1;
        mask |= 1 << i;
    }
    Some((mask, odd))
}

fn mask_indices(mut s: u32) -> Vec<usize> {
    let mut out = Vec::new();
    while s != 0 {
        out.push(s.trailing_zeros() as usize);
        s &= s - 1;
    }
    out
}

/// A `(p, q)` double form on an `m`-dimensional space.
#[derive(Clone, Debug)]
pub struct DoubleForm<S> {
    p: usize,
    q: usize,
    m: usize,
    comps: Vec<S>,
    zero: S,
}

impl<S: Ring> PartialEq for DoubleForm<S> {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p
            && self.q == o.q
            && self.m == o.m
            && self.comps.iter().zip(&o.comps).all(|(a, b)| a.sub(b).is_zero())
    }
}

impl<S: Ring> DoubleForm<S> {
    /// Identically zero form; `zero` fixes the scalar ring instance.
    pub fn zeros(p: usize, q: usize, m: usize, zero: S) -> DoubleForm<S> {
        let n = if p > m || q > m { 0 } else { binom(m, p) * binom(m, q) };
        DoubleForm { p, q, m, comps: vec![zero.clone(); n], zero }
    }

    /// A `(0, 0)` form, i.e. a scalar.
    pub fn scalar(v: S, m: usize) -> DoubleForm<S> {
        let zero = v.zero_like();
        DoubleForm { p: 0, q: 0, m, comps: vec![v], zero }
    }

    /// The `(1, 1)` form with components `a[i][j]`.
    pub fn from_matrix(a: &[Vec<S>]) -> Result<DoubleForm<S>> {
        let m = a.len();
        let zero = a
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| Error::Dimension("empty matrix".into()))?
            .zero_like();
        if a.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("matrix must be square".into()));
        }
        let mut f = DoubleForm::zeros(1, 1, m, zero);
        for i in 0..m {
            for j in 0..m {
                f.comps[i * m + j] = a[i][j].clone();
            }
        }
        Ok(f)
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn zero_scalar(&self) -> &S {
        &self.zero
    }

    /// Stored components in `(rank I, rank J)` row-major order.
    pub fn components(&self) -> &[S] {
        &self.comps
    }

    fn slot(&self, i: u32, j: u32) -> usize {
        let si = subsets(self.m, self.p);
        let sj = subsets(self.m, self.q);
        si.rank[&i] * sj.masks.len() + sj.rank[&j]
    }

    fn at_masks(&self, i: u32, j: u32) -> &S {
        &self.comps[self.slot(i, j)]
    }

    /// Component for arbitrary (unsorted) index lists, with antisymmetric sign.
    pub fn get(&self, i: &[usize], j: &[usize]) -> S {
        assert_eq!((i.len(), j.len()), (self.p, self.q), "index list lengths");
        if self.comps.is_empty() {
            return self.zero.clone();
        }
        match (sort_indices(i), sort_indices(j)) {
            (Some((mi, oi)), Some((mj, oj))) => {
                let v = self.at_masks(mi, mj);
                if oi ^ oj {
                    v.neg()
                } else {
                    v.clone()
                }
            }
            _ => self.zero.clone(),
        }
    }

    /// Sets the component at sorted representatives of `i`, `j` so that the
    /// given (possibly unsorted) lists read back `v`.
    pub fn set(&mut self, i: &[usize], j: &[usize], v: S) {
        let (mi, oi) = sort_indices(i).expect("repeated index");
        let (mj, oj) = sort_indices(j).expect("repeated index");
        let k = self.slot(mi, mj);
        self.comps[k] = if oi ^ oj { v.neg() } else { v };
    }

    /// Iterates over `(sorted I, sorted J, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, Vec<usize>, &S)> + '_ {
        let si = subsets(self.m, self.p);
        let sj = subsets(self.m, self.q);
        let nj = sj.masks.len();
        self.comps.iter().enumerate().map(move |(k, v)| {
            (mask_indices(si.masks[k / nj]), mask_indices(sj.masks[k % nj]), v)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Ring::is_zero)
    }

    /// True when `p = q` and swapping the two blocks fixes every component.
    pub fn is_symmetric(&self) -> bool {
        if self.p != self.q {
            return false;
        }
        let s = subsets(self.m, self.p);
        let n = s.masks.len();
        (0..n).all(|a| (0..a).all(|b| self.comps[a * n + b].sub(&self.comps[b * n + a]).is_zero()))
    }

    pub fn map<T: Ring>(&self, f: impl Fn(&S) -> T, zero: T) -> DoubleForm<T> {
        DoubleForm { p: self.p, q: self.q, m: self.m, comps: self.comps.iter().map(f).collect(), zero }
    }

    fn same_shape(&self, o: &Self) -> Result<()> {
        if (self.p, self.q, self.m) != (o.p, o.q, o.m) {
            return Err(Error::Dimension(format!(
                "({}, {}) form on m={} vs ({}, {}) form on m={}",
                self.p, self.q, self.m, o.p, o.q, o.m
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        let mut out = self.clone();
        for (a, b) in out.comps.iter_mut().zip(&o.comps) {
            a.add_assign(b);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        let mut out = self.clone();
        for (a, b) in out.comps.iter_mut().zip(&o.comps) {
            a.sub_assign(b);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = self.clone();
        for a in &mut out.comps {
            *a = a.scale(c);
        }
        out
    }

    /// Multiplies every component by a ring element.
    pub fn mul_scalar(&self, s: &S) -> Self {
        let mut out = self.clone();
        for a in &mut out.comps {
            *a = a.mul(s);
        }
        out
    }

    /// Kulkarni–Nomizu product, wedging each block separately:
    /// `(ω.η)(I; J) = Σ sgn(A, I∖A) sgn(B, J∖B) ω(A; B) η(I∖A; J∖B)` over
    /// `A ⊂ I`, `B ⊂ J` with `|A| = p`, `|B| = q`.
    pub fn kn(&self, o: &Self) -> Result<Self> {
        if self.m != o.m {
            return Err(Error::Dimension(format!("m={} vs m={}", self.m, o.m)));
        }
        let (p, q) = (self.p + o.p, self.q + o.q);
        let mut out = DoubleForm::zeros(p, q, self.m, self.zero.clone());
        if out.comps.is_empty() || self.comps.is_empty() || o.comps.is_empty() {
            return Ok(out);
        }
        let si = subsets(self.m, p);
        let sj = subsets(self.m, q);
        let split_i: Vec<Vec<(usize, usize, bool)>> =
            si.masks.iter().map(|&i| splits(i, self.m, self.p, o.p)).collect();
        let split_j: Vec<Vec<(usize, usize, bool)>> =
            sj.masks.iter().map(|&j| splits(j, self.m, self.q, o.q)).collect();
        let (nq1, nq2) = (binom(self.m, self.q), binom(self.m, o.q));
        let nj = sj.masks.len();
        for (ri, pi) in split_i.iter().enumerate() {
            for (rj, pj) in split_j.iter().enumerate() {
                let acc = &mut out.comps[ri * nj + rj];
                for &(a, c, sa) in pi {
                    for &(b, d, sb) in pj {
                        let x = &self.comps[a * nq1 + b];
                        if x.is_zero() {
                            continue;
                        }
                        let y = &o.comps[c * nq2 + d];
                        if sa ^ sb {
                            acc.add_mul_assign(&x.neg(), y);
                        } else {
                            acc.add_mul_assign(x, y);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `k`-fold Kulkarni–Nomizu power; `k = 0` gives the unit `(0, 0)` form.
    pub fn kn_pow(&self, k: usize) -> Result<Self> {
        let mut out = DoubleForm::scalar(self.zero.one_like(), self.m);
        for _ in 0..k {
            out = out.kn(self)?;
        }
        Ok(out)
    }

    /// One contraction against the inverse metric `ginv` (first slot of each
    /// block). Forms with an empty block contract to zero.
    pub fn contract_inv(&self, ginv: &[Vec<S>]) -> Self {
        let (p, q) = (self.p.saturating_sub(1), self.q.saturating_sub(1));
        let mut out = DoubleForm::zeros(p, q, self.m, self.zero.clone());
        if self.p == 0 || self.q == 0 || self.comps.is_empty() || out.comps.is_empty() {
            return out;
        }
        let si = subsets(self.m, p);
        let sj = subsets(self.m, q);
        let nj = sj.masks.len();
        for (ri, &i) in si.masks.iter().enumerate() {
            for (rj, &j) in sj.masks.iter().enumerate() {
                let acc = &mut out.comps[ri * nj + rj];
                for a in (0..self.m).filter(|a| i & (1 << a) == 0) {
                    let sa = (i & below(a)).count_ones() % 2 == 1;
                    for b in (0..self.m).filter(|b| j & (1 << b) == 0) {
                        if ginv[a][b].is_zero() {
                            continue;
                        }
                        let sb = (j & below(b)).count_ones() % 2 == 1;
                        let v = self.at_masks(i | (1 << a), j | (1 << b));
                        if v.is_zero() {
                            continue;
                        }
                        if sa ^ sb {
                            acc.add_mul_assign(&v.neg(), &ginv[a][b]);
                        } else {
                            acc.add_mul_assign(v, &ginv[a][b]);
                        }
                    }
                }
            }
        }
        out
    }

    /// Contraction with respect to the metric `(1, 1)` form `g`.
    pub fn contract(&self, g: &Self) -> Result<Self> {
        let ginv = metric_inverse(g)?;
        Ok(self.contract_inv(&ginv))
    }

    /// `ℓ`-fold contraction against `ginv`.
    pub fn contract_n_inv(&self, l: usize, ginv: &[Vec<S>]) -> Self {
        let mut out = self.clone();
        for _ in 0..l {
            out = out.contract_inv(ginv);
        }
        out
    }

    /// Raises the second block with `ginv`, giving the mixed form whose
    /// contraction is a plain trace.
    pub fn raise_second(&self, ginv: &[Vec<S>]) -> Self {
        let mut out = DoubleForm::zeros(self.p, self.q, self.m, self.zero.clone());
        if self.comps.is_empty() {
            return out;
        }
        let sj = subsets(self.m, self.q);
        let nj = sj.masks.len();
        let idx: Vec<Vec<usize>> = sj.masks.iter().map(|&s| mask_indices(s)).collect();
        let mut minor = vec![vec![self.zero.clone(); nj]; nj];
        for (k, rk) in idx.iter().enumerate() {
            for (j, cj) in idx.iter().enumerate() {
                minor[k][j] = ring_det(
                    &rk.iter().map(|&r| cj.iter().map(|&c| ginv[r][c].clone()).collect()).collect::<Vec<_>>(),
                    &self.zero,
                );
            }
        }
        let ni = self.comps.len() / nj;
        for i in 0..ni {
            for j in 0..nj {
                let acc = &mut out.comps[i * nj + j];
                for (k, mk) in minor.iter().enumerate() {
                    let v = &self.comps[i * nj + k];
                    if !v.is_zero() {
                        acc.add_mul_assign(v, &mk[j]);
                    }
                }
            }
        }
        out
    }

    /// `ℓ`-fold contraction of a mixed form (second block raised):
    /// `ℓ! Σ_S sgn(S, I) sgn(S, J) ω(S ∪ I; S ∪ J)` over `ℓ`-sets `S`.
    pub fn trace_mixed(&self, l: usize) -> Self {
        if l > self.p || l > self.q {
            return DoubleForm::zeros(self.p.saturating_sub(l), self.q.saturating_sub(l), self.m, self.zero.clone());
        }
        let (p, q) = (self.p - l, self.q - l);
        let mut out = DoubleForm::zeros(p, q, self.m, self.zero.clone());
        if self.comps.is_empty() {
            return out;
        }
        let si = subsets(self.m, p);
        let sj = subsets(self.m, q);
        let ss = subsets(self.m, l);
        let nj = sj.masks.len();
        let lf = Q::factorial(l as u32);
        for (ri, &i) in si.masks.iter().enumerate() {
            for (rj, &j) in sj.masks.iter().enumerate() {
                let acc = &mut out.comps[ri * nj + rj];
                for &s in ss.masks.iter().filter(|&&s| s & (i | j) == 0) {
                    let v = self.at_masks(s | i, s | j);
                    if concat_sign(s, i) ^ concat_sign(s, j) {
                        acc.sub_assign(v);
                    } else {
                        acc.add_assign(v);
                    }
                }
                if !lf.is_one() {
                    *acc = acc.scale(&lf);
                }
            }
        }
        out
    }
}

/// `(A rank, complement rank, sign)` for every split of the mask `i` into a
/// `k1`-subset and its `k2`-complement.
fn splits(i: u32, m: usize, k1: usize, k2: usize) -> Vec<(usize, usize, bool)> {
    let s1 = subsets(m, k1);
    let s2 = subsets(m, k2);
    s1.masks
        .iter()
        .filter(|&&a| a & i == a)
        .map(|&a| {
            let c = i & !a;
            (s1.rank[&a], s2.rank[&c], concat_sign(a, c))
        })
        .collect()
}

fn ring_det<S: Ring>(a: &[Vec<S>], zero: &S) -> S {
    match a.len() {
        0 => zero.one_like(),
        1 => a[0][0].clone(),
        2 => a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0])),
        n => {
            let mut acc = zero.clone();
            for c in 0..n {
                if a[0][c].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<S>> =
                    a[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, v)| v.clone()).collect()).collect();
                let t = a[0][c].mul(&ring_det(&sub, zero));
                if c % 2 == 1 {
                    acc.sub_assign(&t);
                } else {
                    acc.add_assign(&t);
                }
            }
            acc
        }
    }
}

/// Inverse of a metric given as a `(1, 1)` form.
pub fn metric_inverse<S: Ring>(g: &DoubleForm<S>) -> Result<Vec<Vec<S>>> {
    if g.bidegree() != (1, 1) {
        return Err(Error::Dimension("metric must be a (1, 1) form".into()));
    }
    let m = g.dim();
    let a: Vec<Vec<S>> = (0..m).map(|i| (0..m).map(|j| g.get(&[i], &[j])).collect()).collect();
    invert_matrix(&a).ok_or_else(|| Error::Singular("metric".into()))
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// The right-hand side of the contraction formula:
/// `Σ_r C(m−p−q+ℓ−k, r) k!/(k−r)! ℓ!/(ℓ−r)! g^{k−r} ctr^{ℓ−r}(ω)`.
pub fn contract_power_formula<S: Ring>(k: usize, l: usize, omega: &DoubleForm<S>, g: &DoubleForm<S>) -> Result<DoubleForm<S>> {
    let (p, q) = omega.bidegree();
    let m = omega.dim();
    if p + k < l || q + k < l {
        return Ok(DoubleForm::zeros((p + k).saturating_sub(l), (q + k).saturating_sub(l), m, omega.zero.clone()));
    }
    let ginv = metric_inverse(g)?;
    let top = m as i64 - p as i64 - q as i64 + l as i64 - k as i64;
    let mut out = DoubleForm::zeros(p + k - l, q + k - l, m, omega.zero.clone());
    for r in 0..=k.min(l) {
        if l - r > p || l - r > q {
            continue;
        }
        let c = &(&Q::binomial(top, r as u32) * &falling(k, r)) * &falling(l, r);
        if c.is_zero() {
            continue;
        }
        let term = g.kn_pow(k - r)?.kn(&omega.contract_n_inv(l - r, &ginv))?;
        out = out.add(&term.scale(&c))?;
    }
    Ok(out)
}

fn falling(n: usize, r: usize) -> Q {
    (0..r).fold(Q::ONE, |acc, i| &acc * &Q::int((n - i) as i64))
}

/// Generalized Kronecker delta `δ^{upper}_{lower}` as a determinant.
pub fn generalized_kronecker(upper: &[usize], lower: &[usize]) -> Result<Q> {
    if upper.len() != lower.len() {
        return Err(Error::Dimension("index lists differ in length".into()));
    }
    let a: Vec<Vec<Q>> = upper
        .iter()
        .map(|u| lower.iter().map(|l| if u == l { Q::ONE } else { Q::ZERO }).collect())
        .collect();
    Ok(determinant(&a))
}

/// Rational metric `(1, 1)` form from a Gram matrix.
pub fn metric_form(g: &[Vec<Q>]) -> Result<DoubleForm<Q>> {
    DoubleForm::from_matrix(g)
}

/// Identity metric on `m` dimensions.
pub fn identity_metric(m: usize) -> DoubleForm<Q> {
    let a: Vec<Vec<Q>> = (0..m).map(|i| (0..m).map(|j| if i == j { Q::ONE } else { Q::ZERO }).collect()).collect();
    DoubleForm::from_matrix(&a).expect("square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn g_squared_components() {
        let g = identity_metric(3);
        let g2 = g.kn(&g).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let d = |a: usize, b: usize| if a == b { 1 } else { 0 };
                        let want = 2 * (d(i, k) * d(j, l) - d(i, l) * d(j, k));
                        if i != j && k != l {
                            assert_eq!(g2.get(&[i, j], &[k, l]), Q::int(want));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn product_with_zero() {
        let g = identity_metric(3);
        let z = DoubleForm::zeros(1, 1, 3, Q::ZERO);
        assert!(g.kn(&z).unwrap().is_zero());
    }

    #[test]
    fn trace_of_identity() {
        let g = identity_metric(4);
        let c = g.contract(&g).unwrap();
        assert_eq!(c.get(&[], &[]), Q::int(4));
    }

    #[test]
    fn contraction_of_empty_block_is_zero() {
        let mut w = DoubleForm::zeros(0, 2, 3, Q::ZERO);
        w.set(&[], &[0, 1], q(3, 1));
        let c = w.contract(&identity_metric(3)).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn contraction_of_g_squared() {
        for m in 2..6 {
            let g = identity_metric(m);
            let c = g.kn(&g).unwrap().contract(&g).unwrap();
            assert_eq!(c, g.scale(&Q::int(2 * m as i64 - 2)));
        }
    }

    #[test]
    fn formula_identity_case() {
        let g = identity_metric(3);
        let mut w = DoubleForm::zeros(1, 1, 3, Q::ZERO);
        w.set(&[0], &[2], q(5, 3));
        assert_eq!(contract_power_formula(0, 0, &w, &g).unwrap(), w);
    }

    #[test]
    fn kronecker_values() {
        assert_eq!(generalized_kronecker(&[1], &[1]).unwrap(), Q::ONE);
        assert_eq!(generalized_kronecker(&[1, 2], &[2, 1]).unwrap(), q(-1, 1));
        assert_eq!(generalized_kronecker(&[0, 1, 1], &[0, 1, 2]).unwrap(), Q::ZERO);
        assert!(generalized_kronecker(&[0], &[0, 1]).is_err());
    }

    #[test]
    fn forms_above_dimension_vanish() {
        let g = identity_metric(2);
        let g3 = g.kn_pow(3).unwrap();
        assert_eq!(g3.bidegree(), (3, 3));
        assert!(g3.is_zero());
        assert!(g3.components().is_empty());
    }

    #[test]
    fn mixed_trace_matches_contraction() {
        let g = metric_form(&[
            vec![q(2, 1), q(1, 2), Q::ZERO],
            vec![q(1, 2), q(3, 1), q(1, 3)],
            vec![Q::ZERO, q(1, 3), q(1, 1)],
        ])
        .unwrap();
        let ginv = metric_inverse(&g).unwrap();
        let mut w = DoubleForm::zeros(2, 2, 3, Q::ZERO);
        w.set(&[0, 1], &[0, 1], q(1, 1));
        w.set(&[0, 2], &[1, 2], q(-2, 3));
        w.set(&[1, 2], &[0, 2], q(5, 1));
        for l in 0..=2 {
            let a = w.contract_n_inv(l, &ginv).raise_second(&ginv);
            let b = w.raise_second(&ginv).trace_mixed(l);
            assert_eq!(a, b, "l = {l}");
        }
    }
}
