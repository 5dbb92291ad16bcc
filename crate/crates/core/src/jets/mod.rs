//! Truncated multivariate Taylor jets with exact rational coefficients.
//!
//! A [`ScalarJet`] stores every monomial of total degree at most `cap` in a
//! graded order shared through a cached [`Layout`]. Each jet also tracks the
//! degree through which its coefficients are known (`prec`); coefficients
//! above `prec` are kept at zero. Exact polynomials carry [`EXACT`].

mod tensor;
mod xjet;

pub use tensor::{determinant, is_positive_definite, Chart, MetricJet, TensorJet};
pub use xjet::XJet;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::ring::{DiffRing, Ring};
use crate::scalar::Q;

/// Precision marker for jets that are exact polynomials.
pub const EXACT: i32 = i32::MAX;

/// Monomial tables for a fixed number of variables and degree cap.
#[derive(Debug)]
pub struct Layout {
    pub nvars: usize,
    pub cap: u32,
    monos: Vec<Vec<u8>>,
    deg: Vec<u32>,
    deg_start: Vec<usize>,
    index: HashMap<Vec<u8>, usize>,
    mul: Vec<Vec<(u32, u32)>>,
    diff: Vec<Vec<Option<(u32, u8)>>>,
}

impl Layout {
    /// Shared layout for `(nvars, cap)`.
    pub fn get(nvars: usize, cap: u32) -> Arc<Layout> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<Layout>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("layout cache poisoned");
        guard
            .entry((nvars, cap))
            .or_insert_with(|| Arc::new(Layout::build(nvars, cap)))
            .clone()
    }

    fn build(nvars: usize, cap: u32) -> Layout {
        let mut monos: Vec<Vec<u8>> = Vec::new();
        let mut deg_start = Vec::new();
        for d in 0..=cap {
            deg_start.push(monos.len());
            let mut cur = vec![0u8; nvars];
            push_degree(&mut monos, &mut cur, 0, d);
        }
        deg_start.push(monos.len());
        let deg: Vec<u32> = monos.iter().map(|e| e.iter().map(|&x| x as u32).sum()).collect();
        let index: HashMap<Vec<u8>, usize> =
            monos.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let mut mul = Vec::with_capacity(monos.len());
        for (i, a) in monos.iter().enumerate() {
            let mut row = Vec::new();
            for (j, b) in monos[..deg_start[(cap - deg[i]) as usize + 1]].iter().enumerate() {
                let s: Vec<u8> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                row.push((j as u32, index[&s] as u32));
            }
            mul.push(row);
        }
        let diff = (0..nvars)
            .map(|v| {
                monos
                    .iter()
                    .map(|e| {
                        if e[v] == 0 {
                            None
                        } else {
                            let mut t = e.clone();
                            t[v] -= 1;
                            Some((index[&t] as u32, e[v]))
                        }
                    })
                    .collect()
            })
            .collect();
        Layout { nvars, cap, monos, deg, deg_start, index, mul, diff }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn exponents(&self, i: usize) -> &[u8] {
        &self.monos[i]
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.deg[i]
    }

    pub fn index_of(&self, exps: &[u8]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    /// Number of monomials of degree at most `d` (clamped to the cap).
    fn upto(&self, d: i32) -> usize {
        if d < 0 {
            0
        } else if d as u32 >= self.cap {
            self.monos.len()
        } else {
            self.deg_start[d as usize + 1]
        }
    }
}

fn push_degree(out: &mut Vec<Vec<u8>>, cur: &mut Vec<u8>, pos: usize, left: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = left as u8;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for k in (0..=left).rev() {
        cur[pos] = k as u8;
        push_degree(out, cur, pos + 1, left - k);
    }
    cur[pos] = 0;
}

/// Truncated Taylor expansion in `nvars` variables.
#[derive(Clone)]
pub struct ScalarJet {
    lay: Arc<Layout>,
    c: Vec<Q>,
    prec: i32,
}

impl std::fmt::Debug for ScalarJet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (v, &e) in self.lay.monos[i].iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*t{v}")?,
                    _ => write!(f, "*t{v}^{e}")?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        if self.prec == EXACT {
            write!(f, " [exact]")
        } else {
            write!(f, " + O({})", self.prec + 1)
        }
    }
}

impl PartialEq for ScalarJet {
    fn eq(&self, o: &ScalarJet) -> bool {
        self.lay.nvars == o.lay.nvars && self.lay.cap == o.lay.cap && self.c == o.c
    }
}

fn sat_add(a: i32, b: i32) -> i32 {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        a.saturating_add(b)
    }
}

impl ScalarJet {
    pub fn zero(nvars: usize, cap: u32) -> ScalarJet {
        let lay = Layout::get(nvars, cap);
        let c = vec![Q::ZERO; lay.len()];
        ScalarJet { lay, c, prec: EXACT }
    }

    pub fn constant(nvars: usize, cap: u32, v: Q) -> ScalarJet {
        let mut j = ScalarJet::zero(nvars, cap);
        j.c[0] = v;
        j
    }

    /// The coordinate function `t_var`.
    pub fn var(nvars: usize, cap: u32, var: usize) -> ScalarJet {
        let mut j = ScalarJet::zero(nvars, cap);
        if cap >= 1 {
            let mut e = vec![0u8; nvars];
            e[var] = 1;
            let i = j.lay.index[&e];
            j.c[i] = Q::ONE;
        } else {
            j.prec = 0;
        }
        j
    }

    /// Exact polynomial from `(exponents, coefficient)` terms; terms above the
    /// cap are dropped and the result is marked as truncated.
    pub fn from_terms(nvars: usize, cap: u32, terms: &[(Vec<u8>, Q)]) -> Result<ScalarJet> {
        let mut j = ScalarJet::zero(nvars, cap);
        for (e, v) in terms {
            if e.len() != nvars {
                return Err(Error::Dimension(format!(
                    "monomial has {} exponents, expected {nvars}",
                    e.len()
                )));
            }
            match j.lay.index.get(e) {
                Some(&i) => j.c[i] += v,
                None => j.prec = j.prec.min(cap as i32),
            }
        }
        Ok(j)
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.lay
    }

    pub fn nvars(&self) -> usize {
        self.lay.nvars
    }

    pub fn cap(&self) -> u32 {
        self.lay.cap
    }

    /// Degree through which coefficients are known ([`EXACT`] for polynomials).
    pub fn prec(&self) -> i32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    /// Marks the jet as known only through degree `p` and clears higher terms.
    pub fn truncated(mut self, p: i32) -> ScalarJet {
        if p < self.prec {
            self.prec = p;
            let k = self.lay.upto(p);
            for c in &mut self.c[k..] {
                *c = Q::ZERO;
            }
        }
        self
    }

    /// Treats the stored coefficients as an exact polynomial.
    pub fn assume_exact(mut self) -> ScalarJet {
        self.prec = EXACT;
        self
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn coeff(&self, exps: &[u8]) -> Q {
        self.lay.index.get(exps).map(|&i| self.c[i].clone()).unwrap_or(Q::ZERO)
    }

    pub fn set_coeff(&mut self, exps: &[u8], v: Q) {
        let i = self.lay.index[exps];
        self.c[i] = v;
    }

    pub fn constant_term(&self) -> &Q {
        &self.c[0]
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn order(&self) -> Option<u32> {
        self.c.iter().position(|c| !c.is_zero()).map(|i| self.lay.deg[i])
    }

    fn ord_i32(&self) -> i32 {
        self.order().map(|d| d as i32).unwrap_or(EXACT)
    }

    fn top_degree(&self) -> i32 {
        self.c.iter().rposition(|c| !c.is_zero()).map(|i| self.lay.deg[i] as i32).unwrap_or(-1)
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero_jet(&self) -> bool {
        self.c.iter().all(Q::is_zero)
    }

    pub fn same_layout(&self, o: &ScalarJet) -> bool {
        Arc::ptr_eq(&self.lay, &o.lay)
    }

    fn check(&self, o: &ScalarJet) {
        assert!(
            self.same_layout(o),
            "jet layout mismatch: ({}, cap {}) vs ({}, cap {})",
            self.lay.nvars,
            self.lay.cap,
            o.lay.nvars,
            o.lay.cap
        );
    }

    /// Checked product; mixing caps or variable counts is an error.
    pub fn try_mul(&self, o: &ScalarJet) -> Result<ScalarJet> {
        if !self.same_layout(o) {
            return Err(Error::CapMismatch {
                left: (self.lay.nvars, self.lay.cap),
                right: (o.lay.nvars, o.lay.cap),
            });
        }
        Ok(self.mul_jet(o))
    }

    /// Checked sum; mixing caps or variable counts is an error.
    pub fn try_add(&self, o: &ScalarJet) -> Result<ScalarJet> {
        if !self.same_layout(o) {
            return Err(Error::CapMismatch {
                left: (self.lay.nvars, self.lay.cap),
                right: (o.lay.nvars, o.lay.cap),
            });
        }
        Ok(self.add_jet(o))
    }

    fn product_prec(&self, o: &ScalarJet) -> i32 {
        let cap = self.lay.cap as i32;
        if self.prec == EXACT && o.prec == EXACT {
            let (da, db) = (self.top_degree(), o.top_degree());
            if da < 0 || db < 0 || da + db <= cap {
                return EXACT;
            }
            return cap;
        }
        cap.min(sat_add(self.prec, o.ord_i32())).min(sat_add(o.prec, self.ord_i32()))
    }

    fn accumulate_product(&mut self, a: &ScalarJet, b: &ScalarJet, p: i32) {
        let lay = &*a.lay;
        for (i, ai) in a.c.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let di = lay.deg[i] as i32;
            if di > p {
                break;
            }
            let lim = lay.upto(p - di);
            for &(j, k) in &lay.mul[i] {
                if j as usize >= lim {
                    break;
                }
                let bj = &b.c[j as usize];
                if bj.is_zero() {
                    continue;
                }
                self.c[k as usize] += &(ai * bj);
            }
        }
    }

    fn mul_jet(&self, o: &ScalarJet) -> ScalarJet {
        self.check(o);
        let p = self.product_prec(o);
        let mut out = ScalarJet { lay: self.lay.clone(), c: vec![Q::ZERO; self.c.len()], prec: p };
        if self.is_zero_jet() || o.is_zero_jet() {
            return out;
        }
        out.accumulate_product(self, o, p);
        out
    }

    fn add_jet(&self, o: &ScalarJet) -> ScalarJet {
        self.check(o);
        let p = self.prec.min(o.prec);
        let k = self.lay.upto(p);
        let mut c = vec![Q::ZERO; self.c.len()];
        for i in 0..k {
            c[i] = &self.c[i] + &o.c[i];
        }
        ScalarJet { lay: self.lay.clone(), c, prec: p }
    }

    /// Formal partial derivative in variable `var`.
    pub fn d(&self, var: usize) -> ScalarJet {
        let mut c = vec![Q::ZERO; self.c.len()];
        for (i, t) in self.lay.diff[var].iter().enumerate() {
            if let Some((k, f)) = t {
                if !self.c[i].is_zero() {
                    c[*k as usize] = &self.c[i] * &Q::int(*f as i64);
                }
            }
        }
        let prec = if self.prec == EXACT { EXACT } else { self.prec - 1 };
        ScalarJet { lay: self.lay.clone(), c, prec }.truncated(prec)
    }

    /// Multiplicative inverse, requiring a nonzero constant term.
    pub fn inverse(&self) -> Result<ScalarJet> {
        let a0 = self.c[0].recip().ok_or(Error::Singular("jet with zero constant term".into()))?;
        // a = a0^{-1}(1 - r) with r of positive order; 1/a = a0^{-1} Σ r^k.
        let mut r = self.scale_q(&-&a0);
        r.c[0] = Q::ZERO;
        if r.prec == EXACT && r.is_zero_jet() {
            return Ok(ScalarJet::constant(self.nvars(), self.cap(), a0));
        }
        let mut r = r.truncated(self.lay.cap as i32);
        r.prec = r.prec.min(self.lay.cap as i32);
        let one = ScalarJet::constant(self.nvars(), self.cap(), Q::ONE);
        let mut sum = one.clone();
        let mut pw = one;
        for _ in 0..self.lay.cap {
            pw = pw.mul_jet(&r);
            if pw.is_zero_jet() {
                break;
            }
            sum = sum.add_jet(&pw);
        }
        sum.prec = sum.prec.min(r.prec).min(self.lay.cap as i32);
        Ok(sum.scale_q(&a0))
    }

    pub fn scale_q(&self, s: &Q) -> ScalarJet {
        if s.is_zero() {
            return ScalarJet::zero(self.nvars(), self.cap());
        }
        ScalarJet { lay: self.lay.clone(), c: self.c.iter().map(|c| c * s).collect(), prec: self.prec }
    }

    /// Multiplies by `t_var^k`.
    pub fn shift(&self, var: usize, k: u32) -> ScalarJet {
        let mut e = vec![0u8; self.nvars()];
        e[var] = k as u8;
        let mono = match self.lay.index.get(&e) {
            Some(_) => ScalarJet::from_terms(self.nvars(), self.cap(), &[(e, Q::ONE)]).unwrap(),
            None => ScalarJet::zero(self.nvars(), self.cap()).truncated(self.cap() as i32),
        };
        self.mul_jet(&mono)
    }

    /// Coefficient of `t_var^k` as a jet in the remaining variables
    /// (same layout, exponent of `var` zero). Precision drops by `k`.
    pub fn coeff_in(&self, var: usize, k: u32) -> ScalarJet {
        let mut c = vec![Q::ZERO; self.c.len()];
        let mut e = vec![0u8; self.nvars()];
        for (i, mono) in self.lay.monos.iter().enumerate() {
            if mono[var] as u32 == k && !self.c[i].is_zero() {
                e.copy_from_slice(mono);
                e[var] = 0;
                c[self.lay.index[&e]] = self.c[i].clone();
            }
        }
        let prec = if self.prec == EXACT { EXACT } else { self.prec - k as i32 };
        ScalarJet { lay: self.lay.clone(), c, prec }.truncated(prec)
    }

    /// Lowest power of `var` with a nonzero known coefficient, scanning
    /// powers `0..=max_k`; `None` if all those coefficients vanish.
    pub fn lowest_power_in(&self, var: usize, max_k: u32) -> Option<u32> {
        (0..=max_k).find(|&k| !self.coeff_in(var, k).is_zero_jet())
    }

    /// Substitutes zero for every variable and returns the constant.
    pub fn at_origin(&self) -> Q {
        self.c[0].clone()
    }

    /// Evaluates the stored polynomial at a rational point.
    pub fn eval(&self, pt: &[Q]) -> Q {
        let mut acc = Q::ZERO;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut t = c.clone();
            for (v, &e) in self.lay.monos[i].iter().enumerate() {
                if e > 0 {
                    t = &t * &pt[v].pow(e as i32);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Floating point evaluation of the stored polynomial.
    pub fn eval_f64(&self, pt: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut t = c.to_f64();
            for (v, &e) in self.lay.monos[i].iter().enumerate() {
                t *= pt[v].powi(e as i32);
            }
            acc += t;
        }
        acc
    }

    /// Nonzero terms as `(exponents, coefficient)`.
    pub fn terms(&self) -> Vec<(Vec<u8>, Q)> {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.lay.monos[i].clone(), c.clone()))
            .collect()
    }

    /// Re-expresses the jet in a layout with a different cap, keeping the
    /// coefficients that fit.
    pub fn with_cap(&self, cap: u32) -> ScalarJet {
        let mut out = ScalarJet::zero(self.nvars(), cap);
        for (e, v) in self.terms() {
            if let Some(&i) = out.lay.index.get(&e) {
                out.c[i] = v;
            }
        }
        out.prec = if self.prec == EXACT && self.top_degree() <= cap as i32 {
            EXACT
        } else {
            self.prec.min(cap as i32)
        };
        let p = out.prec;
        out.truncated(p)
    }
}

impl Ring for ScalarJet {
    fn zero_like(&self) -> ScalarJet {
        ScalarJet::zero(self.nvars(), self.cap())
    }
    fn constant_like(&self, c: &Q) -> ScalarJet {
        ScalarJet::constant(self.nvars(), self.cap(), c.clone())
    }
    fn add(&self, o: &ScalarJet) -> ScalarJet {
        self.add_jet(o)
    }
    fn sub(&self, o: &ScalarJet) -> ScalarJet {
        self.add_jet(&o.scale_q(&Q::int(-1)))
    }
    fn mul(&self, o: &ScalarJet) -> ScalarJet {
        self.mul_jet(o)
    }
    fn neg(&self) -> ScalarJet {
        self.scale_q(&Q::int(-1))
    }
    fn scale(&self, c: &Q) -> ScalarJet {
        self.scale_q(c)
    }
    fn is_zero(&self) -> bool {
        self.is_zero_jet()
    }
    fn try_inv(&self) -> Option<ScalarJet> {
        self.inverse().ok()
    }
    fn add_assign(&mut self, o: &ScalarJet) {
        self.check(o);
        let p = self.prec.min(o.prec);
        let k = self.lay.upto(p);
        for i in 0..k {
            if !o.c[i].is_zero() {
                self.c[i] += &o.c[i];
            }
        }
        *self = std::mem::replace(self, ScalarJet::zero(0, 0)).truncated(p);
    }
    fn add_mul_assign(&mut self, a: &ScalarJet, b: &ScalarJet) {
        self.check(a);
        self.check(b);
        let p = a.product_prec(b).min(self.prec);
        if p < self.prec {
            *self = std::mem::replace(self, ScalarJet::zero(0, 0)).truncated(p);
        }
        if a.is_zero_jet() || b.is_zero_jet() {
            return;
        }
        self.accumulate_product(a, b, p);
    }
    fn add_scaled_assign(&mut self, a: &ScalarJet, s: &Q) {
        self.check(a);
        let p = if s.is_zero() { self.prec } else { self.prec.min(a.prec) };
        let k = self.lay.upto(p);
        if !s.is_zero() {
            for i in 0..k {
                if !a.c[i].is_zero() {
                    self.c[i] += &(&a.c[i] * s);
                }
            }
        }
        *self = std::mem::replace(self, ScalarJet::zero(0, 0)).truncated(p);
    }
}

impl DiffRing for ScalarJet {
    fn diff(&self, var: usize) -> ScalarJet {
        self.d(var)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use proptest::prelude::*;

    fn t(cap: u32) -> ScalarJet {
        ScalarJet::var(1, cap, 0)
    }

    fn one(nv: usize, cap: u32) -> ScalarJet {
        ScalarJet::constant(nv, cap, Q::ONE)
    }

    #[test]
    fn layout_counts() {
        assert_eq!(Layout::get(5, 6).len(), 462);
        assert_eq!(Layout::get(1, 3).len(), 4);
        assert_eq!(Layout::get(0, 3).len(), 1);
    }

    #[test]
    fn product_of_conjugates() {
        let a = one(1, 2).add(&t(2));
        let b = one(1, 2).sub(&t(2));
        let p = a.mul(&b);
        assert_eq!(p.coeff(&[0]), Q::ONE);
        assert_eq!(p.coeff(&[1]), Q::ZERO);
        assert_eq!(p.coeff(&[2]), q(-1, 1));
        assert!(p.is_exact());
    }

    #[test]
    fn identity_product() {
        let a = ScalarJet::from_terms(2, 3, &[(vec![1, 1], q(3, 2)), (vec![0, 2], q(-1, 3))]).unwrap();
        assert_eq!(a.mul(&one(2, 3)), a);
    }

    #[test]
    fn geometric_series_inverse() {
        let inv = one(1, 3).add(&t(3)).inverse().unwrap();
        for (k, v) in [1, -1, 1, -1].iter().enumerate() {
            assert_eq!(inv.coeff(&[k as u8]), Q::int(*v));
        }
        assert_eq!(inv.prec(), 3);
    }

    #[test]
    fn constant_inverse() {
        let inv = ScalarJet::constant(2, 3, Q::int(2)).inverse().unwrap();
        assert_eq!(inv.at_origin(), q(1, 2));
        assert!(inv.is_exact());
    }

    #[test]
    fn zero_constant_term_is_singular() {
        assert!(matches!(t(3).inverse(), Err(Error::Singular(_))));
    }

    #[test]
    fn derivative_basics() {
        let t2 = t(3).mul(&t(3));
        let d = t2.d(0);
        assert_eq!(d.coeff(&[1]), Q::int(2));
        assert!(d.is_exact());
        assert!(ScalarJet::constant(1, 3, Q::int(5)).d(0).is_zero_jet());
    }

    #[test]
    fn mixing_caps_is_an_error() {
        let a = one(1, 2);
        let b = one(1, 3);
        assert!(matches!(a.try_mul(&b), Err(Error::CapMismatch { .. })));
        assert!(matches!(a.try_add(&b), Err(Error::CapMismatch { .. })));
    }

    #[test]
    fn precision_tracking() {
        let x = t(4);
        let inv = one(1, 4).add(&x).inverse().unwrap();
        assert_eq!(inv.prec(), 4);
        // x^2 * (1+x)^{-1} is known through degree 4 + 2, clamped to the cap.
        let p = x.mul(&x).mul(&inv);
        assert_eq!(p.prec(), 4);
        assert_eq!(p.d(0).prec(), 3);
        assert_eq!(p.coeff_in(0, 2).prec(), 2);
    }

    fn arb_jet(nv: usize, cap: u32) -> impl Strategy<Value = ScalarJet> {
        let n = Layout::get(nv, cap).len();
        proptest::collection::vec(-4i64..=4, n).prop_map(move |v| {
            let lay = Layout::get(nv, cap);
            let terms: Vec<_> =
                v.iter().enumerate().map(|(i, &c)| (lay.exponents(i).to_vec(), q(c, 2))).collect();
            ScalarJet::from_terms(nv, cap, &terms).unwrap()
        })
    }

    /// Brute-force convolution over explicit exponent vectors.
    fn convolve(a: &ScalarJet, b: &ScalarJet) -> HashMap<Vec<u8>, Q> {
        let mut out: HashMap<Vec<u8>, Q> = HashMap::new();
        for (ea, ca) in a.terms() {
            for (eb, cb) in b.terms() {
                let e: Vec<u8> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
                if e.iter().map(|&x| x as u32).sum::<u32>() <= a.cap() {
                    *out.entry(e).or_default() += &(&ca * &cb);
                }
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn product_matches_convolution(a in arb_jet(2, 3), b in arb_jet(2, 3)) {
            let p = a.mul(&b);
            let oracle = convolve(&a, &b);
            for (e, c) in p.terms() {
                prop_assert_eq!(oracle.get(&e).cloned().unwrap_or_default(), c);
            }
            for (e, c) in oracle {
                prop_assert_eq!(p.coeff(&e), c);
            }
        }

        #[test]
        fn ring_axioms(a in arb_jet(2, 3), b in arb_jet(2, 3), c in arb_jet(2, 3)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }

        #[test]
        fn product_rule(a in arb_jet(2, 4), b in arb_jet(2, 4)) {
            let lhs = a.mul(&b).d(1);
            let rhs = a.mul(&b.d(1)).add(&b.mul(&a.d(1)));
            // both sides are known through cap - 1
            prop_assert_eq!(lhs.truncated(3), rhs.truncated(3));
        }

        #[test]
        fn inverse_is_inverse(a in arb_jet(2, 3)) {
            let a = a.add(&ScalarJet::constant(2, 3, Q::int(3)));
            prop_assume!(!a.at_origin().is_zero());
            let inv = a.inverse().unwrap();
            let p = a.mul(&inv);
            prop_assert_eq!(p, one(2, 3));
        }

        #[test]
        fn partials_commute(a in arb_jet(3, 4)) {
            prop_assert_eq!(a.d(0).d(2), a.d(2).d(0));
        }

        #[test]
        fn add_mul_assign_agrees(a in arb_jet(2, 3), b in arb_jet(2, 3), c in arb_jet(2, 3)) {
            let mut acc = c.clone();
            acc.add_mul_assign(&a, &b);
            prop_assert_eq!(acc, c.add(&a.mul(&b)));
        }
    }
}
