use crate::error::{Error, Result};
use crate::jets::ScalarJet;
use crate::ring::{DiffRing, Ring};
use crate::scalar::Q;

/// Jet with a single `log x` slot: `plain + log(x) * log`, where `x` is
/// jet variable 0.
///
/// A `log²` part is not represented: when two log parts multiply, the result
/// loses precision from the lowest degree of their product on. A product that
/// would keep nothing at all panics through the [`Ring`] interface (use
/// [`XJet::try_mul`] for a recoverable error).
#[derive(Clone, Debug, PartialEq)]
pub struct XJet {
    pub plain: ScalarJet,
    pub log: ScalarJet,
}

impl XJet {
    pub fn from_plain(plain: ScalarJet) -> XJet {
        let log = plain.zero_like();
        XJet { plain, log }
    }

    pub fn new(plain: ScalarJet, log: ScalarJet) -> XJet {
        XJet { plain, log }
    }

    pub fn try_mul(&self, o: &XJet) -> Result<XJet> {
        let ll = self.log.mul(&o.log);
        let known = known_below(&ll)?;
        let mut log = self.plain.mul(&o.log);
        log.add_mul_assign(&self.log, &o.plain);
        let plain = self.plain.mul(&o.plain).truncated(known);
        Ok(XJet { plain, log: log.truncated(known) })
    }

    /// Coefficient of `x^k` in both slots.
    pub fn coeff_x(&self, k: u32) -> (ScalarJet, ScalarJet) {
        (self.plain.coeff_in(0, k), self.log.coeff_in(0, k))
    }
}

/// Degree from which a dropped `log²` part makes coefficients unknown.
fn known_below(ll: &ScalarJet) -> Result<i32> {
    match ll.order() {
        Some(0) => Err(Error::LogSquared),
        Some(d) => Ok((d as i32).min(ll.prec())),
        None => Ok(ll.prec()),
    }
}

/// Divides by the variable `var`; the jet must have no `var`-free terms.
pub(crate) fn div_var(a: &ScalarJet, var: usize) -> Result<ScalarJet> {
    if !a.coeff_in(var, 0).is_zero_jet() {
        return Err(Error::NotDivisible);
    }
    let nv = a.nvars();
    let mut terms = Vec::new();
    for (mut e, c) in a.terms() {
        e[var] -= 1;
        terms.push((e, c));
    }
    let out = ScalarJet::from_terms(nv, a.cap(), &terms)?;
    Ok(if a.is_exact() { out } else { out.truncated(a.prec() - 1) })
}

impl Ring for XJet {
    fn zero_like(&self) -> XJet {
        XJet::from_plain(self.plain.zero_like())
    }
    fn constant_like(&self, c: &Q) -> XJet {
        XJet::from_plain(self.plain.constant_like(c))
    }
    fn add(&self, o: &XJet) -> XJet {
        XJet { plain: self.plain.add(&o.plain), log: self.log.add(&o.log) }
    }
    fn sub(&self, o: &XJet) -> XJet {
        XJet { plain: self.plain.sub(&o.plain), log: self.log.sub(&o.log) }
    }
    fn mul(&self, o: &XJet) -> XJet {
        if self.log.is_zero_jet() && o.log.is_zero_jet() && self.log.is_exact() && o.log.is_exact() {
            return XJet::from_plain(self.plain.mul(&o.plain));
        }
        match self.try_mul(o) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }
    fn neg(&self) -> XJet {
        XJet { plain: self.plain.neg(), log: self.log.neg() }
    }
    fn scale(&self, c: &Q) -> XJet {
        XJet { plain: self.plain.scale(c), log: self.log.scale(c) }
    }
    fn is_zero(&self) -> bool {
        self.plain.is_zero_jet() && self.log.is_zero_jet()
    }
    fn try_inv(&self) -> Option<XJet> {
        let a = self.plain.inverse().ok()?;
        if self.log.is_zero_jet() && self.log.is_exact() {
            return Some(XJet::from_plain(a));
        }
        let known = known_below(&self.log.mul(&self.log)).ok()?;
        let log = self.log.mul(&a).mul(&a).neg().truncated(known);
        Some(XJet { plain: a.truncated(known), log })
    }
    fn add_assign(&mut self, o: &XJet) {
        self.plain.add_assign(&o.plain);
        self.log.add_assign(&o.log);
    }
    fn add_mul_assign(&mut self, a: &XJet, b: &XJet) {
        if a.log.is_zero_jet() && b.log.is_zero_jet() && a.log.is_exact() && b.log.is_exact() {
            self.plain.add_mul_assign(&a.plain, &b.plain);
            return;
        }
        let p = a.mul(b);
        self.add_assign(&p);
    }
    fn add_scaled_assign(&mut self, a: &XJet, c: &Q) {
        self.plain.add_scaled_assign(&a.plain, c);
        self.log.add_scaled_assign(&a.log, c);
    }
}

impl DiffRing for XJet {
    fn diff(&self, var: usize) -> XJet {
        let mut plain = self.plain.d(var);
        let log = self.log.d(var);
        if var == 0 && !(self.log.is_zero_jet() && self.log.is_exact()) {
            let q = div_var(&self.log, 0).unwrap_or_else(|e| panic!("{e}"));
            plain.add_assign(&q);
        }
        XJet { plain, log }
    }
}
