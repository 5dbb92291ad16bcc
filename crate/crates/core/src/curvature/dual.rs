use crate::ring::{DiffRing, Ring};
use crate::scalar::Q;

/// Dual numbers `a + ε b` with `ε² = 0` over a ring; the `b` part of a
/// computation is its exact directional derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<S> {
    pub a: S,
    pub b: S,
}

impl<S: Ring> Dual<S> {
    pub fn new(a: S, b: S) -> Dual<S> {
        Dual { a, b }
    }

    pub fn constant(a: S) -> Dual<S> {
        let b = a.zero_like();
        Dual { a, b }
    }
}

impl<S: Ring> Ring for Dual<S> {
    fn zero_like(&self) -> Self {
        Dual::constant(self.a.zero_like())
    }
    fn constant_like(&self, c: &Q) -> Self {
        Dual::constant(self.a.constant_like(c))
    }
    fn add(&self, o: &Self) -> Self {
        Dual { a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }
    fn sub(&self, o: &Self) -> Self {
        Dual { a: self.a.sub(&o.a), b: self.b.sub(&o.b) }
    }
    fn mul(&self, o: &Self) -> Self {
        let mut b = self.a.mul(&o.b);
        b.add_mul_assign(&self.b, &o.a);
        Dual { a: self.a.mul(&o.a), b }
    }
    fn neg(&self) -> Self {
        Dual { a: self.a.neg(), b: self.b.neg() }
    }
    fn scale(&self, c: &Q) -> Self {
        Dual { a: self.a.scale(c), b: self.b.scale(c) }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn try_inv(&self) -> Option<Self> {
        let ai = self.a.try_inv()?;
        let b = self.b.mul(&ai).mul(&ai).neg();
        Some(Dual { a: ai, b })
    }
    fn add_assign(&mut self, o: &Self) {
        self.a.add_assign(&o.a);
        self.b.add_assign(&o.b);
    }
    fn sub_assign(&mut self, o: &Self) {
        self.a.sub_assign(&o.a);
        self.b.sub_assign(&o.b);
    }
    fn add_mul_assign(&mut self, x: &Self, y: &Self) {
        self.b.add_mul_assign(&x.a, &y.b);
        self.b.add_mul_assign(&x.b, &y.a);
        self.a.add_mul_assign(&x.a, &y.a);
    }
    fn add_scaled_assign(&mut self, x: &Self, c: &Q) {
        self.a.add_scaled_assign(&x.a, c);
        self.b.add_scaled_assign(&x.b, c);
    }
}

impl<S: DiffRing> DiffRing for Dual<S> {
    fn diff(&self, var: usize) -> Self {
        Dual { a: self.a.diff(var), b: self.b.diff(var) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn inverse_derivative() {
        let x = Dual::new(q(2, 1), q(1, 1));
        let inv = x.try_inv().unwrap();
        assert_eq!(inv, Dual::new(q(1, 2), q(-1, 4)));
        assert_eq!(x.mul(&inv), x.one_like());
    }
}
