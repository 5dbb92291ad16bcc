//! Commutative ring interface shared by exact scalars and jets.

use std::fmt::Debug;

use crate::scalar::Q;

/// A commutative ring with a rational scalar action.
///
/// Jets need a layout to build constants, so constructors go through an
/// existing value (`zero_like`, `one_like`, `constant_like`).
pub trait Ring: Clone + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn constant_like(&self, c: &Q) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Q) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse when the value is a unit.
    fn try_inv(&self) -> Option<Self>;

    fn one_like(&self) -> Self {
        self.constant_like(&Q::ONE)
    }

    fn add_assign(&mut self, o: &Self) {
        *self = Ring::add(self, o);
    }

    fn sub_assign(&mut self, o: &Self) {
        *self = Ring::sub(self, o);
    }

    /// `self += a * b`.
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = Ring::add(self, &Ring::mul(a, b));
    }

    /// `self += c * a`.
    fn add_scaled_assign(&mut self, a: &Self, c: &Q) {
        *self = Ring::add(self, &a.scale(c));
    }
}

/// Rings carrying formal partial derivatives in chart variables.
pub trait DiffRing: Ring {
    fn diff(&self, var: usize) -> Self;
}

impl Ring for Q {
    fn zero_like(&self) -> Q {
        Q::ZERO
    }
    fn constant_like(&self, c: &Q) -> Q {
        c.clone()
    }
    fn add(&self, o: &Q) -> Q {
        self + o
    }
    fn sub(&self, o: &Q) -> Q {
        self - o
    }
    fn mul(&self, o: &Q) -> Q {
        self * o
    }
    fn neg(&self) -> Q {
        -self
    }
    fn scale(&self, c: &Q) -> Q {
        self * c
    }
    fn is_zero(&self) -> bool {
        Q::is_zero(self)
    }
    fn try_inv(&self) -> Option<Q> {
        self.recip()
    }
    fn add_assign(&mut self, o: &Q) {
        *self += o;
    }
    fn add_mul_assign(&mut self, a: &Q, b: &Q) {
        if !a.is_zero() && !b.is_zero() {
            *self += &(a * b);
        }
    }
}

impl DiffRing for Q {
    fn diff(&self, _var: usize) -> Q {
        Q::ZERO
    }
}

/// Dense square matrix inverse over a ring by Gauss–Jordan elimination.
///
/// Pivots are searched for units; returns `None` if no unit pivot exists in
/// some column.
pub fn invert_matrix<S: Ring>(a: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let n = a.len();
    let mut m: Vec<Vec<S>> = a.to_vec();
    let z = a.first()?.first()?.zero_like();
    let mut inv: Vec<Vec<S>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { z.one_like() } else { z.clone() }).collect())
        .collect();
    for col in 0..n {
        let (piv, pinv) = (col..n).find_map(|r| m[r][col].try_inv().map(|v| (r, v)))?;
        m.swap(col, piv);
        inv.swap(col, piv);
        for j in 0..n {
            m[col][j] = m[col][j].mul(&pinv);
            inv[col][j] = inv[col][j].mul(&pinv);
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..n {
                let t = m[col][j].mul(&f);
                m[r][j].sub_assign(&t);
                let t = inv[col][j].mul(&f);
                inv[r][j].sub_assign(&t);
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn rational_matrix_inverse() {
        let a = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(3, 1)]];
        let inv = invert_matrix(&a).unwrap();
        assert_eq!(inv[0][0], q(3, 5));
        assert_eq!(inv[0][1], q(-1, 5));
        assert_eq!(inv[1][1], q(2, 5));
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert!(invert_matrix(&a).is_none());
    }
}
