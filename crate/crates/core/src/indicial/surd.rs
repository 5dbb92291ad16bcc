use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::Q;

/// `a + b √d` with rational `a`, `b` and a square-free integer `d`; a
/// negative `d` stands for `i √|d|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Surd {
    pub rational: Q,
    pub coeff: Q,
    pub radicand: BigInt,
}

fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    // n = s² · r with r square-free (trial division, then a perfect-square test)
    let mut r = n.abs();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= r && p <= limit {
        let p2 = &p * &p;
        while (&r % &p2).is_zero() {
            r /= &p2;
            s *= &p;
        }
        p += 1u32;
    }
    let root = r.sqrt();
    if &root * &root == r {
        s *= &root;
        r = BigInt::one();
    }
    if n.is_negative() {
        r = -r;
    }
    (s, r)
}

impl Surd {
    pub fn rational(a: Q) -> Surd {
        Surd { rational: a, coeff: Q::ZERO, radicand: BigInt::one() }
    }

    /// `a + b √d` for rational `d`, normalized.
    pub fn new(a: Q, b: Q, d: &Q) -> Surd {
        if b.is_zero() || d.is_zero() {
            return Surd::rational(a);
        }
        // √(p/q) = √(p q)/q
        let (s, r) = squarefree_split(&(d.numer() * d.denom()));
        let coeff = &b * &(&Q::from_bigint(s) / &Q::from_bigint(d.denom()));
        if r.is_one() {
            return Surd::rational(&a + &coeff);
        }
        Surd { rational: a, coeff, radicand: r }
    }

    /// `√d`.
    pub fn sqrt(d: &Q) -> Surd {
        Surd::new(Q::ZERO, Q::ONE, d)
    }

    pub fn is_rational(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.is_rational() || self.radicand.is_positive()
    }

    pub fn as_rational(&self) -> Option<Q> {
        self.is_rational().then(|| self.rational.clone())
    }

    /// `(re, im)` in floating point.
    pub fn to_complex(&self) -> (f64, f64) {
        let a = self.rational.to_f64();
        if self.is_rational() {
            return (a, 0.0);
        }
        let r = self.radicand.abs().to_f64().unwrap_or(f64::INFINITY).sqrt() * self.coeff.to_f64();
        if self.radicand.is_negative() {
            (a, r)
        } else {
            (a + r, 0.0)
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.is_real().then(|| self.to_complex().0)
    }

    /// Square of the surd part, `b² d`.
    pub fn radical_square(&self) -> Q {
        &(&self.coeff * &self.coeff) * &Q::from_bigint(self.radicand.clone())
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.rational);
        }
        let imag = self.radicand.is_negative();
        let r = self.radicand.abs();
        let unit = match (imag, r.is_one()) {
            (true, true) => "i".to_string(),
            (true, false) => format!("i√{r}"),
            (false, _) => format!("√{r}"),
        };
        let b = self.coeff.abs();
        let term = match (b.is_one(), b.is_integer()) {
            (true, _) => unit,
            (false, true) => format!("{b}{unit}"),
            (false, false) => format!("({b}){unit}"),
        };
        let neg = self.coeff.signum() < 0;
        match (self.rational.is_zero(), neg) {
            (true, false) => write!(f, "{term}"),
            (true, true) => write!(f, "-{term}"),
            (false, false) => write!(f, "{} + {term}", self.rational),
            (false, true) => write!(f, "{} - {term}", self.rational),
        }
    }
}

/// Wire form: `rational + rational_factor · √square_free`, all as strings.
#[derive(Serialize, Deserialize)]
struct SurdRepr {
    rational: Q,
    rational_factor: Q,
    square_free: String,
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SurdRepr {
            rational: self.rational.clone(),
            rational_factor: self.coeff.clone(),
            square_free: self.radicand.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Surd {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Surd, D::Error> {
        let r = SurdRepr::deserialize(d)?;
        let rad: BigInt = r.square_free.parse().map_err(serde::de::Error::custom)?;
        Ok(Surd::new(r.rational, r.rational_factor, &Q::from_bigint(rad)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn normalization() {
        assert_eq!(Surd::sqrt(&Q::int(48)).to_string(), "4√3");
        assert_eq!(Surd::sqrt(&Q::int(16)).as_rational(), Some(Q::int(4)));
        assert_eq!(Surd::sqrt(&q(1, 2)).to_string(), "(1/2)√2");
        assert_eq!(Surd::new(Q::int(2), Q::ONE, &Q::int(-1)).to_string(), "2 + i");
        assert_eq!(Surd::new(Q::ZERO, Q::int(-1), &Q::int(12)).to_string(), "-2√3");
        assert_eq!(Surd::sqrt(&Q::int(12)).radical_square(), Q::int(12));
    }

    #[test]
    fn floats() {
        assert!((Surd::sqrt(&Q::int(2)).to_f64().unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(Surd::sqrt(&Q::int(-4)).to_f64(), None);
        assert_eq!(Surd::sqrt(&Q::int(-4)).to_complex(), (0.0, 2.0));
    }
}
