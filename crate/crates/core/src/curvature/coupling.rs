use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Q;

/// Coupling constants `α_q` (or `β_q`) with asymptotic curvature `κ`, for
/// boundary dimension `n` (bulk dimension `n + 1`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingVector {
    pub n: usize,
    /// `alpha[q - 1] = α_q`.
    pub alpha: Vec<Q>,
    pub kappa: Q,
}

fn fact(k: i64) -> Q {
    assert!(k >= 0, "factorial of a negative number");
    Q::factorial(k as u32)
}

impl CouplingVector {
    pub fn new(n: usize, alpha: Vec<Q>, kappa: Q) -> Result<CouplingVector> {
        if n < 2 {
            return Err(Error::Invalid("boundary dimension must be at least 2".into()));
        }
        if alpha.iter().all(Q::is_zero) {
            return Err(Error::Invalid("coupling vector is zero".into()));
        }
        if let Some(q) = alpha.iter().rposition(|a| !a.is_zero()).map(|i| i + 1) {
            if 2 * q > n {
                return Err(Error::Invalid(format!("α_{q} is nonzero but 2q > n = {n}")));
            }
        }
        if kappa.signum() <= 0 {
            return Err(Error::Invalid("κ must be positive".into()));
        }
        Ok(CouplingVector { n, alpha, kappa })
    }

    /// `κ = 1`.
    pub fn unit(n: usize, alpha: Vec<Q>) -> Result<CouplingVector> {
        CouplingVector::new(n, alpha, Q::ONE)
    }

    /// Pure coupling `α = e_q`.
    pub fn pure(n: usize, q: usize) -> Result<CouplingVector> {
        let mut a = vec![Q::ZERO; q];
        a[q - 1] = Q::ONE;
        CouplingVector::unit(n, a)
    }

    pub fn with_kappa(&self, kappa: Q) -> CouplingVector {
        CouplingVector { kappa, ..self.clone() }
    }

    /// Nonzero `(q, α_q)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.alpha.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(i, a)| (i + 1, a))
    }

    pub fn qmax(&self) -> usize {
        self.terms().map(|(q, _)| q).max().unwrap_or(0)
    }

    fn n(&self) -> i64 {
        self.n as i64
    }

    /// `λ^(2q) = (−κ/2)^q n!(2q)!/(n−2q+1)!` at curvature `kappa`.
    pub fn lambda_at(n: usize, q: usize, kappa: &Q) -> Q {
        let n = n as i64;
        let q = q as i64;
        let base = &(-kappa) * &Q::new(1, 2);
        &base.pow(q as i32) * &(&(&fact(n) * &fact(2 * q)) / &fact(n - 2 * q + 1))
    }

    /// `λ^(2q)` at the stored `κ`.
    pub fn lambda(&self, q: usize) -> Q {
        CouplingVector::lambda_at(self.n, q, &self.kappa)
    }

    /// `λ^(2q)` at `κ = 1`, the normalization used inside `F_α`.
    pub fn lambda_unit(&self, q: usize) -> Q {
        CouplingVector::lambda_at(self.n, q, &Q::ONE)
    }

    /// `λ^(2q)` at the stored `κ` for `q = 1..=qmax`.
    pub fn lambdas(&self) -> Vec<Q> {
        (1..=self.alpha.len()).map(|q| self.lambda(q)).collect()
    }

    /// `A₁(α, κ) = Σ α_q (−κ/2)^{q−1} (n−2)!/2 · (2q)!/(n−2q)!`.
    pub fn a1(&self) -> Q {
        let n = self.n();
        let base = &(-&self.kappa) * &Q::new(1, 2);
        self.terms()
            .map(|(q, a)| {
                let q = q as i64;
                let c = &(&fact(n - 2) * &fact(2 * q)) / &(&Q::int(2) * &fact(n - 2 * q));
                &(a * &base.pow(q as i32 - 1)) * &c
            })
            .sum()
    }

    /// `A₂(α, κ) = Σ α_q (−κ/2)^{q−1} (n−2)!/2 · (2q)!/(n−2q+1)! · (q−1)`.
    pub fn a2(&self) -> Q {
        let n = self.n();
        let base = &(-&self.kappa) * &Q::new(1, 2);
        self.terms()
            .map(|(q, a)| {
                let q = q as i64;
                let c = &(&fact(n - 2) * &fact(2 * q)) / &(&Q::int(2) * &fact(n - 2 * q + 1));
                &(&(a * &base.pow(q as i32 - 1)) * &c) * &Q::int(q - 1)
            })
            .sum()
    }

    /// `A₃(α) = Σ α_q (−1/2)^q (n−2)!(2q−1)!(nq−1)/(n−2q+1)!`.
    pub fn a3(&self) -> Q {
        let n = self.n();
        self.terms()
            .map(|(q, a)| {
                let q = q as i64;
                let c = &(&(&fact(n - 2) * &fact(2 * q - 1)) * &Q::int(n * q - 1)) / &fact(n - 2 * q + 1);
                &(a * &Q::new(-1, 2).pow(q as i32)) * &c
            })
            .sum()
    }

    /// `λ(α) = Σ α_q λ^(2q)` at `κ = 1`.
    pub fn lambda_alpha(&self) -> Q {
        self.terms().map(|(q, a)| a * &self.lambda_unit(q)).sum()
    }

    /// The constant `Σ (1 + (n+1)/2q) α_q λ^(2q)` from the comparison of the
    /// Lovelock equation with `F_α` (a different quantity from
    /// [`CouplingVector::lambda_alpha`], despite the shared symbol).
    pub fn lovelock_equation_constant(&self) -> Q {
        self.terms()
            .map(|(q, a)| {
                let f = &Q::ONE + &Q::new(self.n() + 1, 2 * q as i64);
                &(&f * a) * &self.lambda_unit(q)
            })
            .sum()
    }

    /// `B₁,₂(α) = Σ α_q (−1/2)^q (n−2)!/2 · (2q)!/(n−2q)!`.
    pub fn b12(&self) -> Q {
        let n = self.n();
        self.terms()
            .map(|(q, a)| {
                let q = q as i64;
                let c = &(&fact(n - 2) * &fact(2 * q)) / &(&Q::int(2) * &fact(n - 2 * q));
                &(a * &Q::new(-1, 2).pow(q as i32)) * &c
            })
            .sum()
    }

    /// `c_n = 2^{n−2}(n/2−1)!²/(n−2)`, defined for even `n ≥ 4`.
    pub fn c_n(n: usize) -> Option<Q> {
        if n % 2 == 1 || n < 4 {
            return None;
        }
        let f = fact(n as i64 / 2 - 1);
        Some(&(&Q::int(2).pow(n as i32 - 2) * &(&f * &f)) / &Q::int(n as i64 - 2))
    }

    /// `Σ_q λ^(2q) α_q (1 − (n+1)/2q)(κ^q − 1)` with `λ^(2q)` at `κ = 1`.
    pub fn limsec_sum(&self) -> Q {
        self.terms()
            .map(|(q, a)| {
                let f = &Q::ONE - &Q::new(self.n() + 1, 2 * q as i64);
                let k = &self.kappa.pow(q as i32) - &Q::ONE;
                &(&(&self.lambda_unit(q) * a) * &f) * &k
            })
            .sum()
    }

    /// `κ ∈ LimSec(α)`: the asymptotic equation holds and `A₁(α, κ) ≠ 0`.
    pub fn in_limsec(&self) -> bool {
        self.limsec_sum().is_zero() && !self.a1().is_zero()
    }

    /// `B̃₁,₂(β, κ) = Σ β_q (−κ/2)^{q−1} (n−1)!/2 · (2q)! q/(n−2q+1)!`.
    pub fn b_tilde(&self) -> Q {
        b_tilde(&self.alpha, &self.kappa, self.n)
    }
}

/// `B̃₁,₂(β, κ)` for `2q ≤ n + 1`.
pub fn b_tilde(beta: &[Q], kappa: &Q, n: usize) -> Q {
    let n = n as i64;
    let base = &(-kappa) * &Q::new(1, 2);
    beta.iter()
        .enumerate()
        .filter(|(_, b)| !b.is_zero())
        .map(|(i, b)| {
            let q = i as i64 + 1;
            let c = &(&(&fact(n - 1) * &fact(2 * q)) * &Q::int(q)) / &(&Q::int(2) * &fact(n - 2 * q + 1));
            &(b * &base.pow(q as i32 - 1)) * &c
        })
        .sum()
}

/// Verdict of the LimSec gate with the two quantities it checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimSecVerdict {
    pub member: bool,
    pub asymptotic_sum: Q,
    pub a1: Q,
}

pub fn limsec_check(cv: &CouplingVector) -> LimSecVerdict {
    LimSecVerdict { member: cv.in_limsec(), asymptotic_sum: cv.limsec_sum(), a1: cv.a1() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn einstein_constants() {
        for n in 3..8 {
            let cv = CouplingVector::pure(n, 1).unwrap();
            assert_eq!(cv.lambda(1), Q::int(-(n as i64)));
            assert_eq!(cv.a1(), Q::ONE);
            assert_eq!(cv.a2(), Q::ZERO);
            assert_eq!(cv.b12(), q(-1, 2));
            assert_eq!(cv.b_tilde(), Q::ONE);
        }
    }

    #[test]
    fn b12_identity() {
        // B₁,₂ = A₂ + λ(α)/(2n)
        for n in 4..8 {
            let cv = CouplingVector::unit(n, vec![q(1, 1), q(-2, 3)]).unwrap();
            let rhs = &cv.a2() + &(&cv.lambda_alpha() / &Q::int(2 * n as i64));
            assert_eq!(cv.b12(), rhs);
        }
    }

    #[test]
    fn b_tilde_matches_a1_a2_combination() {
        // B̃₁,₂ = A₁ + (n+1) A₂
        for n in 4..8 {
            let cv = CouplingVector::new(n, vec![q(2, 1), q(1, 3)], q(3, 2)).unwrap();
            let rhs = &cv.a1() + &(&Q::int(n as i64 + 1) * &cv.a2());
            assert_eq!(cv.b_tilde(), rhs);
        }
    }

    #[test]
    fn b_tilde_examples() {
        assert_eq!(b_tilde(&[Q::ONE], &Q::ONE, 7), Q::ONE);
        assert_eq!(b_tilde(&[Q::ZERO], &Q::ONE, 7), Q::ZERO);
        assert_eq!(b_tilde(&[Q::ZERO, Q::ONE], &Q::ONE, 5), Q::int(-144));
    }

    #[test]
    fn c4_is_two() {
        assert_eq!(CouplingVector::c_n(4), Some(Q::int(2)));
        assert_eq!(CouplingVector::c_n(6), Some(Q::int(16)));
        assert_eq!(CouplingVector::c_n(5), None);
    }

    #[test]
    fn a1_for_gauss_bonnet_in_four_dimensions() {
        assert_eq!(CouplingVector::unit(4, vec![q(1, 1), q(1, 1)]).unwrap().a1(), Q::int(-11));
        assert_eq!(CouplingVector::unit(4, vec![q(1, 1), q(-1, 1)]).unwrap().a1(), Q::int(13));
    }

    #[test]
    fn limsec_examples() {
        for n in 4..7 {
            for qq in 1..=n / 2 {
                let cv = CouplingVector::pure(n, qq).unwrap();
                assert!(cv.in_limsec());
                assert!(!cv.with_kappa(q(2, 1)).in_limsec());
            }
            let alt = CouplingVector::unit(n, vec![q(1, 1), q(-1, 1)]).unwrap();
            assert!(alt.in_limsec());
        }
        // A₁ = 1 − α₂ · 12 vanishes at α₂ = 1/12 for n = 4.
        let dead = CouplingVector::unit(4, vec![q(1, 1), q(1, 12)]).unwrap();
        assert_eq!(dead.a1(), Q::ZERO);
        assert!(!dead.in_limsec());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CouplingVector::unit(4, vec![Q::ZERO, Q::ZERO]).is_err());
        assert!(CouplingVector::unit(4, vec![Q::ONE, Q::ZERO, Q::ONE]).is_err());
        assert!(CouplingVector::new(4, vec![Q::ONE], q(-1, 1)).is_err());
    }
}
