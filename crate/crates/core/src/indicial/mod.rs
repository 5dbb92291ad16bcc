//! Indicial roots and radii of `Δ + c` on functions and trace-free symmetric
//! 2-tensors over asymptotically hyperbolic spaces, and the model Green's
//! operators of `(x∂_x)² − n x∂_x − c`.
//!
//! `Δ` is the rough Laplacian `−g^{ab}∇_a∇_b`, so `Δ + 2n` acts on the trace
//! part and `Δ − 2` on the trace-free part of the linearized Einstein
//! operator. A section `x^μ q` with `q` of constant `ḡ`-length has weight `μ`.

pub mod green;
pub mod surd;

pub use green::{fit_log_coefficient, green_apply, model_operator, right_inverse_residual, GreenKind, LogGrid, QuadratureOptions};
pub use surd::Surd;

use serde::Serialize;

use crate::scalar::Q;

/// `μ±` with `μ₊ + μ₋` rational; `complex` flags a negative discriminant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootPair {
    pub plus: Surd,
    pub minus: Surd,
    pub complex: bool,
}

impl RootPair {
    /// `(p ± √d)/2`.
    pub fn half(p: &Q, d: &Q) -> RootPair {
        let a = p * &Q::new(1, 2);
        let plus = Surd::new(a.clone(), Q::new(1, 2), d);
        let minus = Surd::new(a, Q::new(-1, 2), d);
        RootPair { plus, minus, complex: d.signum() < 0 }
    }

    /// Midpoint `(μ₊ + μ₋)/2`.
    pub fn center(&self) -> Q {
        &(&self.plus.rational + &self.minus.rational) * &Q::new(1, 2)
    }

    pub fn as_rationals(&self) -> Option<(Q, Q)> {
        Some((self.plus.as_rational()?, self.minus.as_rational()?))
    }
}

impl std::fmt::Display for RootPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.plus, self.minus)?;
        if self.complex {
            write!(f, " [complex]")?;
        }
        Ok(())
    }
}

/// `ξ± = (n ± √(n² + 4c))/2`.
pub fn roots_functions(n: usize, c: &Q) -> RootPair {
    let nq = Q::int(n as i64);
    RootPair::half(&nq, &(&(&nq * &nq) + &(c * &Q::int(4))))
}

/// Discriminant shifts `n² + 4c + k_i` of the four trace-free/trace blocks.
fn sym2_shift(n: usize, i: usize) -> Q {
    let n = n as i64;
    Q::int([0, 8, 8 * n + 8, 4 * n + 12][i])
}

/// `μ^(i)± = (n − 4 ± √(n² + 4c + k_i))/2`, `i = 0..4`, with
/// `k = (0, 8, 8n + 8, 4n + 12)`; block 0 is the pure-trace part.
pub fn roots_sym2(n: usize, c: &Q) -> [RootPair; 4] {
    let nq = Q::int(n as i64);
    let base = &(&nq * &nq) + &(c * &Q::int(4));
    let p = &nq - &Q::int(4);
    std::array::from_fn(|i| RootPair::half(&p, &(&base + &sym2_shift(n, i))))
}

/// `I_μ = i0 + μ(n − μ − 2r)` on a bundle of weight `r`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndicialPolynomial {
    pub n: usize,
    pub r: i64,
    pub i0: Q,
}

impl IndicialPolynomial {
    /// `Δ + c` on functions.
    pub fn functions(n: usize, c: &Q) -> IndicialPolynomial {
        IndicialPolynomial { n, r: 0, i0: c.clone() }
    }

    /// `Δ + c` on block `i` of symmetric 2-tensors: `I₀(Δ)` is
    /// `2n−4, 2n−2, 4n−2, 3n−1` on the trace part and `V₁, V₂, V₃`.
    pub fn sym2(n: usize, i: usize, c: &Q) -> IndicialPolynomial {
        let m = n as i64;
        let e = Q::int([2 * m - 4, 2 * m - 2, 4 * m - 2, 3 * m - 1][i]);
        IndicialPolynomial { n, r: 2, i0: &e + c }
    }

    pub fn eval(&self, mu: &Q) -> Q {
        let inner = &(&Q::int(self.n as i64) - mu) - &Q::int(2 * self.r);
        &self.i0 + &(mu * &inner)
    }

    /// Zeros of `μ² − (n − 2r)μ − i0`.
    pub fn roots(&self) -> RootPair {
        let p = Q::int(self.n as i64 - 2 * self.r);
        RootPair::half(&p, &(&(&p * &p) + &(&self.i0 * &Q::int(4))))
    }
}

/// Indicial radius of `Δ + c` on trace-free symmetric `r`-tensors,
/// `√(c + n²/4 + r)`; `None` unless `c + R(Δ)² > 0`.
pub fn indicial_radius(n: usize, r: usize, c: &Q) -> Option<Surd> {
    let n = n as i64;
    let r2 = &(c + &Q::new(n * n, 4)) + &Q::int(r as i64);
    (r2.signum() > 0).then(|| Surd::sqrt(&r2))
}

#[derive(Clone, Debug, Serialize)]
pub struct IndicialSpectrum {
    pub n: usize,
    pub c: Q,
    pub roots_functions: RootPair,
    pub roots_sym2: [RootPair; 4],
    /// Radius on functions, when defined.
    pub radius: Option<Surd>,
}

pub fn indicial_spectrum(n: usize, c: &Q) -> IndicialSpectrum {
    IndicialSpectrum {
        n,
        c: c.clone(),
        roots_functions: roots_functions(n, c),
        roots_sym2: roots_sym2(n, c),
        radius: indicial_radius(n, 0, c),
    }
}
