//! Levi-Civita curvature of metric jets, Ricci-(2q) and scalar-(2q)
//! curvatures, and the Lovelock tensor `F_α`.
//!
//! Sign convention: `R_abab` is the sectional curvature of the plane
//! `∂_a ∧ ∂_b`, so a metric of constant sectional curvature `s` has
//! `Rm = (s/2) g²` and the hyperbolic metric has `Rm = −½ g²`.

pub mod coupling;
pub mod dual;
pub mod gauge;
pub mod kronecker;
pub mod linearize;

pub use coupling::{b_tilde, limsec_check, CouplingVector, LimSecVerdict};
pub use dual::Dual;
pub use gauge::{
    bianchi, covariant_derivative, delta, delta_form, delta_star, g_script, hessian, modified_lovelock, phi_alpha,
    rough_laplacian,
};
pub use kronecker::{kronecker_normalization, ricci_2q_kronecker};
pub use linearize::{laplace_type_formula, linearize, linearize_exact, richardson};

use crate::doubleform::DoubleForm;
use crate::error::{Error, Result};
use crate::jets::{Chart, MetricJet, TensorJet};
use crate::ring::{invert_matrix, DiffRing, Ring};
use crate::scalar::Q;

/// A value together with non-fatal warnings.
#[derive(Clone, Debug, PartialEq)]
pub struct Warned<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

/// Metric, inverse, first derivatives and Christoffel symbols of a metric jet.
#[derive(Clone, Debug)]
pub struct Geometry<S> {
    pub chart: Chart,
    pub g: Vec<Vec<S>>,
    pub ginv: Vec<Vec<S>>,
    /// `gamma[k][i][j] = Γ^k_ij`.
    pub gamma: Vec<Vec<Vec<S>>>,
    /// `gamma_low[k][i][j] = Γ_{k,ij} = g_kl Γ^l_ij`.
    pub gamma_low: Vec<Vec<Vec<S>>>,
    /// `dg[c][a][b] = ∂_c g_ab`.
    pub dg: Vec<Vec<Vec<S>>>,
}

impl<S: DiffRing> Geometry<S> {
    pub fn new(metric: &MetricJet<S>) -> Result<Geometry<S>> {
        let m = metric.dim();
        let ginv = metric.inverse()?;
        let g = metric.g.clone();
        let chart = metric.chart.clone();
        let dg: Vec<Vec<Vec<S>>> = (0..m)
            .map(|c| (0..m).map(|a| (0..m).map(|b| chart.d(&g[a][b], c)).collect()).collect())
            .collect();
        let zero = g[0][0].zero_like();
        let mut gamma_low = vec![vec![vec![zero.clone(); m]; m]; m];
        for k in 0..m {
            for i in 0..m {
                for j in i..m {
                    let v = dg[i][j][k].add(&dg[j][i][k]).sub(&dg[k][i][j]).scale(&Q::new(1, 2));
                    gamma_low[k][i][j] = v.clone();
                    gamma_low[k][j][i] = v;
                }
            }
        }
        let mut gamma = vec![vec![vec![zero.clone(); m]; m]; m];
        for k in 0..m {
            for i in 0..m {
                for j in i..m {
                    let mut acc = zero.clone();
                    for l in 0..m {
                        acc.add_mul_assign(&ginv[k][l], &gamma_low[l][i][j]);
                    }
                    gamma[k][i][j] = acc.clone();
                    gamma[k][j][i] = acc;
                }
            }
        }
        Ok(Geometry { chart, g, ginv, gamma, gamma_low, dg })
    }

    pub fn dim(&self) -> usize {
        self.chart.dim
    }

    pub fn zero(&self) -> S {
        self.g[0][0].zero_like()
    }

    pub fn d(&self, s: &S, c: usize) -> S {
        self.chart.d(s, c)
    }

    /// The metric as a `(1, 1)` form.
    pub fn metric_form(&self) -> DoubleForm<S> {
        DoubleForm::from_matrix(&self.g).expect("square metric")
    }

    /// `Γ^k_ij` as a tensor with the upper index first.
    pub fn christoffel(&self) -> TensorJet<S> {
        let entries = self.gamma.iter().flatten().flatten().cloned().collect();
        TensorJet { dim: self.dim(), cov: 2, con: 1, symmetric: false, entries }
    }

    /// `Rm` as a `(2, 2)` form with components `R_abcd`.
    pub fn riemann(&self) -> DoubleForm<S> {
        let m = self.dim();
        let mut rm = DoubleForm::zeros(2, 2, m, self.zero());
        let dd = |a: usize, b: usize, i: usize, j: usize| self.d(&self.dg[b][i][j], a);
        for a in 0..m {
            for b in a + 1..m {
                for c in 0..m {
                    for d in c + 1..m {
                        if (c, d) < (a, b) {
                            let v = rm.get(&[c, d], &[a, b]);
                            rm.set(&[a, b], &[c, d], v);
                            continue;
                        }
                        let mut v = dd(b, c, a, d).add(&dd(a, d, b, c)).sub(&dd(b, d, a, c)).sub(&dd(a, c, b, d));
                        v = v.scale(&Q::new(1, 2));
                        for e in 0..m {
                            v.add_mul_assign(&self.gamma[e][b][c], &self.gamma_low[e][a][d]);
                            v.sub_assign(&self.gamma[e][b][d].mul(&self.gamma_low[e][a][c]));
                        }
                        rm.set(&[a, b], &[c, d], v);
                    }
                }
            }
        }
        rm
    }

    /// Ricci tensor `R^c_bcd` from the Christoffel symbols directly, without
    /// going through double forms.
    pub fn ricci_direct(&self) -> Vec<Vec<S>> {
        let m = self.dim();
        let mut ric = vec![vec![self.zero(); m]; m];
        for b in 0..m {
            for d in b..m {
                let mut v = self.zero();
                for a in 0..m {
                    v.add_assign(&self.d(&self.gamma[a][b][d], a));
                    v.sub_assign(&self.d(&self.gamma[a][b][a], d));
                    for e in 0..m {
                        v.add_mul_assign(&self.gamma[a][a][e], &self.gamma[e][b][d]);
                        v.sub_assign(&self.gamma[a][d][e].mul(&self.gamma[e][b][a]));
                    }
                }
                ric[b][d] = v.clone();
                ric[d][b] = v;
            }
        }
        ric
    }
}

/// `ctr^{2q−1}(ω^q)` and `ctr^{2q}(ω^q)` for every requested `q`, with the
/// contractions taken against `ginv`.
pub fn power_contractions<S: Ring>(
    omega: &DoubleForm<S>,
    ginv: &[Vec<S>],
    qs: &[usize],
) -> Result<Vec<(usize, DoubleForm<S>, S)>> {
    let Some(&qmax) = qs.iter().max() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    let mut pw = omega.clone();
    for q in 1..=qmax {
        if q > 1 {
            pw = pw.kn(omega)?;
        }
        if qs.contains(&q) {
            let ric = pw.contract_n_inv(2 * q - 1, ginv);
            let scal = ric.contract_inv(ginv).get(&[], &[]);
            out.push((q, ric, scal));
        }
    }
    Ok(out)
}

fn check_q(m: usize, q: usize) -> Result<Vec<String>> {
    if q == 0 {
        return Err(Error::Invalid("q must be positive".into()));
    }
    Ok(if 2 * q > m { vec![format!("2q = {} exceeds the dimension {m}; result is zero", 2 * q)] } else { Vec::new() })
}

pub fn christoffel<S: DiffRing>(g: &MetricJet<S>) -> Result<TensorJet<S>> {
    Ok(Geometry::new(g)?.christoffel())
}

pub fn riemann<S: DiffRing>(g: &MetricJet<S>) -> Result<DoubleForm<S>> {
    Ok(Geometry::new(g)?.riemann())
}

/// `Ric^(2q) = ctr^{2q−1}(Rm^q)` as a `(1, 1)` form.
pub fn ricci_2q<S: DiffRing>(g: &MetricJet<S>, q: usize) -> Result<Warned<DoubleForm<S>>> {
    let warnings = check_q(g.dim(), q)?;
    let geo = Geometry::new(g)?;
    let (_, ric, _) = power_contractions(&geo.riemann(), &geo.ginv, &[q])?.remove(0);
    Ok(Warned { value: ric, warnings })
}

/// `scal^(2q) = ctr^{2q}(Rm^q)`.
pub fn scalar_2q<S: DiffRing>(g: &MetricJet<S>, q: usize) -> Result<Warned<S>> {
    let warnings = check_q(g.dim(), q)?;
    let geo = Geometry::new(g)?;
    let (_, _, s) = power_contractions(&geo.riemann(), &geo.ginv, &[q])?.remove(0);
    Ok(Warned { value: s, warnings })
}

/// Lovelock-(2q) tensor `E^(2q) = Ric^(2q) − scal^(2q) g/(2q)`.
pub fn einstein_2q<S: DiffRing>(g: &MetricJet<S>, q: usize) -> Result<Warned<DoubleForm<S>>> {
    let warnings = check_q(g.dim(), q)?;
    let geo = Geometry::new(g)?;
    let (_, ric, s) = power_contractions(&geo.riemann(), &geo.ginv, &[q])?.remove(0);
    let gf = geo.metric_form();
    let e = ric.sub(&gf.mul_scalar(&s).scale(&Q::new(1, 2 * q as i64)))?;
    Ok(Warned { value: e, warnings })
}

fn check_dim(m: usize, cv: &CouplingVector) -> Result<()> {
    if m != cv.n + 1 {
        return Err(Error::Dimension(format!("metric has dimension {m}, couplings expect {}", cv.n + 1)));
    }
    Ok(())
}

/// `Σ_q α_q [R_q − λ_q g − (s_q − (n+1)λ_q) g/(2q)]` from precomputed
/// contractions `(q, R_q, s_q)`.
fn assemble<S: Ring>(terms: &[(usize, DoubleForm<S>, S)], gf: &DoubleForm<S>, cv: &CouplingVector) -> Result<DoubleForm<S>> {
    let m = gf.dim();
    let mut out = DoubleForm::zeros(1, 1, m, gf.zero_scalar().clone());
    for (q, ric, s) in terms {
        let a = &cv.alpha[q - 1];
        let lam = cv.lambda_unit(*q);
        let shift = s.sub(&s.constant_like(&(&Q::int(cv.n as i64 + 1) * &lam)));
        let coef = shift.scale(&Q::new(1, 2 * *q as i64)).add(&s.constant_like(&lam));
        let t = ric.sub(&gf.mul_scalar(&coef))?;
        out = out.add(&t.scale(a))?;
    }
    Ok(out)
}

/// The Lovelock tensor `F_α(g)` of an honest metric jet.
pub fn lovelock_tensor<S: DiffRing>(g: &MetricJet<S>, cv: &CouplingVector) -> Result<DoubleForm<S>> {
    check_dim(g.dim(), cv)?;
    let geo = Geometry::new(g)?;
    let qs: Vec<usize> = cv.terms().map(|(q, _)| q).collect();
    let terms = power_contractions(&geo.riemann(), &geo.ginv, &qs)?;
    assemble(&terms, &geo.metric_form(), cv)
}

/// Curvature data of `g = u^{−2} ḡ` expressed through the smooth form
/// `T = u² Rm_ḡ + ḡ·(u Hess_ḡ u − ½|du|²_ḡ ḡ)`, for which
/// `Rm_g = u^{−4} T`, `Ric^(2q)_g = u^{−2} ctr^{2q−1}_ḡ(T^q)` and
/// `scal^(2q)_g = ctr^{2q}_ḡ(T^q)`.
pub struct Compactified<S> {
    pub geo: Geometry<S>,
    pub t: DoubleForm<S>,
}

impl<S: DiffRing> Compactified<S> {
    pub fn new(gbar: &MetricJet<S>, u: &S) -> Result<Compactified<S>> {
        let geo = Geometry::new(gbar)?;
        let m = geo.dim();
        let du: Vec<S> = (0..m).map(|a| geo.d(u, a)).collect();
        let mut grad2 = geo.zero();
        for a in 0..m {
            for b in 0..m {
                grad2.add_assign(&geo.ginv[a][b].mul(&du[a]).mul(&du[b]));
            }
        }
        let half = grad2.scale(&Q::new(-1, 2));
        let mut aform = vec![vec![geo.zero(); m]; m];
        for a in 0..m {
            for b in a..m {
                let mut h = geo.d(&du[a], b);
                for k in 0..m {
                    h.sub_assign(&geo.gamma[k][a][b].mul(&du[k]));
                }
                let v = u.mul(&h).add(&half.mul(&geo.g[a][b]));
                aform[a][b] = v.clone();
                aform[b][a] = v;
            }
        }
        let u2 = u.mul(u);
        let t = geo.riemann().mul_scalar(&u2).add(&geo.metric_form().kn(&DoubleForm::from_matrix(&aform)?)?)?;
        Ok(Compactified { geo, t })
    }

    /// `u² F_α(g)`.
    pub fn lovelock(&self, cv: &CouplingVector) -> Result<DoubleForm<S>> {
        check_dim(self.geo.dim(), cv)?;
        let qs: Vec<usize> = cv.terms().map(|(q, _)| q).collect();
        let terms = power_contractions(&self.t, &self.geo.ginv, &qs)?;
        assemble(&terms, &self.geo.metric_form(), cv)
    }

    /// `F̃_β(g) = Σ β_q (scal^(2q)_g − (n+1) λ^(2q))`, `λ` at `κ = 1`.
    pub fn scalar_combination(&self, beta: &[Q]) -> Result<S> {
        let m = self.geo.dim();
        let n = m - 1;
        let qs: Vec<usize> = (1..=beta.len()).filter(|q| !beta[q - 1].is_zero()).collect();
        let terms = power_contractions(&self.t, &self.geo.ginv, &qs)?;
        let mut out = self.geo.zero();
        for (q, _, s) in terms {
            let lam = CouplingVector::lambda_at(n, q, &Q::ONE);
            let c = &Q::int(m as i64) * &lam;
            out.add_scaled_assign(&s.sub(&s.constant_like(&c)), &beta[q - 1]);
        }
        Ok(out)
    }
}

/// `x² F_α(g)` for `g = x^{−2} ḡ`, where `x` is the value `u` of the
/// defining coordinate (usually a jet variable).
pub fn lovelock_tensor_compact<S: DiffRing>(gbar: &MetricJet<S>, u: &S, cv: &CouplingVector) -> Result<DoubleForm<S>> {
    Compactified::new(gbar, u)?.lovelock(cv)
}

/// `(1, 1)` form components as a matrix.
pub fn form_matrix<S: Ring>(f: &DoubleForm<S>) -> Vec<Vec<S>> {
    let m = f.dim();
    (0..m).map(|i| (0..m).map(|j| f.get(&[i], &[j])).collect()).collect()
}

/// Inverse of a matrix over a ring, as a [`Result`].
pub fn inverse<S: Ring>(a: &[Vec<S>]) -> Result<Vec<Vec<S>>> {
    invert_matrix(a).ok_or_else(|| Error::Singular("matrix".into()))
}
