//! Divergence, its adjoint, the Bianchi operator and the gauge-modified
//! Lovelock tensor. Covariant derivative indices are appended last, so
//! `t_{ij;k}` is `∇_k t_ij`.

use super::{form_matrix, inverse, lovelock_tensor, CouplingVector, Geometry};
use crate::error::{Error, Result};
use crate::jets::{MetricJet, TensorJet};
use crate::ring::{DiffRing, Ring};
use crate::scalar::Q;

fn digits(mut flat: usize, m: usize, k: usize) -> Vec<usize> {
    let mut d = vec![0; k];
    for s in (0..k).rev() {
        d[s] = flat % m;
        flat /= m;
    }
    d
}

fn undigits(d: &[usize], m: usize) -> usize {
    d.iter().fold(0, |acc, &x| acc * m + x)
}

/// `∇t` for a covariant tensor of any rank.
pub fn covariant_derivative<S: DiffRing>(geo: &Geometry<S>, t: &TensorJet<S>) -> Result<TensorJet<S>> {
    let m = geo.dim();
    if t.con != 0 || t.dim != m {
        return Err(Error::Dimension("covariant derivative needs a covariant tensor of matching dimension".into()));
    }
    let k = t.cov;
    let mut out = Vec::with_capacity(t.entries.len() * m);
    for (flat, v) in t.entries.iter().enumerate() {
        let idx = digits(flat, m, k);
        for a in 0..m {
            let mut acc = geo.d(v, a);
            let mut j = idx.clone();
            for s in 0..k {
                for c in 0..m {
                    j[s] = c;
                    let w = &t.entries[undigits(&j, m)];
                    if !w.is_zero() {
                        acc.sub_assign(&geo.gamma[c][a][idx[s]].mul(w));
                    }
                }
                j[s] = idx[s];
            }
            out.push(acc);
        }
    }
    Ok(TensorJet { dim: m, cov: k + 1, con: 0, symmetric: false, entries: out })
}

fn tensor2<S: Ring>(t: &[Vec<S>]) -> TensorJet<S> {
    TensorJet { dim: t.len(), cov: 2, con: 0, symmetric: false, entries: t.iter().flatten().cloned().collect() }
}

fn check_square<S: DiffRing>(geo: &Geometry<S>, t: &[Vec<S>]) -> Result<()> {
    let m = geo.dim();
    if t.len() != m || t.iter().any(|r| r.len() != m) {
        return Err(Error::Dimension(format!("expected a {m}x{m} tensor")));
    }
    Ok(())
}

/// `(δt)_i = −g^{jk} t_{ij;k}`.
pub fn delta<S: DiffRing>(geo: &Geometry<S>, t: &[Vec<S>]) -> Result<Vec<S>> {
    check_square(geo, t)?;
    let m = geo.dim();
    let nt = covariant_derivative(geo, &tensor2(t))?;
    Ok((0..m)
        .map(|i| {
            let mut acc = geo.zero();
            for j in 0..m {
                for k in 0..m {
                    acc.add_mul_assign(&geo.ginv[j][k], &nt.entries[(i * m + j) * m + k]);
                }
            }
            acc.neg()
        })
        .collect())
}

/// `δω = −g^{jk} ω_{j;k}`.
pub fn delta_form<S: DiffRing>(geo: &Geometry<S>, w: &[S]) -> Result<S> {
    let m = geo.dim();
    let nw = covariant_derivative(geo, &one_form(geo, w)?)?;
    let mut acc = geo.zero();
    for j in 0..m {
        for k in 0..m {
            acc.add_mul_assign(&geo.ginv[j][k], &nw.entries[j * m + k]);
        }
    }
    Ok(acc.neg())
}

fn one_form<S: DiffRing>(geo: &Geometry<S>, w: &[S]) -> Result<TensorJet<S>> {
    if w.len() != geo.dim() {
        return Err(Error::Dimension("one-form of wrong length".into()));
    }
    Ok(TensorJet { dim: w.len(), cov: 1, con: 0, symmetric: false, entries: w.to_vec() })
}

/// `δ*ω = ½(ω_{i;j} + ω_{j;i})`.
pub fn delta_star<S: DiffRing>(geo: &Geometry<S>, w: &[S]) -> Result<Vec<Vec<S>>> {
    let m = geo.dim();
    let nw = covariant_derivative(geo, &one_form(geo, w)?)?;
    let half = Q::new(1, 2);
    Ok((0..m)
        .map(|i| (0..m).map(|j| nw.entries[i * m + j].add(&nw.entries[j * m + i]).scale(&half)).collect())
        .collect())
}

/// `tr_g t = g^{ij} t_ij`.
pub fn trace<S: DiffRing>(geo: &Geometry<S>, t: &[Vec<S>]) -> S {
    let m = geo.dim();
    let mut acc = geo.g[0][0].zero_like();
    for i in 0..m {
        for j in 0..m {
            acc.add_mul_assign(&geo.ginv[i][j], &t[i][j]);
        }
    }
    acc
}

/// `𝒢Φ = Φ − ½ (tr_g Φ) g`.
pub fn g_script<S: DiffRing>(geo: &Geometry<S>, phi: &[Vec<S>]) -> Result<Vec<Vec<S>>> {
    check_square(geo, phi)?;
    let h = trace(geo, phi).scale(&Q::new(-1, 2));
    Ok(phi.iter().zip(&geo.g).map(|(pr, gr)| pr.iter().zip(gr).map(|(p, g)| p.add(&h.mul(g))).collect()).collect())
}

/// Bianchi operator `B_g(t) = δ_g 𝒢_g t`.
pub fn bianchi<S: DiffRing>(geo: &Geometry<S>, t: &[Vec<S>]) -> Result<Vec<S>> {
    delta(geo, &g_script(geo, t)?)
}

/// `f_{;ij} = δ*(df)`.
pub fn hessian<S: DiffRing>(geo: &Geometry<S>, f: &S) -> Result<Vec<Vec<S>>> {
    let df: Vec<S> = (0..geo.dim()).map(|a| geo.d(f, a)).collect();
    delta_star(geo, &df)
}

/// Rough Laplacian `Δt = −g^{ab} t_{ij;ab}` (nonnegative spectrum).
pub fn rough_laplacian<S: DiffRing>(geo: &Geometry<S>, t: &[Vec<S>]) -> Result<Vec<Vec<S>>> {
    check_square(geo, t)?;
    let m = geo.dim();
    let n2 = covariant_derivative(geo, &covariant_derivative(geo, &tensor2(t))?)?;
    Ok((0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = geo.zero();
                    for a in 0..m {
                        for b in 0..m {
                            acc.add_mul_assign(&geo.ginv[a][b], &n2.entries[((i * m + j) * m + a) * m + b]);
                        }
                    }
                    acc.neg()
                })
                .collect()
        })
        .collect())
}

/// Coefficients `(c₁, c₂)` of `Φ_α = c₁ δ*ω + c₂ g δω`.
pub fn phi_coefficients(cv: &CouplingVector) -> (Q, Q) {
    let n = cv.n as i64;
    let den = Q::int(n * (n - 1));
    let mut c1 = Q::ZERO;
    let mut c2 = Q::ZERO;
    for (q, a) in cv.terms() {
        let w = &(&cv.lambda_unit(q) * a) / &den;
        c1 -= &(&w * &Q::int(n - 2 * q as i64 + 1));
        c2 += &(&w * &(&Q::int(q as i64 - 1) - &Q::new(n - 1, 2)));
    }
    (c1, c2)
}

/// `Φ_α(g, t) = (c₁ δ*_g + c₂ g δ_g)(g t^{−1} B_g(t))`.
pub fn phi_alpha<S: DiffRing>(g: &MetricJet<S>, t: &MetricJet<S>, cv: &CouplingVector) -> Result<Vec<Vec<S>>> {
    let geo = Geometry::new(g)?;
    phi_with(&geo, t, cv)
}

fn phi_with<S: DiffRing>(geo: &Geometry<S>, t: &MetricJet<S>, cv: &CouplingVector) -> Result<Vec<Vec<S>>> {
    let m = geo.dim();
    if t.dim() != m {
        return Err(Error::Dimension("metrics of different dimension".into()));
    }
    let tinv = inverse(&t.g)?;
    let b = bianchi(geo, &t.g)?;
    let tb: Vec<S> = (0..m)
        .map(|j| {
            let mut acc = geo.zero();
            for k in 0..m {
                acc.add_mul_assign(&tinv[j][k], &b[k]);
            }
            acc
        })
        .collect();
    let w: Vec<S> = (0..m)
        .map(|i| {
            let mut acc = geo.zero();
            for j in 0..m {
                acc.add_mul_assign(&geo.g[i][j], &tb[j]);
            }
            acc
        })
        .collect();
    let (c1, c2) = phi_coefficients(cv);
    let ds = delta_star(geo, &w)?;
    let dw = delta_form(geo, &w)?.scale(&c2);
    Ok((0..m).map(|i| (0..m).map(|j| ds[i][j].scale(&c1).add(&geo.g[i][j].mul(&dw))).collect()).collect())
}

/// `Q_α(g, t) = F_α(g) − Φ_α(g, t)`.
pub fn modified_lovelock<S: DiffRing>(g: &MetricJet<S>, t: &MetricJet<S>, cv: &CouplingVector) -> Result<Vec<Vec<S>>> {
    let f = form_matrix(&lovelock_tensor(g, cv)?);
    let geo = Geometry::new(g)?;
    let phi = phi_with(&geo, t, cv)?;
    Ok(f.iter().zip(&phi).map(|(fr, pr)| fr.iter().zip(pr).map(|(a, b)| a.sub(b)).collect()).collect())
}
