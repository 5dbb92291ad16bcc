//! Direct series solution of `Ric(g) = −n g` for `g = x^{−2}(dx² + h_x)`,
//! independent of the double-form machinery. Uses
//! `x²(Ric_g + n g) = x² R̄ic − (n−1) x Γ̄⁰ − x (ḡ^{ab} Γ̄⁰_ab) ḡ + n(1 − ḡ⁰⁰) ḡ`.

use super::BoundaryData;
use crate::curvature::Geometry;
use crate::error::{Error, Result};
use crate::jets::{MetricJet, ScalarJet};
use crate::ring::{invert_matrix, Ring};
use crate::scalar::Q;

fn einstein_residual(bd: &BoundaryData, hx: &[Vec<ScalarJet>]) -> Result<Vec<Vec<ScalarJet>>> {
    let n = bd.n;
    let x = bd.x();
    let mut g = vec![vec![bd.zero(); n + 1]; n + 1];
    g[0][0] = x.one_like();
    for i in 0..n {
        for j in 0..n {
            g[i + 1][j + 1] = hx[i][j].clone();
        }
    }
    let geo = Geometry::new(&MetricJet { chart: bd.bulk_chart(), g })?;
    let ric = geo.ricci_direct();
    let mut tr = bd.zero();
    for a in 0..=n {
        for b in 0..=n {
            tr.add_mul_assign(&geo.ginv[a][b], &geo.gamma[0][a][b]);
        }
    }
    let x2 = x.mul(&x);
    let shift = geo.ginv[0][0].one_like().sub(&geo.ginv[0][0]).scale_q(&Q::int(n as i64));
    let coef = shift.sub(&x.mul(&tr));
    let nm1 = Q::int(n as i64 - 1);
    Ok((0..=n)
        .map(|a| {
            (0..=n)
                .map(|b| x2.mul(&ric[a][b]).sub(&x.mul(&geo.gamma[0][a][b]).scale_q(&nm1)).add(&coef.mul(&geo.g[a][b])))
                .collect()
        })
        .collect())
}

/// `h_0, …, h_order` for the Einstein equation, `order < n`, solving the
/// boundary block with trace response `½ k(2n−k)` and trace-free response
/// `½ k(n−k)`.
pub fn einstein_series(bd: &BoundaryData, order: usize) -> Result<Vec<Vec<Vec<ScalarJet>>>> {
    let n = bd.n;
    if order >= n {
        return Err(Error::Invalid("the Einstein series oracle stops below order n".into()));
    }
    let h0inv = invert_matrix(&bd.h).ok_or_else(|| Error::Singular("boundary metric".into()))?;
    let mut hs = vec![bd.h.clone()];
    for k in 1..=order {
        let hx = super::sum_series(&hs);
        let res = einstein_residual(bd, &hx)?;
        let r: Vec<Vec<ScalarJet>> = (0..n).map(|i| (0..n).map(|j| res[i + 1][j + 1].coeff_in(0, k as u32)).collect()).collect();
        let mut tr = bd.zero();
        for a in 0..n {
            for b in 0..n {
                tr.add_mul_assign(&h0inv[a][b], &r[a][b]);
            }
        }
        let kk = k as i64;
        let nn = n as i64;
        let t = tr.scale_q(&Q::new(-2, kk * (2 * nn - kk)));
        let mean = tr.scale_q(&Q::new(1, nn));
        let a = Q::new(-2, kk * (nn - kk));
        let hk = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let tf = r[i][j].sub(&mean.mul(&bd.h[i][j]));
                        tf.scale_q(&a).add(&t.scale_q(&Q::new(1, nn)).mul(&bd.h[i][j]))
                    })
                    .collect()
            })
            .collect();
        hs.push(hk);
    }
    let res = einstein_residual(bd, &super::sum_series(&hs))?;
    for row in res.iter().skip(1) {
        for e in row.iter().skip(1) {
            for k in 0..=order as u32 {
                if !e.coeff_in(0, k).is_zero_jet() {
                    return Err(Error::Consistency(format!("Einstein series residual survives at x^{k}")));
                }
            }
        }
    }
    Ok(hs)
}

/// Schouten tensor `P = (Ric − J h)/(n−2)`, `J = scal/(2(n−1))`, of a
/// boundary metric, `n ≥ 3`.
pub fn schouten(h: &MetricJet<ScalarJet>) -> Result<Vec<Vec<ScalarJet>>> {
    let n = h.dim();
    if n < 3 {
        return Err(Error::Dimension("Schouten tensor needs n ≥ 3".into()));
    }
    let geo = Geometry::new(h)?;
    let ric = geo.ricci_direct();
    let mut scal = geo.zero();
    for a in 0..n {
        for b in 0..n {
            scal.add_mul_assign(&geo.ginv[a][b], &ric[a][b]);
        }
    }
    let j = scal.scale(&Q::new(1, 2 * (n as i64 - 1)));
    let c = Q::new(1, n as i64 - 2);
    Ok((0..n).map(|a| (0..n).map(|b| ric[a][b].sub(&j.mul(&h.g[a][b])).scale(&c)).collect()).collect())
}
