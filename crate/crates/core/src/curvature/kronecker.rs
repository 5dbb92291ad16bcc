//! The generalized-Kronecker-delta expression
//! `K^i_j = δ^{i i₁⋯i₂q}_{j j₁⋯j₂q} R_{i₁i₂}^{j₁j₂} ⋯ R_{i₂q₋₁i₂q}^{j₂q₋₁j₂q}`,
//! summed by brute force over ordered index tuples.
//!
//! `K` is a fixed multiple of the Lovelock-(2q) tensor
//! `E^(2q) = Ric^(2q) − scal^(2q) g/(2q)`, with the factor given by
//! [`kronecker_normalization`]. It is proportional to `Ric^(2q)` itself only
//! when `Ric^(2q)` is pure trace, and then with a dimension-dependent ratio.

use super::{check_q, Geometry, Warned};
use crate::doubleform::DoubleForm;
use crate::error::Result;
use crate::jets::MetricJet;
use crate::ring::{DiffRing, Ring};
use crate::scalar::Q;

/// `N(q) = −4^q/(2q−1)!`, with `K = N(q) E^(2q)`.
pub fn kronecker_normalization(q: usize) -> Q {
    -&(&Q::int(4).pow(q as i32) / &Q::factorial(2 * q as u32 - 1))
}

fn permutations(k: usize) -> Vec<(Vec<usize>, i32)> {
    fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, i32)>) {
        if rest.is_empty() {
            let mut s = 1;
            for a in 0..cur.len() {
                for b in a + 1..cur.len() {
                    if cur[a] > cur[b] {
                        s = -s;
                    }
                }
            }
            out.push((cur.clone(), s));
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            cur.push(v);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..k).collect(), &mut Vec::new(), &mut out);
    out
}

/// `K^i_j` from a curvature form whose second block is raised,
/// `mixed(ab; cd) = R_ab^cd`. Entry `[i][j]` holds `K^i_j`.
pub fn kronecker_sum<S: Ring>(mixed: &DoubleForm<S>, q: usize) -> Vec<Vec<S>> {
    let m = mixed.dim();
    let zero = mixed.zero_scalar().clone();
    let mut out = vec![vec![zero.clone(); m]; m];
    if 2 * q + 1 > m {
        return out;
    }
    let perms = permutations(2 * q + 1);
    for i in 0..m {
        let mut tuple = vec![i];
        ordered(m, 2 * q, &mut tuple, &mut |upper| {
            for (p, sign) in &perms {
                let lower: Vec<usize> = p.iter().map(|&k| upper[k]).collect();
                let mut prod: Option<S> = None;
                for s in 0..q {
                    let r = mixed.get(&upper[1 + 2 * s..3 + 2 * s], &lower[1 + 2 * s..3 + 2 * s]);
                    prod = Some(match prod {
                        None => r,
                        Some(x) => x.mul(&r),
                    });
                    if prod.as_ref().is_some_and(Ring::is_zero) {
                        break;
                    }
                }
                let prod = prod.expect("q ≥ 1");
                if prod.is_zero() {
                    continue;
                }
                let j = lower[0];
                if *sign > 0 {
                    out[i][j].add_assign(&prod);
                } else {
                    out[i][j].sub_assign(&prod);
                }
            }
        });
    }
    out
}

fn ordered(m: usize, len: usize, tuple: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if tuple.len() == len + 1 {
        f(tuple);
        return;
    }
    for v in 0..m {
        if tuple.contains(&v) {
            continue;
        }
        tuple.push(v);
        ordered(m, len, tuple, f);
        tuple.pop();
    }
}

/// The Kronecker-delta expression with its free index lowered,
/// `K_ij = g_ik K^k_j`.
pub fn ricci_2q_kronecker<S: DiffRing>(g: &MetricJet<S>, q: usize) -> Result<Warned<Vec<Vec<S>>>> {
    let warnings = check_q(g.dim(), q)?;
    let geo = Geometry::new(g)?;
    let mixed = geo.riemann().raise_second(&geo.ginv);
    let k = kronecker_sum(&mixed, q);
    let m = geo.dim();
    let value = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = geo.zero();
                    for l in 0..m {
                        acc.add_mul_assign(&geo.g[i][l], &k[l][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Ok(Warned { value, warnings })
}
