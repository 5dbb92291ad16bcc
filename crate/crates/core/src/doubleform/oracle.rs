//! Brute-force reference implementations over full index tuples.
//!
//! These follow the defining sums literally and are meant for testing the
//! optimized routines on small dimensions.

use crate::doubleform::DoubleForm;
use crate::error::Result;
use crate::ring::{invert_matrix, Ring};
use crate::scalar::Q;

fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap(n, &mut cur, &mut out);
    out.into_iter()
        .map(|p| {
            let odd = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count() % 2 == 1;
            (p, odd)
        })
        .collect()
}

fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k - 1 {
        heap(k - 1, a, out);
        if k % 2 == 0 {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap(k - 1, a, out);
}

fn sorted_tuples(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(m, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Kulkarni–Nomizu product from the antisymmetrized sum with the
/// `1/(p! q! r! s!)` normalization.
pub fn kn_bruteforce(w: &DoubleForm<Q>, e: &DoubleForm<Q>) -> DoubleForm<Q> {
    let ((p, q), (r, s), m) = (w.bidegree(), e.bidegree(), w.dim());
    let mut out = DoubleForm::zeros(p + r, q + s, m, Q::ZERO);
    if p + r > m || q + s > m {
        return out;
    }
    let norm = (&(&Q::factorial(p as u32) * &Q::factorial(q as u32)) * &(&Q::factorial(r as u32) * &Q::factorial(s as u32)))
        .recip()
        .unwrap();
    let ps = permutations(p + r);
    let qs = permutations(q + s);
    for xi in sorted_tuples(m, p + r) {
        for yj in sorted_tuples(m, q + s) {
            let mut acc = Q::ZERO;
            for (sp, so) in &ps {
                let x: Vec<usize> = sp.iter().map(|&k| xi[k]).collect();
                for (tp, to) in &qs {
                    let y: Vec<usize> = tp.iter().map(|&k| yj[k]).collect();
                    let v = &w.get(&x[..p], &y[..q]) * &e.get(&x[p..], &y[q..]);
                    if so ^ to {
                        acc -= &v;
                    } else {
                        acc += &v;
                    }
                }
            }
            out.set(&xi, &yj, &acc * &norm);
        }
    }
    out
}

/// One contraction `Σ_{a,b} g^{ab} ω(a, I; b, J)` evaluated through
/// unsorted component access.
pub fn contract_bruteforce(w: &DoubleForm<Q>, ginv: &[Vec<Q>]) -> DoubleForm<Q> {
    let (p, q) = w.bidegree();
    let m = w.dim();
    let mut out = DoubleForm::zeros(p.saturating_sub(1), q.saturating_sub(1), m, Q::ZERO);
    if p == 0 || q == 0 || p > m || q > m {
        return out;
    }
    for xi in sorted_tuples(m, p - 1) {
        for yj in sorted_tuples(m, q - 1) {
            let mut acc = Q::ZERO;
            for a in 0..m {
                for b in 0..m {
                    let mut x = vec![a];
                    x.extend(&xi);
                    let mut y = vec![b];
                    y.extend(&yj);
                    acc += &(&ginv[a][b] * &w.get(&x, &y));
                }
            }
            out.set(&xi, &yj, acc);
        }
    }
    out
}

/// Contraction through a `g`-orthonormal frame for `g = Aᵀ A`: the frame
/// vectors are the columns of `A⁻¹`.
pub fn contract_orthonormal(w: &DoubleForm<Q>, a: &[Vec<Q>]) -> Result<DoubleForm<Q>> {
    let m = a.len();
    let e = invert_matrix(a).ok_or_else(|| crate::Error::Singular("frame".into()))?;
    let (p, q) = w.bidegree();
    let mut out = DoubleForm::zeros(p.saturating_sub(1), q.saturating_sub(1), m, Q::ZERO);
    if p == 0 || q == 0 || p > m || q > m {
        return Ok(out);
    }
    for xi in sorted_tuples(m, p - 1) {
        for yj in sorted_tuples(m, q - 1) {
            let mut acc = Q::ZERO;
            for i in 0..m {
                for s in 0..m {
                    for t in 0..m {
                        let mut x = vec![s];
                        x.extend(&xi);
                        let mut y = vec![t];
                        y.extend(&yj);
                        let c = &e[s][i] * &e[t][i];
                        acc.add_mul_assign(&c, &w.get(&x, &y));
                    }
                }
            }
            out.set(&xi, &yj, acc);
        }
    }
    Ok(out)
}
