use crate::error::{Error, Result};
use crate::ring::{invert_matrix, DiffRing, Ring};
use crate::scalar::Q;

/// Map from tensor coordinates to jet variables. Coordinates without a jet
/// variable are directions along which every component is constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub dim: usize,
    pub var_of: Vec<Option<usize>>,
}

impl Chart {
    /// Coordinate `i` is jet variable `i`.
    pub fn identity(dim: usize) -> Chart {
        Chart { dim, var_of: (0..dim).map(Some).collect() }
    }

    /// Only the first `active` coordinates carry jet variables.
    pub fn leading(dim: usize, active: usize) -> Chart {
        Chart { dim, var_of: (0..dim).map(|i| (i < active).then_some(i)).collect() }
    }

    /// Partial derivative along coordinate `c`.
    pub fn d<S: DiffRing>(&self, s: &S, c: usize) -> S {
        match self.var_of[c] {
            Some(v) => s.diff(v),
            None => s.zero_like(),
        }
    }
}

/// Jet-valued tensor with `cov` lower and `con` upper indices, stored densely
/// with the upper indices first.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorJet<S> {
    pub dim: usize,
    pub cov: usize,
    pub con: usize,
    pub symmetric: bool,
    pub entries: Vec<S>,
}

impl<S: Ring> TensorJet<S> {
    /// Symmetric covariant 2-tensor; rejects asymmetric input.
    pub fn symmetric2(m: Vec<Vec<S>>) -> Result<TensorJet<S>> {
        let dim = m.len();
        for i in 0..dim {
            if m[i].len() != dim {
                return Err(Error::Dimension("ragged matrix".into()));
            }
            for j in 0..i {
                if !m[i][j].sub(&m[j][i]).is_zero() {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(TensorJet { dim, cov: 2, con: 0, symmetric: true, entries: m.into_iter().flatten().collect() })
    }

    pub fn get2(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.dim + j]
    }

    pub fn matrix(&self) -> Vec<Vec<S>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn map<T: Ring>(&self, f: impl Fn(&S) -> T) -> TensorJet<T> {
        TensorJet {
            dim: self.dim,
            cov: self.cov,
            con: self.con,
            symmetric: self.symmetric,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Ring::is_zero)
    }
}

/// Symmetric metric jet on a chart with an invertible, positive definite
/// constant term.
#[derive(Clone, Debug)]
pub struct MetricJet<S> {
    pub chart: Chart,
    pub g: Vec<Vec<S>>,
}

/// Positive definiteness of a symmetric rational matrix via leading minors.
pub fn is_positive_definite(a: &[Vec<Q>]) -> bool {
    let n = a.len();
    for k in 1..=n {
        let sub: Vec<Vec<Q>> = a[..k].iter().map(|r| r[..k].to_vec()).collect();
        if determinant(&sub).signum() <= 0 {
            return false;
        }
    }
    true
}

/// Exact determinant by fraction-valued Gaussian elimination.
pub fn determinant(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Q::ONE;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Q::ZERO;
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det = &det * &m[c][c];
        let inv = m[c][c].recip().unwrap();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] * &inv;
            for j in c..n {
                let t = &m[c][j] * &f;
                m[r][j] -= &t;
            }
        }
    }
    det
}

impl<S: DiffRing> MetricJet<S> {
    pub fn new(chart: Chart, g: Vec<Vec<S>>, base: impl Fn(&S) -> Q) -> Result<MetricJet<S>> {
        let m = chart.dim;
        if g.len() != m || g.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension(format!("metric must be {m}x{m}")));
        }
        for i in 0..m {
            for j in 0..i {
                if !g[i][j].sub(&g[j][i]).is_zero() {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        let b: Vec<Vec<Q>> = g.iter().map(|r| r.iter().map(&base).collect()).collect();
        if !is_positive_definite(&b) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(MetricJet { chart, g })
    }

    pub fn dim(&self) -> usize {
        self.chart.dim
    }

    pub fn inverse(&self) -> Result<Vec<Vec<S>>> {
        invert_matrix(&self.g).ok_or_else(|| Error::Singular("metric".into()))
    }

    pub fn tensor(&self) -> TensorJet<S> {
        TensorJet {
            dim: self.dim(),
            cov: 2,
            con: 0,
            symmetric: true,
            entries: self.g.iter().flatten().cloned().collect(),
        }
    }
}
