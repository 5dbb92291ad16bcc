use serde::Serialize;

use super::{fg_solve, log_coefficient, BoundaryData, Engine, ExpansionTable, FgOptions};
use crate::curvature::{delta, richardson, CouplingVector, Geometry};
use crate::error::{Error, Result};
use crate::jets::ScalarJet;
use crate::ring::Ring;
use crate::scalar::Q;

/// `𝒪 = tf_{h₀}` of the `x^{n−2}` coefficient of `F_α(g)` for the solution
/// through order `n − 2`, with the automatic structure checks.
#[derive(Clone, Debug)]
pub struct ObstructionTensor {
    pub n: usize,
    pub o: Vec<Vec<ScalarJet>>,
    pub trace_free: bool,
    pub divergence_free: bool,
    pub table: ExpansionTable,
}

impl ObstructionTensor {
    pub fn is_zero(&self) -> bool {
        self.o.iter().flatten().all(ScalarJet::is_zero_jet)
    }

    pub fn at_origin(&self) -> Vec<Vec<Q>> {
        self.o.iter().map(|r| r.iter().map(ScalarJet::at_origin).collect()).collect()
    }
}

pub fn obstruction_tensor(bd: &BoundaryData, cv: &CouplingVector) -> Result<ObstructionTensor> {
    let n = bd.n;
    if n % 2 == 1 {
        return Err(Error::Unsupported("the obstruction tensor is defined for even n".into()));
    }
    if bd.cap < n as u32 + 2 {
        return Err(Error::Invalid(format!("obstruction runs need cap ≥ n + 2 = {}", n + 2)));
    }
    let table = fg_solve(bd, cv, n - 2, &FgOptions::default())?;
    let eng = Engine::new(bd, cv)?;
    let res = eng.residual(&table.h_x(), None)?;
    let o = eng.trace_free(&eng.block_coeff(&res, n as u32));
    let trace_free = eng.trace(&o).is_zero_jet();
    let geo = Geometry::new(&bd.boundary_metric())?;
    let divergence_free = delta(&geo, &o)?.iter().all(ScalarJet::is_zero_jet);
    Ok(ObstructionTensor { n, o, trace_free, divergence_free, table })
}

/// `𝒪 = ½ n A₁ h_{n,1}`: the log coefficient implied by an obstruction.
pub fn log_from_obstruction(o: &ObstructionTensor, cv: &CouplingVector) -> Vec<Vec<ScalarJet>> {
    let c = -&log_coefficient(cv).recip().expect("A₁ ≠ 0 under the gate");
    o.o.iter().map(|r| r.iter().map(|s| s.scale_q(&c)).collect()).collect()
}

/// Comparison of the linearized obstruction at the flat metric with the
/// leading-order prediction.
#[derive(Clone, Debug, Serialize)]
pub struct LeadingReport {
    pub computed: Vec<Vec<Q>>,
    pub predicted: Vec<Vec<Q>>,
    /// `max |computed − predicted| / max |predicted|` over components.
    pub max_relative: f64,
    pub eps: Vec<Q>,
}

/// `(A₁/c_n) Δ^{n/2−2}(∂_k∂_k P_ij − ∂_i∂_j J)` at the base point, for the
/// Schouten tensor linearized at the flat metric in direction `φ`, with
/// `Δ = Σ_k ∂_k∂_k`.
pub fn leading_prediction(bd: &BoundaryData, cv: &CouplingVector, phi: &[Vec<ScalarJet>]) -> Result<Vec<Vec<Q>>> {
    let n = bd.n;
    let cn = CouplingVector::c_n(n).ok_or_else(|| Error::Unsupported("c_n needs even n ≥ 4".into()))?;
    let chart = bd.boundary_chart();
    let d = |s: &ScalarJet, a: usize| chart.d(s, a);
    let dd = |s: &ScalarJet, a: usize, b: usize| d(&d(s, a), b);
    let zero = bd.zero();
    let tr = (0..n).fold(zero.clone(), |acc, k| acc.add(&phi[k][k]));
    let mut scal = zero.clone();
    for i in 0..n {
        scal = scal.sub(&dd(&tr, i, i));
        for j in 0..n {
            scal = scal.add(&dd(&phi[i][j], i, j));
        }
    }
    let jj = scal.scale_q(&Q::new(1, 2 * (n as i64 - 1)));
    let mut p = vec![vec![zero.clone(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut ric = dd(&tr, i, j).neg();
            for k in 0..n {
                ric = ric.add(&dd(&phi[k][j], k, i)).add(&dd(&phi[k][i], k, j)).sub(&dd(&phi[i][j], k, k));
            }
            let mut v = ric.scale_q(&Q::new(1, 2));
            if i == j {
                v = v.sub(&jj);
            }
            p[i][j] = v.scale_q(&Q::new(1, n as i64 - 2));
        }
    }
    let lap = |s: &ScalarJet| (0..n).fold(zero.clone(), |acc, k| acc.add(&dd(s, k, k)));
    let scale = &cv.a1() / &cn;
    let mut out = vec![vec![Q::ZERO; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut b = lap(&p[i][j]).sub(&dd(&jj, i, j));
            for _ in 0..(n / 2 - 2) {
                b = lap(&b);
            }
            out[i][j] = &b.at_origin() * &scale;
        }
    }
    Ok(out)
}

/// Linearizes `𝒪` at the flat metric in direction `φ` by central differences
/// at each `eps`, extrapolates, and compares with [`leading_prediction`].
pub fn obstruction_leading_check(
    cv: &CouplingVector,
    n: usize,
    active: usize,
    cap: u32,
    phi: &[Vec<ScalarJet>],
    eps: &[Q],
) -> Result<LeadingReport> {
    let flat = BoundaryData::flat(n, active, cap);
    let mut samples: Vec<Vec<Q>> = vec![Vec::new(); n * n];
    for e in eps {
        let plus = obstruction_tensor(&flat.perturbed(phi, e)?, cv)?.at_origin();
        let minus = obstruction_tensor(&flat.perturbed(phi, &-e)?, cv)?.at_origin();
        let inv = (e * &Q::int(2)).recip().ok_or_else(|| Error::Invalid("eps must be nonzero".into()))?;
        for i in 0..n {
            for j in 0..n {
                samples[i * n + j].push(&(&plus[i][j] - &minus[i][j]) * &inv);
            }
        }
    }
    let mut computed = vec![vec![Q::ZERO; n]; n];
    for (idx, s) in samples.into_iter().enumerate() {
        computed[idx / n][idx % n] = richardson(eps, s)?;
    }
    let predicted = leading_prediction(&flat, cv, phi)?;
    let scale = predicted.iter().flatten().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
    let diff = computed
        .iter()
        .flatten()
        .zip(predicted.iter().flatten())
        .map(|(c, p)| (c - p).to_f64().abs())
        .fold(0.0, f64::max);
    let max_relative = if scale > 0.0 {
        diff / scale
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(LeadingReport { computed, predicted, max_relative, eps: eps.to_vec() })
}
