//! Standard model metrics as jets.

use crate::error::{Error, Result};
use crate::jets::{Chart, MetricJet, ScalarJet};
use crate::ring::Ring;
use crate::scalar::Q;

/// `exp(f)` for a jet whose constant term is zero.
pub fn exp_jet(f: &ScalarJet) -> Result<ScalarJet> {
    if !f.at_origin().is_zero() {
        return Err(Error::Invalid("exp needs a jet without constant term".into()));
    }
    if f.is_zero_jet() && f.is_exact() {
        return Ok(f.one_like());
    }
    let mut sum = f.one_like();
    let mut pw = f.one_like();
    for k in 1..=f.cap() {
        pw = pw.mul(f).scale(&Q::new(1, k as i64));
        sum = sum.add(&pw);
    }
    // the series is cut off, so terms beyond the cap are unknown
    Ok(sum.truncated(f.cap() as i32))
}

/// Scalar multiple of the identity metric, `s · δ`.
pub fn conformal_identity(m: usize, chart: Chart, s: &ScalarJet) -> MetricJet<ScalarJet> {
    let z = s.zero_like();
    let g = (0..m).map(|i| (0..m).map(|j| if i == j { s.clone() } else { z.clone() }).collect()).collect();
    MetricJet { chart, g }
}

/// Hyperbolic metric of sectional curvature `−κ` around an interior point:
/// `κ^{−1} ℓ^{−2} δ` with `ℓ = 1 + (3/5) y₀ + (4/5) y₁`. The level sets of
/// `ℓ` are tilted against the chart so no coordinate plays a special role.
/// Jets live in two variables.
pub fn hyperbolic(m: usize, cap: u32, kappa: &Q) -> Result<MetricJet<ScalarJet>> {
    if m < 2 {
        return Err(Error::Dimension("hyperbolic model needs m ≥ 2".into()));
    }
    let l = ScalarJet::from_terms(2, cap, &[(vec![0, 0], Q::ONE), (vec![1, 0], Q::new(3, 5)), (vec![0, 1], Q::new(4, 5))])?;
    let k = kappa.recip().ok_or_else(|| Error::Invalid("κ must be nonzero".into()))?;
    let s = l.mul(&l).inverse()?.scale(&k);
    Ok(conformal_identity(m, Chart::leading(m, 2), &s))
}

/// Round sphere of sectional curvature `κ` in stereographic coordinates,
/// `4 δ/(1 + κ|y|²)²`, all coordinates active.
pub fn sphere(m: usize, cap: u32, kappa: &Q) -> Result<MetricJet<ScalarJet>> {
    let mut terms = vec![(vec![0u8; m], Q::ONE)];
    for i in 0..m {
        let mut e = vec![0u8; m];
        e[i] = 2;
        terms.push((e, kappa.clone()));
    }
    let d = ScalarJet::from_terms(m, cap, &terms)?;
    let s = d.mul(&d).inverse()?.scale(&Q::int(4));
    Ok(conformal_identity(m, Chart::identity(m), &s))
}

/// `e^{2φ} δ` on a chart whose first `nvars` coordinates are active.
pub fn conformally_flat(m: usize, phi: &ScalarJet) -> Result<MetricJet<ScalarJet>> {
    let s = exp_jet(&phi.scale(&Q::int(2)))?;
    Ok(conformal_identity(m, Chart::leading(m, phi.nvars().min(m)), &s))
}

/// Flat metric `δ` with constant jets.
pub fn flat(m: usize, nvars: usize, cap: u32) -> MetricJet<ScalarJet> {
    let one = ScalarJet::constant(nvars, cap, Q::ONE);
    conformal_identity(m, Chart::leading(m, nvars.min(m)), &one)
}
