//! Model Green's operators of `M = (x∂_x)² − n x∂_x − c` with indicial roots
//! `α₋ < α₊`, normalized so that `M ∘ G = −id`. Integrals are taken in
//! `τ = log x` with composite Gauss–Legendre rules.

use serde::Serialize;

use crate::error::{Error, Result};

/// Points `x_k` equally spaced in `log x`.
#[derive(Clone, Debug, Serialize)]
pub struct LogGrid {
    pub x: Vec<f64>,
    tau0: f64,
    h: f64,
}

impl LogGrid {
    pub fn new(x_min: f64, x_max: f64, points: usize) -> Result<LogGrid> {
        if !(x_min > 0.0 && x_max > x_min && x_max.is_finite()) || points < 2 {
            return Err(Error::Invalid("log grid needs 0 < x_min < x_max and at least 2 points".into()));
        }
        let tau0 = x_min.ln();
        let h = (x_max.ln() - tau0) / (points - 1) as f64;
        let x = (0..points).map(|k| (tau0 + h * k as f64).exp()).collect();
        Ok(LogGrid { x, tau0, h })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn tau(&self, k: usize) -> f64 {
        self.tau0 + self.h * k as f64
    }

    pub fn step(&self) -> f64 {
        self.h
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadratureOptions {
    /// Gauss–Legendre points per panel.
    pub order: usize,
    /// Relative panel tolerance.
    pub tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { order: 10, tol: 1e-13, max_depth: 24 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GreenKind {
    /// Both integrals from 0; a right inverse on weights above `α₊`.
    Infinity,
    /// The `α₊` integral starts at `x′`; weights in `(α₋, α₊]`.
    Zero { x_prime: f64 },
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    /// Legendre roots by Newton iteration from the Chebyshev guesses.
    fn gauss_legendre(k: usize) -> Rule {
        let mut nodes = vec![0.0; k];
        let mut weights = vec![0.0; k];
        for i in 0..k {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for j in 2..=k {
                    let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = k as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = z;
            weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        Rule { nodes, weights }
    }

    fn apply(&self, g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
        half * self.nodes.iter().zip(&self.weights).map(|(z, w)| w * g(mid + half * z)).sum::<f64>()
    }

    fn apply_abs(&self, g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
        half.abs() * self.nodes.iter().zip(&self.weights).map(|(z, w)| w * g(mid + half * z).abs()).sum::<f64>()
    }

    fn adaptive(&self, g: &dyn Fn(f64) -> f64, a: f64, b: f64, opts: &QuadratureOptions, depth: u32) -> Result<f64> {
        let whole = self.apply(g, a, b);
        let m = (a + b) / 2.0;
        let halves = self.apply(g, a, m) + self.apply(g, m, b);
        if !halves.is_finite() {
            return Err(Error::Tolerance(format!("non-finite integrand on [{a}, {b}] in log x")));
        }
        let scale = halves.abs().max(self.apply_abs(g, a, b));
        if (whole - halves).abs() <= opts.tol * scale || (whole - halves).abs() < f64::MIN_POSITIVE {
            return Ok(halves);
        }
        if depth >= opts.max_depth {
            return Err(Error::Tolerance(format!("panel [{a}, {b}] in log x missed tolerance {}", opts.tol)));
        }
        Ok(self.adaptive(g, a, m, opts, depth + 1)? + self.adaptive(g, m, b, opts, depth + 1)?)
    }

    /// `∫_{−∞}^{b}` with geometrically widening panels.
    fn tail(&self, g: &dyn Fn(f64) -> f64, b: f64, w0: f64, opts: &QuadratureOptions) -> Result<f64> {
        let mut sum = 0.0;
        let mut hi = b;
        let mut w = w0;
        let mut quiet = 0;
        for _ in 0..4000 {
            let p = self.adaptive(g, hi - w, hi, opts, 0)?;
            sum += p;
            hi -= w;
            w = (w * 2.0).min(1.0);
            if p.abs() <= 1e-18 * sum.abs() || (p == 0.0 && sum == 0.0) {
                quiet += 1;
                if quiet >= 3 {
                    return Ok(sum);
                }
            } else {
                quiet = 0;
            }
        }
        Err(Error::Tolerance("integrand does not decay as x → 0; the weight is below the root".into()))
    }

    /// `∫` over `[a, b]` split into panels of width at most `w`.
    fn span(&self, g: &dyn Fn(f64) -> f64, a: f64, b: f64, w: f64, opts: &QuadratureOptions) -> Result<f64> {
        let pieces = ((b - a).abs() / w).ceil().max(1.0) as usize;
        let step = (b - a) / pieces as f64;
        let mut s = 0.0;
        for i in 0..pieces {
            s += self.adaptive(g, a + step * i as f64, a + step * (i + 1) as f64, opts, 0)?;
        }
        Ok(s)
    }
}

/// `∫_{x₀}^{x_k} t^{−α−1} f(t) dt` at every grid point, plus the part from
/// 0 to `x₀` when `from_zero`.
fn cumulative(rule: &Rule, f: &dyn Fn(f64) -> f64, alpha: f64, grid: &LogGrid, from_zero: bool, opts: &QuadratureOptions) -> Result<Vec<f64>> {
    let g = |tau: f64| (-alpha * tau).exp() * f(tau.exp());
    let mut acc = if from_zero { rule.tail(&g, grid.tau(0), grid.step(), opts)? } else { 0.0 };
    let mut out = Vec::with_capacity(grid.len());
    out.push(acc);
    for k in 1..grid.len() {
        acc += rule.adaptive(&g, grid.tau(k - 1), grid.tau(k), opts, 0)?;
        out.push(acc);
    }
    Ok(out)
}

/// `∫_{x′}^{x_k} t^{−α−1} f(t) dt`, accumulated outward from the grid point
/// nearest `x′` so values near `x′` carry no cancellation.
fn anchored(rule: &Rule, f: &dyn Fn(f64) -> f64, alpha: f64, grid: &LogGrid, tau_prime: f64, opts: &QuadratureOptions) -> Result<Vec<f64>> {
    let g = |tau: f64| (-alpha * tau).exp() * f(tau.exp());
    let last = grid.len() - 1;
    let k0 = (((tau_prime - grid.tau(0)) / grid.step()).round().max(0.0) as usize).min(last);
    let mut out = vec![0.0; grid.len()];
    out[k0] = rule.span(&g, tau_prime, grid.tau(k0), grid.step(), opts)?;
    for k in k0 + 1..=last {
        out[k] = out[k - 1] + rule.adaptive(&g, grid.tau(k - 1), grid.tau(k), opts, 0)?;
    }
    for k in (0..k0).rev() {
        out[k] = out[k + 1] - rule.adaptive(&g, grid.tau(k), grid.tau(k + 1), opts, 0)?;
    }
    Ok(out)
}

/// `G(f)` sampled on the grid:
/// `(x^{α₋} ∫₀^x t^{−α₋−1} f − x^{α₊} ∫_{0 or x′}^x t^{−α₊−1} f)/(α₊ − α₋)`.
pub fn green_apply(
    kind: GreenKind,
    f: &dyn Fn(f64) -> f64,
    grid: &LogGrid,
    alpha_minus: f64,
    alpha_plus: f64,
    opts: &QuadratureOptions,
) -> Result<Vec<f64>> {
    if !(alpha_minus < alpha_plus) {
        return Err(Error::Invalid("Green's operators need real roots α₋ < α₊".into()));
    }
    let rule = Rule::gauss_legendre(opts.order);
    let lower = cumulative(&rule, f, alpha_minus, grid, true, opts)?;
    let upper = match kind {
        GreenKind::Infinity => cumulative(&rule, f, alpha_plus, grid, true, opts)?,
        GreenKind::Zero { x_prime } => {
            if x_prime <= 0.0 {
                return Err(Error::Invalid("x′ must be positive".into()));
            }
            anchored(&rule, f, alpha_plus, grid, x_prime.ln(), opts)?
        }
    };
    let d = alpha_plus - alpha_minus;
    Ok((0..grid.len())
        .map(|k| {
            let t = grid.tau(k);
            ((alpha_minus * t).exp() * lower[k] - (alpha_plus * t).exp() * upper[k]) / d
        })
        .collect())
}

const D1: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
const D2: [f64; 5] = [-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];

/// `(x∂_x)² v − n x∂_x v − c v` with `n = α₊ + α₋`, `c = −α₊α₋`, by
/// eighth-order central differences in `log x`; `None` within four points
/// of either end.
pub fn model_operator(grid: &LogGrid, v: &[f64], alpha_minus: f64, alpha_plus: f64) -> Vec<Option<f64>> {
    let n = alpha_plus + alpha_minus;
    let c = -alpha_plus * alpha_minus;
    let h = grid.step();
    (0..v.len())
        .map(|k| {
            if k < 4 || k + 4 >= v.len() {
                return None;
            }
            let mut d1 = 0.0;
            let mut d2 = D2[0] * v[k];
            for j in 1..=4 {
                d1 += D1[j - 1] * (v[k + j] - v[k - j]);
                d2 += D2[j] * (v[k + j] + v[k - j]);
            }
            Some(d2 / (h * h) - n * d1 / h - c * v[k])
        })
        .collect()
}

/// `max |M G(f) + f| / max |f|` over the interior grid points.
pub fn right_inverse_residual(grid: &LogGrid, f: &[f64], gf: &[f64], alpha_minus: f64, alpha_plus: f64) -> f64 {
    let mo = model_operator(grid, gf, alpha_minus, alpha_plus);
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for (k, m) in mo.iter().enumerate() {
        if let Some(m) = m {
            num = num.max((m + f[k]).abs());
            den = den.max(f[k].abs());
        }
    }
    num / den
}

/// Least-squares fit `v(x) ≈ x^α (a + b log x)`; returns `(a, b)`.
pub fn fit_log_coefficient(grid: &LogGrid, v: &[f64], alpha: f64) -> (f64, f64) {
    let m = grid.len() as f64;
    let (mut st, mut sy, mut stt, mut sty) = (0.0, 0.0, 0.0, 0.0);
    for (k, vk) in v.iter().enumerate() {
        let t = grid.tau(k);
        let y = vk * (-alpha * t).exp();
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    let b = (m * sty - st * sy) / (m * stt - st * st);
    ((sy - b * st) / m, b)
}
