//! Problem documents: parsing, validation and the canonical form.

use std::collections::BTreeMap;

use lovelock_core::{Q, ScalarJet};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Curvature,
    FgExpand,
    Obstruction,
    Yamabe,
    Indicial,
    Limsec,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Curvature => "curvature",
            Command::FgExpand => "fg-expand",
            Command::Obstruction => "obstruction",
            Command::Yamabe => "yamabe",
            Command::Indicial => "indicial",
            Command::Limsec => "limsec",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monomial {
    pub exps: Vec<u8>,
    pub coeff: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub i: usize,
    pub j: usize,
    pub monomials: Vec<Monomial>,
}

/// Built-in metrics for the `curvature` command.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Flat,
    Hyperbolic,
    Sphere,
}

/// A symmetric matrix of polynomials. Exponent vectors have one slot per
/// active coordinate; unlisted entries are zero and `(j, i)` mirrors `(i, j)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nvars: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Model>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenOptions {
    #[serde(default = "default_x_min")]
    pub x_min: f64,
    #[serde(default = "default_x_max")]
    pub x_max: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    /// Base point of `G₀`.
    #[serde(default = "default_x_prime")]
    pub x_prime: f64,
}

impl Default for GreenOptions {
    fn default() -> Self {
        GreenOptions { x_min: default_x_min(), x_max: default_x_max(), points: default_points(), x_prime: default_x_prime() }
    }
}

fn default_x_min() -> f64 {
    1e-3
}
fn default_x_max() -> f64 {
    2.0
}
fn default_points() -> usize {
    10_000
}
fn default_x_prime() -> f64 {
    0.5
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Trace-free part of `h_n` (fg-expand).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hn_override: Option<MetricSpec>,
    /// Perturbation of the flat boundary metric for the leading-order
    /// check of the obstruction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<MetricSpec>,
    /// Step sizes of the central differences in that check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Spectral parameter of `Δ + c` (indicial).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Q>,
    /// Highest `q` reported by `curvature` without couplings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    /// Fail with exit status 3 when the LimSec verdict is negative.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub gate: bool,
    /// Report the measured Yamabe linear factors.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub linear_factors: bool,
    /// Also solve on `Ω² ḡ` and compare log terms (yamabe).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Q>,
    /// Run the model Green's operators (indicial).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub green: Option<GreenOptions>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub command: Command,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alpha: Vec<Q>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub beta: Vec<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub options: Options,
}

fn is_default(o: &Options) -> bool {
    *o == Options::default()
}

impl ProblemSpec {
    pub fn new(command: Command, n: usize) -> ProblemSpec {
        ProblemSpec {
            command,
            n,
            alpha: Vec::new(),
            beta: Vec::new(),
            kappa: None,
            metric: None,
            cap: None,
            order: None,
            options: Options::default(),
        }
    }

    pub fn parse(text: &str) -> Result<ProblemSpec, CliError> {
        let spec: ProblemSpec = serde_json::from_str(text).map_err(|e| CliError::invalid(format!("problem document: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn kappa(&self) -> Q {
        self.kappa.clone().unwrap_or(Q::ONE)
    }

    /// Structural checks that do not need the solvers.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.n < 1 {
            return Err(CliError::invalid("n must be positive"));
        }
        if let Some(m) = &self.metric {
            m.validate()?;
            let want = match self.command {
                Command::Curvature => self.n + 1,
                _ => self.n,
            };
            if m.dim != want {
                return Err(CliError::invalid(format!("{} expects a metric of dimension {want}, got {}", self.command.name(), m.dim)));
            }
            if m.model.is_some() && self.command != Command::Curvature {
                return Err(CliError::invalid("model metrics are only available to the curvature command"));
            }
        }
        for h in [&self.options.hn_override, &self.options.phi].into_iter().flatten() {
            h.validate()?;
            if h.dim != self.n {
                return Err(CliError::invalid(format!("options tensors must be {0}x{0}", self.n)));
            }
        }
        if let Some(g) = &self.options.green {
            if !(g.x_min > 0.0 && g.x_max > g.x_min && g.points >= 16 && g.x_prime > 0.0) {
                return Err(CliError::invalid("green options need 0 < x_min < x_max, x_prime > 0 and at least 16 points"));
            }
        }
        match self.command {
            Command::Curvature => {
                if self.metric.is_none() {
                    return Err(CliError::invalid("curvature needs a metric"));
                }
            }
            Command::FgExpand | Command::Obstruction | Command::Limsec => {
                if self.alpha.is_empty() {
                    return Err(CliError::invalid(format!("{} needs alpha", self.command.name())));
                }
            }
            Command::Yamabe => {
                if self.beta.is_empty() && self.alpha.is_empty() {
                    return Err(CliError::invalid("yamabe needs beta"));
                }
            }
            Command::Indicial => {
                if self.options.c.is_none() {
                    return Err(CliError::invalid("indicial needs options.c"));
                }
            }
        }
        Ok(())
    }

    /// Normal form: reduced rationals, entries with `i ≤ j` sorted, like
    /// monomials merged and zero terms dropped.
    pub fn canonical(&self) -> ProblemSpec {
        let mut s = self.clone();
        s.metric = s.metric.map(|m| m.canonical());
        s.options.hn_override = s.options.hn_override.map(|m| m.canonical());
        s.options.phi = s.options.phi.map(|m| m.canonical());
        s
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(&self.canonical()).expect("problem documents serialize")
    }
}

impl MetricSpec {
    pub fn nvars(&self) -> usize {
        self.nvars.unwrap_or(self.dim)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.dim == 0 {
            return Err(CliError::invalid("metric dimension must be positive"));
        }
        if self.nvars() > self.dim {
            return Err(CliError::invalid("metric nvars exceeds its dimension"));
        }
        if self.model.is_some() && !self.entries.is_empty() {
            return Err(CliError::invalid("give either a model or entries, not both"));
        }
        for e in &self.entries {
            if e.i >= self.dim || e.j >= self.dim {
                return Err(CliError::invalid(format!("entry ({}, {}) outside a {}-dimensional metric", e.i, e.j, self.dim)));
            }
            for m in &e.monomials {
                if m.exps.len() != self.nvars() {
                    return Err(CliError::invalid(format!(
                        "monomial exponents {:?} must have {} slots",
                        m.exps,
                        self.nvars()
                    )));
                }
            }
        }
        Ok(())
    }

    fn merged(&self) -> Result<BTreeMap<(usize, usize), BTreeMap<Vec<u8>, Q>>, CliError> {
        let mut seen: BTreeMap<(usize, usize), BTreeMap<Vec<u8>, Q>> = BTreeMap::new();
        let mut direction: BTreeMap<(usize, usize), bool> = BTreeMap::new();
        for e in &self.entries {
            let key = (e.i.min(e.j), e.i.max(e.j));
            let upper = e.i <= e.j;
            if let Some(&prev) = direction.get(&key) {
                if prev != upper && e.i != e.j {
                    return Err(CliError::invalid(format!("entries ({}, {}) and ({}, {}) both given", e.i, e.j, e.j, e.i)));
                }
            }
            direction.insert(key, upper);
            let slot = seen.entry(key).or_default();
            for m in &e.monomials {
                let c = slot.entry(m.exps.clone()).or_insert(Q::ZERO);
                *c = &*c + &m.coeff;
            }
        }
        for slot in seen.values_mut() {
            slot.retain(|_, c| !c.is_zero());
        }
        Ok(seen)
    }

    fn canonical(&self) -> MetricSpec {
        let entries = match self.merged() {
            Ok(m) => m
                .into_iter()
                .filter(|(_, terms)| !terms.is_empty())
                .map(|((i, j), terms)| Entry {
                    i,
                    j,
                    monomials: terms.into_iter().map(|(exps, coeff)| Monomial { exps, coeff }).collect(),
                })
                .collect(),
            Err(_) => self.entries.clone(),
        };
        MetricSpec { entries, ..self.clone() }
    }

    /// The matrix of jets with `offset` leading jet variables reserved
    /// (one for `x` on boundary data).
    pub fn jets(&self, offset: usize, cap: u32) -> Result<Vec<Vec<ScalarJet>>, CliError> {
        let nv = self.nvars() + offset;
        let mut g = vec![vec![ScalarJet::zero(nv, cap); self.dim]; self.dim];
        for ((i, j), terms) in self.merged()? {
            let t: Vec<(Vec<u8>, Q)> = terms
                .into_iter()
                .map(|(e, c)| {
                    let mut full = vec![0u8; offset];
                    full.extend(e);
                    (full, c)
                })
                .collect();
            let s = ScalarJet::from_terms(nv, cap, &t).map_err(CliError::from)?;
            g[i][j] = s.clone();
            g[j][i] = s;
        }
        Ok(g)
    }
}
