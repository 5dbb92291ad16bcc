//! Dispatch of problem documents to the solvers.

use lovelock_core::curvature::{form_matrix, limsec_check, lovelock_tensor, ricci_2q, scalar_2q};
use lovelock_core::fg_expansion::obstruction::log_from_obstruction;
use lovelock_core::fg_expansion::{
    fg_solve, obstruction_leading_check, obstruction_tensor, BoundaryData, ExpansionTable, FgOptions,
    ResidualOrder,
};
use lovelock_core::indicial::{
    fit_log_coefficient, green_apply, indicial_radius, indicial_spectrum, right_inverse_residual, GreenKind, LogGrid,
    QuadratureOptions,
};
use lovelock_core::jets::{Chart, MetricJet};
use lovelock_core::models;
use lovelock_core::yamabe::{measure_linear_factor, yamabe_conformal_check, yamabe_solve, YamabeProblem};
use lovelock_core::{CouplingVector, XJet, Q, ScalarJet};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::report::{self, Report};
use crate::spec::{Command, GreenOptions, MetricSpec, Model, ProblemSpec};

/// Default right-inverse tolerance of the Green's operator check.
pub const GREEN_TOLERANCE: f64 = 1e-6;
/// Default bound on the relative discrepancy of the leading-order check.
pub const LEADING_TOLERANCE: f64 = 1e-4;

/// Settings that come from the command line rather than the document.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub tolerance: Option<f64>,
}

pub fn run(spec: &ProblemSpec, cfg: &RunConfig) -> Result<Report, CliError> {
    spec.validate()?;
    match spec.command {
        Command::Curvature => curvature(spec),
        Command::FgExpand => fg_expand(spec),
        Command::Obstruction => obstruction(spec),
        Command::Yamabe => yamabe(spec),
        Command::Indicial => indicial(spec, cfg),
        Command::Limsec => limsec(spec),
    }
}

fn curvature(spec: &ProblemSpec) -> Result<Report, CliError> {
    let m = spec.metric.as_ref().expect("validated");
    let cap = spec.cap.unwrap_or(4);
    let kappa = spec.kappa();
    let g = match m.model {
        Some(Model::Flat) => models::flat(m.dim, m.nvars(), cap),
        Some(Model::Hyperbolic) => models::hyperbolic(m.dim, cap, &kappa)?,
        Some(Model::Sphere) => models::sphere(m.dim, cap, &kappa)?,
        None => MetricJet::new(Chart::leading(m.dim, m.nvars()), m.jets(0, cap)?, ScalarJet::at_origin)?,
    };
    let mut rep = Report::new("curvature");
    let qmax = if spec.alpha.is_empty() { spec.options.q.unwrap_or(1) } else { spec.alpha.len() };
    let mut ric = Vec::new();
    let mut scal = Vec::new();
    for q in 1..=qmax {
        let r = ricci_2q(&g, q)?;
        let s = scalar_2q(&g, q)?;
        rep.warnings.extend(r.warnings);
        ric.push(report::matrix(&form_matrix(&r.value)));
        scal.push(report::jet(&s.value));
    }
    rep.table("ricci_2q", Value::Array(ric));
    rep.table("scalar_2q", Value::Array(scal));
    if !spec.alpha.is_empty() {
        let cv = CouplingVector::new(spec.n, spec.alpha.clone(), kappa)?;
        let f = form_matrix(&lovelock_tensor(&g, &cv)?);
        let entries: Vec<XJet> = f.iter().flatten().map(|s| XJet::from_plain(s.clone())).collect();
        rep.residual("lovelock_tensor", degree_order(&entries));
        rep.table("lovelock_tensor", report::matrix(&f));
    }
    Ok(rep)
}

/// Lowest total degree among the entries.
fn degree_order(entries: &[XJet]) -> ResidualOrder {
    let mut lowest: Option<u32> = None;
    let mut known = i32::MAX;
    for e in entries {
        if let Some(d) = e.plain.order() {
            lowest = Some(lowest.map_or(d, |l| l.min(d)));
        }
        if !e.plain.is_exact() {
            known = known.min(e.plain.prec());
        }
    }
    match lowest {
        Some(d) if (d as i32) < known => ResidualOrder::Exactly(d as i32),
        _ if known == i32::MAX => ResidualOrder::Exact,
        _ => ResidualOrder::AtLeast(known),
    }
}

fn boundary(spec: &ProblemSpec, cap: u32) -> Result<BoundaryData, CliError> {
    match &spec.metric {
        None => Ok(BoundaryData::flat(spec.n, 0, cap)),
        Some(m) => Ok(BoundaryData::new(spec.n, m.nvars(), cap, m.jets(1, cap)?)?),
    }
}

fn tensor_option(m: &MetricSpec, bd: &BoundaryData) -> Result<Vec<Vec<ScalarJet>>, CliError> {
    if m.nvars() != bd.active {
        return Err(CliError::invalid(format!("options tensors need nvars = {} like the boundary metric", bd.active)));
    }
    m.jets(1, bd.cap)
}

fn couplings(spec: &ProblemSpec) -> Result<CouplingVector, CliError> {
    Ok(CouplingVector::new(spec.n, spec.alpha.clone(), spec.kappa())?)
}

fn boundary_table(bd: &BoundaryData) -> Value {
    json!({ "n": bd.n, "active": bd.active, "cap": bd.cap })
}

fn coupling_table(cv: &CouplingVector) -> Value {
    json!({ "a1": cv.a1(), "b12": cv.b12(), "lambda_alpha": cv.lambda_alpha() })
}

fn expansion_tables(rep: &mut Report, t: &ExpansionTable) {
    rep.table("h", Value::Array(t.h.iter().map(|hk| report::matrix(hk)).collect()));
    rep.table("log", t.log.as_ref().map_or(Value::Null, |l| report::matrix(l)));
    rep.residual("on_diagonal", t.residual.on_diagonal);
    rep.residual("off_diagonal", t.residual.off_diagonal);
}

fn fg_expand(spec: &ProblemSpec) -> Result<Report, CliError> {
    let order = spec.order.unwrap_or(spec.n);
    let cap = spec.cap.unwrap_or(order as u32 + 2);
    let bd = boundary(spec, cap)?;
    let cv = couplings(spec)?;
    let mut opts = FgOptions::default();
    if let Some(h) = &spec.options.hn_override {
        opts.hn_tracefree = Some(tensor_option(h, &bd)?);
    }
    let t = fg_solve(&bd, &cv, order, &opts)?;
    let mut rep = Report::new("fg-expand");
    rep.table("boundary", boundary_table(&bd));
    rep.table("coupling", coupling_table(&cv));
    expansion_tables(&mut rep, &t);
    Ok(rep)
}

fn obstruction(spec: &ProblemSpec) -> Result<Report, CliError> {
    let n = spec.n;
    let cap = spec.cap.unwrap_or(n as u32 + 2);
    let bd = boundary(spec, cap)?;
    let cv = couplings(spec)?;
    let o = obstruction_tensor(&bd, &cv)?;
    let mut rep = Report::new("obstruction");
    rep.table("boundary", boundary_table(&bd));
    rep.table("coupling", coupling_table(&cv));
    rep.table("obstruction", report::matrix(&o.o));
    rep.table("trace_free", json!(o.trace_free));
    rep.table("divergence_free", json!(o.divergence_free));
    rep.table("log_implied", report::matrix(&log_from_obstruction(&o, &cv)));
    expansion_tables(&mut rep, &o.table);
    if !(o.trace_free && o.divergence_free) {
        return Err(CliError::from(lovelock_core::Error::Consistency("obstruction is not trace-free and divergence-free".into()))
            .with_detail(rep.to_value()));
    }
    if let Some(phi) = &spec.options.phi {
        let flat = BoundaryData::flat(n, phi.nvars(), cap);
        let phi = tensor_option(phi, &flat)?;
        let eps = spec.options.eps.clone().unwrap_or_else(|| vec![Q::new(1, 100), Q::new(1, 200), Q::new(1, 400)]);
        let lead = obstruction_leading_check(&cv, n, flat.active, cap, &phi, &eps)?;
        let tol = spec.options.tolerance.unwrap_or(LEADING_TOLERANCE);
        let value = serde_json::to_value(&lead).expect("reports serialize");
        rep.table("leading_order", value);
        if !(lead.max_relative <= tol) {
            return Err(CliError::tolerance(format!("leading-order discrepancy {:e} exceeds {tol:e}", lead.max_relative))
                .with_detail(rep.to_value()));
        }
    }
    Ok(rep)
}

fn yamabe(spec: &ProblemSpec) -> Result<Report, CliError> {
    let n = spec.n;
    if !spec.kappa().is_one() {
        return Err(CliError::invalid("product collars have |du|² = 1 on the boundary; kappa must be 1"));
    }
    let beta = if spec.beta.is_empty() { spec.alpha.clone() } else { spec.beta.clone() };
    let order = spec.order.unwrap_or(n + 2);
    let cap = spec.cap.unwrap_or(n as u32 + 3);
    let p = YamabeProblem::new(boundary(spec, cap)?, beta)?;
    let e = yamabe_solve(&p, order)?;
    let mut rep = Report::new("yamabe");
    rep.table("boundary", boundary_table(&p.bd));
    rep.table("b_tilde", json!(p.b_tilde()));
    rep.table("u", Value::Array(e.u.iter().map(report::jet).collect()));
    rep.table("log", e.log.as_ref().map_or(Value::Null, report::jet));
    rep.table("log_factor", json!(e.log_factor));
    rep.residual("total", e.residual_order);
    if spec.options.linear_factors {
        let mut rows = Vec::new();
        for s in 0..=n {
            let f = measure_linear_factor(&p, s)?;
            if !f.matches_printed() {
                rep.warnings.push(format!(
                    "order {s}: measured derivative factor {} differs from n(s−(n+1))B̃ = {}",
                    f.derivative, f.printed
                ));
            }
            let mut v = serde_json::to_value(&f).expect("reports serialize");
            v["matches_printed"] = json!(f.matches_printed());
            rows.push(v);
        }
        rep.table("linear_factors", Value::Array(rows));
    }
    if let Some(omega) = &spec.options.omega {
        let c = yamabe_conformal_check(&p, omega)?;
        rep.table(
            "conformal",
            json!({
                "omega": c.omega,
                "log": report::jet(&c.log),
                "log_rescaled": report::jet(&c.log_rescaled),
                "expected_ratio": c.expected_ratio,
                "holds": c.holds,
            }),
        );
        if !c.holds {
            return Err(CliError::from(lovelock_core::Error::Consistency("log term does not rescale by Ω^(−n−1)".into()))
                .with_detail(rep.to_value()));
        }
    }
    Ok(rep)
}

fn indicial(spec: &ProblemSpec, cfg: &RunConfig) -> Result<Report, CliError> {
    let n = spec.n;
    let c = spec.options.c.clone().expect("validated");
    let s = indicial_spectrum(n, &c);
    let mut rep = Report::new("indicial");
    rep.table("n", json!(n));
    rep.table("c", json!(c));
    rep.table("roots_functions", report::root_pair(&s.roots_functions));
    rep.table("roots_sym2", Value::Array(s.roots_sym2.iter().map(report::root_pair).collect()));
    rep.table("radius", s.radius.as_ref().map_or(Value::Null, report::surd));
    rep.table("radius_sym2", indicial_radius(n, 2, &c).as_ref().map_or(Value::Null, report::surd));
    if let Some(g) = &spec.options.green {
        let tol = cfg.tolerance.or(spec.options.tolerance).unwrap_or(GREEN_TOLERANCE);
        if s.roots_functions.complex {
            return Err(CliError::invalid("the model Green's operators need real indicial roots"));
        }
        let ap = s.roots_functions.plus.to_f64().expect("real root");
        let am = s.roots_functions.minus.to_f64().expect("real root");
        if ap <= am {
            return Err(CliError::invalid("the model Green's operators need distinct indicial roots"));
        }
        let green = green_check(g, am, ap)?;
        rep.table("green", green.to_value(tol));
        if !green.passes(tol) {
            return Err(CliError::tolerance(format!(
                "Green's operator check failed: residuals {:e}, {:e} (tolerance {tol:e}), log fits {} and {}",
                green.residual_infinity, green.residual_zero, green.log_coarse, green.log_fine
            ))
            .with_detail(rep.to_value()));
        }
    }
    Ok(rep)
}

/// Right-inverse residuals of `G∞` and `G₀` on smooth test functions and
/// the log coefficient of `G₀(x^{α₊})` on two grids.
#[derive(Clone, Debug)]
pub struct GreenCheck {
    pub alpha_minus: f64,
    pub alpha_plus: f64,
    pub residual_infinity: f64,
    pub residual_zero: f64,
    pub log_coarse: f64,
    pub log_fine: f64,
    pub log_expected: f64,
}

/// Relative agreement required of the two log fits (three digits).
pub const LOG_FIT_AGREEMENT: f64 = 1e-3;

impl GreenCheck {
    pub fn log_stable(&self) -> bool {
        self.log_fine != 0.0 && (self.log_coarse - self.log_fine).abs() <= LOG_FIT_AGREEMENT * self.log_fine.abs()
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.residual_infinity <= tol && self.residual_zero <= tol && self.log_stable()
    }

    fn to_value(&self, tol: f64) -> Value {
        json!({
            "alpha_minus": self.alpha_minus,
            "alpha_plus": self.alpha_plus,
            "residual_infinity": self.residual_infinity,
            "residual_zero": self.residual_zero,
            "tolerance": tol,
            "log_coefficient_coarse": self.log_coarse,
            "log_coefficient_fine": self.log_fine,
            "log_coefficient_expected": self.log_expected,
            "log_stable": self.log_stable(),
        })
    }
}

/// `G∞` on `x^{⌈α₊⌉+2} e^{−x}`, `G₀` on `x^w/(1+x²)` with `w` midway between
/// the roots, and `G₀(x^{α₊})` fitted on grids of `points/10` and `points`.
pub fn green_check(g: &GreenOptions, am: f64, ap: f64) -> Result<GreenCheck, CliError> {
    let opts = QuadratureOptions::default();
    let grid = LogGrid::new(g.x_min, g.x_max, g.points)?;
    let k = ap.ceil() + 2.0;
    let f_inf = |x: f64| x.powf(k) * (-x).exp();
    let w = 0.5 * (am + ap);
    let f_zero = |x: f64| x.powf(w) / (1.0 + x * x);
    let sample = |f: &dyn Fn(f64) -> f64| grid.x.iter().map(|&x| f(x)).collect::<Vec<f64>>();
    let gi = green_apply(GreenKind::Infinity, &f_inf, &grid, am, ap, &opts)?;
    let residual_infinity = right_inverse_residual(&grid, &sample(&f_inf), &gi, am, ap);
    let zero = GreenKind::Zero { x_prime: g.x_prime };
    let g0 = green_apply(zero, &f_zero, &grid, am, ap, &opts)?;
    let residual_zero = right_inverse_residual(&grid, &sample(&f_zero), &g0, am, ap);
    let mut fits = Vec::new();
    let top = g.x_max.min(1.0).max(g.x_min * 10.0);
    for pts in [(g.points / 10).max(16), g.points] {
        let lg = LogGrid::new(g.x_min, top, pts)?;
        let v = green_apply(zero, &|x: f64| x.powf(ap), &lg, am, ap, &opts)?;
        fits.push(fit_log_coefficient(&lg, &v, ap).1);
    }
    Ok(GreenCheck {
        alpha_minus: am,
        alpha_plus: ap,
        residual_infinity,
        residual_zero,
        log_coarse: fits[0],
        log_fine: fits[1],
        log_expected: -1.0 / (ap - am),
    })
}

fn limsec(spec: &ProblemSpec) -> Result<Report, CliError> {
    let cv = couplings(spec)?;
    let v = limsec_check(&cv);
    let mut rep = Report::new("limsec");
    rep.table("member", json!(v.member));
    rep.table("asymptotic_sum", json!(v.asymptotic_sum));
    rep.table("a1", json!(v.a1));
    rep.table("kappa", json!(cv.kappa));
    if spec.options.gate && !v.member {
        let why = if v.a1.is_zero() { "A₁ = 0" } else { "the asymptotic equation fails" };
        return Err(CliError::gate(format!("κ = {} is not in LimSec(α): {why}", cv.kappa)).with_detail(rep.to_value()));
    }
    Ok(rep)
}
