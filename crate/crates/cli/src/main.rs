use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lovelock_cli::report::{error_value, render};
use lovelock_cli::spec::GreenOptions;
use lovelock_cli::{exit, execute, sample, CliError, Command, Format, ProblemSpec, RunConfig};
use lovelock_core::Q;

#[derive(Parser)]
#[command(name = "lovelock", version, about = "Exact Lovelock curvature, Fefferman–Graham and Yamabe expansions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Io {
    /// Problem document (JSON); `-` reads standard input.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Right-inverse tolerance of the quadrature checks.
    #[arg(long)]
    tolerance: Option<f64>,
}

/// Inline fields; each overrides the document.
#[derive(Args, Clone, Default)]
struct Inline {
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated rationals, e.g. `1,0,-1/2`.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    #[arg(long)]
    cap: Option<u32>,
    #[arg(long)]
    order: Option<usize>,
    /// Spectral parameter of `Δ + c`.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Fail with exit status 3 on a negative LimSec verdict.
    #[arg(long)]
    gate: bool,
    /// Run the model Green's operator checks with default grids.
    #[arg(long)]
    green: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ricci-(2q), scalar-(2q) curvatures and the Lovelock tensor of a metric jet.
    Curvature(Solver),
    /// Formal expansion of the Lovelock equation from boundary data.
    FgExpand(Solver),
    /// Obstruction tensor for even n.
    Obstruction(Solver),
    /// Singular Yamabe-type expansion on a product collar.
    Yamabe(Solver),
    /// Indicial roots and radii, optionally with the model Green's operators.
    Indicial(Solver),
    /// Whether κ lies in LimSec(α).
    Limsec(Solver),
    /// Runs a document whose `command` field selects the solver.
    Run(Solver),
    /// Evaluates a solved expansion report on a grid of x values.
    Sample(SampleArgs),
}

#[derive(Args)]
struct Solver {
    #[command(flatten)]
    io: Io,
    #[command(flatten)]
    inline: Inline,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    io: Io,
    /// Comma-separated x values.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long)]
    x_min: Option<f64>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long, default_value_t = 11)]
    points: usize,
    /// Comma-separated boundary point.
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
}

fn read_input(io: &Io) -> Result<Option<String>, CliError> {
    let Some(p) = &io.input else { return Ok(None) };
    let mut s = String::new();
    if p.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::invalid(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(p).map_err(|e| CliError::invalid(format!("{}: {e}", p.display())))?;
    }
    Ok(Some(s))
}

fn rationals(s: &str) -> Result<Vec<Q>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<Q>().map_err(|_| CliError::invalid(format!("bad rational {t:?}"))))
        .collect()
}

fn floats(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::invalid(format!("bad number {t:?}"))))
        .collect()
}

fn build_spec(command: Option<Command>, s: &Solver) -> Result<ProblemSpec, CliError> {
    let mut spec = match read_input(&s.io)? {
        Some(text) => {
            let v: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("problem document: {e}")))?;
            let mut v = v;
            if let (Some(c), Some(obj)) = (command, v.as_object_mut()) {
                let name = serde_json::Value::String(c.name().into());
                match obj.get("command") {
                    Some(given) if *given != name => {
                        return Err(CliError::invalid(format!("document is for {given}, not {}", c.name())));
                    }
                    _ => {
                        obj.insert("command".into(), name);
                    }
                }
            }
            serde_json::from_value(v).map_err(|e| CliError::invalid(format!("problem document: {e}")))?
        }
        None => {
            let c = command.ok_or_else(|| CliError::invalid("run needs --in"))?;
            let n = s.inline.n.ok_or_else(|| CliError::invalid("--n is required without --in"))?;
            ProblemSpec::new(c, n)
        }
    };
    let i = &s.inline;
    if let Some(n) = i.n {
        spec.n = n;
    }
    if let Some(a) = &i.alpha {
        spec.alpha = rationals(a)?;
    }
    if let Some(b) = &i.beta {
        spec.beta = rationals(b)?;
    }
    if let Some(k) = &i.kappa {
        spec.kappa = Some(rationals(k)?.remove(0));
    }
    if i.cap.is_some() {
        spec.cap = i.cap;
    }
    if i.order.is_some() {
        spec.order = i.order;
    }
    if let Some(c) = &i.c {
        spec.options.c = Some(rationals(c)?.remove(0));
    }
    spec.options.gate |= i.gate;
    if i.green && spec.options.green.is_none() {
        spec.options.green = Some(GreenOptions::default());
    }
    spec.validate()?;
    Ok(spec)
}

fn emit(io: &Io, text: &str) -> Result<(), CliError> {
    match &io.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve(command: Option<Command>, s: &Solver) -> i32 {
    let cfg = RunConfig { tolerance: s.io.tolerance };
    let (text, code) = match build_spec(command, s) {
        Ok(spec) => execute(&spec, &cfg, s.io.format),
        Err(e) => (render(&error_value(&e), s.io.format), e.exit_code),
    };
    finish(&s.io, &text, code)
}

fn finish(io: &Io, text: &str, code: i32) -> i32 {
    match emit(io, text) {
        Ok(()) => code,
        Err(e) => {
            eprintln!("{e}");
            exit::INVALID
        }
    }
}

fn sample_cmd(a: &SampleArgs) -> i32 {
    let go = || -> Result<String, CliError> {
        let text = read_input(&a.io)?.ok_or_else(|| CliError::invalid("sample needs --in <report>"))?;
        let doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("report: {e}")))?;
        let xs = match (&a.x, a.x_min, a.x_max) {
            (Some(x), _, _) => floats(x)?,
            (None, Some(lo), Some(hi)) if a.points >= 2 => {
                (0..a.points).map(|k| lo + (hi - lo) * k as f64 / (a.points - 1) as f64).collect()
            }
            _ => return Err(CliError::invalid("give --x or --x-min, --x-max and --points ≥ 2")),
        };
        let y = a.y.as_deref().map(floats).transpose()?.unwrap_or_default();
        let rep = sample(&doc, &xs, &y)?;
        Ok(render(&rep.to_value(), a.io.format))
    };
    match go() {
        Ok(t) => finish(&a.io, &t, exit::OK),
        Err(e) => finish(&a.io, &render(&error_value(&e), a.io.format), e.exit_code),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.cmd {
        Cmd::Curvature(s) => solve(Some(Command::Curvature), s),
        Cmd::FgExpand(s) => solve(Some(Command::FgExpand), s),
        Cmd::Obstruction(s) => solve(Some(Command::Obstruction), s),
        Cmd::Yamabe(s) => solve(Some(Command::Yamabe), s),
        Cmd::Indicial(s) => solve(Some(Command::Indicial), s),
        Cmd::Limsec(s) => solve(Some(Command::Limsec), s),
        Cmd::Run(s) => solve(None, s),
        Cmd::Sample(a) => sample_cmd(a),
    };
    ExitCode::from(code as u8)
}
