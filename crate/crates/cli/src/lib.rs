//! Batch front end for `lovelock-core`: problem documents in, reports out.
//!
//! Every run reads one JSON problem document and writes one report
//! `{"status", "command", "tables", "residual_orders", "warnings"}`.
//! Rationals are strings `"p/q"`; surds are objects
//! `{"rational", "rational_factor", "square_free"}`. Failures are reported as
//! `{"status": "error", "error": {...}}` with exit status 2 (invalid input),
//! 3 (gate) or 4 (consistency or tolerance).

pub mod error;
pub mod report;
pub mod run;
pub mod sample;
pub mod spec;

pub use error::{exit, CliError};
pub use report::{Format, Report};
pub use run::{run, RunConfig};
pub use sample::sample;
pub use spec::{Command, ProblemSpec};

/// Runs a document and returns the rendered output with its exit status.
pub fn execute(spec: &ProblemSpec, cfg: &RunConfig, format: Format) -> (String, i32) {
    match run(spec, cfg) {
        Ok(r) => (report::render(&r.to_value(), format), exit::OK),
        Err(e) => (report::render(&report::error_value(&e), format), e.exit_code),
    }
}
