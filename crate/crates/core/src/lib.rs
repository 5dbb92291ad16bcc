//! Exact Lovelock curvature algebra.
//!
//! Double forms and Kulkarni–Nomizu products, truncated Taylor jets,
//! Lovelock curvature tensors, formal Fefferman–Graham and singular Yamabe
//! expansions, and indicial data for the associated model operators.

pub mod curvature;
pub mod doubleform;
pub mod error;
pub mod fg_expansion;
pub mod indicial;
pub mod jets;
pub mod models;
pub mod random;
pub mod ring;
pub mod scalar;
pub mod yamabe;

pub use curvature::{CouplingVector, Geometry};
pub use doubleform::DoubleForm;
pub use error::{Error, Result};
pub use jets::{Chart, MetricJet, ScalarJet, TensorJet, XJet};
pub use ring::{DiffRing, Ring};
pub use scalar::{q, Q};
