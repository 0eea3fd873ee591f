//! Circuit solver: modified nodal analysis, damped Newton DC solve, DC sweeps and
//! fixed-step transient analysis.
//!
//! Unknowns are the non-ground node voltages followed by one branch current per voltage
//! source. Reported source currents are the current a source *delivers* into the circuit
//! out of its positive terminal, so a supply feeding a load reports a positive value. A
//! current source `I1 a b val` pushes `val` out of its `b` terminal into the circuit, which
//! is what it reports.
//!
//! When a plain Newton solve fails the engine falls back to gmin stepping (a shunt from
//! every node to ground, relaxed by decades and then removed entirely) and then to source
//! stepping. The reported operating point never includes a gmin shunt.

mod dc;
mod linalg;
mod measure;
mod mna;
mod transient;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::devmodel::ModelError;

pub use dc::{
    dc_operating_point, dc_operating_point_with, dc_sweep, dc_sweep_points, terminal_currents,
};
pub use measure::{measure_slew_rate, DEFAULT_SLEW_WINDOW};
pub use transient::{transient, transient_with};

/// Newton tolerances and continuation schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Largest acceptable KCL residual at any node, A.
    pub abstol_i: f64,
    /// Largest acceptable node-voltage update in the final iteration, V.
    pub abstol_v: f64,
    /// Relative tolerance on voltage-source branch-current updates.
    pub reltol: f64,
    /// Newton iterations allowed per solve (per continuation stage).
    pub max_iterations: usize,
    /// Shunt conductances tried in order when plain Newton fails. Empty disables gmin
    /// stepping.
    pub gmin_ladder: Vec<f64>,
    /// Number of equal source ramp increments; zero disables source stepping.
    pub source_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            abstol_i: 1e-12,
            abstol_v: 1e-9,
            reltol: 1e-6,
            max_iterations: 200,
            gmin_ladder: (3..=12).map(|e| 10f64.powi(-e)).collect(),
            source_steps: 10,
        }
    }
}

/// How an operating point was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Newton,
    GminStepping,
    SourceStepping,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatingPoint {
    /// Non-ground node voltages, V.
    pub node_voltages: BTreeMap<String, f64>,
    /// Current delivered by each independent source, A.
    pub source_currents: BTreeMap<String, f64>,
    /// Linear solves performed, summed over continuation stages.
    pub iterations: usize,
    /// Largest KCL residual at the reported solution, A.
    pub residual_norm: f64,
    /// Largest node-voltage change in the final Newton update, V.
    pub max_update: f64,
    pub converged: bool,
    pub strategy: Strategy,
    pub temp_k: f64,
}

impl OperatingPoint {
    /// Node voltage; ground reads as zero.
    pub fn voltage(&self, node: &str) -> Option<f64> {
        if node == crate::netlist::GROUND {
            return Some(0.0);
        }
        self.node_voltages.get(node).copied()
    }

    /// Current delivered by a source, looked up case-insensitively.
    pub fn source_current(&self, source: &str) -> Option<f64> {
        self.source_currents
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(source))
            .map(|(_, v)| *v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Signal {
    pub name: String,
    pub values: Vec<f64>,
}

/// Sampled signals over a strictly increasing abscissa (sweep value or time).
///
/// Columns are named `v(<node>)` for node voltages and `i(<source>)` for delivered source
/// currents.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Waveform {
    pub abscissa_name: String,
    pub abscissa: Vec<f64>,
    pub columns: Vec<Signal>,
}

impl Waveform {
    pub fn len(&self) -> usize {
        self.abscissa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissa.is_empty()
    }

    /// Column by exact name, falling back to a case-insensitive match.
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|s| s.name == name)
            .or_else(|| self.columns.iter().find(|s| s.name.eq_ignore_ascii_case(name)))
            .map(|s| s.values.as_slice())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|s| s.name.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("singular matrix: {node} has no DC path to ground")]
    Singular { node: String },
    #[error("no convergence after {iterations} iterations (best residual {best_residual:e} A)")]
    NonConvergence { best_residual: f64, iterations: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unknown source {0}")]
    UnknownSource(String),
    #[error("unknown signal {0}")]
    UnknownSignal(String),
    #[error("invalid analysis: {0}")]
    InvalidAnalysis(String),
    #[error("at {source_name} = {value}: {error}")]
    Sweep { source_name: String, value: f64, error: Box<EngineError> },
    #[error("at t = {time:e} s: {error}")]
    Step { time: f64, error: Box<EngineError> },
    #[error("signal {signal} never crosses {level} V")]
    NoCrossing { signal: String, level: f64 },
}

pub type Result<T, E = EngineError> = std::result::Result<T, E>;
