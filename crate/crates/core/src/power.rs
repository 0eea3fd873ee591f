//! Static leakage and dynamic power reporting, and before/after evaluation of
//! sleep-transistor gating.
//!
//! Leakage at circuit level is the total DC power delivered by the independent sources
//! with every input held static. Each listed input source is driven to `0` or to the
//! supply voltage; bit `j` of a state index drives input `j`, so state `0` is all-low.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::engine::{self, EngineError};
use crate::netlist::{
    power_gate_transform, Element, GatingError, GatingOptions, Netlist, NetlistError, SleepState,
};

/// At most `2^MAX_INPUTS` states per report.
pub const MAX_INPUTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PowerError {
    #[error("netlist has no positive grounded supply source")]
    NoSupply,
    #[error("{0} is not a voltage source")]
    NotAnInput(String),
    #[error("{0} inputs requested; at most {MAX_INPUTS} supported")]
    TooManyInputs(usize),
    #[error("{name} must be {requirement}, got {value}")]
    Domain { name: &'static str, requirement: &'static str, value: f64 },
    #[error("static and dynamic power are both zero; share undefined")]
    UndefinedShare,
    #[error("input state {state}: {error}")]
    State { state: usize, error: EngineError },
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    Gating(#[from] GatingError),
}

pub type Result<T, E = PowerError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateReport {
    /// Voltage applied to each input source.
    pub input_assignment: BTreeMap<String, f64>,
    /// Current delivered by the supply source, A.
    pub supply_current: f64,
    /// Power delivered by all independent sources, W.
    pub static_power: f64,
    /// Channel-current magnitude of every MOSFET and resistor current magnitude, A.
    pub per_device: BTreeMap<String, f64>,
    /// Current each device draws from the supply node, A. Sums to `supply_current`.
    pub rail_draw: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeakageReport {
    pub supply: String,
    pub vdd: f64,
    pub temp_k: f64,
    pub states: Vec<StateReport>,
    /// Index of the state with the largest static power (lowest index on ties).
    pub worst_state: usize,
    pub mean_power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GatingComparison {
    pub baseline: LeakageReport,
    pub gated_active: LeakageReport,
    pub gated_standby: LeakageReport,
    /// `baseline.mean_power / gated_standby.mean_power`.
    pub standby_reduction_factor: f64,
    /// `gated_active.mean_power / baseline.mean_power`.
    pub active_penalty_factor: f64,
}

fn solve_state(
    netlist: &Netlist,
    inputs: &[String],
    state: usize,
    supply: &(String, String, f64),
    temp_k: f64,
) -> Result<StateReport> {
    let (supply_name, supply_node, vdd) = supply;
    let mut variant = netlist.clone();
    let mut assignment = BTreeMap::new();
    for (j, input) in inputs.iter().enumerate() {
        let v = if state >> j & 1 == 1 { *vdd } else { 0.0 };
        variant = variant.with_source_value(input, v)?;
        assignment.insert(input.clone(), v);
    }
    let op = engine::dc_operating_point(&variant, temp_k, None)
        .map_err(|error| PowerError::State { state, error })?;
    let currents = engine::terminal_currents(&variant, &op).map_err(|error| PowerError::State { state, error })?;

    let mut static_power = 0.0;
    let mut per_device = BTreeMap::new();
    let mut rail_draw = BTreeMap::new();
    for dev in variant.devices() {
        let into = &currents[&dev.name];
        let v = |node: &str| op.voltage(node).unwrap_or(0.0);
        match &dev.element {
            Element::VSource { .. } => {
                static_power += (v(&dev.nodes[0]) - v(&dev.nodes[1])) * -into[0];
            }
            Element::ISource { .. } => {
                static_power += (v(&dev.nodes[1]) - v(&dev.nodes[0])) * into[0];
            }
            Element::Mosfet { .. } | Element::Resistor { .. } => {
                per_device.insert(dev.name.clone(), into[0].abs());
            }
            Element::Capacitor { .. } => {}
        }
        if dev.name != *supply_name {
            let draw: f64 = dev
                .nodes
                .iter()
                .zip(into)
                .filter(|(n, _)| *n == supply_node)
                .map(|(_, i)| i)
                .sum();
            if dev.nodes.iter().any(|n| n == supply_node) {
                rail_draw.insert(dev.name.clone(), draw);
            }
        }
    }
    Ok(StateReport {
        input_assignment: assignment,
        supply_current: op.source_current(supply_name).unwrap_or(0.0),
        static_power,
        per_device,
        rail_draw,
    })
}

/// Solve every digital input state and collect supply current and static power.
///
/// States are solved in parallel and assembled in index order, so the report does not
/// depend on scheduling.
pub fn leakage_report(netlist: &Netlist, input_sources: &[&str], temp_k: f64) -> Result<LeakageReport> {
    let (name, node, vdd) = netlist.supply_rail().ok_or(PowerError::NoSupply)?;
    let supply = (name.to_string(), node.to_string(), vdd);
    if input_sources.len() > MAX_INPUTS {
        return Err(PowerError::TooManyInputs(input_sources.len()));
    }
    let mut inputs = Vec::with_capacity(input_sources.len());
    for src in input_sources {
        match netlist.device(src) {
            Some(d) if matches!(d.element, Element::VSource { .. }) && !d.name.eq_ignore_ascii_case(name) => {
                inputs.push(d.name.clone())
            }
            _ => return Err(PowerError::NotAnInput(src.to_string())),
        }
    }
    let states: Vec<StateReport> = (0..1usize << inputs.len())
        .into_par_iter()
        .map(|s| solve_state(netlist, &inputs, s, &supply, temp_k))
        .collect::<Result<_>>()?;
    let mut worst_state = 0;
    for (k, s) in states.iter().enumerate() {
        if s.static_power > states[worst_state].static_power {
            worst_state = k;
        }
    }
    let mean_power = states.iter().map(|s| s.static_power).sum::<f64>() / states.len() as f64;
    Ok(LeakageReport { supply: supply.0, vdd, temp_k, states, worst_state, mean_power })
}

/// [`leakage_report`] at several temperatures, solved in parallel.
pub fn leakage_corners(netlist: &Netlist, input_sources: &[&str], temps_k: &[f64]) -> Result<Vec<LeakageReport>> {
    temps_k.par_iter().map(|&t| leakage_report(netlist, input_sources, t)).collect()
}

/// Leakage of the original circuit and of its gated variant with the sleep device on and
/// off. The `state` in `options` is ignored; both states are evaluated.
pub fn compare_gating(
    netlist: &Netlist,
    options: &GatingOptions,
    input_sources: &[&str],
    temp_k: f64,
) -> Result<GatingComparison> {
    let active = power_gate_transform(netlist, &GatingOptions { state: SleepState::Active, ..options.clone() })?;
    let standby = power_gate_transform(netlist, &GatingOptions { state: SleepState::Standby, ..options.clone() })?;
    let (baseline, (gated_active, gated_standby)) = rayon::join(
        || leakage_report(netlist, input_sources, temp_k),
        || {
            rayon::join(
                || leakage_report(&active, input_sources, temp_k),
                || leakage_report(&standby, input_sources, temp_k),
            )
        },
    );
    let (baseline, gated_active, gated_standby) = (baseline?, gated_active?, gated_standby?);
    Ok(GatingComparison {
        standby_reduction_factor: baseline.mean_power / gated_standby.mean_power,
        active_penalty_factor: gated_active.mean_power / baseline.mean_power,
        baseline,
        gated_active,
        gated_standby,
    })
}

fn nonnegative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(PowerError::Domain { name, requirement: "finite and >= 0", value })
    }
}

/// Switching power `α·C·V²·f`.
pub fn dynamic_power_estimate(c_load: f64, vdd: f64, freq: f64, activity: f64) -> Result<f64> {
    nonnegative("c_load", c_load)?;
    nonnegative("vdd", vdd)?;
    nonnegative("freq", freq)?;
    nonnegative("activity", activity)?;
    if activity > 1.0 {
        return Err(PowerError::Domain { name: "activity", requirement: "<= 1", value: activity });
    }
    Ok(activity * c_load * vdd * vdd * freq)
}

/// Fraction of total power that is static: `mean static / (mean static + dynamic)`.
pub fn static_vs_dynamic_share(leakage: &LeakageReport, dynamic: f64) -> Result<f64> {
    nonnegative("dynamic", dynamic)?;
    let static_power = nonnegative("mean_power", leakage.mean_power)?;
    let total = static_power + dynamic;
    if total == 0.0 {
        return Err(PowerError::UndefinedShare);
    }
    Ok(static_power / total)
}
