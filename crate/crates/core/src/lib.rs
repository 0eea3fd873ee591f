//! Leakage-aware circuit simulation for a small SPICE dialect.
//!
//! The crate is layered bottom-up:
//!
//! - [`devmodel`] — closed-form subthreshold laws and a C¹ compact MOSFET model with
//!   analytic partial derivatives (weak inversion, DIBL, square-law strong inversion).
//! - [`netlist`] — the netlist data model, parser with located diagnostics, canonical
//!   serializer, reference-circuit builders and the sleep-transistor transform.
//! - [`engine`] — modified nodal analysis: DC operating point (Newton with damping, source
//!   stepping and gmin stepping), DC sweeps, and trapezoidal transient analysis.
//! - [`power`] — static leakage per input state, temperature corners, gated vs ungated
//!   comparisons and static/dynamic power shares.
//! - [`cli`] — the `leakspice` command line front end.
//!
//! ```
//! use leakspice::engine::dc_operating_point;
//! use leakspice::netlist::{build_inverter, InverterParams};
//!
//! let inverter = build_inverter(&InverterParams::default()).unwrap();
//! let op = dc_operating_point(&inverter, 300.0, None).unwrap();
//! assert!(op.voltage("out").unwrap() > 3.29);
//! ```
//!
//! Runnable walkthroughs live in `examples/`: `subthreshold_laws`, `gate_sweep`,
//! `inverter_leakage`, `power_gating`, `class_ab_buffer`, `rc_transient`,
//! `netlist_roundtrip` and `power_budget`.

pub mod cli;
pub mod devmodel;
pub mod engine;
pub mod netlist;
pub mod power;
