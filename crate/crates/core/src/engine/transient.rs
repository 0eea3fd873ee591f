//! Fixed-step transient analysis.
//!
//! Capacitors are replaced by companion models: backward Euler for the first step, so the
//! integrator starts from a consistent state, then the trapezoidal rule. The initial
//! condition is the DC operating point with every source at its t = 0 value.

use super::mna::{Circuit, Companion, Drive};
use super::{EngineError, Result, Signal, SolverOptions, Waveform};
use crate::netlist::AnalysisDirective;
use crate::netlist::Netlist;

/// Run a `.tran` directive.
pub fn transient(netlist: &Netlist, directive: &AnalysisDirective) -> Result<Waveform> {
    let AnalysisDirective::Tran { dt, tstop, temp_k } = directive else {
        return Err(EngineError::InvalidAnalysis("transient needs a .tran directive".into()));
    };
    transient_with(netlist, *dt, *tstop, *temp_k, &SolverOptions::default())
}

pub fn transient_with(
    netlist: &Netlist,
    dt: f64,
    tstop: f64,
    temp_k: f64,
    options: &SolverOptions,
) -> Result<Waveform> {
    if !(dt > 0.0) || !(tstop >= dt) || !tstop.is_finite() {
        return Err(EngineError::InvalidAnalysis(format!("need 0 < dt <= tstop, got dt={dt} tstop={tstop}")));
    }
    let steps = (tstop / dt).round();
    if (steps * dt - tstop).abs() > 1e-6 * dt || steps > 1e8 {
        return Err(EngineError::InvalidAnalysis(format!("dt={dt} does not divide tstop={tstop}")));
    }
    let steps = steps as usize;

    let circuit = Circuit::compile(netlist, temp_k)?;
    let caps = circuit.capacitances();
    let dc = Drive::dc();
    let mut x = circuit
        .solve(&circuit.initial_guess(None), &dc, options)
        .map_err(|e| EngineError::Step { time: 0.0, error: Box::new(e) })?
        .x;

    let first = circuit.row(&x, &dc);
    let mut columns: Vec<Signal> = first
        .iter()
        .map(|(name, v)| {
            let mut values = Vec::with_capacity(steps + 1);
            values.push(*v);
            Signal { name: name.clone(), values }
        })
        .collect();
    let mut abscissa = Vec::with_capacity(steps + 1);
    abscissa.push(0.0);

    let mut v_prev = circuit.capacitor_voltages(&x);
    let mut i_prev = vec![0.0; caps.len()];
    let mut companions = vec![Companion::default(); caps.len()];
    for k in 1..=steps {
        let time = k as f64 * dt;
        for (c, comp) in companions.iter_mut().enumerate() {
            *comp = if k == 1 {
                let geq = caps[c] / dt;
                Companion { geq, ieq: -geq * v_prev[c] }
            } else {
                let geq = 2.0 * caps[c] / dt;
                Companion { geq, ieq: -geq * v_prev[c] - i_prev[c] }
            };
        }
        let drive = Drive { time, companions: Some(&companions), ..Drive::dc() };
        let sol = circuit
            .solve(&x, &drive, options)
            .map_err(|e| EngineError::Step { time, error: Box::new(e) })?;
        x = sol.x;
        let v_now = circuit.capacitor_voltages(&x);
        for c in 0..caps.len() {
            i_prev[c] = companions[c].geq * v_now[c] + companions[c].ieq;
        }
        v_prev = v_now;
        abscissa.push(time);
        for (col, (_, v)) in columns.iter_mut().zip(circuit.row(&x, &drive)) {
            col.values.push(v);
        }
    }
    Ok(Waveform { abscissa_name: "time".into(), abscissa, columns })
}
