//! DC operating point and DC sweeps.

use std::collections::BTreeMap;

use super::mna::{Circuit, Drive};
use super::{EngineError, OperatingPoint, Result, Signal, SolverOptions, Waveform};
use rayon::prelude::*;

use crate::netlist::{AnalysisDirective, Netlist, SourceWave, SweepSpec};

/// Solve the DC operating point with default tolerances.
///
/// `initial_guess` seeds node voltages by name; nodes it omits start at 0 V.
pub fn dc_operating_point(
    netlist: &Netlist,
    temp_k: f64,
    initial_guess: Option<&BTreeMap<String, f64>>,
) -> Result<OperatingPoint> {
    dc_operating_point_with(netlist, temp_k, initial_guess, &SolverOptions::default())
}

pub fn dc_operating_point_with(
    netlist: &Netlist,
    temp_k: f64,
    initial_guess: Option<&BTreeMap<String, f64>>,
    options: &SolverOptions,
) -> Result<OperatingPoint> {
    let circuit = Circuit::compile(netlist, temp_k)?;
    let drive = Drive::dc();
    let sol = circuit.solve(&circuit.initial_guess(initial_guess), &drive, options)?;
    Ok(circuit.operating_point(&sol, &drive))
}

/// Run a `.dc` directive.
///
/// With an outer sweep, every inner sweep shares the same abscissa and each column is
/// repeated per outer value as `<column>[<outer>=<value>]`, e.g. `i(Vds)[Vds=0.05]`. Inner
/// sweeps for different outer values are independent and run in parallel.
pub fn dc_sweep(netlist: &Netlist, directive: &AnalysisDirective) -> Result<Waveform> {
    let AnalysisDirective::Dc { sweep, outer, temp_k } = directive else {
        return Err(EngineError::InvalidAnalysis("dc_sweep needs a .dc directive".into()));
    };
    let values = sweep_values(sweep)?;
    let Some(outer) = outer else {
        return dc_sweep_points(netlist, &sweep.source, &values, *temp_k);
    };
    let outer_values = sweep_values(outer)?;
    let curves: Vec<(f64, Waveform)> = outer_values
        .par_iter()
        .map(|&v| {
            let variant = netlist.with_source_value(&outer.source, v).map_err(|_| {
                EngineError::UnknownSource(outer.source.clone())
            })?;
            dc_sweep_points(&variant, &sweep.source, &values, *temp_k)
                .map(|w| (v, w))
                .map_err(|e| EngineError::Sweep { source_name: outer.source.clone(), value: v, error: Box::new(e) })
        })
        .collect::<Result<_>>()?;
    let outer_name = netlist.device(&outer.source).map_or(outer.source.as_str(), |d| d.name.as_str());
    let mut merged = Waveform {
        abscissa_name: curves[0].1.abscissa_name.clone(),
        abscissa: curves[0].1.abscissa.clone(),
        columns: Vec::new(),
    };
    for (v, w) in curves {
        for col in w.columns {
            merged.columns.push(Signal { name: format!("{}[{outer_name}={v}]", col.name), values: col.values });
        }
    }
    Ok(merged)
}

fn sweep_values(s: &SweepSpec) -> Result<Vec<f64>> {
    let values = s.values();
    if values.is_empty() {
        return Err(EngineError::InvalidAnalysis(format!(
            "sweep of {} from {} to {} step {} is empty",
            s.source, s.start, s.stop, s.step
        )));
    }
    Ok(values)
}

/// Sweep a source through `values`, warm-starting each point from the previous one.
///
/// `values` must be strictly monotone in either direction; points are solved in the given
/// order and the returned waveform is sorted by ascending abscissa.
pub fn dc_sweep_points(netlist: &Netlist, source: &str, values: &[f64], temp_k: f64) -> Result<Waveform> {
    let ascending = values.windows(2).all(|w| w[0] < w[1]);
    let descending = values.windows(2).all(|w| w[0] > w[1]);
    if values.is_empty() || !(ascending || descending) || values.iter().any(|v| !v.is_finite()) {
        return Err(EngineError::InvalidAnalysis("sweep values must be finite and strictly monotone".into()));
    }
    let mut circuit = Circuit::compile(netlist, temp_k)?;
    let stamp = circuit
        .source_stamp(source)
        .ok_or_else(|| EngineError::UnknownSource(source.to_string()))?;
    let options = SolverOptions::default();
    let drive = Drive::dc();

    let mut x = circuit.initial_guess(None);
    let mut rows = Vec::with_capacity(values.len());
    for &value in values {
        circuit.set_source_wave(stamp, SourceWave::dc(value));
        let sol = circuit.solve(&x, &drive, &options).map_err(|e| EngineError::Sweep {
            source_name: source.to_string(),
            value,
            error: Box::new(e),
        })?;
        x = sol.x;
        rows.push((value, circuit.row(&x, &drive)));
    }
    if descending {
        rows.reverse();
    }

    let mut columns: Vec<Signal> = rows[0]
        .1
        .iter()
        .map(|(name, _)| Signal { name: name.clone(), values: Vec::with_capacity(rows.len()) })
        .collect();
    let mut abscissa = Vec::with_capacity(rows.len());
    for (value, row) in rows {
        abscissa.push(value);
        for (col, (_, v)) in columns.iter_mut().zip(row) {
            col.values.push(v);
        }
    }
    let canonical = netlist.device(source).map_or(source, |d| d.name.as_str());
    Ok(Waveform { abscissa_name: canonical.to_string(), abscissa, columns })
}

/// Current flowing into each terminal of every device at a DC operating point, keyed by
/// device name, with terminals in netlist order (MOSFETs: drain, gate, source, body).
pub fn terminal_currents(netlist: &Netlist, op: &OperatingPoint) -> Result<BTreeMap<String, Vec<f64>>> {
    let circuit = Circuit::compile(netlist, op.temp_k)?;
    let x = circuit.state_of(op);
    let currents = circuit.terminal_currents(&x, &Drive::dc());
    Ok(circuit.device_names.iter().cloned().zip(currents).collect())
}
