//! The 20-transistor class-AB buffer: DC transfer, large-signal slew into its load, and
//! standby leakage with a footer switch.
//!
//! ```text
//! cargo run --release --example class_ab_buffer
//! ```

use leakspice::engine::{dc_sweep_points, measure_slew_rate, transient_with, SolverOptions};
use leakspice::netlist::{
    build_class_ab_buffer, ClassAbBufferParams, GatingOptions, SourceWave, BUFFER_OUTPUT,
};
use leakspice::power::compare_gating;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dc = build_class_ab_buffer(&ClassAbBufferParams::default())?;
    let inputs: Vec<f64> = (0..=6).map(|k| 0.65 + 0.33 * k as f64).collect();
    let w = dc_sweep_points(&dc, "Vin", &inputs, 300.0)?;
    let out = w.column(&format!("v({BUFFER_OUTPUT})")).ok_or("no output column")?;
    println!("DC transfer:");
    for (vin, vout) in w.abscissa.iter().zip(out) {
        println!("  in {vin:.2} V -> out {vout:.4} V");
    }
    let idd = w.column("i(Vdd)").ok_or("no supply column")?;
    println!("quiescent supply current at mid-rail: {:.3e} A", idd[3]);

    let step = ClassAbBufferParams {
        input: SourceWave::Pwl { points: vec![(0.0, 1.0), (10e-9, 1.0), (11e-9, 2.3)] },
        ..Default::default()
    };
    let tran = transient_with(&build_class_ab_buffer(&step)?, 0.1e-9, 300e-9, 300.0, &SolverOptions::default())?;
    let slew = measure_slew_rate(&tran, &format!("v({BUFFER_OUTPUT})"), 0.1, 0.9)?;
    println!("\nrising slew into 10 pF: {:.3} V/us", slew * 1e-6);

    let cmp = compare_gating(&dc, &GatingOptions::footer("nch_hvt"), &["Vin"], 300.0)?;
    println!(
        "footer gating: baseline {:.3e} W, standby {:.3e} W ({:.1}x lower)",
        cmp.baseline.mean_power, cmp.gated_standby.mean_power, cmp.standby_reduction_factor
    );
    Ok(())
}
