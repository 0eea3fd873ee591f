//! Static leakage of a CMOS inverter in both input states, per device, and across
//! temperature.
//!
//! ```text
//! cargo run --example inverter_leakage
//! ```

use leakspice::netlist::{build_inverter, InverterParams};
use leakspice::power::{leakage_corners, leakage_report};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inverter = build_inverter(&InverterParams::default())?;
    let report = leakage_report(&inverter, &["Vin"], 300.0)?;
    for (k, state) in report.states.iter().enumerate() {
        println!(
            "state {k}: Vin = {:.1} V  Idd = {:.4e} A  P = {:.4e} W",
            state.input_assignment["Vin"], state.supply_current, state.static_power
        );
        for (device, i) in &state.per_device {
            println!("    {device:<4} |Ids| = {i:.4e} A");
        }
    }
    println!("worst state {}, mean {:.4e} W", report.worst_state, report.mean_power);

    println!("\nmean leakage by temperature:");
    for r in leakage_corners(&inverter, &["Vin"], &[250.0, 300.0, 350.0, 400.0])? {
        println!("  {:>5.0} K  {:.4e} W", r.temp_k, r.mean_power);
    }
    Ok(())
}
