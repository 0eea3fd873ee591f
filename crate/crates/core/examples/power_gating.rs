//! Sleep-transistor gating of an inverter: standby savings and active penalty for footer
//! and header switches as the sleep device's threshold rises.
//!
//! ```text
//! cargo run --example power_gating
//! ```

use leakspice::devmodel::MosModelCard;
use leakspice::netlist::{build_inverter, serialize, power_gate_transform, GatingOptions, InverterParams};
use leakspice::power::compare_gating;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inverter = build_inverter(&InverterParams::default())?;
    println!("{:<7} {:>9} {:>14} {:>14}", "style", "sleep Vt", "standby gain", "active cost");
    for vt in [0.2, 0.3, 0.4, 0.5] {
        let n = inverter
            .with_model(MosModelCard::nmos_hvt().with_vth0(vt))?
            .with_model(MosModelCard::pmos_hvt().with_vth0(vt))?;
        for options in [GatingOptions::footer("nch_hvt"), GatingOptions::header("pch_hvt")] {
            let cmp = compare_gating(&n, &options, &["Vin"], 300.0)?;
            println!(
                "{:<7} {:>9.2} {:>13.2}x {:>13.5}x",
                format!("{:?}", options.style).to_lowercase(),
                vt,
                cmp.standby_reduction_factor,
                cmp.active_penalty_factor
            );
        }
    }

    println!("\nfooter-gated netlist:");
    print!("{}", serialize(&power_gate_transform(&inverter, &GatingOptions::footer("nch_hvt"))?));
    Ok(())
}
