//! Static versus switching power of an inverter driving a small load, across temperature
//! and threshold corners. Hot, low-threshold corners are leakage-dominated.
//!
//! ```text
//! cargo run --example power_budget
//! ```

use leakspice::devmodel::MosModelCard;
use leakspice::netlist::{build_inverter, InverterParams};
use leakspice::power::{dynamic_power_estimate, leakage_report, static_vs_dynamic_share};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // 10 fF switched at 100 MHz with 10% activity
    let dynamic = dynamic_power_estimate(10e-15, 3.3, 100e6, 0.1)?;
    println!("switching power: {dynamic:.3e} W\n");
    println!("{:>6} {:>7} {:>12} {:>8}", "Vt", "T", "static", "share");
    for vt in [0.2, 0.3, 0.4] {
        let params = InverterParams {
            nmos: MosModelCard::nmos_45nm().with_vth0(vt),
            pmos: MosModelCard::pmos_45nm().with_vth0(vt),
            ..Default::default()
        };
        let inverter = build_inverter(&params)?;
        for t in [250.0, 300.0, 400.0] {
            let report = leakage_report(&inverter, &["Vin"], t)?;
            let share = static_vs_dynamic_share(&report, dynamic)?;
            let flag = if share >= 0.4 { "  <- leakage-dominated" } else { "" };
            println!("{vt:>6.2} {t:>7.0} {:>12.3e} {:>7.1}%{flag}", report.mean_power, 100.0 * share);
        }
    }
    Ok(())
}
