//! Closed-form subthreshold laws: thermal voltage, swing, the threshold-current convention
//! and the off-current's dependence on threshold voltage and temperature.
//!
//! ```text
//! cargo run --example subthreshold_laws
//! ```

use leakspice::devmodel::{
    body_coefficient, ids_empirical, ioff_empirical, subthreshold_swing_exact,
    subthreshold_swing_nominal, thermal_voltage, DeviceEval,
};
use leakspice::devmodel::{ids_unified, BiasPoint, MosModelCard};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eta = body_coefficient(2e-9, 12e-9)?;
    println!("eta from tox = 2 nm, Wdm = 12 nm: {eta}");
    println!("vT(300 K) = {:.6} V", thermal_voltage(300.0)?);
    println!(
        "swing at 300 K: {:.2} mV/dec nominal, {:.4} mV/dec exact",
        subthreshold_swing_nominal(eta, 300.0)?,
        subthreshold_swing_exact(eta, 300.0)?
    );

    println!("\nIds (W/L = 1, Vt = 0.2 V) below threshold:");
    for k in 0..=4 {
        let vgs = 0.2 - 0.05 * k as f64;
        println!("  Vgs = {vgs:5.2} V  Ids = {:.4e} A", ids_empirical(1.0, vgs, 0.2, eta, 300.0)?);
    }

    println!("\nIoff (W/L = 1) by threshold and temperature:");
    print!("  {:>8}", "Vt \\ T");
    let temps = [250.0, 300.0, 350.0, 400.0];
    for t in temps {
        print!("{t:>12.0}");
    }
    println!();
    for vt in [0.1, 0.2, 0.3, 0.4] {
        print!("  {vt:>8.2}");
        for t in temps {
            print!("{:>12.3e}", ioff_empirical(1.0, vt, eta, t)?);
        }
        println!();
    }

    let card = MosModelCard::nmos_45nm();
    println!("\nCompact model, 1u/45n NMOS at Vds = 1 V:");
    for vgs in [0.0, 0.1, 0.2, 0.4, 0.8] {
        let DeviceEval { ids, d_ids_d_vgs, region, .. } = ids_unified(&card, 1e-6, 45e-9, &BiasPoint::new(vgs, 1.0, 300.0))?;
        println!("  Vgs = {vgs:.1} V  Ids = {ids:.4e} A  gm = {d_ids_d_vgs:.4e} S  {region:?}");
    }
    Ok(())
}
