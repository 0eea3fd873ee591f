//! Gate sweep of a single NMOS at a low and a high drain bias, with and without DIBL.
//!
//! ```text
//! cargo run --example gate_sweep
//! ```

use leakspice::devmodel::subthreshold_swing_exact;
use leakspice::engine::dc_sweep;
use leakspice::netlist::parse;

const FIXTURE: &str = include_str!("../fixtures/nmos_fixture.sp");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = parse(FIXTURE)?;
    let directive = &base.directives()[0];
    for sigma in [0.05, 0.0] {
        let card = base.model("nch").ok_or("fixture lacks nch")?.clone().with_sigma_dibl(sigma);
        let netlist = base.with_model(card.clone())?;
        let w = dc_sweep(&netlist, directive)?;
        let low = w.column("i(Vds)[Vds=0.05]").ok_or("missing curve")?;
        let high = w.column("i(Vds)[Vds=2.7]").ok_or("missing curve")?;

        println!("sigma_dibl = {sigma}");
        println!("{:>6} {:>14} {:>14}", "Vgs", "Ids@50mV", "Ids@2.7V");
        for k in (0..w.len()).step_by(10) {
            println!("{:>6.2} {:>14.4e} {:>14.4e}", w.abscissa[k], low[k], high[k]);
        }
        // slope of the first decade-spaced pair well below threshold
        let swing = 1e3 * (w.abscissa[5] - w.abscissa[0]) / (low[5] / low[0]).log10();
        println!(
            "subthreshold swing: {swing:.3} mV/dec (model {:.3} mV/dec)\n",
            subthreshold_swing_exact(card.eta(), 300.0)?
        );
    }
    Ok(())
}
