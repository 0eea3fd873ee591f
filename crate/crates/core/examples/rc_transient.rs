//! RC step response against the analytic solution, and the error's second-order
//! convergence as the time step shrinks.
//!
//! ```text
//! cargo run --example rc_transient
//! ```

use leakspice::engine::{transient_with, SolverOptions};
use leakspice::netlist::parse;

const FIXTURE: &str = include_str!("../fixtures/rc_step.sp");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rc = parse(FIXTURE)?;
    let tau = 1e-6;
    let mut previous: Option<f64> = None;
    println!("{:>10} {:>12} {:>8}", "dt", "max error", "ratio");
    for dt in [8e-9, 4e-9, 2e-9, 1e-9, 0.5e-9] {
        let w = transient_with(&rc, dt, 5.0 * tau, 300.0, &SolverOptions::default())?;
        let v = w.column("v(out)").ok_or("no output")?;
        let err = w
            .abscissa
            .iter()
            .zip(v)
            .map(|(t, v)| (v - (1.0 - (-t / tau).exp())).abs())
            .fold(0.0, f64::max);
        let ratio = previous.map_or(String::new(), |p| format!("{:.3}", p / err));
        println!("{dt:>10.1e} {err:>12.3e} {ratio:>8}");
        previous = Some(err);
    }
    Ok(())
}
