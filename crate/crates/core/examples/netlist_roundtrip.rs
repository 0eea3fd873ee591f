//! Parse a netlist, print its canonical form, and show located diagnostics for a broken one.
//!
//! ```text
//! cargo run --example netlist_roundtrip
//! ```

use leakspice::netlist::{parse, serialize};

const GOOD: &str = "\
two-stage divider
* values take engineering suffixes and trailing units
.model nch NMOS vth0=0.2 eta=1.5
Vdd vdd 0 3.3V
R1 vdd a 4.7k
R2 a 0 10k
MN1 a a 0 0 nch W=1u L=45n
Vstep s 0 PWL(0 0 1n 3.3)
.dc Vdd 0 3.3 0.1 temp=350
.end
";

const BAD: &str = "\
broken
Vdd vdd 0 3.3
R1 vdd a 4.7q
R1 a 0 10k
MN1 a a 0 0 nch W=1u L=45n
";

fn main() {
    let netlist = parse(GOOD).expect("valid netlist");
    let text = serialize(&netlist);
    print!("{text}");
    assert_eq!(parse(&text).as_ref(), Ok(&netlist));
    println!("nodes: {:?}", netlist.nodes());

    println!("\ndiagnostics for a broken netlist:");
    for d in parse(BAD).unwrap_err().diagnostics {
        println!("  {:?} {d}", d.kind);
    }
}
