use std::fmt::Write as _;

use super::units::format_value;
use super::{AnalysisDirective, Element, Netlist, SourceWave, SweepSpec};
use crate::devmodel::EtaSpec;

/// Canonical text form: title, model cards (sorted by name), devices in order, directives,
/// `.end`. Numbers are written in the shortest form that parses back exactly.
pub fn serialize(netlist: &Netlist) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", netlist.title());
    for card in netlist.models() {
        let eta = match card.eta {
            EtaSpec::Given(v) => format_value(v),
            EtaSpec::Derived => "derived".to_string(),
        };
        let _ = writeln!(
            out,
            ".model {} {} vth0={} eta={} tox={} wdm={} u0cox={} kp={} lambda={} sigma={} is={}",
            card.name,
            card.polarity.keyword(),
            format_value(card.vth0),
            eta,
            format_value(card.tox),
            format_value(card.wdm),
            format_value(card.u0cox),
            format_value(card.kp),
            format_value(card.lambda),
            format_value(card.sigma_dibl),
            format_value(card.is_junction),
        );
    }
    for dev in netlist.devices() {
        let _ = write!(out, "{} {}", dev.name, dev.nodes.join(" "));
        match &dev.element {
            Element::Mosfet { model, w, l } => {
                let _ = write!(out, " {model} W={} L={}", format_value(*w), format_value(*l));
            }
            Element::Resistor { ohms } => {
                let _ = write!(out, " {}", format_value(*ohms));
            }
            Element::Capacitor { farads } => {
                let _ = write!(out, " {}", format_value(*farads));
            }
            Element::VSource { wave } | Element::ISource { wave } => match wave {
                SourceWave::Dc { value } => {
                    let _ = write!(out, " {}", format_value(*value));
                }
                SourceWave::Pwl { points } => {
                    let body: Vec<String> = points
                        .iter()
                        .map(|(t, v)| format!("{} {}", format_value(*t), format_value(*v)))
                        .collect();
                    let _ = write!(out, " PWL({})", body.join(" "));
                }
            },
        }
        out.push('\n');
    }
    for d in netlist.directives() {
        let _ = match d {
            AnalysisDirective::Op { temp_k } => writeln!(out, ".op temp={}", format_value(*temp_k)),
            AnalysisDirective::Dc { sweep, outer, temp_k } => {
                let mut line = format!(".dc {}", sweep_text(sweep));
                if let Some(outer) = outer {
                    line.push(' ');
                    line.push_str(&sweep_text(outer));
                }
                writeln!(out, "{line} temp={}", format_value(*temp_k))
            }
            AnalysisDirective::Tran { dt, tstop, temp_k } => writeln!(
                out,
                ".tran {} {} temp={}",
                format_value(*dt),
                format_value(*tstop),
                format_value(*temp_k)
            ),
        };
    }
    out.push_str(".end\n");
    out
}

fn sweep_text(s: &SweepSpec) -> String {
    format!(
        "{} {} {} {}",
        s.source,
        format_value(s.start),
        format_value(s.stop),
        format_value(s.step)
    )
}
