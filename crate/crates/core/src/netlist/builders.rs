//! Programmatic construction of the reference circuits.

use super::{
    AnalysisDirective, DeviceInstance, DiagnosticKind, Netlist, NetlistError, SourceWave,
    DEFAULT_TEMP_K,
};
use crate::devmodel::{ids_unified, BiasPoint, MosModelCard, Polarity};

pub const BUFFER_INPUT: &str = "in";
pub const BUFFER_OUTPUT: &str = "out";

fn invalid(message: String) -> NetlistError {
    NetlistError::single(DiagnosticKind::InvalidValue, None, message)
}

fn require_positive(name: &str, v: f64) -> Result<(), NetlistError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite and > 0, got {v}")))
    }
}

fn require_polarity(card: &MosModelCard, polarity: Polarity) -> Result<(), NetlistError> {
    if card.polarity == polarity {
        Ok(())
    } else {
        Err(invalid(format!("model {} must be {}", card.name, polarity.keyword())))
    }
}

/// CMOS inverter: `Vdd`, input source `Vin`, pull-up `MP1`, pull-down `MN1`, output `out`.
#[derive(Debug, Clone)]
pub struct InverterParams {
    pub vdd: f64,
    pub vin: f64,
    pub nmos: MosModelCard,
    pub pmos: MosModelCard,
    pub w_n: f64,
    pub l_n: f64,
    pub w_p: f64,
    pub l_p: f64,
    /// Additional cards carried by the netlist (sleep devices by default).
    pub extra_models: Vec<MosModelCard>,
}

impl Default for InverterParams {
    fn default() -> Self {
        Self {
            vdd: 3.3,
            vin: 0.0,
            nmos: MosModelCard::nmos_45nm(),
            pmos: MosModelCard::pmos_45nm(),
            w_n: 1e-6,
            l_n: 45e-9,
            w_p: 2e-6,
            l_p: 45e-9,
            extra_models: vec![MosModelCard::nmos_hvt(), MosModelCard::pmos_hvt()],
        }
    }
}

pub fn build_inverter(p: &InverterParams) -> Result<Netlist, NetlistError> {
    require_positive("vdd", p.vdd)?;
    for (name, v) in [("w_n", p.w_n), ("l_n", p.l_n), ("w_p", p.w_p), ("l_p", p.l_p)] {
        require_positive(name, v)?;
    }
    require_polarity(&p.nmos, Polarity::Nmos)?;
    require_polarity(&p.pmos, Polarity::Pmos)?;
    let mut b = Netlist::builder("CMOS inverter")
        .model(p.nmos.clone())
        .model(p.pmos.clone());
    for card in &p.extra_models {
        b = b.model(card.clone());
    }
    b.device(DeviceInstance::vsource("Vdd", "vdd", "0", SourceWave::dc(p.vdd)))
        .device(DeviceInstance::vsource("Vin", "in", "0", SourceWave::dc(p.vin)))
        .device(DeviceInstance::mosfet("MP1", ["out", "in", "vdd", "vdd"], &p.pmos.name, p.w_p, p.l_p))
        .device(DeviceInstance::mosfet("MN1", ["out", "in", "0", "0"], &p.nmos.name, p.w_n, p.l_n))
        .directive(AnalysisDirective::Op { temp_k: DEFAULT_TEMP_K })
        .build()
}

/// Class-AB unity-gain buffer with 9 PMOS (`MPQ1`–`MPQ9`) and 11 NMOS (`MNQ1`–`MNQ11`)
/// devices, all of one size.
///
/// Interconnect:
///
/// * bias: `RB` feeds the diode `MNQ1`; `MNQ2` (tail), `MNQ3`, `MNQ7`, `MNQ10` mirror it;
///   `MPQ1` is the PMOS diode driven by `MNQ3`, mirrored by `MPQ4` and `MPQ6`;
/// * input stage: NMOS pair `MNQ4` (gate = `out`) and `MNQ5` (gate = `in`) with the PMOS
///   mirror load `MPQ2`/`MPQ3`; its output is the pull-up gate node `gp`;
/// * class-AB control: floating pair `MPQ5`/`MNQ6` between `gp` and the pull-down gate
///   node `gn`, biased by the diode stacks `MNQ8`+`MNQ9` (fed by `MPQ6`) and
///   `MPQ7`+`MPQ8` (drained by `MNQ10`); `MPQ4` sources and `MNQ7` sinks the floating
///   current;
/// * output: common-source `MPQ9` (pull-up) and `MNQ11` (pull-down) driving `out` and the
///   optional load capacitor `CL`.
///
/// The bias current is referenced by a resistor rather than an ideal current source, so
/// the circuit keeps a DC solution when its ground rail is gated off. `RB` is sized so the
/// diode `MNQ1` carries exactly `ib` at `temp_k`.
///
/// The default cards have no DIBL: the mirrors are not cascoded, so a drain-dependent
/// threshold unbalances them by an order of magnitude in moderate inversion and the
/// feedback loop saturates. The high-threshold sleep cards keep their DIBL.
#[derive(Debug, Clone)]
pub struct ClassAbBufferParams {
    pub vdd: f64,
    pub ib: f64,
    pub input: SourceWave,
    pub nmos: MosModelCard,
    pub pmos: MosModelCard,
    pub w: f64,
    pub l: f64,
    pub c_load: Option<f64>,
    pub temp_k: f64,
    pub extra_models: Vec<MosModelCard>,
}

impl Default for ClassAbBufferParams {
    fn default() -> Self {
        Self {
            vdd: 3.3,
            ib: 10e-6,
            input: SourceWave::dc(1.65),
            nmos: MosModelCard::nmos_45nm().with_sigma_dibl(0.0),
            pmos: MosModelCard::pmos_45nm().with_sigma_dibl(0.0),
            w: 1e-6,
            l: 45e-9,
            c_load: Some(10e-12),
            temp_k: DEFAULT_TEMP_K,
            extra_models: vec![MosModelCard::nmos_hvt(), MosModelCard::pmos_hvt()],
        }
    }
}

/// Gate-source voltage at which a diode-connected device carries `current`.
fn diode_voltage(card: &MosModelCard, w: f64, l: f64, current: f64, vmax: f64, temp_k: f64) -> Option<f64> {
    let sign = match card.polarity {
        Polarity::Nmos => 1.0,
        Polarity::Pmos => -1.0,
    };
    let f = |v: f64| {
        let bias = BiasPoint::new(sign * v, sign * v, temp_k);
        ids_unified(card, w, l, &bias).map(|e| sign * e.ids - current)
    };
    let (mut lo, mut hi) = (0.0, vmax);
    if f(lo).ok()? > 0.0 || f(hi).ok()? < 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid).ok()? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

pub fn build_class_ab_buffer(p: &ClassAbBufferParams) -> Result<Netlist, NetlistError> {
    require_positive("vdd", p.vdd)?;
    require_positive("ib", p.ib)?;
    require_positive("w", p.w)?;
    require_positive("l", p.l)?;
    require_positive("temp_k", p.temp_k)?;
    if let Some(c) = p.c_load {
        require_positive("c_load", c)?;
    }
    require_polarity(&p.nmos, Polarity::Nmos)?;
    require_polarity(&p.pmos, Polarity::Pmos)?;
    p.nmos.validate().map_err(|e| invalid(format!("model {}: {e}", p.nmos.name)))?;

    let v_diode = diode_voltage(&p.nmos, p.w, p.l, p.ib, p.vdd, p.temp_k)
        .filter(|v| *v < p.vdd)
        .ok_or_else(|| invalid(format!("bias current {} A is not reachable below vdd", p.ib)))?;
    let r_bias = (p.vdd - v_diode) / p.ib;

    let (n, pm) = (p.nmos.name.as_str(), p.pmos.name.as_str());
    let (w, l) = (p.w, p.l);
    let nmos = |name: &str, d: &str, g: &str, s: &str| DeviceInstance::mosfet(name, [d, g, s, "0"], n, w, l);
    let pmos = |name: &str, d: &str, g: &str, s: &str| DeviceInstance::mosfet(name, [d, g, s, "vdd"], pm, w, l);

    let mut b = Netlist::builder("class-AB CMOS buffer")
        .model(p.nmos.clone())
        .model(p.pmos.clone());
    for card in &p.extra_models {
        b = b.model(card.clone());
    }
    b = b
        .device(DeviceInstance::vsource("Vdd", "vdd", "0", SourceWave::dc(p.vdd)))
        .device(DeviceInstance::vsource("Vin", BUFFER_INPUT, "0", p.input.clone()))
        .device(DeviceInstance::resistor("RB", "vdd", "nbn", r_bias))
        // bias
        .device(nmos("MNQ1", "nbn", "nbn", "0"))
        .device(nmos("MNQ2", "tail", "nbn", "0"))
        .device(nmos("MNQ3", "nbp", "nbn", "0"))
        .device(pmos("MPQ1", "nbp", "nbp", "vdd"))
        // input stage
        .device(nmos("MNQ4", "d1", BUFFER_OUTPUT, "tail"))
        .device(nmos("MNQ5", "gp", BUFFER_INPUT, "tail"))
        .device(pmos("MPQ2", "d1", "d1", "vdd"))
        .device(pmos("MPQ3", "gp", "d1", "vdd"))
        // class-AB control
        .device(pmos("MPQ4", "gp", "nbp", "vdd"))
        .device(pmos("MPQ5", "gn", "vbp", "gp"))
        .device(nmos("MNQ6", "gp", "vbn", "gn"))
        .device(nmos("MNQ7", "gn", "nbn", "0"))
        .device(pmos("MPQ6", "vbn", "nbp", "vdd"))
        .device(nmos("MNQ8", "vbn", "vbn", "x1"))
        .device(nmos("MNQ9", "x1", "x1", "0"))
        .device(pmos("MPQ7", "y1", "y1", "vdd"))
        .device(pmos("MPQ8", "vbp", "vbp", "y1"))
        .device(nmos("MNQ10", "vbp", "nbn", "0"))
        // output stage
        .device(pmos("MPQ9", BUFFER_OUTPUT, "gp", "vdd"))
        .device(nmos("MNQ11", BUFFER_OUTPUT, "gn", "0"));
    if let Some(c) = p.c_load {
        b = b.device(DeviceInstance::capacitor("CL", BUFFER_OUTPUT, "0", c));
    }
    b.directive(AnalysisDirective::Op { temp_k: p.temp_k }).build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::DeviceKind;

    #[test]
    fn inverter_structure() {
        let n = build_inverter(&InverterParams::default()).unwrap();
        assert_eq!(n.count(DeviceKind::Mosfet), 2);
        assert_eq!(n.count(DeviceKind::VSource), 2);
        assert!(n.model("nch_hvt").is_some());
    }

    #[test]
    fn inverter_rejects_bad_params() {
        let p = InverterParams { w_n: 0.0, ..Default::default() };
        assert!(build_inverter(&p).is_err());
        let p = InverterParams { nmos: MosModelCard::pmos_45nm(), ..Default::default() };
        assert!(build_inverter(&p).is_err());
    }

    #[test]
    fn buffer_structure() {
        let n = build_class_ab_buffer(&ClassAbBufferParams::default()).unwrap();
        assert_eq!(n.count(DeviceKind::Mosfet), 20);
        let pmos = n.devices().iter().filter(|d| d.name.starts_with("MPQ")).count();
        let nmos = n.devices().iter().filter(|d| d.name.starts_with("MNQ")).count();
        assert_eq!((pmos, nmos), (9, 11));
        assert_eq!(n.source_value("Vdd"), Some(3.3));
    }

    #[test]
    fn bias_resistor_sets_diode_current() {
        let p = ClassAbBufferParams::default();
        let v = diode_voltage(&p.nmos, p.w, p.l, p.ib, p.vdd, p.temp_k).unwrap();
        let i = ids_unified(&p.nmos, p.w, p.l, &BiasPoint::new(v, v, 300.0)).unwrap().ids;
        assert!((i - 10e-6).abs() < 1e-15);
    }

    #[test]
    fn buffer_rejects_unreachable_bias() {
        let p = ClassAbBufferParams { ib: 10.0, ..Default::default() };
        assert!(build_class_ab_buffer(&p).is_err());
    }
}
