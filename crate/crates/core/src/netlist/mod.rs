//! SPICE-subset netlists: data model, parser, serializer, circuit builders and the
//! sleep-transistor gating transform.
//!
//! Grammar (one statement per line, `*` starts a comment line, the first line is the
//! title):
//!
//! ```text
//! Mname drain gate source body model W=<val> L=<val>
//! Rname n1 n2 <ohms>
//! Cname n1 n2 <farads>
//! Vname n+ n- <dc> | PWL(t1 v1 t2 v2 ...)
//! Iname n+ n- <dc> | PWL(t1 v1 t2 v2 ...)
//! .model <name> NMOS|PMOS vth0=<V> eta=<x>|derived tox=<m> wdm=<m> u0cox=<A/V2>
//!        kp=<A/V2> lambda=<1/V> sigma=<x> is=<A>
//! .op [temp=<K>]
//! .dc <source> <start> <stop> <step> [<source2> <start2> <stop2> <step2>] [temp=<K>]
//! .tran <dt> <tstop> [temp=<K>]
//! .end
//! ```
//!
//! Node `0` is ground. Values accept the suffixes `f p n u m k meg g` (case-insensitive);
//! trailing unit letters such as `V` or `F` are ignored.

mod builders;
mod gating;
mod parse;
pub mod units;
mod write;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::devmodel::MosModelCard;

pub use builders::{
    build_class_ab_buffer, build_inverter, ClassAbBufferParams, InverterParams, BUFFER_INPUT,
    BUFFER_OUTPUT,
};
pub use gating::{
    power_gate_transform, GatingError, GatingOptions, GatingStyle, RegatePolicy, SleepState,
    SLEEP_CONTROL, SLEEP_DEVICE,
};
pub use parse::parse;
pub use write::serialize;

/// Default analysis temperature, K.
pub const DEFAULT_TEMP_K: f64 = 300.0;
pub const GROUND: &str = "0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SourceWave {
    Dc { value: f64 },
    /// Piecewise-linear `(time, value)` breakpoints, held constant outside their span.
    Pwl { points: Vec<(f64, f64)> },
}

impl SourceWave {
    pub fn dc(value: f64) -> Self {
        SourceWave::Dc { value }
    }

    pub fn value_at(&self, t: f64) -> f64 {
        match self {
            SourceWave::Dc { value } => *value,
            SourceWave::Pwl { points } => pwl_value(points, t),
        }
    }

    /// Value used by DC analyses.
    pub fn dc_value(&self) -> f64 {
        self.value_at(0.0)
    }
}

fn pwl_value(points: &[(f64, f64)], t: f64) -> f64 {
    let Some(first) = points.first() else {
        return 0.0;
    };
    if t <= first.0 {
        return first.1;
    }
    for pair in points.windows(2) {
        let (t0, v0) = pair[0];
        let (t1, v1) = pair[1];
        if t <= t1 {
            if t1 == t0 {
                return v1;
            }
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
        }
    }
    points[points.len() - 1].1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeviceKind {
    Mosfet,
    Resistor,
    Capacitor,
    VSource,
    ISource,
}

impl DeviceKind {
    pub fn prefix(self) -> char {
        match self {
            DeviceKind::Mosfet => 'M',
            DeviceKind::Resistor => 'R',
            DeviceKind::Capacitor => 'C',
            DeviceKind::VSource => 'V',
            DeviceKind::ISource => 'I',
        }
    }

    pub fn from_prefix(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'M' => Some(DeviceKind::Mosfet),
            'R' => Some(DeviceKind::Resistor),
            'C' => Some(DeviceKind::Capacitor),
            'V' => Some(DeviceKind::VSource),
            'I' => Some(DeviceKind::ISource),
            _ => None,
        }
    }

    pub fn terminal_count(self) -> usize {
        match self {
            DeviceKind::Mosfet => 4,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Element {
    Mosfet { model: String, w: f64, l: f64 },
    Resistor { ohms: f64 },
    Capacitor { farads: f64 },
    VSource { wave: SourceWave },
    ISource { wave: SourceWave },
}

impl Element {
    pub fn kind(&self) -> DeviceKind {
        match self {
            Element::Mosfet { .. } => DeviceKind::Mosfet,
            Element::Resistor { .. } => DeviceKind::Resistor,
            Element::Capacitor { .. } => DeviceKind::Capacitor,
            Element::VSource { .. } => DeviceKind::VSource,
            Element::ISource { .. } => DeviceKind::ISource,
        }
    }
}

/// One circuit element. MOSFET terminals are ordered drain, gate, source, body; two-terminal
/// elements list `n+` then `n-`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceInstance {
    pub name: String,
    pub nodes: Vec<String>,
    pub element: Element,
}

impl DeviceInstance {
    pub fn mosfet(
        name: impl Into<String>,
        [drain, gate, source, body]: [&str; 4],
        model: impl Into<String>,
        w: f64,
        l: f64,
    ) -> Self {
        Self {
            name: name.into(),
            nodes: vec![drain.into(), gate.into(), source.into(), body.into()],
            element: Element::Mosfet { model: model.into(), w, l },
        }
    }

    pub fn resistor(name: impl Into<String>, a: &str, b: &str, ohms: f64) -> Self {
        Self::two_terminal(name, a, b, Element::Resistor { ohms })
    }

    pub fn capacitor(name: impl Into<String>, a: &str, b: &str, farads: f64) -> Self {
        Self::two_terminal(name, a, b, Element::Capacitor { farads })
    }

    pub fn vsource(name: impl Into<String>, p: &str, n: &str, wave: SourceWave) -> Self {
        Self::two_terminal(name, p, n, Element::VSource { wave })
    }

    pub fn isource(name: impl Into<String>, p: &str, n: &str, wave: SourceWave) -> Self {
        Self::two_terminal(name, p, n, Element::ISource { wave })
    }

    fn two_terminal(name: impl Into<String>, a: &str, b: &str, element: Element) -> Self {
        Self { name: name.into(), nodes: vec![a.into(), b.into()], element }
    }

    pub fn kind(&self) -> DeviceKind {
        self.element.kind()
    }
}

/// One source swept from `start` to `stop` inclusive in increments of `step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub source: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepSpec {
    pub fn new(source: impl Into<String>, start: f64, stop: f64, step: f64) -> Self {
        Self { source: source.into(), start, stop, step }
    }

    /// Sample values. None exceeds `stop`, and a value within 10⁻⁹ steps of `stop` is
    /// snapped onto it.
    pub fn values(&self) -> Vec<f64> {
        if !(self.step > 0.0) || !(self.start <= self.stop) {
            return Vec::new();
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| {
                let v = self.start + k as f64 * self.step;
                if (v - self.stop).abs() <= 1e-9 * self.step {
                    self.stop
                } else {
                    v.min(self.stop)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "analysis", rename_all = "lowercase")]
pub enum AnalysisDirective {
    Op { temp_k: f64 },
    /// Sweep `sweep`, optionally repeated for every value of a second source `outer`.
    Dc { sweep: SweepSpec, outer: Option<SweepSpec>, temp_k: f64 },
    Tran { dt: f64, tstop: f64, temp_k: f64 },
}

impl AnalysisDirective {
    pub fn temp_k(&self) -> f64 {
        match self {
            AnalysisDirective::Op { temp_k }
            | AnalysisDirective::Dc { temp_k, .. }
            | AnalysisDirective::Tran { temp_k, .. } => *temp_k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    Syntax,
    InvalidValue,
    UnknownModel,
    UnknownSource,
    DuplicateDevice,
    DuplicateModel,
    MissingGround,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub location: Option<Location>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.location {
            Some(loc) => write!(f, "{}:{}: {}", loc.line, loc.column, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// One or more diagnostics rejecting a netlist.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct NetlistError {
    pub diagnostics: Vec<Diagnostic>,
}

impl NetlistError {
    fn single(kind: DiagnosticKind, location: Option<Location>, message: String) -> Self {
        Self { diagnostics: vec![Diagnostic { kind, location, message }] }
    }

    pub fn has(&self, kind: DiagnosticKind) -> bool {
        self.diagnostics.iter().any(|d| d.kind == kind)
    }
}

impl fmt::Display for NetlistError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for d in &self.diagnostics {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// A validated circuit.
///
/// Built through [`NetlistBuilder`] or [`parse`]; immutable afterwards. Derived variants
/// (different source values, extra model cards) come back as new values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Netlist {
    title: String,
    devices: Vec<DeviceInstance>,
    /// Keyed by lowercase card name.
    models: BTreeMap<String, MosModelCard>,
    directives: Vec<AnalysisDirective>,
    /// Ground first, then nodes in order of first appearance.
    nodes: Vec<String>,
}

impl Netlist {
    pub fn builder(title: impl Into<String>) -> NetlistBuilder {
        NetlistBuilder {
            title: title.into(),
            devices: Vec::new(),
            models: Vec::new(),
            directives: Vec::new(),
        }
    }

    pub fn to_builder(&self) -> NetlistBuilder {
        NetlistBuilder {
            title: self.title.clone(),
            devices: self.devices.clone(),
            models: self.models.values().cloned().collect(),
            directives: self.directives.clone(),
        }
    }

    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn devices(&self) -> &[DeviceInstance] {
        &self.devices
    }

    pub fn models(&self) -> impl Iterator<Item = &MosModelCard> {
        self.models.values()
    }

    pub fn directives(&self) -> &[AnalysisDirective] {
        &self.directives
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn model(&self, name: &str) -> Option<&MosModelCard> {
        self.models.get(&name.to_ascii_lowercase())
    }

    pub fn device(&self, name: &str) -> Option<&DeviceInstance> {
        self.devices.iter().find(|d| d.name.eq_ignore_ascii_case(name))
    }

    pub fn count(&self, kind: DeviceKind) -> usize {
        self.devices.iter().filter(|d| d.kind() == kind).count()
    }

    /// Copy with the DC value of a voltage or current source replaced.
    pub fn with_source_value(&self, source: &str, value: f64) -> Result<Netlist, NetlistError> {
        self.with_source_wave(source, SourceWave::dc(value))
    }

    pub fn with_source_wave(&self, source: &str, wave: SourceWave) -> Result<Netlist, NetlistError> {
        let mut out = self.clone();
        let device = out
            .devices
            .iter_mut()
            .find(|d| d.name.eq_ignore_ascii_case(source))
            .ok_or_else(|| unknown_source(source))?;
        match &mut device.element {
            Element::VSource { wave: w } | Element::ISource { wave: w } => *w = wave,
            _ => return Err(unknown_source(source)),
        }
        Ok(out)
    }

    /// Copy with a model card added, or replaced when the name already exists.
    pub fn with_model(&self, card: MosModelCard) -> Result<Netlist, NetlistError> {
        card.validate().map_err(|e| {
            NetlistError::single(DiagnosticKind::InvalidValue, None, format!("model {}: {e}", card.name))
        })?;
        let mut out = self.clone();
        out.models.insert(card.name.to_ascii_lowercase(), card);
        Ok(out)
    }

    pub fn with_directives(&self, directives: Vec<AnalysisDirective>) -> Result<Netlist, NetlistError> {
        let mut b = self.to_builder();
        b.directives = directives;
        b.build()
    }

    /// Value of a DC voltage or current source.
    pub fn source_value(&self, source: &str) -> Option<f64> {
        match &self.device(source)?.element {
            Element::VSource { wave } | Element::ISource { wave } => Some(wave.dc_value()),
            _ => None,
        }
    }

    /// Supply rail: the positive node of the grounded voltage source with the largest DC
    /// value, preferring a source named `Vdd`. Returns `(source name, node, voltage)`.
    pub fn supply_rail(&self) -> Option<(&str, &str, f64)> {
        let grounded = self.devices.iter().filter_map(|d| match &d.element {
            Element::VSource { wave } if d.nodes[1] == GROUND && d.nodes[0] != GROUND => {
                Some((d.name.as_str(), d.nodes[0].as_str(), wave.dc_value()))
            }
            _ => None,
        });
        let candidates: Vec<_> = grounded.collect();
        candidates
            .iter()
            .find(|(n, _, v)| n.eq_ignore_ascii_case("vdd") && *v > 0.0)
            .or_else(|| {
                candidates
                    .iter()
                    .filter(|(_, _, v)| *v > 0.0)
                    .fold(None, |best: Option<&(&str, &str, f64)>, c| match best {
                        Some(b) if b.2 >= c.2 => Some(b),
                        _ => Some(c),
                    })
            })
            .copied()
    }
}

fn unknown_source(source: &str) -> NetlistError {
    NetlistError::single(DiagnosticKind::UnknownSource, None, format!("unknown source {source}"))
}

#[derive(Debug, Clone)]
pub struct NetlistBuilder {
    title: String,
    devices: Vec<DeviceInstance>,
    models: Vec<MosModelCard>,
    directives: Vec<AnalysisDirective>,
}

impl NetlistBuilder {
    pub fn device(mut self, device: DeviceInstance) -> Self {
        self.devices.push(device);
        self
    }

    pub fn model(mut self, card: MosModelCard) -> Self {
        self.models.push(card);
        self
    }

    pub fn directive(mut self, directive: AnalysisDirective) -> Self {
        self.directives.push(directive);
        self
    }

    pub(crate) fn devices_mut(&mut self) -> &mut Vec<DeviceInstance> {
        &mut self.devices
    }

    pub fn build(self) -> Result<Netlist, NetlistError> {
        assemble(self.title, self.devices, self.models, self.directives, &Locations::default())
    }
}

/// Source positions of parsed statements, used to attach locations to validation errors.
#[derive(Debug, Default)]
pub(crate) struct Locations {
    pub devices: Vec<Location>,
    pub models: Vec<Location>,
    pub directives: Vec<Location>,
    pub end: Option<Location>,
}

fn valid_token(s: &str) -> bool {
    !s.is_empty()
        && !s.starts_with(['.', '*', '+'])
        && s.chars().all(|c| c.is_ascii_graphic() && !matches!(c, '(' | ')' | '=' | ','))
}

pub(crate) fn assemble(
    title: String,
    devices: Vec<DeviceInstance>,
    model_list: Vec<MosModelCard>,
    directives: Vec<AnalysisDirective>,
    locs: &Locations,
) -> Result<Netlist, NetlistError> {
    let title = title.trim().to_string();
    let mut diags = Vec::new();
    let mut push = |kind, location: Option<Location>, message: String| {
        diags.push(Diagnostic { kind, location, message })
    };

    if title.contains(['\n', '\r']) {
        push(DiagnosticKind::Syntax, None, "title must be a single line".into());
    }

    let mut models = BTreeMap::new();
    for (i, card) in model_list.into_iter().enumerate() {
        let loc = locs.models.get(i).copied();
        if !valid_token(&card.name) {
            push(DiagnosticKind::Syntax, loc, format!("invalid model name {:?}", card.name));
        }
        if let Err(e) = card.validate() {
            push(DiagnosticKind::InvalidValue, loc, format!("model {}: {e}", card.name));
        }
        let key = card.name.to_ascii_lowercase();
        if models.contains_key(&key) {
            push(DiagnosticKind::DuplicateModel, loc, format!("duplicate model {}", card.name));
        } else {
            models.insert(key, card);
        }
    }

    let mut names = HashSet::new();
    let mut nodes = vec![GROUND.to_string()];
    let mut seen_nodes: HashSet<String> = HashSet::new();
    let mut ground_used = false;
    for (i, dev) in devices.iter().enumerate() {
        let loc = locs.devices.get(i).copied();
        let kind = dev.kind();
        let prefix_ok = dev
            .name
            .chars()
            .next()
            .and_then(DeviceKind::from_prefix)
            .is_some_and(|k| k == kind);
        if !valid_token(&dev.name) || !prefix_ok {
            push(
                DiagnosticKind::Syntax,
                loc,
                format!("device name {:?} must start with '{}'", dev.name, kind.prefix()),
            );
        }
        if !names.insert(dev.name.to_ascii_lowercase()) {
            push(DiagnosticKind::DuplicateDevice, loc, format!("duplicate device {}", dev.name));
        }
        if dev.nodes.len() != kind.terminal_count() {
            push(
                DiagnosticKind::Syntax,
                loc,
                format!("{} needs {} nodes, got {}", dev.name, kind.terminal_count(), dev.nodes.len()),
            );
        }
        for node in &dev.nodes {
            if !valid_token(node) {
                push(DiagnosticKind::Syntax, loc, format!("invalid node name {node:?}"));
                continue;
            }
            if node == GROUND {
                ground_used = true;
            } else if seen_nodes.insert(node.clone()) {
                nodes.push(node.clone());
            }
        }
        let bad_value = |what: &str, v: f64| format!("{}: {what} must be finite and > 0, got {v}", dev.name);
        match &dev.element {
            Element::Mosfet { model, w, l } => {
                if !models.contains_key(&model.to_ascii_lowercase()) {
                    push(DiagnosticKind::UnknownModel, loc, format!("unknown model {model}"));
                }
                if !(w.is_finite() && *w > 0.0) {
                    push(DiagnosticKind::InvalidValue, loc, bad_value("W", *w));
                }
                if !(l.is_finite() && *l > 0.0) {
                    push(DiagnosticKind::InvalidValue, loc, bad_value("L", *l));
                }
            }
            Element::Resistor { ohms } => {
                if !(ohms.is_finite() && *ohms > 0.0) {
                    push(DiagnosticKind::InvalidValue, loc, bad_value("resistance", *ohms));
                }
            }
            Element::Capacitor { farads } => {
                if !(farads.is_finite() && *farads > 0.0) {
                    push(DiagnosticKind::InvalidValue, loc, bad_value("capacitance", *farads));
                }
            }
            Element::VSource { wave } | Element::ISource { wave } => {
                if let Err(msg) = check_wave(wave) {
                    push(DiagnosticKind::InvalidValue, loc, format!("{}: {msg}", dev.name));
                }
            }
        }
    }
    if !ground_used {
        push(
            DiagnosticKind::MissingGround,
            locs.end,
            "missing ground node 0".into(),
        );
    }

    for (i, d) in directives.iter().enumerate() {
        let loc = locs.directives.get(i).copied();
        if let Err(msg) = check_directive(d, &devices) {
            let kind = if msg.starts_with("unknown source") {
                DiagnosticKind::UnknownSource
            } else {
                DiagnosticKind::InvalidValue
            };
            push(kind, loc, msg);
        }
    }

    if diags.is_empty() {
        Ok(Netlist { title, devices, models, directives, nodes })
    } else {
        diags.sort_by_key(|d| d.location.map(|l| (l.line, l.column)));
        Err(NetlistError { diagnostics: diags })
    }
}

fn check_wave(wave: &SourceWave) -> Result<(), String> {
    match wave {
        SourceWave::Dc { value } if value.is_finite() => Ok(()),
        SourceWave::Dc { value } => Err(format!("value {value} is not finite")),
        SourceWave::Pwl { points } => {
            if points.is_empty() {
                return Err("PWL needs at least one point".into());
            }
            if points.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
                return Err("PWL values must be finite".into());
            }
            if points.windows(2).any(|p| p[1].0 < p[0].0) {
                return Err("PWL times must be nondecreasing".into());
            }
            Ok(())
        }
    }
}

fn check_directive(d: &AnalysisDirective, devices: &[DeviceInstance]) -> Result<(), String> {
    let temp = d.temp_k();
    if !(temp.is_finite() && temp > 0.0) {
        return Err(format!("temperature must be > 0 K, got {temp}"));
    }
    match d {
        AnalysisDirective::Op { .. } => Ok(()),
        AnalysisDirective::Dc { sweep, outer, .. } => {
            check_sweep(sweep, devices)?;
            if let Some(outer) = outer {
                check_sweep(outer, devices)?;
                if outer.source.eq_ignore_ascii_case(&sweep.source) {
                    return Err(format!("outer sweep repeats source {}", outer.source));
                }
            }
            Ok(())
        }
        AnalysisDirective::Tran { dt, tstop, .. } => {
            if !(dt.is_finite() && *dt > 0.0) {
                return Err(format!(".tran step must be > 0, got {dt}"));
            }
            if !(tstop.is_finite() && tstop >= dt) {
                return Err(format!(".tran stop {tstop} must be >= step {dt}"));
            }
            Ok(())
        }
    }
}

fn check_sweep(s: &SweepSpec, devices: &[DeviceInstance]) -> Result<(), String> {
    let SweepSpec { source, start, stop, step } = s;
    {
        {
            let is_source = devices.iter().any(|dev| {
                dev.name.eq_ignore_ascii_case(source)
                    && matches!(dev.kind(), DeviceKind::VSource | DeviceKind::ISource)
            });
            if !is_source {
                return Err(format!("unknown source {source}"));
            }
            if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
                return Err(".dc values must be finite".into());
            }
            if *step <= 0.0 {
                return Err(format!(".dc step must be > 0, got {step}"));
            }
            if start > stop {
                return Err(format!(".dc start {start} exceeds stop {stop}"));
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::devmodel::Polarity;

    #[test]
    fn pwl_interpolates_and_holds() {
        let w = SourceWave::Pwl { points: vec![(0.0, 0.0), (1e-9, 1.0), (2e-9, 1.0)] };
        assert_eq!(w.value_at(-1.0), 0.0);
        assert_eq!(w.value_at(0.5e-9), 0.5);
        assert_eq!(w.value_at(5e-9), 1.0);
    }

    #[test]
    fn builder_rejects_bad_values() {
        let err = Netlist::builder("t")
            .device(DeviceInstance::resistor("R1", "a", "0", -1.0))
            .device(DeviceInstance::resistor("r1", "a", "0", 1.0))
            .build()
            .unwrap_err();
        assert!(err.has(DiagnosticKind::InvalidValue));
        assert!(err.has(DiagnosticKind::DuplicateDevice));
    }

    #[test]
    fn builder_requires_ground_and_models() {
        let err = Netlist::builder("t")
            .device(DeviceInstance::mosfet("M1", ["a", "b", "c", "c"], "nope", 1e-6, 1e-6))
            .build()
            .unwrap_err();
        assert!(err.has(DiagnosticKind::MissingGround));
        assert!(err.has(DiagnosticKind::UnknownModel));
    }

    #[test]
    fn node_table_is_ground_first() {
        let n = Netlist::builder("t")
            .device(DeviceInstance::vsource("V1", "in", "0", SourceWave::dc(1.0)))
            .device(DeviceInstance::resistor("R1", "in", "out", 1.0))
            .device(DeviceInstance::resistor("R2", "out", "0", 1.0))
            .build()
            .unwrap();
        assert_eq!(n.nodes(), ["0", "in", "out"]);
    }

    #[test]
    fn supply_rail_prefers_vdd() {
        let n = Netlist::builder("t")
            .device(DeviceInstance::vsource("Vbig", "b", "0", SourceWave::dc(5.0)))
            .device(DeviceInstance::vsource("VDD", "s", "0", SourceWave::dc(3.3)))
            .device(DeviceInstance::mosfet("M1", ["b", "s", "0", "0"], "n", 1e-6, 1e-6))
            .model(MosModelCard::new("n", Polarity::Nmos, 0.3))
            .build()
            .unwrap();
        assert_eq!(n.supply_rail(), Some(("VDD", "s", 3.3)));
    }
}
