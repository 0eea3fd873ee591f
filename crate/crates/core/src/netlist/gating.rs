//! Sleep-transistor insertion ("transistor gating").
//!
//! A footer puts a high-threshold NMOS between a virtual ground `vgnd` and ground; a
//! header puts a PMOS between the supply and a virtual supply `vvdd`. MOSFET channel
//! terminals and resistors on the gated rail move to the virtual rail. Independent sources,
//! capacitors and MOSFET body terminals stay on the true rail.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{DeviceInstance, Element, Netlist, NetlistError, SourceWave, GROUND};
use crate::devmodel::Polarity;

pub const SLEEP_DEVICE: &str = "MSLEEP";
pub const SLEEP_CONTROL: &str = "VSLEEP";
pub const VIRTUAL_GROUND: &str = "vgnd";
pub const VIRTUAL_SUPPLY: &str = "vvdd";
pub const SLEEP_NODE: &str = "sleep";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GatingStyle {
    Footer,
    Header,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SleepState {
    Active,
    Standby,
}

/// What to do when the input already carries a sleep device.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegatePolicy {
    #[default]
    Error,
    Unchanged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GatingOptions {
    pub style: GatingStyle,
    pub sleep_model: String,
    /// Defaults to ten times the widest device on the gated rail.
    pub w: Option<f64>,
    /// Defaults to the shortest channel length in the netlist.
    pub l: Option<f64>,
    pub state: SleepState,
    pub regate: RegatePolicy,
}

impl GatingOptions {
    pub fn footer(sleep_model: impl Into<String>) -> Self {
        Self {
            style: GatingStyle::Footer,
            sleep_model: sleep_model.into(),
            w: None,
            l: None,
            state: SleepState::Standby,
            regate: RegatePolicy::Error,
        }
    }

    pub fn header(sleep_model: impl Into<String>) -> Self {
        Self { style: GatingStyle::Header, ..Self::footer(sleep_model) }
    }

    pub fn with_state(mut self, state: SleepState) -> Self {
        self.state = state;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GatingError {
    #[error("already gated")]
    AlreadyGated,
    #[error("no supply rail found")]
    NoSupply,
    #[error("no devices found on rail {0}")]
    NoRailDevices(String),
    #[error("unknown sleep model {0}")]
    UnknownSleepModel(String),
    #[error("sleep model {model} must be {expected} for a {style:?} switch")]
    SleepPolarity { model: String, expected: &'static str, style: GatingStyle },
    #[error("node or device name {0} is already in use")]
    NameConflict(String),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

fn is_gated(netlist: &Netlist) -> bool {
    netlist.device(SLEEP_DEVICE).is_some()
        || netlist.nodes().iter().any(|n| n == VIRTUAL_GROUND || n == VIRTUAL_SUPPLY)
}

/// Insert a sleep transistor on one rail. The input netlist is left untouched.
pub fn power_gate_transform(netlist: &Netlist, options: &GatingOptions) -> Result<Netlist, GatingError> {
    if is_gated(netlist) {
        return match options.regate {
            RegatePolicy::Error => Err(GatingError::AlreadyGated),
            RegatePolicy::Unchanged => Ok(netlist.clone()),
        };
    }
    let card = netlist
        .model(&options.sleep_model)
        .ok_or_else(|| GatingError::UnknownSleepModel(options.sleep_model.clone()))?;
    let expected = match options.style {
        GatingStyle::Footer => Polarity::Nmos,
        GatingStyle::Header => Polarity::Pmos,
    };
    if card.polarity != expected {
        return Err(GatingError::SleepPolarity {
            model: card.name.clone(),
            expected: expected.keyword(),
            style: options.style,
        });
    }
    let (_, supply_node, vdd) = netlist.supply_rail().ok_or(GatingError::NoSupply)?;
    let supply_node = supply_node.to_string();
    for name in [SLEEP_CONTROL, SLEEP_NODE] {
        if netlist.device(name).is_some() || netlist.nodes().iter().any(|n| n == name) {
            return Err(GatingError::NameConflict(name.into()));
        }
    }

    let (rail, virtual_rail) = match options.style {
        GatingStyle::Footer => (GROUND.to_string(), VIRTUAL_GROUND),
        GatingStyle::Header => (supply_node.clone(), VIRTUAL_SUPPLY),
    };

    let mut builder = netlist.to_builder();
    let mut rail_devices = 0usize;
    let mut widest: f64 = 0.0;
    for dev in builder.devices_mut().iter_mut() {
        let terminals: &[usize] = match dev.element {
            Element::Mosfet { .. } => &[0, 2],
            Element::Resistor { .. } => &[0, 1],
            _ => &[],
        };
        let mut touched = false;
        for &t in terminals {
            if dev.nodes[t] == rail {
                dev.nodes[t] = virtual_rail.to_string();
                touched = true;
            }
        }
        if touched {
            rail_devices += 1;
            if let Element::Mosfet { w, .. } = dev.element {
                widest = widest.max(w);
            }
        }
    }
    if rail_devices == 0 {
        return Err(GatingError::NoRailDevices(rail));
    }
    let shortest = netlist
        .devices()
        .iter()
        .filter_map(|d| match d.element {
            Element::Mosfet { l, .. } => Some(l),
            _ => None,
        })
        .fold(f64::INFINITY, f64::min);
    let w = options.w.unwrap_or(10.0 * widest);
    let l = options.l.unwrap_or(shortest);

    let (sleep, gate_value) = match options.style {
        GatingStyle::Footer => (
            DeviceInstance::mosfet(SLEEP_DEVICE, [VIRTUAL_GROUND, SLEEP_NODE, GROUND, GROUND], &card.name, w, l),
            if options.state == SleepState::Active { vdd } else { 0.0 },
        ),
        GatingStyle::Header => (
            DeviceInstance::mosfet(
                SLEEP_DEVICE,
                [VIRTUAL_SUPPLY, SLEEP_NODE, &supply_node, &supply_node],
                &card.name,
                w,
                l,
            ),
            if options.state == SleepState::Active { 0.0 } else { vdd },
        ),
    };
    let control = DeviceInstance::vsource(SLEEP_CONTROL, SLEEP_NODE, GROUND, SourceWave::dc(gate_value));
    Ok(builder.device(sleep).device(control).build()?)
}
