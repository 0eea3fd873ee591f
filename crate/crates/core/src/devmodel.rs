//! Subthreshold-aware MOSFET current model.
//!
//! Two families of expressions live here:
//!
//! * the empirical threshold-current law, `Ids = 100 nA · W/L · exp((Vgs − Vt)/(η·vT))`,
//!   together with the off-current and subthreshold-swing figures derived from it;
//! * a physical compact model used by the circuit engine: the weak-inversion diffusion
//!   current `μ0·Cox·W/L·(m − 1)·vT² · exp((Vgs − Vth)/(m·vT)) · (1 − exp(−Vds/vT))`
//!   blended with a square-law strong-inversion term, plus an ideal reverse-diode
//!   junction leakage.
//!
//! Everything is a pure function of its inputs. [`ids_unified`] returns analytic partial
//! derivatives for Newton stamping.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380649e-23;
/// Elementary charge, C.
pub const ELECTRON_CHARGE: f64 = 1.602177e-19;
/// Drain current per square that defines the threshold voltage in the empirical law, A.
pub const THRESHOLD_CURRENT_PER_SQUARE: f64 = 100e-9;
/// Exponent arguments are clamped to `±EXP_CLAMP` before exponentiation.
pub const EXP_CLAMP: f64 = 120.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{name} must be {requirement}, got {value}")]
    Domain {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("{0} is not finite")]
    NonFinite(&'static str),
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;

fn positive(name: &'static str, value: f64) -> Result<f64> {
    finite(name, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(ModelError::Domain { name, requirement: "> 0", value })
    }
}

fn nonnegative(name: &'static str, value: f64) -> Result<f64> {
    finite(name, value)?;
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(ModelError::Domain { name, requirement: ">= 0", value })
    }
}

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ModelError::NonFinite(name))
    }
}

fn eta_at_least_one(value: f64) -> Result<f64> {
    finite("eta", value)?;
    if value >= 1.0 {
        Ok(value)
    } else {
        Err(ModelError::Domain { name: "eta", requirement: ">= 1", value })
    }
}

/// `exp(arg)` with the argument clamped to `±EXP_CLAMP`. The flag reports whether the
/// clamp was active; a clamped exponential has zero derivative.
fn clamped_exp(arg: f64) -> (f64, bool) {
    if arg > EXP_CLAMP {
        (EXP_CLAMP.exp(), true)
    } else if arg < -EXP_CLAMP {
        ((-EXP_CLAMP).exp(), true)
    } else {
        (arg.exp(), false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Nmos,
    Pmos,
}

impl Polarity {
    pub fn keyword(self) -> &'static str {
        match self {
            Polarity::Nmos => "NMOS",
            Polarity::Pmos => "PMOS",
        }
    }
}

/// How a card obtains its subthreshold coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaSpec {
    Given(f64),
    /// `1 + 3·tox/wdm`.
    Derived,
}

/// Named parameter set for one transistor flavor.
///
/// Magnitudes are polarity independent: a PMOS card carries a positive `vth0` and the
/// PMOS current is obtained by mirroring the NMOS expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MosModelCard {
    pub name: String,
    pub polarity: Polarity,
    /// Zero-bias threshold voltage, V.
    pub vth0: f64,
    pub eta: EtaSpec,
    /// Gate oxide thickness, m.
    pub tox: f64,
    /// Maximum depletion width, m.
    pub wdm: f64,
    /// Lumped mobility times oxide capacitance, A/V².
    pub u0cox: f64,
    /// Strong-inversion transconductance parameter, A/V².
    pub kp: f64,
    /// Channel-length modulation, 1/V.
    pub lambda: f64,
    /// Linear DIBL coefficient: `Vth_eff = vth0 − sigma_dibl·|Vds|`.
    pub sigma_dibl: f64,
    /// Drain/source junction reverse saturation current, A.
    pub is_junction: f64,
}

impl MosModelCard {
    /// Card with neutral defaults: `eta` derived from `tox = 2 nm`, `wdm = 12 nm` (η = 1.5),
    /// `u0cox = kp = 350 µA/V²`, no channel-length modulation, no DIBL, no junction leakage.
    pub fn new(name: impl Into<String>, polarity: Polarity, vth0: f64) -> Self {
        Self {
            name: name.into(),
            polarity,
            vth0,
            eta: EtaSpec::Derived,
            tox: 2e-9,
            wdm: 12e-9,
            u0cox: 3.5e-4,
            kp: 3.5e-4,
            lambda: 0.0,
            sigma_dibl: 0.0,
            is_junction: 0.0,
        }
    }

    /// Low-threshold short-channel NMOS used by the circuit builders.
    pub fn nmos_45nm() -> Self {
        Self {
            sigma_dibl: 0.05,
            ..Self::new("nch", Polarity::Nmos, 0.2)
        }
    }

    /// PMOS counterpart of [`MosModelCard::nmos_45nm`], with 40% of the NMOS mobility.
    pub fn pmos_45nm() -> Self {
        Self {
            u0cox: 1.4e-4,
            kp: 1.4e-4,
            sigma_dibl: 0.05,
            ..Self::new("pch", Polarity::Pmos, 0.2)
        }
    }

    /// High-threshold NMOS intended as a sleep device.
    pub fn nmos_hvt() -> Self {
        Self {
            name: "nch_hvt".into(),
            vth0: 0.4,
            ..Self::nmos_45nm()
        }
    }

    /// High-threshold PMOS intended as a sleep device.
    pub fn pmos_hvt() -> Self {
        Self {
            name: "pch_hvt".into(),
            vth0: 0.4,
            ..Self::pmos_45nm()
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_vth0(mut self, vth0: f64) -> Self {
        self.vth0 = vth0;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = EtaSpec::Given(eta);
        self
    }

    pub fn with_sigma_dibl(mut self, sigma: f64) -> Self {
        self.sigma_dibl = sigma;
        self
    }

    /// Effective subthreshold coefficient.
    pub fn eta(&self) -> f64 {
        match self.eta {
            EtaSpec::Given(v) => v,
            EtaSpec::Derived => 1.0 + 3.0 * self.tox / self.wdm,
        }
    }

    pub fn validate(&self) -> Result<()> {
        finite("vth0", self.vth0)?;
        positive("tox", self.tox)?;
        positive("wdm", self.wdm)?;
        eta_at_least_one(self.eta())?;
        nonnegative("u0cox", self.u0cox)?;
        nonnegative("kp", self.kp)?;
        nonnegative("lambda", self.lambda)?;
        nonnegative("sigma", self.sigma_dibl)?;
        nonnegative("is", self.is_junction)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasPoint {
    pub vgs: f64,
    pub vds: f64,
    pub temp_k: f64,
}

impl BiasPoint {
    pub fn new(vgs: f64, vds: f64, temp_k: f64) -> Self {
        Self { vgs, vds, temp_k }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Region {
    OffWeak,
    Triode,
    Saturation,
}

/// Drain current and its exact partials at one bias point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceEval {
    /// Current flowing into the drain terminal, A.
    pub ids: f64,
    pub d_ids_d_vgs: f64,
    pub d_ids_d_vds: f64,
    pub region: Region,
    /// Set when an exponent hit the `±EXP_CLAMP` guard.
    pub clamped: bool,
}

pub fn thermal_voltage(temp_k: f64) -> Result<f64> {
    positive("temperature", temp_k)?;
    Ok(BOLTZMANN * temp_k / ELECTRON_CHARGE)
}

/// `M = 1 + 3·tox/Wdm`.
pub fn body_coefficient(tox: f64, wdm: f64) -> Result<f64> {
    positive("tox", tox)?;
    positive("wdm", wdm)?;
    Ok(1.0 + 3.0 * tox / wdm)
}

/// `η = 1 + Cdep/Coxe`, the reciprocal of the surface-potential sensitivity `dφs/dVgs`.
pub fn eta_from_caps(c_dep: f64, c_oxe: f64) -> Result<f64> {
    positive("c_oxe", c_oxe)?;
    nonnegative("c_dep", c_dep)?;
    Ok(1.0 + c_dep / c_oxe)
}

/// Rounded reporting form of the subthreshold swing, `η · 60 mV · T/300`, in mV/decade.
pub fn subthreshold_swing_nominal(eta: f64, temp_k: f64) -> Result<f64> {
    eta_at_least_one(eta)?;
    positive("temperature", temp_k)?;
    Ok(eta * 60.0 * temp_k / 300.0)
}

/// Decade spacing of the exponential, `η · vT · ln 10`, in mV/decade.
pub fn subthreshold_swing_exact(eta: f64, temp_k: f64) -> Result<f64> {
    eta_at_least_one(eta)?;
    Ok(eta * thermal_voltage(temp_k)? * std::f64::consts::LN_10 * 1e3)
}

fn check_empirical(w_over_l: f64, eta: f64, temp_k: f64) -> Result<f64> {
    positive("w_over_l", w_over_l)?;
    eta_at_least_one(eta)?;
    thermal_voltage(temp_k)
}

/// Empirical threshold-current law: `100 nA · W/L · exp((Vgs − Vt)/(η·vT))`.
pub fn ids_empirical(w_over_l: f64, vgs: f64, vt: f64, eta: f64, temp_k: f64) -> Result<f64> {
    let v_t = check_empirical(w_over_l, eta, temp_k)?;
    finite("vgs", vgs)?;
    finite("vt", vt)?;
    let (e, _) = clamped_exp((vgs - vt) / (eta * v_t));
    Ok(THRESHOLD_CURRENT_PER_SQUARE * w_over_l * e)
}

/// Off current: the empirical law evaluated at `Vgs = 0`.
pub fn ioff_empirical(w_over_l: f64, vt: f64, eta: f64, temp_k: f64) -> Result<f64> {
    ids_empirical(w_over_l, 0.0, vt, eta, temp_k)
}

fn check_geometry(card: &MosModelCard, w: f64, l: f64, bias: &BiasPoint) -> Result<f64> {
    positive("w", w)?;
    positive("l", l)?;
    finite("vgs", bias.vgs)?;
    finite("vds", bias.vds)?;
    card.validate()?;
    thermal_voltage(bias.temp_k)
}

/// Weak-inversion diffusion current of an NMOS-oriented device (no blending, no mirroring).
pub fn ids_weak_inversion(card: &MosModelCard, w: f64, l: f64, bias: &BiasPoint) -> Result<f64> {
    let v_t = check_geometry(card, w, l, bias)?;
    let m = card.eta();
    let vth = card.vth0 - card.sigma_dibl * bias.vds;
    let prefactor = card.u0cox * (w / l) * (m - 1.0) * v_t * v_t;
    let (gate, _) = clamped_exp((bias.vgs - vth) / (m * v_t));
    let (drain, _) = clamped_exp(-bias.vds / v_t);
    Ok(prefactor * gate * (1.0 - drain))
}

/// Square-law strong-inversion current of an NMOS-oriented device. Zero at or below
/// threshold.
pub fn ids_strong_inversion(
    card: &MosModelCard,
    w: f64,
    l: f64,
    bias: &BiasPoint,
) -> Result<f64> {
    check_geometry(card, w, l, bias)?;
    let vov = bias.vgs - (card.vth0 - card.sigma_dibl * bias.vds);
    let (ids, _, _) = square_law(card.kp * w / l, card.lambda, vov, bias.vds);
    Ok(ids)
}

/// Returns `(ids, ∂ids/∂vov, ∂ids/∂vds at fixed vov)` for `vds ≥ 0`.
fn square_law(beta: f64, lambda: f64, vov: f64, vds: f64) -> (f64, f64, f64) {
    if vov <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let clm = 1.0 + lambda * vds;
    if vds < vov {
        let core = vov * vds - 0.5 * vds * vds;
        (
            beta * core * clm,
            beta * vds * clm,
            beta * (vov - vds) * clm + beta * core * lambda,
        )
    } else {
        let core = 0.5 * vov * vov;
        (beta * core * clm, beta * vov * clm, beta * core * lambda)
    }
}

/// Blended NMOS-oriented evaluation for `vds ≥ 0`.
fn nmos_forward(card: &MosModelCard, wl: f64, vgs: f64, vds: f64, v_t: f64) -> DeviceEval {
    let m = card.eta();
    let n_vt = m * v_t;
    let vov = vgs - (card.vth0 - card.sigma_dibl * vds);
    let i_weak = card.u0cox * wl * (m - 1.0) * v_t * v_t;

    let (e_drain, drain_clamped) = clamped_exp(-vds / v_t);
    let drain = 1.0 - e_drain;
    let d_drain = if drain_clamped { 0.0 } else { e_drain / v_t };

    // Below threshold the exponential alone; above it, its tangent continuation, so the
    // weak term stays C¹ and never overflows.
    let (gate, d_gate, gate_clamped) = if vov < 0.0 {
        let (e, c) = clamped_exp(vov / n_vt);
        (e, if c { 0.0 } else { e / n_vt }, c)
    } else {
        (1.0 + vov / n_vt, 1.0 / n_vt, false)
    };

    let (i_sq, d_sq_vov, d_sq_vds) = square_law(card.kp * wl, card.lambda, vov, vds);

    let ids = i_weak * gate * drain + i_sq;
    let d_vov = i_weak * d_gate * drain + d_sq_vov;
    let d_vds_direct = i_weak * gate * d_drain + d_sq_vds;

    let region = if vov < 0.0 {
        Region::OffWeak
    } else if vds < vov {
        Region::Triode
    } else {
        Region::Saturation
    };

    DeviceEval {
        ids,
        d_ids_d_vgs: d_vov,
        d_ids_d_vds: d_vds_direct + card.sigma_dibl * d_vov,
        region,
        clamped: drain_clamped || gate_clamped,
    }
}

/// NMOS-oriented evaluation for any sign of `vds`, using source/drain exchange.
fn nmos_any(card: &MosModelCard, wl: f64, vgs: f64, vds: f64, v_t: f64) -> DeviceEval {
    if vds >= 0.0 {
        return nmos_forward(card, wl, vgs, vds, v_t);
    }
    // Terminals swapped: vgs' = vgs − vds, vds' = −vds, ids = −f(vgs', vds').
    let f = nmos_forward(card, wl, vgs - vds, -vds, v_t);
    DeviceEval {
        ids: -f.ids,
        d_ids_d_vgs: -f.d_ids_d_vgs,
        d_ids_d_vds: f.d_ids_d_vgs + f.d_ids_d_vds,
        region: f.region,
        clamped: f.clamped,
    }
}

/// Evaluate without re-validating the card. Callers guarantee `card.validate()` passed,
/// `wl > 0` and `v_t > 0`.
pub(crate) fn eval_unchecked(
    card: &MosModelCard,
    wl: f64,
    vgs: f64,
    vds: f64,
    v_t: f64,
) -> DeviceEval {
    match card.polarity {
        Polarity::Nmos => nmos_any(card, wl, vgs, vds, v_t),
        Polarity::Pmos => {
            let f = nmos_any(card, wl, -vgs, -vds, v_t);
            DeviceEval { ids: -f.ids, ..f }
        }
    }
}

/// Single C¹ drain-current function of both polarities, with partials.
///
/// PMOS devices obey `ids(Vgs, Vds) = −ids_nmos(−Vgs, −Vds)`.
pub fn ids_unified(card: &MosModelCard, w: f64, l: f64, bias: &BiasPoint) -> Result<DeviceEval> {
    let v_t = check_geometry(card, w, l, bias)?;
    Ok(eval_unchecked(card, w / l, bias.vgs, bias.vds, v_t))
}

/// Ideal reverse-diode leakage, `Is·(1 − exp(−Vr/vT))`. Positive for reverse bias.
pub fn junction_reverse_current(is_junction: f64, v_reverse: f64, temp_k: f64) -> Result<f64> {
    nonnegative("is", is_junction)?;
    finite("v_reverse", v_reverse)?;
    let v_t = thermal_voltage(temp_k)?;
    let (e, _) = clamped_exp(-v_reverse / v_t);
    Ok(is_junction * (1.0 - e))
}

/// Junction current and its derivative with respect to the reverse voltage.
pub(crate) fn junction_eval(is_junction: f64, v_reverse: f64, v_t: f64) -> (f64, f64) {
    let (e, clamped) = clamped_exp(-v_reverse / v_t);
    let d = if clamped { 0.0 } else { is_junction * e / v_t };
    (is_junction * (1.0 - e), d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn thermal_voltage_values() {
        assert!(rel(thermal_voltage(300.0).unwrap(), 0.025852) < 1e-5);
        assert!(rel(thermal_voltage(600.0).unwrap(), 0.051704) < 1e-5);
        assert!(thermal_voltage(0.0).is_err());
        assert!(thermal_voltage(-1.0).is_err());
        assert!(thermal_voltage(f64::NAN).is_err());
    }

    #[test]
    fn body_coefficient_values() {
        assert!((body_coefficient(1e-30, 60e-9).unwrap() - 1.0).abs() < 1e-15);
        assert!((body_coefficient(2e-9, 60e-9).unwrap() - 1.1).abs() < 1e-12);
        assert!((body_coefficient(1e-9, 30e-9).unwrap() - 1.1).abs() < 1e-12);
        assert!(body_coefficient(0.0, 30e-9).is_err());
        assert!(body_coefficient(1e-9, -1.0).is_err());
    }

    #[test]
    fn eta_from_caps_values() {
        assert_eq!(eta_from_caps(0.0, 1e-2).unwrap(), 1.0);
        assert_eq!(eta_from_caps(1e-2, 1e-2).unwrap(), 2.0);
        assert_eq!(eta_from_caps(0.5e-2, 1e-2).unwrap(), 1.5);
        assert!(eta_from_caps(1e-2, 0.0).is_err());
        assert!(eta_from_caps(-1e-3, 1e-2).is_err());
    }

    #[test]
    fn swing_values() {
        assert_eq!(subthreshold_swing_nominal(1.0, 300.0).unwrap(), 60.0);
        assert_eq!(subthreshold_swing_nominal(1.5, 300.0).unwrap(), 90.0);
        assert_eq!(subthreshold_swing_nominal(1.5, 600.0).unwrap(), 180.0);
        assert!(rel(subthreshold_swing_exact(1.0, 300.0).unwrap(), 59.526) < 1e-4);
        assert!(rel(subthreshold_swing_exact(1.5, 300.0).unwrap(), 89.29) < 1e-4);
        assert!(rel(subthreshold_swing_exact(1.0, 150.0).unwrap(), 29.763) < 1e-4);
        assert!(subthreshold_swing_nominal(0.9, 300.0).is_err());
        assert!(subthreshold_swing_exact(1.0, 0.0).is_err());
    }

    #[test]
    fn empirical_law_values() {
        assert!(rel(ids_empirical(1.0, 0.3, 0.3, 1.5, 300.0).unwrap(), 100e-9) < 1e-15);
        assert!(rel(ids_empirical(2.0, 0.3, 0.3, 1.5, 300.0).unwrap(), 200e-9) < 1e-15);
        let decade_down = ids_empirical(1.0, 0.2 - 0.08929, 0.2, 1.5, 300.0).unwrap();
        assert!(rel(decade_down, 10e-9) < 1e-4);
        assert!(rel(ioff_empirical(3.0, 0.0, 1.5, 300.0).unwrap(), 300e-9) < 1e-15);
        // exp(-0.2/(1.5 kT/q)) · 100 nA, high-precision reference 5.755698982e-10.
        assert!(rel(ioff_empirical(1.0, 0.2, 1.5, 300.0).unwrap(), 5.755698982e-10) < 1e-8);
        assert!(rel(ioff_empirical(10.0, 0.2, 1.5, 300.0).unwrap(), 5.755698982e-9) < 1e-8);
        assert!(ids_empirical(0.0, 0.0, 0.2, 1.5, 300.0).is_err());
        assert!(ids_empirical(1.0, 0.0, 0.2, 0.5, 300.0).is_err());
    }

    fn fixture() -> MosModelCard {
        MosModelCard {
            u0cox: 3.5e-4,
            ..MosModelCard::new("n", Polarity::Nmos, 0.2).with_eta(1.5)
        }
    }

    #[test]
    fn weak_inversion_values() {
        let card = fixture();
        let zero = ids_weak_inversion(&card, 2e-6, 1e-6, &BiasPoint::new(0.0, 0.0, 300.0));
        assert_eq!(zero.unwrap(), 0.0);
        // 3.5e-4 · 2 · 0.5 · vT² · exp(−0.2/(1.5·vT)) · (1 − exp(−1/vT)), mpmath reference.
        let i = ids_weak_inversion(&card, 2e-6, 1e-6, &BiasPoint::new(0.0, 1.0, 300.0)).unwrap();
        assert!(rel(i, 1.346338316e-9) < 1e-8);

        let v_t = thermal_voltage(300.0).unwrap();
        let near = ids_weak_inversion(&card, 1e-6, 1e-6, &BiasPoint::new(0.0, 10.0 * v_t, 300.0));
        let far = ids_weak_inversion(&card, 1e-6, 1e-6, &BiasPoint::new(0.0, 100.0, 300.0));
        assert!(rel(near.unwrap() / far.unwrap(), 0.9999546) < 1e-7);
        assert!(ids_weak_inversion(&card, 0.0, 1e-6, &BiasPoint::new(0.0, 1.0, 300.0)).is_err());
    }

    #[test]
    fn strong_inversion_values() {
        let card = MosModelCard { kp: 2e-4, ..fixture() };
        let at_vth = ids_strong_inversion(&card, 1e-6, 1e-6, &BiasPoint::new(0.2, 1.0, 300.0));
        assert_eq!(at_vth.unwrap(), 0.0);
        let sat = ids_strong_inversion(&card, 1e-6, 1e-6, &BiasPoint::new(1.2, 2.0, 300.0));
        assert!(rel(sat.unwrap(), 1e-4) < 1e-12);
        let edge = ids_strong_inversion(&card, 1e-6, 1e-6, &BiasPoint::new(1.2, 1.0, 300.0));
        let triode = ids_strong_inversion(&card, 1e-6, 1e-6, &BiasPoint::new(1.2, 1.0 - 1e-12, 300.0));
        assert!(rel(edge.unwrap(), 1e-4) < 1e-12);
        assert!(rel(triode.unwrap(), 1e-4) < 1e-9);
    }

    #[test]
    fn unified_matches_weak_below_threshold() {
        let card = fixture();
        let v_t = thermal_voltage(300.0).unwrap();
        let vgs = 0.2 - 5.0 * 1.5 * v_t;
        let bias = BiasPoint::new(vgs, 1.0, 300.0);
        let u = ids_unified(&card, 1e-6, 1e-6, &bias).unwrap();
        let w = ids_weak_inversion(&card, 1e-6, 1e-6, &bias).unwrap();
        assert!(rel(u.ids, w) < 1e-3);
        assert_eq!(u.region, Region::OffWeak);
        let zero = ids_unified(&card, 1e-6, 1e-6, &BiasPoint::new(0.0, 0.0, 300.0)).unwrap();
        assert_eq!(zero.ids, 0.0);
    }

    #[test]
    fn unified_regions() {
        let card = fixture();
        let sat = ids_unified(&card, 1e-6, 1e-6, &BiasPoint::new(1.0, 2.0, 300.0)).unwrap();
        assert_eq!(sat.region, Region::Saturation);
        let tri = ids_unified(&card, 1e-6, 1e-6, &BiasPoint::new(1.0, 0.1, 300.0)).unwrap();
        assert_eq!(tri.region, Region::Triode);
    }

    #[test]
    fn unified_rejects_non_finite() {
        let card = fixture();
        assert!(ids_unified(&card, 1e-6, 1e-6, &BiasPoint::new(f64::NAN, 0.0, 300.0)).is_err());
        assert!(ids_unified(&card, 1e-6, 1e-6, &BiasPoint::new(0.0, f64::INFINITY, 300.0)).is_err());
    }

    #[test]
    fn clamp_is_reported() {
        let card = fixture();
        let deep = ids_unified(&card, 1e-6, 1e-6, &BiasPoint::new(-10.0, 1.0, 300.0)).unwrap();
        assert!(deep.clamped);
        assert_eq!(deep.d_ids_d_vgs, 0.0);
        assert!(deep.ids > 0.0);
    }

    #[test]
    fn junction_values() {
        let v_t = thermal_voltage(300.0).unwrap();
        assert_eq!(junction_reverse_current(0.0, 1.0, 300.0).unwrap(), 0.0);
        assert_eq!(junction_reverse_current(1e-15, 0.0, 300.0).unwrap(), 0.0);
        let i = junction_reverse_current(1e-15, 10.0 * v_t, 300.0).unwrap();
        assert!(rel(i, 1e-15 * (1.0 - (-10.0f64).exp())) < 1e-12);
        assert!(junction_reverse_current(-1.0, 1.0, 300.0).is_err());
    }

    #[test]
    fn derived_eta_card() {
        let card = MosModelCard::new("n", Polarity::Nmos, 0.3);
        assert_eq!(card.eta(), 1.0 + 3.0 * card.tox / card.wdm);
        let bad = MosModelCard::new("n", Polarity::Nmos, 0.3).with_eta(0.5);
        assert!(bad.validate().is_err());
        let bad = MosModelCard { tox: 0.0, ..MosModelCard::new("n", Polarity::Nmos, 0.3) };
        assert!(bad.validate().is_err());
    }
}
