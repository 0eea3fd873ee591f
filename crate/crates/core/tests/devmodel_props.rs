use leakspice::devmodel::*;
use proptest::prelude::*;

const VT_300: f64 = 0.025851993880825901;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

#[test]
fn thermal_voltage_at_room_temperature() {
    assert!(close(thermal_voltage(300.0).unwrap(), VT_300, 1e-15));
    assert!(thermal_voltage(0.0).is_err());
}

#[test]
fn body_coefficient_examples() {
    assert!(close(body_coefficient(2e-9, 60e-9).unwrap(), 1.1, 1e-15));
    assert!(close(body_coefficient(1e-9, 30e-9).unwrap(), 1.1, 1e-15));
    assert!(close(body_coefficient(1e-15, 30e-9).unwrap(), 1.0, 1e-6));
    assert!(body_coefficient(0.0, 30e-9).is_err());
    assert!(body_coefficient(1e-9, -1.0).is_err());
}

#[test]
fn eta_from_capacitances() {
    assert_eq!(eta_from_caps(0.0, 1e-2).unwrap(), 1.0);
    assert_eq!(eta_from_caps(1e-2, 1e-2).unwrap(), 2.0);
    assert_eq!(eta_from_caps(0.5e-2, 1e-2).unwrap(), 1.5);
    assert!(eta_from_caps(1.0, 0.0).is_err());
}

#[test]
fn swing_examples() {
    assert_eq!(subthreshold_swing_nominal(1.0, 300.0).unwrap(), 60.0);
    assert_eq!(subthreshold_swing_nominal(1.5, 300.0).unwrap(), 90.0);
    assert_eq!(subthreshold_swing_nominal(1.5, 600.0).unwrap(), 180.0);
    assert!(close(subthreshold_swing_exact(1.0, 300.0).unwrap(), 59.52641573416, 1e-10));
    assert!(close(subthreshold_swing_exact(1.5, 300.0).unwrap(), 89.28962360124, 1e-10));
    assert!(close(subthreshold_swing_exact(1.0, 150.0).unwrap(), 29.76320786708150, 1e-12));
    assert!(subthreshold_swing_nominal(0.9, 300.0).is_err());
    assert!(subthreshold_swing_exact(1.0, -1.0).is_err());
}

#[test]
fn empirical_law_examples() {
    assert_eq!(ids_empirical(1.0, 0.2, 0.2, 1.5, 300.0).unwrap(), 100e-9);
    assert_eq!(ids_empirical(2.0, 0.2, 0.2, 1.5, 300.0).unwrap(), 200e-9);
    let decade_below = 0.2 - subthreshold_swing_exact(1.5, 300.0).unwrap() * 1e-3;
    assert!(close(ids_empirical(1.0, decade_below, 0.2, 1.5, 300.0).unwrap(), 10e-9, 1e-12));
    assert!(close(ids_empirical(1.0, 0.1107103763987555, 0.2, 1.5, 300.0).unwrap(), 10e-9, 1e-9));
    assert!(ids_empirical(0.0, 0.2, 0.2, 1.5, 300.0).is_err());
    assert!(ids_empirical(1.0, f64::NAN, 0.2, 1.5, 300.0).is_err());
}

#[test]
fn off_current_examples() {
    assert_eq!(ioff_empirical(3.0, 0.0, 1.5, 300.0).unwrap(), 300e-9);
    let reference = 5.755698981673155e-10;
    assert!(close(ioff_empirical(1.0, 0.2, 1.5, 300.0).unwrap(), reference, 1e-12));
    assert!(close(ioff_empirical(10.0, 0.2, 1.5, 300.0).unwrap(), 10.0 * reference, 1e-12));
}

fn long_channel(vth0: f64) -> MosModelCard {
    MosModelCard::new("n", Polarity::Nmos, vth0).with_eta(1.5)
}

#[test]
fn weak_inversion_examples() {
    let card = long_channel(0.2);
    let at = |vds: f64| ids_weak_inversion(&card, 2e-6, 1e-6, &BiasPoint::new(0.0, vds, 300.0)).unwrap();
    assert_eq!(at(0.0), 0.0);
    assert!(close(at(1.0), 1.346338316420128e-9, 1e-12));
    let ratio = at(10.0 * VT_300) / at(50.0);
    assert!(close(ratio, 0.9999546000702375, 1e-12));
    assert!(ids_weak_inversion(&card, 0.0, 1e-6, &BiasPoint::new(0.0, 1.0, 300.0)).is_err());
}

#[test]
fn strong_inversion_examples() {
    let mut card = long_channel(0.5);
    card.kp = 2e-4;
    let at = |vgs: f64, vds: f64| ids_strong_inversion(&card, 1e-6, 1e-6, &BiasPoint::new(vgs, vds, 300.0)).unwrap();
    assert_eq!(at(0.5, 1.0), 0.0);
    assert!(close(at(1.5, 2.0), 1e-4, 1e-12));
    assert!(close(at(1.5, 1.0), at(1.5, 3.0), 1e-15));
}

#[test]
fn unified_examples() {
    let card = MosModelCard::nmos_45nm();
    let e = ids_unified(&card, 1e-6, 45e-9, &BiasPoint::new(0.0, 0.0, 300.0)).unwrap();
    assert_eq!(e.ids, 0.0);
    // deep subthreshold agrees with the unblended weak-inversion expression
    let vgs = card.vth0 - 5.0 * card.eta() * VT_300 - 0.1;
    let bias = BiasPoint::new(vgs, 1.0, 300.0);
    let unified = ids_unified(&card, 1e-6, 45e-9, &bias).unwrap();
    let weak = ids_weak_inversion(&card, 1e-6, 45e-9, &bias).unwrap();
    assert!(close(unified.ids, weak, 1e-3));
    assert_eq!(unified.region, Region::OffWeak);
    assert!(ids_unified(&card, 1e-6, 45e-9, &BiasPoint::new(f64::INFINITY, 0.0, 300.0)).is_err());
}

#[test]
fn junction_examples() {
    assert_eq!(junction_reverse_current(0.0, 1.0, 300.0).unwrap(), 0.0);
    assert_eq!(junction_reverse_current(1e-15, 0.0, 300.0).unwrap(), 0.0);
    let i = junction_reverse_current(1e-15, 10.0 * VT_300, 300.0).unwrap();
    assert!(close(i, 1e-15 * 0.9999546000702375, 1e-12));
    assert!(junction_reverse_current(-1.0, 1.0, 300.0).is_err());
}

#[test]
fn card_validation() {
    assert!(MosModelCard::nmos_45nm().validate().is_ok());
    assert!(MosModelCard::nmos_45nm().with_eta(0.5).validate().is_err());
    assert!(MosModelCard::nmos_45nm().with_sigma_dibl(-0.1).validate().is_err());
    assert!((MosModelCard::new("x", Polarity::Nmos, 0.3).eta() - 1.5).abs() < 1e-15);
}

fn card_strategy() -> impl Strategy<Value = MosModelCard> {
    (0.1f64..0.6, 1.05f64..2.0, 0.0f64..0.2, 0.0f64..0.1, -4.5f64..-3.0).prop_map(|(vth0, eta, lambda, sigma, lu)| {
        let mut c = MosModelCard::new("n", Polarity::Nmos, vth0).with_eta(eta).with_sigma_dibl(sigma);
        c.lambda = lambda;
        c.u0cox = 10f64.powf(lu);
        c.kp = c.u0cox;
        c
    })
}

proptest! {
    #[test]
    fn pmos_mirrors_nmos(card in card_strategy(), vgs in -3.3f64..3.3, vds in -3.3f64..3.3, t in 250.0f64..400.0) {
        let p = MosModelCard { polarity: Polarity::Pmos, ..card.clone() };
        let n = ids_unified(&card, 1e-6, 1e-7, &BiasPoint::new(-vgs, -vds, t)).unwrap();
        let m = ids_unified(&p, 1e-6, 1e-7, &BiasPoint::new(vgs, vds, t)).unwrap();
        prop_assert_eq!(m.ids, -n.ids);
        prop_assert_eq!(m.d_ids_d_vgs, n.d_ids_d_vgs);
        prop_assert_eq!(m.d_ids_d_vds, n.d_ids_d_vds);
    }

    #[test]
    fn current_follows_drain_sign(card in card_strategy(), vgs in -1.0f64..3.3, vds in -3.3f64..3.3) {
        let e = ids_unified(&card, 1e-6, 1e-7, &BiasPoint::new(vgs, vds, 300.0)).unwrap();
        prop_assert!(e.ids * vds >= 0.0);
    }

    #[test]
    fn monotone_in_gate_and_drain(card in card_strategy(), vgs in -1.0f64..3.0, vds in 0.0f64..3.0, dv in 1e-3f64..0.3) {
        let at = |g: f64, d: f64| ids_unified(&card, 1e-6, 1e-7, &BiasPoint::new(g, d, 300.0)).unwrap().ids;
        prop_assert!(at(vgs + dv, vds) >= at(vgs, vds));
        prop_assert!(at(vgs, vds + dv) >= at(vgs, vds));
        let weak = |g: f64, d: f64| ids_weak_inversion(&card, 1e-6, 1e-7, &BiasPoint::new(g, d, 300.0)).unwrap();
        prop_assert!(weak(vgs - 0.5 + dv, vds) > weak(vgs - 0.5, vds) || weak(vgs - 0.5, vds) == 0.0);
    }

    #[test]
    fn partials_match_finite_differences(card in card_strategy(), vgs in -1.0f64..3.3, vds in -3.3f64..3.3, t in 250.0f64..400.0) {
        let card = MosModelCard { lambda: card.lambda.max(0.01), sigma_dibl: card.sigma_dibl.max(0.01), ..card };
        let h = 1e-6;
        let f = |g: f64, d: f64| ids_unified(&card, 1e-6, 1e-7, &BiasPoint::new(g, d, t)).unwrap().ids;
        let e = ids_unified(&card, 1e-6, 1e-7, &BiasPoint::new(vgs, vds, t)).unwrap();
        let fd_g = (f(vgs + h, vds) - f(vgs - h, vds)) / (2.0 * h);
        let fd_d = (f(vgs, vds + h) - f(vgs, vds - h)) / (2.0 * h);
        prop_assert!((e.d_ids_d_vgs - fd_g).abs() <= 1e-6 * fd_g.abs().max(e.d_ids_d_vgs.abs()) + 1e-18);
        prop_assert!((e.d_ids_d_vds - fd_d).abs() <= 1e-6 * fd_d.abs().max(e.d_ids_d_vds.abs()) + 1e-18);
    }

    #[test]
    fn one_decade_per_swing(wl in 0.1f64..100.0, vt in -0.5f64..0.8, eta in 1.0f64..2.5, t in 200.0f64..450.0, vgs in -1.0f64..1.0) {
        let s = subthreshold_swing_exact(eta, t).unwrap() * 1e-3;
        let a = ids_empirical(wl, vgs, vt, eta, t).unwrap();
        let b = ids_empirical(wl, vgs - s, vt, eta, t).unwrap();
        prop_assert!(close(a / b, 10.0, 1e-9));
    }

    #[test]
    fn off_current_falls_with_threshold_and_rises_with_temperature(vt in 0.0f64..0.8, dvt in 1e-3f64..0.2, t in 200.0f64..450.0) {
        let base = ioff_empirical(1.0, vt, 1.5, t).unwrap();
        prop_assert!(ioff_empirical(1.0, vt + dvt, 1.5, t).unwrap() < base);
        prop_assert!(ioff_empirical(1.0, vt + 0.05, 1.5, t + 10.0).unwrap() > ioff_empirical(1.0, vt + 0.05, 1.5, t).unwrap());
    }
}
