mod common;

use leakspice::devmodel::MosModelCard;
use leakspice::netlist::units::{format_value, parse_value};
use leakspice::netlist::*;
use proptest::prelude::*;

#[test]
fn minimal_netlist_example() {
    let n = parse("divider\nVdd 1 0 3.3\nR1 1 0 1k").unwrap();
    assert_eq!(n.devices().len(), 2);
    assert_eq!(n.nodes(), ["0", "1"]);
}

#[test]
fn mosfet_line_binds_model_and_decodes_suffixes() {
    let n = parse("inv\n.model nch NMOS vth0=0.2\nV1 1 0 1\nMN1 2 1 0 0 nch W=1u L=45n\nR1 2 0 1k\n").unwrap();
    let m = n.device("MN1").unwrap();
    assert_eq!(m.element, Element::Mosfet { model: "nch".into(), w: 1e-6, l: 4.5e-8 });
    assert_eq!(m.nodes, ["2", "1", "0", "0"]);
}

#[test]
fn every_error_class_is_located() {
    let cases = [
        ("t\nV1 1 0 1\nM1 1 1 0 0 xyz W=1u L=1u\n", DiagnosticKind::UnknownModel, 3, "unknown model xyz"),
        ("t\nR1 1 0 1k\nR1 1 0 2k\n", DiagnosticKind::DuplicateDevice, 3, "duplicate device R1"),
        ("t\nR1 1 0 1k\nR2 1 0 1x2\n", DiagnosticKind::InvalidValue, 3, "invalid number \"1x2\""),
        ("t\nR1 1 0 1k\nQ1 1 0 1k\n", DiagnosticKind::Syntax, 3, ""),
        ("t\nR1 1 0 1k\n.dc Vx 0 1 0.1\n", DiagnosticKind::UnknownSource, 3, "unknown source Vx"),
        ("t\n.model a NMOS vth0=0.1\n.model A PMOS vth0=0.1\nR1 1 0 1\n", DiagnosticKind::DuplicateModel, 3, "duplicate model A"),
    ];
    for (text, kind, line, message) in cases {
        let err = parse(text).unwrap_err();
        let d = err.diagnostics.iter().find(|d| d.kind == kind).unwrap_or_else(|| panic!("{text:?}: {err}"));
        assert_eq!(d.location.unwrap().line, line, "{text:?}");
        assert!(d.message.contains(message), "{}", d.message);
    }
    let err = parse("t\nR1 1 2 1k\n").unwrap_err();
    assert!(err.has(DiagnosticKind::MissingGround));
}

#[test]
fn inverter_round_trip_is_identical() {
    let n = build_inverter(&InverterParams::default()).unwrap();
    let text = serialize(&n);
    let back = parse(&text).unwrap();
    assert_eq!(back, n);
    let order: Vec<&str> = back.devices().iter().map(|d| d.name.as_str()).collect();
    assert_eq!(order, ["Vdd", "Vin", "MP1", "MN1"]);
    assert_eq!(serialize(&back), text);
}

#[test]
fn engineering_values_survive_round_trip() {
    let text = "t\nR1 a 0 4.7k\nR2 a b 1.5meg\nC1 b 0 2.2p\nV1 a 0 PWL(0 0 1.23456789012n 3.3)\n";
    let n = parse(text).unwrap();
    let back = parse(&serialize(&n)).unwrap();
    for (a, b) in n.devices().iter().zip(back.devices()) {
        assert_eq!(a, b);
    }
    assert_eq!(back.device("R2").unwrap().element, Element::Resistor { ohms: 1.5e6 });
}

#[test]
fn builders_meet_their_contracts() {
    let inv = build_inverter(&InverterParams::default()).unwrap();
    assert_eq!(inv.count(DeviceKind::Mosfet), 2);
    assert_eq!(inv.count(DeviceKind::VSource), 2);
    let buf = build_class_ab_buffer(&ClassAbBufferParams::default()).unwrap();
    assert_eq!(buf.count(DeviceKind::Mosfet), 20);
    assert_eq!(ClassAbBufferParams::default().ib, 10e-6);
    assert_eq!(buf.source_value("Vdd"), Some(3.3));
    assert!(build_class_ab_buffer(&ClassAbBufferParams { ib: -1.0, ..Default::default() }).is_err());
}

#[test]
fn footer_contract() {
    let inv = build_inverter(&InverterParams::default()).unwrap();
    let gated = power_gate_transform(&inv, &GatingOptions::footer("nch_hvt")).unwrap();
    assert_eq!(gated.count(DeviceKind::Mosfet), 3);
    assert!(gated.nodes().iter().any(|n| n == "vgnd"));
    let sleep = gated.device(SLEEP_DEVICE).unwrap();
    assert_eq!((sleep.nodes[0].as_str(), sleep.nodes[2].as_str()), ("vgnd", "0"));
    assert_eq!(gated.source_value(SLEEP_CONTROL), Some(0.0));
    let again = power_gate_transform(&gated, &GatingOptions::footer("nch_hvt")).unwrap_err();
    assert_eq!(again.to_string(), "already gated");
    // the gated netlist is an ordinary netlist and round-trips too
    assert_eq!(parse(&serialize(&gated)).unwrap(), gated);
}

#[test]
fn gating_errors() {
    let inv = build_inverter(&InverterParams::default()).unwrap();
    assert!(matches!(
        power_gate_transform(&inv, &GatingOptions::footer("missing")),
        Err(GatingError::UnknownSleepModel(_))
    ));
    let no_rail = parse("t\n.model n NMOS vth0=0.4\nVdd a 0 1\nC1 a 0 1p\n").unwrap();
    assert!(matches!(
        power_gate_transform(&no_rail, &GatingOptions::footer("n")),
        Err(GatingError::NoRailDevices(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn values_round_trip(x in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO) {
        prop_assert_eq!(parse_value(&format_value(x)), Some(x));
    }

    #[test]
    fn suffixes_scale_exactly(mantissa in 1u32..100_000, suffix in prop::sample::select(vec![("f", -15), ("p", -12), ("n", -9), ("u", -6), ("m", -3), ("k", 3), ("meg", 6), ("g", 9)])) {
        let (s, exp) = suffix;
        let expected: f64 = format!("{mantissa}e{exp}").parse().unwrap();
        prop_assert_eq!(parse_value(&format!("{mantissa}{s}")), Some(expected));
        prop_assert_eq!(parse_value(&format!("{mantissa}{}V", s.to_uppercase())), Some(expected));
    }

    #[test]
    fn generated_netlists_round_trip(seed in any::<u64>()) {
        let n = common::random_netlist(&mut common::rng(seed));
        let text = serialize(&n);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &n);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn parser_never_panics(text in "\\PC*") {
        let _ = parse(&text);
    }

    #[test]
    fn parser_survives_mutations(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let text = common::mutate(&serialize(&common::random_netlist(&mut rng)), &mut rng);
        if let Ok(n) = parse(&text) {
            prop_assert_eq!(parse(&serialize(&n)).unwrap(), n);
        }
    }

    #[test]
    fn gating_preserves_everything_off_the_rail(
        header in any::<bool>(),
        width in prop::option::of(1e-7f64..1e-4),
        standby in any::<bool>(),
        vdd in 0.5f64..5.0,
    ) {
        let base = build_inverter(&InverterParams { vdd, ..Default::default() }).unwrap();
        let (options, rail, virtual_rail) = if header {
            (GatingOptions::header("pch_hvt"), "vdd", "vvdd")
        } else {
            (GatingOptions::footer("nch_hvt"), "0", "vgnd")
        };
        let state = if standby { SleepState::Standby } else { SleepState::Active };
        let options = GatingOptions { w: width, ..options.with_state(state) };
        let gated = power_gate_transform(&base, &options).unwrap();
        prop_assert_eq!(gated.devices().len(), base.devices().len() + 2);
        for (before, after) in base.devices().iter().zip(gated.devices()) {
            prop_assert_eq!(&before.name, &after.name);
            prop_assert_eq!(&before.element, &after.element);
            for (t, (a, b)) in before.nodes.iter().zip(&after.nodes).enumerate() {
                let channel = matches!(before.element, Element::Mosfet { .. }) && (t == 0 || t == 2);
                if channel && a == rail {
                    prop_assert_eq!(b.as_str(), virtual_rail);
                } else {
                    prop_assert_eq!(a, b);
                }
            }
        }
        let gate_on = if header { 0.0 } else { vdd };
        let expected = if standby { vdd - gate_on } else { gate_on };
        prop_assert_eq!(gated.source_value(SLEEP_CONTROL), Some(expected));
        if let Some(w) = width {
            let Element::Mosfet { w: got, .. } = gated.device(SLEEP_DEVICE).unwrap().element else { unreachable!() };
            prop_assert_eq!(got, w);
        }
    }

    #[test]
    fn model_cards_round_trip(vth0 in -1.0f64..1.0, eta in 1.0f64..3.0, sigma in 0.0f64..0.2) {
        let card = MosModelCard::nmos_45nm().with_vth0(vth0).with_eta(eta).with_sigma_dibl(sigma);
        let n = parse("t\nR1 a 0 1\n").unwrap().with_model(card.clone()).unwrap();
        let back = parse(&serialize(&n)).unwrap();
        prop_assert_eq!(back.model("NCH"), Some(&card));
    }
}
