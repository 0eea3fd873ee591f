//! Shared helpers for the integration and acceptance tests: a seeded random netlist
//! generator, a text mutator for fuzzing, and independent leakage oracles for gated stacks.

#![allow(dead_code)]

use std::collections::BTreeMap;

use leakspice::devmodel::{ids_unified, BiasPoint, EtaSpec, MosModelCard, Polarity};
use leakspice::engine;
use leakspice::netlist::{
    AnalysisDirective, DeviceInstance, Element, InverterParams, Netlist, SourceWave, SweepSpec,
    SLEEP_CONTROL, SLEEP_DEVICE,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const NAME_CHARS: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-.$#";

fn token(rng: &mut ChaCha8Rng, first: Option<char>) -> String {
    let len = rng.gen_range(1..7);
    let mut s = String::new();
    if let Some(c) = first {
        s.push(c);
    } else {
        // Names may not start with '.', so draw the first character from letters and digits.
        s.push(NAME_CHARS[rng.gen_range(0..62)] as char);
    }
    for _ in 1..len {
        s.push(NAME_CHARS[rng.gen_range(0..NAME_CHARS.len())] as char);
    }
    s
}

/// Log-uniform magnitude in `[10^lo, 10^hi)`.
fn magnitude(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.gen_range(lo..hi))
}

fn signed(rng: &mut ChaCha8Rng) -> f64 {
    match rng.gen_range(0..4) {
        0 => 0.0,
        1 => -magnitude(rng, -6.0, 1.0),
        _ => magnitude(rng, -6.0, 1.0),
    }
}

fn wave(rng: &mut ChaCha8Rng) -> SourceWave {
    if rng.gen_bool(0.7) {
        return SourceWave::dc(signed(rng));
    }
    let mut t = 0.0;
    let points = (0..rng.gen_range(1..6))
        .map(|_| {
            if rng.gen_bool(0.8) {
                t += magnitude(rng, -12.0, -5.0);
            }
            (t, signed(rng))
        })
        .collect();
    SourceWave::Pwl { points }
}

fn card(rng: &mut ChaCha8Rng, name: String) -> MosModelCard {
    let polarity = if rng.gen_bool(0.5) { Polarity::Nmos } else { Polarity::Pmos };
    let mut c = MosModelCard::new(name, polarity, rng.gen_range(-0.5..1.0));
    if rng.gen_bool(0.5) {
        c.eta = EtaSpec::Given(rng.gen_range(1.0..2.5));
    }
    c.tox = magnitude(rng, -9.5, -8.0);
    c.wdm = magnitude(rng, -8.5, -7.0);
    c.u0cox = magnitude(rng, -5.0, -3.0);
    c.kp = magnitude(rng, -5.0, -3.0);
    c.lambda = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.0..0.3) };
    c.sigma_dibl = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.0..0.1) };
    c.is_junction = if rng.gen_bool(0.5) { 0.0 } else { magnitude(rng, -18.0, -12.0) };
    c
}

fn sweep(rng: &mut ChaCha8Rng, source: &str) -> SweepSpec {
    let start = rng.gen_range(-2.0..2.0);
    let stop = start + rng.gen_range(0.0..3.0);
    SweepSpec::new(source, start, stop, magnitude(rng, -3.0, 0.0))
}

/// A random netlist that satisfies every structural rule of the builder.
pub fn random_netlist(rng: &mut ChaCha8Rng) -> Netlist {
    let title: String = (0..rng.gen_range(1..30))
        .map(|_| *b"abcdefgh ijk XYZ 0123-_:/".choose(rng).unwrap() as char)
        .collect();
    let title = format!("T{}", title.trim_end());

    let mut used = std::collections::HashSet::new();
    let mut unique = |rng: &mut ChaCha8Rng, first: Option<char>| loop {
        let t = token(rng, first);
        if used.insert(t.to_ascii_lowercase()) {
            return t;
        }
    };

    let models: Vec<MosModelCard> = (0..rng.gen_range(0..4))
        .map(|_| {
            let name = unique(rng, None);
            card(rng, name)
        })
        .collect();
    let mut nodes: Vec<String> = vec!["0".into()];
    for _ in 0..rng.gen_range(1..8) {
        let n = unique(rng, None);
        nodes.push(n);
    }

    let mut devices = Vec::new();
    let mut sources = Vec::new();
    for k in 0..rng.gen_range(1..16) {
        let pick = |rng: &mut ChaCha8Rng| nodes.choose(rng).unwrap().clone();
        let choice = if models.is_empty() { rng.gen_range(1..5) } else { rng.gen_range(0..5) };
        let mut dev = match choice {
            0 => {
                let model = models.choose(rng).unwrap().name.clone();
                let prefix = if rng.gen_bool(0.5) { 'M' } else { 'm' };
                let name = unique(rng, Some(prefix));
                let term = [pick(rng), pick(rng), pick(rng), pick(rng)];
                let term: Vec<&str> = term.iter().map(String::as_str).collect();
                DeviceInstance::mosfet(
                    name,
                    [term[0], term[1], term[2], term[3]],
                    model,
                    magnitude(rng, -7.0, -4.0),
                    magnitude(rng, -8.0, -5.0),
                )
            }
            1 => DeviceInstance::resistor(unique(rng, Some('R')), &pick(rng), &pick(rng), magnitude(rng, -2.0, 9.0)),
            2 => DeviceInstance::capacitor(unique(rng, Some('C')), &pick(rng), &pick(rng), magnitude(rng, -15.0, -6.0)),
            3 => {
                let name = unique(rng, Some('V'));
                sources.push(name.clone());
                DeviceInstance::vsource(name, &pick(rng), &pick(rng), wave(rng))
            }
            _ => {
                let name = unique(rng, Some('I'));
                sources.push(name.clone());
                DeviceInstance::isource(name, &pick(rng), &pick(rng), wave(rng))
            }
        };
        if k == 0 {
            let last = dev.nodes.len() - 1;
            dev.nodes[last] = "0".into();
        }
        devices.push(dev);
    }

    let mut b = Netlist::builder(title);
    for m in models {
        b = b.model(m);
    }
    for d in devices {
        b = b.device(d);
    }
    for _ in 0..rng.gen_range(0..4) {
        let temp_k = rng.gen_range(200.0..450.0);
        let d = match rng.gen_range(0..3) {
            0 => AnalysisDirective::Op { temp_k },
            1 if !sources.is_empty() => {
                let inner = sources.choose(rng).unwrap().clone();
                let outer = sources
                    .iter()
                    .filter(|s| **s != inner)
                    .collect::<Vec<_>>()
                    .choose(rng)
                    .map(|s| sweep(rng, s))
                    .filter(|_| rng.gen_bool(0.5));
                AnalysisDirective::Dc { sweep: sweep(rng, &inner), outer, temp_k }
            }
            _ => {
                let dt = magnitude(rng, -12.0, -6.0);
                AnalysisDirective::Tran { dt, tstop: dt * rng.gen_range(1.0..1e4), temp_k }
            }
        };
        b = b.directive(d);
    }
    b.build().expect("generator produced an invalid netlist")
}

const JUNK: &[&str] = &[
    "(", ")", "=", ",", "*", "+", ".", "\n", "\r\n", "\t", " ", "\u{0}", "é", "∞", "µ", "🦀", "NaN",
    "inf", "-", "1e999", "1e-999", "meg", "PWL(", "W=", "L=", ".model", ".dc", ".tran", ".op",
    ".end", "temp=", "0", "M", "V", "derived", "9999999999999999999999", "\u{feff}", "\\",
];

/// Damage netlist text with a few random edits.
pub fn mutate(text: &str, rng: &mut ChaCha8Rng) -> String {
    let mut chars: Vec<char> = text.chars().collect();
    for _ in 0..rng.gen_range(1..5) {
        let len = chars.len();
        match rng.gen_range(0..7) {
            0 if len > 0 => {
                let a = rng.gen_range(0..len);
                let b = (a + rng.gen_range(1..12)).min(len);
                chars.drain(a..b);
            }
            1 => {
                let at = rng.gen_range(0..=len);
                let junk = JUNK.choose(rng).unwrap();
                chars.splice(at..at, junk.chars());
            }
            2 if len > 0 => {
                let at = rng.gen_range(0..len);
                chars[at] = char::from_u32(rng.gen_range(0..0x3000)).unwrap_or('?');
            }
            3 => {
                let mut lines: Vec<String> = chars.iter().collect::<String>().lines().map(String::from).collect();
                if lines.len() > 1 {
                    let a = rng.gen_range(0..lines.len());
                    let b = rng.gen_range(0..lines.len());
                    lines.swap(a, b);
                }
                chars = lines.join("\n").chars().collect();
            }
            4 => {
                let mut lines: Vec<String> = chars.iter().collect::<String>().lines().map(String::from).collect();
                if !lines.is_empty() {
                    let a = rng.gen_range(0..lines.len());
                    let dup = lines[a].clone();
                    lines.insert(a, dup);
                }
                chars = lines.join("\n").chars().collect();
            }
            5 if len > 0 => chars.truncate(rng.gen_range(0..len)),
            _ => {
                let at = rng.gen_range(0..=len);
                let digits: String = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(b'0'..=b'9') as char).collect();
                chars.splice(at..at, digits.chars());
            }
        }
    }
    chars.into_iter().collect()
}

/// Root of a function that changes sign on `[lo, hi]`, to the resolution of `f64`.
pub fn bisect(f: impl FnMut(f64) -> f64, lo: f64, hi: f64) -> f64 {
    bisect_to(f, lo, hi, 0.0)
}

/// Root of a function that changes sign on `[lo, hi]`, stopping once the bracket is
/// narrower than `tol`.
pub fn bisect_to(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let f_lo = f(lo);
    assert!(f_lo * f(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo < tol {
            break;
        }
        if (f(mid) > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn ids(card: &MosModelCard, w: f64, l: f64, vgs: f64, vds: f64, temp_k: f64) -> f64 {
    ids_unified(card, w, l, &BiasPoint::new(vgs, vds, temp_k)).unwrap().ids
}

/// Mean static power of an inverter with and without a footer, from the device model alone.
///
/// With the input low the off pull-down sits in series with the off sleep device and the
/// virtual ground settles where their currents match. With the input high the conducting
/// pull-down ties the output to the virtual ground, so the off pull-up and the sleep device
/// form the stack. Returns `(baseline, gated standby)` mean power, W.
pub fn inverter_footer_oracle(p: &InverterParams, sleep: &MosModelCard, w_sleep: f64, l_sleep: f64, temp_k: f64) -> (f64, f64) {
    let vdd = p.vdd;
    let sleep_i = |x: f64| ids(sleep, w_sleep, l_sleep, 0.0, x, temp_k);
    let base_low = ids(&p.nmos, p.w_n, p.l_n, 0.0, vdd, temp_k);
    let base_high = -ids(&p.pmos, p.w_p, p.l_p, 0.0, -vdd, temp_k);

    let x = bisect(|x| ids(&p.nmos, p.w_n, p.l_n, -x, vdd - x, temp_k) - sleep_i(x), 0.0, vdd);
    let gated_low = sleep_i(x);
    let x = bisect(|x| -ids(&p.pmos, p.w_p, p.l_p, 0.0, x - vdd, temp_k) - sleep_i(x), 0.0, vdd);
    let gated_high = sleep_i(x);

    (vdd * 0.5 * (base_low + base_high), vdd * 0.5 * (gated_low + gated_high))
}

/// Standby power of a footer-gated netlist in one input state, with the sleep device replaced
/// by a voltage pin on the virtual ground. The pin is moved until the current the circuit
/// pushes into it equals the off sleep device's current at that drain voltage.
pub fn pinned_footer_power(gated: &Netlist, inputs: &[(&str, f64)], temp_k: f64) -> f64 {
    let sleep = gated.device(SLEEP_DEVICE).expect("netlist is not gated");
    let Element::Mosfet { model, w, l } = &sleep.element else { panic!("sleep device is not a MOSFET") };
    let card = gated.model(model).unwrap().clone();
    let (w, l) = (*w, *l);
    let vgnd = sleep.nodes[0].clone();

    let mut b = Netlist::builder(gated.title());
    for m in gated.models() {
        b = b.model(m.clone());
    }
    for d in gated.devices() {
        if d.name != SLEEP_DEVICE && d.name != SLEEP_CONTROL {
            b = b.device(d.clone());
        }
    }
    let mut pinned = b
        .device(DeviceInstance::vsource("VPIN", &vgnd, "0", SourceWave::dc(0.0)))
        .build()
        .unwrap();
    for (src, v) in inputs {
        pinned = pinned.with_source_value(src, *v).unwrap();
    }
    let (supply, _, vdd) = gated.supply_rail().unwrap();

    let mut guess: Option<BTreeMap<String, f64>> = None;
    let mut solve = |x: f64| {
        let n = pinned.with_source_value("VPIN", x).unwrap();
        let op = engine::dc_operating_point(&n, temp_k, guess.as_ref()).unwrap();
        guess = Some(op.node_voltages.clone());
        op
    };
    let x = bisect_to(
        |x| -solve(x).source_current("VPIN").unwrap() - ids(&card, w, l, 0.0, x, temp_k),
        0.0,
        vdd,
        1e-10,
    );
    let op = solve(x);
    let mut power = vdd * op.source_current(supply).unwrap();
    for (src, v) in inputs {
        power += v * op.source_current(src).unwrap();
    }
    power
}
