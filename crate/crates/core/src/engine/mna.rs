//! Netlist compilation, residual/Jacobian assembly and the Newton loop.

use std::collections::BTreeMap;

use super::linalg::{solve_in_place, Matrix};
use super::{EngineError, OperatingPoint, Result, SolverOptions, Strategy};
use crate::devmodel::{self, MosModelCard, Polarity};
use crate::netlist::{Element, Netlist, SourceWave, GROUND};

/// Index of a non-ground node; `None` is ground.
type Node = Option<usize>;

#[derive(Debug, Clone)]
pub(crate) enum Stamp {
    Resistor { a: Node, b: Node, g: f64 },
    Capacitor { a: Node, b: Node, c: f64, slot: usize },
    VSource { p: Node, n: Node, branch: usize, wave: SourceWave },
    ISource { p: Node, n: Node, wave: SourceWave },
    Mosfet { d: Node, g: Node, s: Node, b: Node, card: MosModelCard, wl: f64, sign: f64 },
}

/// Linearised capacitor for one time step: the current leaving the first terminal is
/// `geq·v + ieq`.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Companion {
    pub geq: f64,
    pub ieq: f64,
}

/// Everything besides the unknowns that a single solve depends on.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Drive<'a> {
    pub time: f64,
    pub scale: f64,
    pub gmin: f64,
    pub companions: Option<&'a [Companion]>,
}

impl Drive<'_> {
    pub fn dc() -> Self {
        Drive { time: 0.0, scale: 1.0, gmin: 0.0, companions: None }
    }
}

pub(crate) struct Solution {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub max_update: f64,
    pub strategy: Strategy,
}

enum Failure {
    Singular(usize),
    Stalled { iterations: usize, residual: f64 },
}

#[derive(Debug, Clone)]
pub(crate) struct Circuit {
    pub nodes: Vec<String>,
    /// Voltage-source names, by branch index.
    pub branches: Vec<String>,
    /// One stamp per netlist device, in netlist order.
    pub stamps: Vec<Stamp>,
    pub device_names: Vec<String>,
    pub capacitors: usize,
    pub v_t: f64,
    pub temp_k: f64,
}

fn at(x: &[f64], n: Node) -> f64 {
    n.map_or(0.0, |i| x[i])
}

/// Union–find over nodes; index 0 is ground.
fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

impl Circuit {
    pub fn compile(netlist: &Netlist, temp_k: f64) -> Result<Self> {
        let v_t = devmodel::thermal_voltage(temp_k)?;
        let nodes: Vec<String> = netlist.nodes().iter().filter(|n| *n != GROUND).cloned().collect();
        let index: BTreeMap<&str, usize> =
            nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let node = |name: &str| -> Node { index.get(name).copied() };

        let mut stamps = Vec::with_capacity(netlist.devices().len());
        let mut branches = Vec::new();
        let mut capacitors = 0;
        // DC connectivity, for naming floating nodes before the matrix goes singular.
        let mut parent: Vec<usize> = (0..=nodes.len()).collect();
        let mut join = |a: Node, b: Node| {
            let ra = find(&mut parent, a.map_or(0, |i| i + 1));
            let rb = find(&mut parent, b.map_or(0, |i| i + 1));
            parent[ra.max(rb)] = ra.min(rb);
        };
        for dev in netlist.devices() {
            let t: Vec<Node> = dev.nodes.iter().map(|n| node(n)).collect();
            let stamp = match &dev.element {
                Element::Resistor { ohms } => {
                    join(t[0], t[1]);
                    Stamp::Resistor { a: t[0], b: t[1], g: 1.0 / ohms }
                }
                Element::Capacitor { farads } => {
                    capacitors += 1;
                    Stamp::Capacitor { a: t[0], b: t[1], c: *farads, slot: capacitors - 1 }
                }
                Element::VSource { wave } => {
                    join(t[0], t[1]);
                    branches.push(dev.name.clone());
                    Stamp::VSource { p: t[0], n: t[1], branch: branches.len() - 1, wave: wave.clone() }
                }
                Element::ISource { wave } => Stamp::ISource { p: t[0], n: t[1], wave: wave.clone() },
                Element::Mosfet { model, w, l } => {
                    let card = netlist
                        .model(model)
                        .expect("validated netlist references known models")
                        .clone();
                    card.validate()?;
                    join(t[0], t[2]);
                    if card.is_junction > 0.0 {
                        join(t[0], t[3]);
                        join(t[2], t[3]);
                    }
                    let sign = match card.polarity {
                        Polarity::Nmos => 1.0,
                        Polarity::Pmos => -1.0,
                    };
                    Stamp::Mosfet { d: t[0], g: t[1], s: t[2], b: t[3], card, wl: w / l, sign }
                }
            };
            stamps.push(stamp);
        }
        for (i, name) in nodes.iter().enumerate() {
            if find(&mut parent, i + 1) != 0 {
                return Err(EngineError::Singular { node: format!("node {name}") });
            }
        }
        Ok(Self {
            nodes,
            branches,
            stamps,
            device_names: netlist.devices().iter().map(|d| d.name.clone()).collect(),
            capacitors,
            v_t,
            temp_k,
        })
    }

    pub fn size(&self) -> usize {
        self.nodes.len() + self.branches.len()
    }

    fn unknown_name(&self, k: usize) -> String {
        match self.nodes.get(k) {
            Some(n) => format!("node {n}"),
            None => format!("branch of {}", self.branches[k - self.nodes.len()]),
        }
    }

    /// Stamp index of an independent source.
    pub fn source_stamp(&self, name: &str) -> Option<usize> {
        self.stamps.iter().zip(&self.device_names).position(|(s, n)| {
            matches!(s, Stamp::VSource { .. } | Stamp::ISource { .. }) && n.eq_ignore_ascii_case(name)
        })
    }

    pub fn set_source_wave(&mut self, stamp: usize, new: SourceWave) {
        match &mut self.stamps[stamp] {
            Stamp::VSource { wave, .. } | Stamp::ISource { wave, .. } => *wave = new,
            _ => unreachable!("not a source stamp"),
        }
    }

    /// Voltage across each capacitor (first terminal minus second), in slot order.
    pub fn capacitor_voltages(&self, x: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.capacitors];
        for s in &self.stamps {
            if let Stamp::Capacitor { a, b, slot, .. } = s {
                v[*slot] = at(x, *a) - at(x, *b);
            }
        }
        v
    }

    pub fn capacitances(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.capacitors];
        for s in &self.stamps {
            if let Stamp::Capacitor { c: farads, slot, .. } = s {
                c[*slot] = *farads;
            }
        }
        c
    }

    /// Fill the Jacobian and the residual `f(x)`: for node rows, the sum of currents
    /// leaving the node; for branch rows, the voltage-source constraint error.
    fn load(&self, x: &[f64], drive: &Drive, jac: &mut Matrix, f: &mut [f64]) {
        jac.clear();
        f.fill(0.0);
        let nn = self.nodes.len();
        let conductance = |jac: &mut Matrix, f: &mut [f64], a: Node, b: Node, g: f64, i: f64| {
            // current i = g·(va − vb) + const leaves a and enters b; g = ∂i/∂va
            if let Some(a) = a {
                f[a] += i;
                jac.add(a, a, g);
                if let Some(b) = b {
                    jac.add(a, b, -g);
                }
            }
            if let Some(b) = b {
                f[b] -= i;
                jac.add(b, b, g);
                if let Some(a) = a {
                    jac.add(b, a, -g);
                }
            }
        };
        for stamp in &self.stamps {
            match stamp {
                Stamp::Resistor { a, b, g } => {
                    let i = g * (at(x, *a) - at(x, *b));
                    conductance(jac, f, *a, *b, *g, i);
                }
                Stamp::Capacitor { a, b, slot, .. } => {
                    if let Some(comp) = drive.companions {
                        let c = comp[*slot];
                        let i = c.geq * (at(x, *a) - at(x, *b)) + c.ieq;
                        conductance(jac, f, *a, *b, c.geq, i);
                    }
                }
                Stamp::ISource { p, n, wave } => {
                    let i = drive.scale * wave.value_at(drive.time);
                    if let Some(p) = p {
                        f[*p] += i;
                    }
                    if let Some(n) = n {
                        f[*n] -= i;
                    }
                }
                Stamp::VSource { p, n, branch, wave } => {
                    let row = nn + branch;
                    let i = x[row];
                    if let Some(p) = p {
                        f[*p] += i;
                        jac.add(*p, row, 1.0);
                        jac.add(row, *p, 1.0);
                    }
                    if let Some(n) = n {
                        f[*n] -= i;
                        jac.add(*n, row, -1.0);
                        jac.add(row, *n, -1.0);
                    }
                    f[row] = at(x, *p) - at(x, *n) - drive.scale * wave.value_at(drive.time);
                }
                Stamp::Mosfet { d, g, s, b, card, wl, sign } => {
                    let (vd, vg, vs) = (at(x, *d), at(x, *g), at(x, *s));
                    let e = devmodel::eval_unchecked(card, *wl, vg - vs, vd - vs, self.v_t);
                    let (gm, gds) = (e.d_ids_d_vgs, e.d_ids_d_vds);
                    for (node, sgn) in [(*d, 1.0), (*s, -1.0)] {
                        if let Some(k) = node {
                            f[k] += sgn * e.ids;
                            if let Some(dd) = d {
                                jac.add(k, *dd, sgn * gds);
                            }
                            if let Some(gg) = g {
                                jac.add(k, *gg, sgn * gm);
                            }
                            if let Some(ss) = s {
                                jac.add(k, *ss, -sgn * (gm + gds));
                            }
                        }
                    }
                    if card.is_junction > 0.0 {
                        // Reverse-biased diodes from each channel terminal to the body. For
                        // NMOS the channel terminal is the cathode, for PMOS the body is.
                        for term in [*d, *s] {
                            let (cathode, anode) = if *sign > 0.0 { (term, *b) } else { (*b, term) };
                            let vr = at(x, cathode) - at(x, anode);
                            let (i, gj) = devmodel::junction_eval(card.is_junction, vr, self.v_t);
                            conductance(jac, f, cathode, anode, gj, i);
                        }
                    }
                }
            }
        }
        if drive.gmin > 0.0 {
            for k in 0..nn {
                f[k] += drive.gmin * x[k];
                jac.add(k, k, drive.gmin);
            }
        }
    }

    /// Currents flowing into each terminal of every device, in netlist order.
    pub fn terminal_currents(&self, x: &[f64], drive: &Drive) -> Vec<Vec<f64>> {
        let nn = self.nodes.len();
        self.stamps
            .iter()
            .map(|stamp| match stamp {
                Stamp::Resistor { a, b, g } => {
                    let i = g * (at(x, *a) - at(x, *b));
                    vec![i, -i]
                }
                Stamp::Capacitor { a, b, slot, .. } => {
                    let i = drive
                        .companions
                        .map_or(0.0, |c| c[*slot].geq * (at(x, *a) - at(x, *b)) + c[*slot].ieq);
                    vec![i, -i]
                }
                Stamp::VSource { branch, .. } => {
                    let i = x[nn + branch];
                    vec![i, -i]
                }
                Stamp::ISource { wave, .. } => {
                    let i = drive.scale * wave.value_at(drive.time);
                    vec![i, -i]
                }
                Stamp::Mosfet { d, g, s, b, card, wl, sign } => {
                    let (vd, vg, vs, vb) = (at(x, *d), at(x, *g), at(x, *s), at(x, *b));
                    let ids = devmodel::eval_unchecked(card, *wl, vg - vs, vd - vs, self.v_t).ids;
                    let mut out = vec![ids, 0.0, -ids, 0.0];
                    if card.is_junction > 0.0 {
                        for (k, v) in [(0usize, vd), (2usize, vs)] {
                            // diode current flowing from terminal into body (NMOS) or back
                            let vr = sign * (v - vb);
                            let (i, _) = devmodel::junction_eval(card.is_junction, vr, self.v_t);
                            out[k] += sign * i;
                            out[3] -= sign * i;
                        }
                    }
                    out
                }
            })
            .collect()
    }

    /// Largest fraction of the Newton step that keeps every sub-threshold MOSFET from
    /// jumping more than `2·vT` past its threshold in one iteration.
    fn step_limit(&self, x: &[f64], dx: &[f64]) -> f64 {
        let mut alpha: f64 = 1.0;
        for stamp in &self.stamps {
            if let Stamp::Mosfet { d, g, s, card, sign, .. } = stamp {
                let vgs = sign * (at(x, *g) - at(x, *s));
                let vds = sign * (at(x, *d) - at(x, *s));
                let dvgs = sign * (at(dx, *g) - at(dx, *s));
                let dvds = sign * (at(dx, *d) - at(dx, *s));
                // Orient so the drain is the higher-potential channel terminal.
                let (vg, dvg, vds) = if vds >= 0.0 { (vgs, dvgs, vds) } else { (vgs - vds, dvgs - dvds, -vds) };
                let vth = card.vth0 - card.sigma_dibl * vds;
                let ceiling = vth + 2.0 * self.v_t;
                if vg < vth && vg + dvg > ceiling {
                    alpha = alpha.min((ceiling - vg) / dvg);
                }
            }
        }
        alpha
    }

    fn newton(&self, x0: &[f64], drive: &Drive, opts: &SolverOptions) -> std::result::Result<Solution, Failure> {
        let n = self.size();
        let nn = self.nodes.len();
        let mut jac = Matrix::zeros(n);
        let mut f = vec![0.0; n];
        let mut x = x0.to_vec();
        let mut last_dv = f64::INFINITY;
        let mut branches_settled = false;
        let mut best = f64::INFINITY;
        for it in 0..=opts.max_iterations {
            self.load(&x, drive, &mut jac, &mut f);
            let residual = f[..nn].iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if !residual.is_finite() {
                break;
            }
            best = best.min(residual);
            if last_dv <= opts.abstol_v && branches_settled && residual <= opts.abstol_i {
                return Ok(Solution { x, iterations: it, residual, max_update: last_dv, strategy: Strategy::Newton });
            }
            if it == opts.max_iterations {
                break;
            }
            for v in f.iter_mut() {
                *v = -*v;
            }
            solve_in_place(&mut jac, &mut f).map_err(Failure::Singular)?;
            let alpha = self.step_limit(&x, &f);
            last_dv = 0.0;
            branches_settled = true;
            for (k, (xk, dk)) in x.iter_mut().zip(&f).enumerate() {
                let step = alpha * dk;
                *xk += step;
                if k < nn {
                    last_dv = last_dv.max(step.abs());
                } else if step.abs() > opts.abstol_i + opts.reltol * xk.abs() {
                    branches_settled = false;
                }
            }
            if !last_dv.is_finite() {
                break;
            }
        }
        Err(Failure::Stalled { iterations: opts.max_iterations, residual: best })
    }

    /// Newton from `x0`, then gmin stepping, then source stepping.
    pub fn solve(&self, x0: &[f64], drive: &Drive, opts: &SolverOptions) -> Result<Solution> {
        let mut spent = 0;
        let mut best = f64::INFINITY;
        let mut singular = None;
        let mut note = |fail: Failure, spent: &mut usize| match fail {
            Failure::Singular(k) => singular = singular.or(Some(k)),
            Failure::Stalled { iterations, residual } => {
                *spent += iterations;
                best = best.min(residual);
            }
        };

        match self.newton(x0, drive, opts) {
            Ok(sol) => return Ok(sol),
            Err(f) => note(f, &mut spent),
        }

        if !opts.gmin_ladder.is_empty() {
            let mut x = x0.to_vec();
            let mut ok = true;
            for &gmin in &opts.gmin_ladder {
                match self.newton(&x, &Drive { gmin, ..*drive }, opts) {
                    Ok(sol) => {
                        spent += sol.iterations;
                        x = sol.x;
                    }
                    Err(f) => {
                        note(f, &mut spent);
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                match self.newton(&x, &Drive { gmin: 0.0, ..*drive }, opts) {
                    Ok(sol) => {
                        return Ok(Solution {
                            iterations: spent + sol.iterations,
                            strategy: Strategy::GminStepping,
                            ..sol
                        })
                    }
                    Err(f) => note(f, &mut spent),
                }
            }
        }

        if opts.source_steps > 0 {
            let mut x = vec![0.0; self.size()];
            let mut reached = 0.0;
            let mut step = 1.0 / opts.source_steps as f64;
            let min_step = step / 1024.0;
            while reached < 1.0 {
                let target = (reached + step).min(1.0);
                match self.newton(&x, &Drive { scale: drive.scale * target, ..*drive }, opts) {
                    Ok(sol) => {
                        spent += sol.iterations;
                        x = sol.x;
                        reached = target;
                        if reached >= 1.0 {
                            return Ok(Solution {
                                x,
                                iterations: spent,
                                strategy: Strategy::SourceStepping,
                                ..sol
                            });
                        }
                    }
                    Err(f) => {
                        note(f, &mut spent);
                        step /= 2.0;
                        if step < min_step {
                            break;
                        }
                    }
                }
            }
        }

        match (singular, best.is_finite()) {
            (Some(k), false) => Err(EngineError::Singular { node: self.unknown_name(k) }),
            _ => Err(EngineError::NonConvergence { best_residual: best, iterations: spent }),
        }
    }

    pub fn initial_guess(&self, guess: Option<&BTreeMap<String, f64>>) -> Vec<f64> {
        let mut x = vec![0.0; self.size()];
        if let Some(g) = guess {
            for (k, name) in self.nodes.iter().enumerate() {
                if let Some(v) = g.get(name) {
                    x[k] = *v;
                }
            }
        }
        x
    }

    /// Delivered current of every independent source, keyed by name.
    pub fn source_currents(&self, x: &[f64], drive: &Drive) -> BTreeMap<String, f64> {
        let nn = self.nodes.len();
        self.stamps
            .iter()
            .zip(&self.device_names)
            .filter_map(|(s, name)| match s {
                Stamp::VSource { branch, .. } => Some((name.clone(), 0.0 - x[nn + branch])),
                Stamp::ISource { wave, .. } => Some((name.clone(), drive.scale * wave.value_at(drive.time))),
                _ => None,
            })
            .collect()
    }

    pub fn operating_point(&self, sol: &Solution, drive: &Drive) -> OperatingPoint {
        OperatingPoint {
            node_voltages: self.nodes.iter().cloned().zip(sol.x.iter().copied()).collect(),
            source_currents: self.source_currents(&sol.x, drive),
            iterations: sol.iterations,
            residual_norm: sol.residual,
            max_update: sol.max_update,
            converged: true,
            strategy: sol.strategy,
            temp_k: self.temp_k,
        }
    }

    /// Unknown vector corresponding to a reported operating point.
    pub fn state_of(&self, op: &OperatingPoint) -> Vec<f64> {
        let mut x = self.initial_guess(Some(&op.node_voltages));
        let nn = self.nodes.len();
        for (k, name) in self.branches.iter().enumerate() {
            x[nn + k] = -op.source_currents.get(name).copied().unwrap_or(0.0);
        }
        x
    }

    /// Column names and values for one waveform row: node voltages then source currents.
    pub fn row(&self, x: &[f64], drive: &Drive) -> Vec<(String, f64)> {
        let mut row: Vec<(String, f64)> =
            self.nodes.iter().zip(x).map(|(n, v)| (format!("v({n})"), *v)).collect();
        let currents = self.source_currents(x, drive);
        for (stamp, name) in self.stamps.iter().zip(&self.device_names) {
            if matches!(stamp, Stamp::VSource { .. } | Stamp::ISource { .. }) {
                row.push((format!("i({name})"), currents[name]));
            }
        }
        row
    }
}
