//! Command-line front end.
//!
//! Every subcommand renders its whole report into memory first and only then writes it to
//! standard output or `--out`, so a failing run never leaves partial data behind. Exit
//! status: 0 on success, 1 for usage errors (bad flags, unreadable input file, missing
//! analysis parameters), 2 when parsing, transforming or solving fails.
//!
//! CSV output starts with `#` comment lines carrying provenance (tool version, SHA-256 of
//! the netlist text, temperature), then a header row; numbers use scientific notation with
//! nine significant digits. JSON output has the same provenance under a `provenance` key;
//! key order is stable.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::devmodel::{self, BiasPoint, EtaSpec, MosModelCard, Polarity};
use crate::engine::{self, Waveform, DEFAULT_SLEW_WINDOW};
use crate::netlist::{
    self, units::parse_value, AnalysisDirective, GatingOptions, GatingStyle, Netlist, SleepState, SweepSpec,
    DEFAULT_TEMP_K,
};
use crate::power::{self, LeakageReport};

const TOOL: &str = env!("CARGO_PKG_NAME");
const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "leakspice", version, about = "Leakage-aware SPICE-subset circuit simulator")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Temperature in kelvin; overrides the netlist directive.
    #[arg(long, value_parser = eng)]
    pub temp: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StyleArg {
    Footer,
    Header,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateArg {
    Active,
    Standby,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// Empirical drain current at `--vgs`.
    Ids,
    /// Empirical off-current (Vgs = 0).
    Ioff,
    /// Nominal and exact subthreshold swing.
    Swing,
    /// Body-effect coefficient from `--tox/--wdm` or `--cdep/--coxe`.
    Eta,
    /// Thermal voltage.
    Vt,
    /// Weak-inversion current of the compact model.
    Weak,
    /// Blended compact-model current and partial derivatives.
    Unified,
    /// Reverse junction leakage.
    Junction,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// DC operating point.
    Op {
        netlist: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// DC sweep; defaults to the first `.dc` directive.
    Sweep {
        netlist: PathBuf,
        #[arg(long)]
        source: Option<String>,
        #[arg(long, value_parser = eng, allow_negative_numbers = true)]
        start: Option<f64>,
        #[arg(long, value_parser = eng, allow_negative_numbers = true)]
        stop: Option<f64>,
        #[arg(long, value_parser = eng)]
        step: Option<f64>,
        /// Repeat the sweep for each value of another source: `SRC=v1,v2,...`.
        #[arg(long)]
        outer: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Fixed-step transient; defaults to the first `.tran` directive.
    Tran {
        netlist: PathBuf,
        #[arg(long, value_parser = eng)]
        dt: Option<f64>,
        #[arg(long, value_parser = eng)]
        tstop: Option<f64>,
        /// Report the 10–90 % slew rate of this signal instead of the waveform.
        #[arg(long)]
        slew: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Static leakage over all digital states of the listed inputs.
    Leakage {
        netlist: PathBuf,
        #[arg(long, value_delimiter = ',')]
        inputs: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Insert a sleep transistor. Without `--state`, compares baseline, active and standby.
    Gate {
        netlist: PathBuf,
        #[arg(long, value_enum, default_value_t = StyleArg::Footer)]
        style: StyleArg,
        #[arg(long)]
        sleep_model: String,
        #[arg(long, value_enum)]
        state: Option<StateArg>,
        #[arg(long, value_delimiter = ',')]
        inputs: Vec<String>,
        #[arg(long, value_parser = eng)]
        width: Option<f64>,
        #[arg(long, value_parser = eng)]
        length: Option<f64>,
        /// Also write the gated netlist (standby unless `--state` says otherwise).
        #[arg(long)]
        emit_netlist: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a device-model quantity directly from flags.
    ModelEval {
        #[arg(value_enum)]
        quantity: Quantity,
        #[arg(long, value_parser = eng, default_value = "1")]
        wl: f64,
        /// Threshold voltage of the empirical law.
        #[arg(long, value_parser = eng, default_value = "0.2")]
        vt: f64,
        #[arg(long, value_parser = eng, default_value = "1.5")]
        eta: f64,
        #[arg(long, value_parser = eng, default_value = "0", allow_negative_numbers = true)]
        vgs: f64,
        #[arg(long, value_parser = eng, default_value = "0.05", allow_negative_numbers = true)]
        vds: f64,
        #[arg(long, value_parser = eng)]
        tox: Option<f64>,
        #[arg(long, value_parser = eng)]
        wdm: Option<f64>,
        #[arg(long, value_parser = eng)]
        cdep: Option<f64>,
        #[arg(long, value_parser = eng)]
        coxe: Option<f64>,
        #[arg(long, value_enum, default_value_t = PolarityArg::Nmos)]
        polarity: PolarityArg,
        #[arg(long, value_parser = eng, default_value = "1u")]
        w: f64,
        #[arg(long, value_parser = eng, default_value = "45n")]
        l: f64,
        #[arg(long, value_parser = eng, default_value = "0.2")]
        vth0: f64,
        #[arg(long, value_parser = eng, default_value = "350u")]
        u0cox: f64,
        #[arg(long, value_parser = eng, default_value = "350u")]
        kp: f64,
        #[arg(long, value_parser = eng, default_value = "0")]
        lambda: f64,
        #[arg(long, value_parser = eng, default_value = "0")]
        sigma: f64,
        /// Junction saturation current.
        #[arg(long = "is", value_parser = eng, default_value = "1f")]
        is_junction: f64,
        /// Junction reverse voltage.
        #[arg(long, value_parser = eng, default_value = "1", allow_negative_numbers = true)]
        vr: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolarityArg {
    Nmos,
    Pmos,
}

fn eng(s: &str) -> Result<f64, String> {
    parse_value(s).ok_or_else(|| format!("`{s}` is not a number"))
}

/// A failed run: exit status plus the message for the error stream.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn failed(message: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_FAILURE, message: message.to_string() }
}

#[derive(Debug, Serialize)]
struct Provenance {
    tool: &'static str,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    netlist_sha256: Option<String>,
    temp_k: f64,
}

impl Provenance {
    fn new(source: Option<&str>, temp_k: f64) -> Self {
        let netlist_sha256 = source.map(|text| {
            Sha256::digest(text.as_bytes()).iter().fold(String::with_capacity(64), |mut s, b| {
                let _ = write!(s, "{b:02x}");
                s
            })
        });
        Self { tool: TOOL, version: VERSION, netlist_sha256, temp_k }
    }
}

/// CSV document with provenance comment lines.
struct Csv {
    text: String,
}

impl Csv {
    fn new(p: &Provenance) -> Self {
        let mut csv = Csv { text: String::new() };
        csv.comment("tool", &format!("{} {}", p.tool, p.version));
        if let Some(h) = &p.netlist_sha256 {
            csv.comment("netlist_sha256", h);
        }
        csv.comment("temp_k", &num(p.temp_k));
        csv
    }

    fn comment(&mut self, key: &str, value: &str) {
        let _ = writeln!(self.text, "# {key}={value}");
    }

    fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        let line: Vec<String> = fields.iter().map(|f| quote(f.as_ref())).collect();
        self.text.push_str(&line.join(","));
        self.text.push('\n');
    }
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn num(v: f64) -> String {
    format!("{v:.8e}")
}

fn json<T: Serialize>(provenance: &Provenance, key: &str, body: &T) -> Result<String, Failure> {
    let mut map = serde_json::Map::new();
    map.insert("provenance".into(), serde_json::to_value(provenance).map_err(failed)?);
    map.insert(key.into(), serde_json::to_value(body).map_err(failed)?);
    let mut text = serde_json::to_string_pretty(&map).map_err(failed)?;
    text.push('\n');
    Ok(text)
}

struct Loaded {
    text: String,
    netlist: Netlist,
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let netlist = netlist::parse(&text).map_err(|e| {
        let lines: Vec<String> = e.diagnostics.iter().map(|d| format!("{}: {d}", path.display())).collect();
        failed(lines.join("\n"))
    })?;
    Ok(Loaded { text, netlist })
}

fn directive_temp(netlist: &Netlist, pick: impl Fn(&AnalysisDirective) -> bool) -> f64 {
    netlist.directives().iter().find(|d| pick(d)).map_or(DEFAULT_TEMP_K, |d| d.temp_k())
}

fn waveform_csv(csv: &mut Csv, w: &Waveform) {
    let mut header = vec![w.abscissa_name.to_lowercase()];
    header.extend(w.names().map(str::to_string));
    csv.row(&header);
    for (k, x) in w.abscissa.iter().enumerate() {
        let mut row = vec![num(*x)];
        row.extend(w.columns.iter().map(|c| num(c.values[k])));
        csv.row(&row);
    }
}

fn op_command(path: &Path, common: &Common) -> Result<String, Failure> {
    let Loaded { text, netlist } = load(path)?;
    let temp = common.temp.unwrap_or_else(|| directive_temp(&netlist, |d| matches!(d, AnalysisDirective::Op { .. })));
    let op = engine::dc_operating_point(&netlist, temp, None).map_err(failed)?;
    let provenance = Provenance::new(Some(&text), temp);
    let supply = netlist.supply_rail().map(|(name, _, _)| name.to_string());
    match common.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                #[serde(flatten)]
                op: &'a engine::OperatingPoint,
                supply_source: Option<String>,
                supply_current: Option<f64>,
            }
            let supply_current = supply.as_deref().and_then(|s| op.source_current(s));
            json(&provenance, "operating_point", &Body { op: &op, supply_source: supply, supply_current })
        }
        Format::Csv => {
            let mut csv = Csv::new(&provenance);
            csv.comment("iterations", &op.iterations.to_string());
            csv.comment("residual_norm", &num(op.residual_norm));
            if let Some(s) = &supply {
                csv.comment("supply", s);
            }
            csv.row(&["signal", "value", "unit"]);
            for (node, v) in &op.node_voltages {
                csv.row(&[format!("v({node})"), num(*v), "V".into()]);
            }
            for (src, i) in &op.source_currents {
                csv.row(&[format!("i({src})"), num(*i), "A".into()]);
            }
            Ok(csv.text)
        }
    }
}

fn parse_outer(spec: &str) -> Result<(String, Vec<f64>), Failure> {
    let (name, list) = spec
        .split_once('=')
        .ok_or_else(|| usage(format!("--outer expects SRC=v1,v2,..., got `{spec}`")))?;
    let values = list
        .split(',')
        .map(|v| eng(v.trim()).map_err(usage))
        .collect::<Result<Vec<_>, _>>()?;
    if name.is_empty() || values.is_empty() {
        return Err(usage(format!("--outer expects SRC=v1,v2,..., got `{spec}`")));
    }
    Ok((name.to_string(), values))
}

#[allow(clippy::too_many_arguments)]
fn sweep_command(
    path: &Path,
    source: Option<&str>,
    start: Option<f64>,
    stop: Option<f64>,
    step: Option<f64>,
    outer: Option<&str>,
    common: &Common,
) -> Result<String, Failure> {
    let Loaded { text, netlist } = load(path)?;
    let from_netlist = netlist.directives().iter().find_map(|d| match d {
        AnalysisDirective::Dc { sweep, outer, temp_k } => Some((sweep.clone(), outer.clone(), *temp_k)),
        _ => None,
    });
    let (inner, mut outer_values, dir_temp) = match (source, from_netlist) {
        (Some(src), found) => match (start, stop, step) {
            (Some(a), Some(b), Some(s)) => {
                let outer = found.as_ref().and_then(|f| f.1.as_ref()).map(|o| (o.source.clone(), o.values()));
                (SweepSpec::new(src, a, b, s), outer, found.map_or(DEFAULT_TEMP_K, |f| f.2))
            }
            _ => return Err(usage("--source needs --start, --stop and --step")),
        },
        (None, Some((sweep, outer, t))) => (sweep, outer.map(|o| (o.source.clone(), o.values())), t),
        (None, None) => return Err(usage("netlist has no .dc directive; pass --source/--start/--stop/--step")),
    };
    if let Some(spec) = outer {
        outer_values = Some(parse_outer(spec)?);
    }
    let temp = common.temp.unwrap_or(dir_temp);
    let values = inner.values();
    if values.is_empty() {
        return Err(usage(format!("empty sweep {}..{} step {}", inner.start, inner.stop, inner.step)));
    }
    let provenance = Provenance::new(Some(&text), temp);

    let Some((outer_name, outer_values)) = outer_values else {
        let w = engine::dc_sweep_points(&netlist, &inner.source, &values, temp).map_err(failed)?;
        return match common.format {
            Format::Json => json(&provenance, "waveform", &w),
            Format::Csv => {
                let mut csv = Csv::new(&provenance);
                waveform_csv(&mut csv, &w);
                Ok(csv.text)
            }
        };
    };

    // One curve per outer value; the plotted current is the one the outer source delivers.
    let outer_dev = netlist
        .device(&outer_name)
        .ok_or_else(|| failed(format!("unknown source {outer_name}")))?
        .name
        .clone();
    let mut curves = Vec::new();
    for v in &outer_values {
        let variant = netlist.with_source_value(&outer_dev, *v).map_err(failed)?;
        let w = engine::dc_sweep_points(&variant, &inner.source, &values, temp).map_err(failed)?;
        let current = w.column(&format!("i({outer_dev})")).expect("source column").to_vec();
        curves.push((*v, w, current));
    }
    let abscissa = curves[0].1.abscissa.clone();
    let label = |v: f64| format!("ids_{}_{v}", outer_dev.to_lowercase());
    match common.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Family {
                sweep_source: String,
                outer_source: String,
                abscissa: Vec<f64>,
                curves: BTreeMap<String, Vec<f64>>,
            }
            let family = Family {
                sweep_source: curves[0].1.abscissa_name.clone(),
                outer_source: outer_dev.clone(),
                abscissa,
                curves: curves.iter().map(|(v, _, c)| (label(*v), c.clone())).collect(),
            };
            json(&provenance, "sweep", &family)
        }
        Format::Csv => {
            let mut csv = Csv::new(&provenance);
            let mut header = vec![curves[0].1.abscissa_name.to_lowercase()];
            header.extend(curves.iter().map(|(v, _, _)| label(*v)));
            csv.row(&header);
            for (k, x) in abscissa.iter().enumerate() {
                let mut row = vec![num(*x)];
                row.extend(curves.iter().map(|(_, _, c)| num(c[k])));
                csv.row(&row);
            }
            Ok(csv.text)
        }
    }
}

fn tran_command(
    path: &Path,
    dt: Option<f64>,
    tstop: Option<f64>,
    slew: Option<&str>,
    common: &Common,
) -> Result<String, Failure> {
    let Loaded { text, netlist } = load(path)?;
    let directive = netlist.directives().iter().find_map(|d| match d {
        AnalysisDirective::Tran { dt, tstop, temp_k } => Some((*dt, *tstop, *temp_k)),
        _ => None,
    });
    let (dt, tstop, dir_temp) = match (dt, tstop, directive) {
        (Some(a), Some(b), d) => (a, b, d.map_or(DEFAULT_TEMP_K, |d| d.2)),
        (a, b, Some(d)) => (a.unwrap_or(d.0), b.unwrap_or(d.1), d.2),
        _ => return Err(usage("netlist has no .tran directive; pass --dt and --tstop")),
    };
    let temp = common.temp.unwrap_or(dir_temp);
    let w = engine::transient_with(&netlist, dt, tstop, temp, &engine::SolverOptions::default()).map_err(failed)?;
    let provenance = Provenance::new(Some(&text), temp);
    if let Some(signal) = slew {
        let (lo, hi) = DEFAULT_SLEW_WINDOW;
        let rate = engine::measure_slew_rate(&w, signal, lo, hi).map_err(failed)?;
        return match common.format {
            Format::Json => {
                #[derive(Serialize)]
                struct Slew<'a> {
                    signal: &'a str,
                    lo_frac: f64,
                    hi_frac: f64,
                    slew_rate: f64,
                }
                json(&provenance, "slew", &Slew { signal, lo_frac: lo, hi_frac: hi, slew_rate: rate })
            }
            Format::Csv => {
                let mut csv = Csv::new(&provenance);
                csv.row(&["signal", "lo_frac", "hi_frac", "slew_rate"]);
                csv.row(&[signal.to_string(), num(lo), num(hi), num(rate)]);
                Ok(csv.text)
            }
        };
    }
    match common.format {
        Format::Json => json(&provenance, "waveform", &w),
        Format::Csv => {
            let mut csv = Csv::new(&provenance);
            waveform_csv(&mut csv, &w);
            Ok(csv.text)
        }
    }
}

fn leakage_rows(csv: &mut Csv, variant: &str, r: &LeakageReport, inputs: &[String]) {
    for (k, s) in r.states.iter().enumerate() {
        let mut row = vec![variant.to_string(), k.to_string()];
        for input in inputs {
            let v = s
                .input_assignment
                .iter()
                .find(|(name, _)| name.eq_ignore_ascii_case(input))
                .map_or(f64::NAN, |(_, v)| *v);
            row.push(num(v));
        }
        row.push(num(s.supply_current));
        row.push(num(s.static_power));
        csv.row(&row);
    }
}

fn leakage_header(csv: &mut Csv, inputs: &[String]) {
    let mut header = vec!["variant".to_string(), "state".to_string()];
    header.extend(inputs.iter().cloned());
    header.push("supply_current".into());
    header.push("static_power".into());
    csv.row(&header);
}

fn leakage_command(path: &Path, inputs: &[String], common: &Common) -> Result<String, Failure> {
    let Loaded { text, netlist } = load(path)?;
    let temp = common.temp.unwrap_or_else(|| directive_temp(&netlist, |_| true));
    let refs: Vec<&str> = inputs.iter().map(String::as_str).collect();
    let report = power::leakage_report(&netlist, &refs, temp).map_err(failed)?;
    let provenance = Provenance::new(Some(&text), temp);
    match common.format {
        Format::Json => json(&provenance, "leakage", &report),
        Format::Csv => {
            let mut csv = Csv::new(&provenance);
            csv.comment("supply", &report.supply);
            csv.comment("mean_power", &num(report.mean_power));
            csv.comment("worst_state", &report.worst_state.to_string());
            leakage_header(&mut csv, inputs);
            leakage_rows(&mut csv, "baseline", &report, inputs);
            Ok(csv.text)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn gate_command(
    path: &Path,
    style: StyleArg,
    sleep_model: &str,
    state: Option<StateArg>,
    inputs: &[String],
    width: Option<f64>,
    length: Option<f64>,
    emit: Option<&Path>,
    common: &Common,
) -> Result<(String, Option<(PathBuf, String)>), Failure> {
    let Loaded { text, netlist } = load(path)?;
    let temp = common.temp.unwrap_or_else(|| directive_temp(&netlist, |_| true));
    let base = match style {
        StyleArg::Footer => GatingOptions::footer(sleep_model),
        StyleArg::Header => GatingOptions::header(sleep_model),
    };
    let sleep_state = match state {
        Some(StateArg::Active) => SleepState::Active,
        _ => SleepState::Standby,
    };
    let options = GatingOptions { w: width, l: length, state: sleep_state, ..base };
    let gated = netlist::power_gate_transform(&netlist, &options).map_err(failed)?;
    let emitted = emit.map(|p| (p.to_path_buf(), netlist::serialize(&gated)));
    let refs: Vec<&str> = inputs.iter().map(String::as_str).collect();
    let provenance = Provenance::new(Some(&text), temp);
    let style_name = match options.style {
        GatingStyle::Footer => "footer",
        GatingStyle::Header => "header",
    };

    if state.is_some() {
        let report = power::leakage_report(&gated, &refs, temp).map_err(failed)?;
        let variant = match sleep_state {
            SleepState::Active => "gated_active",
            SleepState::Standby => "gated_standby",
        };
        let body = match common.format {
            Format::Json => json(&provenance, variant, &report)?,
            Format::Csv => {
                let mut csv = Csv::new(&provenance);
                csv.comment("style", style_name);
                csv.comment("mean_power", &num(report.mean_power));
                leakage_header(&mut csv, inputs);
                leakage_rows(&mut csv, variant, &report, inputs);
                csv.text
            }
        };
        return Ok((body, emitted));
    }

    let cmp = power::compare_gating(&netlist, &options, &refs, temp).map_err(failed)?;
    let body = match common.format {
        Format::Json => json(&provenance, "comparison", &cmp)?,
        Format::Csv => {
            let mut csv = Csv::new(&provenance);
            csv.comment("style", style_name);
            csv.comment("standby_reduction_factor", &num(cmp.standby_reduction_factor));
            csv.comment("active_penalty_factor", &num(cmp.active_penalty_factor));
            leakage_header(&mut csv, inputs);
            leakage_rows(&mut csv, "baseline", &cmp.baseline, inputs);
            leakage_rows(&mut csv, "gated_active", &cmp.gated_active, inputs);
            leakage_rows(&mut csv, "gated_standby", &cmp.gated_standby, inputs);
            csv.text
        }
    };
    Ok((body, emitted))
}

#[derive(Debug, Serialize)]
struct Value {
    quantity: &'static str,
    value: f64,
    unit: &'static str,
}

fn model_eval(cmd: &Command) -> Result<String, Failure> {
    let Command::ModelEval {
        quantity, wl, vt, eta, vgs, vds, tox, wdm, cdep, coxe, polarity, w, l, vth0, u0cox, kp, lambda,
        sigma, is_junction, vr, common,
    } = cmd
    else {
        unreachable!("model_eval called with another subcommand");
    };
    let temp = common.temp.unwrap_or(DEFAULT_TEMP_K);
    let card = || {
        let pol = match polarity {
            PolarityArg::Nmos => Polarity::Nmos,
            PolarityArg::Pmos => Polarity::Pmos,
        };
        let mut c = MosModelCard::new("cli", pol, *vth0);
        c.eta = EtaSpec::Given(*eta);
        c.u0cox = *u0cox;
        c.kp = *kp;
        c.lambda = *lambda;
        c.sigma_dibl = *sigma;
        c
    };
    let m = |e: devmodel::ModelError| failed(e);
    let values = match quantity {
        Quantity::Ids => vec![Value {
            quantity: "ids",
            value: devmodel::ids_empirical(*wl, *vgs, *vt, *eta, temp).map_err(m)?,
            unit: "A",
        }],
        Quantity::Ioff => vec![Value {
            quantity: "ioff",
            value: devmodel::ioff_empirical(*wl, *vt, *eta, temp).map_err(m)?,
            unit: "A",
        }],
        Quantity::Swing => vec![
            Value {
                quantity: "swing_nominal",
                value: devmodel::subthreshold_swing_nominal(*eta, temp).map_err(m)?,
                unit: "mV/dec",
            },
            Value {
                quantity: "swing_exact",
                value: devmodel::subthreshold_swing_exact(*eta, temp).map_err(m)?,
                unit: "mV/dec",
            },
        ],
        Quantity::Eta => {
            let value = match (tox, wdm, cdep, coxe) {
                (Some(t), Some(d), None, None) => devmodel::body_coefficient(*t, *d).map_err(m)?,
                (None, None, Some(c), Some(o)) => devmodel::eta_from_caps(*c, *o).map_err(m)?,
                _ => return Err(usage("eta needs either --tox and --wdm, or --cdep and --coxe")),
            };
            vec![Value { quantity: "eta", value, unit: "" }]
        }
        Quantity::Vt => vec![Value {
            quantity: "thermal_voltage",
            value: devmodel::thermal_voltage(temp).map_err(m)?,
            unit: "V",
        }],
        Quantity::Weak => vec![Value {
            quantity: "ids_weak",
            value: devmodel::ids_weak_inversion(&card(), *w, *l, &BiasPoint::new(*vgs, *vds, temp)).map_err(m)?,
            unit: "A",
        }],
        Quantity::Unified => {
            let e = devmodel::ids_unified(&card(), *w, *l, &BiasPoint::new(*vgs, *vds, temp)).map_err(m)?;
            vec![
                Value { quantity: "ids", value: e.ids, unit: "A" },
                Value { quantity: "d_ids_d_vgs", value: e.d_ids_d_vgs, unit: "S" },
                Value { quantity: "d_ids_d_vds", value: e.d_ids_d_vds, unit: "S" },
            ]
        }
        Quantity::Junction => vec![Value {
            quantity: "junction_current",
            value: devmodel::junction_reverse_current(*is_junction, *vr, temp).map_err(m)?,
            unit: "A",
        }],
    };
    let provenance = Provenance::new(None, temp);
    match common.format {
        Format::Json => json(&provenance, "values", &values),
        Format::Csv => {
            let mut csv = Csv::new(&provenance);
            csv.row(&["quantity", "value", "unit"]);
            for v in &values {
                csv.row(&[v.quantity.to_string(), num(v.value), v.unit.to_string()]);
            }
            Ok(csv.text)
        }
    }
}

fn common_of(cmd: &Command) -> &Common {
    match cmd {
        Command::Op { common, .. }
        | Command::Sweep { common, .. }
        | Command::Tran { common, .. }
        | Command::Leakage { common, .. }
        | Command::Gate { common, .. }
        | Command::ModelEval { common, .. } => common,
    }
}

fn execute(config: &RunConfig) -> Result<(String, Option<(PathBuf, String)>), Failure> {
    let cmd = &config.command;
    if let Some(t) = common_of(cmd).temp {
        if !(t > 0.0) {
            return Err(usage(format!("--temp must be > 0 K, got {t}")));
        }
    }
    let body = match cmd {
        Command::Op { netlist, common } => op_command(netlist, common)?,
        Command::Sweep { netlist, source, start, stop, step, outer, common } => {
            sweep_command(netlist, source.as_deref(), *start, *stop, *step, outer.as_deref(), common)?
        }
        Command::Tran { netlist, dt, tstop, slew, common } => {
            tran_command(netlist, *dt, *tstop, slew.as_deref(), common)?
        }
        Command::Leakage { netlist, inputs, common } => leakage_command(netlist, inputs, common)?,
        Command::Gate { netlist, style, sleep_model, state, inputs, width, length, emit_netlist, common } => {
            return gate_command(
                netlist,
                *style,
                sleep_model,
                *state,
                inputs,
                *width,
                *length,
                emit_netlist.as_deref(),
                common,
            )
        }
        Command::ModelEval { .. } => model_eval(cmd)?,
    };
    Ok((body, None))
}

/// Run the tool with explicit streams; returns the exit status.
pub fn run_with_io<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = execute(&config).and_then(|(body, emitted)| {
        if let Some((path, text)) = emitted {
            std::fs::write(&path, text).map_err(|e| failed(format!("cannot write {}: {e}", path.display())))?;
        }
        match &common_of(&config.command).out {
            Some(path) => std::fs::write(path, body)
                .map_err(|e| failed(format!("cannot write {}: {e}", path.display()))),
            None => out.write_all(body.as_bytes()).map_err(failed),
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Run the tool against the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(argv, &mut stdout.lock(), &mut stderr.lock())
}
