use super::units::parse_value;
use super::{
    assemble, AnalysisDirective, DeviceInstance, DeviceKind, Diagnostic, DiagnosticKind,
    Element, Locations, Location, Netlist, NetlistError, SourceWave, SweepSpec, DEFAULT_TEMP_K,
};
use crate::devmodel::{EtaSpec, MosModelCard, Polarity};

#[derive(Debug, Clone)]
struct Token {
    text: String,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut start = 0;
    for (idx, c) in line.chars().enumerate() {
        let column = idx + 1;
        if c.is_whitespace() || matches!(c, '(' | ')' | '=' | ',') {
            if !current.is_empty() {
                tokens.push(Token { text: std::mem::take(&mut current), column: start });
            }
            if !c.is_whitespace() {
                tokens.push(Token { text: c.to_string(), column });
            }
        } else {
            if current.is_empty() {
                start = column;
            }
            current.push(c);
        }
    }
    if !current.is_empty() {
        tokens.push(Token { text: current, column: start });
    }
    tokens
}

struct LineError {
    kind: DiagnosticKind,
    column: usize,
    message: String,
}

type LineResult<T> = Result<T, LineError>;

fn syntax(column: usize, message: impl Into<String>) -> LineError {
    LineError { kind: DiagnosticKind::Syntax, column, message: message.into() }
}

fn value_of(tok: &Token) -> LineResult<f64> {
    parse_value(&tok.text).ok_or_else(|| LineError {
        kind: DiagnosticKind::InvalidValue,
        column: tok.column,
        message: format!("invalid number {:?}", tok.text),
    })
}

/// Cursor over one line's tokens.
struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
    line_len: usize,
}

impl<'a> Cursor<'a> {
    fn new(tokens: &'a [Token], line_len: usize) -> Self {
        Self { tokens, pos: 0, line_len }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self, what: &str) -> LineResult<&'a Token> {
        let tok = self
            .tokens
            .get(self.pos)
            .ok_or_else(|| syntax(self.line_len + 1, format!("expected {what}")))?;
        self.pos += 1;
        Ok(tok)
    }

    fn word(&mut self, what: &str) -> LineResult<&'a Token> {
        let tok = self.next(what)?;
        if matches!(tok.text.as_str(), "(" | ")" | "=" | ",") {
            return Err(syntax(tok.column, format!("expected {what}, found {:?}", tok.text)));
        }
        Ok(tok)
    }

    fn number(&mut self, what: &str) -> LineResult<f64> {
        value_of(self.word(what)?)
    }

    fn expect(&mut self, text: &str) -> LineResult<()> {
        let tok = self.next(&format!("'{text}'"))?;
        if tok.text != text {
            return Err(syntax(tok.column, format!("expected '{text}', found {:?}", tok.text)));
        }
        Ok(())
    }

    fn done(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn finish(&self) -> LineResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(tok) => Err(syntax(tok.column, format!("unexpected {:?}", tok.text))),
        }
    }

    /// `key = value` pairs until the end of the line. Parentheses are skipped.
    fn params(&mut self) -> LineResult<Vec<(&'a Token, &'a Token)>> {
        let mut out = Vec::new();
        while let Some(tok) = self.peek() {
            if tok.text == "(" || tok.text == ")" || tok.text == "," {
                self.pos += 1;
                continue;
            }
            let key = self.word("parameter name")?;
            self.expect("=")?;
            let value = self.word("parameter value")?;
            out.push((key, value));
        }
        Ok(out)
    }
}

enum Statement {
    Device(DeviceInstance),
    Model(MosModelCard),
    Directive(AnalysisDirective),
    End,
}

/// Parse netlist text into a validated [`Netlist`].
///
/// Every statement is checked; all problems are reported together, each with its line and
/// column. Never panics.
pub fn parse(text: &str) -> Result<Netlist, NetlistError> {
    let mut lines = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l));
    let title = match lines.next() {
        Some(t) if !(text.is_empty()) => t.trim().to_string(),
        _ => {
            return Err(NetlistError {
                diagnostics: vec![Diagnostic {
                    kind: DiagnosticKind::Syntax,
                    location: Some(Location { line: 1, column: 1 }),
                    message: "empty netlist".into(),
                }],
            })
        }
    };

    let mut devices = Vec::new();
    let mut models = Vec::new();
    let mut directives = Vec::new();
    let mut locs = Locations::default();
    let mut diagnostics = Vec::new();
    let mut last_line = 1;

    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        last_line = line_no;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('*') {
            continue;
        }
        let tokens = tokenize(line);
        let first_col = tokens.first().map_or(1, |t| t.column);
        let loc = Location { line: line_no, column: first_col };
        match statement(&tokens, line.chars().count()) {
            Ok(Statement::Device(d)) => {
                devices.push(d);
                locs.devices.push(loc);
            }
            Ok(Statement::Model(m)) => {
                models.push(m);
                locs.models.push(loc);
            }
            Ok(Statement::Directive(d)) => {
                directives.push(d);
                locs.directives.push(loc);
            }
            Ok(Statement::End) => {
                locs.end = Some(loc);
                break;
            }
            Err(e) => diagnostics.push(Diagnostic {
                kind: e.kind,
                location: Some(Location { line: line_no, column: e.column }),
                message: e.message,
            }),
        }
    }
    if locs.end.is_none() {
        locs.end = Some(Location { line: last_line, column: 1 });
    }

    match assemble(title, devices, models, directives, &locs) {
        Ok(netlist) if diagnostics.is_empty() => Ok(netlist),
        Ok(_) => Err(NetlistError { diagnostics }),
        Err(e) => {
            diagnostics.extend(e.diagnostics);
            diagnostics.sort_by_key(|d| d.location.map(|l| (l.line, l.column)));
            Err(NetlistError { diagnostics })
        }
    }
}

fn sweep_spec(cur: &mut Cursor) -> LineResult<SweepSpec> {
    let source = cur.word("sweep source")?.text.clone();
    let start = cur.number("sweep start")?;
    let stop = cur.number("sweep stop")?;
    let step = cur.number("sweep step")?;
    Ok(SweepSpec { source, start, stop, step })
}

fn statement(tokens: &[Token], line_len: usize) -> LineResult<Statement> {
    let mut cur = Cursor::new(tokens, line_len);
    let head = cur.word("statement")?;
    if let Some(directive) = head.text.strip_prefix('.') {
        return match directive.to_ascii_lowercase().as_str() {
            "model" => model_card(&mut cur).map(Statement::Model),
            "op" => {
                let temp_k = temperature(&mut cur)?;
                Ok(Statement::Directive(AnalysisDirective::Op { temp_k }))
            }
            "dc" => {
                let sweep = sweep_spec(&mut cur)?;
                let outer = match cur.peek() {
                    Some(t) if !t.text.eq_ignore_ascii_case("temp") => Some(sweep_spec(&mut cur)?),
                    _ => None,
                };
                let temp_k = temperature(&mut cur)?;
                Ok(Statement::Directive(AnalysisDirective::Dc { sweep, outer, temp_k }))
            }
            "tran" => {
                let dt = cur.number("time step")?;
                let tstop = cur.number("stop time")?;
                let temp_k = temperature(&mut cur)?;
                Ok(Statement::Directive(AnalysisDirective::Tran { dt, tstop, temp_k }))
            }
            "end" => Ok(Statement::End),
            _ => Err(syntax(head.column, format!("unknown directive {}", head.text))),
        };
    }
    if head.text.starts_with('+') {
        return Err(syntax(head.column, "continuation lines are not supported"));
    }

    let kind = head
        .text
        .chars()
        .next()
        .and_then(DeviceKind::from_prefix)
        .ok_or_else(|| syntax(head.column, format!("unknown element {}", head.text)))?;
    let name = head.text.clone();
    let mut nodes = Vec::with_capacity(kind.terminal_count());
    for _ in 0..kind.terminal_count() {
        nodes.push(cur.word("node")?.text.clone());
    }
    let element = match kind {
        DeviceKind::Mosfet => {
            let model = cur.word("model name")?.text.clone();
            let (mut w, mut l) = (None, None);
            for (key, value) in cur.params()? {
                match key.text.to_ascii_lowercase().as_str() {
                    "w" => w = Some(value_of(value)?),
                    "l" => l = Some(value_of(value)?),
                    _ => return Err(syntax(key.column, format!("unknown MOSFET parameter {}", key.text))),
                }
            }
            let w = w.ok_or_else(|| syntax(line_len + 1, "missing W="))?;
            let l = l.ok_or_else(|| syntax(line_len + 1, "missing L="))?;
            Element::Mosfet { model, w, l }
        }
        DeviceKind::Resistor => {
            let ohms = cur.number("resistance")?;
            cur.finish()?;
            Element::Resistor { ohms }
        }
        DeviceKind::Capacitor => {
            let farads = cur.number("capacitance")?;
            cur.finish()?;
            Element::Capacitor { farads }
        }
        DeviceKind::VSource | DeviceKind::ISource => {
            let wave = source_wave(&mut cur)?;
            if kind == DeviceKind::VSource {
                Element::VSource { wave }
            } else {
                Element::ISource { wave }
            }
        }
    };
    Ok(Statement::Device(DeviceInstance { name, nodes, element }))
}

fn source_wave(cur: &mut Cursor<'_>) -> LineResult<SourceWave> {
    let tok = cur.word("source value")?;
    let lower = tok.text.to_ascii_lowercase();
    if lower == "dc" {
        let value = cur.number("DC value")?;
        cur.finish()?;
        return Ok(SourceWave::dc(value));
    }
    if lower == "pwl" {
        cur.expect("(")?;
        let mut values = Vec::new();
        loop {
            let t = cur.next("')'")?;
            match t.text.as_str() {
                ")" => break,
                "," => continue,
                _ => values.push((value_of(t)?, t.column)),
            }
        }
        cur.finish()?;
        if values.is_empty() || values.len() % 2 != 0 {
            return Err(syntax(tok.column, "PWL needs time/value pairs"));
        }
        let points = values.chunks(2).map(|p| (p[0].0, p[1].0)).collect();
        return Ok(SourceWave::Pwl { points });
    }
    let value = value_of(tok)?;
    cur.finish()?;
    Ok(SourceWave::dc(value))
}

fn temperature(cur: &mut Cursor<'_>) -> LineResult<f64> {
    let mut temp = DEFAULT_TEMP_K;
    for (key, value) in cur.params()? {
        if key.text.eq_ignore_ascii_case("temp") {
            temp = value_of(value)?;
        } else {
            return Err(syntax(key.column, format!("unknown option {}", key.text)));
        }
    }
    Ok(temp)
}

fn model_card(cur: &mut Cursor<'_>) -> LineResult<MosModelCard> {
    let name = cur.word("model name")?.text.clone();
    let kind = cur.word("NMOS or PMOS")?;
    let polarity = match kind.text.to_ascii_lowercase().as_str() {
        "nmos" => Polarity::Nmos,
        "pmos" => Polarity::Pmos,
        _ => return Err(syntax(kind.column, format!("expected NMOS or PMOS, found {}", kind.text))),
    };
    let mut card = MosModelCard::new(name, polarity, 0.0);
    let mut have_vth0 = false;
    for (key, value) in cur.params()? {
        let key_lower = key.text.to_ascii_lowercase();
        if key_lower == "eta" {
            card.eta = if value.text.eq_ignore_ascii_case("derived") {
                EtaSpec::Derived
            } else {
                EtaSpec::Given(value_of(value)?)
            };
            continue;
        }
        let v = value_of(value)?;
        match key_lower.as_str() {
            "vth0" => {
                card.vth0 = v;
                have_vth0 = true;
            }
            "tox" => card.tox = v,
            "wdm" => card.wdm = v,
            "u0cox" => card.u0cox = v,
            "kp" => card.kp = v,
            "lambda" => card.lambda = v,
            "sigma" => card.sigma_dibl = v,
            "is" => card.is_junction = v,
            _ => return Err(syntax(key.column, format!("unknown model parameter {}", key.text))),
        }
    }
    if !have_vth0 {
        return Err(syntax(cur.line_len + 1, "missing vth0="));
    }
    debug_assert!(cur.done());
    Ok(card)
}
