//! Line-oriented circuit files.
//!
//! ```text
//! # Bell pair
//! qubits 2
//! h 1
//! cx 1,0
//! u 0 controls: 1 params: 1.5707963267948966,0,3.141592653589793
//! ```
//!
//! The first non-comment line is the header `qubits N`. Each following line
//! is `name targets [controls: c1,c2,...] [params: a,b,...]`. Parameters are
//! written with Rust's shortest round-trip float formatting, so
//! `parse(&render(c))` reproduces `c` exactly.

use crate::error::{Error, Result};
use crate::gates::GateKind;

use super::{Circuit, GateApplication};

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// One gate as a file line, without a trailing newline.
pub fn render_step(g: &GateApplication) -> String {
    let mut line = format!("{} {}", g.kind.name(), join(&g.targets));
    if !g.controls.is_empty() {
        line.push_str(" controls: ");
        line.push_str(&join(&g.controls));
    }
    let params = g.kind.params();
    if !params.is_empty() {
        line.push_str(" params: ");
        line.push_str(&join(&params));
    }
    line
}

pub fn render(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.num_qubits());
    for g in c.steps() {
        out.push_str(&render_step(g));
        out.push('\n');
    }
    out
}

/// A comma-separated field with its starting column (1-based).
struct Field<'a> {
    text: &'a str,
    column: usize,
}

impl Field<'_> {
    fn items(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        let mut offset = 0;
        self.text.split(',').map(move |raw| {
            let lead = raw.len() - raw.trim_start().len();
            let col = self.column + offset + lead;
            offset += raw.len() + 1;
            (raw.trim(), col)
        })
    }

    fn parse_list<T: std::str::FromStr>(&self, line: usize, what: &str) -> Result<Vec<T>> {
        if self.text.trim().is_empty() {
            return Err(Error::parse(line, self.column, format!("missing {what}")));
        }
        self.items()
            .map(|(s, col)| {
                s.parse()
                    .map_err(|_| Error::parse(line, col, format!("bad {what} `{s}`")))
            })
            .collect()
    }
}

fn parse_gate(line_no: usize, line: &str, num_qubits: usize) -> Result<GateApplication> {
    let name_end = line.find(char::is_whitespace).unwrap_or(line.len());
    let name = &line[..name_end];

    // split the remainder at the `controls:` and `params:` keywords
    let rest = &line[name_end..];
    let mut cuts: Vec<(usize, &str)> = ["controls:", "params:"]
        .iter()
        .filter_map(|k| rest.find(k).map(|i| (i, *k)))
        .collect();
    cuts.sort();
    let field = |start: usize, end: usize| Field {
        text: &rest[start..end],
        column: name_end + start + 1,
    };
    let targets_end = cuts.first().map_or(rest.len(), |c| c.0);
    let targets = field(0, targets_end);
    let mut controls = None;
    let mut params = None;
    for (n, &(at, key)) in cuts.iter().enumerate() {
        let end = cuts.get(n + 1).map_or(rest.len(), |c| c.0);
        let f = field(at + key.len(), end);
        if key == "controls:" {
            controls = Some(f);
        } else {
            params = Some(f);
        }
    }

    let target_list: Vec<usize> = targets.parse_list(line_no, "qubit index")?;
    let control_list: Vec<usize> = match &controls {
        Some(f) => f.parse_list(line_no, "qubit index")?,
        None => Vec::new(),
    };
    for f in std::iter::once(&targets).chain(&controls) {
        for (s, col) in f.items() {
            if s.parse::<usize>().is_ok_and(|q| q >= num_qubits) {
                return Err(Error::parse(
                    line_no,
                    col,
                    format!("qubit {s} out of range for {num_qubits} qubits"),
                ));
            }
        }
    }
    let param_list: Vec<f64> = match &params {
        Some(f) => f.parse_list(line_no, "parameter")?,
        None => Vec::new(),
    };
    let kind = GateKind::from_name(name, target_list.len(), &param_list)
        .map_err(|e| Error::parse(line_no, 1, e.to_string()))?;
    GateApplication::controlled(kind, target_list, control_list)
        .map_err(|e| Error::parse(line_no, targets.column, e.to_string()))
}

pub fn parse(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let content = raw.split('#').next().unwrap_or("");
        let indent = content.len() - content.trim_start().len();
        let line = content.trim();
        if line.is_empty() {
            continue;
        }
        match &mut circuit {
            None => {
                let mut words = line.split_whitespace();
                if words.next() != Some("qubits") {
                    return Err(Error::parse(line_no, indent + 1, "expected header `qubits N`"));
                }
                let q = words
                    .next()
                    .and_then(|w| w.parse::<usize>().ok())
                    .filter(|_| words.next().is_none())
                    .ok_or_else(|| Error::parse(line_no, indent + 8, "expected qubit count"))?;
                circuit = Some(Circuit::new(q));
            }
            Some(c) => {
                let g = parse_gate(line_no, line, c.num_qubits()).map_err(|e| shift_column(e, indent))?;
                let col = indent + 1;
                c.push(g)
                    .map_err(|e| Error::parse(line_no, col, e.to_string()))?;
            }
        }
    }
    circuit.ok_or_else(|| Error::parse(1, 1, "missing header `qubits N`"))
}

fn shift_column(e: Error, by: usize) -> Error {
    match e {
        Error::Parse {
            line,
            column,
            message,
        } => Error::Parse {
            line,
            column: column + by,
            message,
        },
        other => other,
    }
}
