use std::fmt::Write as _;

use super::{Circuit, Gate, GateKind, Register};
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn kind_from(name: &str, angle: Option<f64>) -> Option<GateKind> {
    Some(match (name, angle) {
        ("H", None) => GateKind::H,
        ("X", None) => GateKind::X,
        ("S", None) => GateKind::S,
        ("SDG", None) => GateKind::Sdg,
        ("RZ", Some(a)) => GateKind::Rz(a),
        ("RY", Some(a)) => GateKind::Ry(a),
        ("P", Some(a)) => GateKind::Phase(a),
        ("CX", None) => GateKind::CX,
        ("CSWAP", None) => GateKind::CSwap,
        ("MEASURE", None) => GateKind::Measure,
        ("RESET", None) => GateKind::Reset,
        ("BARRIER", None) => GateKind::Barrier,
        _ => return None,
    })
}

impl Circuit {
    /// Line-oriented text form: header lines, then one gate per line as
    /// `NAME q... [angle] [-> cbit]`; a `C-` prefix puts the extra control first.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "QUBITS {}", self.n_qubits).unwrap();
        writeln!(s, "CBITS {}", self.n_cbits).unwrap();
        for r in &self.qregs {
            writeln!(s, "QREG {} {} {}", r.name, r.start, r.len).unwrap();
        }
        for r in &self.cregs {
            writeln!(s, "CREG {} {} {}", r.name, r.start, r.len).unwrap();
        }
        for g in &self.gates {
            if g.control.is_some() {
                s.push_str("C-");
            }
            s.push_str(g.kind.name());
            for q in g.support() {
                write!(s, " {q}").unwrap();
            }
            if let Some(a) = g.kind.angle() {
                write!(s, " {a:?}").unwrap();
            }
            if let Some(c) = g.cbit {
                write!(s, " -> {c}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut c = Circuit::default();
        let mut declared = (None, None);
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (body, cbit) = match line.split_once("->") {
                Some((b, t)) => (
                    b.trim(),
                    Some(
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| parse_err(ln, "bad cbit"))?,
                    ),
                ),
                None => (line, None),
            };
            let mut toks = body.split_whitespace();
            let head = toks.next().expect("non-empty line");
            let rest: Vec<&str> = toks.collect();
            let num = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| parse_err(ln, format!("bad integer {t:?}")))
            };
            match head {
                "QUBITS" | "CBITS" => {
                    let [v] = rest[..] else {
                        return Err(parse_err(ln, "expected one count"));
                    };
                    let v = num(v)?;
                    if head == "QUBITS" {
                        c.n_qubits = v;
                        declared.0 = Some(v);
                    } else {
                        c.n_cbits = v;
                        declared.1 = Some(v);
                    }
                    continue;
                }
                "QREG" | "CREG" => {
                    let [name, start, len] = rest[..] else {
                        return Err(parse_err(ln, "expected name start len"));
                    };
                    let r = Register {
                        name: name.to_string(),
                        start: num(start)?,
                        len: num(len)?,
                    };
                    let bound = if head == "QREG" {
                        c.n_qubits
                    } else {
                        c.n_cbits
                    };
                    if r.start + r.len > bound {
                        return Err(parse_err(ln, format!("register {} out of bounds", r.name)));
                    }
                    if head == "QREG" {
                        c.qregs.push(r);
                    } else {
                        c.cregs.push(r);
                    }
                    continue;
                }
                _ => {}
            }
            if declared.0.is_none() {
                return Err(parse_err(ln, "gate before QUBITS header"));
            }
            let (controlled, name) = match head.strip_prefix("C-") {
                Some(n) => (true, n),
                None => (false, head),
            };
            let has_angle = matches!(name, "RZ" | "RY" | "P");
            let (qtoks, angle) = if has_angle {
                let (a, q) = rest
                    .split_last()
                    .ok_or_else(|| parse_err(ln, "missing angle"))?;
                let a: f64 = a
                    .parse()
                    .map_err(|_| parse_err(ln, format!("bad angle {a:?}")))?;
                (q, Some(a))
            } else {
                (&rest[..], None)
            };
            let kind = kind_from(name, angle)
                .ok_or_else(|| parse_err(ln, format!("unknown gate {head:?}")))?;
            let mut qubits = qtoks.iter().map(|t| num(t)).collect::<Result<Vec<_>>>()?;
            let control = if controlled {
                if qubits.is_empty() {
                    return Err(parse_err(ln, "missing control"));
                }
                Some(qubits.remove(0))
            } else {
                None
            };
            let gate = Gate {
                kind,
                qubits,
                control,
                cbit,
            };
            c.try_push(gate).map_err(|e| parse_err(ln, e.to_string()))?;
        }
        Ok(c)
    }
}
