// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! OpenQASM 2.0 subset reader and writer.

use std::f64::consts::PI;
use std::fmt::Write as _;

use super::{Circuit, Gate, GateKind};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum QasmError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("unsupported gate `{0}`")]
    UnsupportedGate(String),
}

fn perr(line: usize, reason: impl Into<String>) -> QasmError {
    QasmError::Parse {
        line,
        reason: reason.into(),
    }
}

/// Parse an OpenQASM 2.0 program into a [`Circuit`].
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let mut p = Program::default();
    for (line, stmt) in statements(text) {
        p.statement(line, &stmt)?;
    }
    let mut c = Circuit::new(p.qreg.map_or(0, |(_, n)| n), p.num_clbits);
    for g in p.gates {
        c.push_unchecked(g);
    }
    Ok(c)
}

/// Split into `;`-terminated statements with the 1-based line each one starts on.
fn statements(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split("//").next().unwrap_or("");
        for ch in line.chars() {
            if cur.trim().is_empty() && !ch.is_whitespace() {
                start = i + 1;
            }
            if ch == ';' {
                out.push((start, cur.trim().to_string()));
                cur.clear();
            } else {
                cur.push(ch);
            }
        }
        cur.push(' ');
    }
    if !cur.trim().is_empty() {
        out.push((start, cur.trim().to_string()));
    }
    out
}

#[derive(Default)]
struct Program {
    qreg: Option<(String, usize)>,
    cregs: Vec<(String, usize, usize)>,
    num_clbits: usize,
    gates: Vec<Gate>,
}

enum Arg {
    One(usize),
    All(usize),
}

impl Program {
    fn statement(&mut self, line: usize, s: &str) -> Result<(), QasmError> {
        if s.is_empty() {
            return Ok(());
        }
        let (head, rest) = split_head(s);
        match head {
            "OPENQASM" => {
                if rest.trim() != "2.0" {
                    return Err(perr(line, format!("unsupported version {}", rest.trim())));
                }
                Ok(())
            }
            "include" => Ok(()),
            "qreg" => {
                let (name, n) = parse_decl(line, rest)?;
                if self.qreg.is_some() {
                    return Err(perr(line, "only one quantum register is supported"));
                }
                self.qreg = Some((name, n));
                Ok(())
            }
            "creg" => {
                let (name, n) = parse_decl(line, rest)?;
                self.cregs.push((name, self.num_clbits, n));
                self.num_clbits += n;
                Ok(())
            }
            "gate" | "opaque" | "if" | "reset" => {
                Err(perr(line, format!("`{head}` is not supported")))
            }
            "measure" => self.measure(line, rest),
            "barrier" => {
                let mut qs = Vec::new();
                for a in split_args(rest) {
                    match self.qarg(line, a)? {
                        Arg::One(q) => qs.push(q),
                        Arg::All(n) => qs.extend(0..n),
                    }
                }
                qs.dedup();
                self.gates.push(Gate::barrier(&qs));
                Ok(())
            }
            _ => self.gate(line, s),
        }
    }

    fn measure(&mut self, line: usize, rest: &str) -> Result<(), QasmError> {
        let (q, cb) = rest
            .split_once("->")
            .ok_or_else(|| perr(line, "measure needs `->`"))?;
        let q = self.qarg(line, q.trim())?;
        let (cname, cidx) = parse_ref(line, cb.trim())?;
        let &(_, off, size) = self
            .cregs
            .iter()
            .find(|(n, _, _)| *n == cname)
            .ok_or_else(|| perr(line, format!("unknown creg `{cname}`")))?;
        match (q, cidx) {
            (Arg::One(q), Some(i)) if i < size => self.gates.push(Gate::measure(q, off + i)),
            (Arg::All(n), None) if n == size => {
                for i in 0..n {
                    self.gates.push(Gate::measure(i, off + i));
                }
            }
            _ => return Err(perr(line, "measure operands do not match")),
        }
        Ok(())
    }

    fn qarg(&self, line: usize, a: &str) -> Result<Arg, QasmError> {
        let (name, idx) = parse_ref(line, a)?;
        let (qname, n) = self
            .qreg
            .as_ref()
            .ok_or_else(|| perr(line, "gate before qreg declaration"))?;
        if &name != qname {
            return Err(perr(line, format!("unknown qreg `{name}`")));
        }
        match idx {
            Some(i) if i < *n => Ok(Arg::One(i)),
            Some(i) => Err(perr(line, format!("index {i} out of range for {name}[{n}]"))),
            None => Ok(Arg::All(*n)),
        }
    }

    fn gate(&mut self, line: usize, s: &str) -> Result<(), QasmError> {
        // name[(params)] args
        let name_end = s
            .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
            .unwrap_or(s.len());
        let name = &s[..name_end];
        let mut rest = s[name_end..].trim_start();
        let mut params = Vec::new();
        if rest.starts_with('(') {
            let close = matching_paren(rest).ok_or_else(|| perr(line, "unbalanced parentheses"))?;
            for e in split_args(&rest[1..close]) {
                params.push(eval(e).map_err(|r| perr(line, r))?);
            }
            rest = rest[close + 1..].trim_start();
        }
        let args = split_args(rest)
            .into_iter()
            .map(|a| self.qarg(line, a))
            .collect::<Result<Vec<_>, _>>()?;
        let want_params = |k: usize| -> Result<(), QasmError> {
            if params.len() != k {
                Err(perr(
                    line,
                    format!("{name} expects {k} parameter(s), got {}", params.len()),
                ))
            } else {
                Ok(())
            }
        };
        let arity = match name {
            "ccx" => 3,
            "cx" | "CX" | "cy" | "cz" | "crx" | "swap" | "cu1" => 2,
            "id" | "x" | "sx" | "rz" | "h" | "y" | "z" | "u3" | "u2" | "u1" | "u" | "U" | "s"
            | "sdg" | "t" | "tdg" | "sxdg" | "rx" | "ry" | "p" => 1,
            _ => return Err(QasmError::UnsupportedGate(name.to_string())),
        };
        match name {
            "rz" | "u1" | "crx" | "cu1" | "rx" | "ry" | "p" => want_params(1)?,
            "u2" => want_params(2)?,
            "u3" | "u" | "U" => want_params(3)?,
            _ => want_params(0)?,
        }
        if args.len() != arity {
            return Err(perr(
                line,
                format!("{name} expects {arity} qubit(s), got {}", args.len()),
            ));
        }
        // broadcast register arguments
        let width = args.iter().find_map(|a| match a {
            Arg::All(n) => Some(*n),
            Arg::One(_) => None,
        });
        let reps = width.unwrap_or(1);
        for r in 0..reps {
            let qs: Vec<usize> = args
                .iter()
                .map(|a| match a {
                    Arg::One(q) => *q,
                    Arg::All(_) => r,
                })
                .collect();
            for (i, q) in qs.iter().enumerate() {
                if qs[..i].contains(q) {
                    return Err(perr(line, format!("repeated qubit {q}")));
                }
            }
            self.emit(name, &params, &qs);
        }
        Ok(())
    }

    fn emit(&mut self, name: &str, p: &[f64], q: &[usize]) {
        let g = &mut self.gates;
        match name {
            "id" => g.push(Gate::one(GateKind::Id, q[0])),
            "x" => g.push(Gate::x(q[0])),
            "y" => g.push(Gate::one(GateKind::Y, q[0])),
            "z" => g.push(Gate::one(GateKind::Z, q[0])),
            "h" => g.push(Gate::h(q[0])),
            "sx" => g.push(Gate::one(GateKind::SX, q[0])),
            "sxdg" => g.push(Gate::u3(-PI / 2.0, -PI / 2.0, PI / 2.0, q[0])),
            "rz" => g.push(Gate::rz(p[0], q[0])),
            "rx" => g.push(Gate::u3(p[0], -PI / 2.0, PI / 2.0, q[0])),
            "ry" => g.push(Gate::u3(p[0], 0.0, 0.0, q[0])),
            "u1" | "p" => g.push(Gate::u3(0.0, 0.0, p[0], q[0])),
            "s" => g.push(Gate::u3(0.0, 0.0, PI / 2.0, q[0])),
            "sdg" => g.push(Gate::u3(0.0, 0.0, -PI / 2.0, q[0])),
            "t" => g.push(Gate::u3(0.0, 0.0, PI / 4.0, q[0])),
            "tdg" => g.push(Gate::u3(0.0, 0.0, -PI / 4.0, q[0])),
            "u2" => g.push(Gate::u3(PI / 2.0, p[0], p[1], q[0])),
            "u3" | "u" | "U" => g.push(Gate::u3(p[0], p[1], p[2], q[0])),
            "cx" | "CX" => g.push(Gate::cx(q[0], q[1])),
            "cy" => g.push(Gate::two(GateKind::CY, q[0], q[1])),
            "cz" => g.push(Gate::two(GateKind::CZ, q[0], q[1])),
            "swap" => g.push(Gate::swap(q[0], q[1])),
            "crx" => g.push(Gate::crx(p[0], q[0], q[1])),
            "cu1" => {
                let (a, b, l) = (q[0], q[1], p[0]);
                g.push(Gate::u3(0.0, 0.0, l / 2.0, a));
                g.push(Gate::cx(a, b));
                g.push(Gate::u3(0.0, 0.0, -l / 2.0, b));
                g.push(Gate::cx(a, b));
                g.push(Gate::u3(0.0, 0.0, l / 2.0, b));
            }
            "ccx" => g.extend(toffoli(q[0], q[1], q[2])),
            _ => unreachable!("arity table and emitter disagree on {name}"),
        }
    }
}

/// Standard 6-CX Toffoli with controls `a`, `b` and target `t`.
pub fn toffoli(a: usize, b: usize, t: usize) -> Vec<Gate> {
    let tg = |q| Gate::u3(0.0, 0.0, PI / 4.0, q);
    let tdg = |q| Gate::u3(0.0, 0.0, -PI / 4.0, q);
    vec![
        Gate::h(t),
        Gate::cx(b, t),
        tdg(t),
        Gate::cx(a, t),
        tg(t),
        Gate::cx(b, t),
        tdg(t),
        Gate::cx(a, t),
        tg(b),
        tg(t),
        Gate::h(t),
        Gate::cx(a, b),
        tg(a),
        tdg(b),
        Gate::cx(a, b),
    ]
}

fn split_head(s: &str) -> (&str, &str) {
    match s.find(|ch: char| ch.is_whitespace() || ch == '(') {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    }
}

fn parse_decl(line: usize, rest: &str) -> Result<(String, usize), QasmError> {
    match parse_ref(line, rest.trim())? {
        (name, Some(n)) if n > 0 => Ok((name, n)),
        _ => Err(perr(line, "register declaration needs a positive size")),
    }
}

fn parse_ref(line: usize, a: &str) -> Result<(String, Option<usize>), QasmError> {
    let a = a.trim();
    match a.split_once('[') {
        None => {
            if a.is_empty() || !a.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_') {
                return Err(perr(line, format!("bad operand `{a}`")));
            }
            Ok((a.to_string(), None))
        }
        Some((name, idx)) => {
            let idx = idx
                .strip_suffix(']')
                .ok_or_else(|| perr(line, format!("bad operand `{a}`")))?;
            let i = idx
                .trim()
                .parse()
                .map_err(|_| perr(line, format!("bad index `{idx}`")))?;
            Ok((name.trim().to_string(), Some(i)))
        }
    }
}

fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = s[start..].trim();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    out
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Evaluate a real-valued parameter expression.
pub fn eval(expr: &str) -> Result<f64, String> {
    let toks = lex(expr)?;
    let mut p = ExprParser { toks, pos: 0 };
    let v = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input in `{expr}`"));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let ch = b[i] as char;
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let st = i;
            while i < b.len() && ((b[i] as char).is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                i += 1;
                if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
                    i += 1;
                }
                while i < b.len() && (b[i] as char).is_ascii_digit() {
                    i += 1;
                }
            }
            let v = s[st..i]
                .parse()
                .map_err(|_| format!("bad number `{}`", &s[st..i]))?;
            out.push(Tok::Num(v));
        } else if ch.is_ascii_alphabetic() {
            let st = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Ident(s[st..i].to_string()));
        } else if "+-*/^()".contains(ch) {
            out.push(Tok::Op(ch));
            i += 1;
        } else {
            return Err(format!("unexpected `{ch}` in expression"));
        }
    }
    Ok(out)
}

struct ExprParser {
    toks: Vec<Tok>,
    pos: usize,
}

impl ExprParser {
    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn sum(&mut self) -> Result<f64, String> {
        let mut v = self.product()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let r = self.product()?;
            v = if op == '+' { v + r } else { v - r };
        }
        Ok(v)
    }

    fn product(&mut self) -> Result<f64, String> {
        let mut v = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let r = self.unary()?;
            v = if op == '*' { v * r } else { v / r };
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<f64, String> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<f64, String> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let e = self.unary()?;
            return Ok(base.powf(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<f64, String> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or("unexpected end of expression")?;
        self.pos += 1;
        match t {
            Tok::Num(v) => Ok(v),
            Tok::Op('(') => {
                let v = self.sum()?;
                if self.peek_op() != Some(')') {
                    return Err("missing `)`".into());
                }
                self.pos += 1;
                Ok(v)
            }
            Tok::Ident(name) if name == "pi" => Ok(PI),
            Tok::Ident(name) => {
                let f: fn(f64) -> f64 = match name.as_str() {
                    "sin" => f64::sin,
                    "cos" => f64::cos,
                    "tan" => f64::tan,
                    "exp" => f64::exp,
                    "ln" => f64::ln,
                    "sqrt" => f64::sqrt,
                    _ => return Err(format!("unknown identifier `{name}`")),
                };
                if self.peek_op() != Some('(') {
                    return Err(format!("`{name}` needs an argument"));
                }
                Ok(f(self.atom()?))
            }
            Tok::Op(c) => Err(format!("unexpected `{c}`")),
        }
    }
}

/// Serialize to OpenQASM 2.0. Angles are written with round-trip precision.
pub fn to_qasm(c: &Circuit) -> String {
    let mut s = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(s, "qreg q[{}];", c.num_qubits.max(1));
    if c.num_clbits > 0 {
        let _ = writeln!(s, "creg c[{}];", c.num_clbits);
    }
    for g in c.gates() {
        let _ = writeln!(s, "{g};");
    }
    s
}
