//! DIMACS CNF extended with `x` lines for xor-constraints.
//!
//! ```text
//! c comment
//! p cnf 3 2
//! 1 -2 0
//! x 1 2 3 0
//! ```
//!
//! An xor line `x l1 ... lk 0` means `|l1| ⊕ ... ⊕ |lk| ≡ ⊤`, with the parity flipped once
//! for every negative literal. The header counts clauses and xor lines together.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::formula::{CnfXorFormula, Lit, XorConstraint};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_ascii_whitespace()
        .map(move |t| (t.as_ptr() as usize - line.as_ptr() as usize + 1, t))
}

pub fn parse_str(input: &str) -> Result<CnfXorFormula, ParseError> {
    parse(input.as_bytes())
}

pub fn parse<R: BufRead>(reader: R) -> Result<CnfXorFormula, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut f = CnfXorFormula::new(0);
    let mut count = 0;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let ln = i + 1;
        let mut toks = tokens(&line).peekable();
        let Some(&(col, first)) = toks.peek() else {
            continue;
        };
        if first.starts_with('c') {
            continue;
        }
        if first == "p" {
            if header.is_some() {
                return Err(syntax(ln, col, "duplicate header"));
            }
            toks.next();
            let mut field = |name: &str| -> Result<(usize, &str), ParseError> {
                toks.next().ok_or_else(|| syntax(ln, line.len() + 1, format!("header is missing {name}")))
            };
            let (c, fmt) = field("the format")?;
            if fmt != "cnf" {
                return Err(syntax(ln, c, format!("expected `cnf`, found `{fmt}`")));
            }
            let mut number = |name: &str| -> Result<usize, ParseError> {
                let (c, t) = field(name)?;
                t.parse().map_err(|_| syntax(ln, c, format!("invalid {name} `{t}`")))
            };
            let vars = number("variable count")?;
            let constraints = number("constraint count")?;
            if let Some((c, t)) = toks.next() {
                return Err(syntax(ln, c, format!("unexpected `{t}` after header")));
            }
            header = Some((vars, constraints, ln));
            f.num_vars = vars;
            continue;
        }
        let Some((num_vars, _, _)) = header else {
            return Err(syntax(ln, col, "constraint before the `p cnf` header"));
        };
        let is_xor = first.starts_with('x');
        let mut lits = Vec::new();
        let mut terminated = false;
        for (c, t) in toks {
            let (c, t) = match (is_xor, lits.is_empty() && !terminated && c == col) {
                (true, true) if t == "x" => continue,
                (true, true) => (c + 1, &t[1..]),
                _ => (c, t),
            };
            if terminated {
                return Err(syntax(ln, c, format!("unexpected `{t}` after terminating 0")));
            }
            let value: i64 = t.parse().map_err(|_| syntax(ln, c, format!("invalid literal `{t}`")))?;
            if value == 0 {
                terminated = true;
                continue;
            }
            if value.unsigned_abs() as usize > num_vars {
                return Err(syntax(ln, c, format!("variable {} exceeds the header's {num_vars}", value.abs())));
            }
            lits.push(Lit::from_dimacs(value));
        }
        if !terminated {
            return Err(syntax(ln, line.len() + 1, "missing terminating 0"));
        }
        count += 1;
        if is_xor {
            let parity = lits.iter().filter(|l| !l.is_positive()).count() % 2 == 0;
            f.add_xor(XorConstraint::new(lits.iter().map(|l| l.var()), parity));
        } else {
            f.add_clause(lits);
        }
    }
    match header {
        None => Err(syntax(1, 1, "missing `p cnf` header")),
        Some((_, declared, ln)) if declared != count => Err(syntax(
            ln,
            1,
            format!("header declares {declared} constraints, found {count}"),
        )),
        Some(_) => Ok(f),
    }
}

pub fn write<W: Write>(f: &CnfXorFormula, mut out: W) -> io::Result<()> {
    writeln!(out, "p cnf {} {}", f.num_vars, f.clauses.len() + f.xors.len())?;
    for c in &f.clauses {
        for l in c.lits() {
            write!(out, "{} ", l.to_dimacs())?;
        }
        writeln!(out, "0")?;
    }
    for x in &f.xors {
        write!(out, "x")?;
        for (k, v) in x.vars().iter().enumerate() {
            let sign = if k == 0 && !x.parity() { -1 } else { 1 };
            write!(out, " {}", sign * v.to_dimacs())?;
        }
        writeln!(out, " 0")?;
    }
    Ok(())
}

pub fn emit(f: &CnfXorFormula) -> String {
    let mut buf = Vec::new();
    write(f, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}
