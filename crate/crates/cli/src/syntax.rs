//! Line-oriented input formats.
//!
//! Equation systems (`.ceq`):
//!
//! ```text
//! signature sigma:2
//! params y
//! eq x1 = sigma(x1, x2)
//! eq x2 = y
//! root x1
//! ```
//!
//! Presentations use `signature` and `axiom <term> = <term>` lines; finite
//! algebras use `signature`, `carrier a b c` and one `table f: a b -> c` row
//! per argument tuple. `#` starts a comment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use corec::presentation::Axiom;
use corec::{is_reserved, Atom, EquationSystem, Error, FiniteAlgebra, FlatTerm, Presentation, Rhs, Signature};
use thiserror::Error as ThisError;

#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Anything wrong with an input file.
#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum InputError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("line {line}: {error}")]
    Invalid { line: usize, error: Error },
}

impl InputError {
    /// The engine error behind a semantic failure.
    pub fn engine_error(&self) -> Option<&Error> {
        match self {
            InputError::Invalid { error, .. } => Some(error),
            InputError::Parse(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    LParen,
    RParen,
    Comma,
    Eq,
    Colon,
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(n) => write!(f, "`{n}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Arrow => f.write_str("`->`"),
        }
    }
}

/// Tokens of one line with their 1-based columns.
struct Line {
    number: usize,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

fn tokenize(number: usize, text: &str) -> Line {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            '(' | ')' | ',' | '=' | ':' => {
                toks.push((
                    match c {
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        ',' => Tok::Comma,
                        '=' => Tok::Eq,
                        _ => Tok::Colon,
                    },
                    col,
                ));
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                toks.push((Tok::Arrow, col));
                i += 2;
            }
            _ => {
                let start = i;
                while i < chars.len() && !chars[i].is_whitespace() && !"(),=:#".contains(chars[i]) {
                    if chars[i] == '-' && chars.get(i + 1) == Some(&'>') {
                        break;
                    }
                    i += 1;
                }
                toks.push((Tok::Name(chars[start..i].iter().collect()), col));
            }
        }
    }
    Line {
        number,
        toks,
        pos: 0,
        end: chars.len() + 1,
    }
}

impl Line {
    fn is_empty(&self) -> bool {
        self.toks.is_empty()
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.number,
            column: self.col(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn name(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        match self.toks.get(self.pos) {
            Some((Tok::Name(n), c)) => {
                let out = (n.clone(), *c);
                self.pos += 1;
                Ok(out)
            }
            Some((t, _)) => Err(self.error(format!("expected {what}, found {t}"))),
            None => Err(self.error(format!("expected {what}, found end of line"))),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error(format!("expected {tok}, found {t}"))),
            None => Err(self.error(format!("expected {tok}, found end of line"))),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.error(format!("unexpected {t}"))),
        }
    }

    fn names_to_end(&mut self, what: &str) -> Result<Vec<(String, usize)>, ParseError> {
        let mut out = Vec::new();
        while !self.at_end() {
            out.push(self.name(what)?);
        }
        Ok(out)
    }
}

fn lines(text: &str) -> impl Iterator<Item = Line> + '_ {
    text.lines()
        .enumerate()
        .map(|(i, l)| tokenize(i + 1, l))
        .filter(|l| !l.is_empty())
}

fn invalid(line: usize, error: Error) -> InputError {
    InputError::Invalid { line, error }
}

/// `name:arity` pairs after the keyword.
fn parse_signature_items(line: &mut Line) -> Result<Signature, InputError> {
    let mut symbols = Vec::new();
    while !line.at_end() {
        let (name, _) = line.name("a symbol name")?;
        line.expect(Tok::Colon)?;
        let col = line.col();
        let (arity, _) = line.name("an arity")?;
        let arity: usize = arity.parse().map_err(|_| ParseError {
            line: line.number,
            column: col,
            message: format!("arity `{arity}` is not a natural number"),
        })?;
        symbols.push((name, arity));
    }
    Signature::new(symbols).map_err(|e| invalid(line.number, e))
}

/// `head(a, b, …)` with the argument names and their columns.
struct RawTerm {
    head: String,
    args: Vec<(String, usize)>,
}

fn parse_raw_term(line: &mut Line) -> Result<RawTerm, ParseError> {
    let (head, _) = line.name("a symbol")?;
    line.expect(Tok::LParen)?;
    let mut args = Vec::new();
    if line.peek() == Some(&Tok::RParen) {
        line.pos += 1;
        return Ok(RawTerm { head, args });
    }
    loop {
        args.push(line.name("an argument")?);
        match line.peek() {
            Some(Tok::Comma) => line.pos += 1,
            Some(Tok::RParen) => {
                line.pos += 1;
                return Ok(RawTerm { head, args });
            }
            _ => return Err(line.error("expected `,` or `)`")),
        }
    }
}

fn check_term(sig: &Signature, t: &RawTerm, line: usize) -> Result<(), InputError> {
    let arity = sig.arity(&t.head).ok_or_else(|| invalid(line, Error::UndeclaredName(t.head.clone())))?;
    if arity != t.args.len() {
        return Err(invalid(
            line,
            Error::ArityMismatch {
                symbol: t.head.clone(),
                expected: arity,
                found: t.args.len(),
            },
        ));
    }
    Ok(())
}

fn missing_signature() -> InputError {
    ParseError {
        line: 1,
        column: 1,
        message: "missing `signature` line".into(),
    }
    .into()
}

fn duplicate_line(line: &Line, what: &str) -> InputError {
    ParseError {
        line: line.number,
        column: 1,
        message: format!("second `{what}` line"),
    }
    .into()
}

enum RawRhs {
    Term(RawTerm),
    Name(String, usize),
}

/// Parses an equation system file.
pub fn parse_ceq(text: &str) -> Result<EquationSystem, InputError> {
    let mut signature = None;
    let mut params: Vec<(String, usize)> = Vec::new();
    let mut eqs: Vec<(String, RawRhs, usize)> = Vec::new();
    let mut root: Option<(String, usize)> = None;
    for mut line in lines(text) {
        let (kw, _) = line.name("a keyword")?;
        match kw.as_str() {
            "signature" => {
                if signature.is_some() {
                    return Err(duplicate_line(&line, "signature"));
                }
                signature = Some(parse_signature_items(&mut line)?);
            }
            "params" => {
                for (p, _) in line.names_to_end("a parameter name")? {
                    if is_reserved(&p) {
                        return Err(invalid(line.number, Error::ReservedParameter(p)));
                    }
                    params.push((p, line.number));
                }
            }
            "eq" => {
                let (x, _) = line.name("a variable")?;
                line.expect(Tok::Eq)?;
                let rhs = if line.toks.get(line.pos + 1).map(|t| &t.0) == Some(&Tok::LParen) {
                    RawRhs::Term(parse_raw_term(&mut line)?)
                } else {
                    let (n, c) = line.name("a term or a parameter")?;
                    RawRhs::Name(n, c)
                };
                line.finish()?;
                eqs.push((x, rhs, line.number));
            }
            "root" => {
                if root.is_some() {
                    return Err(duplicate_line(&line, "root"));
                }
                root = Some((line.name("a variable")?.0, line.number));
                line.finish()?;
            }
            other => {
                return Err(ParseError {
                    line: line.number,
                    column: 1,
                    message: format!("unknown keyword `{other}`"),
                }
                .into())
            }
        }
    }
    let signature = signature.ok_or_else(missing_signature)?;
    if eqs.is_empty() {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "no `eq` lines".into(),
        }
        .into());
    }
    let param_set: BTreeSet<&str> = params.iter().map(|(p, _)| p.as_str()).collect();
    let var_set: BTreeSet<&str> = eqs.iter().map(|(x, _, _)| x.as_str()).collect();
    let mut equations = Vec::new();
    for (x, rhs, line) in &eqs {
        if is_reserved(x) {
            return Err(invalid(*line, Error::ReservedParameter(x.clone())));
        }
        let rhs = match rhs {
            RawRhs::Name(n, column) => {
                if param_set.contains(n.as_str()) {
                    Rhs::Param(n.clone())
                } else if var_set.contains(n.as_str()) {
                    return Err(ParseError {
                        line: *line,
                        column: *column,
                        message: format!("`{n}` is a variable; a right side must be a term or a parameter"),
                    }
                    .into());
                } else {
                    return Err(invalid(*line, Error::UndeclaredName(n.clone())));
                }
            }
            RawRhs::Term(t) => {
                check_term(&signature, t, *line)?;
                let args = t
                    .args
                    .iter()
                    .map(|(a, _)| {
                        if var_set.contains(a.as_str()) {
                            Ok(Atom::var(a.clone()))
                        } else if param_set.contains(a.as_str()) {
                            Ok(Atom::param(a.clone()))
                        } else {
                            Err(invalid(*line, Error::UndeclaredName(a.clone())))
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Rhs::Term(FlatTerm::new(t.head.clone(), args))
            }
        };
        equations.push((x.clone(), rhs));
    }
    let vars: Vec<String> = eqs.iter().map(|(x, _, _)| x.clone()).collect();
    let last = eqs.last().map_or(1, |e| e.2);
    let e = EquationSystem::new(signature, vars, params.iter().map(|(p, _)| p.clone()), equations)
        .map_err(|err| invalid(last, err))?;
    match root {
        Some((r, line)) => e.with_root(&r).map_err(|err| invalid(line, err)),
        None => Ok(e),
    }
}

/// Parses a presentation file.
pub fn parse_pres(text: &str) -> Result<Presentation, InputError> {
    let mut signature = None;
    let mut raw = Vec::new();
    for mut line in lines(text) {
        let (kw, _) = line.name("a keyword")?;
        match kw.as_str() {
            "signature" => {
                if signature.is_some() {
                    return Err(duplicate_line(&line, "signature"));
                }
                signature = Some(parse_signature_items(&mut line)?);
            }
            "axiom" => {
                let l = parse_raw_term(&mut line)?;
                line.expect(Tok::Eq)?;
                let r = parse_raw_term(&mut line)?;
                line.finish()?;
                raw.push((l, r, line.number));
            }
            other => {
                return Err(ParseError {
                    line: line.number,
                    column: 1,
                    message: format!("unknown keyword `{other}`"),
                }
                .into())
            }
        }
    }
    let signature = signature.ok_or_else(missing_signature)?;
    let mut axioms = Vec::new();
    for (l, r, line) in raw {
        check_term(&signature, &l, line)?;
        check_term(&signature, &r, line)?;
        let term = |t: &RawTerm| FlatTerm::new(t.head.clone(), t.args.iter().map(|(a, _)| Atom::var(a.clone())).collect());
        axioms.push(Axiom::new(term(&l), term(&r)));
    }
    Presentation::new(signature, axioms).map_err(|e| invalid(1, e))
}

/// Parses a finite algebra file.
pub fn parse_falg(text: &str) -> Result<FiniteAlgebra, InputError> {
    let mut signature = None;
    let mut carrier: Option<Vec<String>> = None;
    let mut rows: Vec<(String, Vec<String>, String)> = Vec::new();
    let mut seen: BTreeMap<(String, Vec<String>), (String, usize)> = BTreeMap::new();
    let mut last = 1;
    for mut line in lines(text) {
        last = line.number;
        let (kw, _) = line.name("a keyword")?;
        match kw.as_str() {
            "signature" => {
                if signature.is_some() {
                    return Err(duplicate_line(&line, "signature"));
                }
                signature = Some(parse_signature_items(&mut line)?);
            }
            "carrier" => {
                if carrier.is_some() {
                    return Err(duplicate_line(&line, "carrier"));
                }
                carrier = Some(line.names_to_end("an element")?.into_iter().map(|(n, _)| n).collect());
            }
            "table" => {
                let (sym, _) = line.name("a symbol")?;
                line.expect(Tok::Colon)?;
                let mut args = Vec::new();
                while !matches!(line.peek(), Some(Tok::Arrow) | None) {
                    args.push(line.name("an element")?.0);
                }
                line.expect(Tok::Arrow)?;
                let (out, _) = line.name("an element")?;
                line.finish()?;
                if let Some((prev, at)) = seen.get(&(sym.clone(), args.clone())) {
                    if *prev != out {
                        return Err(ParseError {
                            line: line.number,
                            column: 1,
                            message: format!("row conflicts with line {at} (`{prev}` vs `{out}`)"),
                        }
                        .into());
                    }
                }
                seen.insert((sym.clone(), args.clone()), (out.clone(), line.number));
                rows.push((sym, args, out));
            }
            other => {
                return Err(ParseError {
                    line: line.number,
                    column: 1,
                    message: format!("unknown keyword `{other}`"),
                }
                .into())
            }
        }
    }
    let signature = signature.ok_or_else(missing_signature)?;
    let carrier = carrier.ok_or_else(|| {
        InputError::from(ParseError {
            line: last,
            column: 1,
            message: "missing `carrier` line".into(),
        })
    })?;
    FiniteAlgebra::from_rows(signature, carrier, &rows).map_err(|e| invalid(last, e))
}

/// A signature given inline (`alpha:3 b:1`) or as the `signature` line of
/// any input file.
pub fn parse_signature(text: &str) -> Result<Signature, InputError> {
    let mut found = None;
    for mut line in lines(text) {
        if line.peek() == Some(&Tok::Name("signature".into())) {
            line.pos += 1;
        } else if found.is_some() || text.lines().count() > 1 {
            continue;
        }
        if found.is_some() {
            return Err(duplicate_line(&line, "signature"));
        }
        found = Some(parse_signature_items(&mut line)?);
    }
    found.ok_or_else(missing_signature)
}

/// Writes a system back in the input format.
pub fn emit_ceq(e: &EquationSystem) -> String {
    let mut out = String::new();
    out.push_str("signature");
    for s in e.signature().symbols() {
        out.push_str(&format!(" {}:{}", s.name, s.arity));
    }
    out.push('\n');
    if !e.parameters().is_empty() {
        out.push_str(&format!("params {}\n", e.parameters().join(" ")));
    }
    for (x, rhs) in e.equations() {
        out.push_str(&format!("eq {x} = {rhs}\n"));
    }
    if e.has_explicit_root() {
        out.push_str(&format!("root {}\n", e.root().expect("explicit root")));
    }
    out
}
