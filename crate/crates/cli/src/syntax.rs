//! Definition-file syntax: lexer, parser with located diagnostics, and a
//! canonical printer.
//!
//! ```text
//! # comment
//! dialgebra Alg2_2 {
//!   dim 2;
//!   basis e1 e2;
//!   param a = 1;
//!   dashv(e1, e2) = a*e1;
//!   vdash(e2, e1) = e1 - 1/2*e2;
//!   phi(e2) = e1;
//! }
//! algebra A { dim 1; basis u; mul(u, u) = u; }
//! deformation D of Alg2_2 { order 1; term 1 dashv(e2, e2) = e1; }
//! ```
//!
//! Unlisted entries are zero. A coefficient is a rational (`3`, `-2/5`) or
//! a declared parameter, optionally negated.

use std::fmt;

use dialgebra::scalars::{fmt_scalar, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinitionFile {
    pub blocks: Vec<Block>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    Structure(StructureBlock),
    Deformation(DeformationBlock),
}

impl Block {
    pub fn name(&self) -> &str {
        match self {
            Block::Structure(s) => &s.name,
            Block::Deformation(d) => &d.name,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    /// Two products `dashv`, `vdash`.
    Dialgebra,
    /// One product `mul`.
    Algebra,
}

impl StructureKind {
    pub fn keyword(self) -> &'static str {
        match self {
            StructureKind::Dialgebra => "dialgebra",
            StructureKind::Algebra => "algebra",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureBlock {
    pub kind: StructureKind,
    pub name: String,
    pub basis: Vec<String>,
    pub params: Vec<(String, Scalar)>,
    pub entries: Vec<Entry>,
}

impl StructureBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationBlock {
    pub name: String,
    pub base: String,
    pub order: usize,
    /// `(power of t, entry)`, in file order.
    pub terms: Vec<(usize, Entry)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Dashv(usize, usize),
    Vdash(usize, usize),
    Mul(usize, usize),
    Phi(usize),
    Psi(usize),
}

impl Target {
    fn keyword(self) -> &'static str {
        match self {
            Target::Dashv(..) => "dashv",
            Target::Vdash(..) => "vdash",
            Target::Mul(..) => "mul",
            Target::Phi(_) => "phi",
            Target::Psi(_) => "psi",
        }
    }

    fn show(self, basis: &[String]) -> String {
        match self {
            Target::Dashv(i, j) | Target::Vdash(i, j) | Target::Mul(i, j) => {
                format!("{}({}, {})", self.keyword(), basis[i], basis[j])
            }
            Target::Phi(i) | Target::Psi(i) => format!("{}({})", self.keyword(), basis[i]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub target: Target,
    pub value: LinComb,
}

/// `sign * param` when a parameter is named, otherwise the rational itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coef {
    pub scale: Scalar,
    pub param: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coef: Coef,
    pub basis: usize,
}

/// Linear combination of basis elements; empty means `0`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinComb {
    pub terms: Vec<Term>,
}

/// Diagnostic classes; the CLI maps all of them to exit code 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    Lexical,
    Syntax,
    UnknownBasis,
    ConflictingEntry,
    UnboundParameter,
    Semantic,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub class: ErrorClass,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(Scalar),
    Punct(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(n) => write!(f, "`{}`", fmt_scalar(n)),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of file"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(1, &mut i),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '{' | '}' | '(' | ')' | ',' | ';' | '=' | '+' | '-' | '*' => {
                out.push(Spanned { tok: Tok::Punct(c), line: l0, col: c0 });
                advance(1, &mut i);
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let num: BigInt = chars[start..i].iter().collect::<String>().parse().unwrap();
                let mut value = Scalar::from_integer(num);
                if i < chars.len() && chars[i] == '/' {
                    let ds = i + 1;
                    let mut j = ds;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    let den: String = chars[ds..j].iter().collect();
                    let den: BigInt = match den.parse() {
                        Ok(d) if !BigInt::is_zero(&d) => d,
                        _ => {
                            return Err(ParseError {
                                line: l0,
                                col: c0 + (ds - start),
                                class: ErrorClass::Lexical,
                                message: "malformed rational: expected a nonzero denominator after `/`".into(),
                            })
                        }
                    };
                    value /= Scalar::from_integer(den);
                    i = j;
                }
                col += i - start;
                out.push(Spanned { tok: Tok::Number(value), line: l0, col: c0 });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                col += i - start;
                out.push(Spanned { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, col: c0 });
            }
            other => {
                return Err(ParseError {
                    line: l0,
                    col: c0,
                    class: ErrorClass::Lexical,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

const KEYWORDS: [&str; 12] =
    ["dialgebra", "algebra", "deformation", "of", "dim", "basis", "param", "order", "term", "dashv", "vdash", "mul"];

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    blocks: Vec<Block>,
    _text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, at: &Spanned, class: ErrorClass, message: String) -> ParseError {
        ParseError { line: at.line, col: at.col, class, message }
    }

    fn expected(&self, what: &str) -> ParseError {
        let t = self.peek();
        self.err_at(t, ErrorClass::Syntax, format!("expected {what}, found {}", t.tok))
    }

    fn punct(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Punct(c) {
            self.next();
            Ok(())
        } else {
            Err(self.expected(&format!("`{c}`")))
        }
    }

    fn is_punct(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == kw => {
                self.next();
                Ok(())
            }
            _ => Err(self.expected(&format!("`{kw}`"))),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn name(&mut self, what: &str) -> Result<(String, Spanned), ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok((s.clone(), t))
            }
            _ => Err(self.expected(what)),
        }
    }

    fn count(&mut self, what: &str) -> Result<usize, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Number(n) if n.is_integer() && !n.is_negative() => {
                self.next();
                n.to_integer().try_into().map_err(|_| self.err_at(&t, ErrorClass::Semantic, format!("{what} too large")))
            }
            _ => Err(self.expected(what)),
        }
    }

    fn signed_rational(&mut self) -> Result<Scalar, ParseError> {
        let neg = self.is_punct('-');
        if neg {
            self.next();
        }
        match self.peek().tok.clone() {
            Tok::Number(n) => {
                self.next();
                Ok(if neg { -n } else { n })
            }
            _ => Err(self.expected("a rational number")),
        }
    }

    fn file(mut self) -> Result<DefinitionFile, ParseError> {
        while self.peek().tok != Tok::Eof {
            let t = self.peek().clone();
            let block = match &t.tok {
                Tok::Ident(s) if s == "dialgebra" => Block::Structure(self.structure(StructureKind::Dialgebra)?),
                Tok::Ident(s) if s == "algebra" => Block::Structure(self.structure(StructureKind::Algebra)?),
                Tok::Ident(s) if s == "deformation" => Block::Deformation(self.deformation()?),
                _ => return Err(self.expected("`dialgebra`, `algebra` or `deformation`")),
            };
            if self.blocks.iter().any(|b| b.name() == block.name()) {
                return Err(self.err_at(&t, ErrorClass::Semantic, format!("duplicate block name {}", block.name())));
            }
            self.blocks.push(block);
        }
        Ok(DefinitionFile { blocks: self.blocks })
    }

    fn structure(&mut self, kind: StructureKind) -> Result<StructureBlock, ParseError> {
        self.keyword(kind.keyword())?;
        let (name, _) = self.name("a block name")?;
        self.punct('{')?;
        self.keyword("dim")?;
        let dim_tok = self.peek().clone();
        let dim = self.count("a dimension")?;
        self.punct(';')?;
        self.keyword("basis")?;
        let mut basis: Vec<String> = Vec::new();
        while !self.is_punct(';') {
            let (b, at) = self.name("a basis name")?;
            if basis.contains(&b) {
                return Err(self.err_at(&at, ErrorClass::Semantic, format!("duplicate basis name {b}")));
            }
            basis.push(b);
        }
        if basis.len() != dim {
            return Err(self.err_at(
                &dim_tok,
                ErrorClass::Semantic,
                format!("dim {dim} but {} basis names declared", basis.len()),
            ));
        }
        self.punct(';')?;
        let mut params: Vec<(String, Scalar)> = Vec::new();
        while self.is_keyword("param") {
            self.next();
            let (p, at) = self.name("a parameter name")?;
            if basis.contains(&p) || params.iter().any(|(q, _)| *q == p) {
                return Err(self.err_at(&at, ErrorClass::Semantic, format!("parameter {p} clashes with an earlier name")));
            }
            self.punct('=')?;
            let v = self.signed_rational()?;
            self.punct(';')?;
            params.push((p, v));
        }
        let param_names: Vec<String> = params.iter().map(|(p, _)| p.clone()).collect();
        let mut entries: Vec<Entry> = Vec::new();
        while !self.is_punct('}') {
            let at = self.peek().clone();
            let e = self.entry(kind, &basis, &param_names, true)?;
            push_entry(self, &mut entries, e, &at, &basis)?;
        }
        self.punct('}')?;
        Ok(StructureBlock { kind, name, basis, params, entries })
    }

    fn deformation(&mut self) -> Result<DeformationBlock, ParseError> {
        self.keyword("deformation")?;
        let (name, _) = self.name("a block name")?;
        self.keyword("of")?;
        let (base, base_at) = self.name("the name of an earlier dialgebra block")?;
        let base_block = self
            .blocks
            .iter()
            .find_map(|b| match b {
                Block::Structure(s) if s.name == base && s.kind == StructureKind::Dialgebra => Some(s.clone()),
                _ => None,
            })
            .ok_or_else(|| self.err_at(&base_at, ErrorClass::Semantic, format!("unknown dialgebra {base}")))?;
        self.punct('{')?;
        self.keyword("order")?;
        let order = self.count("an order")?;
        self.punct(';')?;
        let params: Vec<String> = base_block.params.iter().map(|(p, _)| p.clone()).collect();
        let mut terms: Vec<(usize, Entry)> = Vec::new();
        while !self.is_punct('}') {
            let at = self.peek().clone();
            self.keyword("term")?;
            let pow_at = self.peek().clone();
            let power = self.count("a power of t")?;
            if power == 0 || power > order {
                return Err(self.err_at(&pow_at, ErrorClass::Semantic, format!("term power {power} outside 1..={order}")));
            }
            let e = self.entry(StructureKind::Dialgebra, &base_block.basis, &params, false)?;
            if let Some((_, old)) = terms.iter().find(|(p, old)| *p == power && old.target == e.target) {
                if old.value != e.value {
                    return Err(self.err_at(
                        &at,
                        ErrorClass::ConflictingEntry,
                        format!("conflicting entry term {power} {}", e.target.show(&base_block.basis)),
                    ));
                }
                continue;
            }
            terms.push((power, e));
        }
        self.punct('}')?;
        Ok(DeformationBlock { name, base, order, terms })
    }

    fn entry(&mut self, kind: StructureKind, basis: &[String], params: &[String], twists: bool) -> Result<Entry, ParseError> {
        let at = self.peek().clone();
        let kw = match &at.tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.expected("an entry")),
        };
        let allowed: &[&str] = match (kind, twists) {
            (StructureKind::Dialgebra, true) => &["dashv", "vdash", "phi", "psi"],
            (StructureKind::Dialgebra, false) => &["dashv", "vdash"],
            (StructureKind::Algebra, _) => &["mul", "phi", "psi"],
        };
        if !allowed.contains(&kw.as_str()) {
            return Err(self.expected(&format!("one of {}", allowed.join(", "))));
        }
        self.next();
        self.punct('(')?;
        let i = self.basis_ref(basis)?;
        let target = if kw == "phi" || kw == "psi" {
            self.punct(')')?;
            if kw == "phi" {
                Target::Phi(i)
            } else {
                Target::Psi(i)
            }
        } else {
            self.punct(',')?;
            let j = self.basis_ref(basis)?;
            self.punct(')')?;
            match kw.as_str() {
                "dashv" => Target::Dashv(i, j),
                "vdash" => Target::Vdash(i, j),
                _ => Target::Mul(i, j),
            }
        };
        self.punct('=')?;
        let value = self.lincomb(basis, params)?;
        self.punct(';')?;
        Ok(Entry { target, value })
    }

    fn basis_ref(&mut self, basis: &[String]) -> Result<usize, ParseError> {
        let (b, at) = self.name("a basis name")?;
        basis
            .iter()
            .position(|x| *x == b)
            .ok_or_else(|| self.err_at(&at, ErrorClass::UnknownBasis, format!("unknown basis {b}")))
    }

    fn lincomb(&mut self, basis: &[String], params: &[String]) -> Result<LinComb, ParseError> {
        if matches!(&self.peek().tok, Tok::Number(n) if n.is_zero()) && self.toks[self.pos + 1].tok == Tok::Punct(';') {
            self.next();
            return Ok(LinComb::default());
        }
        let mut terms = Vec::new();
        let mut negative = false;
        if self.is_punct('-') {
            self.next();
            negative = true;
        }
        loop {
            terms.push(self.term(negative, basis, params)?);
            if self.is_punct('+') {
                negative = false;
            } else if self.is_punct('-') {
                negative = true;
            } else {
                break;
            }
            self.next();
        }
        Ok(LinComb { terms })
    }

    fn term(&mut self, negative: bool, basis: &[String], params: &[String]) -> Result<Term, ParseError> {
        let sign = if negative { -Scalar::one() } else { Scalar::one() };
        let at = self.peek().clone();
        let coef = match at.tok.clone() {
            Tok::Number(n) => {
                self.next();
                if self.is_punct('*') {
                    self.next();
                }
                Coef { scale: sign * n, param: None }
            }
            Tok::Ident(s) if self.toks[self.pos + 1].tok == Tok::Punct('*') => {
                if !params.contains(&s) {
                    let class = if basis.contains(&s) { ErrorClass::Syntax } else { ErrorClass::UnboundParameter };
                    let message = if basis.contains(&s) {
                        format!("basis element {s} used as a coefficient")
                    } else {
                        format!("unbound parameter {s}")
                    };
                    return Err(self.err_at(&at, class, message));
                }
                self.next();
                self.next();
                Coef { scale: sign, param: Some(s) }
            }
            _ => Coef { scale: sign, param: None },
        };
        let b = self.basis_ref(basis)?;
        Ok(Term { coef, basis: b })
    }
}

fn push_entry(p: &Parser<'_>, entries: &mut Vec<Entry>, e: Entry, at: &Spanned, basis: &[String]) -> Result<(), ParseError> {
    if let Some(old) = entries.iter().find(|old| old.target == e.target) {
        if old.value != e.value {
            return Err(p.err_at(at, ErrorClass::ConflictingEntry, format!("conflicting entry {}", e.target.show(basis))));
        }
        return Ok(());
    }
    entries.push(e);
    Ok(())
}

/// Parses a definition file. Identical repeated entries are merged;
/// repeated entries with different values are an error.
pub fn parse(text: &str) -> Result<DefinitionFile, ParseError> {
    let toks = lex(text)?;
    Parser { toks, pos: 0, blocks: Vec::new(), _text: text }.file()
}

fn write_lincomb(out: &mut String, v: &LinComb, basis: &[String]) {
    if v.terms.is_empty() {
        out.push('0');
        return;
    }
    for (k, t) in v.terms.iter().enumerate() {
        let neg = t.coef.scale.is_negative();
        let mag = t.coef.scale.abs();
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        match &t.coef.param {
            Some(p) => {
                out.push_str(p);
                out.push('*');
            }
            None if mag.is_one() => {}
            None => {
                out.push_str(&fmt_scalar(&mag));
                out.push('*');
            }
        }
        out.push_str(&basis[t.basis]);
    }
}

/// Canonical text: two-space indentation, one entry per line, entries in
/// stored order. `parse(print(f)) == f` for every parsed `f`.
pub fn print(file: &DefinitionFile) -> String {
    let mut out = String::new();
    for (k, block) in file.blocks.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        match block {
            Block::Structure(s) => {
                out.push_str(&format!("{} {} {{\n", s.kind.keyword(), s.name));
                out.push_str(&format!("  dim {};\n", s.dim()));
                out.push_str(&format!("  basis {};\n", s.basis.join(" ")));
                for (p, v) in &s.params {
                    out.push_str(&format!("  param {p} = {};\n", fmt_scalar(v)));
                }
                for e in &s.entries {
                    out.push_str(&format!("  {} = ", e.target.show(&s.basis)));
                    write_lincomb(&mut out, &e.value, &s.basis);
                    out.push_str(";\n");
                }
                out.push_str("}\n");
            }
            Block::Deformation(d) => {
                let basis = match file.blocks.iter().find(|b| b.name() == d.base) {
                    Some(Block::Structure(s)) => &s.basis,
                    _ => unreachable!("parser resolves the base block"),
                };
                out.push_str(&format!("deformation {} of {} {{\n", d.name, d.base));
                out.push_str(&format!("  order {};\n", d.order));
                for (p, e) in &d.terms {
                    out.push_str(&format!("  term {p} {} = ", e.target.show(basis)));
                    write_lincomb(&mut out, &e.value, basis);
                    out.push_str(";\n");
                }
                out.push_str("}\n");
            }
        }
    }
    out
}
