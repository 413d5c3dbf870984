//! The `.srf` text format: sections of polynomial expressions.
//!
//! ```text
//! # comment
//! [field]
//! modulus = gamma^2 + 1
//!
//! [parametrization]
//! x0^2 + x1^2 + x2^2
//! x0*x1
//!
//! [implicit]
//! y0*y3 - y1^2
//!
//! [fixtures]
//! F(1:1:0) = (1:0:0:1)
//! ```
//!
//! Expressions use integers, the variables `x0 x1 x2` (domain), `y0 y1 ...`
//! (ambient) and `gamma` (or `γ`, the extension generator), with
//! `+ - * / ^` and parentheses. Division is only by nonzero constants. An
//! entry continues on the next line while parentheses are open or the line
//! ends with an operator. Any other section holds `key = expr` lines or bare
//! expressions and is kept verbatim for tools.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{Extension, Field, Rational, Scalar};
use crate::error::ParamError;
use crate::mpoly::{MPoly, Param, SparsePoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SrfError {
    #[error("{span}: syntax error: {msg}")]
    Syntax { span: Span, msg: String },
    #[error("parametrization entry {index} (line {line}) is not homogeneous")]
    InhomogeneousEntry { index: usize, line: usize },
    #[error("parametrization entry {index} (line {line}) has degree {found}, expected {expected}")]
    DegreeMismatch { index: usize, line: usize, expected: u32, found: u32 },
    #[error("parametrization entries are not coprime: common factor {0}")]
    NotCoprime(String),
    #[error("invalid parametrization: {0}")]
    Param(ParamError),
    #[error("{span}: {msg}")]
    Semantic { span: Span, msg: String },
}

fn syntax(span: Span, msg: impl Into<String>) -> SrfError {
    SrfError::Syntax { span, msg: msg.into() }
}

fn semantic(span: Span, msg: impl Into<String>) -> SrfError {
    SrfError::Semantic { span, msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

const GAMMA: usize = 3;
const FIRST_Y: usize = 4;

/// Polynomial over named variables: ids `0..3` are `x0..x2`, `3` is gamma,
/// `4 + i` is `y_i`.
type Expr = BTreeMap<Vec<(usize, u32)>, Rational>;

fn expr_const(c: Rational) -> Expr {
    let mut e = Expr::new();
    if !c.is_zero() {
        e.insert(Vec::new(), c);
    }
    e
}

fn expr_add(a: &Expr, b: &Expr, sign: i64) -> Expr {
    let mut out = a.clone();
    for (m, c) in b {
        let s = out.remove(m).unwrap_or_else(Rational::zero) + c * Rational::from_integer(sign.into());
        if !s.is_zero() {
            out.insert(m.clone(), s);
        }
    }
    out
}

fn mono_mul(a: &[(usize, u32)], b: &[(usize, u32)]) -> Vec<(usize, u32)> {
    let mut m: BTreeMap<usize, u32> = a.iter().copied().collect();
    for &(v, e) in b {
        *m.entry(v).or_insert(0) += e;
    }
    m.into_iter().collect()
}

fn expr_mul(a: &Expr, b: &Expr) -> Expr {
    let mut out = Expr::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = mono_mul(ma, mb);
            let s = out.remove(&m).unwrap_or_else(Rational::zero) + ca * cb;
            if !s.is_zero() {
                out.insert(m, s);
            }
        }
    }
    out
}

fn expr_as_const(e: &Expr) -> Option<Rational> {
    match e.len() {
        0 => Some(Rational::zero()),
        1 => e.get(&Vec::new()).cloned(),
        _ => None,
    }
}

fn tokenize(text: &str, starts: &[(usize, usize)]) -> Result<Vec<Token>, SrfError> {
    // `starts[i]` maps byte offset ranges of the logical line to (line, col) origins.
    let locate = |off: usize| -> Span {
        let mut best = (0usize, 1usize, 1usize);
        for &(o, line) in starts {
            if o <= off {
                best = (o, line, 1);
            }
        }
        Span { line: best.1, col: text[best.0..off].chars().count() + 1 }
    };
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(i, ch)) = it.peek() {
        if ch.is_whitespace() {
            it.next();
        } else if ch.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek() {
                if d.is_ascii_digit() {
                    s.push(d);
                    it.next();
                } else {
                    break;
                }
            }
            out.push(Token { tok: Tok::Num(s.parse().unwrap()), span: locate(i) });
        } else if ch.is_alphabetic() || ch == '_' {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek() {
                if d.is_alphanumeric() || d == '_' || d == '\'' {
                    s.push(d);
                    it.next();
                } else {
                    break;
                }
            }
            out.push(Token { tok: Tok::Ident(s), span: locate(i) });
        } else if "+-*/^():,=".contains(ch) {
            out.push(Token { tok: Tok::Op(ch), span: locate(i) });
            it.next();
        } else {
            return Err(syntax(locate(i), format!("unexpected character `{ch}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    end: Span,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn span(&self) -> Span {
        self.peek().map(|t| t.span).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().is_some_and(|t| t.tok == Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SrfError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.span(), format!("expected `{c}`")))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expr(&mut self) -> Result<Expr, SrfError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = expr_add(&acc, &self.term()?, 1);
            } else if self.eat('-') {
                acc = expr_add(&acc, &self.term()?, -1);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SrfError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = expr_mul(&acc, &self.unary()?);
            } else if self.peek().is_some_and(|t| t.tok == Tok::Op('/')) {
                let span = self.span();
                self.pos += 1;
                let d = self.unary()?;
                match expr_as_const(&d) {
                    Some(c) if !c.is_zero() => acc = expr_mul(&acc, &expr_const(c.recip())),
                    Some(_) => return Err(semantic(span, "division by zero")),
                    None => return Err(semantic(span, "division by a non-constant")),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SrfError> {
        if self.eat('-') {
            Ok(expr_add(&Expr::new(), &self.unary()?, -1))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, SrfError> {
        let base = self.atom()?;
        if self.eat('^') {
            let span = self.span();
            let e = match self.peek() {
                Some(Token { tok: Tok::Num(n), .. }) => {
                    self.pos += 1;
                    n.to_u32().ok_or_else(|| semantic(span, "exponent too large"))?
                }
                _ => return Err(syntax(span, "expected a nonnegative integer exponent")),
            };
            let mut acc = expr_const(Rational::one());
            for _ in 0..e {
                acc = expr_mul(&acc, &base);
            }
            Ok(acc)
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, SrfError> {
        let span = self.span();
        match self.peek().map(|t| &t.tok) {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(expr_const(Rational::from_integer(n.clone())))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let id = var_id(name).ok_or_else(|| semantic(span, format!("unknown variable `{name}`")))?;
                let mut e = Expr::new();
                e.insert(vec![(id, 1)], Rational::one());
                Ok(e)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(_) => Err(syntax(span, "expected a number, variable or `(`")),
            None => Err(syntax(span, "unexpected end of expression")),
        }
    }
}

fn var_id(name: &str) -> Option<usize> {
    match name {
        "x0" => Some(0),
        "x1" => Some(1),
        "x2" => Some(2),
        "gamma" | "γ" => Some(GAMMA),
        _ => {
            let rest = name.strip_prefix('y')?;
            if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
                return None;
            }
            Some(FIRST_Y + rest.parse::<usize>().ok()?)
        }
    }
}

/// A logical line: text plus the offsets where physical lines start.
#[derive(Debug, Clone)]
struct Logical {
    text: String,
    starts: Vec<(usize, usize)>,
    first_line: usize,
}

impl Logical {
    fn tokens(&self) -> Result<Vec<Token>, SrfError> {
        tokenize(&self.text, &self.starts)
    }

    fn end_span(&self) -> Span {
        let (off, line) = *self.starts.last().unwrap();
        Span { line, col: self.text[off..].chars().count() + 1 }
    }
}

#[derive(Debug, Clone)]
struct RawSection {
    name: String,
    span: Span,
    lines: Vec<Logical>,
}

fn split_sections(text: &str) -> Result<Vec<RawSection>, SrfError> {
    let mut sections: Vec<RawSection> = Vec::new();
    let mut pending: Option<Logical> = None;
    let mut depth: i64 = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let body = raw.split('#').next().unwrap();
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        if pending.is_none() && trimmed.starts_with('[') {
            let name = trimmed
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| syntax(Span { line: line_no, col: 1 }, "malformed section header"))?;
            sections.push(RawSection {
                name: name.trim().to_string(),
                span: Span { line: line_no, col: 1 },
                lines: Vec::new(),
            });
            continue;
        }
        let section = sections
            .last_mut()
            .ok_or_else(|| syntax(Span { line: line_no, col: 1 }, "content before the first section header"))?;
        let logical = pending.get_or_insert_with(|| Logical { text: String::new(), starts: Vec::new(), first_line: line_no });
        if !logical.text.is_empty() {
            logical.text.push(' ');
        }
        logical.starts.push((logical.text.len(), line_no));
        logical.text.push_str(body);
        for ch in body.chars() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
        }
        let continues = depth > 0 || trimmed.ends_with(['+', '-', '*', '/', '^', '=', ':', ',']);
        if !continues {
            section.lines.push(pending.take().unwrap());
            depth = 0;
        }
    }
    if let Some(l) = pending {
        return Err(syntax(l.end_span(), "unterminated expression at end of input"));
    }
    Ok(sections)
}

/// A patch of a cover, named as in fixture lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Patch {
    F,
    G,
    H,
}

impl fmt::Display for Patch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Patch::F => "F",
            Patch::G => "G",
            Patch::H => "H",
        })
    }
}

/// "`patch(param) = point`": the point of the surface hit by a patch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub patch: Patch,
    pub param: [Scalar; 3],
    pub point: Vec<Scalar>,
}

/// One line of an uninterpreted section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: Option<String>,
    pub poly: MPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&MPoly> {
        self.entries.iter().find(|e| e.key.as_deref() == Some(key)).map(|e| &e.poly)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDoc {
    pub field: Field,
    pub param: Option<Param>,
    /// Homogeneous equations in `y0..yn`.
    pub implicit: Vec<SparsePoly>,
    pub fixtures: Vec<Fixture>,
    /// Sections other than the four standard ones, in file order.
    pub sections: Vec<Section>,
}

impl InputDoc {
    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// A parametrization stored as a bare-entry section, e.g. `[G]`.
    pub fn section_param(&self, name: &str) -> Option<Result<Param, ParamError>> {
        let s = self.section(name)?;
        Some(Param::new(s.entries.iter().map(|e| e.poly.clone()).collect(), self.field.clone()))
    }
}

fn to_scalar(e: &Expr, ext: Option<&Arc<Extension>>, span: Span) -> Result<Scalar, SrfError> {
    let mut residue: Vec<Rational> = Vec::new();
    for (m, c) in e {
        let pow = match m.as_slice() {
            [] => 0,
            [(GAMMA, k)] => *k as usize,
            _ => return Err(semantic(span, "expected a constant")),
        };
        if residue.len() <= pow {
            residue.resize(pow + 1, Rational::zero());
        }
        residue[pow] += c;
    }
    match ext {
        None if residue.len() > 1 => Err(semantic(span, "`gamma` used without a [field] modulus")),
        None => Ok(residue.pop().map(Scalar::Rational).unwrap_or_default()),
        Some(x) => Ok(Scalar::from_residue(residue, x)),
    }
}

fn split_mono(m: &[(usize, u32)]) -> (Vec<(usize, u32)>, u32) {
    let mut g = 0;
    let mut rest = Vec::new();
    for &(v, e) in m {
        if v == GAMMA {
            g = e;
        } else {
            rest.push((v, e));
        }
    }
    (rest, g)
}

fn gamma_coeff(c: &Rational, g: u32, ext: Option<&Arc<Extension>>, span: Span) -> Result<Scalar, SrfError> {
    if g == 0 {
        return Ok(Scalar::Rational(c.clone()));
    }
    let ext = ext.ok_or_else(|| semantic(span, "`gamma` used without a [field] modulus"))?;
    let mut residue = vec![Rational::zero(); g as usize + 1];
    residue[g as usize] = c.clone();
    Ok(Scalar::from_residue(residue, ext))
}

fn to_mpoly(e: &Expr, ext: Option<&Arc<Extension>>, span: Span) -> Result<MPoly, SrfError> {
    let mut out = MPoly::zero();
    for (m, c) in e {
        let (rest, g) = split_mono(m);
        let mut mono = [0u32; 3];
        for (v, k) in rest {
            if v >= 3 {
                return Err(semantic(span, "ambient variables are not allowed here"));
            }
            mono[v] = k;
        }
        out.add_term(mono, gamma_coeff(c, g, ext, span)?);
    }
    Ok(out)
}

fn to_sparse(e: &Expr, ext: Option<&Arc<Extension>>, span: Span, nvars: usize) -> Result<SparsePoly, SrfError> {
    let mut out = SparsePoly::zero(nvars);
    for (m, c) in e {
        let (rest, g) = split_mono(m);
        let mut mono = vec![0u32; nvars];
        for (v, k) in rest {
            if v < FIRST_Y {
                return Err(semantic(span, "implicit equations use the ambient variables y0, y1, ..."));
            }
            let i = v - FIRST_Y;
            if i >= nvars {
                return Err(semantic(span, format!("y{i} exceeds the ambient dimension")));
            }
            mono[i] = k;
        }
        out.add_term(mono, gamma_coeff(c, g, ext, span)?);
    }
    Ok(out)
}

fn max_y(e: &Expr) -> Option<usize> {
    e.keys().flat_map(|m| m.iter()).filter(|(v, _)| *v >= FIRST_Y).map(|(v, _)| v - FIRST_Y).max()
}

fn parse_expr_line(toks: &[Token], end: Span) -> Result<Expr, SrfError> {
    let mut p = Parser { toks, pos: 0, end };
    let e = p.expr()?;
    if !p.at_end() {
        return Err(syntax(p.span(), "unexpected token after expression"));
    }
    Ok(e)
}

fn is_key_line(toks: &[Token]) -> Option<String> {
    match (toks.first(), toks.get(1)) {
        (Some(Token { tok: Tok::Ident(k), .. }), Some(Token { tok: Tok::Op('='), .. })) => Some(k.clone()),
        _ => None,
    }
}

fn parse_tuple(p: &mut Parser<'_>) -> Result<Vec<(Expr, Span)>, SrfError> {
    p.expect('(')?;
    let mut out = Vec::new();
    loop {
        let span = p.span();
        out.push((p.expr()?, span));
        if p.eat(')') {
            return Ok(out);
        }
        if !(p.eat(':') || p.eat(',')) {
            return Err(syntax(p.span(), "expected `:` or `)`"));
        }
    }
}

fn parse_fixture(l: &Logical, ext: Option<&Arc<Extension>>) -> Result<Fixture, SrfError> {
    let toks = l.tokens()?;
    let mut p = Parser { toks: &toks, pos: 0, end: l.end_span() };
    let span = p.span();
    let patch = match p.peek().map(|t| &t.tok) {
        Some(Tok::Ident(s)) if s == "F" => Patch::F,
        Some(Tok::Ident(s)) if s == "G" => Patch::G,
        Some(Tok::Ident(s)) if s == "H" => Patch::H,
        _ => return Err(syntax(span, "fixture lines start with F, G or H")),
    };
    p.pos += 1;
    let args = parse_tuple(&mut p)?;
    if args.len() != 3 {
        return Err(semantic(span, "a fixture parameter has three coordinates"));
    }
    p.expect('=')?;
    let point = parse_tuple(&mut p)?;
    if !p.at_end() {
        return Err(syntax(p.span(), "unexpected token after fixture"));
    }
    let conv = |v: &[(Expr, Span)]| -> Result<Vec<Scalar>, SrfError> {
        v.iter().map(|(e, s)| to_scalar(e, ext, *s)).collect()
    };
    let param = conv(&args)?;
    Ok(Fixture { patch, param: [param[0].clone(), param[1].clone(), param[2].clone()], point: conv(&point)? })
}

/// Parses a whole document.
pub fn parse_input(text: &str) -> Result<InputDoc, SrfError> {
    let sections = split_sections(text)?;
    let mut field = Field::Rationals;
    if let Some(fs) = sections.iter().find(|s| s.name == "field") {
        for l in &fs.lines {
            let toks = l.tokens()?;
            let span = toks.first().map(|t| t.span).unwrap_or(l.end_span());
            match is_key_line(&toks).as_deref() {
                Some("modulus") => {
                    let e = parse_expr_line(&toks[2..], l.end_span())?;
                    let mut m: Vec<Rational> = Vec::new();
                    for (mono, c) in &e {
                        let k = match mono.as_slice() {
                            [] => 0,
                            [(GAMMA, k)] => *k as usize,
                            _ => return Err(semantic(span, "the modulus is a polynomial in gamma")),
                        };
                        if m.len() <= k {
                            m.resize(k + 1, Rational::zero());
                        }
                        m[k] = c.clone();
                    }
                    let ext = Extension::new(m).map_err(|e| semantic(span, e.to_string()))?;
                    field = Field::Extension(ext);
                }
                _ => return Err(semantic(span, "expected `modulus = <polynomial in gamma>`")),
            }
        }
    }
    let ext = field.extension().cloned();
    let ext = ext.as_ref();

    let param = match sections.iter().find(|s| s.name == "parametrization") {
        Some(s) => Some(parse_param(s, ext, field.clone())?),
        None => None,
    };
    let mut implicit = Vec::new();
    let mut fixtures = Vec::new();
    let mut others = Vec::new();
    let mut seen: Vec<&str> = Vec::new();
    for s in &sections {
        if seen.contains(&s.name.as_str()) {
            return Err(semantic(s.span, format!("duplicate section [{}]", s.name)));
        }
        seen.push(&s.name);
        match s.name.as_str() {
            "field" | "parametrization" => {}
            "implicit" => {
                let exprs: Vec<(Expr, Span)> = s
                    .lines
                    .iter()
                    .map(|l| {
                        let toks = l.tokens()?;
                        let span = toks.first().map(|t| t.span).unwrap_or(l.end_span());
                        Ok((parse_expr_line(&toks, l.end_span())?, span))
                    })
                    .collect::<Result<_, SrfError>>()?;
                let n = param.as_ref().map(|p: &Param| p.entries().len());
                let seen_max = exprs.iter().filter_map(|(e, _)| max_y(e)).max().map(|m| m + 1).unwrap_or(0);
                let nvars = n.unwrap_or(seen_max).max(seen_max);
                for (e, span) in exprs {
                    let sp = to_sparse(&e, ext, span, nvars)?;
                    if !sp.is_homogeneous() {
                        return Err(semantic(span, "implicit equation is not homogeneous"));
                    }
                    implicit.push(sp);
                }
            }
            "fixtures" => {
                for l in &s.lines {
                    fixtures.push(parse_fixture(l, ext)?);
                }
            }
            _ => {
                let mut entries = Vec::new();
                for l in &s.lines {
                    let toks = l.tokens()?;
                    let span = toks.first().map(|t| t.span).unwrap_or(l.end_span());
                    let (key, body) = match is_key_line(&toks) {
                        Some(k) => (Some(k), &toks[2..]),
                        None => (None, &toks[..]),
                    };
                    let e = parse_expr_line(body, l.end_span())?;
                    entries.push(Entry { key, poly: to_mpoly(&e, ext, span)? });
                }
                others.push(Section { name: s.name.clone(), entries });
            }
        }
    }
    if let Some(p) = &param {
        for im in &implicit {
            if im.nvars != p.entries().len() {
                return Err(SrfError::Semantic {
                    span: Span { line: 0, col: 0 },
                    msg: "implicit equation uses more ambient variables than the parametrization has entries".into(),
                });
            }
        }
        for f in &fixtures {
            if f.point.len() != p.entries().len() {
                return Err(semantic(Span { line: 0, col: 0 }, "fixture point has the wrong number of coordinates"));
            }
        }
    }
    Ok(InputDoc { field, param, implicit, fixtures, sections: others })
}

fn parse_param(s: &RawSection, ext: Option<&Arc<Extension>>, field: Field) -> Result<Param, SrfError> {
    let mut entries = Vec::new();
    let mut lines = Vec::new();
    for l in &s.lines {
        let toks = l.tokens()?;
        let span = toks.first().map(|t| t.span).unwrap_or(l.end_span());
        let e = parse_expr_line(&toks, l.end_span())?;
        entries.push(to_mpoly(&e, ext, span)?);
        lines.push(l.first_line);
    }
    Param::new(entries, field).map_err(|e| match e {
        ParamError::InhomogeneousEntry { index } => SrfError::InhomogeneousEntry { index, line: lines[index] },
        ParamError::DegreeMismatch { index, expected, found } => {
            SrfError::DegreeMismatch { index, line: lines[index], expected, found }
        }
        ParamError::NotCoprime { factor } => SrfError::NotCoprime(factor),
        other => SrfError::Param(other),
    })
}

/// Builds `.srf` text section by section.
#[derive(Debug, Default, Clone)]
pub struct Writer {
    out: String,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn comment(&mut self, text: &str) -> &mut Self {
        for line in text.lines() {
            let _ = writeln!(self.out, "# {line}");
        }
        self
    }

    pub fn field(&mut self, field: &Field) -> &mut Self {
        if let Field::Extension(e) = field {
            let m = crate::upoly::UPoly::from_rationals(e.modulus().to_vec());
            let _ = writeln!(self.out, "[field]\nmodulus = {}\n", m.display("gamma"));
        }
        self
    }

    pub fn param(&mut self, name: &str, p: &Param) -> &mut Self {
        let _ = writeln!(self.out, "[{name}]");
        for e in p.entries() {
            let _ = writeln!(self.out, "{e}");
        }
        self.out.push('\n');
        self
    }

    pub fn keyed(&mut self, name: &str, items: &[(&str, String)]) -> &mut Self {
        let _ = writeln!(self.out, "[{name}]");
        for (k, v) in items {
            let _ = writeln!(self.out, "{k} = {v}");
        }
        self.out.push('\n');
        self
    }

    pub fn implicit(&mut self, eqs: &[SparsePoly]) -> &mut Self {
        if eqs.is_empty() {
            return self;
        }
        let _ = writeln!(self.out, "[implicit]");
        for e in eqs {
            let names: Vec<String> = (0..e.nvars).map(|i| format!("y{i}")).collect();
            let _ = writeln!(self.out, "{}", e.display(&names));
        }
        self.out.push('\n');
        self
    }

    pub fn finish(&self) -> String {
        self.out.trim_end().to_string() + "\n"
    }
}

/// `.srf` text of a parametrization alone.
pub fn print_param(p: &Param) -> String {
    Writer::new().field(p.field()).param("parametrization", p).finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::mpoly_from_ints;
    use proptest::prelude::*;

    const WHITNEY: &str = "\
# Whitney umbrella after a coordinate change
[parametrization]
x2^2 - 2*x0*x2 + x0^2
x1^2 + x1*x2 - x0*x1 - x0*x2
-x1*x2 + x0*x1 + x0*x2 - x0^2
x1^2 + 2*x1*x2 + x2^2

[implicit]
y0*y1^2 - y2^2*y3

[fixtures]
G(0:1:1) = (0:1:0:1)
H(0:-1:1) = (1:0:0:1)
";

    #[test]
    fn three_term_expression() {
        let doc = parse_input("[extra]\nx0^2 + x1^2 + x2^2\n").unwrap();
        assert_eq!(doc.section("extra").unwrap().entries[0].poly.len(), 3);
    }

    #[test]
    fn whitney_document() {
        let doc = parse_input(WHITNEY).unwrap();
        let p = doc.param.unwrap();
        assert_eq!((p.degree(), p.ambient_dim()), (2, 3));
        assert_eq!(
            p.entries()[0],
            mpoly_from_ints(&[(1, [0, 0, 2]), (-2, [1, 0, 1]), (1, [2, 0, 0])])
        );
        assert_eq!(doc.implicit.len(), 1);
        assert_eq!(doc.fixtures.len(), 2);
        assert_eq!(doc.fixtures[1].patch, Patch::H);
        assert_eq!(doc.fixtures[1].param[1], Scalar::from(-1));
    }

    #[test]
    fn inhomogeneous_entry_reported() {
        let err = parse_input("[parametrization]\nx0^2\nx0 + x1^2\n").unwrap_err();
        assert_eq!(err, SrfError::InhomogeneousEntry { index: 1, line: 3 });
    }

    #[test]
    fn syntax_error_has_span() {
        let err = parse_input("[parametrization]\nx0^2 + $x1\n").unwrap_err();
        assert!(matches!(err, SrfError::Syntax { span: Span { line: 2, col: 8 }, .. }), "{err:?}");
        let err = parse_input("[parametrization]\nx0 +\n").unwrap_err();
        assert!(matches!(err, SrfError::Syntax { .. }));
        let err = parse_input("[parametrization]\nx0 * x4\n").unwrap_err();
        assert!(matches!(err, SrfError::Semantic { span: Span { line: 2, col: 6 }, .. }), "{err:?}");
    }

    #[test]
    fn continuation_lines() {
        let doc = parse_input("[parametrization]\nx0^2 +\n  x1^2\n(x2 -\n x0)*x1\n").unwrap();
        assert_eq!(doc.param.unwrap().entries().len(), 2);
    }

    #[test]
    fn extension_and_rationals() {
        let doc = parse_input("[field]\nmodulus = gamma^2 + 1\n[parametrization]\ngamma*x0 - 3/4*x1\nx2\n[extra]\nr = γ^3\n").unwrap();
        let ext = doc.field.extension().unwrap().clone();
        let e0 = &doc.param.as_ref().unwrap().entries()[0];
        assert_eq!(e0.coeff(&[1, 0, 0]), Scalar::generator(&ext));
        assert_eq!(e0.coeff(&[0, 1, 0]), Scalar::ratio(-3, 4));
        let r = doc.section("extra").unwrap().get("r").unwrap();
        assert_eq!(r, &MPoly::constant(-Scalar::generator(&ext)));
        assert!(parse_input("[parametrization]\ngamma*x0\n").is_err());
    }

    fn arb_param() -> impl Strategy<Value = Param> {
        let monos: Vec<[u32; 3]> = (0..=2u32).flat_map(|a| (0..=2 - a).map(move |b| [a, b, 2 - a - b])).collect();
        prop::collection::vec(prop::collection::vec((-9i64..=9, 1i64..=4), monos.len()), 2..5).prop_filter_map(
            "valid parametrization",
            move |rows| {
                let entries: Vec<MPoly> = rows
                    .iter()
                    .map(|r| MPoly::from_terms(monos.iter().zip(r).map(|(m, &(n, d))| (*m, Scalar::ratio(n, d)))))
                    .collect();
                Param::new(entries, Field::Rationals).ok()
            },
        )
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(p in arb_param()) {
            let text = print_param(&p);
            let back = parse_input(&text).unwrap().param.unwrap();
            prop_assert_eq!(back, p);
        }
    }

    #[test]
    fn algebraic_round_trip() {
        let text = "[field]\nmodulus = gamma^2 - 2\n[parametrization]\n(gamma + 1/2)*x0^2 - x1*x2\nx1^2\n";
        let p = parse_input(text).unwrap().param.unwrap();
        let again = parse_input(&print_param(&p)).unwrap().param.unwrap();
        assert_eq!(again, p);
    }
}
