//! Text syntax: rational-function expressions, formal sums and identity
//! documents.
//!
//! Expressions:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('+' | '-') unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := integer | identifier | 'i' | '(' expr ')'
//! ```
//!
//! `i` is the imaginary unit and only exists over the Gaussian field.
//!
//! Formal sums are written as they render, `2[x] - (1/2)[1 - x] + [y/x]`.
//!
//! A document is a versioned header followed by `key: value` lines and a
//! `terms:` block:
//!
//! ```text
//! dilog-identity 1
//! name: five-term
//! field: rational
//! coefficients: integer
//! variables: x, y
//! terms:
//!   [x] - [y] + [y/x]
//!   + [(1 - x)/(1 - y)] - [(1 - 1/x)/(1 - 1/y)]
//! ```
//!
//! `variables:` may be replaced by `conjugate-pairs: z zb, w wb`, declaring
//! `z, zb, w, wb` with `zb` the conjugate of `z`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::algebra::{FieldMode, RationalFunction, Scalar};
use crate::error::ParseError;
use crate::formal::{CoeffMode, Coefficient, Context, FormalSum};

/// Header line of the current document format.
pub const DOCUMENT_HEADER: &str = "dilog-identity 1";

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

struct Lexer {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line: pos.line, column: pos.column, message: message.into() }
}

impl Lexer {
    fn new(src: &[char], start: Pos) -> Result<Self, ParseError> {
        let mut toks = Vec::new();
        let mut i = 0;
        let pos = |i: usize| Pos { line: start.line, column: start.column + i };
        while i < src.len() {
            let c = src[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let j = (i..src.len()).find(|&j| !src[j].is_ascii_digit()).unwrap_or(src.len());
                let s: String = src[i..j].iter().collect();
                toks.push((Tok::Int(s.parse().expect("digits")), pos(i)));
                i = j;
            } else if c.is_alphabetic() || c == '_' {
                let j = (i..src.len()).find(|&j| !(src[j].is_alphanumeric() || src[j] == '_')).unwrap_or(src.len());
                toks.push((Tok::Ident(src[i..j].iter().collect()), pos(i)));
                i = j;
            } else if "+-*/^()".contains(c) {
                toks.push((Tok::Op(c), pos(i)));
                i += 1;
            } else if c == '−' {
                toks.push((Tok::Op('-'), pos(i)));
                i += 1;
            } else {
                return Err(syntax(pos(i), format!("unexpected character `{c}`")));
            }
        }
        toks.push((Tok::End, pos(src.len())));
        Ok(Lexer { toks, at: 0 })
    }

    fn peek(&self) -> &(Tok, Pos) {
        &self.toks[self.at]
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, op: char) -> Option<Pos> {
        match self.peek() {
            (Tok::Op(c), p) if *c == op => {
                let p = *p;
                self.next();
                Some(p)
            }
            _ => None,
        }
    }
}

struct ExprParser<'a> {
    ctx: &'a Context,
    lex: Lexer,
}

impl ExprParser<'_> {
    fn expr(&mut self) -> Result<RationalFunction, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.lex.eat('+').is_some() {
                acc = &acc + &self.term()?;
            } else if self.lex.eat('-').is_some() {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.lex.eat('*').is_some() {
                acc = &acc * &self.unary()?;
            } else if let Some(p) = self.lex.eat('/') {
                let d = self.unary()?;
                acc = (&acc / &d)
                    .map_err(|_| ParseError::DivisionByZeroConstant { line: p.line, column: p.column })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction, ParseError> {
        if self.lex.eat('-').is_some() {
            return Ok(-&self.unary()?);
        }
        if self.lex.eat('+').is_some() {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction, ParseError> {
        let base = self.atom()?;
        let Some(p) = self.lex.eat('^') else { return Ok(base) };
        let negative = self.lex.eat('-').is_some();
        let (tok, q) = self.lex.next();
        let Tok::Int(n) = tok else {
            return Err(syntax(q, "expected an integer exponent"));
        };
        let e: i64 = n.try_into().map_err(|_| syntax(q, "exponent too large"))?;
        base.pow(if negative { -e } else { e })
            .map_err(|_| ParseError::DivisionByZeroConstant { line: p.line, column: p.column })
    }

    fn atom(&mut self) -> Result<RationalFunction, ParseError> {
        let n = self.ctx.nvars();
        let (tok, p) = self.lex.next();
        match tok {
            Tok::Int(k) => Ok(RationalFunction::constant(n, Scalar::from_rational(BigRational::from_integer(k)))),
            Tok::Ident(name) => {
                if let Some(v) = self.ctx.var_index(&name) {
                    Ok(RationalFunction::var(n, v))
                } else if name == "i" && self.ctx.field() == FieldMode::Gaussian {
                    Ok(RationalFunction::constant(n, Scalar::i()))
                } else {
                    Err(ParseError::UnknownVariable { name, line: p.line, column: p.column })
                }
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                if self.lex.eat(')').is_none() {
                    return Err(syntax(self.lex.peek().1, "expected `)`"));
                }
                Ok(e)
            }
            Tok::End => Err(syntax(p, "unexpected end of input")),
            Tok::Op(c) => Err(syntax(p, format!("unexpected `{c}`"))),
        }
    }
}

fn parse_expression_at(src: &[char], ctx: &Context, start: Pos) -> Result<RationalFunction, ParseError> {
    let mut parser = ExprParser { ctx, lex: Lexer::new(src, start)? };
    let e = parser.expr()?;
    match parser.lex.peek() {
        (Tok::End, _) => Ok(e),
        (_, p) => Err(syntax(*p, "unexpected trailing input")),
    }
}

/// Parses a rational function over the variables of `ctx`.
pub fn parse_expression(src: &str, ctx: &Context) -> Result<RationalFunction, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    parse_expression_at(&chars, ctx, Pos { line: 1, column: 1 })
}

/// Parses an exact rational such as `3`, `-2/7` or `(1/2)`.
pub fn parse_rational(src: &str) -> Option<BigRational> {
    let s = src.trim();
    let s = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s);
    let (neg, s) = match s.trim().strip_prefix('-') {
        Some(r) => (true, r.trim()),
        None => (false, s.trim()),
    };
    let q = match s.split_once('/') {
        Some((a, b)) => {
            let d: BigInt = b.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            BigRational::new(a.trim().parse().ok()?, d)
        }
        None => BigRational::from_integer(s.parse().ok()?),
    };
    Some(if neg { -q } else { q })
}

/// `(coefficient, key)` pairs of a formal sum written on one line.
fn parse_sum_terms(
    src: &[char],
    ctx: &Context,
    start: Pos,
) -> Result<Vec<(Coefficient, RationalFunction)>, ParseError> {
    let pos = |i: usize| Pos { line: start.line, column: start.column + i };
    let mut out = Vec::new();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < src.len() && src[*i].is_whitespace() {
            *i += 1;
        }
    };
    loop {
        skip_ws(&mut i);
        if i == src.len() {
            return Ok(out);
        }
        let mut sign = 1;
        if src[i] == '+' || src[i] == '-' || src[i] == '−' {
            if src[i] != '+' {
                sign = -1;
            }
            i += 1;
            skip_ws(&mut i);
        } else if !out.is_empty() {
            return Err(syntax(pos(i), "expected `+` or `-` between terms"));
        }
        let open = (i..src.len()).find(|&j| src[j] == '[');
        let Some(open) = open else {
            let rest: String = src[i..].iter().collect();
            if out.is_empty() && rest.trim() == "0" {
                return Ok(out);
            }
            return Err(syntax(pos(i), "expected `[`"));
        };
        let coeff_src: String = src[i..open].iter().collect();
        let coeff_src = coeff_src.trim().trim_end_matches(['*', '·']).trim();
        let c = if coeff_src.is_empty() {
            BigRational::from_integer(1.into())
        } else {
            parse_rational(coeff_src).ok_or_else(|| syntax(pos(i), format!("bad coefficient `{coeff_src}`")))?
        };
        let mut depth = 0usize;
        let mut close = None;
        for (j, &ch) in src.iter().enumerate().skip(open + 1) {
            match ch {
                '[' => depth += 1,
                ']' if depth == 0 => {
                    close = Some(j);
                    break;
                }
                ']' => depth -= 1,
                _ => {}
            }
        }
        let close = close.ok_or_else(|| syntax(pos(open), "unclosed `[`"))?;
        let key = parse_expression_at(&src[open + 1..close], ctx, pos(open + 1))?;
        out.push((if sign < 0 { -c } else { c }, key));
        i = close + 1;
    }
}

fn sum_error(line: usize, e: impl ToString) -> ParseError {
    ParseError::Document { line, message: e.to_string() }
}

/// Parses a formal sum such as `2[t] - [1 - t]`.
pub fn parse_formal_sum(src: &str, ctx: &Context) -> Result<FormalSum, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = FormalSum::zero(ctx);
    for (c, f) in parse_sum_terms(&chars, ctx, Pos { line: 1, column: 1 })? {
        out.add_term(c, f).map_err(|e| sum_error(1, e))?;
    }
    Ok(out)
}

/// A parsed identity document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityDoc {
    pub name: Option<String>,
    pub ctx: Context,
    /// Conjugate variable pairs, when declared with `conjugate-pairs:`.
    pub conjugate_pairs: Option<Vec<(usize, usize)>>,
    pub sum: FormalSum,
}

fn split_list(s: &str) -> Vec<String> {
    s.split([',', ' ', '\t']).map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

/// Parses an identity document.
pub fn parse_document(src: &str) -> Result<IdentityDoc, ParseError> {
    let lines: Vec<(usize, &str)> = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let doc_err = |line: usize, message: String| ParseError::Document { line, message };
    let Some(&(hline, header)) = lines.first() else {
        return Err(doc_err(1, "empty document".into()));
    };
    let mut hp = header.split_whitespace();
    match (hp.next(), hp.next(), hp.next()) {
        (Some("dilog-identity"), Some("1"), None) => {}
        (Some("dilog-identity"), Some(v), None) => return Err(doc_err(hline, format!("unsupported version {v}"))),
        _ => return Err(doc_err(hline, format!("expected header `{DOCUMENT_HEADER}`"))),
    }
    let mut name = None;
    let mut field = FieldMode::Rational;
    let mut coeffs = CoeffMode::Integer;
    let mut vars: Option<Vec<String>> = None;
    let mut pairs = None;
    let mut terms_at = None;
    for (k, &(ln, line)) in lines.iter().enumerate().skip(1) {
        let (key, value) =
            line.split_once(':').ok_or_else(|| doc_err(ln, format!("expected `key: value`, got `{}`", line.trim())))?;
        let value = value.trim();
        match key.trim() {
            "name" => name = Some(value.to_string()),
            "field" => {
                field = match value {
                    "rational" => FieldMode::Rational,
                    "gaussian" => FieldMode::Gaussian,
                    _ => return Err(doc_err(ln, format!("unknown field `{value}`"))),
                }
            }
            "coefficients" => {
                coeffs = match value {
                    "integer" => CoeffMode::Integer,
                    "rational" => CoeffMode::Rational,
                    _ => return Err(doc_err(ln, format!("unknown coefficient mode `{value}`"))),
                }
            }
            "variables" => vars = Some(split_list(value)),
            "conjugate-pairs" => {
                let names = split_list(value);
                if !names.len().is_multiple_of(2) {
                    return Err(doc_err(ln, "conjugate pairs need an even number of names".into()));
                }
                pairs = Some((0..names.len() / 2).map(|i| (2 * i, 2 * i + 1)).collect::<Vec<_>>());
                vars = Some(names);
            }
            "terms" => {
                if !value.is_empty() {
                    return Err(doc_err(ln, "terms start on the next line".into()));
                }
                terms_at = Some(k + 1);
                break;
            }
            other => return Err(doc_err(ln, format!("unknown key `{other}`"))),
        }
    }
    let vars = vars.ok_or_else(|| doc_err(hline, "missing `variables:`".into()))?;
    for (i, v) in vars.iter().enumerate() {
        let ok = v.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !ok || (field == FieldMode::Gaussian && v == "i") || vars[..i].contains(v) {
            return Err(doc_err(hline, format!("invalid or repeated variable name `{v}`")));
        }
    }
    let terms_at = terms_at.ok_or_else(|| doc_err(hline, "missing `terms:` block".into()))?;
    let ctx = Context::new(&vars, field, coeffs);
    let mut sum = FormalSum::zero(&ctx);
    for &(ln, line) in &lines[terms_at..] {
        let chars: Vec<char> = line.chars().collect();
        let parsed = parse_sum_terms(&chars, &ctx, Pos { line: ln, column: 1 })?;
        for (c, f) in parsed {
            sum.add_term(c, f).map_err(|e| sum_error(ln, e))?;
        }
    }
    Ok(IdentityDoc { name, ctx, conjugate_pairs: pairs, sum })
}

/// Renders a document that [`parse_document`] reads back to an equal sum.
pub fn render_document(doc: &IdentityDoc) -> String {
    let ctx = &doc.ctx;
    let mut out = format!("{DOCUMENT_HEADER}\n");
    if let Some(n) = &doc.name {
        out.push_str(&format!("name: {n}\n"));
    }
    let field = match ctx.field() {
        FieldMode::Rational => "rational",
        FieldMode::Gaussian => "gaussian",
    };
    let coeffs = match ctx.coeffs() {
        CoeffMode::Integer => "integer",
        CoeffMode::Rational => "rational",
    };
    out.push_str(&format!("field: {field}\ncoefficients: {coeffs}\n"));
    match &doc.conjugate_pairs {
        Some(pairs) => {
            let ps: Vec<String> =
                pairs.iter().map(|&(a, b)| format!("{} {}", ctx.vars()[a], ctx.vars()[b])).collect();
            out.push_str(&format!("conjugate-pairs: {}\n", ps.join(", ")));
        }
        None => out.push_str(&format!("variables: {}\n", ctx.vars().join(", "))),
    }
    out.push_str("terms:\n");
    for (i, (f, a)) in doc.sum.terms().enumerate() {
        let sign = if a.is_negative() { "-" } else if i == 0 { "" } else { "+" };
        let mag = a.abs();
        let c = if mag == BigRational::from_integer(1.into()) { String::new() } else { format!("{mag} ") };
        let sep = if sign.is_empty() { "" } else { " " };
        out.push_str(&format!("  {sign}{sep}{c}[{}]\n", f.render(ctx.vars())));
    }
    out
}
