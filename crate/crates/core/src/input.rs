//! Job files.
//!
//! ```text
//! # comment
//! field p=3 f=2 mod=x^2+1 gen=x+1
//! component gamma=g^3 D=T^2 + 1 m=8
//! ```
//!
//! Keys are the identifier immediately before each `=`; a value runs up to
//! the next key and whitespace inside it is ignored.

use std::fmt;

use thiserror::Error;

use crate::ff::{FieldError, FieldOptions, FqElem, FqField};
use crate::kummer::Component;
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("missing key `{0}`")]
    MissingKey(&'static str),
    #[error("duplicate key `{0}`")]
    DuplicateKey(String),
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("`component` line before the `field` line")]
    ComponentBeforeField,
    #[error("more than one `field` line")]
    DuplicateField,
    #[error("no `component` lines")]
    NoComponents,
    #[error("constant `{0}` is not an element of F_q")]
    NotInField(String),
    #[error("radicand `{0}` is not monic")]
    NotMonic(String),
    #[error("exponent {m} does not divide q - 1 = {unit_order}")]
    ExponentNotDividing { m: u64, unit_order: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Parse failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Reject exponents not dividing `q - 1` while parsing.
    pub strict: bool,
    pub max_q: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobConfig {
    pub field: FqField,
    /// Modulus override as given, coefficients over `F_p` constant term first.
    pub modulus: Option<Vec<u32>>,
    /// Generator override as power-basis coordinates.
    pub generator: Option<Vec<u32>>,
    pub components: Vec<Component>,
    pub seed: u64,
    pub format: OutputFormat,
    pub include_infinite: bool,
    pub include_comparison: bool,
    pub strict: bool,
    /// Build the two genus fields concurrently.
    pub parallel: bool,
}

impl JobConfig {
    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn f(&self) -> u32 {
        self.field.degree()
    }

    /// Canonical job-file text; parsing it gives back the same field and
    /// components.
    pub fn render(&self) -> String {
        let mut out = format!("field p={} f={}", self.p(), self.f());
        if let Some(m) = &self.modulus {
            out.push_str(&format!(" mod={}", FqField::render_prime_poly(m)));
        }
        if let Some(g) = &self.generator {
            out.push_str(&format!(" gen={}", FqField::render_prime_poly(g)));
        }
        out.push('\n');
        for c in &self.components {
            out.push_str(&format!(
                "component gamma={} D={} m={}\n",
                self.field.render(c.gamma),
                c.radicand,
                c.exponent
            ));
        }
        out
    }
}

impl fmt::Display for JobConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

struct Pair<'a> {
    key: &'a str,
    key_col: usize,
    value: String,
    value_col: usize,
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

fn is_key_char(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

/// Splits `rest` (starting at byte offset `base` of the line) into pairs.
fn split_pairs(rest: &str, base: usize, line: usize) -> Result<Vec<Pair<'_>>, ParseError> {
    let eqs: Vec<usize> = rest.match_indices('=').map(|(i, _)| i).collect();
    if eqs.is_empty() {
        if rest.trim().is_empty() {
            return Ok(Vec::new());
        }
        let col = base + rest.len() - rest.trim_start().len() + 1;
        return Err(err(
            line,
            col,
            ParseErrorKind::Syntax("expected key=value".into()),
        ));
    }
    // (key_start, key_end, eq) for each '='
    let mut keys = Vec::with_capacity(eqs.len());
    for &eq in &eqs {
        let before = rest[..eq].trim_end();
        let start = before
            .char_indices()
            .rev()
            .take_while(|(_, c)| is_key_char(*c))
            .last()
            .map(|(i, _)| i);
        let Some(start) = start else {
            return Err(err(
                line,
                base + eq + 1,
                ParseErrorKind::Syntax("missing key before `=`".into()),
            ));
        };
        keys.push((start, before.len(), eq));
    }
    let lead = &rest[..keys[0].0];
    if !lead.trim().is_empty() {
        let col = base + lead.len() - lead.trim_start().len() + 1;
        return Err(err(
            line,
            col,
            ParseErrorKind::Syntax(format!("unexpected `{}`", lead.trim())),
        ));
    }
    let mut pairs = Vec::with_capacity(keys.len());
    for (i, &(ks, ke, eq)) in keys.iter().enumerate() {
        let end = keys.get(i + 1).map_or(rest.len(), |k| k.0);
        let raw = &rest[eq + 1..end];
        let value: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        let value_col = base + eq + 1 + (raw.len() - raw.trim_start().len()) + 1;
        if value.is_empty() {
            return Err(err(
                line,
                base + eq + 1,
                ParseErrorKind::Syntax("empty value".into()),
            ));
        }
        pairs.push(Pair {
            key: &rest[ks..ke],
            key_col: base + ks + 1,
            value,
            value_col,
        });
    }
    Ok(pairs)
}

fn take<'p, 'a>(
    pairs: &'p [Pair<'a>],
    allowed: &[&'static str],
    line: usize,
) -> Result<Vec<Option<&'p Pair<'a>>>, ParseError> {
    let mut slots: Vec<Option<&Pair>> = vec![None; allowed.len()];
    for p in pairs {
        let Some(i) = allowed.iter().position(|k| *k == p.key) else {
            return Err(err(
                line,
                p.key_col,
                ParseErrorKind::UnknownKey(p.key.into()),
            ));
        };
        if slots[i].is_some() {
            return Err(err(
                line,
                p.key_col,
                ParseErrorKind::DuplicateKey(p.key.into()),
            ));
        }
        slots[i] = Some(p);
    }
    Ok(slots)
}

fn parse_uint(s: &str, line: usize, col: usize) -> Result<u64, ParseError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(
            line,
            col,
            ParseErrorKind::Syntax(format!("expected a nonnegative integer, found `{s}`")),
        ));
    }
    s.parse().map_err(|_| {
        err(
            line,
            col,
            ParseErrorKind::Syntax(format!("integer `{s}` out of range")),
        )
    })
}

/// `c*v^e`, `v^e`, `v`, `c` for the variable `v`, split into coefficient
/// text and exponent text (`None` for a constant term).
fn split_term(term: &str, var: char) -> Option<(&str, Option<&str>)> {
    let (coef, rest) = if let Some(r) = term.strip_prefix(var) {
        ("", r)
    } else if let Some(i) = term.find(&format!("*{var}")) {
        (&term[..i], &term[i + 2..])
    } else {
        return Some((term, None));
    };
    if rest.is_empty() {
        return Some((coef, Some("1")));
    }
    rest.strip_prefix('^').map(|e| (coef, Some(e)))
}

/// Terms of a `+`-separated polynomial in `var` as `(coef text, exponent)`.
fn poly_terms(
    s: &str,
    var: char,
    line: usize,
    col: usize,
) -> Result<Vec<(&str, usize)>, ParseError> {
    let syntax = |msg: String| err(line, col, ParseErrorKind::Syntax(msg));
    let mut out = Vec::new();
    for term in s.split('+') {
        if term.is_empty() {
            return Err(syntax(format!("empty term in `{s}`")));
        }
        let (coef, exp) =
            split_term(term, var).ok_or_else(|| syntax(format!("malformed term `{term}`")))?;
        let exp = match exp {
            Some(e) => parse_uint(e, line, col)?,
            None => 0,
        };
        let exp = usize::try_from(exp)
            .ok()
            .filter(|&e| e <= 1 << 16)
            .ok_or_else(|| syntax(format!("exponent too large in `{term}`")))?;
        out.push((coef, exp));
    }
    Ok(out)
}

/// Polynomial over `F_p` in `x`, constant term first.
fn parse_prime_poly(s: &str, p: u64, line: usize, col: usize) -> Result<Vec<u32>, ParseError> {
    let mut coeffs: Vec<u64> = Vec::new();
    for (coef, e) in poly_terms(s, 'x', line, col)? {
        let c = if coef.is_empty() {
            1
        } else {
            parse_uint(coef, line, col)?
        };
        if c >= p {
            return Err(err(line, col, ParseErrorKind::NotInField(coef.into())));
        }
        if coeffs.len() <= e {
            coeffs.resize(e + 1, 0);
        }
        coeffs[e] = (coeffs[e] + c) % p;
    }
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    Ok(coeffs.into_iter().map(|c| c as u32).collect())
}

/// `0`, an integer below `p`, `g` or `g^k`.
fn parse_const(field: &FqField, s: &str, line: usize, col: usize) -> Result<FqElem, ParseError> {
    if s == "g" {
        return Ok(field.generator());
    }
    if let Some(k) = s.strip_prefix("g^") {
        let k = parse_uint(k, line, col)?;
        return Ok(field.gen_pow((k % field.unit_order()) as i64));
    }
    let n = parse_uint(s, line, col).map_err(|_| {
        err(
            line,
            col,
            ParseErrorKind::Syntax(format!("expected a constant (integer or g^k), found `{s}`")),
        )
    })?;
    if n >= field.p() {
        return Err(err(line, col, ParseErrorKind::NotInField(s.into())));
    }
    Ok(field.from_int(n as i64))
}

fn parse_t_poly(field: &FqField, s: &str, line: usize, col: usize) -> Result<Poly, ParseError> {
    let mut coeffs: Vec<FqElem> = Vec::new();
    for (coef, e) in poly_terms(s, 'T', line, col)? {
        let c = if coef.is_empty() {
            FqElem::ONE
        } else {
            parse_const(field, coef, line, col)?
        };
        if coeffs.len() <= e {
            coeffs.resize(e + 1, FqElem::ZERO);
        }
        coeffs[e] = field.add(coeffs[e], c);
    }
    Ok(Poly::new(field, coeffs))
}

/// A parsed `field` line: the field and the overrides as written.
struct FieldLine {
    field: FqField,
    modulus: Option<Vec<u32>>,
    generator: Option<Vec<u32>>,
}

fn build_field(
    pairs: &[Pair],
    line: usize,
    line_col: usize,
    opts: &ParseOptions,
) -> Result<FieldLine, ParseError> {
    let s = take(pairs, &["p", "f", "mod", "gen"], line)?;
    let p_pair = s[0].ok_or_else(|| err(line, line_col, ParseErrorKind::MissingKey("p")))?;
    let f_pair = s[1].ok_or_else(|| err(line, line_col, ParseErrorKind::MissingKey("f")))?;
    let p = parse_uint(&p_pair.value, line, p_pair.value_col)?;
    let f = parse_uint(&f_pair.value, line, f_pair.value_col)?;
    let f = u32::try_from(f).map_err(|_| {
        err(
            line,
            f_pair.value_col,
            ParseErrorKind::Syntax("degree out of range".into()),
        )
    })?;
    let modulus = s[2]
        .map(|m| parse_prime_poly(&m.value, p, line, m.value_col))
        .transpose()?;
    let generator = s[3]
        .map(|g| parse_prime_poly(&g.value, p, line, g.value_col))
        .transpose()?;
    let options = FieldOptions {
        max_q: opts.max_q,
        modulus: modulus.clone(),
        generator: generator.clone(),
    };
    let field = FqField::build_with(p, f, &options).map_err(|e| {
        let col = match e {
            FieldError::BadModulus(_) => s[2].map_or(line_col, |m| m.value_col),
            FieldError::BadGenerator => s[3].map_or(line_col, |g| g.value_col),
            FieldError::ZeroDegree => f_pair.value_col,
            _ => p_pair.value_col,
        };
        err(line, col, e.into())
    })?;
    Ok(FieldLine {
        field,
        modulus,
        generator,
    })
}

fn build_component(
    field: &FqField,
    pairs: &[Pair],
    line: usize,
    line_col: usize,
    opts: &ParseOptions,
) -> Result<Component, ParseError> {
    let s = take(pairs, &["gamma", "D", "m"], line)?;
    let g = s[0].ok_or_else(|| err(line, line_col, ParseErrorKind::MissingKey("gamma")))?;
    let d = s[1].ok_or_else(|| err(line, line_col, ParseErrorKind::MissingKey("D")))?;
    let m = s[2].ok_or_else(|| err(line, line_col, ParseErrorKind::MissingKey("m")))?;
    let gamma = parse_const(field, &g.value, line, g.value_col)?;
    if gamma.is_zero() {
        return Err(err(
            line,
            g.value_col,
            ParseErrorKind::Syntax("gamma must be nonzero".into()),
        ));
    }
    let radicand = parse_t_poly(field, &d.value, line, d.value_col)?;
    if !radicand.is_monic() {
        return Err(err(
            line,
            d.value_col,
            ParseErrorKind::NotMonic(d.value.clone()),
        ));
    }
    let exponent = parse_uint(&m.value, line, m.value_col)?;
    if exponent == 0 {
        return Err(err(
            line,
            m.value_col,
            ParseErrorKind::Syntax("exponent must be positive".into()),
        ));
    }
    let unit_order = field.unit_order();
    if opts.strict && unit_order % exponent != 0 {
        return Err(err(
            line,
            m.value_col,
            ParseErrorKind::ExponentNotDividing {
                m: exponent,
                unit_order,
            },
        ));
    }
    Ok(Component {
        gamma,
        radicand,
        exponent,
    })
}

/// Parses a job file. Flags not expressible in the file (seed, format,
/// report sections) take their defaults; `strict` is copied from `opts`.
pub fn parse_input(text: &str, opts: &ParseOptions) -> Result<JobConfig, ParseError> {
    let mut field: Option<FieldLine> = None;
    let mut components = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.trim_end().is_empty() {
            continue;
        }
        let start = body.len() - trimmed.len();
        let word_len = trimmed
            .find(|c: char| c.is_whitespace())
            .unwrap_or(trimmed.len());
        let word = &trimmed[..word_len];
        let rest_start = start + word_len;
        let col = start + 1;
        match word {
            "field" => {
                if field.is_some() {
                    return Err(err(line, col, ParseErrorKind::DuplicateField));
                }
                let pairs = split_pairs(&body[rest_start..], rest_start, line)?;
                field = Some(build_field(&pairs, line, col, opts)?);
            }
            "component" => {
                let Some(FieldLine { field: f, .. }) = &field else {
                    return Err(err(line, col, ParseErrorKind::ComponentBeforeField));
                };
                let pairs = split_pairs(&body[rest_start..], rest_start, line)?;
                components.push(build_component(f, &pairs, line, col, opts)?);
            }
            other => {
                let w = other.split('=').next().unwrap_or(other);
                return Err(err(line, col, ParseErrorKind::UnknownDirective(w.into())));
            }
        }
    }
    let Some(FieldLine {
        field,
        modulus,
        generator,
    }) = field
    else {
        return Err(err(
            last_line.max(1),
            1,
            ParseErrorKind::MissingKey("field"),
        ));
    };
    if components.is_empty() {
        return Err(err(last_line.max(1), 1, ParseErrorKind::NoComponents));
    }
    Ok(JobConfig {
        field,
        modulus,
        generator,
        components,
        seed: 0,
        format: OutputFormat::default(),
        include_infinite: false,
        include_comparison: false,
        strict: opts.strict,
        parallel: false,
    })
}
