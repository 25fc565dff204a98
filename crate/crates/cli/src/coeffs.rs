//! Coefficient specifications:
//!
//! * `real: <expr>` gives `c_n = expr(n) * 1`
//! * `element: [x1, ..., xN]` or `element: [x1, ..., xN] * <expr>` gives
//!   `c_n = expr(n) * x` (the factor defaults to 1)
//! * `builtin: <name>` picks a registered series (exp, cos, band, ...)
//!
//! Expressions use decimal literals, the index `n`, `+ - * / ^`, unary minus,
//! postfix `!` and parentheses. `×` is accepted for `*`.

use std::fmt;
use std::sync::Arc;

use acalc_core::power_series::{builtin_registry, builtin_series, PowerSeries};
use acalc_core::{Algebra, Element};

/// Leading indices scanned for non-finite values, such as `n = 0` in `3^n / n`.
const LEADING_SCAN: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// 1-based character column in the full specification.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        column,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Index,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Fact(Box<Expr>),
}

fn factorial(x: f64) -> f64 {
    if x < 0.0 || x.fract() != 0.0 {
        return f64::NAN;
    }
    if x > 170.0 {
        return f64::INFINITY;
    }
    (2..=x as u32).fold(1.0, |acc, k| acc * k as f64)
}

impl Expr {
    pub fn eval(&self, n: f64) -> f64 {
        match self {
            Expr::Num(x) => *x,
            Expr::Index => n,
            Expr::Neg(a) => -a.eval(n),
            Expr::Add(a, b) => a.eval(n) + b.eval(n),
            Expr::Sub(a, b) => a.eval(n) - b.eval(n),
            Expr::Mul(a, b) => a.eval(n) * b.eval(n),
            Expr::Div(a, b) => a.eval(n) / b.eval(n),
            Expr::Pow(a, b) => {
                let (x, e) = (a.eval(n), b.eval(n));
                if e.fract() == 0.0 && e.abs() < i32::MAX as f64 {
                    x.powi(e as i32)
                } else {
                    x.powf(e)
                }
            }
            Expr::Fact(a) => factorial(a.eval(n)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    Index,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Bang,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(src: &[char], offset: usize) -> Result<Lexer, ParseError> {
    let mut toks = Vec::new();
    let mut i = 0;
    while i < src.len() {
        let c = src[i];
        let col = offset + i + 1;
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' | '×' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '!' => Some(Tok::Bang),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            'n' => Some(Tok::Index),
            _ => None,
        };
        if let Some(t) = simple {
            toks.push((t, col));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < src.len() && (src[i].is_ascii_digit() || src[i] == '.') {
                i += 1;
            }
            if i < src.len() && (src[i] == 'e' || src[i] == 'E') {
                let mut j = i + 1;
                if j < src.len() && (src[j] == '+' || src[j] == '-') {
                    j += 1;
                }
                if j < src.len() && src[j].is_ascii_digit() {
                    i = j;
                    while i < src.len() && src[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = src[start..i].iter().collect();
            match text.parse::<f64>() {
                Ok(x) => toks.push((Tok::Num(x), col)),
                Err(_) => return err(col, format!("malformed number `{text}`")),
            }
        } else {
            return err(col, format!("unexpected character `{c}`"));
        }
    }
    Ok(Lexer {
        toks,
        end: offset + src.len() + 1,
    })
}

struct Parser {
    lx: Lexer,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.lx.toks.get(self.pos).map(|t| t.0)
    }

    fn column(&self) -> usize {
        self.lx.toks.get(self.pos).map_or(self.lx.end, |t| t.1)
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(t @ (Tok::Plus | Tok::Minus)) = self.peek() {
            self.bump();
            let rhs = self.term()?;
            lhs = if t == Tok::Plus {
                Expr::Add(lhs.into(), rhs.into())
            } else {
                Expr::Sub(lhs.into(), rhs.into())
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(t @ (Tok::Star | Tok::Slash)) = self.peek() {
            self.bump();
            let rhs = self.unary()?;
            lhs = if t == Tok::Star {
                Expr::Mul(lhs.into(), rhs.into())
            } else {
                Expr::Div(lhs.into(), rhs.into())
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(self.unary()?.into()));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.postfix()?;
        if self.peek() == Some(Tok::Caret) {
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::Pow(base.into(), exp.into()));
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.primary()?;
        while self.peek() == Some(Tok::Bang) {
            self.bump();
            e = Expr::Fact(e.into());
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let col = self.column();
        match self.peek() {
            Some(Tok::Num(x)) => {
                self.bump();
                Ok(Expr::Num(x))
            }
            Some(Tok::Index) => {
                self.bump();
                Ok(Expr::Index)
            }
            Some(Tok::LParen) => {
                self.bump();
                let e = self.expr()?;
                if self.peek() != Some(Tok::RParen) {
                    return err(self.column(), "expected `)`");
                }
                self.bump();
                Ok(e)
            }
            Some(_) => err(col, "expected a number, `n` or `(`"),
            None => err(col, "unexpected end of expression"),
        }
    }
}

/// Parses an expression occupying `src`, which starts at 0-based character
/// offset `offset` of the full specification.
pub fn parse_expr(src: &[char], offset: usize) -> Result<Expr, ParseError> {
    let mut p = Parser {
        lx: lex(src, offset)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos < p.lx.toks.len() {
        return err(p.column(), "unexpected trailing input");
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoeffSpec {
    Real(Expr),
    Element { coords: Vec<f64>, factor: Option<Expr> },
    Builtin(String),
}

fn skip_ws(s: &[char], mut i: usize) -> usize {
    while i < s.len() && s[i].is_whitespace() {
        i += 1;
    }
    i
}

pub fn parse_spec(spec: &str) -> Result<CoeffSpec, ParseError> {
    let chars: Vec<char> = spec.chars().collect();
    let Some(colon) = chars.iter().position(|&c| c == ':') else {
        return err(1, "expected `real:`, `element:` or `builtin:`");
    };
    let kind: String = chars[..colon].iter().collect::<String>().trim().to_string();
    let body = skip_ws(&chars, colon + 1);
    match kind.as_str() {
        "real" => Ok(CoeffSpec::Real(parse_expr(&chars[body..], body)?)),
        "builtin" => {
            let name: String = chars[body..].iter().collect::<String>().trim().to_string();
            if builtin_registry().get(&name).is_none() {
                let known: Vec<_> = builtin_registry().names().collect();
                return err(body + 1, format!("unknown builtin `{name}` (known: {})", known.join(", ")));
            }
            Ok(CoeffSpec::Builtin(name))
        }
        "element" => {
            if chars.get(body) != Some(&'[') {
                return err(body + 1, "expected `[`");
            }
            let Some(close) = chars[body..].iter().position(|&c| c == ']').map(|k| k + body) else {
                return err(chars.len() + 1, "missing `]`");
            };
            let coords = parse_csv_at(&chars[body + 1..close], body + 1)?;
            let rest = skip_ws(&chars, close + 1);
            let factor = if rest >= chars.len() {
                None
            } else if matches!(chars[rest], '*' | '×') {
                Some(parse_expr(&chars[rest + 1..], rest + 1)?)
            } else {
                return err(rest + 1, "expected `*` followed by a real factor");
            };
            Ok(CoeffSpec::Element { coords, factor })
        }
        _ => err(1, format!("unknown coefficient kind `{kind}`")),
    }
}

fn parse_csv_at(s: &[char], offset: usize) -> Result<Vec<f64>, ParseError> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, &c) in s.iter().chain(std::iter::once(&',')).enumerate() {
        if c == ',' {
            let piece: String = s[start..i].iter().collect();
            let col = offset + start + 1;
            let e = parse_expr(&s[start..i], offset + start)?;
            if expr_uses_index(&e) {
                return err(col, format!("coordinate `{}` must not depend on n", piece.trim()));
            }
            out.push(e.eval(0.0));
            start = i + 1;
        }
    }
    Ok(out)
}

fn expr_uses_index(e: &Expr) -> bool {
    match e {
        Expr::Num(_) => false,
        Expr::Index => true,
        Expr::Neg(a) | Expr::Fact(a) => expr_uses_index(a),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
            expr_uses_index(a) || expr_uses_index(b)
        }
    }
}

/// Evaluates `expr` as a coefficient sequence. A leading run of non-finite
/// values (the `n = 0` term of `3^n / n`) is read as zero coefficients;
/// later non-finite values are kept and reported by the series machinery.
fn sequence(expr: Expr) -> Result<impl Fn(usize) -> f64 + Send + Sync + 'static, String> {
    let expr = Arc::new(expr);
    let lead = (0..LEADING_SCAN).take_while(|&n| !expr.eval(n as f64).is_finite()).count();
    if lead == LEADING_SCAN {
        return Err(format!("coefficient expression is non-finite for n = 0..{}", LEADING_SCAN - 1));
    }
    Ok(move |n: usize| if n < lead { 0.0 } else { expr.eval(n as f64) })
}

pub fn build_series(spec: &CoeffSpec, alg: &Algebra) -> Result<PowerSeries, String> {
    match spec {
        CoeffSpec::Real(e) => Ok(PowerSeries::real(alg, sequence(e.clone())?)),
        CoeffSpec::Builtin(name) => builtin_series(name, alg).map_err(|e| e.to_string()),
        CoeffSpec::Element { coords, factor } => {
            let base = Element::new(alg, coords.clone()).map_err(|e| e.to_string())?;
            let factor = factor.clone().unwrap_or(Expr::Num(1.0));
            Ok(PowerSeries::scaled(&base, sequence(factor)?))
        }
    }
}
