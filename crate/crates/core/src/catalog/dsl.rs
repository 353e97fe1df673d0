//! Line-oriented system-description language.
//!
//! ```text
//! system sl2r
//! dim 2
//! oneforms w1 w2 w3
//! pseudos y1 y2
//! connection [[w1, w2], [w3, -w1]]
//! curvature auto
//! ```
//!
//! Optional statements: `algebra <label>`, `params <ident>+` (constant
//! symbols), `traceless`, and `d <oneform> = <expr>` lines under
//! `curvature explicit`. Newlines inside brackets or parentheses are ignored,
//! so a connection may span several lines.
//!
//! Expressions use `+ - * / ^`, juxtaposition, parentheses, integer and `p/q`
//! constants, `i`, `sqrt3` and `exp(c*y)`. `^` followed by an integer is a
//! power; otherwise it is the wedge product.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{ParseError, Result};
use crate::exterior::{FormExpr, Gen};
use crate::scalar::{Coeff, Rational, Scalar, Symbol};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eq,
    Newline,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let simple = match c {
                '+' => Some(Tok::Plus),
                '-' => Some(Tok::Minus),
                '*' => Some(Tok::Star),
                '/' => Some(Tok::Slash),
                '^' => Some(Tok::Caret),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '[' => Some(Tok::LBracket),
                ']' => Some(Tok::RBracket),
                ',' => Some(Tok::Comma),
                '=' => Some(Tok::Eq),
                _ => None,
            };
            if let Some(tok) = simple {
                match tok {
                    Tok::LParen | Tok::LBracket => depth += 1,
                    Tok::RParen | Tok::RBracket => depth -= 1,
                    _ => {}
                }
                out.push(Token { tok, line: line_no, col });
                i += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '.' {
                    return Err(ParseError::new(line_no, i + 1, "floating-point literals are not accepted; use p/q"));
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token { tok: Tok::Int(s.parse().expect("digits")), line: line_no, col });
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: line_no, col });
                continue;
            }
            return Err(ParseError::new(line_no, col, format!("unexpected character `{}`", c)));
        }
        if depth == 0 {
            out.push(Token { tok: Tok::Newline, line: line_no, col: chars.len() + 1 });
        }
    }
    if depth != 0 {
        let (line, col) = out.last().map(|t| (t.line, t.col)).unwrap_or((1, 1));
        return Err(ParseError::new(line, col, "unbalanced brackets"));
    }
    Ok(out)
}

/// What a bare identifier denotes in an expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Gen(Gen),
    Sym(Symbol),
}

pub type Resolver<'a> = dyn Fn(&str) -> Option<Atom> + 'a;

/// Token cursor shared by the expression and statement parsers.
pub struct Cursor<'t> {
    toks: &'t [Token],
    pos: usize,
}

impl<'t> Cursor<'t> {
    pub fn new(toks: &'t [Token]) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> Option<&'t Token> {
        self.toks.get(self.pos)
    }

    pub fn peek_at(&self, k: usize) -> Option<&'t Token> {
        self.toks.get(self.pos + k)
    }

    pub fn next(&mut self) -> Option<&'t Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn here(&self) -> (usize, usize) {
        match self.peek().or_else(|| self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        }
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        ParseError::new(l, c, msg)
    }

    pub fn is(&self, tok: &Tok) -> bool {
        self.peek().map(|t| &t.tok == tok).unwrap_or(false)
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.is(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected {}", what)))
        }
    }

    pub fn ident(&mut self, what: &str) -> Result<&'t Token, ParseError> {
        match self.peek() {
            Some(t @ Token { tok: Tok::Ident(_), .. }) => {
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.error(format!("expected {}", what))),
        }
    }
}

pub fn token_ident(t: &Token) -> &str {
    match &t.tok {
        Tok::Ident(s) => s,
        _ => "",
    }
}

/// Parse one expression starting at the cursor.
pub fn parse_expr(cur: &mut Cursor<'_>, resolve: &Resolver<'_>) -> Result<FormExpr, ParseError> {
    let mut acc = if cur.eat(&Tok::Minus) {
        -parse_term(cur, resolve)?
    } else {
        cur.eat(&Tok::Plus);
        parse_term(cur, resolve)?
    };
    loop {
        if cur.eat(&Tok::Plus) {
            acc = &acc + &parse_term(cur, resolve)?;
        } else if cur.eat(&Tok::Minus) {
            acc = &acc - &parse_term(cur, resolve)?;
        } else {
            return Ok(acc);
        }
    }
}

fn starts_atom(t: Option<&Token>) -> bool {
    matches!(t.map(|t| &t.tok), Some(Tok::Ident(_) | Tok::Int(_) | Tok::LParen))
}

fn parse_term(cur: &mut Cursor<'_>, resolve: &Resolver<'_>) -> Result<FormExpr, ParseError> {
    let mut acc = parse_power(cur, resolve)?;
    loop {
        if cur.eat(&Tok::Star) || cur.eat(&Tok::Caret) {
            acc = acc.wedge(&parse_power(cur, resolve)?);
        } else if cur.is(&Tok::Slash) {
            let (l, c) = cur.here();
            cur.next();
            let den = parse_power(cur, resolve)?;
            let inv = den
                .as_scalar()
                .and_then(|s| s.as_constant())
                .and_then(|k| k.inv())
                .ok_or_else(|| ParseError::new(l, c, "division by a non-constant or zero"))?;
            acc = acc.scale_coeff(&inv);
        } else if starts_atom(cur.peek()) {
            acc = acc.wedge(&parse_power(cur, resolve)?);
        } else {
            return Ok(acc);
        }
    }
}

fn parse_power(cur: &mut Cursor<'_>, resolve: &Resolver<'_>) -> Result<FormExpr, ParseError> {
    let base = parse_atom(cur, resolve)?;
    let int_next = |k: usize| matches!(cur.peek_at(k).map(|t| &t.tok), Some(Tok::Int(_)));
    let exponent_follows =
        cur.is(&Tok::Caret) && (int_next(1) || (matches!(cur.peek_at(1).map(|t| &t.tok), Some(Tok::Minus)) && int_next(2)));
    if !exponent_follows {
        return Ok(base);
    }
    let (l, c) = cur.here();
    cur.next();
    let neg = cur.eat(&Tok::Minus);
    let e = match cur.next().map(|t| &t.tok) {
        Some(Tok::Int(n)) => n.to_u32().ok_or_else(|| ParseError::new(l, c, "exponent too large"))?,
        _ => unreachable!("checked above"),
    };
    let s = base.as_scalar().ok_or_else(|| ParseError::new(l, c, "only scalars can be raised to a power"))?;
    let s = if neg {
        s.inv_monomial().ok_or_else(|| ParseError::new(l, c, "negative power of a non-monomial"))?
    } else {
        s
    };
    Ok(FormExpr::scalar(s.pow(e)))
}

fn parse_atom(cur: &mut Cursor<'_>, resolve: &Resolver<'_>) -> Result<FormExpr, ParseError> {
    let t = cur.next().ok_or_else(|| cur.error("unexpected end of input"))?;
    match &t.tok {
        Tok::Int(n) => Ok(FormExpr::scalar(Scalar::constant(Coeff::from_rational(Rational::from_integer(
            n.clone(),
        ))))),
        Tok::LParen => {
            let e = parse_expr(cur, resolve)?;
            cur.expect(&Tok::RParen, "`)`")?;
            Ok(e)
        }
        Tok::Ident(name) => match name.as_str() {
            "i" => Ok(FormExpr::scalar(Scalar::constant(Coeff::i()))),
            "sqrt3" => Ok(FormExpr::scalar(Scalar::constant(Coeff::sqrt3()))),
            "exp" if cur.is(&Tok::LParen) => {
                cur.next();
                let arg = parse_expr(cur, resolve)?;
                cur.expect(&Tok::RParen, "`)`")?;
                if let Some(s) = arg.as_scalar() {
                    if s.is_zero() {
                        return Ok(FormExpr::one());
                    }
                    if let Some((rate, sym)) = s.as_scaled_symbol() {
                        return Ok(FormExpr::scalar(Scalar::exp(sym, rate)));
                    }
                }
                Err(ParseError::new(t.line, t.col, "exp() takes a rational multiple of one symbol"))
            }
            _ => match resolve(name) {
                Some(Atom::Gen(g)) => Ok(FormExpr::gen(g)),
                Some(Atom::Sym(s)) => Ok(FormExpr::scalar(Scalar::symbol(s))),
                None => Err(ParseError::new(t.line, t.col, format!("unknown name `{}`", name))),
            },
        },
        other => Err(ParseError::new(t.line, t.col, format!("unexpected {}", describe(other)))),
    }
}

pub fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{}`", s),
        Tok::Int(n) => format!("`{}`", n),
        Tok::Newline => "end of line".into(),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::LBracket => "`[`".into(),
        Tok::RBracket => "`]`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Eq => "`=`".into(),
    }
}

/// Resolver for the naming scheme used throughout the crate: `w<k>` one-forms,
/// `th<k>` curvature two-forms, `al<k>`/`at<l>_<j>` Pfaffian forms and `d<v>`
/// differentials of any other name. Everything else is an indeterminate.
pub fn conventional(name: &str) -> Option<Atom> {
    fn numbered(name: &str, prefix: &str) -> bool {
        name.strip_prefix(prefix)
            .map(|r| !r.is_empty() && r.chars().all(|c| c.is_ascii_digit() || c == '_'))
            .unwrap_or(false)
    }
    if numbered(name, "w") {
        Some(Atom::Gen(Gen::omega(name)))
    } else if numbered(name, "th") {
        Some(Atom::Gen(Gen::theta(name)))
    } else if numbered(name, "al") || numbered(name, "at") {
        Some(Atom::Gen(Gen::alpha(name)))
    } else if let Some(rest) = name.strip_prefix('d').filter(|r| !r.is_empty()) {
        Some(Atom::Gen(Gen::diff(rest)))
    } else {
        Some(Atom::Sym(Symbol::new(name)))
    }
}

/// Parse a standalone expression with the conventional resolver.
pub fn parse_form(text: &str) -> Result<FormExpr, ParseError> {
    parse_form_with(text, &conventional)
}

pub fn parse_form_with(text: &str, resolve: &Resolver<'_>) -> Result<FormExpr, ParseError> {
    let toks: Vec<Token> = lex(text)?.into_iter().filter(|t| t.tok != Tok::Newline).collect();
    let mut cur = Cursor::new(&toks);
    if cur.at_end() {
        return Err(ParseError::new(1, 1, "empty expression"));
    }
    let e = parse_expr(&mut cur, resolve)?;
    if let Some(t) = cur.peek() {
        return Err(ParseError::new(t.line, t.col, format!("unexpected {}", describe(&t.tok))));
    }
    Ok(e)
}

pub fn parse_scalar(text: &str) -> Result<Scalar, ParseError> {
    let f = parse_form(text)?;
    f.as_scalar().ok_or_else(|| ParseError::new(1, 1, "expected a scalar expression"))
}

pub(crate) fn nonneg_int(t: &Token) -> Option<usize> {
    match &t.tok {
        Tok::Int(n) if !n.is_negative() && !n.is_zero() => n.to_usize(),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_and_wedges() {
        let f = parse_form("y3^2*w2 + 2*y3 w1 - w3").unwrap();
        assert_eq!(f.to_string(), "2*y3*w1 + y3^2*w2 - w3");
        let g = parse_form("w1^w2").unwrap();
        assert_eq!(g.to_string(), "w1^w2");
        assert!(parse_form("w2^w1 + w1^w2").unwrap().is_zero());
    }

    #[test]
    fn constants() {
        let f = parse_form("1/3*sqrt3*w8 - i*w2").unwrap();
        assert_eq!(f.to_string(), "-i*w2 + 1/3*sqrt3*w8");
        assert_eq!(parse_form("a1^-1").unwrap().to_string(), "a1^-1");
    }

    #[test]
    fn exponentials() {
        let f = parse_form("exp(-2*y5)*w2").unwrap();
        assert_eq!(f.to_string(), "exp(-2*y5)*w2");
    }

    #[test]
    fn display_round_trips() {
        for s in ["(1 + y4^2)*w1", "-2*w1^w3 + dy1^w2", "(1 - 2*i)*th1", "y1^-1*exp(2*y5)*al3^w2"] {
            let f = parse_form(s).unwrap();
            assert_eq!(parse_form(&f.to_string()).unwrap(), f, "{}", s);
        }
    }

    #[test]
    fn diagnostics_carry_position() {
        let e = parse_form("w1 + ) ").unwrap_err();
        assert_eq!((e.line, e.col), (1, 6));
        let e = parse_form("w1 + 0.5*w2").unwrap_err();
        assert_eq!((e.line, e.col), (1, 7));
        assert!(parse_form("w1/y1").is_err());
    }
}
