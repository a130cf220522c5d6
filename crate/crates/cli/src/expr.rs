//! Expression language for field elements.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' '-'? integer)?
//! atom   := integer | ident | '(' expr ')'
//! ```

use std::fmt;

/// Parse tree of an expression. Identifiers are resolved against the
/// allowed names at parse time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// A nonnegative literal; signs are `Neg` nodes.
    Int(i128),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at byte {}", self.message, self.offset)
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset, message: message.into() })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
            } else if self.eat('/') {
                acc = Expr::Div(Box::new(acc), Box::new(self.factor()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        self.skip_ws();
        let start = self.pos;
        let n = self.integer()?;
        let e = i64::try_from(n).or_else(|_| self.err(start, "exponent out of range"))?;
        Ok(Expr::Pow(Box::new(base), if negative { -e } else { e }))
    }

    fn integer(&mut self) -> Result<i128, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..].bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return self.err(start, "expected an integer");
        }
        self.pos += len;
        self.src[start..self.pos].parse().or_else(|_| self.err(start, "integer out of range"))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let Some(c) = self.peek() else {
            return self.err(self.pos, "unexpected end of input");
        };
        let start = self.pos;
        if c.is_ascii_digit() {
            return Ok(Expr::Int(self.integer()?));
        }
        if c == '(' {
            self.pos += 1;
            let inner = self.expr()?;
            if !self.eat(')') {
                return self.err(self.pos, "expected ')'");
            }
            return Ok(inner);
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let len = self.src[start..].bytes().take_while(|b| b.is_ascii_alphanumeric() || *b == b'_').count();
            self.pos += len;
            let name = &self.src[start..self.pos];
            if !self.names.contains(&name) {
                return self.err(start, format!("unknown identifier {name}"));
            }
            return Ok(Expr::Ident(name.to_string()));
        }
        self.err(start, format!("unexpected character {c:?}"))
    }
}

/// Parses `src`, accepting only the identifiers in `names`.
pub fn parse(src: &str, names: &[&str]) -> Result<Expr, ParseError> {
    let mut p = Parser { src, pos: 0, names };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err(p.pos, "unexpected trailing input");
    }
    Ok(e)
}

impl fmt::Display for Expr {
    /// Fully parenthesized, so that reparsing gives the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Ident(s) => f.write_str(s),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, e) => write!(f, "({a}^{e})"),
        }
    }
}

/// The operations an expression needs from its target ring.
pub trait Algebra {
    type Value;
    type Error;

    fn int(&self, n: i128) -> Result<Self::Value, Self::Error>;
    fn ident(&self, name: &str) -> Result<Self::Value, Self::Error>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, Self::Error>;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, Self::Error>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, Self::Error>;
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, Self::Error>;
    fn neg(&self, a: &Self::Value) -> Result<Self::Value, Self::Error>;
    fn pow(&self, a: &Self::Value, e: i64) -> Result<Self::Value, Self::Error>;
}

impl Expr {
    pub fn eval<A: Algebra>(&self, alg: &A) -> Result<A::Value, A::Error> {
        let bin = |a: &Expr, b: &Expr| -> Result<(A::Value, A::Value), A::Error> { Ok((a.eval(alg)?, b.eval(alg)?)) };
        match self {
            Expr::Int(n) => alg.int(*n),
            Expr::Ident(s) => alg.ident(s),
            Expr::Neg(a) => alg.neg(&a.eval(alg)?),
            Expr::Add(a, b) => bin(a, b).and_then(|(x, y)| alg.add(&x, &y)),
            Expr::Sub(a, b) => bin(a, b).and_then(|(x, y)| alg.sub(&x, &y)),
            Expr::Mul(a, b) => bin(a, b).and_then(|(x, y)| alg.mul(&x, &y)),
            Expr::Div(a, b) => bin(a, b).and_then(|(x, y)| alg.div(&x, &y)),
            Expr::Pow(a, e) => alg.pow(&a.eval(alg)?, *e),
        }
    }
}
