//! Symbolic expressions over the space variable `x` and the time variable `t`.
//!
//! The grammar is deliberately small and every primitive is smooth, so any
//! parsed potential is C-infinity and closed under differentiation:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' integer)?
//! base   := number | 'x' | 't' | '(' expr ')' | func '(' expr ')' | '-' base
//! func   := exp | log | sin | cos
//! ```
//!
//! The only simplification performed is constant folding (plus the additive
//! and multiplicative identities), so printed expressions re-parse to the
//! same tree.

use std::fmt;

use crate::error::{Error, Result};

/// A variable of the space-time expression grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    /// Space variable `x`.
    X,
    /// Time variable `t`.
    T,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => write!(f, "x"),
            Var::T => write!(f, "t"),
        }
    }
}

/// Expression tree. Powers carry integer exponents only; everything else
/// needed (such as real powers of moduli in the toric module) is expressed
/// through `exp` and `log`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Neg(Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    /// Sum with constant folding and identity elimination.
    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
            (Expr::Const(x), b) if x == 0.0 => b,
            (a, Expr::Const(y)) if y == 0.0 => a,
            (a, b) => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
            (a, Expr::Const(y)) if y == 0.0 => a,
            (Expr::Const(x), b) if x == 0.0 => Expr::neg(b),
            (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
            (Expr::Const(x), _) | (_, Expr::Const(x)) if x == 0.0 => Expr::Const(0.0),
            (Expr::Const(x), b) if x == 1.0 => b,
            (a, Expr::Const(y)) if y == 1.0 => a,
            (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) if y != 0.0 && (x / y).is_finite() => {
                Expr::Const(x / y)
            }
            (a, Expr::Const(y)) if y == 1.0 => a,
            (Expr::Const(x), b) if x == 0.0 => {
                // 0/g stays 0 as a function wherever g is defined
                let _ = b;
                Expr::Const(0.0)
            }
            (a, b) => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn pow(base: Expr, n: i32) -> Expr {
        match (base, n) {
            (_, 0) => Expr::Const(1.0),
            (b, 1) => b,
            (Expr::Const(c), n) if powi(c, n).is_finite() => Expr::Const(powi(c, n)),
            (b, n) => Expr::Pow(Box::new(b), n),
        }
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::Const(-c),
            a => Expr::Neg(Box::new(a)),
        }
    }

    pub fn exp(a: Expr) -> Expr {
        match a {
            Expr::Const(c) if c.exp().is_finite() => Expr::Const(c.exp()),
            a => Expr::Exp(Box::new(a)),
        }
    }

    pub fn log(a: Expr) -> Expr {
        match a {
            Expr::Const(c) if c > 0.0 => Expr::Const(c.ln()),
            a => Expr::Log(Box::new(a)),
        }
    }

    pub fn sin(a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::Const(c.sin()),
            a => Expr::Sin(Box::new(a)),
        }
    }

    pub fn cos(a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::Const(c.cos()),
            a => Expr::Cos(Box::new(a)),
        }
    }

    /// Evaluate at `(x, t)`. Deterministic and total on the declared domain;
    /// outside it non-finite values propagate in the usual IEEE way.
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(Var::X) => x,
            Expr::Var(Var::T) => t,
            Expr::Add(a, b) => a.eval(x, t) + b.eval(x, t),
            Expr::Sub(a, b) => a.eval(x, t) - b.eval(x, t),
            Expr::Mul(a, b) => a.eval(x, t) * b.eval(x, t),
            Expr::Div(a, b) => a.eval(x, t) / b.eval(x, t),
            Expr::Pow(a, n) => powi(a.eval(x, t), *n),
            Expr::Neg(a) => -a.eval(x, t),
            Expr::Exp(a) => a.eval(x, t).exp(),
            Expr::Log(a) => a.eval(x, t).ln(),
            Expr::Sin(a) => a.eval(x, t).sin(),
            Expr::Cos(a) => a.eval(x, t).cos(),
        }
    }

    /// Exact symbolic derivative with respect to `v`.
    pub fn diff(&self, v: Var) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var(w) => Expr::Const(if *w == v { 1.0 } else { 0.0 }),
            Expr::Add(a, b) => Expr::add(a.diff(v), b.diff(v)),
            Expr::Sub(a, b) => Expr::sub(a.diff(v), b.diff(v)),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.diff(v), (**b).clone()),
                Expr::mul((**a).clone(), b.diff(v)),
            ),
            Expr::Div(a, b) => Expr::div(
                Expr::sub(
                    Expr::mul(a.diff(v), (**b).clone()),
                    Expr::mul((**a).clone(), b.diff(v)),
                ),
                Expr::pow((**b).clone(), 2),
            ),
            Expr::Pow(a, n) => Expr::mul(
                Expr::mul(Expr::Const(f64::from(*n)), Expr::pow((**a).clone(), n - 1)),
                a.diff(v),
            ),
            Expr::Neg(a) => Expr::neg(a.diff(v)),
            Expr::Exp(a) => Expr::mul(Expr::exp((**a).clone()), a.diff(v)),
            Expr::Log(a) => Expr::div(a.diff(v), (**a).clone()),
            Expr::Sin(a) => Expr::mul(Expr::cos((**a).clone()), a.diff(v)),
            Expr::Cos(a) => Expr::neg(Expr::mul(Expr::sin((**a).clone()), a.diff(v))),
        }
    }

    pub fn uses(&self, v: Var) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(w) => *w == v,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.uses(v) || b.uses(v)
            }
            Expr::Pow(a, _)
            | Expr::Neg(a)
            | Expr::Exp(a)
            | Expr::Log(a)
            | Expr::Sin(a)
            | Expr::Cos(a) => a.uses(v),
        }
    }
}

fn powi(base: f64, n: i32) -> f64 {
    base.powi(n)
}

// Precedence levels used by the printer; parentheses are inserted whenever a
// child binds less tightly than its context requires, so print -> parse is
// the identity on trees.
const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => PREC_ADD,
        Expr::Mul(..) | Expr::Div(..) => PREC_MUL,
        Expr::Neg(..) => PREC_NEG,
        Expr::Pow(..) => PREC_POW,
        Expr::Const(c) if *c < 0.0 => PREC_NEG,
        _ => PREC_ATOM,
    }
}

fn fmt_prec(e: &Expr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let p = precedence(e);
    let parens = p < min;
    if parens {
        write!(f, "(")?;
    }
    match e {
        Expr::Const(c) => write!(f, "{}", c)?,
        Expr::Var(v) => write!(f, "{}", v)?,
        Expr::Add(a, b) => {
            fmt_prec(a, PREC_ADD, f)?;
            write!(f, "+")?;
            fmt_prec(b, PREC_ADD + 1, f)?;
        }
        Expr::Sub(a, b) => {
            fmt_prec(a, PREC_ADD, f)?;
            write!(f, "-")?;
            fmt_prec(b, PREC_ADD + 1, f)?;
        }
        Expr::Mul(a, b) => {
            fmt_prec(a, PREC_MUL, f)?;
            write!(f, "*")?;
            fmt_prec(b, PREC_MUL + 1, f)?;
        }
        Expr::Div(a, b) => {
            fmt_prec(a, PREC_MUL, f)?;
            write!(f, "/")?;
            fmt_prec(b, PREC_MUL + 1, f)?;
        }
        // The grammar hangs '^' off a unary-level base, so a Neg base needs
        // no parens, while printing `-(x^2)` for Neg(Pow) keeps the trees apart.
        Expr::Pow(a, n) => {
            fmt_prec(a, PREC_NEG, f)?;
            write!(f, "^{}", n)?;
        }
        Expr::Neg(a) => {
            write!(f, "-")?;
            match **a {
                Expr::Pow(..) => {
                    write!(f, "(")?;
                    fmt_prec(a, 0, f)?;
                    write!(f, ")")?;
                }
                _ => fmt_prec(a, PREC_NEG, f)?,
            }
        }
        Expr::Exp(a) => {
            write!(f, "exp(")?;
            fmt_prec(a, 0, f)?;
            write!(f, ")")?;
        }
        Expr::Log(a) => {
            write!(f, "log(")?;
            fmt_prec(a, 0, f)?;
            write!(f, ")")?;
        }
        Expr::Sin(a) => {
            write!(f, "sin(")?;
            fmt_prec(a, 0, f)?;
            write!(f, ")")?;
        }
        Expr::Cos(a) => {
            write!(f, "cos(")?;
            fmt_prec(a, 0, f)?;
            write!(f, ")")?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_prec(self, 0, f)
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = Expr::add(acc, self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = Expr::sub(acc, self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = Expr::mul(acc, self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = Expr::div(acc, self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.integer()?;
            return Ok(Expr::pow(base, n));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i32> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.err("expected an integer exponent"));
        }
        self.src[start..self.pos]
            .parse::<i32>()
            .map_err(|_| self.err("exponent out of range"))
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::neg(self.base()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            Some(c) => Err(self.err(format!("unexpected character `{}`", c as char))),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit() || *b == b'.')
        {
            self.pos += 1;
        }
        // scientific notation as produced by the f64 printer
        if self
            .bytes
            .get(self.pos)
            .is_some_and(|b| *b == b'e' || *b == b'E')
        {
            let mark = self.pos;
            self.pos += 1;
            if self
                .bytes
                .get(self.pos)
                .is_some_and(|b| *b == b'+' || *b == b'-')
            {
                self.pos += 1;
            }
            if self
                .bytes
                .get(self.pos)
                .is_some_and(|b| b.is_ascii_digit())
            {
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_digit())
                {
                    self.pos += 1;
                }
            } else {
                self.pos = mark;
            }
        }
        self.src[start..self.pos]
            .parse::<f64>()
            .map(Expr::Const)
            .map_err(|_| Error::Syntax {
                offset: start,
                message: format!("invalid number `{}`", &self.src[start..self.pos]),
            })
    }

    fn ident(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphabetic())
        {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        match name {
            "x" => Ok(Expr::Var(Var::X)),
            "t" => Ok(Expr::Var(Var::T)),
            "exp" | "log" | "sin" | "cos" => {
                if self.peek() != Some(b'(') {
                    return Err(self.err(format!("expected `(` after `{}`", name)));
                }
                self.pos += 1;
                let arg = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(match name {
                    "exp" => Expr::exp(arg),
                    "log" => Expr::log(arg),
                    "sin" => Expr::sin(arg),
                    _ => Expr::cos(arg),
                })
            }
            _ => Err(Error::UnknownIdentifier {
                offset: start,
                name: name.to_string(),
            }),
        }
    }
}

/// Parse `text` against the expression grammar.
pub fn parse_expression(text: &str) -> Result<ScalarField> {
    let mut p = Parser::new(text);
    let ast = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(ScalarField { ast })
}

/// A symbolic scalar field over `(x, t)`: the common representation for
/// boundary potentials and closed-form solutions. Exact evaluation and exact
/// differentiation; immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    ast: Expr,
}

impl ScalarField {
    pub fn parse(text: &str) -> Result<Self> {
        parse_expression(text)
    }

    pub fn from_expr(ast: Expr) -> Self {
        ScalarField { ast }
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    /// Number of distinct variables the field depends on.
    pub fn arity(&self) -> usize {
        usize::from(self.ast.uses(Var::X)) + usize::from(self.ast.uses(Var::T))
    }

    pub fn uses(&self, v: Var) -> bool {
        self.ast.uses(v)
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.ast.eval(x, t)
    }

    /// Evaluate a space-only field.
    pub fn eval_space(&self, x: f64) -> f64 {
        self.ast.eval(x, 0.0)
    }

    pub fn differentiate(&self, v: Var) -> ScalarField {
        ScalarField {
            ast: self.ast.diff(v),
        }
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ast.fmt(f)
    }
}
