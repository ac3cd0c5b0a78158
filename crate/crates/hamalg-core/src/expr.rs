//! Symbolic expressions over chart coordinates.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := "-" unary | power
//! power := atom ("^" ["-"] integer)?
//! atom  := number | ident | ident "(" expr ")" | "(" expr ")"
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`.
//! Functions: `sin`, `cos`, `exp`, `ln`, `sqrt`.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, PartialEq)]
pub enum Node {
    Num(f64),
    Var(usize),
    Neg(Expr),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Pow(Expr, i32),
    Call(Func, Expr),
}

/// Immutable, cheaply clonable expression tree. Variables are indices into
/// the owning chart's coordinate list.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, &|i, f| write!(f, "x{}", i), f, 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EvalError {
    DivisionByZero,
    LogOfNonPositive(f64),
    SqrtOfNegative(f64),
    NonFinite,
    /// Variable index outside the evaluation point.
    MissingCoordinate(usize),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::DivisionByZero => write!(f, "division by zero"),
            EvalError::LogOfNonPositive(v) => write!(f, "ln of non-positive value {}", v),
            EvalError::SqrtOfNegative(v) => write!(f, "sqrt of negative value {}", v),
            EvalError::NonFinite => write!(f, "non-finite intermediate value"),
            EvalError::MissingCoordinate(i) => write!(f, "point has no coordinate {}", i),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
    pub expected: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {} (expected {})", self.offset, self.message, self.expected)
    }
}

impl Expr {
    fn node(n: Node) -> Expr {
        Expr(Arc::new(n))
    }

    pub fn num(v: f64) -> Expr {
        Expr::node(Node::Num(v))
    }

    pub fn zero() -> Expr {
        Expr::num(0.0)
    }

    pub fn one() -> Expr {
        Expr::num(1.0)
    }

    pub fn var(index: usize) -> Expr {
        Expr::node(Node::Var(index))
    }

    pub fn kind(&self) -> &Node {
        &self.0
    }

    pub fn as_num(&self) -> Option<f64> {
        match *self.0 {
            Node::Num(v) => Some(v),
            _ => None,
        }
    }

    /// True only for the literal `0`.
    pub fn is_zero(&self) -> bool {
        self.as_num() == Some(0.0)
    }

    pub fn is_one(&self) -> bool {
        self.as_num() == Some(1.0)
    }

    /// True when the tree contains no variable reference.
    pub fn is_constant(&self) -> bool {
        match &*self.0 {
            Node::Num(_) => true,
            Node::Var(_) => false,
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.is_constant(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match &*self.0 {
            Node::Num(_) => None,
            Node::Var(i) => Some(*i),
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.max_var(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => match (a.max_var(), b.max_var()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, None) => x,
                (None, y) => y,
            },
        }
    }

    pub fn pow(&self, n: i32) -> Expr {
        match n {
            0 => Expr::one(),
            1 => self.clone(),
            _ => match self.as_num() {
                Some(v) if v != 0.0 || n > 0 => Expr::num(powi(v, n)),
                _ => Expr::node(Node::Pow(self.clone(), n)),
            },
        }
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::node(Node::Call(f, arg))
    }

    pub fn sin(&self) -> Expr {
        Expr::call(Func::Sin, self.clone())
    }

    pub fn cos(&self) -> Expr {
        Expr::call(Func::Cos, self.clone())
    }

    pub fn exp(&self) -> Expr {
        Expr::call(Func::Exp, self.clone())
    }

    pub fn ln(&self) -> Expr {
        Expr::call(Func::Ln, self.clone())
    }

    pub fn sqrt(&self) -> Expr {
        Expr::call(Func::Sqrt, self.clone())
    }

    pub fn scale(&self, k: f64) -> Expr {
        Expr::num(k) * self
    }

    /// Exact partial derivative with respect to variable `var`.
    pub fn diff(&self, var: usize) -> Expr {
        match &*self.0 {
            Node::Num(_) => Expr::zero(),
            Node::Var(i) => {
                if *i == var {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Neg(a) => -a.diff(var),
            Node::Add(a, b) => a.diff(var) + b.diff(var),
            Node::Sub(a, b) => a.diff(var) - b.diff(var),
            Node::Mul(a, b) => a.diff(var) * b + a * &b.diff(var),
            Node::Div(a, b) => {
                let num = a.diff(var) * b - a * &b.diff(var);
                if num.is_zero() {
                    num
                } else {
                    num / b.pow(2)
                }
            }
            Node::Pow(a, n) => {
                let da = a.diff(var);
                if da.is_zero() {
                    return da;
                }
                Expr::num(*n as f64) * a.pow(n - 1) * da
            }
            Node::Call(f, a) => {
                let da = a.diff(var);
                if da.is_zero() {
                    return da;
                }
                let outer = match f {
                    Func::Sin => a.cos(),
                    Func::Cos => -a.sin(),
                    Func::Exp => self.clone(),
                    Func::Ln => return da / a,
                    Func::Sqrt => return da / (Expr::num(2.0) * self),
                };
                outer * da
            }
        }
    }

    /// Evaluate at `point`, where `point[i]` is the value of variable `i`.
    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        let v = match &*self.0 {
            Node::Num(v) => *v,
            Node::Var(i) => *point.get(*i).ok_or(EvalError::MissingCoordinate(*i))?,
            Node::Neg(a) => -a.eval(point)?,
            Node::Add(a, b) => a.eval(point)? + b.eval(point)?,
            Node::Sub(a, b) => a.eval(point)? - b.eval(point)?,
            Node::Mul(a, b) => a.eval(point)? * b.eval(point)?,
            Node::Div(a, b) => {
                let d = b.eval(point)?;
                if d == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                a.eval(point)? / d
            }
            Node::Pow(a, n) => {
                let base = a.eval(point)?;
                if base == 0.0 && *n < 0 {
                    return Err(EvalError::DivisionByZero);
                }
                powi(base, *n)
            }
            Node::Call(f, a) => {
                let x = a.eval(point)?;
                match f {
                    Func::Sin => libm::sin(x),
                    Func::Cos => libm::cos(x),
                    Func::Exp => libm::exp(x),
                    Func::Ln => {
                        if x <= 0.0 {
                            return Err(EvalError::LogOfNonPositive(x));
                        }
                        libm::log(x)
                    }
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(EvalError::SqrtOfNegative(x));
                        }
                        libm::sqrt(x)
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    /// Replace every variable `i` by `values[i]`.
    pub fn substitute(&self, values: &[Expr]) -> Expr {
        match &*self.0 {
            Node::Num(_) => self.clone(),
            Node::Var(i) => values.get(*i).cloned().unwrap_or_else(|| self.clone()),
            Node::Neg(a) => -a.substitute(values),
            Node::Add(a, b) => a.substitute(values) + b.substitute(values),
            Node::Sub(a, b) => a.substitute(values) - b.substitute(values),
            Node::Mul(a, b) => a.substitute(values) * b.substitute(values),
            Node::Div(a, b) => a.substitute(values) / b.substitute(values),
            Node::Pow(a, n) => a.substitute(values).pow(*n),
            Node::Call(f, a) => Expr::call(*f, a.substitute(values)),
        }
    }

    /// Render with the given coordinate names. The output re-parses to an
    /// expression that evaluates identically.
    pub fn display<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> Display<'a, S> {
        Display { expr: self, names }
    }

    pub fn to_string_with<S: AsRef<str>>(&self, names: &[S]) -> String {
        self.display(names).to_string()
    }

    /// Number of nodes, counting shared subtrees once per occurrence.
    pub fn size(&self) -> usize {
        match &*self.0 {
            Node::Num(_) | Node::Var(_) => 1,
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => 1 + a.size(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => 1 + a.size() + b.size(),
        }
    }
}

fn powi(base: f64, n: i32) -> f64 {
    let mut e = n.unsigned_abs();
    let mut b = base;
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b *= b;
        e >>= 1;
    }
    if n < 0 {
        1.0 / acc
    } else {
        acc
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    if let (Some(x), Some(y)) = (a.as_num(), b.as_num()) {
        return Expr::num(x + y);
    }
    Expr::node(Node::Add(a, b))
}

fn sub(a: Expr, b: Expr) -> Expr {
    if b.is_zero() {
        return a;
    }
    if a.is_zero() {
        return -b;
    }
    if let (Some(x), Some(y)) = (a.as_num(), b.as_num()) {
        return Expr::num(x - y);
    }
    Expr::node(Node::Sub(a, b))
}

fn mul(a: Expr, b: Expr) -> Expr {
    if a.is_zero() || b.is_zero() {
        return Expr::zero();
    }
    if a.is_one() {
        return b;
    }
    if b.is_one() {
        return a;
    }
    if let (Some(x), Some(y)) = (a.as_num(), b.as_num()) {
        return Expr::num(x * y);
    }
    if a.as_num() == Some(-1.0) {
        return -b;
    }
    if b.as_num() == Some(-1.0) {
        return -a;
    }
    Expr::node(Node::Mul(a, b))
}

fn div(a: Expr, b: Expr) -> Expr {
    if b.is_one() {
        return a;
    }
    Expr::node(Node::Div(a, b))
}

fn neg(a: Expr) -> Expr {
    match &*a.0 {
        Node::Num(v) => Expr::num(-v),
        Node::Neg(inner) => inner.clone(),
        _ => Expr::node(Node::Neg(a)),
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $f:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $f(self, rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $f(self, rhs.clone())
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $f(self.clone(), rhs)
            }
        }
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $f(self.clone(), rhs.clone())
            }
        }
        impl $tr<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                $f(self, Expr::num(rhs))
            }
        }
        impl $tr<f64> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                $f(self.clone(), Expr::num(rhs))
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        neg(self)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        neg(self.clone())
    }
}

impl From<f64> for Expr {
    fn from(v: f64) -> Expr {
        Expr::num(v)
    }
}

impl core::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| a + b)
    }
}

pub struct Display<'a, S> {
    expr: &'a Expr,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for Display<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names;
        write_expr(
            self.expr,
            &|i, f| match names.get(i) {
                Some(n) => f.write_str(n.as_ref()),
                None => write!(f, "x{}", i),
            },
            f,
            0,
        )
    }
}

// Precedence levels: 1 sum, 2 product, 3 unary minus, 4 power, 5 atom.
fn prec(e: &Expr) -> u8 {
    match &*e.0 {
        Node::Num(v) if *v < 0.0 => 3,
        Node::Num(_) | Node::Var(_) | Node::Call(..) => 5,
        Node::Add(..) | Node::Sub(..) => 1,
        Node::Mul(..) | Node::Div(..) => 2,
        Node::Neg(_) => 3,
        Node::Pow(..) => 4,
    }
}

type VarWriter<'a> = dyn Fn(usize, &mut fmt::Formatter<'_>) -> fmt::Result + 'a;

fn write_expr(e: &Expr, var: &VarWriter<'_>, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
    let p = prec(e);
    if p < min {
        f.write_str("(")?;
    }
    match &*e.0 {
        Node::Num(v) => write!(f, "{}", v)?,
        Node::Var(i) => var(*i, f)?,
        Node::Neg(a) => {
            f.write_str("-")?;
            write_expr(a, var, f, 3)?;
        }
        Node::Add(a, b) => {
            write_expr(a, var, f, 1)?;
            f.write_str(" + ")?;
            write_expr(b, var, f, 2)?;
        }
        Node::Sub(a, b) => {
            write_expr(a, var, f, 1)?;
            f.write_str(" - ")?;
            write_expr(b, var, f, 2)?;
        }
        Node::Mul(a, b) => {
            write_expr(a, var, f, 2)?;
            f.write_str("*")?;
            write_expr(b, var, f, 3)?;
        }
        Node::Div(a, b) => {
            write_expr(a, var, f, 2)?;
            f.write_str("/")?;
            write_expr(b, var, f, 3)?;
        }
        Node::Pow(a, n) => {
            write_expr(a, var, f, 5)?;
            write!(f, "^{}", n)?;
        }
        Node::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_expr(a, var, f, 0)?;
            f.write_str(")")?;
        }
    }
    if p < min {
        f.write_str(")")?;
    }
    Ok(())
}

/// Parse `source` against the coordinate names `variables`.
pub fn parse<S: AsRef<str>>(source: &str, variables: &[S]) -> Result<Expr, ParseError> {
    let mut p = Parser { src: source.as_bytes(), pos: 0, vars: variables };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(p.error("empty expression", "a number, coordinate, function or '('"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input", "an operator or end of input"));
    }
    Ok(e)
}

struct Parser<'a, S> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [S],
}

impl<S: AsRef<str>> Parser<'_, S> {
    fn error(&self, message: &str, expected: &str) -> ParseError {
        ParseError { offset: self.pos, message: message.into(), expected: expected.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::node(Node::Add(lhs, self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::node(Node::Sub(lhs, self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::node(Node::Mul(lhs, self.unary()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::node(Node::Div(lhs, self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(Expr::node(Node::Neg(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("exponent must be an integer literal", "integer"));
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'.' | b'e' | b'E') {
            return Err(self.error("non-integer exponent", "integer"));
        }
        let digits = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        let n: i32 = digits.parse().map_err(|_| ParseError {
            offset: start,
            message: "exponent out of range".into(),
            expected: "integer".into(),
        })?;
        Ok(Expr::node(Node::Pow(base, if negative { -n } else { n })))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input", "a number, coordinate, function or '('")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("unclosed parenthesis", "')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(_) => Err(self.error("unexpected character", "a number, coordinate, function or '('")),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut count = digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            self.pos = start;
            return Err(self.error("malformed number", "digits"));
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        let v: f64 = text.parse().map_err(|_| ParseError {
            offset: start,
            message: "malformed number".into(),
            expected: "a decimal literal".into(),
        })?;
        Ok(Expr::num(v))
    }

    fn ident(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        if self.peek() == Some(b'(') {
            let func = Func::from_name(name).ok_or(ParseError {
                offset: start,
                message: alloc::format!("unknown function '{}'", name),
                expected: "one of sin, cos, exp, ln, sqrt".into(),
            })?;
            self.pos += 1;
            let arg = self.expr()?;
            if self.peek() != Some(b')') {
                return Err(self.error("unclosed function call", "')'"));
            }
            self.pos += 1;
            return Ok(Expr::call(func, arg));
        }
        match self.vars.iter().position(|v| v.as_ref() == name) {
            Some(i) => Ok(Expr::var(i)),
            None => Err(ParseError {
                offset: start,
                message: alloc::format!("unknown identifier '{}'", name),
                expected: "a declared coordinate".into(),
            }),
        }
    }
}

/// Central difference of `e` in variable `var` at `point` with step `h`.
pub fn central_difference(e: &Expr, var: usize, point: &[f64], h: f64) -> Result<f64, EvalError> {
    let mut p = point.to_vec();
    p[var] = point[var] + h;
    let fp = e.eval(&p)?;
    p[var] = point[var] - h;
    let fm = e.eval(&p)?;
    Ok((fp - fm) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;

    const XY: [&str; 2] = ["x", "y"];

    #[test]
    fn parse_and_eval_basic() {
        let e = parse("x^2+y", &XY).unwrap();
        assert_eq!(e.eval(&[3.0, 1.0]).unwrap(), 10.0);
        let e = parse("sin(x)*y", &XY).unwrap();
        assert_eq!(e.eval(&[0.0, 5.0]).unwrap(), 0.0);
    }

    #[test]
    fn dangling_operator_offset() {
        let err = parse("x+", &["x"]).unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn power_binds_tighter_than_minus() {
        let e = parse("-x^2", &["x"]).unwrap();
        assert_eq!(e.eval(&[3.0]).unwrap(), -9.0);
        let e = parse("2^-1", &["x"]).unwrap();
        assert_eq!(e.eval(&[0.0]).unwrap(), 0.5);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse("z", &XY).is_err());
        assert!(parse("x^2.5", &XY).is_err());
        assert!(parse("x^y", &XY).is_err());
        assert!(parse("foo(x)", &XY).is_err());
        assert!(parse("(x", &XY).is_err());
        assert!(parse("", &XY).is_err());
        assert!(parse("x y", &XY).is_err());
    }

    #[test]
    fn domain_errors() {
        let x = ["x"];
        assert_eq!(parse("1/x", &x).unwrap().eval(&[0.0]), Err(EvalError::DivisionByZero));
        assert!(parse("ln(x)", &x).unwrap().eval(&[-1.0]).is_err());
        assert!(parse("sqrt(x)", &x).unwrap().eval(&[-1.0]).is_err());
        assert!(parse("x^-2", &x).unwrap().eval(&[0.0]).is_err());
        let v = parse("exp(ln(x))", &x).unwrap().eval(&[2.5]).unwrap();
        assert!((v - 2.5).abs() < 1e-12);
    }

    #[test]
    fn simple_derivatives() {
        let e = parse("x^2", &XY).unwrap();
        let d = e.diff(0);
        assert_eq!(d.eval(&[1.5, 0.0]).unwrap(), 3.0);
        assert!(parse("x", &XY).unwrap().diff(1).is_zero());
        let e = parse("sin(x)*y", &XY).unwrap();
        let p = [1.3, 2.0];
        let exact = e.diff(0).eval(&p).unwrap();
        let fd = central_difference(&e, 0, &p, 1e-5).unwrap();
        assert!((exact - fd).abs() < 1e-6);
    }

    #[test]
    fn folding() {
        let x = Expr::var(0);
        assert_eq!(&x * &Expr::one(), x);
        assert!((Expr::zero() * &x).is_zero());
        assert_eq!(&x + &Expr::zero(), x);
        assert_eq!((Expr::num(2.0) + Expr::num(3.0)).as_num(), Some(5.0));
    }

    #[test]
    fn display_round_trip() {
        for src in ["-x^2", "(-x)^2", "x - (y - x)", "x/(y*x)", "-(x + y)*2", "sin(-x)^3", "2^-1*x", "-1.5e-7 - x"] {
            let e = parse(src, &XY).unwrap();
            let s = e.to_string_with(&XY);
            let back = parse(&s, &XY).unwrap();
            let p = [0.7, -1.3];
            assert_eq!(e.eval(&p).unwrap(), back.eval(&p).unwrap(), "{} -> {}", src, s);
        }
    }

    #[test]
    fn substitution() {
        let e = parse("x*y + x", &XY).unwrap();
        let s = e.substitute(&[Expr::var(1), Expr::num(2.0)]);
        assert_eq!(s.eval(&[0.0, 3.0]).unwrap(), 9.0);
    }
}
