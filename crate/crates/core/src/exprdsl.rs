//! Infix expression DSL for user-supplied scalar functions f(x), g(x), m(x),
//! V(x) in scenario files.
//!
//! Grammar (no implicit multiplication; `^` is right-associative and binds
//! tighter than unary minus):
//!
//! ```text
//! expr    := term { ("+" | "-") term }
//! term    := factor { ("*" | "/") factor }
//! factor  := "-" factor | power
//! power   := primary [ "^" factor ]
//! primary := number | ident | ident "(" expr ")" | "(" expr ")"
//! ```
//!
//! Known functions: `sqrt`, `exp`, `ln`, `sin`, `cos`, `sinh`, `cosh`,
//! `tanh`, `abs`. Every other identifier is a variable resolved against the
//! binding map at evaluation time.

use crate::numdiff::{self, DerivOrder};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

/// Variable bindings used by [`Expr::eval`].
pub type Bindings = HashMap<String, f64>;

/// Convenience constructor for binding maps.
pub fn bindings(pairs: &[(&str, f64)]) -> Bindings {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: expected {expected}")]
    SyntaxError { offset: usize, expected: String },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("non-finite result in `{op}` with operands {operands:?}")]
    NonFinite { op: String, operands: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sqrt,
    Exp,
    Ln,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Abs,
}

impl UnaryOp {
    fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "neg",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Exp => "exp",
            UnaryOp::Ln => "ln",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Sinh => "sinh",
            UnaryOp::Cosh => "cosh",
            UnaryOp::Tanh => "tanh",
            UnaryOp::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<UnaryOp> {
        Some(match name {
            "sqrt" => UnaryOp::Sqrt,
            "exp" => UnaryOp::Exp,
            "ln" => UnaryOp::Ln,
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "sinh" => UnaryOp::Sinh,
            "cosh" => UnaryOp::Cosh,
            "tanh" => UnaryOp::Tanh,
            "abs" => UnaryOp::Abs,
            _ => return None,
        })
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            UnaryOp::Neg => -v,
            UnaryOp::Sqrt => v.sqrt(),
            UnaryOp::Exp => v.exp(),
            UnaryOp::Ln => v.ln(),
            UnaryOp::Sin => v.sin(),
            UnaryOp::Cos => v.cos(),
            UnaryOp::Sinh => v.sinh(),
            UnaryOp::Cosh => v.cosh(),
            UnaryOp::Tanh => v.tanh(),
            UnaryOp::Abs => v.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
            BinOp::Div => a / b,
            BinOp::Pow => a.powf(b),
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

/// Immutable expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(String),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Evaluate against a binding map. Every intermediate result is checked
    /// for finiteness so that 1/0, ln(-1), overflowing powers, etc. surface
    /// as [`ExprError::NonFinite`] rather than silent NaN/inf propagation.
    pub fn eval(&self, bindings: &Bindings) -> Result<f64, ExprError> {
        match self {
            Expr::Const(c) => Ok(*c),
            Expr::Var(name) => bindings
                .get(name)
                .copied()
                .ok_or_else(|| ExprError::UnboundVariable(name.clone())),
            Expr::Unary(op, inner) => {
                let v = inner.eval(bindings)?;
                let out = op.apply(v);
                if out.is_finite() {
                    Ok(out)
                } else {
                    Err(ExprError::NonFinite {
                        op: op.name().to_string(),
                        operands: vec![v],
                    })
                }
            }
            Expr::Binary(op, lhs, rhs) => {
                let a = lhs.eval(bindings)?;
                let b = rhs.eval(bindings)?;
                let out = op.apply(a, b);
                if out.is_finite() {
                    Ok(out)
                } else {
                    Err(ExprError::NonFinite {
                        op: op.symbol().to_string(),
                        operands: vec![a, b],
                    })
                }
            }
        }
    }

    /// Printing precedence used to decide parenthesization; negative
    /// constants print with a leading minus and therefore rank like a unary
    /// negation.
    fn prec(&self) -> u8 {
        match self {
            Expr::Const(c) if c.is_sign_negative() => 3,
            Expr::Const(_) | Expr::Var(_) => 5,
            Expr::Unary(UnaryOp::Neg, _) => 3,
            Expr::Unary(_, _) => 5,
            Expr::Binary(op, _, _) => op.precedence(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn paren(f: &mut fmt::Formatter<'_>, e: &Expr, needs: bool) -> fmt::Result {
            if needs {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(name) => write!(f, "{name}"),
            Expr::Unary(UnaryOp::Neg, inner) => {
                write!(f, "-")?;
                paren(f, inner, inner.prec() < 3)
            }
            Expr::Unary(op, inner) => write!(f, "{}({inner})", op.name()),
            Expr::Binary(op, lhs, rhs) => {
                let p = op.precedence();
                match op {
                    // Left-associative: the right child needs parens at equal
                    // precedence, the left child only below it.
                    BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div => {
                        paren(f, lhs, lhs.prec() < p)?;
                        write!(f, " {} ", op.symbol())?;
                        paren(f, rhs, rhs.prec() <= p)
                    }
                    // Right-associative; the grammar admits `-x` and nested
                    // powers on the right without parens.
                    BinOp::Pow => {
                        paren(f, lhs, lhs.prec() <= p)?;
                        write!(f, " ^ ")?;
                        paren(f, rhs, rhs.prec() < 3)
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn tokenize(mut self) -> Result<Vec<(Token, usize)>, ExprError> {
        let mut out = Vec::new();
        while self.pos < self.bytes.len() {
            let start = self.pos;
            let c = self.bytes[self.pos];
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.pos += 1;
                    continue;
                }
                b'+' => self.push_simple(&mut out, Token::Plus),
                b'-' => self.push_simple(&mut out, Token::Minus),
                b'*' => self.push_simple(&mut out, Token::Star),
                b'/' => self.push_simple(&mut out, Token::Slash),
                b'^' => self.push_simple(&mut out, Token::Caret),
                b'(' => self.push_simple(&mut out, Token::LParen),
                b')' => self.push_simple(&mut out, Token::RParen),
                b'0'..=b'9' | b'.' => {
                    let tok = self.lex_number(start)?;
                    out.push((tok, start));
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while self.pos < self.bytes.len()
                        && (self.bytes[self.pos].is_ascii_alphanumeric()
                            || self.bytes[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    out.push((Token::Ident(self.src[start..self.pos].to_string()), start));
                }
                _ => {
                    return Err(ExprError::SyntaxError {
                        offset: start,
                        expected: "a number, identifier, operator, or parenthesis".to_string(),
                    });
                }
            }
        }
        Ok(out)
    }

    fn push_simple(&mut self, out: &mut Vec<(Token, usize)>, tok: Token) {
        out.push((tok, self.pos));
        self.pos += 1;
    }

    fn lex_number(&mut self, start: usize) -> Result<Token, ExprError> {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        if self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b'e' | b'E') {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                // `2e` followed by a non-digit: the `e` belongs to an
                // identifier, not this literal.
                self.pos = mark;
            }
        }
        let text = &self.src[start..self.pos];
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Token::Number(v)),
            _ => Err(ExprError::SyntaxError {
                offset: start,
                expected: "a finite numeric literal".to_string(),
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    tokens: Vec<(Token, usize)>,
    idx: usize,
    src_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.idx)
            .map(|(_, o)| *o)
            // At end of input, point at the last byte so the reported offset
            // stays strictly inside the source.
            .unwrap_or_else(|| self.src_len.saturating_sub(1))
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.idx).map(|(t, _)| t.clone());
        self.idx += 1;
        t
    }

    fn err(&self, expected: &str) -> ExprError {
        ExprError::SyntaxError {
            offset: self.offset(),
            expected: expected.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Token::Plus) => BinOp::Add,
                Some(Token::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(Token::Star) => BinOp::Mul,
                Some(Token::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.factor()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.advance();
            let inner = self.factor()?;
            return Ok(Expr::Unary(UnaryOp::Neg, Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.advance();
            let exponent = self.factor()?;
            return Ok(Expr::Binary(
                BinOp::Pow,
                Box::new(base),
                Box::new(exponent),
            ));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let open_offset = self.offset();
        match self.advance() {
            Some(Token::Number(v)) => Ok(Expr::Const(v)),
            Some(Token::Ident(name)) => {
                if matches!(self.peek(), Some(Token::LParen)) {
                    let op = UnaryOp::from_name(&name)
                        .ok_or_else(|| ExprError::UnknownFunction(name.clone()))?;
                    self.advance();
                    let arg = self.expr()?;
                    if matches!(self.peek(), Some(Token::RParen)) {
                        self.advance();
                        Ok(Expr::Unary(op, Box::new(arg)))
                    } else {
                        // Point at the call site so the offset stays inside
                        // the source even when input ends mid-call.
                        Err(ExprError::SyntaxError {
                            offset: open_offset,
                            expected: "`)` closing this function call".to_string(),
                        })
                    }
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                if matches!(self.peek(), Some(Token::RParen)) {
                    self.advance();
                    Ok(inner)
                } else {
                    Err(ExprError::SyntaxError {
                        offset: open_offset,
                        expected: "`)` matching this `(`".to_string(),
                    })
                }
            }
            _ => Err(self.err("a number, variable, function call, or `(`")),
        }
    }
}

/// Parse a single infix expression.
pub fn parse(source: &str) -> Result<Expr, ExprError> {
    let tokens = Lexer::new(source).tokenize()?;
    if tokens.is_empty() {
        return Err(ExprError::SyntaxError {
            offset: 0,
            expected: "a non-empty expression".to_string(),
        });
    }
    let mut parser = Parser {
        tokens,
        idx: 0,
        src_len: source.len(),
    };
    let e = parser.expr()?;
    if parser.idx != parser.tokens.len() {
        return Err(parser.err("end of input"));
    }
    Ok(e)
}

/// Numeric derivative of `e` with respect to `var` at the given bindings:
/// five-point central stencil with Richardson extrapolation, step
/// `h = max(1e-5, 1e-5·|x|)`. Returns `(value, error_estimate)`.
pub fn numeric_derivative(
    e: &Expr,
    var: &str,
    at: &Bindings,
    order: DerivOrder,
) -> Result<(f64, f64), ExprError> {
    let x0 = *at
        .get(var)
        .ok_or_else(|| ExprError::UnboundVariable(var.to_string()))?;
    let mut scratch = at.clone();
    let mut first_err: Option<ExprError> = None;
    let eval_at = |scratch: &mut Bindings, first_err: &mut Option<ExprError>, x: f64| -> f64 {
        scratch.insert(var.to_string(), x);
        match e.eval(scratch) {
            Ok(v) => v,
            Err(err) => {
                first_err.get_or_insert(err);
                f64::NAN
            }
        }
    };
    let (value, est) = numdiff::derivative(
        |x| eval_at(&mut scratch, &mut first_err, x),
        x0,
        order,
    );
    if let Some(err) = first_err {
        return Err(err);
    }
    if !value.is_finite() {
        return Err(ExprError::NonFinite {
            op: "numeric_derivative".to_string(),
            operands: vec![x0],
        });
    }
    Ok((value, est))
}
