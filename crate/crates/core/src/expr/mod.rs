//! Integrand expressions.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := base ('^' integer)?
//! base   := number | 'x' | 'pi' | func '(' expr ')' | '(' expr ')'
//! func   := sqrt | exp | ln | sin | cos | erf
//! ```
//!
//! Exponents are integer literals, optionally signed or parenthesised
//! (`x^-1`, `x^(-2)`). Number literals keep their source text and are parsed
//! at whatever precision the expression is evaluated at.

mod eval;
mod jet;
mod parse;

use std::fmt;

pub use jet::TaylorJet;

use crate::error::Result;
use crate::real::{Precision, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sqrt,
    Exp,
    Ln,
    Sin,
    Cos,
    Erf,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Erf => "erf",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "erf" => Func::Erf,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    /// Decimal literal, kept as written.
    Number(String),
    Pi,
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

/// A parsed expression node together with its byte offset in the source.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub node: Node,
    pub offset: usize,
}

impl Expr {
    pub fn parse(source: &str) -> Result<Expr> {
        parse::parse(source)
    }

    /// Value at `x`, computed at `x`'s precision.
    pub fn eval(&self, x: &Real) -> Result<Real> {
        eval::eval(self, x)
    }

    /// Taylor coefficients `c_k = f^(k)(center)/k!` for `k = 0..=order`,
    /// computed at `center`'s precision.
    pub fn jet(&self, center: &Real, order: usize) -> Result<TaylorJet> {
        eval::jet_eval(self, center, order)
    }

    /// True when the expression does not mention `x`.
    pub fn is_constant(&self) -> bool {
        match &self.node {
            Node::Number(_) | Node::Pi => true,
            Node::Var => false,
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.is_constant(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.is_constant() && b.is_constant()
            }
        }
    }

    /// Folds a constant expression to a number; `None` if it mentions `x`.
    pub fn fold(&self, precision: Precision) -> Option<Result<Real>> {
        self.is_constant()
            .then(|| self.eval(&Real::zero(precision)))
    }
}

/// Parses a numeric argument such as `"5/3"`, `"2*10^5"` or a long decimal
/// literal, at the given precision.
pub fn parse_constant(source: &str, precision: Precision) -> Result<Real> {
    let expr = Expr::parse(source)?;
    match expr.fold(precision) {
        Some(value) => value,
        None => Err(crate::error::Error::InvalidArgument(format!(
            "`{source}` must be a constant expression"
        ))),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Node::Number(text) => f.write_str(text),
            Node::Pi => f.write_str("pi"),
            Node::Var => f.write_str("x"),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "({a} * {b})"),
            Node::Div(a, b) => write!(f, "({a} / {b})"),
            Node::Pow(a, k) => write!(f, "({a}^({k}))"),
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
