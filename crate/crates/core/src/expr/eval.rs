use super::{Expr, Func, Node, TaylorJet};
use crate::error::{Error, Result};
use crate::real::Real;

fn domain(function: &'static str, offset: usize, argument: &Real) -> Error {
    Error::Domain {
        function,
        offset,
        argument: argument.to_decimal(10),
    }
}

pub(super) fn eval(expr: &Expr, x: &Real) -> Result<Real> {
    let p = x.precision();
    Ok(match &expr.node {
        Node::Number(text) => Real::parse(text, p)?,
        Node::Pi => Real::pi(p),
        Node::Var => x.clone(),
        Node::Neg(a) => -eval(a, x)?,
        Node::Add(a, b) => &eval(a, x)? + &eval(b, x)?,
        Node::Sub(a, b) => &eval(a, x)? - &eval(b, x)?,
        Node::Mul(a, b) => &eval(a, x)? * &eval(b, x)?,
        Node::Div(a, b) => {
            let den = eval(b, x)?;
            if den.is_zero() {
                return Err(domain("/", expr.offset, &den));
            }
            &eval(a, x)? / &den
        }
        Node::Pow(a, k) => {
            let base = eval(a, x)?;
            if *k < 0 && base.is_zero() {
                return Err(domain("^", expr.offset, &base));
            }
            base.powi(*k)
        }
        Node::Call(func, a) => {
            let u = eval(a, x)?;
            match func {
                Func::Sqrt if u.is_negative() => return Err(domain("sqrt", expr.offset, &u)),
                Func::Ln if !u.is_positive() => return Err(domain("ln", expr.offset, &u)),
                Func::Sqrt => u.sqrt(),
                Func::Ln => u.ln(),
                Func::Exp => u.exp(),
                Func::Sin => u.sin(),
                Func::Cos => u.cos(),
                Func::Erf => u.erf(),
            }
        }
    })
}

pub(super) fn jet_eval(expr: &Expr, center: &Real, order: usize) -> Result<TaylorJet> {
    if order < 1 {
        return Err(Error::InvalidArgument("jet order must be at least 1".into()));
    }
    jet(expr, center, order)
}

fn jet(expr: &Expr, center: &Real, order: usize) -> Result<TaylorJet> {
    let p = center.precision();
    let constant = |value: Real| TaylorJet::constant(center, value, order);
    Ok(match &expr.node {
        Node::Number(text) => constant(Real::parse(text, p)?),
        Node::Pi => constant(Real::pi(p)),
        Node::Var => TaylorJet::variable(center, order),
        Node::Neg(a) => jet(a, center, order)?.neg(),
        Node::Add(a, b) => jet(a, center, order)?.add(&jet(b, center, order)?),
        Node::Sub(a, b) => jet(a, center, order)?.sub(&jet(b, center, order)?),
        Node::Mul(a, b) => jet(a, center, order)?.mul(&jet(b, center, order)?),
        Node::Div(a, b) => jet(a, center, order)?
            .div(&jet(b, center, order)?)
            .ok_or(Error::JetDivisionByZero {
                offset: expr.offset,
            })?,
        Node::Pow(a, k) => jet(a, center, order)?
            .powi(*k)
            .ok_or(Error::JetDivisionByZero {
                offset: expr.offset,
            })?,
        Node::Call(func, a) => {
            let u = jet(a, center, order)?;
            let u0 = u.value();
            match func {
                // The series of sqrt is singular at 0 even though the value is not.
                Func::Sqrt if !u0.is_positive() => return Err(domain("sqrt", expr.offset, u0)),
                Func::Ln if !u0.is_positive() => return Err(domain("ln", expr.offset, u0)),
                Func::Sqrt => u.sqrt(),
                Func::Ln => u.ln(),
                Func::Exp => u.exp(),
                Func::Sin => u.sin_cos().0,
                Func::Cos => u.sin_cos().1,
                Func::Erf => u.erf(),
            }
        }
    })
}
