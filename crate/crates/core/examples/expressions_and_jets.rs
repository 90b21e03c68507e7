//! Parsing integrands, evaluating them at high precision and reading
//! derivatives off their Taylor jets.

use ncquad::{Expr, Precision, Real};

fn main() -> ncquad::Result<()> {
    let p = Precision::new(50)?;
    let f = Expr::parse("exp(-x^2) * cos(3*x) + sqrt(1 + x^2)")?;
    println!("f(x) = {f}");
    let x = Real::parse("0.75", p)?;
    println!("f(0.75) = {}", f.eval(&x)?.to_decimal(45));
    let jet = f.jet(&x, 4)?;
    for k in 0..=4 {
        println!("f^({k})(0.75) = {}", jet.derivative(k).to_decimal(30));
    }
    match Expr::parse("1/ln(x)")?.eval(&Real::one(p)) {
        Err(e) => println!("1/ln(x) at 1: {e}"),
        Ok(v) => println!("1/ln(x) at 1: {v}"),
    }
    match Expr::parse("sin(x) +") {
        Err(e) => println!("parse error: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
