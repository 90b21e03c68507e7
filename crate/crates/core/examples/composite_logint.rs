//! Composite rules for the integral of 1/ln(x) over [10^5, 2*10^5] at 40
//! digits, halving the step and watching the realistic error follow the
//! true error.

use ncquad::composite::{integrate, CompositePlan, Options};
use ncquad::{is_realistic, parse_constant, Expr, Precision};

fn main() -> ncquad::Result<()> {
    let p = Precision::new(40)?;
    let f = Expr::parse("1/ln(x)")?;
    let a = parse_constant("10^5", p)?;
    let b = parse_constant("2*10^5", p)?;
    let reference = parse_constant("8406.24312084620270862164604369470", p)?;
    for n in [3, 5, 7] {
        println!("n = {n}");
        for panels in [10, 20, 40, 80] {
            let plan = CompositePlan::new(a.clone(), b.clone(), n, panels)?;
            let out = integrate(&plan, |x| f.eval(x), Options { parallel: true })?;
            let e_true = &reference - &out.s;
            let e_bar = out.e_bar.expect("estimate available");
            println!(
                "  h = {:12}  S = {}  E_bar = {:14}  E = {:14}  realistic: {}",
                plan.step().to_decimal(6),
                out.s.to_decimal(24),
                e_bar.to_decimal(6),
                e_true.to_decimal(6),
                is_realistic(&e_bar, &e_true)
            );
        }
    }
    Ok(())
}
