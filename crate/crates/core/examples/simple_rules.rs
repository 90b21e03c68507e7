//! One panel of the two-point rule on sqrt(x) and of the three-point rule on
//! exp(-x^2), each with its realistic error next to the true error.

use ncquad::{compute_weights, is_realistic, rule_with_estimate, ExtendedPanel, Expr, Panel, Precision, Real};

fn show(name: &str, n: usize, h: &str, f: &Expr, exact: impl Fn(&Real) -> Real) -> ncquad::Result<()> {
    let p = Precision::new(24)?;
    let h = ncquad::parse_constant(h, p)?;
    let a = Real::zero(p);
    let panel = Panel::sample(&a, &h, n, |x| f.eval(x))?;
    let extended = ExtendedPanel::sample(panel, |x| f.eval(x))?;
    let out = rule_with_estimate(&extended, &compute_weights(n)?)?;
    let b = &h * &Real::from_i64(n as i64 - 1, p);
    let e_true = &exact(&b) - &out.s;
    let e_bar = out.e_bar.expect("estimate available");
    println!(
        "{name:10} h = {:8}  S = {:22}  E_bar = {:14}  E = {:14}  realistic: {}",
        h.to_decimal(4),
        out.s.to_decimal(18),
        e_bar.to_decimal(6),
        e_true.to_decimal(6),
        is_realistic(&e_bar, &e_true)
    );
    Ok(())
}

fn main() -> ncquad::Result<()> {
    let sqrt = Expr::parse("sqrt(x)")?;
    for h in ["1/10", "1/100", "1/1000"] {
        // Integral of sqrt(x) over [0, b] is 2/3 b^(3/2).
        show("sqrt(x)", 2, h, &sqrt, |b| &(&Real::from_i64(2, b.precision()) / &Real::from_i64(3, b.precision())) * &(b * &b.sqrt()))?;
    }
    let gauss = Expr::parse("exp(-x^2)")?;
    for h in ["1/2", "1/4", "1/8", "1/16"] {
        show("exp(-x^2)", 3, h, &gauss, |b| &(&Real::pi(b.precision()).sqrt() / &Real::from_i64(2, b.precision())) * &b.erf())?;
    }
    Ok(())
}
