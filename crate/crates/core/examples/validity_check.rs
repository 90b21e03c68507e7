//! Samples the validity function g(x, h) and reports whether g >= h holds,
//! for a well-behaved integrand and for one whose derivative vanishes.

use ncquad::diagnostics::check_condition;
use ncquad::{parse_constant, Expr, Precision};

fn main() -> ncquad::Result<()> {
    let p = Precision::new(20)?;
    let cases = [("exp(-x^2)", "0", "2", 3), ("sin(2*x)", "0", "pi/5", 5), ("sin(x)", "0", "2*pi", 3)];
    for (src, a, b, n) in cases {
        let f = Expr::parse(src)?;
        let (a, b) = (parse_constant(a, p)?, parse_constant(b, p)?);
        for h in ["1/4", "1/16", "1/64"] {
            let h = parse_constant(h, p)?;
            let r = check_condition(&f, &a, &b, n, &h, 256)?;
            println!(
                "{src:10} n = {n}  h = {:8}  min g = {:10}  g >= h: {:5}  f' ~ 0 suspected: {} ({} flagged)",
                h.to_decimal(4),
                r.min_g.map(|g| g.to_decimal(6)).unwrap_or_else(|| "-".into()),
                r.condition_holds,
                r.fprime_zero_suspected,
                r.flagged
            );
        }
    }
    Ok(())
}
