//! Divided differences of exp on unevenly spaced nodes: the order-k
//! difference times k! lands between the smallest and largest derivative.

use ncquad::{divided_difference, Precision, Real};

fn main() -> ncquad::Result<()> {
    let p = Precision::new(30)?;
    let nodes: Vec<Real> = ["0", "0.1", "0.35", "0.5", "0.9", "1"]
        .iter()
        .map(|s| Real::parse(s, p))
        .collect::<ncquad::Result<_>>()?;
    let values: Vec<Real> = nodes.iter().map(Real::exp).collect();
    let mut factorial = Real::one(p);
    for k in 1..nodes.len() {
        factorial = &factorial * &Real::from_i64(k as i64, p);
        let d = divided_difference(&nodes[..=k], &values[..=k], k)?;
        println!(
            "k = {k}  f[x0..x{k}] = {:24}  k! f[..] = {:20}  in [1, e^{}]",
            d.to_decimal(20),
            (&factorial * &d).to_decimal(16),
            nodes[k].to_decimal(3)
        );
    }
    Ok(())
}
