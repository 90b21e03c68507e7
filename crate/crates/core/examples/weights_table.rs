//! Exact weights of the divided-difference rules for n = 2..12, with their
//! degree of exactness and the error coefficient of the realistic estimate.

use ncquad::compute_weights;

fn main() -> ncquad::Result<()> {
    for n in 2..=12 {
        let w = compute_weights(n)?;
        let terms: Vec<String> = w.weights().iter().map(|t| format!("{} h^{}", t.coeff, t.h_power)).collect();
        println!("n = {n:2}  degree {:2}  weights: {}", w.degree(), terms.join(", "));
        let e = w.error_coeff();
        println!("        error coefficient {} h^{}", e.coeff, e.h_power);
        let nodal: Vec<String> = w.nodal_weights().iter().map(ToString::to_string).collect();
        println!("        nodal (Newton-Cotes) form: [{}] h", nodal.join(", "));
    }
    Ok(())
}
