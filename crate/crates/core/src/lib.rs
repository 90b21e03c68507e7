//! Closed Newton-Cotes quadrature in divided-difference form.
//!
//! A rule on `n` equally spaced nodes is written as a left rectangle value
//! plus a correction built from divided differences,
//! `S_n = a_1 f(x_1) + Σ_{k=2}^{n} a_k f[x_1..x_k]`, with exact rational
//! weights. Each rule carries an a-posteriori "realistic" error estimate
//! obtained from one extra divided difference over panel midpoints.
//!
//! All arithmetic runs at a user-chosen decimal precision on MPFR.
//!
//! ```
//! use ncquad::{compute_weights, Expr, Precision, Real};
//! use ncquad::composite::{integrate, CompositePlan, Options};
//!
//! let p = Precision::new(30).unwrap();
//! let f = Expr::parse("exp(-x^2)").unwrap();
//! let plan = CompositePlan::new(Real::zero(p), Real::one(p), 3, 8).unwrap();
//! let out = integrate(&plan, |x| f.eval(x), Options::default()).unwrap();
//! assert!((out.s.to_f64() - 0.746824132812427).abs() < 1e-6);
//! # let _ = compute_weights(3).unwrap();
//! ```

pub mod cli;
pub mod composite;
pub mod diagnostics;
pub mod divdiff;
pub mod error;
pub mod exact_poly;
pub mod expr;
pub mod real;
pub mod rules;

pub use divdiff::{divided_difference, ExtendedPanel, Panel};
pub use error::{Error, Result};
pub use exact_poly::{compute_weights, WeightSet};
pub use expr::{parse_constant, Expr, TaylorJet};
pub use real::{CompensatedSum, Precision, Real};
pub use rules::{is_realistic, realistic_error, rule_with_estimate, simple_rule, RuleOutput};
