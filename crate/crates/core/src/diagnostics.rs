//! Validity check for the realistic error.
//!
//! The estimate is trustworthy when `f' ≠ 0` on the panel and
//!
//! ```text
//! g(x, h) = |1 + Σ_{j=2}^{n-1} (a_{j+1} / a_2) f^(j)(x) / (j! f'(x))| ≥ h
//! ```
//!
//! where the weight ratio carries `h^(j-1)`. Derivatives come from Taylor
//! jets, so `f^(j)(x)/j!` is just the jet coefficient `c_j`.

use std::io::Write;

use rayon::prelude::*;
use rug::Rational;

use crate::error::{Error, Result};
use crate::exact_poly::{compute_weights, WeightSet};
use crate::expr::{Expr, TaylorJet};
use crate::real::Real;

/// Default number of interior sample points.
pub const DEFAULT_GRID: usize = 512;

fn g_from_jet(jet: &TaylorJet, h: &Real, weights: &WeightSet) -> Result<Real> {
    let c = jet.coeffs();
    let p = h.precision();
    if c[1].abs() <= &p.tolerance(2) * &c[0].abs() {
        return Err(Error::UnreliableEstimate);
    }
    let w = weights.weights();
    let mut acc = Real::one(p);
    for j in 2..weights.n() {
        let ratio = Rational::from(&w[j].coeff / &w[1].coeff);
        let h_power = w[j].h_power as i32 - w[1].h_power as i32;
        let term = &(&Real::from_rational(&ratio, p) * &h.powi(h_power)) * &(&c[j] / &c[1]);
        acc += &term;
    }
    Ok(acc.abs())
}

/// `g(x, h)` for the `n`-point rule described by `weights`.
///
/// Returns [`Error::UnreliableEstimate`] when `f'(x)` is at rounding level
/// relative to `f(x)`.
pub fn g_function(expr: &Expr, x: &Real, h: &Real, weights: &WeightSet) -> Result<Real> {
    let order = weights.n().saturating_sub(1).max(1);
    let jet = expr.jet(&x.with_precision(h.precision()), order)?;
    g_from_jet(&jet, h, weights)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GSample {
    pub x: Real,
    /// `None` where `f'(x)` is numerically zero.
    pub g: Option<Real>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GCheckReport {
    pub n: usize,
    pub h: Real,
    pub samples: Vec<GSample>,
    /// Minimum over unflagged samples.
    pub min_g: Option<Real>,
    pub condition_holds: bool,
    /// Some sample had `f' ≈ 0`, or `f'` changed sign across the grid.
    pub fprime_zero_suspected: bool,
    /// Number of samples with `f' ≈ 0`.
    pub flagged: usize,
}

/// Samples `g(·, h)` on `grid_points` equally spaced interior points of
/// `(a, b)` and reports whether `min g ≥ h`.
pub fn check_condition(
    expr: &Expr,
    a: &Real,
    b: &Real,
    n: usize,
    h: &Real,
    grid_points: usize,
) -> Result<GCheckReport> {
    if grid_points < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 grid points, got {grid_points}"
        )));
    }
    if b <= a {
        return Err(Error::InvalidArgument(format!("need b > a, got a = {a}, b = {b}")));
    }
    if !h.is_positive() {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    let weights = compute_weights(n)?;
    let p = h.precision();
    let spacing = &(b - a) / &Real::from_i64(grid_points as i64 + 1, p);
    let order = (n - 1).max(1);

    let evaluated = (1..=grid_points)
        .into_par_iter()
        .map(|k| {
            let x = a + &(&spacing * &Real::from_i64(k as i64, p));
            let jet = expr.jet(&x, order)?;
            let slope_sign = jet.coeffs()[1].signum();
            let g = match g_from_jet(&jet, h, &weights) {
                Ok(g) => Some(g),
                Err(Error::UnreliableEstimate) => None,
                Err(e) => return Err(e),
            };
            Ok((GSample { x, g }, slope_sign))
        })
        .collect::<Result<Vec<_>>>()?;

    let flagged = evaluated.iter().filter(|(s, _)| s.g.is_none()).count();
    let signs: Vec<i32> = evaluated
        .iter()
        .filter(|(s, _)| s.g.is_some())
        .map(|&(_, sign)| sign)
        .collect();
    let sign_change = signs.windows(2).any(|w| w[0] != w[1]);
    let samples: Vec<GSample> = evaluated.into_iter().map(|(s, _)| s).collect();
    let min_g = samples
        .iter()
        .filter_map(|s| s.g.clone())
        .reduce(|m, g| m.min(g));
    let condition_holds = min_g.as_ref().is_some_and(|m| m >= h);
    Ok(GCheckReport {
        n,
        h: h.clone(),
        samples,
        min_g,
        condition_holds,
        fprime_zero_suspected: flagged > 0 || sign_change,
        flagged,
    })
}

/// Writes `h,x,g` rows (empty `g` for flagged samples) for plotting.
pub fn write_samples_csv<W: Write>(reports: &[GCheckReport], digits: usize, out: W) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv output failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["h", "x", "g"]).map_err(io)?;
    for report in reports {
        let h = report.h.to_decimal(digits);
        for s in &report.samples {
            let g = s.g.as_ref().map(|g| g.to_decimal(digits)).unwrap_or_default();
            w.write_record([h.as_str(), &s.x.to_decimal(digits), &g]).map_err(io)?;
        }
    }
    w.flush()
        .map_err(|e| Error::InvalidArgument(format!("csv output failed: {e}")))
}
