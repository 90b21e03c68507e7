//! The simple rule on one panel.
//!
//! `S_n = Q_n + Ẽ_n` where `Q_n = a_1 f(x_1)` is the left rectangle value and
//! `Ẽ_n = Σ_{k=2}^{n} a_k f[x_1..x_k]` its divided-difference correction. The
//! realistic error `Ē` rescales `Ẽ_n` by a ratio of a high-order divided
//! difference (over the panel plus midpoints) to `f[x_1, x_2]`.

use crate::divdiff::{divided_difference, leading_entries, ExtendedPanel, Panel};
use crate::error::{Error, Result};
use crate::exact_poly::WeightSet;
use crate::real::{Precision, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct RuleOutput {
    /// Left rectangle value `a_1 f(x_1)`.
    pub q: Real,
    /// `a_{j+1} f[x_1..x_{j+1}]` for `j = 1..n`.
    pub correction_terms: Vec<Real>,
    pub e_tilde: Real,
    pub s: Real,
    /// Realistic error of `s`; `None` until estimated or when the estimate
    /// is unavailable.
    pub e_bar: Option<Real>,
    pub degree: usize,
}

/// Extra digits carried inside a rule: high-order differences cancel about
/// one digit per order, and the outputs are rounded back afterwards.
fn guarded(p: Precision, n: usize) -> Precision {
    Precision::new(p.digits() + n as u32 + 4).unwrap_or(p)
}

fn widen(values: &[Real], p: Precision) -> Vec<Real> {
    values.iter().map(|v| v.with_precision(p)).collect()
}

/// `Q`, the correction terms, `Ẽ` and `S` for one panel.
pub fn simple_rule(panel: &Panel, weights: &WeightSet) -> Result<RuleOutput> {
    if panel.n() != weights.n() {
        return Err(Error::SizeMismatch {
            expected: weights.n(),
            actual: panel.n(),
        });
    }
    let p = panel.precision();
    let gp = guarded(p, panel.n());
    let scaled = weights.scaled(&panel.step().with_precision(gp));
    let table = leading_entries(&widen(panel.nodes(), gp), &widen(panel.values(), gp))?;
    let q = &scaled.weights[0] * &table[0];
    let terms: Vec<Real> = scaled.weights[1..]
        .iter()
        .zip(&table[1..])
        .map(|(a, d)| a * d)
        .collect();
    let mut e_tilde = Real::zero(gp);
    for term in &terms {
        e_tilde += term;
    }
    let s = &q + &e_tilde;
    Ok(RuleOutput {
        q: q.with_precision(p),
        correction_terms: terms.iter().map(|t| t.with_precision(p)).collect(),
        e_tilde: e_tilde.with_precision(p),
        s: s.with_precision(p),
        e_bar: None,
        degree: weights.degree(),
    })
}

/// Realistic error of `S_n`:
/// `coeff · h^p · f[ext] / f[x_1, x_2] · Ẽ`, with `ext` the panel nodes
/// followed by the midpoint(s).
///
/// A vanishing high-order difference or a vanishing `Ẽ` gives `Ē = 0`.
/// Otherwise a first difference `f_2 - f_1` at rounding level relative to the
/// panel values means `f' ≈ 0` and the estimate is refused.
pub fn realistic_error(
    panel: &Panel,
    extended: &ExtendedPanel,
    weights: &WeightSet,
    e_tilde: &Real,
) -> Result<Real> {
    if panel.n() != weights.n() {
        return Err(Error::SizeMismatch {
            expected: weights.n(),
            actual: panel.n(),
        });
    }
    let expected_mid = weights.estimate_order() + 1 - weights.n();
    if extended.midpoint_nodes().len() != expected_mid {
        return Err(Error::SizeMismatch {
            expected: expected_mid,
            actual: extended.midpoint_nodes().len(),
        });
    }
    let precision = panel.precision();
    let gp = guarded(precision, extended.nodes().len());
    let high = divided_difference(
        &widen(&extended.nodes(), gp),
        &widen(&extended.values(), gp),
        weights.estimate_order(),
    )?;
    if high.is_zero() || e_tilde.is_zero() {
        return Ok(Real::zero(precision));
    }

    let y = panel.values();
    let scale = y.iter().fold(Real::zero(precision), |m, v| m.max(v.abs()));
    let first_gap = (&y[1] - &y[0]).abs();
    if first_gap <= &precision.tolerance(2) * &scale {
        return Err(Error::UnreliableEstimate);
    }
    let d1 = divided_difference(&widen(panel.nodes(), gp), &widen(y, gp), 1)?;
    let coeff = weights.error_coeff().value(&panel.step().with_precision(gp));
    Ok((&(&coeff * &(&high / &d1)) * &e_tilde.with_precision(gp)).with_precision(precision))
}

/// Simple rule plus its realistic error. An unreliable estimate leaves
/// `e_bar` as `None`; other failures are returned.
pub fn rule_with_estimate(extended: &ExtendedPanel, weights: &WeightSet) -> Result<RuleOutput> {
    let mut out = simple_rule(extended.base(), weights)?;
    match realistic_error(extended.base(), extended, weights, &out.e_tilde) {
        Ok(e) => out.e_bar = Some(e),
        Err(Error::UnreliableEstimate) => out.e_bar = None,
        Err(e) => return Err(e),
    }
    Ok(out)
}

/// Bound on the error of the left rectangle value, `(n-1)^2 h^2 / 2 · |f'|`.
pub fn theoretical_error_qn(panel: &Panel, fprime_bound: &Real) -> Real {
    let m = Real::from_i64(panel.n() as i64 - 1, panel.precision());
    let h = panel.step();
    let two = Real::from_i64(2, panel.precision());
    &(&(&m * &m) * &(h * h)) / &two * fprime_bound
}

/// Whether `e_bar` is a realistic estimate of `e_true`: same sign, and with
/// both written as `±0.d1d2... × 10^k` the leading digits differ by at most
/// one. Across adjacent exponents only the `0.9... × 10^k` against
/// `0.1... × 10^(k+1)` case qualifies.
pub fn is_realistic(e_bar: &Real, e_true: &Real) -> bool {
    if !e_bar.is_finite() || !e_true.is_finite() {
        return false;
    }
    match (e_bar.is_zero(), e_true.is_zero()) {
        (true, true) => return true,
        (true, false) | (false, true) => return false,
        _ => {}
    }
    let (Some((neg_bar, dig_bar, exp_bar)), Some((neg_true, dig_true, exp_true))) =
        (e_bar.decimal_parts(20), e_true.decimal_parts(20))
    else {
        return false;
    };
    if neg_bar != neg_true {
        return false;
    }
    let lead = |s: &str| s.as_bytes()[0] - b'0';
    let (d_bar, d_true) = (lead(&dig_bar), lead(&dig_true));
    match exp_bar - exp_true {
        0 => d_bar.abs_diff(d_true) <= 1,
        1 => d_bar == 1 && d_true == 9,
        -1 => d_bar == 9 && d_true == 1,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::compute_weights;

    fn prec() -> Precision {
        Precision::new(20).unwrap()
    }

    fn real(s: &str) -> Real {
        Real::parse(s, prec()).unwrap()
    }

    fn run(n: usize, a: &str, h: &str, f: impl Fn(&Real) -> Real) -> RuleOutput {
        let panel = Panel::sample(&real(a), &real(h), n, |x| Ok(f(x))).unwrap();
        let ext = ExtendedPanel::sample(panel, |x| Ok(f(x))).unwrap();
        rule_with_estimate(&ext, &compute_weights(n).unwrap()).unwrap()
    }

    #[test]
    fn trapezoid_on_sqrt() {
        let out = run(2, "0", "0.1", Real::sqrt);
        assert!(out.q.is_zero());
        assert_eq!(out.e_tilde.to_decimal(6), "0.0158114");
        assert_eq!(out.s.to_decimal(6), "0.0158114");
        assert_eq!(out.e_bar.unwrap().to_decimal(6), "0.00436619");
    }

    #[test]
    fn simpson_on_gaussian() {
        let out = run(3, "0", "0.5", |x| (-(x * x)).exp());
        assert_eq!(out.q.to_f64(), 1.0);
        assert_eq!(out.correction_terms[0].to_decimal(6), "-0.221199");
        assert_eq!(out.correction_terms[1].to_decimal(7), "-0.03162035");
        assert_eq!(out.e_tilde.to_decimal(6), "-0.252820");
        assert_eq!(out.s.to_decimal(6), "0.747180");
        assert_eq!(out.e_bar.unwrap().to_decimal(6), "-0.000396282");
    }

    #[test]
    fn five_point_on_sine() {
        let two = real("2");
        let out = run(5, "0", "0.125", |x| (&two * x).sin());
        assert_eq!(out.s.to_decimal(15), "0.229848724298873");
        assert_eq!(out.e_bar.unwrap().to_decimal(6), "1.14143e-7");
    }

    #[test]
    fn low_degree_polynomials_are_exact() {
        // x^3 - 2x + 1 on [0.5, 1.25] with n = 4 (degree 3).
        let f = |x: &Real| &(&(x * &(x * x)) - &(&real("2") * x)) + &real("1");
        let out = run(4, "0.5", "0.25", f);
        let anti = |x: &Real| {
            let x2 = x * x;
            &(&(&(&x2 * &x2) / &real("4")) - &x2) + x
        };
        let exact = &anti(&real("1.25")) - &anti(&real("0.5"));
        assert!((&out.s - &exact).abs().to_f64() < 1e-18);
        assert!(out.e_bar.unwrap().abs().to_f64() < 1e-18);
    }

    #[test]
    fn estimate_is_zero_for_constants() {
        let out = run(3, "1", "0.5", |_| real("4"));
        assert_eq!(out.e_tilde.to_f64(), 0.0);
        assert_eq!(out.s.to_f64(), 4.0);
        assert!(out.e_bar.unwrap().is_zero());
    }

    #[test]
    fn flat_start_is_rejected() {
        // cos has zero slope at 0: with h = 1e-10 at 20 digits the first
        // difference is at rounding level while later ones are not.
        let panel = Panel::sample(&real("0"), &real("1e-10"), 3, |x| Ok(x.cos())).unwrap();
        let ext = ExtendedPanel::sample(panel.clone(), |x| Ok(x.cos())).unwrap();
        let w = compute_weights(3).unwrap();
        let rule = simple_rule(&panel, &w).unwrap();
        assert_eq!(
            realistic_error(&panel, &ext, &w, &rule.e_tilde),
            Err(Error::UnreliableEstimate)
        );
        let out = rule_with_estimate(&ext, &w).unwrap();
        assert!(out.e_bar.is_none());
        assert_eq!(out.s, rule.s);
    }

    #[test]
    fn size_mismatch() {
        let panel = Panel::sample(&real("0"), &real("1"), 3, |x| Ok(x.clone())).unwrap();
        assert!(matches!(
            simple_rule(&panel, &compute_weights(4).unwrap()),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn left_rectangle_bound() {
        let p = |n: usize, h: &str, bound: &str| {
            let panel = Panel::sample(&real("0"), &real(h), n, |x| Ok(x.clone())).unwrap();
            theoretical_error_qn(&panel, &real(bound)).to_f64()
        };
        assert_eq!(p(2, "1", "1"), 0.5);
        assert_eq!(p(3, "0.5", "2"), 1.0);
        assert_eq!(p(5, "0.125", "2"), 0.25);
    }

    #[test]
    fn realistic_verdicts() {
        assert!(is_realistic(&real("0.00436619"), &real("0.00527046")));
        assert!(is_realistic(&real("-0.000396282"), &real("-0.000356296")));
        assert!(!is_realistic(&real("1e-5"), &real("-1e-5")));
        // 0.115e-3 against 0.0901e-3: adjacent exponents, digits 1 and 9.
        assert!(is_realistic(&real("-0.000115228"), &real("-0.0000900798")));
        assert!(is_realistic(&real("0.00095"), &real("0.00105")));
        assert!(!is_realistic(&real("0.00015"), &real("0.0010")));
        assert!(!is_realistic(&real("0.3"), &real("0.5")));
        assert!(!is_realistic(&real("1e-5"), &real("0")));
        assert!(is_realistic(&real("0"), &real("0")));
        assert!(!is_realistic(&real("3e-7"), &real("3e-9")));
    }
}
