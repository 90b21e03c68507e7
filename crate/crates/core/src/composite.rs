//! Composite rules over `[a, b]`.
//!
//! The interval is cut into `N = (n-1) i` equal subintervals, giving `N + 1`
//! nodes `x_0 = a, ..., x_N = b`. Panel `k` (0-based) covers nodes
//! `k(n-1) ..= k(n-1) + n - 1`, so neighbouring panels share one endpoint.
//! The four outputs are sums of the per-panel simple-rule outputs, each
//! accumulated with compensation in panel order.

use rayon::prelude::*;

use crate::divdiff::{ExtendedPanel, Panel};
use crate::error::{Error, Result};
use crate::exact_poly::{compute_weights, WeightSet};
use crate::expr::Expr;
use crate::real::{CompensatedSum, Precision, Real};
use crate::rules::{is_realistic, rule_with_estimate, RuleOutput};

#[derive(Clone, Debug, PartialEq)]
pub struct CompositePlan {
    a: Real,
    b: Real,
    n: usize,
    panels: usize,
    h: Real,
}

impl CompositePlan {
    /// `i` panels of `n` points on `[a, b]`.
    pub fn new(a: Real, b: Real, n: usize, panels: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
        }
        if panels == 0 {
            return Err(Error::InvalidArgument("at least one panel is needed".into()));
        }
        if b <= a {
            return Err(Error::InvalidArgument(format!("need b > a, got a = {a}, b = {b}")));
        }
        let p = a.precision().min(b.precision());
        let subintervals = ((n - 1) as u64)
            .checked_mul(panels as u64)
            .filter(|&s| s <= i64::MAX as u64)
            .ok_or_else(|| Error::InvalidArgument("too many panels".into()))?;
        let h = &(&b - &a) / &Real::from_i64(subintervals as i64, p);
        Ok(CompositePlan { a, b, n, panels, h })
    }

    /// Plan for a prescribed step; `(b - a) / ((n - 1) h)` must be a positive
    /// integer up to rounding at the working precision.
    pub fn with_step(a: Real, b: Real, n: usize, h: &Real) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
        }
        if !h.is_positive() {
            return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
        }
        if b <= a {
            return Err(Error::InvalidArgument(format!("need b > a, got a = {a}, b = {b}")));
        }
        let p = a.precision().min(b.precision()).min(h.precision());
        let ratio = &(&b - &a) / &(&Real::from_i64(n as i64 - 1, p) * h);
        let incommensurate = || Error::IncommensurateStep {
            step: h.to_decimal(12),
            n,
        };
        let panels = ratio.round_to_i64().filter(|&i| i >= 1).ok_or_else(incommensurate)?;
        let rounded = Real::from_i64(panels, p);
        if (&ratio - &rounded).abs() > &p.tolerance(3) * &rounded {
            return Err(incommensurate());
        }
        CompositePlan::new(a, b, n, panels as usize)
    }

    pub fn a(&self) -> &Real {
        &self.a
    }

    pub fn b(&self) -> &Real {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn step(&self) -> &Real {
        &self.h
    }

    /// `N`, the number of subintervals.
    pub fn subintervals(&self) -> usize {
        (self.n - 1) * self.panels
    }

    pub fn precision(&self) -> Precision {
        self.h.precision()
    }

    /// Node `x_k = a + k h` for `k = 0..=N`; the last node is `b` itself.
    pub fn node(&self, k: usize) -> Real {
        if k == self.subintervals() {
            return self.b.clone();
        }
        &self.a + &(&self.h * &Real::from_i64(k as i64, self.precision()))
    }

    pub fn nodes(&self) -> Vec<Real> {
        (0..=self.subintervals()).map(|k| self.node(k)).collect()
    }

    /// Node index range of panel `k` (0-based).
    pub fn panel_range(&self, k: usize) -> std::ops::RangeInclusive<usize> {
        let start = k * (self.n - 1);
        start..=start + self.n - 1
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    /// Evaluate panels on the rayon pool. The reduction is still sequential
    /// in panel order, so results are identical either way.
    pub parallel: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompositeOutput {
    pub n: usize,
    pub h: Real,
    pub q: Real,
    pub e_tilde: Real,
    pub s: Real,
    /// `None` when any panel's estimate was unavailable.
    pub e_bar: Option<Real>,
    pub per_panel: Vec<RuleOutput>,
    /// Indices of panels whose estimate was unavailable.
    pub failed_panels: Vec<usize>,
}

fn panel_output<F>(plan: &CompositePlan, k: usize, nodes: &[Real], values: &[Real], weights: &WeightSet, f: &F) -> Result<RuleOutput>
where
    F: Fn(&Real) -> Result<Real>,
{
    let range = plan.panel_range(k);
    let panel = Panel::new(
        nodes[range.clone()].to_vec(),
        values[range].to_vec(),
        plan.step().clone(),
    )?;
    let extended = ExtendedPanel::sample(panel, f)?;
    rule_with_estimate(&extended, weights)
}

/// Applies the simple rule with its realistic error on every panel and sums.
///
/// Each node value is computed once; midpoints are extra evaluations.
pub fn integrate<F>(plan: &CompositePlan, f: F, options: Options) -> Result<CompositeOutput>
where
    F: Fn(&Real) -> Result<Real> + Sync,
{
    let weights = compute_weights(plan.n())?;
    let nodes = plan.nodes();
    let (values, per_panel) = if options.parallel {
        let values = nodes.par_iter().map(&f).collect::<Result<Vec<_>>>()?;
        let per_panel = (0..plan.panels())
            .into_par_iter()
            .map(|k| panel_output(plan, k, &nodes, &values, &weights, &f))
            .collect::<Result<Vec<_>>>()?;
        (values, per_panel)
    } else {
        let values = nodes.iter().map(&f).collect::<Result<Vec<_>>>()?;
        let per_panel = (0..plan.panels())
            .map(|k| panel_output(plan, k, &nodes, &values, &weights, &f))
            .collect::<Result<Vec<_>>>()?;
        (values, per_panel)
    };
    drop(values);
    Ok(summarize(plan, per_panel))
}

fn summarize(plan: &CompositePlan, per_panel: Vec<RuleOutput>) -> CompositeOutput {
    let p = plan.precision();
    let mut sums = [(); 4].map(|_| CompensatedSum::new(p));
    let mut failed_panels = Vec::new();
    for (k, out) in per_panel.iter().enumerate() {
        sums[0].add(&out.q);
        sums[1].add(&out.e_tilde);
        sums[2].add(&out.s);
        match &out.e_bar {
            Some(e) => sums[3].add(e),
            None => failed_panels.push(k),
        }
    }
    let [q, e_tilde, s, e_bar] = sums;
    CompositeOutput {
        n: plan.n(),
        h: plan.step().clone(),
        q: q.total(),
        e_tilde: e_tilde.total(),
        s: s.total(),
        e_bar: failed_panels.is_empty().then(|| e_bar.total()),
        per_panel,
        failed_panels,
    }
}

/// Where a sweep integrates.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepDomain {
    /// Fixed `[a, b]`; every step must divide it into whole panels.
    Interval { a: Real, b: Real },
    /// A single panel starting at `a`, so `b = a + (n-1) h` moves with `h`.
    Anchored { a: Real },
}

/// Source of the exact integral for true errors.
#[derive(Clone, Debug, PartialEq)]
pub enum Reference {
    Value(Real),
    /// An antiderivative `F`, giving `F(b) - F(a)`.
    Antiderivative(Expr),
}

impl Reference {
    pub fn integral(&self, a: &Real, b: &Real) -> Result<Real> {
        match self {
            Reference::Value(v) => Ok(v.clone()),
            Reference::Antiderivative(anti) => Ok(&anti.eval(b)? - &anti.eval(a)?),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub a: Real,
    pub b: Real,
    pub output: CompositeOutput,
    /// `I - S` when a reference is given.
    pub e_true: Option<Real>,
    /// `is_realistic(Ē, I - S)` when both are available.
    pub realistic: Option<bool>,
}

/// One composite run per step.
pub fn convergence_sweep<F>(
    domain: &SweepDomain,
    n: usize,
    steps: &[Real],
    f: F,
    reference: Option<&Reference>,
    options: Options,
) -> Result<Vec<SweepRow>>
where
    F: Fn(&Real) -> Result<Real> + Sync,
{
    steps
        .iter()
        .map(|h| {
            let plan = match domain {
                SweepDomain::Interval { a, b } => {
                    CompositePlan::with_step(a.clone(), b.clone(), n, h)?
                }
                SweepDomain::Anchored { a } => {
                    if n < 2 {
                        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
                    }
                    let b = a + &(h * &Real::from_i64(n as i64 - 1, h.precision()));
                    CompositePlan::new(a.clone(), b, n, 1)?
                }
            };
            let output = integrate(&plan, &f, options)?;
            let e_true = reference
                .map(|r| r.integral(plan.a(), plan.b()).map(|i| &i - &output.s))
                .transpose()?;
            let realistic = match (&output.e_bar, &e_true) {
                (Some(e), Some(t)) => Some(is_realistic(e, t)),
                _ => None,
            };
            Ok(SweepRow {
                a: plan.a().clone(),
                b: plan.b().clone(),
                output,
                e_true,
                realistic,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::new(30).unwrap()
    }

    fn r(s: &str) -> Real {
        crate::expr::parse_constant(s, p()).unwrap()
    }

    fn gauss(x: &Real) -> Result<Real> {
        Ok((-(x * x)).exp())
    }

    #[test]
    fn plan_layout() {
        let plan = CompositePlan::new(r("0"), r("1"), 3, 2).unwrap();
        assert_eq!(plan.subintervals(), 4);
        assert_eq!(plan.step().to_f64(), 0.25);
        assert_eq!(plan.nodes().len(), 5);
        assert_eq!(plan.panel_range(0), 0..=2);
        assert_eq!(plan.panel_range(1), 2..=4);
        assert_eq!(plan.node(4), r("1"));
    }

    #[test]
    fn plan_from_step() {
        let plan = CompositePlan::with_step(r("10^5"), r("2*10^5"), 3, &r("5")).unwrap();
        assert_eq!(plan.panels(), 10_000);
        let plan = CompositePlan::with_step(r("10^5"), r("2*10^5"), 7, &r("5/3")).unwrap();
        assert_eq!(plan.panels(), 10_000);
        assert!(matches!(
            CompositePlan::with_step(r("0"), r("1"), 3, &r("0.3")),
            Err(Error::IncommensurateStep { n: 3, .. })
        ));
        assert!(CompositePlan::with_step(r("0"), r("1"), 3, &r("0.75")).is_err());
        assert!(CompositePlan::new(r("1"), r("0"), 3, 1).is_err());
        assert!(CompositePlan::new(r("0"), r("1"), 1, 1).is_err());
        assert!(CompositePlan::new(r("0"), r("1"), 3, 0).is_err());
    }

    #[test]
    fn single_panel_is_the_simple_rule() {
        let plan = CompositePlan::new(r("0"), r("1"), 7, 1).unwrap();
        let out = integrate(&plan, gauss, Options::default()).unwrap();
        let panel = Panel::sample(&r("0"), plan.step(), 7, gauss).unwrap();
        let ext = ExtendedPanel::sample(panel, gauss).unwrap();
        let simple = rule_with_estimate(&ext, &compute_weights(7).unwrap()).unwrap();
        assert_eq!(out.s, simple.s);
        assert_eq!(out.e_bar, simple.e_bar);
    }

    #[test]
    fn aggregates_are_panel_sums() {
        let plan = CompositePlan::new(r("0"), r("2"), 5, 6).unwrap();
        let out = integrate(&plan, gauss, Options::default()).unwrap();
        assert_eq!(out.per_panel.len(), 6);
        let mut q = CompensatedSum::new(p());
        let mut s = CompensatedSum::new(p());
        let mut e = CompensatedSum::new(p());
        for panel in &out.per_panel {
            q.add(&panel.q);
            s.add(&panel.s);
            e.add(panel.e_bar.as_ref().unwrap());
        }
        assert_eq!(out.q, q.total());
        assert_eq!(out.s, s.total());
        assert_eq!(out.e_bar.unwrap(), e.total());
        // S = Q + Ẽ up to the rounding of the three separate sums.
        let gap = (&out.s - &(&out.q + &out.e_tilde)).abs();
        assert!(gap <= &out.s.ulp() * &r("4"));
    }

    #[test]
    fn parallel_matches_sequential() {
        let plan = CompositePlan::new(r("0"), r("3"), 5, 40).unwrap();
        let seq = integrate(&plan, gauss, Options { parallel: false }).unwrap();
        let par = integrate(&plan, gauss, Options { parallel: true }).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn constants_integrate_exactly() {
        let plan = CompositePlan::new(r("1"), r("4"), 3, 5).unwrap();
        let out = integrate(&plan, |_| Ok(r("2.5")), Options::default()).unwrap();
        assert!(out.e_tilde.is_zero());
        assert_eq!(out.s.to_f64(), 7.5);
        assert!(out.e_bar.unwrap().is_zero());
    }

    #[test]
    fn failed_panels_are_recorded() {
        // cos is flat at 0, so the first panel's estimate is refused.
        let p20 = Precision::new(20).unwrap();
        let plan = CompositePlan::new(Real::zero(p20), Real::parse("6e-10", p20).unwrap(), 3, 3).unwrap();
        let out = integrate(&plan, |x| Ok(x.cos()), Options::default()).unwrap();
        assert!(out.e_bar.is_none());
        assert!(out.failed_panels.contains(&0));
    }

    #[test]
    fn domain_errors_propagate() {
        let f = Expr::parse("ln(x)").unwrap();
        let plan = CompositePlan::new(r("-1"), r("1"), 3, 2).unwrap();
        assert!(matches!(
            integrate(&plan, |x| f.eval(x), Options::default()),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn sweep_true_errors() {
        let steps = [r("0.1"), r("0.05"), r("0.025")];
        let anti = Reference::Antiderivative(Expr::parse("2/3*x*sqrt(x)").unwrap());
        let rows = convergence_sweep(
            &SweepDomain::Anchored { a: r("0.1") },
            2,
            &steps,
            |x| Ok(x.sqrt()),
            Some(&anti),
            Options::default(),
        )
        .unwrap();
        assert_eq!(rows.len(), 3);
        for row in &rows {
            let exact = &(&row.b.powi(3).sqrt() - &row.a.powi(3).sqrt()) * &r("2/3");
            let want = &exact - &row.output.s;
            assert!((&want - row.e_true.as_ref().unwrap()).abs().to_f64() < 1e-25);
        }
        assert!(convergence_sweep(
            &SweepDomain::Interval { a: r("0"), b: r("1") },
            3,
            &[],
            gauss,
            None,
            Options::default()
        )
        .unwrap()
        .is_empty());
    }
}
