//! Divided differences over equally spaced panels.
//!
//! The recursion is anchored at the first node,
//! `dd[i][j] = (dd[i-1][j+1] - dd[i-1][j]) / (x[i+j] - x[j])`,
//! and the leading entry `dd[k][0]` is `f[x_1, ..., x_{k+1}]`. Tables are built
//! with a few guard digits and rounded back to the precision of the values.

use crate::error::{Error, Result};
use crate::real::{Precision, Real};

/// `f[x_1, ..., x_{order+1}]` over the first `order + 1` nodes.
pub fn divided_difference(nodes: &[Real], values: &[Real], order: usize) -> Result<Real> {
    if nodes.len() != values.len() {
        return Err(Error::SizeMismatch {
            expected: nodes.len(),
            actual: values.len(),
        });
    }
    if order >= nodes.len() {
        return Err(Error::OrderOutOfRange {
            order,
            available: nodes.len(),
        });
    }
    let (p, gp) = guard(&values[0], order);
    let nodes: Vec<Real> = nodes[..=order].iter().map(|x| x.with_precision(gp)).collect();
    let mut column: Vec<Real> = values[..=order].iter().map(|y| y.with_precision(gp)).collect();
    for i in 1..=order {
        for j in 0..=order - i {
            let span = &nodes[i + j] - &nodes[j];
            if span.is_zero() {
                return Err(Error::DegeneratePanel(j, i + j));
            }
            column[j] = &(&column[j + 1] - &column[j]) / &span;
        }
    }
    Ok(column.swap_remove(0).with_precision(p))
}

/// Working precision of `sample` and the widened precision used inside a
/// table of the given order; each order can cancel about one digit.
fn guard(sample: &Real, order: usize) -> (Precision, Precision) {
    let p = sample.precision();
    (p, Precision::new(p.digits() + order as u32 + 4).unwrap_or(p))
}

/// Leading entries of the divided-difference table for orders `0..len`,
/// from a single triangular sweep.
pub fn leading_entries(nodes: &[Real], values: &[Real]) -> Result<Vec<Real>> {
    if nodes.len() != values.len() {
        return Err(Error::SizeMismatch {
            expected: nodes.len(),
            actual: values.len(),
        });
    }
    let len = nodes.len();
    let Some(first) = values.first() else {
        return Ok(Vec::new());
    };
    let (p, gp) = guard(first, len);
    let nodes: Vec<Real> = nodes.iter().map(|x| x.with_precision(gp)).collect();
    let mut column: Vec<Real> = values.iter().map(|y| y.with_precision(gp)).collect();
    let mut out = Vec::with_capacity(len);
    out.push(first.clone());
    for i in 1..len {
        for j in 0..len - i {
            let span = &nodes[i + j] - &nodes[j];
            if span.is_zero() {
                return Err(Error::DegeneratePanel(j, i + j));
            }
            column[j] = &(&column[j + 1] - &column[j]) / &span;
        }
        out.push(column[0].with_precision(p));
    }
    Ok(out)
}

/// Entry `j` is `f[x_1, ..., x_{j+1}]` for `j = 0..n`.
pub fn full_table(panel: &Panel) -> Result<Vec<Real>> {
    leading_entries(panel.nodes(), panel.values())
}

/// `n` equally spaced nodes with their function values.
#[derive(Clone, Debug)]
pub struct Panel {
    x: Vec<Real>,
    y: Vec<Real>,
    h: Real,
}

impl Panel {
    /// Validates `n >= 2`, matching lengths, `h > 0` and equal spacing to a
    /// relative tolerance of `10^(2 - digits)`.
    pub fn new(x: Vec<Real>, y: Vec<Real>, h: Real) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::SizeMismatch {
                expected: x.len(),
                actual: y.len(),
            });
        }
        if x.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a panel needs at least 2 nodes, got {}",
                x.len()
            )));
        }
        if !h.is_positive() {
            return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
        }
        let tol = h.precision().tolerance(2);
        for i in 0..x.len() - 1 {
            let gap = &x[i + 1] - &x[i];
            if gap.is_zero() {
                return Err(Error::DegeneratePanel(i, i + 1));
            }
            let scale = x[i].abs().max(x[i + 1].abs()).max(h.clone());
            if (&gap - &h).abs() > &tol * &scale {
                return Err(Error::UnequalSpacing { index: i });
            }
        }
        Ok(Panel { x, y, h })
    }

    /// Samples `f` at `start + k h` for `k = 0..n`.
    pub fn sample<F>(start: &Real, h: &Real, n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&Real) -> Result<Real>,
    {
        let x: Vec<Real> = (0..n)
            .map(|k| start + &(h * &Real::from_i64(k as i64, h.precision())))
            .collect();
        let y = x.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        Panel::new(x, y, h.clone())
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn nodes(&self) -> &[Real] {
        &self.x
    }

    pub fn values(&self) -> &[Real] {
        &self.y
    }

    pub fn step(&self) -> &Real {
        &self.h
    }

    pub fn precision(&self) -> Precision {
        self.h.precision()
    }
}

/// A panel completed with the midpoint(s) used by the realistic error:
/// `(x_1+x_2)/2` for even `n`, plus `(x_{n-1}+x_n)/2` for odd `n`.
#[derive(Clone, Debug)]
pub struct ExtendedPanel {
    base: Panel,
    mid_x: Vec<Real>,
    mid_y: Vec<Real>,
}

impl ExtendedPanel {
    /// The midpoint nodes a panel of this size is extended with.
    pub fn midpoints(base: &Panel) -> Vec<Real> {
        let x = base.nodes();
        let n = x.len();
        let two = Real::from_i64(2, base.precision());
        let first = &(&x[0] + &x[1]) / &two;
        if n % 2 == 1 {
            vec![first, &(&x[n - 2] + &x[n - 1]) / &two]
        } else {
            vec![first]
        }
    }

    /// Evaluates `f` freshly at each midpoint.
    pub fn sample<F>(base: Panel, f: F) -> Result<Self>
    where
        F: FnMut(&Real) -> Result<Real>,
    {
        let mid_x = Self::midpoints(&base);
        let mid_y = mid_x.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(ExtendedPanel { base, mid_x, mid_y })
    }

    /// Builds from precomputed midpoint values, which must line up with
    /// [`ExtendedPanel::midpoints`].
    pub fn with_values(base: Panel, mid_y: Vec<Real>) -> Result<Self> {
        let mid_x = Self::midpoints(&base);
        if mid_y.len() != mid_x.len() {
            return Err(Error::SizeMismatch {
                expected: mid_x.len(),
                actual: mid_y.len(),
            });
        }
        for m in &mid_x {
            if base.nodes().iter().any(|x| x == m) {
                return Err(Error::InvalidArgument(
                    "midpoint coincides with a panel node".into(),
                ));
            }
        }
        Ok(ExtendedPanel { base, mid_x, mid_y })
    }

    pub fn base(&self) -> &Panel {
        &self.base
    }

    pub fn midpoint_nodes(&self) -> &[Real] {
        &self.mid_x
    }

    pub fn midpoint_values(&self) -> &[Real] {
        &self.mid_y
    }

    /// Base nodes followed by the midpoints.
    pub fn nodes(&self) -> Vec<Real> {
        self.base.nodes().iter().chain(&self.mid_x).cloned().collect()
    }

    pub fn values(&self) -> Vec<Real> {
        self.base.values().iter().chain(&self.mid_y).cloned().collect()
    }
}
