use crate::real::{Precision, Real};

/// Truncated Taylor expansion about a point: `coeffs[k] = f^(k)(center) / k!`.
///
/// All operations truncate at the jet's order; binary operations require
/// equal orders.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorJet {
    center: Real,
    coeffs: Vec<Real>,
}

impl TaylorJet {
    pub fn new(center: Real, coeffs: Vec<Real>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least the constant term");
        TaylorJet { center, coeffs }
    }

    pub fn constant(center: &Real, value: Real, order: usize) -> Self {
        let p = value.precision();
        let mut coeffs = vec![Real::zero(p); order + 1];
        coeffs[0] = value;
        TaylorJet::new(center.clone(), coeffs)
    }

    /// The identity function `t ↦ t` expanded at `center`.
    pub fn variable(center: &Real, order: usize) -> Self {
        let p = center.precision();
        let mut coeffs = vec![Real::zero(p); order + 1];
        coeffs[0] = center.clone();
        if order >= 1 {
            coeffs[1] = Real::one(p);
        }
        TaylorJet::new(center.clone(), coeffs)
    }

    pub fn center(&self) -> &Real {
        &self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    pub fn value(&self) -> &Real {
        &self.coeffs[0]
    }

    fn precision(&self) -> Precision {
        self.coeffs[0].precision()
    }

    /// `f^(k)(center) = k! · c_k`.
    pub fn derivative(&self, k: usize) -> Real {
        let p = self.precision();
        let factorial = (1..=k as i64).fold(Real::one(p), |acc, i| &acc * &Real::from_i64(i, p));
        &factorial * &self.coeffs[k]
    }

    fn zeros(&self) -> Vec<Real> {
        vec![Real::zero(self.precision()); self.coeffs.len()]
    }

    fn with_coeffs(&self, coeffs: Vec<Real>) -> Self {
        TaylorJet {
            center: self.center.clone(),
            coeffs,
        }
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(self.order(), other.order(), "jets of different orders");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_order(other);
        self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_order(other);
        self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, factor: &Real) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|a| a * factor).collect())
    }

    /// Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_order(other);
        let mut out = self.zeros();
        for (k, slot) in out.iter_mut().enumerate() {
            for j in 0..=k {
                *slot += &(&self.coeffs[j] * &other.coeffs[k - j]);
            }
        }
        self.with_coeffs(out)
    }

    /// `self / other`; `None` if `other` has a zero constant term.
    pub fn div(&self, other: &Self) -> Option<Self> {
        self.check_order(other);
        let b0 = &other.coeffs[0];
        if b0.is_zero() {
            return None;
        }
        let mut out: Vec<Real> = Vec::with_capacity(self.coeffs.len());
        for k in 0..self.coeffs.len() {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc -= &(&other.coeffs[j] * &out[k - j]);
            }
            out.push(&acc / b0);
        }
        Some(self.with_coeffs(out))
    }

    /// Integer power by repeated squaring; `None` for a negative power of a
    /// jet with zero constant term.
    pub fn powi(&self, exponent: i32) -> Option<Self> {
        let one = TaylorJet::constant(&self.center, Real::one(self.precision()), self.order());
        let mut result = one.clone();
        let mut base = self.clone();
        let mut e = exponent.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        if exponent < 0 {
            one.div(&result)
        } else {
            Some(result)
        }
    }

    /// `g = h(u)` from `g' = q · u'`, given the jet `q` of `h'(u)` and `g_0`:
    /// `g_k = (1/k) Σ_{j=1}^{k} j u_j q_{k-j}`.
    fn integrate_chain(&self, g0: Real, q: &[Real]) -> Self {
        let p = self.precision();
        let mut out = Vec::with_capacity(self.coeffs.len());
        out.push(g0);
        for k in 1..self.coeffs.len() {
            let mut acc = Real::zero(p);
            for j in 1..=k {
                acc += &(&(&Real::from_i64(j as i64, p) * &self.coeffs[j]) * &q[k - j]);
            }
            out.push(&acc / &Real::from_i64(k as i64, p));
        }
        self.with_coeffs(out)
    }

    pub fn exp(&self) -> Self {
        // e' = e u': the recurrence feeds on its own output.
        let p = self.precision();
        let mut out: Vec<Real> = Vec::with_capacity(self.coeffs.len());
        out.push(self.coeffs[0].exp());
        for k in 1..self.coeffs.len() {
            let mut acc = Real::zero(p);
            for j in 1..=k {
                acc += &(&(&Real::from_i64(j as i64, p) * &self.coeffs[j]) * &out[k - j]);
            }
            out.push(&acc / &Real::from_i64(k as i64, p));
        }
        self.with_coeffs(out)
    }

    /// Natural logarithm; the caller checks that the constant term is positive.
    pub fn ln(&self) -> Self {
        let p = self.precision();
        let u0 = &self.coeffs[0];
        let mut out: Vec<Real> = Vec::with_capacity(self.coeffs.len());
        out.push(u0.ln());
        for k in 1..self.coeffs.len() {
            let mut acc = Real::zero(p);
            for j in 1..k {
                acc += &(&(&Real::from_i64(j as i64, p) * &out[j]) * &self.coeffs[k - j]);
            }
            let acc = &acc / &Real::from_i64(k as i64, p);
            out.push(&(&self.coeffs[k] - &acc) / u0);
        }
        self.with_coeffs(out)
    }

    /// Square root; the caller checks that the constant term is positive.
    pub fn sqrt(&self) -> Self {
        let p = self.precision();
        let r0 = self.coeffs[0].sqrt();
        let two_r0 = &Real::from_i64(2, p) * &r0;
        let mut out: Vec<Real> = Vec::with_capacity(self.coeffs.len());
        out.push(r0);
        for k in 1..self.coeffs.len() {
            let mut acc = self.coeffs[k].clone();
            for j in 1..k {
                acc -= &(&out[j] * &out[k - j]);
            }
            out.push(&acc / &two_r0);
        }
        self.with_coeffs(out)
    }

    /// `(sin u, cos u)` from the coupled recurrences `s' = c u'`, `c' = -s u'`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let p = self.precision();
        let (s0, c0) = self.coeffs[0].sin_cos();
        let mut s = vec![s0];
        let mut c = vec![c0];
        for k in 1..self.coeffs.len() {
            let mut acc_s = Real::zero(p);
            let mut acc_c = Real::zero(p);
            for j in 1..=k {
                let ju = &Real::from_i64(j as i64, p) * &self.coeffs[j];
                acc_s += &(&ju * &c[k - j]);
                acc_c += &(&ju * &s[k - j]);
            }
            let kk = Real::from_i64(k as i64, p);
            s.push(&acc_s / &kk);
            c.push(-(&acc_c / &kk));
        }
        (self.with_coeffs(s), self.with_coeffs(c))
    }

    /// `erf u` from `erf'(u) = (2/√π) exp(-u²)`.
    pub fn erf(&self) -> Self {
        let p = self.precision();
        let two_over_sqrt_pi = &Real::from_i64(2, p) / &Real::pi(p).sqrt();
        let q = self.mul(self).neg().exp().scale(&two_over_sqrt_pi);
        self.integrate_chain(self.coeffs[0].erf(), &q.coeffs)
    }

    /// Evaluates the truncated series at `center + dt`.
    pub fn eval_offset(&self, dt: &Real) -> Real {
        let mut acc = Real::zero(self.precision());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * dt) + c;
        }
        acc
    }
}
