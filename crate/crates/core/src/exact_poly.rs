//! Exact construction of the Newton basis and the rule weights.
//!
//! Everything here works in unit-step form: the panel nodes are the integers
//! `0, 1, ..., n-1` and every weight carries an explicit power of `h`. A weight
//! table is therefore a set of pure rationals that can be compared exactly.

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{Precision, Real};

/// Dense univariate polynomial with rational coefficients, lowest power first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RationalPoly {
            coeffs: vec![Rational::from(1)],
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// `self * (t - root)`.
    pub fn mul_linear(&self, root: &Rational) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= Rational::from(c * root);
        }
        Self::from_coeffs(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Self::from_coeffs(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let out = (0..len)
            .map(|i| {
                let mut c = self.coeffs.get(i).cloned().unwrap_or_default();
                if let Some(d) = other.coeffs.get(i) {
                    c += d;
                }
                c
            })
            .collect();
        Self::from_coeffs(out)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| Rational::from(c * factor)).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= t;
            acc += c;
        }
        acc
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(Rational::new());
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push(Rational::from(c / Integer::from(i + 1)));
        }
        Self::from_coeffs(out)
    }
}

/// Exact integral of `p` over `[lower, upper]`.
pub fn integrate_poly(p: &RationalPoly, lower: &Rational, upper: &Rational) -> Rational {
    let anti = p.antiderivative();
    anti.eval(upper) - anti.eval(lower)
}

/// Newton basis `w_0, ..., w_n` on the unit-step nodes `0, 1, 2, ...`, where
/// `w_j(t) = t (t-1) ... (t-(j-1))`.
pub fn newton_basis(n: usize) -> Result<Vec<RationalPoly>> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!(
            "newton basis needs n >= 1, got {n}"
        )));
    }
    let mut basis = Vec::with_capacity(n + 1);
    basis.push(RationalPoly::one());
    for j in 1..=n {
        let next = basis[j - 1].mul_linear(&Rational::from(j as i64 - 1));
        basis.push(next);
    }
    Ok(basis)
}

/// A rational coefficient multiplied by a power of the step, `coeff * h^h_power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HTerm {
    pub coeff: Rational,
    pub h_power: u32,
}

impl HTerm {
    pub fn new(coeff: Rational, h_power: u32) -> Self {
        HTerm { coeff, h_power }
    }

    /// Numeric value for a concrete step. The precision is taken from `h`.
    pub fn value(&self, h: &Real) -> Real {
        let c = Real::from_rational(&self.coeff, h.precision());
        &c * &h.powi(self.h_power as i32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Weights `a_1..a_n` of the extended rule `S_n` together with the error
/// coefficient of its realistic estimate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSet {
    n: usize,
    weights: Vec<HTerm>,
    error_coeff: HTerm,
    degree: usize,
}

impl WeightSet {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `a_1..a_n`; `weights()[i]` carries `h^(i+1)`.
    pub fn weights(&self) -> &[HTerm] {
        &self.weights
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n)
    }

    /// `I(w_{n+1})/I(w_1)` for odd `n`, `I(w_n)/I(w_1)` for even `n`.
    pub fn error_coeff(&self) -> &HTerm {
        &self.error_coeff
    }

    /// Degree of exactness of `S_n`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Order of the divided difference used in the realistic error: one
    /// midpoint is appended for even `n`, two for odd `n`.
    pub fn estimate_order(&self) -> usize {
        match self.parity() {
            Parity::Odd => self.n + 1,
            Parity::Even => self.n,
        }
    }

    /// Nodal (Lagrange) weights `c_1..c_n` in unit-step form, so that
    /// `S_n = h * sum c_j f(x_j)`. Obtained by expanding each forward divided
    /// difference `f[x_1..x_{k+1}] = Δ^k f_1 / (k! h^k)`.
    pub fn nodal_weights(&self) -> Vec<Rational> {
        let mut nodal = vec![Rational::new(); self.n];
        let mut factorial = Integer::from(1);
        for (k, w) in self.weights.iter().enumerate() {
            if k > 0 {
                factorial *= k as u32;
            }
            let scaled = Rational::from(&w.coeff / &factorial);
            let mut binom = Integer::from(1);
            for (m, slot) in nodal.iter_mut().enumerate().take(k + 1) {
                if m > 0 {
                    binom *= (k + 1 - m) as u32;
                    binom /= m as u32;
                }
                let term = Rational::from(&scaled * &binom);
                if (k - m) % 2 == 0 {
                    *slot += term;
                } else {
                    *slot -= term;
                }
            }
        }
        nodal
    }

    pub fn to_json(&self) -> WeightSetJson {
        let term = |t: &HTerm| RationalJson {
            num: t.coeff.numer().to_string(),
            den: t.coeff.denom().to_string(),
            h_power: t.h_power,
        };
        WeightSetJson {
            n: self.n,
            weights: self.weights.iter().map(term).collect(),
            error_coeff: ErrorCoeffJson {
                parity: self.parity(),
                term: term(&self.error_coeff),
            },
            degree: self.degree,
        }
    }

    pub fn from_json(json: &WeightSetJson) -> Result<Self> {
        let term = |t: &RationalJson| -> Result<HTerm> {
            let num: Integer = t
                .num
                .parse()
                .map_err(|_| Error::WeightFormat(format!("bad numerator `{}`", t.num)))?;
            let den: Integer = t
                .den
                .parse()
                .map_err(|_| Error::WeightFormat(format!("bad denominator `{}`", t.den)))?;
            if den <= 0 {
                return Err(Error::WeightFormat(format!("non-positive denominator `{}`", t.den)));
            }
            Ok(HTerm::new(Rational::from((num, den)), t.h_power))
        };
        if json.weights.len() != json.n {
            return Err(Error::SizeMismatch {
                expected: json.n,
                actual: json.weights.len(),
            });
        }
        if json.error_coeff.parity != Parity::of(json.n) {
            return Err(Error::WeightFormat("parity does not match n".into()));
        }
        Ok(WeightSet {
            n: json.n,
            weights: json.weights.iter().map(term).collect::<Result<_>>()?,
            error_coeff: term(&json.error_coeff.term)?,
            degree: json.degree,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
    pub h_power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorCoeffJson {
    pub parity: Parity,
    #[serde(flatten)]
    pub term: RationalJson,
}

/// Wire form of a [`WeightSet`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSetJson {
    pub n: usize,
    pub weights: Vec<RationalJson>,
    pub error_coeff: ErrorCoeffJson,
    pub degree: usize,
}

/// Weights of the `n`-point rule, `a_i = ∫_0^{n-1} w_{i-1}(t) dt` in unit-step
/// form with `h^i` attached.
pub fn compute_weights(n: usize) -> Result<WeightSet> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "a panel needs at least 2 points, got {n}"
        )));
    }
    let basis = newton_basis(n + 1)?;
    let zero = Rational::new();
    let end = Rational::from(n as i64 - 1);
    let integral = |j: usize| integrate_poly(&basis[j], &zero, &end);

    let weights = (0..n)
        .map(|i| HTerm::new(integral(i), i as u32 + 1))
        .collect();
    let i_w1 = integral(1);
    let (error_coeff, degree) = match Parity::of(n) {
        // I(w_{n+1}) scales as h^{n+2}, I(w_1) as h^2.
        Parity::Odd => (HTerm::new(integral(n + 1) / &i_w1, n as u32), n),
        Parity::Even => (HTerm::new(integral(n) / &i_w1, n as u32 - 1), n - 1),
    };
    Ok(WeightSet {
        n,
        weights,
        error_coeff,
        degree,
    })
}

/// The three integrals of `w_n` over `[0, n-1]`, `[0, n]` and `[0, n-2]`
/// (unit step) whose vanishing pattern fixes the degree of `S_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonIntegrals {
    /// Over `[0, n-1]`.
    pub panel: Rational,
    /// Over `[0, n]`.
    pub extended: Rational,
    /// Over `[0, n-2]`.
    pub shortened: Rational,
}

pub fn newton_basis_integrals(n: usize) -> Result<NewtonIntegrals> {
    let basis = newton_basis(n)?;
    let w = &basis[n];
    let zero = Rational::new();
    let at = |k: i64| integrate_poly(w, &zero, &Rational::from(k));
    Ok(NewtonIntegrals {
        panel: at(n as i64 - 1),
        extended: at(n as i64),
        shortened: at(n as i64 - 2),
    })
}

/// Exact weights turned into working-precision numbers for a given step.
#[derive(Clone, Debug)]
pub struct ScaledWeights {
    pub weights: Vec<Real>,
    pub error_coeff: Real,
}

impl WeightSet {
    pub fn scaled(&self, h: &Real) -> ScaledWeights {
        ScaledWeights {
            weights: self.weights.iter().map(|w| w.value(h)).collect(),
            error_coeff: self.error_coeff.value(h),
        }
    }

    /// Unit-step weights as reals, mainly for diagnostics.
    pub fn unit_weights(&self, precision: Precision) -> Vec<Real> {
        self.weights
            .iter()
            .map(|w| Real::from_rational(&w.coeff, precision))
            .collect()
    }
}
