use proptest::prelude::*;
use rug::ops::Pow;
use rug::Rational;

use ncquad::composite::{integrate, CompositePlan, Options};
use ncquad::diagnostics::g_function;
use ncquad::divdiff::leading_entries;
use ncquad::exact_poly::{integrate_poly, newton_basis};
use ncquad::expr::{Func, Node};
use ncquad::{
    compute_weights, divided_difference, realistic_error, simple_rule, Expr, ExtendedPanel, Panel, Precision, Real,
};

fn p30() -> Precision {
    Precision::new(30).unwrap()
}

fn r(v: f64) -> Real {
    Real::from_f64(v, p30())
}

fn within_ulps(a: &Real, b: &Real, ulps: i64) -> bool {
    let scale = if a.abs() > b.abs() { a.abs() } else { b.abs() };
    (a - b).abs() <= &scale.ulp() * &Real::from_i64(ulps, a.precision())
}

/// Closed Newton-Cotes weights on `0, 1, ..., n-1` by integrating each
/// Lagrange basis polynomial over `[0, n-1]`.
fn lagrange_weights(n: usize) -> Vec<Rational> {
    (0..n)
        .map(|k| {
            let mut poly = vec![Rational::from(1)];
            let mut denom = Rational::from(1);
            for j in (0..n).filter(|&j| j != k) {
                let mut next = vec![Rational::new(); poly.len() + 1];
                for (i, c) in poly.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= Rational::from(c * j as i64);
                }
                poly = next;
                denom *= k as i64 - j as i64;
            }
            let upper = Rational::from(n as i64 - 1);
            let integral: Rational = poly
                .iter()
                .enumerate()
                .map(|(i, c)| Rational::from(c * upper.clone().pow(i as u32 + 1)) / (i as u32 + 1))
                .sum();
            integral / denom
        })
        .collect()
}

#[test]
fn nodal_form_matches_lagrange_oracle() {
    for n in 2..=12 {
        let w = compute_weights(n).unwrap();
        assert_eq!(w.nodal_weights(), lagrange_weights(n), "n = {n}");
    }
}

#[test]
fn divided_difference_weights_are_positive() {
    for n in 2..=12 {
        assert!(compute_weights(n).unwrap().weights().iter().all(|w| w.coeff > 0), "n = {n}");
    }
}

#[test]
fn small_rule_error_coefficients() {
    assert_eq!(compute_weights(2).unwrap().error_coeff().coeff, Rational::from((-1, 3)));
    assert_eq!(compute_weights(2).unwrap().error_coeff().h_power, 1);
    assert_eq!(compute_weights(3).unwrap().error_coeff().coeff, Rational::from((-2, 15)));
    assert_eq!(compute_weights(3).unwrap().error_coeff().h_power, 3);
}

#[test]
fn error_constant_from_first_missed_polynomial() {
    // On unit spacing, S_n(w) for w = w_{deg+1} must equal the nodal rule
    // applied to w, so I(w) - S_n(w) is the exact rational I(w) - Σ c_j w(j).
    for n in 2..=7 {
        let weights = compute_weights(n).unwrap();
        let deg = weights.degree();
        let w = newton_basis(deg + 1).unwrap().pop().unwrap();
        let exact = integrate_poly(&w, &Rational::new(), &Rational::from(n as i64 - 1));
        let nodal: Rational = lagrange_weights(n)
            .iter()
            .enumerate()
            .map(|(j, c)| Rational::from(c * w.eval(&Rational::from(j as i64))))
            .sum();
        let missed = Rational::from(&exact - &nodal);
        assert_ne!(missed, 0, "n = {n}");

        let p = p30();
        let panel = Panel::sample(&Real::zero(p), &Real::one(p), n, |x| {
            let t = Rational::from_f64(x.to_f64()).unwrap();
            Ok(Real::from_rational(&w.eval(&t), p))
        })
        .unwrap();
        let s = simple_rule(&panel, &weights).unwrap().s;
        let got = &Real::from_rational(&exact, p) - &s;
        let want = Real::from_rational(&missed, p);
        assert!((&got - &want).abs().to_f64() < 1e-20, "n = {n}: {got} vs {want}");
    }
}

fn distinct_nodes(len: usize) -> impl Strategy<Value = Vec<f64>> {
    // Integer grid with gaps of at least 1/8, so nodes never coincide.
    prop::collection::btree_set(-40i32..40, len).prop_map(|s| s.into_iter().map(|k| k as f64 / 8.0).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divided_differences_ignore_node_order(
        (xs, ys, perm) in (2usize..8).prop_flat_map(|len| (
            distinct_nodes(len),
            prop::collection::vec(-10.0f64..10.0, len),
            Just((0..len).collect::<Vec<_>>()).prop_shuffle(),
        ))
    ) {
        let x: Vec<Real> = xs.iter().map(|&v| r(v)).collect();
        let y: Vec<Real> = ys.iter().map(|&v| r(v)).collect();
        let px: Vec<Real> = perm.iter().map(|&i| x[i].clone()).collect();
        let py: Vec<Real> = perm.iter().map(|&i| y[i].clone()).collect();
        let order = x.len() - 1;
        let a = divided_difference(&x, &y, order).unwrap();
        let b = divided_difference(&px, &py, order).unwrap();
        prop_assert!(within_ulps(&a, &b, 10), "{} vs {}", a, b);
    }

    #[test]
    fn divided_differences_scale_with_values(
        (xs, ys) in (2usize..8).prop_flat_map(|len| (distinct_nodes(len), prop::collection::vec(-10.0f64..10.0, len))),
        k in -20i32..20,
        negate in any::<bool>(),
    ) {
        // Scaling by a signed power of two is exact, so so is the result.
        let c = if negate { -(2f64.powi(k)) } else { 2f64.powi(k) };
        let x: Vec<Real> = xs.iter().map(|&v| r(v)).collect();
        let y: Vec<Real> = ys.iter().map(|&v| r(v)).collect();
        let c = r(c);
        let cy: Vec<Real> = y.iter().map(|v| &c * v).collect();
        let plain = leading_entries(&x, &y).unwrap();
        let scaled = leading_entries(&x, &cy).unwrap();
        for (d, s) in plain.iter().zip(&scaled) {
            prop_assert_eq!(&(&c * d), s);
        }
    }

    #[test]
    fn mean_value_bracket_for_exp(xs in (2usize..7).prop_flat_map(|len| prop::collection::btree_set(0u32..64, len))) {
        let x: Vec<Real> = xs.iter().map(|&k| r(k as f64 / 64.0)).collect();
        let y: Vec<Real> = x.iter().map(Real::exp).collect();
        let k = x.len() - 1;
        let factorial = (1..=k as i64).fold(r(1.0), |acc, i| &acc * &Real::from_i64(i, p30()));
        let scaled = &factorial * &divided_difference(&x, &y, k).unwrap();
        // Every derivative of exp is exp, which is monotone on the hull.
        prop_assert!(scaled >= x[0].exp() && scaled <= x[k].exp());
    }

    #[test]
    fn two_and_three_point_estimates_match_closed_forms(
        n in 2usize..=3,
        a in -3.0f64..3.0,
        h in 0.05f64..1.0,
        ys in prop::collection::vec(-5.0f64..5.0, 5),
    ) {
        let (a, h) = (r(a), r(h));
        let panel = Panel::sample(&a, &h, n, |x| {
            let k = (&(x - &a) / &h).round_to_i64().unwrap() as usize;
            Ok(r(ys[k]))
        }).unwrap();
        prop_assume!((&panel.values()[1] - &panel.values()[0]).abs().to_f64() > 1e-3);
        let mid = ExtendedPanel::midpoints(&panel);
        let mid_y: Vec<Real> = (0..mid.len()).map(|i| r(ys[3 + i])).collect();
        let ext = ExtendedPanel::with_values(panel.clone(), mid_y).unwrap();
        let weights = compute_weights(n).unwrap();
        let e_tilde = simple_rule(&panel, &weights).unwrap().e_tilde;
        let got = realistic_error(&panel, &ext, &weights, &e_tilde).unwrap();

        let nodes = ext.nodes();
        let values = ext.values();
        let d1 = &(&values[1] - &values[0]) / &(&nodes[1] - &nodes[0]);
        let want = if n == 2 {
            // -(h/3) f[x1, x2, xbar] / f[x1, x2] · Ẽ₂
            let d2 = divided_difference(&nodes, &values, 2).unwrap();
            &(&(-&(&h / &r(3.0))) * &(&d2 / &d1)) * &e_tilde
        } else {
            // -(2h³/15) f[x1, x2, x3, xbar1, xbar2] / f[x1, x2] · Ẽ₃
            let d4 = divided_difference(&nodes, &values, 4).unwrap();
            let coeff = &(&r(-2.0) * &h.powi(3)) / &r(15.0);
            &(&coeff * &(&d4 / &d1)) * &e_tilde
        };
        prop_assert!(within_ulps(&got, &want, 64), "{} vs {}", got, want);
    }

    #[test]
    fn composite_is_additive(n in 2usize..=7, left in 1usize..6, right in 1usize..6, a in -8i32..8, step in 1u32..8) {
        let p = p30();
        let h = Real::from_i64(step as i64, p) / Real::from_i64(16, p);
        let a = Real::from_i64(a as i64, p) / Real::from_i64(4, p);
        let at = |k: usize| &a + &(&h * &Real::from_i64(((n - 1) * k) as i64, p));
        let (c, b) = (at(left), at(left + right));
        let f = |x: &Real| Ok(&Real::from_i64(2, p) + &x.sin());
        let whole = integrate(&CompositePlan::new(a.clone(), b.clone(), n, left + right).unwrap(), f, Options::default()).unwrap();
        let first = integrate(&CompositePlan::new(a.clone(), c.clone(), n, left).unwrap(), f, Options::default()).unwrap();
        let second = integrate(&CompositePlan::new(c, b, n, right).unwrap(), f, Options::default()).unwrap();
        prop_assert!(within_ulps(&whole.s, &(&first.s + &second.s), 10));
    }

    #[test]
    fn g_matches_three_point_closed_form(x in 0.05f64..0.7, h in 0.01f64..1.0, c in -3.0f64..3.0) {
        prop_assume!(c.abs() > 0.01);
        let w = compute_weights(3).unwrap();
        // f = exp(c x): f''/f' = c.
        let e = Expr::parse(&format!("exp({c}*x)")).unwrap();
        let got = g_function(&e, &r(x), &r(h), &w).unwrap().to_f64();
        let want = (1.0 + h / 6.0 * c).abs();
        prop_assert!((got - want).abs() <= 1e-10 * want.max(1e-300));
        // f = sin(2x): f''/f' = -2 tan(2x).
        let e = Expr::parse("sin(2*x)").unwrap();
        let got = g_function(&e, &r(x), &r(h), &w).unwrap().to_f64();
        let want = (1.0 - h / 3.0 * (2.0 * x).tan()).abs();
        prop_assert!((got - want).abs() <= 1e-10 * want.max(1e-12));
    }
}

#[test]
fn estimate_order_under_halving() {
    // sin(2x) on [0, pi/5]: the composite estimate shrinks like h^(n+1).
    let p = p30();
    let f = Expr::parse("sin(2*x)").unwrap();
    let b = ncquad::parse_constant("pi/5", p).unwrap();
    for n in [3usize, 5] {
        let estimates: Vec<f64> = [2usize, 4, 8, 16]
            .iter()
            .map(|&i| {
                let plan = CompositePlan::new(Real::zero(p), b.clone(), n, i).unwrap();
                let out = integrate(&plan, |x| f.eval(x), Options::default()).unwrap();
                out.e_bar.unwrap().abs().to_f64()
            })
            .collect();
        for pair in estimates.windows(2) {
            let exponent = (pair[0] / pair[1]).log2();
            assert!((exponent - (n + 1) as f64).abs() <= 0.5, "n = {n}: exponent {exponent}");
        }
    }
}

// Random expressions over the built-in functions, kept in domain by wrapping
// the arguments of sqrt and ln as 1 + u^2 and 1/(...) as 2 + sin(...).
fn arb_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x".to_string()),
        (1u32..9).prop_map(|k| format!("{}", k as f64 / 4.0)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} * {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} / (2 + sin({b})))")),
            inner.clone().prop_map(|a| format!("exp(sin({a}))")),
            inner.clone().prop_map(|a| format!("ln(1 + ({a})^2)")),
            inner.clone().prop_map(|a| format!("sqrt(1 + ({a})^2)")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.clone().prop_map(|a| format!("erf({a})")),
            inner.prop_map(|a| format!("(-{a})^3")),
        ]
    })
}

fn func_names() -> impl Strategy<Value = Func> {
    prop_oneof![
        Just(Func::Sqrt),
        Just(Func::Exp),
        Just(Func::Ln),
        Just(Func::Sin),
        Just(Func::Cos),
        Just(Func::Erf),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn jet_of_product_is_convolution(f in arb_expr(), g in arb_expr(), x in -1.5f64..1.5, order in 1usize..6) {
        let (ef, eg) = (Expr::parse(&f).unwrap(), Expr::parse(&g).unwrap());
        let product = Expr::parse(&format!("({f}) * ({g})")).unwrap();
        let x = r(x);
        let jf = ef.jet(&x, order).unwrap();
        let jg = eg.jet(&x, order).unwrap();
        let jp = product.jet(&x, order).unwrap();
        for k in 0..=order {
            let mut conv = Real::zero(p30());
            for j in 0..=k {
                conv += &(&jf.coeffs()[j] * &jg.coeffs()[k - j]);
            }
            let diff = (&conv - &jp.coeffs()[k]).abs().to_f64();
            prop_assert!(diff <= 1e-24 * conv.abs().to_f64().max(1.0), "k = {}: {} vs {}", k, conv, jp.coeffs()[k]);
        }
    }

    #[test]
    fn jet_value_is_eval(f in arb_expr(), x in -1.5f64..1.5) {
        let e = Expr::parse(&f).unwrap();
        let x = r(x);
        let c0 = e.jet(&x, 1).unwrap().coeffs()[0].clone();
        let v = e.eval(&x).unwrap();
        prop_assert!(within_ulps(&c0, &v, 2) || (c0.is_zero() && v.abs().to_f64() < 1e-28));
    }

    #[test]
    fn jet_slope_matches_central_difference(func in func_names(), x in 0.2f64..3.0) {
        let e = Expr {
            node: Node::Call(func, Box::new(Expr { node: Node::Var, offset: 0 })),
            offset: 0,
        };
        let p = Precision::MACHINE;
        let c1 = e.jet(&Real::from_f64(x, p), 1).unwrap().coeffs()[1].to_f64();
        let step = 1e-5;
        let f = |t: f64| e.eval(&Real::from_f64(t, p)).unwrap().to_f64();
        let fd = (f(x + step) - f(x - step)) / (2.0 * step);
        prop_assert!((c1 - fd).abs() <= 1e-6 * c1.abs().max(1e-3), "{}: {} vs {}", func.name(), c1, fd);
    }

    #[test]
    fn display_reparses_to_the_same_function(f in arb_expr(), x in -1.5f64..1.5) {
        let e = Expr::parse(&f).unwrap();
        let again = Expr::parse(&e.to_string()).unwrap();
        let x = r(x);
        prop_assert_eq!(e.eval(&x).unwrap(), again.eval(&x).unwrap());
    }
}
