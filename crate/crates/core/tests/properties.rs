use std::f64::consts::PI;

use bipdo_core::calculus::{adjoint_angle, adjoint_exact, bilinear_pairing, Which};
use bipdo_core::lattice::{inverse_transform, make_grid, transform, GridSpec, SampledFunction};
use bipdo_core::norms::{lebesgue_norm, parseval_norm, sobolev_norm};
use bipdo_core::quantize::apply_bilinear;
use bipdo_core::symbols::{check_class_with, sample_symbol, split_symbol, Ceiling, ClassSpec};
use bipdo_core::symlang::{parse, parse_complex, Point, SymbolExpr, Var};
use bipdo_core::verify::random_symbol;
use bipdo_core::Complex64;
use proptest::prelude::*;

fn grid(n: usize) -> GridSpec {
    make_grid(n, 2.0 * PI).unwrap()
}

fn expr_strategy() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x".to_string()),
        Just("alpha".to_string()),
        Just("beta".to_string()),
        (-40i32..=40).prop_map(|c| format!("{:?}", c as f64 / 8.0)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}+{b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}-{b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})/bracket({b})")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.clone().prop_map(|a| format!("atan({a})")),
            inner.clone().prop_map(|a| format!("exp(cos({a}))")),
            inner.clone().prop_map(|a| format!("sqrt(bracket({a}))")),
            inner.clone().prop_map(|a| format!("(-{a})^3")),
        ]
    })
}

fn point() -> impl Strategy<Value = Point> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, a, b)| Point::bilinear(x, a, b))
}

fn samples(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_expressions_reparse_to_the_same_function(text in expr_strategy(), p in point()) {
        let e = parse(&text).unwrap();
        let again = parse(&e.to_string()).unwrap();
        prop_assert!(close(e.eval(&p), again.eval(&p), 1e-14));
    }

    #[test]
    fn derivative_is_linear(a in expr_strategy(), b in expr_strategy(), p in point(), s in -3.0..3.0f64) {
        let (u, v) = (parse(&a).unwrap(), parse(&b).unwrap());
        let combo = SymbolExpr::add(SymbolExpr::mul(SymbolExpr::constant(s), u.clone()), v.clone());
        for var in [Var::X, Var::Alpha, Var::Beta] {
            let lhs = combo.differentiate(var, 1).eval(&p);
            let rhs = s * u.differentiate(var, 1).eval(&p) + v.differentiate(var, 1).eval(&p);
            prop_assert!(close(lhs, rhs, 1e-10), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn product_rule(a in expr_strategy(), b in expr_strategy(), p in point()) {
        let (u, v) = (parse(&a).unwrap(), parse(&b).unwrap());
        let uv = SymbolExpr::mul(u.clone(), v.clone());
        for var in [Var::X, Var::Alpha, Var::Beta] {
            let lhs = uv.differentiate(var, 1).eval(&p);
            let rhs = u.differentiate(var, 1).eval(&p) * v.eval(&p) + u.eval(&p) * v.differentiate(var, 1).eval(&p);
            prop_assert!(close(lhs, rhs, 1e-10), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn dft_round_trip_and_parseval(v in samples(32)) {
        let g = grid(32);
        let spec = transform(&g, &v).unwrap();
        let back = inverse_transform(&g, &spec).unwrap();
        let err = back.iter().zip(&v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-14);
        let f = SampledFunction::from_samples(g, v).unwrap();
        prop_assert!(close(lebesgue_norm(&f, 2.0).unwrap(), parseval_norm(&f), 1e-12));
    }

    #[test]
    fn quantization_is_bilinear(f1 in samples(16), f2 in samples(16), g in samples(16),
                                 a in -2.0..2.0f64, b in -2.0..2.0f64, seed in 0u64..1000) {
        let gr = grid(16);
        let sigma = random_symbol(&gr, 2, seed).unwrap();
        let (f1, f2, g) = (
            SampledFunction::from_samples(gr, f1).unwrap(),
            SampledFunction::from_samples(gr, f2).unwrap(),
            SampledFunction::from_samples(gr, g).unwrap(),
        );
        let (ca, cb) = (Complex64::new(a, 0.3), Complex64::new(b, -0.1));
        let lhs = apply_bilinear(&sigma, &f1.linear_combination(ca, &f2, cb).unwrap(), &g).unwrap();
        let rhs = apply_bilinear(&sigma, &f1, &g).unwrap()
            .linear_combination(ca, &apply_bilinear(&sigma, &f2, &g).unwrap(), cb).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * rhs.max_abs().max(1.0));
    }

    #[test]
    fn transposes_satisfy_the_pairing(seed in 0u64..1000, f in samples(16), g in samples(16), h in samples(16)) {
        let gr = grid(16);
        let sigma = random_symbol(&gr, 3, seed).unwrap();
        let (f, g, h) = (
            SampledFunction::from_samples(gr, f).unwrap(),
            SampledFunction::from_samples(gr, g).unwrap(),
            SampledFunction::from_samples(gr, h).unwrap(),
        );
        let t = apply_bilinear(&sigma, &f, &g).unwrap();
        let lhs = bilinear_pairing(&t, &h).unwrap();
        let scale = lebesgue_norm(&t, 2.0).unwrap() * lebesgue_norm(&h, 2.0).unwrap();
        let r1 = bilinear_pairing(&apply_bilinear(&adjoint_exact(&sigma, Which::First), &h, &g).unwrap(), &f).unwrap();
        let r2 = bilinear_pairing(&apply_bilinear(&adjoint_exact(&sigma, Which::Second), &f, &h).unwrap(), &g).unwrap();
        prop_assert!((lhs - r1).norm() <= 1e-11 * scale.max(1e-300));
        prop_assert!((lhs - r2).norm() <= 1e-11 * scale.max(1e-300));
    }

    #[test]
    fn angle_maps_are_involutions(theta in -1.5..1.5f64) {
        let t2 = adjoint_angle(adjoint_angle(theta, Which::Second).unwrap(), Which::Second).unwrap();
        prop_assert!((t2 - theta).abs() <= 1e-12);
        if theta.abs() > 1e-3 && (theta + PI / 4.0).abs() > 1e-3 {
            let t1 = adjoint_angle(adjoint_angle(theta, Which::First).unwrap(), Which::First).unwrap();
            prop_assert!((t1 - theta).abs() <= 1e-10, "{theta} -> {t1}");
        }
    }

    #[test]
    fn sobolev_norm_is_monotone_in_s(v in samples(16), s1 in -3.0..3.0f64, ds in 0.0..3.0f64) {
        let f = SampledFunction::from_samples(grid(16), v).unwrap();
        let a = sobolev_norm(&f, s1, 2.0).unwrap();
        let b = sobolev_norm(&f, s1 + ds, 2.0).unwrap();
        prop_assert!(a <= b * (1.0 + 1e-14));
    }

    #[test]
    fn peetre(s in -5.0..5.0f64, u in -100.0..100.0f64, v in -100.0..100.0f64) {
        let lhs = (1.0 + (u - v).abs()).powf(s);
        let rhs = (1.0 + u.abs()).powf(s.abs()) * (1.0 + v.abs()).powf(s);
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn split_is_a_partition(x in -3.0..3.0f64, a in -5.0..5.0f64, b in -5.0..5.0f64) {
        let s = split_symbol(&parse_complex("exp(-(alpha^2+beta^2)/9)*cos(x)").unwrap());
        let v = s.eval(&Point::bilinear(x, a, b));
        prop_assert!((v.low + v.high - v.sigma).norm() <= 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// A larger order is a weaker condition: constants shrink and passes persist.
    #[test]
    fn class_checks_are_monotone(p in -1.0..2.0f64, m in -1.0..2.0f64, dm in 0.0..1.5f64, ceiling in 0.5..20.0f64) {
        let g = grid(16);
        let e = parse_complex(&format!("bracket(alpha)^({p:?})*exp(-beta^2/4)")).unwrap();
        let low = ClassSpec::classical(m, 1.0, 0.0, 1).unwrap();
        let high = ClassSpec::classical(m + dm, 1.0, 0.0, 1).unwrap();
        let r_low = check_class_with(&e, &low, &g, Ceiling::Fixed(ceiling)).unwrap();
        let r_high = check_class_with(&e, &high, &g, Ceiling::Fixed(ceiling)).unwrap();
        for (a, b) in r_low.orders.iter().zip(&r_high.orders) {
            prop_assert!(b.constant <= a.constant * (1.0 + 1e-12));
        }
        prop_assert!(!r_low.pass || r_high.pass);
        let looser = check_class_with(&e, &low, &g, Ceiling::Fixed(2.0 * ceiling)).unwrap();
        prop_assert!(!r_low.pass || looser.pass);
    }
}

#[test]
fn sampled_symbol_matches_expression() {
    let g = grid(16);
    let e = parse_complex("sin(x)*atan(beta-alpha)").unwrap();
    let s = sample_symbol(&e, &g).unwrap();
    let p = Point::bilinear(g.x(3), g.frequency(-2), g.frequency(5));
    assert!((s.at(3, g.slot(-2).unwrap(), g.slot(5).unwrap()) - e.eval(&p)).norm() < 1e-15);
}
