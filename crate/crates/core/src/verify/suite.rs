use std::f64::consts::PI;

use num_complex::Complex64;

use crate::calculus::{
    adjoint_angle, adjoint_exact, adjoint_expansion, bilinear_pairing, compose_left_exact,
    compose_left_expansion, compose_right_exact, compose_right_expansion, duality_class_map,
    linear_adjoint_exact, linear_adjoint_expansion, linear_compose_exact,
    linear_compose_expansion, principal_conjugation, Which,
};
use crate::error::Result;
use crate::lattice::{inverse_transform, make_grid, transform, GridSpec, SampledFunction};
use crate::norms::{default_window, lebesgue_norm, modulation_norm, parseval_norm, sobolev_norm};
use crate::quantize::{apply_bilinear, apply_bilinear_fast, apply_bilinear_reference, apply_jm, apply_linear};
use crate::report::{Check, Report};
use crate::symbols::{
    builtin::defining_builtin, check_class, sample_linear_symbol, sample_symbol, ClassSpec,
    LinearSymbolGrid, SymbolGrid,
};
use crate::symlang::{parse_complex, ComplexExpr};
use crate::tolerances::*;

use super::{holder_constant, peetre_violations, Ensemble, Exponents};

const TRIALS: usize = 10;

fn expr(s: &str) -> ComplexExpr {
    parse_complex(s).expect("built-in test expression")
}

fn rel(diff: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// `k`, `l` and `k + l` all strictly inside the lattice, Nyquist excluded.
pub fn nyquist_free(grid: &GridSpec) -> impl Fn(i64, i64) -> bool {
    let h = -grid.nyquist();
    move |k, l| k.abs() < h && l.abs() < h && (k + l).abs() < h
}

/// Worst relative pairing defect of both transposes over the ensemble.
pub fn adjoint_pairing_error(
    sigma: &SymbolGrid,
    ensemble: &Ensemble,
) -> Result<(f64, f64)> {
    let grid = *sigma.grid();
    let s1 = adjoint_exact(sigma, Which::First);
    let s2 = adjoint_exact(sigma, Which::Second);
    let (mut e1, mut e2) = (0.0f64, 0.0f64);
    for trial in 0..ensemble.count {
        let (f, g, h) = ensemble.triple(&grid, trial)?;
        let t = apply_bilinear(sigma, &f, &g)?;
        let lhs = bilinear_pairing(&t, &h)?;
        let scale = lebesgue_norm(&t, 2.0)? * lebesgue_norm(&h, 2.0)?;
        let r1 = bilinear_pairing(&apply_bilinear(&s1, &h, &g)?, &f)?;
        let r2 = bilinear_pairing(&apply_bilinear(&s2, &f, &h)?, &g)?;
        e1 = e1.max(rel((lhs - r1).norm(), scale));
        e2 = e2.max(rel((lhs - r2).norm(), scale));
    }
    Ok((e1, e2))
}

/// Runs the operator, norm and calculus identities on `grid` with `σ` where
/// the identity is symbol-generic and fixed symbols where it needs a
/// terminating expansion. Each entry records its measured error.
pub fn identity_suite(sigma: &ComplexExpr, grid: &GridSpec, seed: u64) -> Result<Report> {
    let grid = *grid;
    let size = grid.n_points();
    let ens = Ensemble::new(seed, TRIALS, Ensemble::default_bandwidth(&grid))?;
    let mut report = Report::new("identity_suite", Some(grid), Some(seed));
    let sig = sample_symbol(sigma, &grid)?;
    let (f, g, h) = ens.triple(&grid, 0)?;

    // lattice
    let back = inverse_transform(&grid, &transform(&grid, f.samples())?)?;
    let err = back.iter().zip(f.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    report.push(Check::at_most("dft_round_trip", rel(err, f.max_abs()), DFT_ROUND_TRIP));
    let (l2, p2) = (lebesgue_norm(&f, 2.0)?, parseval_norm(&f));
    report.push(Check::at_most("parseval", rel((l2 - p2).abs(), l2), PARSEVAL));

    // quantize
    let (a, b) = (Complex64::new(0.7, -0.2), Complex64::new(-1.3, 0.4));
    let lhs = apply_bilinear(&sig, &f.linear_combination(a, &h, b)?, &g)?;
    let rhs = apply_bilinear(&sig, &f, &g)?.linear_combination(a, &apply_bilinear(&sig, &h, &g)?, b)?;
    report.push(Check::at_most(
        "bilinearity",
        rel(lhs.max_abs_diff(&rhs), rhs.max_abs()),
        OPERATOR_IDENTITY,
    ));

    let one = SymbolGrid::constant(grid, Complex64::new(1.0, 0.0));
    let d_of_t = apply_bilinear(&one, &f, &g)?.derivative();
    let leib = apply_bilinear(&one, &f.derivative(), &g)?
        .linear_combination(Complex64::new(1.0, 0.0), &apply_bilinear(&one, &f, &g.derivative())?, Complex64::new(1.0, 0.0))?;
    report.push(Check::at_most(
        "leibniz",
        rel(d_of_t.max_abs_diff(&leib), d_of_t.max_abs()),
        OPERATOR_IDENTITY,
    ));

    let (u, v) = (|t: f64| (-t * t / 20.0).exp(), |t: f64| t.atan());
    let rank_one = SymbolGrid::from_fn_uniform(grid, |k, l| {
        Complex64::new(u(grid.frequency(grid.mode(k))) * v(grid.frequency(grid.mode(l))), 0.0)
    });
    let uf = f.map_spectrum(|k, c| c * u(grid.frequency(k)));
    let vg = g.map_spectrum(|k, c| c * v(grid.frequency(k)));
    let sep = apply_bilinear(&rank_one, &f, &g)?;
    let prod = uf.pointwise_product(&vg)?;
    report.push(Check::at_most(
        "separability",
        rel(sep.max_abs_diff(&prod), prod.max_abs()),
        OPERATOR_IDENTITY,
    ));

    let gauss = sample_symbol(&expr("exp(-(alpha^2+beta^2)/50)"), &grid)?;
    let fast = apply_bilinear_fast(&gauss, &f, &g)?;
    let reference = apply_bilinear_reference(&gauss, &f, &g)?;
    report.push(Check::at_most(
        "fast_vs_reference",
        rel(fast.max_abs_diff(&reference), reference.max_abs()),
        OPERATOR_IDENTITY,
    ));

    let s = 1.5;
    let round = apply_jm(-s, &apply_jm(s, &f));
    report.push(Check::at_most("bessel_inverse", rel(round.max_abs_diff(&f), f.max_abs()), BESSEL_INVERSE));

    // norms
    let spec_side: f64 = (grid.period()
        * f.spectrum()
            .iter()
            .enumerate()
            .map(|(k, c)| (1.0 + grid.frequency(grid.mode(k)).powi(2)) * c.norm_sqr())
            .sum::<f64>())
    .sqrt();
    let w1 = sobolev_norm(&f, 1.0, 2.0)?;
    report.push(Check::at_most("sobolev_spectrum", rel((w1 - spec_side).abs(), w1), NORM_IDENTITY));

    let monotone = [-1.0, -0.5, 0.0, 0.5, 1.0, 2.0]
        .windows(2)
        .map(|w| Ok(sobolev_norm(&f, w[0], 2.0)? <= sobolev_norm(&f, w[1], 2.0)?))
        .collect::<Result<Vec<bool>>>()?;
    let bad = monotone.iter().filter(|ok| !**ok).count();
    report.push(Check::at_most("sobolev_monotone_violations", bad as f64, 0.0));

    let window = default_window(&grid);
    let m = modulation_norm(&f, &window, 2.0, 2.0)?;
    let want = lebesgue_norm(&window, 2.0)? * l2;
    report.push(Check::at_most("moyal", rel((m - want).abs(), want), MOYAL));

    let mode = |k: i64| SampledFunction::from_fn(grid, move |x| Complex64::from_polar(1.0, k as f64 * grid.frequency_unit() * x));
    let (n1, n3) = (
        modulation_norm(&mode(1), &window, 2.0, 1.0)?,
        modulation_norm(&mode(3), &window, 2.0, 1.0)?,
    );
    report.push(Check::at_most("modulation_shift", rel((n1 - n3).abs(), n1), MODULATION_SHIFT));

    let holder = Exponents::new(4.0, 4.0, 0.0, 0.0)?;
    let fine = make_grid(2 * size, grid.period())?;
    for m in [-1.0, 0.0, 1.0] {
        let c0 = holder_constant(m, &holder, &ens, &grid)?;
        let c1 = holder_constant(m, &holder, &ens, &fine)?;
        let factor = (c1 / c0).max(c0 / c1);
        report.push(Check::at_most(format!("holder_stability m={m}"), factor, HOLDER_STABILITY));
    }

    let violations = peetre_violations(seed, PEETRE_SAMPLES, 5.0, 100.0);
    report.push(Check::at_most("peetre_violations", violations as f64, 0.0));

    // calculus: exact transposes of σ
    let (e1, e2) = adjoint_pairing_error(&sig, &ens)?;
    report.push(Check::at_most("adjoint_pairing_1", e1, ADJOINT_PAIRING));
    report.push(Check::at_most("adjoint_pairing_2", e2, ADJOINT_PAIRING));
    let keep = nyquist_free(&grid);
    for which in [Which::First, Which::Second] {
        let twice = adjoint_exact(&adjoint_exact(&sig, which), which);
        let d = twice.max_abs_diff_where(&sig, &keep)?;
        report.push(Check::at_most(
            format!("double_adjoint_{}", which.index()),
            rel(d, sig.max_abs()),
            DOUBLE_ADJOINT,
        ));
    }

    let theta = PI / 3.0;
    let twice = adjoint_angle(adjoint_angle(theta, Which::First)?, Which::First)?;
    report.push(Check::at_most("angle_involution_1", (twice - theta).abs(), ANGLE_INVOLUTION));
    let twice = adjoint_angle(adjoint_angle(theta, Which::Second)?, Which::Second)?;
    report.push(Check::at_most("angle_involution_2", (twice - theta).abs(), ANGLE_INVOLUTION));

    // compositions against operator application
    let t1 = sample_linear_symbol(&expr("1 + sin(x)*xi/10"), &grid)?;
    let t2 = sample_linear_symbol(&expr("exp(-xi^2/50) + cos(x)"), &grid)?;
    let right = compose_right_exact(&sig, &t1, &t2)?;
    let left = compose_left_exact(&t1, &sig)?;
    let (mut er, mut el) = (0.0f64, 0.0f64);
    for trial in 0..ens.count {
        let (f, g) = ens.pair(&grid, trial)?;
        let direct = apply_bilinear(&sig, &apply_linear(&t1, &f)?, &apply_linear(&t2, &g)?)?;
        er = er.max(rel(apply_bilinear(&right, &f, &g)?.max_abs_diff(&direct), direct.max_abs()));
        let direct = apply_linear(&t1, &apply_bilinear(&sig, &f, &g)?)?;
        el = el.max(rel(apply_bilinear(&left, &f, &g)?.max_abs_diff(&direct), direct.max_abs()));
    }
    report.push(Check::at_most("compose_right_pairs", er, COMPOSITION_PAIRS));
    report.push(Check::at_most("compose_left_pairs", el, COMPOSITION_PAIRS));

    let u1 = sample_linear_symbol(&expr("bracket(xi)"), &grid)?;
    let u2 = sample_linear_symbol(&expr("atan(xi)"), &grid)?;
    let m = compose_right_exact(&sig, &u1, &u2)?;
    let want = SymbolGrid::from_fn(grid, |n, k, l| sig.at(n, k, l) * u1.at(0, k) * u2.at(0, l));
    let d = m.max_abs_diff_where(&want, |_, _| true)?;
    report.push(Check::at_most("compose_right_multipliers", rel(d, want.max_abs()), COMPOSITION_EXACT));
    // The single-term left form needs σ free of x; τ may depend on x.
    let s0 = if sig.is_x_independent() {
        sig.clone()
    } else {
        sample_symbol(&expr("exp(-(alpha^2+beta^2)/16)"), &grid)?
    };
    let mut worst = 0.0f64;
    for tau in [&u1, &t1] {
        let m = compose_left_exact(tau, &s0)?;
        let want = SymbolGrid::from_fn(grid, |n, k, l| {
            tau.at_mode(n, grid.mode(k) + grid.mode(l)) * s0.at(0, k, l)
        });
        worst = worst.max(rel(m.max_abs_diff_where(&want, |_, _| true)?, want.max_abs()));
    }
    report.push(Check::at_most("compose_left_multiplier", worst, COMPOSITION_EXACT));

    // terminating expansions
    terminating_expansions(&grid, &mut report)?;

    // class of the exact transpose of the θ-line builtin
    let spec = ClassSpec::plain(0.0, 0.0, theta, 2)?;
    let line = ComplexExpr::real(defining_builtin(&spec)?);
    for which in [Which::First, Which::Second] {
        let series = adjoint_expansion(&line, which, 1)?;
        let exact = adjoint_exact(&sample_symbol(&line, &grid)?, which);
        let d = series.sample(&grid)?.max_abs_diff_where(&exact, &keep)?;
        let mapped = duality_class_map(&spec, which)?;
        let decay = check_class(&series.total(), &mapped, &grid)?;
        let worst = decay
            .orders
            .iter()
            .map(|o| o.constant / o.ceiling)
            .fold(0.0, f64::max);
        let i = which.index();
        report.push(Check::at_most(format!("theta_line_adjoint_closed_form_{i}"), d, CLOSED_FORM));
        report.push(
            Check::at_most(format!("theta_line_adjoint_class_{i}"), worst, 1.0)
                .with_pass(decay.pass)
                .with_note(mapped.to_string()),
        );
    }

    // principal conjugation
    let kappa = expr("bracket(xi)");
    let base = expr("atan(beta-alpha)");
    let conj = sample_symbol(&principal_conjugation(&base, &kappa, &grid)?, &grid)?;
    let k_grid = sample_linear_symbol(&kappa, &grid)?;
    let k_inv = LinearSymbolGrid::from_fn(grid, |n, k| 1.0 / k_grid.at(n, k));
    let via = compose_left_exact(&k_inv, &compose_right_exact(&sample_symbol(&base, &grid)?, &k_grid, &k_grid)?)?;
    let d = conj.max_abs_diff_where(&via, &keep)?;
    report.push(Check::at_most("principal_conjugation", rel(d, via.max_abs()), CONJUGATION));

    Ok(report)
}

/// Expansions that terminate on band-limited-in-x symbols polynomial in the
/// expanded frequency slot, compared on the non-wrapping sublattice.
fn terminating_expansions(grid: &GridSpec, report: &mut Report) -> Result<()> {
    let h = -grid.nyquist();
    // x-bandwidth 2 throughout
    let inner = move |m: i64| m.abs() + 2 < h;
    let keep = move |k: i64, l: i64| inner(k) && inner(l) && inner(k + l);

    // polynomial in the expanded slot
    for (which, src) in [
        (Which::First, "sin(x)*alpha^2*exp(-beta^2/30) + cos(2*x)*beta^2"),
        (Which::Second, "sin(x)*beta^2*exp(-alpha^2/30) + cos(2*x)*alpha^2"),
    ] {
        let sigma = expr(src);
        let exact_grid = sample_symbol(&sigma, grid)?;
        let series = adjoint_expansion(&sigma, which, 3)?.sample(grid)?;
        let exact = adjoint_exact(&exact_grid, which);
        let d = series.max_abs_diff_where(&exact, keep)?;
        report.push(Check::at_most(
            format!("adjoint_expansion_exact_{}", which.index()),
            rel(d, exact.max_abs_where(keep)),
            EXPANSION_EXACT,
        ));
    }

    let (sigma, tau1, tau2) = (
        expr("exp(-alpha^2/30)*beta^2"),
        expr("bracket(xi)"),
        expr("1 + cos(2*x)*xi + sin(x)"),
    );
    let series = compose_right_expansion(&sigma, &tau1, &tau2, 0, 3)?.sample(grid)?;
    let exact = compose_right_exact(
        &sample_symbol(&sigma, grid)?,
        &sample_linear_symbol(&tau1, grid)?,
        &sample_linear_symbol(&tau2, grid)?,
    )?;
    let d = series.max_abs_diff_where(&exact, keep)?;
    report.push(Check::at_most(
        "compose_right_expansion_exact",
        rel(d, exact.max_abs_where(keep)),
        EXPANSION_EXACT,
    ));

    let (tau, sigma) = (expr("1 + xi^2 + cos(x)*xi"), expr("sin(2*x)*exp(-(alpha^2+beta^2)/30)"));
    let series = compose_left_expansion(&tau, &sigma, 3)?.sample(grid)?;
    let exact = compose_left_exact(&sample_linear_symbol(&tau, grid)?, &sample_symbol(&sigma, grid)?)?;
    let d = series.max_abs_diff_where(&exact, keep)?;
    report.push(Check::at_most(
        "compose_left_expansion_exact",
        rel(d, exact.max_abs_where(keep)),
        EXPANSION_EXACT,
    ));

    let lin_keep = move |k: i64| inner(k);
    let tau = expr("sin(x)*xi^2 + cos(2*x)*xi + 1");
    let series = linear_adjoint_expansion(&tau, 3)?.sample_linear(grid)?;
    let exact = linear_adjoint_exact(&sample_linear_symbol(&tau, grid)?);
    let d = series.max_abs_diff_where(&exact, lin_keep)?;
    let scale = exact.values().iter().map(|c| c.norm()).fold(0.0, f64::max);
    report.push(Check::at_most("linear_adjoint_expansion_exact", rel(d, scale), LINEAR_EXPANSION_EXACT));

    let (tau1, tau2) = (expr("xi^2 + 1"), expr("cos(x)*xi + sin(2*x)"));
    let series = linear_compose_expansion(&tau1, &tau2, 3)?.sample_linear(grid)?;
    let exact = linear_compose_exact(&sample_linear_symbol(&tau1, grid)?, &sample_linear_symbol(&tau2, grid)?)?;
    let d = series.max_abs_diff_where(&exact, lin_keep)?;
    let scale = exact.values().iter().map(|c| c.norm()).fold(0.0, f64::max);
    report.push(Check::at_most("linear_compose_expansion_exact", rel(d, scale), LINEAR_EXPANSION_EXACT));
    Ok(())
}
