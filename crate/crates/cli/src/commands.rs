use std::collections::BTreeSet;
use std::error::Error as StdError;

use bipdo_core::calculus::{
    adjoint_angle, adjoint_exact, adjoint_expansion, compose_left_exact, compose_left_expansion,
    compose_right_exact, compose_right_expansion, duality_class_map, linear_adjoint_expansion,
    linear_compose_expansion, ExpansionSeries, Which,
};
use bipdo_core::norms::{default_window, gaussian_window, lebesgue_norm, modulation_norm, parseval_norm, sobolev_norm};
use bipdo_core::quantize::{apply_bilinear, apply_linear};
use bipdo_core::report::{Check, Report, SCHEMA_VERSION};
use bipdo_core::symbols::{
    builtin, check_class_with, is_degenerate_angle, sample_linear_symbol, sample_symbol,
    BuiltinParams, Ceiling, ClassSpec, SymbolGrid, Variant,
};
use bipdo_core::symlang::{parse, parse_complex, Point, Var};
use bipdo_core::tolerances::{
    ADJOINT_PAIRING, COMPOSITION_PAIRS, DOUBLE_ADJOINT, REMAINDER_SLOPE, REMAINDER_SLOPE_DROP,
};
use bipdo_core::verify::{
    adjoint_pairing_error, boundedness_study, epsilon_necessity_probe, identity_suite, nyquist_free,
    remainder_slope, Ensemble, Exponents,
};
use bipdo_core::{ComplexExpr, GridSpec, SampledFunction};
use serde_json::{json, Map, Value};

use crate::args::{ClassArgs, Command, EnsembleArgs, ExpandKind, GridArgs, Side, Study, SymbolArgs};
use crate::output::{Cell, Table};

pub type Res<T> = Result<T, Box<dyn StdError>>;

/// Symbol used by `verify` and `study remainder` when none is given.
pub const DEFAULT_SUITE_SYMBOL: &str = "exp(-(alpha^2+beta^2)/16)*(1+sin(x)/2)";
pub const DEFAULT_REMAINDER_SYMBOL: &str = "sin(x)*exp(-(alpha^2+beta^2))";

pub struct Outcome {
    pub json: Value,
    pub table: Table,
    pub pass: bool,
}

/// Tolerance overrides; every name must match a check of the command's report.
pub struct Overrides {
    pairs: Vec<(String, f64)>,
    used: BTreeSet<String>,
}

impl Overrides {
    pub fn new(pairs: Vec<(String, f64)>) -> Self {
        Self { pairs, used: BTreeSet::new() }
    }

    fn apply(&mut self, report: &mut Report) {
        for (name, tol) in &self.pairs {
            if let Some(c) = report.checks.iter_mut().find(|c| &c.name == name) {
                c.tolerance = Some(*tol);
                c.pass = c.measured <= *tol;
                self.used.insert(name.clone());
            }
        }
        report.passed = report.checks.iter().all(|c| c.pass);
    }

    fn take(&mut self, name: &str) -> Option<f64> {
        let v = self.pairs.iter().find(|(n, _)| n == name).map(|(_, v)| *v);
        if v.is_some() {
            self.used.insert(name.to_string());
        }
        v
    }

    pub fn finish(&self) -> Res<()> {
        let unused: Vec<&str> = self
            .pairs
            .iter()
            .map(|(n, _)| n.as_str())
            .filter(|n| !self.used.contains(*n))
            .collect();
        if unused.is_empty() {
            Ok(())
        } else {
            Err(format!("--tolerance names no check of this command: {}", unused.join(", ")).into())
        }
    }
}

fn grid(g: &GridArgs) -> Res<GridSpec> {
    Ok(GridSpec::new(g.n, g.period)?)
}

fn symbol_expr(s: &SymbolArgs, default: Option<&str>) -> Res<(String, ComplexExpr)> {
    if let Some(name) = &s.builtin {
        let real = |src: &Option<String>| -> Res<_> { src.as_deref().map(parse).transpose().map_err(Into::into) };
        let params = BuiltinParams {
            theta: s.line_theta,
            profile: real(&s.profile)?,
            u: real(&s.factor_u)?,
            v: real(&s.factor_v)?,
            m1: s.weight_m1,
            m2: s.weight_m2,
        };
        let e = builtin(name, &params)?;
        return Ok((e.to_string(), ComplexExpr::real(e)));
    }
    let src = s
        .symbol
        .as_deref()
        .or(default)
        .ok_or("give a symbol with --symbol or --builtin")?;
    Ok((src.to_string(), parse_complex(src)?))
}

fn function_of_x(src: &str, grid: &GridSpec) -> Res<SampledFunction> {
    let e = parse_complex(src)?;
    if let Some(v) = Var::ALL.into_iter().find(|&v| v != Var::X && e.depends_on(v)) {
        return Err(format!("`{src}` must be a function of x alone, found `{v}`").into());
    }
    let f = SampledFunction::from_fn(*grid, |x| e.eval(&Point::linear(x, 0.0)));
    if f.samples().iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(format!("`{src}` is not finite on the grid").into());
    }
    Ok(f)
}

fn class_spec(c: &ClassArgs) -> Res<Option<ClassSpec>> {
    let Some(name) = &c.class else { return Ok(None) };
    let variant: Variant = name.parse()?;
    Ok(Some(ClassSpec::new(variant, c.m1, c.m2, c.rho, c.delta, c.theta, c.order)?))
}

fn ensemble(e: &EnsembleArgs, coarsest: &GridSpec) -> Res<Ensemble> {
    let bw = e.bandwidth.unwrap_or_else(|| Ensemble::default_bandwidth(coarsest));
    let ens = Ensemble::new(e.seed, e.trials, bw)?;
    ens.check_grid(coarsest)?;
    Ok(ens)
}

fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    for (k, v) in pairs {
        m.insert(k.into(), v);
    }
    Value::Object(m)
}

fn merge(base: Value, extra: Vec<(&str, Value)>) -> Value {
    let mut m = match base {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    for (k, v) in extra {
        m.insert(k.into(), v);
    }
    Value::Object(m)
}

fn checks_table(report: &Report) -> Table {
    let mut t = Table::new(&["name", "measured", "tolerance", "pass", "note"]);
    for c in &report.checks {
        t.push(vec![
            c.name.as_str().into(),
            c.measured.into(),
            c.tolerance.map_or(Cell::Text(String::new()), Cell::Float),
            c.pass.into(),
            c.note.clone().unwrap_or_default().into(),
        ]);
    }
    t
}

fn series_json(s: &ExpansionSeries) -> Value {
    let terms: Vec<Value> = s
        .terms
        .iter()
        .map(|t| json!({"orders": t.orders, "coeff": t.coeff.to_string(), "expr": t.expr.to_string()}))
        .collect();
    json!({
        "which": s.which,
        "orders": s.orders,
        "terms": terms,
        "total": s.total().to_string(),
        "remainder_class": s.remainder_class.map(|c| json!({"label": c.to_string(), "spec": c})),
    })
}

/// Exact and series values at every lattice point.
fn comparison_table(grid: &GridSpec, exact: &SymbolGrid, series: &SymbolGrid) -> Table {
    let mut t = Table::new(&[
        "x_index", "x", "xi", "eta", "exact_re", "exact_im", "series_re", "series_im",
    ]);
    let size = grid.n_points();
    let xs = if exact.is_x_independent() && series.is_x_independent() { 1 } else { size };
    for n in 0..xs {
        for k in 0..size {
            for l in 0..size {
                let (a, b) = (exact.at(n, k, l), series.at(n, k, l));
                t.push(vec![
                    n.into(),
                    grid.x(n).into(),
                    grid.mode(k).into(),
                    grid.mode(l).into(),
                    a.re.into(),
                    a.im.into(),
                    b.re.into(),
                    b.im.into(),
                ]);
            }
        }
    }
    t
}

fn rel(d: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        d / scale
    } else {
        d
    }
}

pub fn run(cmd: &Command, ov: &mut Overrides) -> Res<Outcome> {
    match cmd {
        Command::Apply { grid: g, symbol, f, g: gsrc } => apply(g, symbol, f, gsrc),
        Command::CheckClass { grid: g, symbol, class, ceiling } => check(g, symbol, class, *ceiling),
        Command::Adjoint { grid: g, symbol, which, terms, ensemble: e, class } => {
            adjoint(g, symbol, *which, *terms, e, class, ov)
        }
        Command::Compose { grid: g, symbol, side, tau1, tau2, terms, terms2, ensemble: e } => {
            compose(g, symbol, *side, tau1, tau2, (*terms, *terms2), e, ov)
        }
        Command::Expand { kind, symbol, tau1, tau2, terms, terms2, class, t1, t2 } => {
            expand(*kind, symbol, tau1, tau2, (*terms, *terms2), class, [*t1, *t2])
        }
        Command::Norms { grid: g, f, p, s, t, window_width } => norms(g, f, *p, *s, *t, *window_width),
        Command::Verify { grid: g, suite: _, seed, symbol } => {
            let gr = grid(g)?;
            let (_, sigma) = symbol_expr(symbol, Some(DEFAULT_SUITE_SYMBOL))?;
            let mut report = identity_suite(&sigma, &gr, *seed)?;
            ov.apply(&mut report);
            Ok(Outcome {
                table: checks_table(&report),
                pass: report.passed,
                json: serde_json::to_value(&report)?,
            })
        }
        Command::Study { study } => match study {
            Study::Boundedness { symbol, m1, m2, p, q, r, s, epsilon, ensemble: e, grids, period } => {
                let exps = match r {
                    Some(r) => Exponents::with_r(*p, *q, *r, *s, *epsilon)?,
                    None => Exponents::new(*p, *q, *s, *epsilon)?,
                };
                boundedness(symbol, (*m1, *m2), &exps, e, grids, *period, ov)
            }
            Study::Epsilon { weighted, epsilons, ensemble: e, grids, period } => {
                let gs = grid_list(grids, *period)?;
                let ens = ensemble(e, &gs[0])?;
                let mut report = epsilon_necessity_probe(*weighted, epsilons, &gs, &ens)?;
                ov.apply(&mut report);
                Ok(Outcome {
                    table: checks_table(&report),
                    pass: report.passed,
                    json: serde_json::to_value(&report)?,
                })
            }
            Study::Remainder { grid: g, symbol, terms } => remainder(g, symbol, *terms, ov),
        },
    }
}

fn grid_list(sizes: &[usize], period: f64) -> Res<Vec<GridSpec>> {
    if sizes.is_empty() {
        return Err("--grids needs at least one size".into());
    }
    sizes.iter().map(|&n| Ok(GridSpec::new(n, period)?)).collect()
}

fn apply(g: &GridArgs, symbol: &SymbolArgs, f: &str, gsrc: &str) -> Res<Outcome> {
    let gr = grid(g)?;
    let (text, sigma) = symbol_expr(symbol, None)?;
    let (ff, gg) = (function_of_x(f, &gr)?, function_of_x(gsrc, &gr)?);
    let out = apply_bilinear(&sample_symbol(&sigma, &gr)?, &ff, &gg)?;
    let mut table = Table::new(&["x", "re", "im"]);
    let mut samples = Vec::new();
    for (n, z) in out.samples().iter().enumerate() {
        table.push(vec![gr.x(n).into(), z.re.into(), z.im.into()]);
        samples.push(json!({"x": gr.x(n), "re": z.re, "im": z.im}));
    }
    Ok(Outcome {
        json: object(vec![
            ("kind", json!("apply")),
            ("grid", json!(gr)),
            ("symbol", json!(text)),
            ("f", json!(f)),
            ("g", json!(gsrc)),
            ("samples", Value::Array(samples)),
        ]),
        table,
        pass: true,
    })
}

fn check(g: &GridArgs, symbol: &SymbolArgs, class: &ClassArgs, ceiling: Option<f64>) -> Res<Outcome> {
    let gr = grid(g)?;
    let (text, sigma) = symbol_expr(symbol, None)?;
    let spec = class_spec(class)?.ok_or("check-class needs --class")?;
    let ceiling = ceiling.map_or(Ceiling::Calibrated, Ceiling::Fixed);
    let report = check_class_with(&sigma, &spec, &gr, ceiling)?;
    let mut table = Table::new(&[
        "a", "b", "c", "constant", "ceiling", "pass", "worst_x", "worst_alpha", "worst_beta",
    ]);
    for o in &report.orders {
        table.push(vec![
            o.a.into(),
            o.b.into(),
            o.c.into(),
            o.constant.into(),
            o.ceiling.into(),
            o.pass.into(),
            o.worst_point[0].into(),
            o.worst_point[1].into(),
            o.worst_point[2].into(),
        ]);
    }
    Ok(Outcome {
        pass: report.pass,
        json: merge(
            serde_json::to_value(&report)?,
            vec![("kind", json!("check_class")), ("symbol", json!(text)), ("grid", json!(gr))],
        ),
        table,
    })
}

#[allow(clippy::too_many_arguments)]
fn adjoint(
    g: &GridArgs,
    symbol: &SymbolArgs,
    which: u8,
    terms: u32,
    e: &EnsembleArgs,
    class: &ClassArgs,
    ov: &mut Overrides,
) -> Res<Outcome> {
    let gr = grid(g)?;
    let which = Which::try_from(which)?;
    let (text, sigma) = symbol_expr(symbol, None)?;
    let ens = ensemble(e, &gr)?;
    let sig = sample_symbol(&sigma, &gr)?;
    let exact = adjoint_exact(&sig, which);
    let mut series = adjoint_expansion(&sigma, which, terms)?;
    let spec = class_spec(class)?;
    if let Some(spec) = &spec {
        series = series.with_remainder_class(spec, &[])?;
    }
    let approx = series.sample(&gr)?;

    let mut report = Report::new(format!("adjoint_{}", which.index()), Some(gr), Some(e.seed));
    let (e1, e2) = adjoint_pairing_error(&sig, &ens)?;
    let err = if which == Which::First { e1 } else { e2 };
    report.push(Check::at_most("pairing", err, ADJOINT_PAIRING));
    let keep = nyquist_free(&gr);
    let twice = adjoint_exact(&exact, which);
    report.push(Check::at_most(
        "double_adjoint",
        rel(twice.max_abs_diff_where(&sig, &keep)?, sig.max_abs()),
        DOUBLE_ADJOINT,
    ));
    report.push(
        Check::observation(
            "series_vs_exact",
            rel(approx.max_abs_diff_where(&exact, &keep)?, exact.max_abs()),
        )
        .with_note("relative, over the Nyquist-free lattice"),
    );
    ov.apply(&mut report);

    let mut extra = vec![
        ("kind", json!("adjoint")),
        ("which", json!(which)),
        ("symbol", json!(text)),
        ("series", series_json(&series)),
    ];
    if let Some(spec) = &spec {
        let mapped = duality_class_map(spec, which)?;
        extra.push(("adjoint_class", json!({"label": mapped.to_string(), "spec": mapped})));
        if !is_degenerate_angle(spec.theta) {
            extra.push(("adjoint_theta", json!(adjoint_angle(spec.theta, which)?)));
        }
    }
    Ok(Outcome {
        table: comparison_table(&gr, &exact, &approx),
        pass: report.passed,
        json: merge(serde_json::to_value(&report)?, extra),
    })
}

#[allow(clippy::too_many_arguments)]
fn compose(
    g: &GridArgs,
    symbol: &SymbolArgs,
    side: Side,
    tau1: &str,
    tau2: &str,
    (n, p): (u32, u32),
    e: &EnsembleArgs,
    ov: &mut Overrides,
) -> Res<Outcome> {
    let gr = grid(g)?;
    let (text, sigma) = symbol_expr(symbol, None)?;
    let ens = ensemble(e, &gr)?;
    let t1 = parse_complex(tau1)?;
    let t2 = parse_complex(tau2)?;
    let sig = sample_symbol(&sigma, &gr)?;
    let l1 = sample_linear_symbol(&t1, &gr)?;
    let l2 = sample_linear_symbol(&t2, &gr)?;
    let (exact, series) = match side {
        Side::Right => (compose_right_exact(&sig, &l1, &l2)?, compose_right_expansion(&sigma, &t1, &t2, n, p)?),
        Side::Left => (compose_left_exact(&l1, &sig)?, compose_left_expansion(&t1, &sigma, n)?),
    };
    let approx = series.sample(&gr)?;

    let name = match side {
        Side::Right => "compose_right",
        Side::Left => "compose_left",
    };
    let mut report = Report::new(name, Some(gr), Some(e.seed));
    let mut worst = 0.0f64;
    for trial in 0..ens.count {
        let (f, g) = ens.pair(&gr, trial)?;
        let direct = match side {
            Side::Right => apply_bilinear(&sig, &apply_linear(&l1, &f)?, &apply_linear(&l2, &g)?)?,
            Side::Left => apply_linear(&l1, &apply_bilinear(&sig, &f, &g)?)?,
        };
        let got = apply_bilinear(&exact, &f, &g)?;
        worst = worst.max(rel(got.max_abs_diff(&direct), direct.max_abs()));
    }
    report.push(Check::at_most("operator_identity", worst, COMPOSITION_PAIRS));
    report.push(
        Check::observation(
            "series_vs_exact",
            rel(approx.max_abs_diff_where(&exact, nyquist_free(&gr))?, exact.max_abs()),
        )
        .with_note("relative, over the Nyquist-free lattice"),
    );
    ov.apply(&mut report);
    let mut extra = vec![
        ("kind", json!(name)),
        ("symbol", json!(text)),
        ("tau1", json!(tau1)),
        ("series", series_json(&series)),
    ];
    if side == Side::Right {
        extra.push(("tau2", json!(tau2)));
    }
    Ok(Outcome {
        table: comparison_table(&gr, &exact, &approx),
        pass: report.passed,
        json: merge(serde_json::to_value(&report)?, extra),
    })
}

fn expand(
    kind: ExpandKind,
    symbol: &SymbolArgs,
    tau1: &str,
    tau2: &str,
    (n, p): (u32, u32),
    class: &ClassArgs,
    t: [f64; 2],
) -> Res<Outcome> {
    let t1 = parse_complex(tau1)?;
    let t2 = parse_complex(tau2)?;
    let sigma = || symbol_expr(symbol, None).map(|(_, e)| e);
    let (series, t) = match kind {
        ExpandKind::Adjoint1 => (adjoint_expansion(&sigma()?, Which::First, n)?, &t[..0]),
        ExpandKind::Adjoint2 => (adjoint_expansion(&sigma()?, Which::Second, n)?, &t[..0]),
        ExpandKind::ComposeRight => (compose_right_expansion(&sigma()?, &t1, &t2, n, p)?, &t[..]),
        ExpandKind::ComposeLeft => (compose_left_expansion(&t1, &sigma()?, n)?, &t[..1]),
        ExpandKind::LinearAdjoint => (linear_adjoint_expansion(&t1, n)?, &t[..0]),
        ExpandKind::LinearCompose => (linear_compose_expansion(&t1, &t2, n)?, &t[..0]),
    };
    let series = match class_spec(class)? {
        Some(spec) => series.with_remainder_class(&spec, t)?,
        None => series,
    };
    let mut table = Table::new(&["term", "orders", "coeff", "expr"]);
    for (i, term) in series.terms.iter().enumerate() {
        let orders: Vec<String> = term.orders.iter().map(u32::to_string).collect();
        table.push(vec![
            i.into(),
            orders.join(";").into(),
            term.coeff.to_string().into(),
            term.expr.to_string().into(),
        ]);
    }
    Ok(Outcome {
        json: merge(series_json(&series), vec![("kind", json!("expand"))]),
        table,
        pass: true,
    })
}

fn norms(g: &GridArgs, f: &str, p: f64, s: f64, t: f64, width: Option<f64>) -> Res<Outcome> {
    let gr = grid(g)?;
    let ff = function_of_x(f, &gr)?;
    let window = match width {
        Some(w) => gaussian_window(&gr, w),
        None => default_window(&gr),
    };
    let values = [
        ("lebesgue", lebesgue_norm(&ff, p)?),
        ("sobolev", sobolev_norm(&ff, s, p)?),
        ("modulation", modulation_norm(&ff, &window, p, t)?),
        ("parseval", parseval_norm(&ff)),
    ];
    let mut table = Table::new(&["name", "value"]);
    for (name, v) in values {
        table.push(vec![name.into(), v.into()]);
    }
    let mut pairs = vec![
        ("kind", json!("norms")),
        ("grid", json!(gr)),
        ("f", json!(f)),
        ("p", json!(p)),
        ("s", json!(s)),
        ("t", json!(t)),
    ];
    pairs.extend(values.iter().map(|(k, v)| (*k, json!(v))));
    Ok(Outcome { json: object(pairs), table, pass: true })
}

fn boundedness(
    symbol: &SymbolArgs,
    (m1, m2): (f64, f64),
    exps: &Exponents,
    e: &EnsembleArgs,
    grids: &[usize],
    period: f64,
    ov: &mut Overrides,
) -> Res<Outcome> {
    let gs = grid_list(grids, period)?;
    let ens = ensemble(e, &gs[0])?;
    let (text, sigma) = symbol_expr(symbol, None)?;
    let spec = ClassSpec::plain(m1, m2, 0.0, 0)?;
    let mut report = boundedness_study(&sigma, &spec, exps, &ens, &gs)?;
    if let Some(tol) = ov.take("growth_factor") {
        report.pass = report.growth_factor < tol;
    }
    let mut table = Table::new(&[
        "seed", "n_points", "trial", "p", "q", "r", "s", "epsilon", "ratio", "skipped",
    ]);
    for t in &report.trials {
        table.push(vec![
            t.seed.into(),
            t.n_points.into(),
            t.trial.into(),
            exps.p.into(),
            exps.q.into(),
            exps.r.into(),
            exps.s.into(),
            exps.epsilon.into(),
            t.ratio.into(),
            t.skipped.into(),
        ]);
    }
    Ok(Outcome {
        pass: report.pass,
        json: merge(
            serde_json::to_value(&report)?,
            vec![("kind", json!("boundedness")), ("symbol", json!(text))],
        ),
        table,
    })
}

fn remainder(g: &GridArgs, symbol: &SymbolArgs, terms: u32, ov: &mut Overrides) -> Res<Outcome> {
    let gr = grid(g)?;
    let (text, sigma) = symbol_expr(symbol, Some(DEFAULT_REMAINDER_SYMBOL))?;
    let slope = remainder_slope(&sigma, &gr, terms)?;
    let mut report = Report::new("remainder_slope", Some(gr), None);
    report.push(
        Check::at_most(
            "slope_difference_error",
            (slope.slope_difference - REMAINDER_SLOPE_DROP).abs(),
            REMAINDER_SLOPE,
        )
        .with_note(format!("slope difference {}", slope.slope_difference)),
    );
    ov.apply(&mut report);
    let mut table = Table::new(&["n_terms", "abscissa", "remainder"]);
    for fit in &slope.fits {
        for (a, r) in fit.abscissae.iter().zip(&fit.remainders) {
            table.push(vec![fit.n_terms.into(), (*a).into(), (*r).into()]);
        }
    }
    Ok(Outcome {
        pass: report.passed,
        json: merge(
            serde_json::to_value(&slope)?,
            vec![
                ("kind", json!("remainder_slope")),
                ("symbol", json!(text)),
                ("checks", serde_json::to_value(&report.checks)?),
                ("passed", json!(report.passed)),
            ],
        ),
        table,
    })
}
