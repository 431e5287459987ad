use std::f64::consts::TAU;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "bipdo",
    version,
    about = "Bilinear pseudodifferential operators on a periodic grid",
    after_help = "Exit status: 0 when every check passes, 1 when a check fails, 2 on usage or parse errors.\n\
                  BIPDO_THREADS caps the number of worker threads."
)]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the report to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Override the tolerance of a named check, as NAME=VALUE. Repeatable.
    #[arg(long = "tolerance", value_name = "NAME=VALUE", value_parser = parse_override, global = true)]
    pub tolerances: Vec<(String, f64)>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let value: f64 = value.parse().map_err(|e| format!("bad tolerance `{value}`: {e}"))?;
    if !(value >= 0.0) {
        return Err(format!("tolerance must be non-negative, got {value}"));
    }
    Ok((name.to_string(), value))
}

#[derive(Args, Debug, Clone, Copy)]
pub struct GridArgs {
    /// Number of grid points (even, at least 4).
    #[arg(long, default_value_t = 32)]
    pub n: usize,

    /// Period of the grid.
    #[arg(long, default_value_t = TAU)]
    pub period: f64,
}

/// A bilinear symbol, given as an expression or a builtin family.
#[derive(Args, Debug, Clone, Default)]
pub struct SymbolArgs {
    /// Symbol expression in x, alpha, beta. Complex values use `i`, e.g. `exp(i*x)`.
    #[arg(long, conflicts_with = "builtin")]
    pub symbol: Option<String>,

    /// Builtin family: coifman_meyer_gauss, theta_line, marcinkiewicz_product,
    /// omega_weighted or order_weight.
    #[arg(long)]
    pub builtin: Option<String>,

    /// Line angle of theta_line and omega_weighted.
    #[arg(long = "line-theta", allow_hyphen_values = true)]
    pub line_theta: Option<f64>,

    /// Profile tau(x, xi) of theta_line.
    #[arg(long)]
    pub profile: Option<String>,

    /// First factor u(xi) of marcinkiewicz_product.
    #[arg(long = "factor-u")]
    pub factor_u: Option<String>,

    /// Second factor v(xi) of marcinkiewicz_product.
    #[arg(long = "factor-v")]
    pub factor_v: Option<String>,

    /// m1 of order_weight.
    #[arg(long = "weight-m1", allow_hyphen_values = true)]
    pub weight_m1: Option<f64>,

    /// m2 of order_weight.
    #[arg(long = "weight-m2", allow_hyphen_values = true)]
    pub weight_m2: Option<f64>,
}

/// A symbol class. Plain, star1 and star2 use m1, m2 and theta; the
/// classical classes use m1 as their order.
#[derive(Args, Debug, Clone)]
pub struct ClassArgs {
    /// classical, classical_theta, plain, star1 or star2.
    #[arg(long)]
    pub class: Option<String>,

    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub m1: f64,

    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub m2: f64,

    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,

    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,

    /// Line angle, in (-pi/2, pi/2).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,

    /// Highest derivative order checked.
    #[arg(long, default_value_t = 2)]
    pub order: u32,
}

#[derive(Args, Debug, Clone)]
pub struct EnsembleArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Number of random trials.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,

    /// Highest mode of the random functions; defaults to (N - 1) / 4.
    #[arg(long)]
    pub bandwidth: Option<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpandKind {
    Adjoint1,
    Adjoint2,
    ComposeRight,
    ComposeLeft,
    LinearAdjoint,
    LinearCompose,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample T_sigma(f, g) on the grid.
    Apply {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        symbol: SymbolArgs,
        /// First input, an expression in x.
        #[arg(long)]
        f: String,
        /// Second input, an expression in x.
        #[arg(long)]
        g: String,
    },

    /// Measure the decay constants of a symbol against a class.
    CheckClass {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        symbol: SymbolArgs,
        #[command(flatten)]
        class: ClassArgs,
        /// Fixed pass threshold; the default calibrates against the class's defining builtin.
        #[arg(long)]
        ceiling: Option<f64>,
    },

    /// Exact transpose of a symbol against its truncated expansion.
    Adjoint {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        symbol: SymbolArgs,
        /// Which transpose, 1 or 2.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        /// Number of expansion terms N.
        #[arg(long, default_value_t = 2)]
        terms: u32,
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[command(flatten)]
        class: ClassArgs,
    },

    /// Exact composition with linear operators against its truncated expansion.
    Compose {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        symbol: SymbolArgs,
        /// right: T_sigma(T_tau1 f, T_tau2 g). left: T_tau1 T_sigma(f, g).
        #[arg(long, value_enum)]
        side: Side,
        /// Linear symbol in x, xi.
        #[arg(long, alias = "tau", default_value = "1")]
        tau1: String,
        /// Second linear symbol, right composition only.
        #[arg(long, default_value = "1")]
        tau2: String,
        /// Retained order N (in tau1 for the right side).
        #[arg(long, default_value_t = 2)]
        terms: u32,
        /// Retained order P in tau2, right side only.
        #[arg(long, default_value_t = 2)]
        terms2: u32,
        #[command(flatten)]
        ensemble: EnsembleArgs,
    },

    /// Print the truncated symbolic expansion of a transpose or composition.
    Expand {
        #[arg(long, value_enum)]
        kind: ExpandKind,
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long, alias = "tau", default_value = "1")]
        tau1: String,
        #[arg(long, default_value = "1")]
        tau2: String,
        #[arg(long, default_value_t = 2)]
        terms: u32,
        #[arg(long, default_value_t = 2)]
        terms2: u32,
        #[command(flatten)]
        class: ClassArgs,
        /// Order of tau1, for the remainder class of a composition.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t1: f64,
        /// Order of tau2, for the remainder class of a right composition.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t2: f64,
    },

    /// Lebesgue, Sobolev and modulation norms of a function.
    Norms {
        #[command(flatten)]
        grid: GridArgs,
        /// Function, an expression in x.
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Sobolev smoothness.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s: f64,
        /// Outer exponent of the modulation norm.
        #[arg(long, default_value_t = 2.0)]
        t: f64,
        /// Width of the Gaussian window; the default window is used otherwise.
        #[arg(long)]
        window_width: Option<f64>,
    },

    /// Run a verification suite.
    Verify {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Suite::Identities)]
        suite: Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        symbol: SymbolArgs,
    },

    /// Seeded numerical studies.
    Study {
        #[command(subcommand)]
        study: Study,
    },
}

#[derive(Subcommand, Debug)]
pub enum Study {
    /// Empirical boundedness ratios under grid refinement.
    Boundedness {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        m1: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        m2: f64,
        #[arg(long, default_value_t = 4.0)]
        p: f64,
        #[arg(long, default_value_t = 4.0)]
        q: f64,
        /// Must satisfy 1/r = 1/p + 1/q; derived when omitted.
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        s: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// Grid sizes, coarse to fine.
        #[arg(long, value_delimiter = ',', default_value = "32,64,128")]
        grids: Vec<usize>,
        #[arg(long, default_value_t = TAU)]
        period: f64,
    },

    /// Maximum ratios as the smoothness excess epsilon shrinks.
    Epsilon {
        /// Use the weighted theta-line symbol instead of the Marcinkiewicz product.
        #[arg(long)]
        weighted: bool,
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05,0")]
        epsilons: Vec<f64>,
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, value_delimiter = ',', default_value = "32,64")]
        grids: Vec<usize>,
        #[arg(long, default_value_t = TAU)]
        period: f64,
    },

    /// Log-log slope of the first-transpose remainder for N and N + 1 terms.
    Remainder {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long, default_value_t = 1)]
        terms: u32,
    },
}
