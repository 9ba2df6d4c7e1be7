//! `circ-bridge`: evaluate von Mises quantities and their normal
//! approximations, tabulate them, and run error-order scans.

mod output;

use std::f64::consts::TAU;
use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use circ_bridge::bridge_approx::{
    cdf_expansion, log_ratio_exact, log_ratio_expansion, point_at, ratio_expansion,
    reference_normal_density, standardized_deviate, BulkSpec,
};
use circ_bridge::circular_dist::{
    matched_wn_scale, max_matched_gap, normalize_angle, vm_density, wrapped_difference,
    VonMisesParams,
};
use circ_bridge::oracle::{
    bulk_grid, geometric_kappas, residual_scan_with, vm_cdf_quadrature_with, Quadrature,
    ScanTarget, ANCHOR_DELTA_TILDE, SCAN_CDF_TOL,
};
use circ_bridge::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{Field, Format, OutputSpec, Record, MAX_PRECISION, MIN_PRECISION};

#[derive(Parser, Debug)]
#[command(
    name = "circ-bridge",
    version,
    about = "von Mises vs normal approximation toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Significant digits for numeric fields.
    #[arg(long, default_value_t = MAX_PRECISION,
          value_parser = clap::value_parser!(u8).range(MIN_PRECISION as i64..=MAX_PRECISION as i64))]
    precision: u8,
}

impl OutputArgs {
    fn spec(&self) -> OutputSpec {
        OutputSpec {
            format: self.format,
            path: self.out.clone(),
            precision: self.precision,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Quantity {
    Density,
    LogratioExact,
    LogratioApprox,
    RatioApprox,
    CdfApprox,
    CdfQuad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Regime {
    /// |delta| <= eta sqrt(kappa)
    Fixed,
    /// |delta| <= eta kappa^(1/4)
    Shrunken,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Target {
    LogRatio,
    Ratio,
    Cdf,
}

impl From<Target> for ScanTarget {
    fn from(t: Target) -> Self {
        match t {
            Target::LogRatio => ScanTarget::LogRatio,
            Target::Ratio => ScanTarget::Ratio,
            Target::Cdf => ScanTarget::Cdf,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one quantity at one point.
    Eval {
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, allow_negative_numbers = true)]
        kappa: f64,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, value_enum)]
        quantity: Quantity,
        /// Expansion order for the approximate ratios.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        order: u8,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate exact and approximate quantities across the bulk.
    Table {
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, allow_negative_numbers = true)]
        kappa: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long, value_enum, default_value_t = Regime::Fixed)]
        regime: Regime,
        /// Number of grid points; must be odd.
        #[arg(long)]
        grid: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Residual scan of an expansion over geometrically spaced kappa.
    ErrorScan {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        kappa_min: f64,
        #[arg(long)]
        kappa_max: f64,
        #[arg(long, default_value_t = 7)]
        steps: usize,
        #[arg(long, default_value_t = 0.5)]
        eta: f64,
        #[arg(long, value_enum, default_value_t = Regime::Fixed)]
        regime: Regime,
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Largest density gap between von Mises and the matched wrapped normal.
    Convergence {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [4.0, 16.0, 64.0, 256.0])]
        kappas: Vec<f64>,
        #[arg(long, default_value_t = 1001)]
        grid: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn angle(name: &str, v: f64) -> Result<f64, Error> {
    if !v.is_finite() {
        return Err(Error::Usage(format!("--{name} must be finite, got {v}")));
    }
    if (0.0..TAU).contains(&v) {
        return Ok(v);
    }
    let w = normalize_angle(v);
    eprintln!("warning: --{name} = {v} is outside [0, 2pi); using {w}");
    Ok(w)
}

fn regime(r: Regime, eta: f64) -> Result<BulkSpec, Error> {
    match r {
        Regime::Fixed => BulkSpec::fixed(eta),
        Regime::Shrunken => BulkSpec::shrunken(eta),
    }
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Fixed => "fixed",
        Regime::Shrunken => "shrunken",
    }
}

fn quantity_name(q: Quantity) -> &'static str {
    match q {
        Quantity::Density => "density",
        Quantity::LogratioExact => "logratio-exact",
        Quantity::LogratioApprox => "logratio-approx",
        Quantity::RatioApprox => "ratio-approx",
        Quantity::CdfApprox => "cdf-approx",
        Quantity::CdfQuad => "cdf-quad",
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn output_meta(o: &OutputArgs) -> Vec<(&'static str, Field)> {
    vec![
        ("format", format_name(o.format).into()),
        ("precision", o.precision.into()),
    ]
}

fn eval(
    quad: &Quadrature,
    mu: f64,
    kappa: f64,
    x: f64,
    quantity: Quantity,
    order: u8,
    output: &OutputArgs,
) -> Result<(), Failure> {
    let mu = angle("mu", mu)?;
    let x = angle("x", x)?;
    let params = VonMisesParams::new(mu, kappa)?;
    // evaluate inside the principal window around mu
    let xw = mu + wrapped_difference(x, mu);
    let dt = || standardized_deviate(&params, xw).map(|d| d.delta_tilde);
    let value = match quantity {
        Quantity::Density => vm_density(&params, xw),
        Quantity::LogratioExact => log_ratio_exact(&params, xw)?,
        Quantity::LogratioApprox => log_ratio_expansion(dt()?, kappa, order)?.value,
        Quantity::RatioApprox => ratio_expansion(dt()?, kappa, order)?.value,
        Quantity::CdfApprox => cdf_expansion(dt()?, kappa)?.value,
        Quantity::CdfQuad => vm_cdf_quadrature_with(quad, &params, xw, SCAN_CDF_TOL)?,
    };
    let mut meta = vec![
        ("command", "eval".into()),
        ("mu", mu.into()),
        ("kappa", kappa.into()),
        ("x", x.into()),
        ("quantity", quantity_name(quantity).into()),
        ("order", order.into()),
    ];
    meta.extend(output_meta(output));
    let row: Record = vec![
        ("quantity", quantity_name(quantity).into()),
        ("mu", mu.into()),
        ("kappa", kappa.into()),
        ("x", x.into()),
        ("value", value.into()),
    ];
    output.spec().emit(&meta, &[row])?;
    Ok(())
}

fn table(
    quad: &Quadrature,
    mu: f64,
    kappa: f64,
    eta: f64,
    reg: Regime,
    grid: usize,
    output: &OutputArgs,
) -> Result<(), Failure> {
    let mu = angle("mu", mu)?;
    if grid < 3 || grid.is_multiple_of(2) {
        return Err(Error::Usage(format!("--grid must be odd and >= 3, got {grid}")).into());
    }
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Domain(format!("--kappa must be > 0 for a table, got {kappa}")).into());
    }
    let spec = regime(reg, eta)?;
    let params = VonMisesParams::new(mu, kappa)?;
    let mut rows = Vec::with_capacity(grid);
    for dt in bulk_grid(&spec, kappa, grid) {
        let x = point_at(&params, dt)?;
        let d = standardized_deviate(&params, x)?;
        let exact = log_ratio_exact(&params, x)?;
        let order1 = log_ratio_expansion(d.delta_tilde, kappa, 1)?.value;
        let order2 = log_ratio_expansion(d.delta_tilde, kappa, 2)?.value;
        let cdf_quad = vm_cdf_quadrature_with(quad, &params, x, SCAN_CDF_TOL)?;
        let cdf_approx = cdf_expansion(d.delta_tilde, kappa)?.value;
        rows.push(vec![
            ("x", x.into()),
            ("delta", d.delta.into()),
            ("delta_tilde", d.delta_tilde.into()),
            ("vm_density", vm_density(&params, x).into()),
            (
                "ref_normal_density",
                reference_normal_density(&params, x)?.into(),
            ),
            ("logratio_exact", exact.into()),
            ("logratio_order1", order1.into()),
            ("logratio_order2", order2.into()),
            ("cdf_quad", cdf_quad.into()),
            ("cdf_approx", cdf_approx.into()),
            ("residual_log", (exact - order2).abs().into()),
            ("residual_cdf", (cdf_quad - cdf_approx).abs().into()),
        ]);
    }
    let mut meta = vec![
        ("command", "table".into()),
        ("mu", mu.into()),
        ("kappa", kappa.into()),
        ("eta", eta.into()),
        ("regime", regime_name(reg).into()),
        ("grid", grid.into()),
    ];
    meta.extend(output_meta(output));
    output.spec().emit(&meta, &rows)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn error_scan(
    quad: &Quadrature,
    target: Target,
    kappa_min: f64,
    kappa_max: f64,
    steps: usize,
    eta: f64,
    reg: Regime,
    grid: usize,
    output: &OutputArgs,
) -> Result<(), Failure> {
    let spec = regime(reg, eta)?;
    let kappas = geometric_kappas(kappa_min, kappa_max, steps)?;
    let report = residual_scan_with(quad, &spec, &kappas, grid, target.into())?;
    let mut rows: Vec<Record> = Vec::with_capacity(kappas.len() + 1);
    for i in 0..kappas.len() {
        rows.push(vec![
            ("record", "kappa".into()),
            ("kappa", report.kappa_values[i].into()),
            ("max_residual", report.max_residual[i].into()),
            (
                "max_normalized_residual",
                report.max_normalized_residual[i].into(),
            ),
            ("anchor_residual", report.anchor_residual[i].into()),
            ("fitted_slope", Field::Empty),
        ]);
    }
    rows.push(vec![
        ("record", "slope".into()),
        ("kappa", Field::Empty),
        ("max_residual", Field::Empty),
        ("max_normalized_residual", Field::Empty),
        ("anchor_residual", Field::Empty),
        ("fitted_slope", report.fitted_slope.into()),
    ]);
    let mut meta = vec![
        ("command", "error-scan".into()),
        ("target", report.target.name().into()),
        ("kappa_min", kappa_min.into()),
        ("kappa_max", kappa_max.into()),
        ("steps", steps.into()),
        ("eta", eta.into()),
        ("regime", regime_name(reg).into()),
        ("grid", grid.into()),
        ("anchor_delta_tilde", ANCHOR_DELTA_TILDE.into()),
    ];
    meta.extend(output_meta(output));
    output.spec().emit(&meta, &rows)?;
    Ok(())
}

fn convergence(mu: f64, kappas: &[f64], grid: usize, output: &OutputArgs) -> Result<(), Failure> {
    let mu = angle("mu", mu)?;
    if kappas.is_empty() {
        return Err(Error::Usage("--kappas needs at least one value".into()).into());
    }
    let mut rows = Vec::with_capacity(kappas.len());
    for &kappa in kappas {
        rows.push(vec![
            ("kappa", kappa.into()),
            ("matched_scale", matched_wn_scale(kappa)?.into()),
            ("sup_gap", max_matched_gap(mu, kappa, grid)?.into()),
        ]);
    }
    let list = kappas
        .iter()
        .map(|k| k.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let mut meta = vec![
        ("command", "convergence".into()),
        ("mu", mu.into()),
        ("kappas", list.as_str().into()),
        ("grid", grid.into()),
    ];
    meta.extend(output_meta(output));
    output.spec().emit(&meta, &rows)?;
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let quad = Quadrature::from_env()?;
    match cli.command {
        Command::Eval {
            mu,
            kappa,
            x,
            quantity,
            order,
            output,
        } => eval(&quad, mu, kappa, x, quantity, order, &output),
        Command::Table {
            mu,
            kappa,
            eta,
            regime,
            grid,
            output,
        } => table(&quad, mu, kappa, eta, regime, grid, &output),
        Command::ErrorScan {
            target,
            kappa_min,
            kappa_max,
            steps,
            eta,
            regime,
            grid,
            output,
        } => error_scan(
            &quad, target, kappa_min, kappa_max, steps, eta, regime, grid, &output,
        ),
        Command::Convergence {
            mu,
            kappas,
            grid,
            output,
        } => convergence(mu, &kappas, grid, &output),
    }
}

/// Parses `argv` and runs the chosen subcommand. Returns the process exit
/// status: 0 on success, 1 for usage and domain errors, 2 for numerical
/// failure.
fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(Failure::Lib(e @ Error::NumericalFailure(_))) => {
            eprintln!("error: {e}");
            2
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            1
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}
