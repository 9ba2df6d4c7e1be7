//! Brute-force references for the expansions.
//!
//! Nothing in here calls the Bessel power series or asymptotic routines of
//! [`crate::special_fn`] to produce a Bessel value. The integral representations and
//! compensated series below are separate code paths, so that agreement with
//! them is a check rather than a tautology.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::bridge_approx::{
    cdf_expansion, log_ratio_exact, log_ratio_expansion, point_at, ratio_expansion,
    standardized_deviate, BulkSpec,
};
use crate::circular_dist::{circular_variance_exact, vm_density, VonMisesParams};
use crate::error::ensure;
use crate::{Error, Result};

/// Environment variable read by the CLI to override [`Quadrature::max_depth`].
pub const MAX_DEPTH_ENV: &str = "CIRC_BRIDGE_MAX_DEPTH";

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (non-negative half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Outcome of [`Quadrature::integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Globally adaptive Gauss-Kronrod (7/15) quadrature.
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate falls below the requested absolute tolerance. Bisecting past
/// `max_depth` levels, or holding more than `max_intervals` pieces, is a
/// [`Error::NumericalFailure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quadrature {
    pub max_depth: u32,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            max_depth: 40,
            max_intervals: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        // ties broken by position so the bisection sequence is deterministic
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, depth: u32) -> Result<Piece> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_sum = (WGK[7] * fc).abs();
    let mut fv = [0.0; 15];
    fv[7] = fc;
    for (j, &x) in XGK[..7].iter().enumerate() {
        let dx = half * x;
        let (f1, f2) = (f(center - dx), f(center + dx));
        fv[j] = f1;
        fv[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    if !kronrod.is_finite() {
        return Err(Error::NumericalFailure(format!(
            "integrand is not finite on [{a}, {b}]"
        )));
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    // QUADPACK-style error scaling with a roundoff floor
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Piece {
        a,
        b,
        value,
        error,
        depth,
    })
}

impl Quadrature {
    /// Quadrature settings with `max_depth` taken from [`MAX_DEPTH_ENV`] when
    /// that variable is set.
    pub fn from_env() -> Result<Self> {
        let mut q = Quadrature::default();
        if let Ok(raw) = std::env::var(MAX_DEPTH_ENV) {
            q.max_depth = raw.trim().parse().map_err(|_| {
                Error::Usage(format!(
                    "{MAX_DEPTH_ENV} must be a non-negative integer, got {raw:?}"
                ))
            })?;
        }
        Ok(q)
    }

    pub fn integrate<F: Fn(f64) -> f64>(
        &self,
        f: F,
        a: f64,
        b: f64,
        tol: f64,
    ) -> Result<QuadratureResult> {
        ensure!(
            a < b,
            Usage,
            "integration bounds must satisfy a < b, got [{a}, {b}]"
        );
        ensure!(tol > 0.0, Usage, "tolerance must be > 0, got {tol}");
        let mut heap = BinaryHeap::new();
        let first = kronrod15(&f, a, b, 0)?;
        let mut total_error = first.error;
        let mut evaluations = 15;
        heap.push(first);
        loop {
            if total_error <= tol {
                // the running total drifts; confirm against a fresh sum
                total_error = heap.iter().map(|p| p.error).sum();
                if total_error <= tol {
                    break;
                }
            }
            let worst = heap.pop().expect("heap is never empty");
            if worst.depth >= self.max_depth {
                return Err(Error::NumericalFailure(format!(
                    "quadrature on [{a}, {b}] hit max depth {} with error estimate {total_error:e} > {tol:e}",
                    self.max_depth
                )));
            }
            if heap.len() + 2 > self.max_intervals {
                return Err(Error::NumericalFailure(format!(
                    "quadrature on [{a}, {b}] exceeded {} subintervals",
                    self.max_intervals
                )));
            }
            let mid = 0.5 * (worst.a + worst.b);
            let left = kronrod15(&f, worst.a, mid, worst.depth + 1)?;
            let right = kronrod15(&f, mid, worst.b, worst.depth + 1)?;
            evaluations += 30;
            total_error += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
        }
        let mut pieces = heap.into_vec();
        pieces.sort_by(|p, q| p.a.total_cmp(&q.a));
        let value = neumaier_sum(pieces.iter().map(|p| p.value));
        let abs_error_estimate = pieces.iter().map(|p| p.error).sum();
        Ok(QuadratureResult {
            value,
            abs_error_estimate,
            evaluations,
        })
    }
}

fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `int_a^b f` to absolute tolerance `tol` with default settings.
pub fn adaptive_quadrature<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    Quadrature::default().integrate(f, a, b, tol)
}

// max(e^-k, 1/sqrt(2 pi k)) never exceeds e^-k I0(k); used to turn a relative
// tolerance into an absolute one before the integral is known.
fn i0e_lower_bound(kappa: f64) -> f64 {
    let asym = if kappa > 0.0 {
        1.0 / (2.0 * PI * kappa).sqrt()
    } else {
        0.0
    };
    (-kappa).exp().max(asym)
}

/// `e^-k I0(k) = (1/pi) int_0^pi e^{k (cos t - 1)} dt`, with `rel_tol`
/// relative to the result.
pub fn bessel_i0e_integral(kappa: f64, rel_tol: f64) -> Result<f64> {
    ensure!(
        kappa >= 0.0,
        Domain,
        "Bessel argument must be >= 0, got {kappa}"
    );
    let tol = rel_tol * PI * i0e_lower_bound(kappa);
    let integrand = |t: f64| {
        let s = (0.5 * t).sin();
        (-2.0 * kappa * s * s).exp()
    };
    Ok(adaptive_quadrature(integrand, 0.0, PI, tol)?.value / PI)
}

/// `e^-k I1(k) = (1/pi) int_0^pi e^{k (cos t - 1)} cos t dt`, with `abs_tol`
/// absolute (the integrand changes sign).
pub fn bessel_i1e_integral(kappa: f64, abs_tol: f64) -> Result<f64> {
    ensure!(
        kappa >= 0.0,
        Domain,
        "Bessel argument must be >= 0, got {kappa}"
    );
    let integrand = |t: f64| {
        let s = (0.5 * t).sin();
        (-2.0 * kappa * s * s).exp() * t.cos()
    };
    Ok(adaptive_quadrature(integrand, 0.0, PI, abs_tol * PI)?.value / PI)
}

/// `I0(k)` from its integral representation. `tol` is relative.
pub fn bessel_i0_integral(kappa: f64, tol: f64) -> Result<f64> {
    ensure!(
        kappa <= 700.0,
        Range,
        "unscaled I0 overflows past kappa = 700, got {kappa}"
    );
    Ok(bessel_i0e_integral(kappa, tol)? * kappa.exp())
}

/// `I1(k)` from its integral representation. `tol` is relative to `I1(k)`.
pub fn bessel_i1_integral(kappa: f64, tol: f64) -> Result<f64> {
    ensure!(
        kappa <= 700.0,
        Range,
        "unscaled I1 overflows past kappa = 700, got {kappa}"
    );
    // x/2 e^-x bounds e^-x I1 from below for small x, and I1/I0 >= 1/2 once x >= 2
    let floor = if kappa >= 2.0 {
        0.5 * i0e_lower_bound(kappa)
    } else {
        0.5 * kappa * (-kappa).exp()
    };
    Ok(bessel_i1e_integral(kappa, tol * floor.max(f64::MIN_POSITIVE))? * kappa.exp())
}

fn compensated_series(terms: usize, mut term: f64, ratio: impl Fn(f64) -> f64) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in 0..terms {
        if k > 0 {
            term *= ratio(k as f64);
        }
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `I0(x)` from exactly `terms` terms of its power series, Kahan-summed.
pub fn bessel_i0_series_compensated(x: f64, terms: usize) -> f64 {
    let q = 0.25 * x * x;
    compensated_series(terms, 1.0, |k| q / (k * k))
}

/// `I1(x)` from exactly `terms` terms of its power series, Kahan-summed.
pub fn bessel_i1_series_compensated(x: f64, terms: usize) -> f64 {
    let q = 0.25 * x * x;
    compensated_series(terms, 0.5 * x, |k| q / (k * (k + 1.0)))
}

fn scaled_series_terms(x: f64) -> usize {
    2 * x.ceil() as usize + 60
}

/// `e^-x I0(x)` from a Kahan-summed power series whose terms carry the
/// `e^-x` factor from the start. Usable up to `x ~ 700`.
pub fn bessel_i0e_series_compensated(x: f64) -> Result<f64> {
    ensure!(
        (0.0..=700.0).contains(&x),
        Range,
        "scaled series oracle needs 0 <= x <= 700, got {x}"
    );
    let q = 0.25 * x * x;
    Ok(compensated_series(
        scaled_series_terms(x),
        (-x).exp(),
        |k| q / (k * k),
    ))
}

/// `e^-x I1(x)`, as [`bessel_i0e_series_compensated`].
pub fn bessel_i1e_series_compensated(x: f64) -> Result<f64> {
    ensure!(
        (0.0..=700.0).contains(&x),
        Range,
        "scaled series oracle needs 0 <= x <= 700, got {x}"
    );
    let q = 0.25 * x * x;
    Ok(compensated_series(
        scaled_series_terms(x),
        0.5 * x * (-x).exp(),
        |k| q / (k * (k + 1.0)),
    ))
}

/// `F(x) = int_{mu - pi}^{x} f(y) dy` on the principal window `(mu - pi, mu + pi]`.
pub fn vm_cdf_quadrature(params: &VonMisesParams, x: f64, tol: f64) -> Result<f64> {
    vm_cdf_quadrature_with(&Quadrature::default(), params, x, tol)
}

/// [`vm_cdf_quadrature`] with explicit quadrature settings.
///
/// Right of the mode the result is `1 - int_x^{mu + pi} f`, so the upper tail
/// is resolved relative to its own size and the function stays monotone.
/// For `kappa >= 1e4` both limits are pulled in to `mu -+ 20 sigma`; the mass
/// dropped is below `exp(-kappa t^2 / 5)` at `t = 20 sigma`, i.e. about `e^-40`.
pub fn vm_cdf_quadrature_with(
    quad: &Quadrature,
    params: &VonMisesParams,
    x: f64,
    tol: f64,
) -> Result<f64> {
    let mu = params.mu();
    let kappa = params.kappa();
    ensure!(
        kappa > 0.0,
        Domain,
        "distribution function oracle needs kappa > 0, got {kappa}"
    );
    ensure!(tol > 0.0, Domain, "tolerance must be > 0, got {tol}");
    ensure!(
        x > mu - PI && x <= mu + PI,
        Domain,
        "x = {x} outside the principal window ({}, {}]",
        mu - PI,
        mu + PI
    );
    let mut half_width = PI;
    if kappa >= 1e4 {
        half_width = half_width.min(20.0 * circular_variance_exact(kappa)?.sigma);
    }
    let (lower, upper) = (mu - half_width, mu + half_width);
    let f = |y: f64| vm_density(params, y);
    if x <= lower {
        Ok(0.0)
    } else if x <= mu {
        Ok(quad.integrate(f, lower, x, tol)?.value)
    } else if x >= upper {
        Ok(1.0)
    } else {
        Ok(1.0 - quad.integrate(f, x, upper, tol)?.value)
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn slope_fit(points: &[(f64, f64)]) -> Result<f64> {
    ensure!(
        points.len() >= 3,
        Usage,
        "slope fit needs at least 3 points, got {}",
        points.len()
    );
    ensure!(
        points
            .iter()
            .all(|&(x, y)| x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()),
        Usage,
        "slope fit needs positive finite coordinates"
    );
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    ensure!(sxx > 0.0, Usage, "slope fit needs distinct abscissae");
    Ok(sxy / sxx)
}

/// Residuals below this are rounding noise and are left out of slope fits.
pub const RESIDUAL_FLOOR: f64 = 1e-14;

/// [`slope_fit`] after dropping points whose ordinate is below `floor`.
pub fn slope_fit_above_floor(points: &[(f64, f64)], floor: f64) -> Result<f64> {
    let kept: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.1 >= floor).collect();
    slope_fit(&kept)
}

/// Quantity compared against its expansion in a residual scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanTarget {
    /// log density ratio vs its order-2 expansion
    LogRatio,
    /// density ratio vs its order-2 expansion
    Ratio,
    /// quadrature distribution function vs its expansion
    Cdf,
}

impl ScanTarget {
    /// Exponent `p` of the remainder envelope `(1 + |dt|^p)/kappa^3`.
    pub fn remainder_power(self) -> u32 {
        match self {
            ScanTarget::LogRatio => 8,
            ScanTarget::Ratio => 12,
            ScanTarget::Cdf => 11,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScanTarget::LogRatio => "log_ratio",
            ScanTarget::Ratio => "ratio",
            ScanTarget::Cdf => "cdf",
        }
    }
}

/// Mean direction used by residual scans; any value works, the middle of
/// `[0, 2 pi)` keeps the principal window inside it.
pub const SCAN_MU: f64 = PI;

/// Tolerance handed to [`vm_cdf_quadrature`] by scans.
pub const SCAN_CDF_TOL: f64 = 1e-13;

/// Exact value and expansion of `target` at the point `x`, with the `delta_tilde`
/// recomputed from `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualPoint {
    pub x: f64,
    pub delta_tilde: f64,
    pub exact: f64,
    pub approx: f64,
    pub residual: f64,
}

/// Exact-vs-expansion comparison at the point whose nominal rescaled deviate
/// is `delta_tilde`.
pub fn residual_at(
    quad: &Quadrature,
    params: &VonMisesParams,
    target: ScanTarget,
    delta_tilde: f64,
) -> Result<ResidualPoint> {
    let kappa = params.kappa();
    let x = point_at(params, delta_tilde)?;
    let dt = standardized_deviate(params, x)?.delta_tilde;
    let (exact, approx) = match target {
        ScanTarget::LogRatio => (
            log_ratio_exact(params, x)?,
            log_ratio_expansion(dt, kappa, 2)?.value,
        ),
        ScanTarget::Ratio => (
            log_ratio_exact(params, x)?.exp(),
            ratio_expansion(dt, kappa, 2)?.value,
        ),
        ScanTarget::Cdf => (
            vm_cdf_quadrature_with(quad, params, x, SCAN_CDF_TOL)?,
            cdf_expansion(dt, kappa)?.value,
        ),
    };
    Ok(ResidualPoint {
        x,
        delta_tilde: dt,
        exact,
        approx,
        residual: (exact - approx).abs(),
    })
}

/// Residuals at a fixed `delta_tilde` across concentrations, as `(kappa, residual)`.
pub fn fixed_point_residuals(
    quad: &Quadrature,
    target: ScanTarget,
    kappa_values: &[f64],
    delta_tilde: f64,
) -> Result<Vec<(f64, f64)>> {
    kappa_values
        .iter()
        .map(|&kappa| {
            let params = VonMisesParams::new(SCAN_MU, kappa)?;
            Ok((
                kappa,
                residual_at(quad, &params, target, delta_tilde)?.residual,
            ))
        })
        .collect()
}

/// Error-order summary for one expansion across a list of concentrations.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub target: ScanTarget,
    pub regime: BulkSpec,
    pub grid_size: usize,
    pub kappa_values: Vec<f64>,
    /// Largest residual over the bulk grid, per kappa.
    pub max_residual: Vec<f64>,
    /// Largest `residual * kappa^3 / (1 + |dt|^p)` over the bulk grid, per kappa.
    pub max_normalized_residual: Vec<f64>,
    /// Residual at `dt = ANCHOR_DELTA_TILDE`, per kappa.
    pub anchor_residual: Vec<f64>,
    /// Log-log slope of `anchor_residual` against kappa.
    pub fitted_slope: f64,
}

/// Fixed rescaled deviate at which [`ScanReport::fitted_slope`] is measured.
/// The bulk grows with kappa, so a max over the bulk tracks the envelope
/// rather than the rate.
pub const ANCHOR_DELTA_TILDE: f64 = 1.0;

/// Evenly spaced `delta_tilde` values spanning the bulk at `kappa`.
pub fn bulk_grid(regime: &BulkSpec, kappa: f64, grid_size: usize) -> Vec<f64> {
    let half = regime.delta_tilde_limit(kappa);
    let mid = (grid_size / 2) as f64;
    (0..grid_size)
        .map(|i| half * (i as f64 - mid) / mid)
        .collect()
}

pub fn residual_scan(
    regime: &BulkSpec,
    kappa_values: &[f64],
    grid_size: usize,
    target: ScanTarget,
) -> Result<ScanReport> {
    residual_scan_with(
        &Quadrature::default(),
        regime,
        kappa_values,
        grid_size,
        target,
    )
}

/// Runs [`residual_at`] over a bulk grid for every kappa. Grid points are
/// evaluated in parallel; results are reduced in grid order.
pub fn residual_scan_with(
    quad: &Quadrature,
    regime: &BulkSpec,
    kappa_values: &[f64],
    grid_size: usize,
    target: ScanTarget,
) -> Result<ScanReport> {
    ensure!(
        !kappa_values.is_empty(),
        Usage,
        "residual scan needs at least one kappa"
    );
    ensure!(
        grid_size >= 11 && grid_size % 2 == 1,
        Usage,
        "grid size must be odd and >= 11, got {grid_size}"
    );
    ensure!(
        kappa_values.iter().all(|&k| k > 0.0 && k.is_finite()),
        Domain,
        "all kappa values must be positive"
    );
    let power = target.remainder_power();
    let mut max_residual = Vec::with_capacity(kappa_values.len());
    let mut max_normalized_residual = Vec::with_capacity(kappa_values.len());
    let mut anchor_residual = Vec::with_capacity(kappa_values.len());
    for &kappa in kappa_values {
        let params = VonMisesParams::new(SCAN_MU, kappa)?;
        let grid = bulk_grid(regime, kappa, grid_size);
        let points: Vec<ResidualPoint> = grid
            .par_iter()
            .map(|&dt| residual_at(quad, &params, target, dt))
            .collect::<Result<_>>()?;
        let k3 = kappa * kappa * kappa;
        let (mut worst, mut worst_norm) = (0.0_f64, 0.0_f64);
        for p in &points {
            worst = worst.max(p.residual);
            let envelope = 1.0 + p.delta_tilde.abs().powi(power as i32);
            worst_norm = worst_norm.max(p.residual * k3 / envelope);
        }
        max_residual.push(worst);
        max_normalized_residual.push(worst_norm);
        anchor_residual.push(residual_at(quad, &params, target, ANCHOR_DELTA_TILDE)?.residual);
    }
    let pairs: Vec<(f64, f64)> = kappa_values
        .iter()
        .copied()
        .zip(anchor_residual.iter().copied())
        .collect();
    let fitted_slope = slope_fit_above_floor(&pairs, RESIDUAL_FLOOR)?;
    Ok(ScanReport {
        target,
        regime: *regime,
        grid_size,
        kappa_values: kappa_values.to_vec(),
        max_residual,
        max_normalized_residual,
        anchor_residual,
        fitted_slope,
    })
}

/// `n` concentrations spaced geometrically from `lo` to `hi` inclusive.
pub fn geometric_kappas(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    ensure!(
        lo > 0.0 && hi >= lo,
        Usage,
        "kappa range must satisfy 0 < lo <= hi, got [{lo}, {hi}]"
    );
    ensure!(n >= 1, Usage, "need at least one kappa step");
    if n == 1 {
        return Ok(vec![lo]);
    }
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                let v = lo * (ratio * i as f64).exp();
                // snap to integers when the ends are integers and the ratio is exact
                let r = v.round();
                if (v - r).abs() < 1e-9 * v {
                    r
                } else {
                    v
                }
            }
        })
        .collect())
}
