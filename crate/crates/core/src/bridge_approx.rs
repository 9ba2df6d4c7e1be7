//! Local normal approximation of the von Mises law for large concentration.
//!
//! The reference law is `Normal(mu, 2 sigma^2)`, where `sigma^2` is the exact
//! circular variance `1 - I1(kappa)/I0(kappa)`. Points are measured by the
//! standardized deviate `delta = (x - mu)/sigma` and its rescaled form
//! `delta_tilde = delta / sqrt(2)`, which is the argument of the reference
//! density and of all the expansions below.
//!
//! For `kappa -> oo` and `x` in the bulk `|delta| <= eta sqrt(kappa)`:
//!
//! ```text
//! log{sqrt(2) sigma f(x) / phi(dt)}
//!     = (dt^4/24 - dt^2/8)/k
//!     + (-dt^6/720 + dt^4/48 - dt^2/8 + 3/64)/k^2 + O((1 + |dt|^8)/k^3)
//! ```
//!
//! The ratio itself and the distribution function admit matching two-term
//! expansions; see [`ratio_expansion`] and [`cdf_expansion`].

use std::f64::consts::{LN_2, PI, SQRT_2};

use crate::circular_dist::{
    circular_variance_exact, normal_cdf, normal_pdf, wrapped_difference, VonMisesParams,
};
use crate::error::ensure;
use crate::special_fn::{asymptotic_tails, log_i0e, SERIES_CUTOFF};
use crate::Result;

/// `delta_x` and `delta_tilde_x = delta_x / sqrt(2)` for a point `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardizedDeviate {
    pub delta: f64,
    pub delta_tilde: f64,
}

/// Half-width of the region over which the expansions are claimed to hold
/// uniformly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BulkSpec {
    /// `|delta| <= eta kappa^(1/2)` with `0 < eta < 1`.
    Fixed { eta: f64 },
    /// `|delta| <= eta_tilde kappa^(1/4)` with `eta_tilde > 0`.
    Shrunken { eta_tilde: f64 },
}

impl BulkSpec {
    pub fn fixed(eta: f64) -> Result<Self> {
        ensure!(
            eta > 0.0 && eta < 1.0,
            Domain,
            "bulk parameter must lie in (0, 1), got {eta}"
        );
        Ok(BulkSpec::Fixed { eta })
    }

    pub fn shrunken(eta_tilde: f64) -> Result<Self> {
        ensure!(
            eta_tilde > 0.0 && eta_tilde.is_finite(),
            Domain,
            "shrunken bulk parameter must be > 0, got {eta_tilde}"
        );
        Ok(BulkSpec::Shrunken { eta_tilde })
    }

    /// Largest admissible `|delta|` at concentration `kappa`.
    pub fn delta_limit(&self, kappa: f64) -> f64 {
        match *self {
            BulkSpec::Fixed { eta } => eta * kappa.sqrt(),
            BulkSpec::Shrunken { eta_tilde } => eta_tilde * kappa.powf(0.25),
        }
    }

    /// Largest admissible `|delta_tilde|` at concentration `kappa`.
    pub fn delta_tilde_limit(&self, kappa: f64) -> f64 {
        self.delta_limit(kappa) / SQRT_2
    }
}

/// A truncated expansion value and the shape of its remainder envelope,
/// `(1 + |delta_tilde|^p) / kappa^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionValue {
    pub value: f64,
    pub order: u8,
    pub remainder_power: u32,
    pub remainder_scale: f64,
}

fn remainder_scale(delta_tilde: f64, kappa: f64, power: u32) -> f64 {
    (1.0 + delta_tilde.abs().powi(power as i32)) / (kappa * kappa * kappa)
}

fn require_concentrated(params: &VonMisesParams) -> Result<()> {
    ensure!(
        params.kappa() > 0.0,
        Domain,
        "the normal bridge needs kappa > 0, got {}",
        params.kappa()
    );
    Ok(())
}

fn check_expansion_args(kappa: f64, order: u8) -> Result<()> {
    ensure!(
        kappa > 0.0,
        Domain,
        "expansion needs kappa > 0, got {kappa}"
    );
    ensure!(
        order == 1 || order == 2,
        Domain,
        "expansion order must be 1 or 2, got {order}"
    );
    Ok(())
}

/// Standardized deviate of `x`, using the exact circular variance and the
/// wrapped difference `x - mu` in `(-pi, pi]`.
pub fn standardized_deviate(params: &VonMisesParams, x: f64) -> Result<StandardizedDeviate> {
    require_concentrated(params)?;
    let sigma = circular_variance_exact(params.kappa())?.sigma;
    let delta = wrapped_difference(x, params.mu()) / sigma;
    Ok(StandardizedDeviate {
        delta,
        delta_tilde: delta / SQRT_2,
    })
}

/// Point `mu + sqrt(2) sigma delta_tilde`, the inverse of [`standardized_deviate`]
/// on the principal window.
pub fn point_at(params: &VonMisesParams, delta_tilde: f64) -> Result<f64> {
    require_concentrated(params)?;
    let sigma = circular_variance_exact(params.kappa())?.sigma;
    Ok(params.mu() + SQRT_2 * sigma * delta_tilde)
}

pub fn in_bulk(params: &VonMisesParams, spec: &BulkSpec, x: f64) -> Result<bool> {
    let dev = standardized_deviate(params, x)?;
    Ok(dev.delta.abs() <= spec.delta_limit(params.kappa()))
}

/// Which side of the normalization-constant identity to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationMode {
    /// `-log(2 pi)/2 - log I0(k) + log(2)/2 + log(sigma^2)/2` from the Bessel functions.
    Exact,
    /// `-k + 3/(64 k^2) + 13/(128 k^3)`.
    Expansion,
}

const NORM_K2: f64 = 3.0 / 64.0;
const NORM_K3: f64 = 13.0 / 128.0;

/// [`normalization_log_constant`] plus `kappa`.
///
/// Both modes are `O(kappa^-2)`, so this form keeps full relative precision
/// where the constant itself is dominated by `-kappa`.
pub fn normalization_log_excess(kappa: f64, mode: NormalizationMode) -> Result<f64> {
    ensure!(
        kappa > 0.0,
        Domain,
        "normalization constant needs kappa > 0, got {kappa}"
    );
    match mode {
        NormalizationMode::Expansion => {
            let u = 1.0 / kappa;
            Ok(u * u * (NORM_K2 + NORM_K3 * u))
        }
        NormalizationMode::Exact if kappa <= SERIES_CUTOFF => {
            let sigma2 = circular_variance_exact(kappa)?.value;
            Ok(0.5 * (LN_2 - (2.0 * PI).ln() + sigma2.ln()) - log_i0e(kappa)?)
        }
        NormalizationMode::Exact => {
            // With S0 = 1 + i0 and 2k(S0 - S1) = 1 + gap, the logarithms of
            // 2 pi k cancel and what remains is log(1 + gap)/2 - 3 log(1 + i0)/2.
            let t = asymptotic_tails(kappa)?;
            Ok(0.5 * t.gap.ln_1p() - 1.5 * t.i0.ln_1p())
        }
    }
}

/// `-log(2 pi)/2 - log I0(kappa) + log(2)/2 + log(sigma^2)/2`, either exactly
/// or through its large-`kappa` expansion.
pub fn normalization_log_constant(kappa: f64, mode: NormalizationMode) -> Result<f64> {
    Ok(normalization_log_excess(kappa, mode)? - kappa)
}

/// `log{sqrt(2) sigma f(x) / phi(delta_tilde)}` evaluated directly.
///
/// Assembled as
/// `[kappa cos(x - mu) - kappa] + delta^2/4 + [normalization constant + kappa]`
/// with the first bracket written as `-2 kappa sin^2((x - mu)/2)`.
pub fn log_ratio_exact(params: &VonMisesParams, x: f64) -> Result<f64> {
    require_concentrated(params)?;
    let kappa = params.kappa();
    let sigma = circular_variance_exact(kappa)?.sigma;
    let t = wrapped_difference(x, params.mu());
    let delta = t / sigma;
    let s = (0.5 * t).sin();
    let excess = normalization_log_excess(kappa, NormalizationMode::Exact)?;
    Ok(-2.0 * kappa * s * s + 0.25 * delta * delta + excess)
}

/// `sqrt(2) sigma f(x) / phi(delta_tilde)`, the exponential of [`log_ratio_exact`].
pub fn ratio_exact(params: &VonMisesParams, x: f64) -> Result<f64> {
    Ok(log_ratio_exact(params, x)?.exp())
}

fn first_order_poly(d2: f64) -> f64 {
    d2 * (d2 / 24.0 - 0.125)
}

/// Expansion of the log density ratio in powers of `1/kappa`.
pub fn log_ratio_expansion(delta_tilde: f64, kappa: f64, order: u8) -> Result<ExpansionValue> {
    check_expansion_args(kappa, order)?;
    let d2 = delta_tilde * delta_tilde;
    let u = 1.0 / kappa;
    let mut value = first_order_poly(d2) * u;
    if order == 2 {
        let second = 3.0 / 64.0 + d2 * (-0.125 + d2 * (1.0 / 48.0 - d2 / 720.0));
        value += second * u * u;
    }
    Ok(ExpansionValue {
        value,
        order,
        remainder_power: 8,
        remainder_scale: remainder_scale(delta_tilde, kappa, 8),
    })
}

/// Expansion of the density ratio itself; valid on the shrunken bulk.
pub fn ratio_expansion(delta_tilde: f64, kappa: f64, order: u8) -> Result<ExpansionValue> {
    check_expansion_args(kappa, order)?;
    let d2 = delta_tilde * delta_tilde;
    let u = 1.0 / kappa;
    let mut value = 1.0 + first_order_poly(d2) * u;
    if order == 2 {
        let second =
            3.0 / 64.0 + d2 * (-0.125 + d2 * (11.0 / 384.0 + d2 * (-19.0 / 2880.0 + d2 / 1152.0)));
        value += second * u * u;
    }
    Ok(ExpansionValue {
        value,
        order,
        remainder_power: 12,
        remainder_scale: remainder_scale(delta_tilde, kappa, 12),
    })
}

/// Two-term expansion of the von Mises distribution function at the point
/// with rescaled deviate `delta_tilde`:
///
/// `Phi(dt) - phi(dt) { dt^3/(24k) + (dt^7/1152 - dt^5/1920 + 5dt^3/192 - 3dt/64)/k^2 }`.
///
/// The correction is subtracted: integrating the density expansion gives
/// `d/dz[-phi(z) P(z)] = phi(z) Q(z)` for each correction pair `(P, Q)`.
pub fn cdf_expansion(delta_tilde: f64, kappa: f64) -> Result<ExpansionValue> {
    ensure!(
        kappa > 0.0,
        Domain,
        "expansion needs kappa > 0, got {kappa}"
    );
    let z = delta_tilde;
    let z2 = z * z;
    let u = 1.0 / kappa;
    let first = z * z2 / 24.0;
    let second = z * (-3.0 / 64.0 + z2 * (5.0 / 192.0 + z2 * (-1.0 / 1920.0 + z2 / 1152.0)));
    let value = normal_cdf(z) - normal_pdf(z) * (first * u + second * u * u);
    Ok(ExpansionValue {
        value,
        order: 2,
        remainder_power: 11,
        remainder_scale: remainder_scale(delta_tilde, kappa, 11),
    })
}

/// Density of `Normal(mu, 2 sigma^2)` at `x`, i.e. `phi(delta_tilde)/(sqrt(2) sigma)`.
pub fn reference_normal_density(params: &VonMisesParams, x: f64) -> Result<f64> {
    require_concentrated(params)?;
    let sigma = circular_variance_exact(params.kappa())?.sigma;
    let dt = wrapped_difference(x, params.mu()) / (SQRT_2 * sigma);
    Ok(normal_pdf(dt) / (SQRT_2 * sigma))
}
