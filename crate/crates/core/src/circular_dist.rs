//! Von Mises and wrapped normal laws on the circle, plus the linear normal
//! helpers the approximations are written in.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use crate::error::ensure;
use crate::special_fn::{
    asymptotic_tails, bessel_i0_series, bessel_i1_series, log_i0e, SERIES_CUTOFF,
};
use crate::Result;

const LN_2PI: f64 = 1.837_877_066_409_345_5;
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Maps an angle to `[0, 2 pi)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// `theta - mu` reduced to `(-pi, pi]`. Differences already in range are
/// returned untouched so small offsets keep full precision.
pub fn wrapped_difference(theta: f64, mu: f64) -> f64 {
    let d = theta - mu;
    if d > -PI && d <= PI {
        return d;
    }
    let r = d.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Mean direction and concentration of a von Mises law.
///
/// `kappa = 0` is accepted and gives the uniform law; the large-concentration
/// expansions reject it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VonMisesParams {
    mu: f64,
    kappa: f64,
    // log(2 pi) + log(e^-kappa I0(kappa))
    log_norm_scaled: f64,
}

impl VonMisesParams {
    pub fn new(mu: f64, kappa: f64) -> Result<Self> {
        ensure!(
            mu.is_finite(),
            Domain,
            "mean direction must be finite, got {mu}"
        );
        ensure!(
            kappa.is_finite() && kappa >= 0.0,
            Domain,
            "concentration must be finite and >= 0, got {kappa}"
        );
        Ok(VonMisesParams {
            mu: normalize_angle(mu),
            kappa,
            log_norm_scaled: LN_2PI + log_i0e(kappa)?,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// Mean direction and scale `v` of a wrapped normal law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrappedNormalParams {
    mu: f64,
    v: f64,
}

impl WrappedNormalParams {
    pub fn new(mu: f64, v: f64) -> Result<Self> {
        ensure!(
            mu.is_finite(),
            Domain,
            "mean direction must be finite, got {mu}"
        );
        ensure!(
            v.is_finite() && v > 0.0,
            Domain,
            "scale must be > 0, got {v}"
        );
        Ok(WrappedNormalParams {
            mu: normalize_angle(mu),
            v,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn v(&self) -> f64 {
        self.v
    }
}

/// Circular variance `1 - E cos(Theta - mu)` and its square root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularVariance {
    pub value: f64,
    pub sigma: f64,
}

/// `exp{kappa cos(theta - mu)} / (2 pi I0(kappa))`.
pub fn vm_density(params: &VonMisesParams, theta: f64) -> f64 {
    vm_log_density(params, theta).exp()
}

/// Log of [`vm_density`], evaluated as
/// `-2 kappa sin^2((theta - mu)/2) - log(2 pi) - log(e^-kappa I0(kappa))`
/// so that nothing of size `kappa` is ever formed.
pub fn vm_log_density(params: &VonMisesParams, theta: f64) -> f64 {
    let half = 0.5 * wrapped_difference(theta, params.mu);
    let s = half.sin();
    -2.0 * params.kappa * s * s - params.log_norm_scaled
}

/// `sigma^2 = 1 - I1(kappa)/I0(kappa)`.
///
/// Above the series cutoff the ratio is formed from the asymptotic
/// corrections directly, which keeps full relative precision even though
/// `I1/I0` is within `1/(2 kappa)` of one.
pub fn circular_variance_exact(kappa: f64) -> Result<CircularVariance> {
    ensure!(
        kappa > 0.0,
        Domain,
        "circular variance needs kappa > 0, got {kappa}"
    );
    let value = if kappa <= SERIES_CUTOFF {
        let i0 = bessel_i0_series(kappa)?.value;
        let i1 = bessel_i1_series(kappa)?.value;
        (i0 - i1) / i0
    } else {
        let t = asymptotic_tails(kappa)?;
        (1.0 + t.gap) / (2.0 * kappa * (1.0 + t.i0))
    };
    Ok(CircularVariance {
        value,
        sigma: value.sqrt(),
    })
}

/// `1/(2k) + 1/(8k^2) + 1/(8k^3)`.
pub fn circular_variance_expansion(kappa: f64) -> Result<f64> {
    ensure!(
        kappa > 0.0,
        Domain,
        "expansion needs kappa > 0, got {kappa}"
    );
    let u = 1.0 / kappa;
    Ok(u * (0.5 + u * (0.125 + u * 0.125)))
}

/// Number of wraps `K` on each side needed so that the omitted terms of the
/// wrapped normal sum carry less than `tol` density.
pub fn wn_truncation_bound(params: &WrappedNormalParams, theta: f64, tol: f64) -> Result<usize> {
    ensure!(tol > 0.0, Domain, "tolerance must be > 0, got {tol}");
    let v = params.v;
    let d = wrapped_difference(theta, params.mu).abs();
    let arg = 2.0 / (tol * v * (2.0 * PI).sqrt());
    let reach = v * (2.0 * arg.ln().max(0.0)).sqrt();
    Ok(((d + reach) / TAU).ceil() as usize + 1)
}

/// Symmetric partial sum of the wrapped normal series over `k in [-wraps, wraps]`.
pub fn wn_partial_sum(params: &WrappedNormalParams, theta: f64, wraps: usize) -> f64 {
    let d = wrapped_difference(theta, params.mu);
    let v = params.v;
    let term = |k: f64| normal_pdf((d + TAU * k) / v) / v;
    // smallest terms first
    let mut sum = 0.0;
    for k in (1..=wraps).rev() {
        let k = k as f64;
        sum += term(k) + term(-k);
    }
    sum + term(0.0)
}

/// Wrapped normal density, truncated so the omitted tail is below `tol`.
pub fn wn_density(params: &WrappedNormalParams, theta: f64, tol: f64) -> Result<f64> {
    let wraps = wn_truncation_bound(params, theta, tol)?;
    Ok(wn_partial_sum(params, theta, wraps))
}

/// `1 - exp(-v^2/2)`.
pub fn wn_circular_variance(v: f64) -> Result<f64> {
    ensure!(v > 0.0, Domain, "scale must be > 0, got {v}");
    Ok(-(-0.5 * v * v).exp_m1())
}

/// Wrapped normal scale `v = sqrt(2) sigma(kappa)` whose law matches the von
/// Mises law of concentration `kappa`.
pub fn matched_wn_scale(kappa: f64) -> Result<f64> {
    Ok(std::f64::consts::SQRT_2 * circular_variance_exact(kappa)?.sigma)
}

/// Largest absolute difference between the von Mises density and its matched
/// wrapped normal over `grid_size` equispaced angles in `[0, 2 pi]`.
pub fn max_matched_gap(mu: f64, kappa: f64, grid_size: usize) -> Result<f64> {
    ensure!(
        grid_size >= 2,
        Usage,
        "grid needs at least 2 points, got {grid_size}"
    );
    let vm = VonMisesParams::new(mu, kappa)?;
    let wn = WrappedNormalParams::new(mu, matched_wn_scale(kappa)?)?;
    let step = TAU / (grid_size - 1) as f64;
    let mut worst = 0.0_f64;
    for i in 0..grid_size {
        let theta = i as f64 * step;
        let gap = (vm_density(&vm, theta) - wn_density(&wn, theta, 1e-14)?).abs();
        worst = worst.max(gap);
    }
    Ok(worst)
}

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Standard normal distribution function, via `erfc`.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// `Psi_j(z) = int_z^inf y^j phi(y) dy` for `j in {0, 2, 4, 6, 8}`, through
/// the closed forms `Psi_j = P_j(z) phi(z) + (j-1)!! Psi_0(z)`.
pub fn upper_incomplete_moment(j: u32, z: f64) -> Result<f64> {
    let tail = 0.5 * libm::erfc(z * FRAC_1_SQRT_2);
    let z2 = z * z;
    let (poly, weight) = match j {
        0 => return Ok(tail),
        2 => (z, 1.0),
        4 => (z * (3.0 + z2), 3.0),
        6 => (z * (15.0 + z2 * (5.0 + z2)), 15.0),
        8 => (z * (105.0 + z2 * (35.0 + z2 * (7.0 + z2))), 105.0),
        _ => {
            return Err(crate::Error::Domain(format!(
                "incomplete moment order must be one of 0, 2, 4, 6, 8, got {j}"
            )))
        }
    };
    Ok(poly * normal_pdf(z) + weight * tail)
}
