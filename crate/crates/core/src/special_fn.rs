//! Modified Bessel functions of the first kind, orders 0 and 1.
//!
//! Two evaluation routes are used:
//!
//! * the convergent power series, for `0 <= x <= SERIES_CUTOFF`;
//! * the Hankel asymptotic series `e^x / sqrt(2 pi x) * sum_k c_k(nu) / x^k`,
//!   summed until the terms drop below machine precision, for larger `x`.
//!
//! The scaled form `e^-x I_nu(x)` is the canonical representation for large
//! arguments; unscaled values overflow past `x ~ 709`.
//!
//! [`bessel_i0e_asymptotic`] and [`bessel_i1e_asymptotic`] expose the classic
//! three-correction truncation of the asymptotic bracket on their own, so its
//! `x^-4` error order can be measured independently of the full evaluation.

use std::f64::consts::PI;

use crate::error::ensure;
use crate::Result;

/// Largest argument accepted by the power-series routines, and the crossover
/// between the series and asymptotic branches everywhere else.
pub const SERIES_CUTOFF: f64 = 30.0;

/// Relative size at which a series term is considered negligible.
const SERIES_TERM_FLOOR: f64 = 1e-17;

const ASYMPTOTIC_MAX_TERMS: usize = 400;
const OPTIMAL_TRUNCATION_FLOOR: f64 = 1e-16;

/// Which route produced a [`BesselEval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselMethod {
    Series,
    Asymptotic,
}

/// A Bessel function value together with its exponentially scaled form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    /// `I_nu(x)`; may be `+inf` when only the scaled form is representable.
    pub value: f64,
    /// `e^-x I_nu(x)`.
    pub scaled_value: f64,
    pub method_used: BesselMethod,
}

/// Number of correction terms of the large-argument bracket retained beyond
/// the leading `1`. At most three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct AsymptoticOrder(u8);

impl AsymptoticOrder {
    pub const MAX: AsymptoticOrder = AsymptoticOrder(3);

    pub fn new(order: u8) -> Result<Self> {
        ensure!(order <= 3, Domain, "asymptotic order {order} exceeds 3");
        Ok(AsymptoticOrder(order))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

/// Bracket coefficients of `sqrt(2 pi x) e^-x I0(x)` through `x^-3`.
const I0_BRACKET: [f64; 4] = [1.0, 1.0 / 8.0, 9.0 / 128.0, 75.0 / 1024.0];
/// Bracket coefficients of `sqrt(2 pi x) e^-x I1(x)` through `x^-3`.
const I1_BRACKET: [f64; 4] = [1.0, -3.0 / 8.0, -15.0 / 128.0, -105.0 / 1024.0];

fn check_series_arg(x: f64) -> Result<()> {
    ensure!(x >= 0.0, Domain, "Bessel argument must be >= 0, got {x}");
    ensure!(
        x <= SERIES_CUTOFF,
        Range,
        "power series limited to x <= {SERIES_CUTOFF}, got {x}"
    );
    Ok(())
}

/// `I0(x)` from `sum_k (x/2)^(2k) / (k!)^2`.
pub fn bessel_i0_series(x: f64) -> Result<BesselEval> {
    check_series_arg(x)?;
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term <= SERIES_TERM_FLOOR * sum {
            break;
        }
        k += 1.0;
    }
    Ok(BesselEval {
        value: sum,
        scaled_value: sum * (-x).exp(),
        method_used: BesselMethod::Series,
    })
}

/// `I1(x)` from `sum_k (x/2)^(2k+1) / (k! (k+1)!)`.
pub fn bessel_i1_series(x: f64) -> Result<BesselEval> {
    check_series_arg(x)?;
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    let mut k = 1.0;
    while term > SERIES_TERM_FLOOR * sum {
        term *= q / (k * (k + 1.0));
        sum += term;
        k += 1.0;
    }
    Ok(BesselEval {
        value: sum,
        scaled_value: sum * (-x).exp(),
        method_used: BesselMethod::Series,
    })
}

fn truncated_bracket(coeffs: &[f64; 4], kappa: f64, order: AsymptoticOrder) -> Result<f64> {
    ensure!(
        kappa > 0.0,
        Domain,
        "asymptotic bracket needs kappa > 0, got {kappa}"
    );
    let inv = 1.0 / kappa;
    // Horner over the retained coefficients.
    let n = order.get() as usize;
    Ok(coeffs[..=n].iter().rev().fold(0.0, |acc, &c| acc * inv + c))
}

/// `sqrt(2 pi kappa) e^-kappa I0(kappa)` truncated after `order` corrections:
/// `1 + 1/(8k) + 9/(128k^2) + 75/(1024k^3)`.
pub fn bessel_i0e_asymptotic(kappa: f64, order: AsymptoticOrder) -> Result<f64> {
    truncated_bracket(&I0_BRACKET, kappa, order)
}

/// `sqrt(2 pi kappa) e^-kappa I1(kappa)` truncated after `order` corrections:
/// `1 - 3/(8k) - 15/(128k^2) - 105/(1024k^3)`.
pub fn bessel_i1e_asymptotic(kappa: f64, order: AsymptoticOrder) -> Result<f64> {
    truncated_bracket(&I1_BRACKET, kappa, order)
}

/// Corrections to the leading term of the Hankel expansions, each summed to
/// machine precision without ever adding the leading `1`.
///
/// With `S0 = sqrt(2 pi x) e^-x I0(x)` and `S1` likewise for `I1`:
///
/// * `i0 = S0 - 1`
/// * `i1 = S1 - 1`
/// * `gap = 2x (S0 - S1) - 1`
///
/// Keeping the corrections separate lets callers form `1 - I1/I0` and
/// `log I0` without cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticTails {
    pub i0: f64,
    pub i1: f64,
    pub gap: f64,
}

/// Sums the Hankel series for orders 0 and 1. Only valid where the series
/// reaches machine precision before diverging; callers use it for
/// `x >= SERIES_CUTOFF`-ish arguments.
pub fn asymptotic_tails(x: f64) -> Result<AsymptoticTails> {
    ensure!(x > 0.0, Domain, "asymptotic series needs x > 0, got {x}");
    let inv = 1.0 / x;
    // c_k(0) > 0 and c_k(1) < 0 for k >= 1, so the gap coefficients never cancel.
    let mut c0 = 1.0;
    let mut c1 = 1.0;
    let mut pow = 1.0;
    let (mut i0, mut i1, mut gap) = (0.0, 0.0, 0.0);
    let mut prev = f64::INFINITY;
    for k in 1..=ASYMPTOTIC_MAX_TERMS {
        let kf = k as f64;
        let odd_sq = (2.0 * kf - 1.0) * (2.0 * kf - 1.0);
        c0 *= odd_sq / (8.0 * kf);
        c1 *= (odd_sq - 4.0) / (8.0 * kf);
        let t0 = c0 * pow * inv;
        let t1 = c1 * pow * inv;
        let tg = if k >= 2 { 2.0 * (c0 - c1) * pow } else { 0.0 };
        pow *= inv;

        let size = t0.abs().max(t1.abs());
        if size > prev {
            // Past the smallest term: optimal truncation, acceptable once the
            // omitted part is below the resolution of the leading 1.
            if prev <= OPTIMAL_TRUNCATION_FLOOR {
                return Ok(AsymptoticTails { i0, i1, gap });
            }
            return Err(crate::Error::NumericalFailure(format!(
                "asymptotic series diverged before converging at x = {x}"
            )));
        }
        prev = size;
        i0 += t0;
        i1 += t1;
        gap += tg;
        if size <= SERIES_TERM_FLOOR * 1e-2 * i0.abs().min(i1.abs())
            && tg.abs() <= SERIES_TERM_FLOOR * 1e-2 * gap.abs()
        {
            return Ok(AsymptoticTails { i0, i1, gap });
        }
    }
    Err(crate::Error::NumericalFailure(format!(
        "asymptotic series did not converge in {ASYMPTOTIC_MAX_TERMS} terms at x = {x}"
    )))
}

/// `I0(x)` over the full range `x >= 0`.
pub fn bessel_i0(x: f64) -> Result<BesselEval> {
    ensure!(x >= 0.0, Domain, "Bessel argument must be >= 0, got {x}");
    if x <= SERIES_CUTOFF {
        return bessel_i0_series(x);
    }
    let scaled = (1.0 + asymptotic_tails(x)?.i0) / (2.0 * PI * x).sqrt();
    Ok(BesselEval {
        value: scaled * x.exp(),
        scaled_value: scaled,
        method_used: BesselMethod::Asymptotic,
    })
}

/// `I1(x)` over the full range `x >= 0`.
pub fn bessel_i1(x: f64) -> Result<BesselEval> {
    ensure!(x >= 0.0, Domain, "Bessel argument must be >= 0, got {x}");
    if x <= SERIES_CUTOFF {
        return bessel_i1_series(x);
    }
    let scaled = (1.0 + asymptotic_tails(x)?.i1) / (2.0 * PI * x).sqrt();
    Ok(BesselEval {
        value: scaled * x.exp(),
        scaled_value: scaled,
        method_used: BesselMethod::Asymptotic,
    })
}

/// `log I0(kappa)` from the power series. Limited to `kappa <= SERIES_CUTOFF`.
pub fn log_i0_series(kappa: f64) -> Result<f64> {
    Ok(bessel_i0_series(kappa)?.value.ln())
}

/// `log I0(kappa) = kappa - log(2 pi kappa)/2 + log(bracket)`, with the
/// bracket summed to machine precision.
pub fn log_i0_asymptotic(kappa: f64) -> Result<f64> {
    let tails = asymptotic_tails(kappa)?;
    Ok(kappa - 0.5 * (2.0 * PI * kappa).ln() + tails.i0.ln_1p())
}

/// `log I0(kappa)` for any `kappa >= 0`, switching branches at
/// [`SERIES_CUTOFF`].
pub fn log_i0(kappa: f64) -> Result<f64> {
    ensure!(kappa >= 0.0, Domain, "log I0 needs kappa >= 0, got {kappa}");
    if kappa <= SERIES_CUTOFF {
        log_i0_series(kappa)
    } else {
        log_i0_asymptotic(kappa)
    }
}

/// `log(e^-kappa I0(kappa))`, finite for every `kappa >= 0`.
pub fn log_i0e(kappa: f64) -> Result<f64> {
    ensure!(kappa >= 0.0, Domain, "log I0 needs kappa >= 0, got {kappa}");
    if kappa <= SERIES_CUTOFF {
        Ok(log_i0_series(kappa)? - kappa)
    } else {
        let tails = asymptotic_tails(kappa)?;
        Ok(tails.i0.ln_1p() - 0.5 * (2.0 * PI * kappa).ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(n: u8) -> AsymptoticOrder {
        AsymptoticOrder::new(n).unwrap()
    }

    #[test]
    fn series_at_zero() {
        assert_eq!(bessel_i0_series(0.0).unwrap().value, 1.0);
        assert_eq!(bessel_i1_series(0.0).unwrap().value, 0.0);
    }

    #[test]
    fn i1_small_argument_slope() {
        let x = 1e-6;
        let v = bessel_i1_series(x).unwrap().value;
        assert!((v / x - 0.5).abs() <= 1e-10);
    }

    #[test]
    fn series_argument_checks() {
        assert!(matches!(
            bessel_i0_series(-1.0),
            Err(crate::Error::Domain(_))
        ));
        assert!(matches!(
            bessel_i1_series(30.5),
            Err(crate::Error::Range(_))
        ));
        assert!(matches!(log_i0(-0.1), Err(crate::Error::Domain(_))));
        assert!(AsymptoticOrder::new(4).is_err());
    }

    #[test]
    fn truncated_brackets() {
        assert_eq!(bessel_i0e_asymptotic(3.7, order(0)).unwrap(), 1.0);
        assert_eq!(bessel_i1e_asymptotic(3.7, order(0)).unwrap(), 1.0);
        assert_eq!(bessel_i0e_asymptotic(8.0, order(1)).unwrap(), 1.015625);
        assert_eq!(bessel_i1e_asymptotic(8.0, order(1)).unwrap(), 0.953125);
        assert!(bessel_i0e_asymptotic(0.0, order(2)).is_err());
        assert!(bessel_i1e_asymptotic(-2.0, order(2)).is_err());
    }

    #[test]
    fn tails_open_with_classic_coefficients() {
        let x = 1e6;
        let t = asymptotic_tails(x).unwrap();
        assert!((t.i0 * x - 0.125).abs() < 1e-6);
        assert!((t.i1 * x + 0.375).abs() < 1e-6);
        // 2x(S0 - S1) = 1 + (2 * 24/128)/x + ...
        assert!((t.gap * x - 0.375).abs() < 1e-6);
    }

    #[test]
    fn log_i0_at_zero_and_branches() {
        assert_eq!(log_i0(0.0).unwrap(), 0.0);
        let two = log_i0(2.0).unwrap();
        assert_eq!(two, bessel_i0_series(2.0).unwrap().value.ln());
        let s = log_i0_series(20.0).unwrap();
        let a = log_i0_asymptotic(20.0).unwrap();
        assert!((s - a).abs() <= 1e-12, "{s} vs {a}");
    }

    #[test]
    fn branches_agree_at_cutoff() {
        let x = SERIES_CUTOFF;
        let t = asymptotic_tails(x).unwrap();
        let lead = (2.0 * PI * x).sqrt();
        let s0 = bessel_i0_series(x).unwrap().scaled_value;
        let s1 = bessel_i1_series(x).unwrap().scaled_value;
        assert!(((1.0 + t.i0) / lead / s0 - 1.0).abs() < 1e-14);
        assert!(((1.0 + t.i1) / lead / s1 - 1.0).abs() < 1e-14);
        assert_eq!(bessel_i0(x).unwrap().method_used, BesselMethod::Series);
        assert_eq!(
            bessel_i0(x + 1e-9).unwrap().method_used,
            BesselMethod::Asymptotic
        );
        assert!((log_i0_series(x).unwrap() - log_i0_asymptotic(x).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn large_argument_scaled_form_stays_finite() {
        let e = bessel_i0(5000.0).unwrap();
        assert!(e.value.is_infinite());
        assert!(e.scaled_value.is_finite() && e.scaled_value > 0.0);
        assert!(log_i0(5000.0).unwrap().is_finite());
        assert!(log_i0e(5000.0).unwrap().is_finite());
    }

    #[test]
    fn i0_monotone_on_grid() {
        let vals: Vec<f64> = (0..=60)
            .map(|i| bessel_i0(0.5 * i as f64).unwrap().value)
            .collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]));
    }
}
