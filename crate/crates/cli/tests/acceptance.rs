//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use circ_bridge::bridge_approx::*;
use circ_bridge::circular_dist::*;
use circ_bridge::oracle::*;
use circ_bridge::special_fn::*;

/// A later max-normalized residual may exceed the one before it by at most
/// this factor and still count as "no growth".
const NO_GROWTH_FACTOR: f64 = 1.05;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn merge(parts: Vec<Outcome>) -> Outcome {
    let ok = parts.iter().all(|p| p.ok);
    let detail = parts
        .iter()
        .map(|p| format!("{}{}", if p.ok { "" } else { "!! " }, p.detail))
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { ok, detail }
}

fn doubling(lo: f64, hi: f64) -> Vec<f64> {
    let mut v = vec![lo];
    while *v.last().unwrap() < hi {
        v.push(v.last().unwrap() * 2.0);
    }
    v
}

fn slope_within(points: &[(f64, f64)], target: f64, tol: f64, label: &str) -> Outcome {
    match slope_fit_above_floor(points, RESIDUAL_FLOOR) {
        Ok(s) => check((s - target).abs() <= tol, format!("{label} slope {s:.4}")),
        Err(e) => check(false, format!("{label}: {e}")),
    }
}

fn no_growth(values: &[f64], label: &str) -> Outcome {
    let ok = values.windows(2).all(|w| w[1] <= w[0] * NO_GROWTH_FACTOR);
    let shown: Vec<String> = values.iter().map(|v| format!("{v:.4}")).collect();
    check(ok, format!("{label} max normalized [{}]", shown.join(", ")))
}

fn criterion_1() -> Outcome {
    let pts: Vec<(f64, f64)> = doubling(16.0, 4096.0)
        .into_iter()
        .map(|k| {
            let exact = circular_variance_exact(k).unwrap().value;
            (k, (exact - circular_variance_expansion(k).unwrap()).abs())
        })
        .collect();
    slope_within(&pts, -4.0, 0.3, "variance")
}

fn criterion_2() -> Outcome {
    let order = AsymptoticOrder::MAX;
    let mut i0_pts = Vec::new();
    let mut i1_pts = Vec::new();
    for k in doubling(32.0, 512.0) {
        let lead = (2.0 * PI * k).sqrt();
        let i0 = bessel_i0e_integral(k, 1e-13).unwrap();
        let i1 = bessel_i1e_integral(k, 1e-13 * i0).unwrap();
        i0_pts.push((
            k,
            (bessel_i0e_asymptotic(k, order).unwrap() / (lead * i0) - 1.0).abs(),
        ));
        i1_pts.push((
            k,
            (bessel_i1e_asymptotic(k, order).unwrap() / (lead * i1) - 1.0).abs(),
        ));
    }
    let mut worst = 0.0_f64;
    for k in [0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0] {
        let series = bessel_i0_series(k).unwrap().value;
        let integral = bessel_i0_integral(k, 1e-13).unwrap();
        worst = worst.max((series / integral - 1.0).abs());
    }
    merge(vec![
        slope_within(&i0_pts, -4.0, 0.4, "I0"),
        slope_within(&i1_pts, -4.0, 0.4, "I1"),
        check(worst <= 1e-12, format!("series vs integral {worst:.1e}")),
    ])
}

fn fixed_slopes(target: ScanTarget, dts: &[f64]) -> Vec<Outcome> {
    let quad = Quadrature::default();
    let kappas = doubling(32.0, 2048.0);
    dts.iter()
        .map(|&dt| {
            let pts = fixed_point_residuals(&quad, target, &kappas, dt).unwrap();
            slope_within(&pts, -3.0, 0.3, &format!("dt={dt}"))
        })
        .collect()
}

fn criterion_3() -> Outcome {
    let mut parts = fixed_slopes(ScanTarget::LogRatio, &[0.0, 0.5, 1.0, 2.0]);
    let scan = residual_scan(
        &BulkSpec::fixed(0.5).unwrap(),
        &[64.0, 256.0, 1024.0],
        201,
        ScanTarget::LogRatio,
    )
    .unwrap();
    parts.push(no_growth(&scan.max_normalized_residual, "eta=0.5"));
    merge(parts)
}

fn criterion_4() -> Outcome {
    let mut parts = fixed_slopes(ScanTarget::Ratio, &[0.0, 0.5, 1.0, 2.0]);
    let scan = residual_scan(
        &BulkSpec::shrunken(1.0).unwrap(),
        &[64.0, 256.0, 1024.0],
        201,
        ScanTarget::Ratio,
    )
    .unwrap();
    parts.push(no_growth(&scan.max_normalized_residual, "eta~=1"));
    merge(parts)
}

fn criterion_5() -> Outcome {
    let mut parts = fixed_slopes(ScanTarget::Cdf, &[0.5, 1.0, 2.0]);
    let mut worst_mid = 0.0_f64;
    let mut exact_half = true;
    for k in doubling(32.0, 2048.0) {
        let p = VonMisesParams::new(SCAN_MU, k).unwrap();
        worst_mid =
            worst_mid.max((vm_cdf_quadrature(&p, SCAN_MU, SCAN_CDF_TOL).unwrap() - 0.5).abs());
        exact_half &= cdf_expansion(0.0, k).unwrap().value == 0.5;
    }
    parts.push(check(
        worst_mid <= 1e-10,
        format!("|F(mu) - 1/2| {worst_mid:.1e}"),
    ));
    parts.push(check(exact_half, "expansion at 0 is 1/2"));
    merge(parts)
}

fn criterion_6() -> Outcome {
    let pts: Vec<(f64, f64)> = doubling(64.0, 4096.0)
        .into_iter()
        .map(|k| {
            let exact = normalization_log_constant(k, NormalizationMode::Exact).unwrap();
            let approx = normalization_log_constant(k, NormalizationMode::Expansion).unwrap();
            (k, (exact - approx).abs())
        })
        .collect();
    slope_within(&pts, -4.0, 0.4, "normalization")
}

fn criterion_7() -> Outcome {
    let gaps: Vec<f64> = [4.0, 16.0, 64.0, 256.0]
        .iter()
        .map(|&k| max_matched_gap(0.0, k, 1001).unwrap())
        .collect();
    let ok = gaps.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = gaps.iter().map(|g| format!("{g:.3e}")).collect();
    check(ok, format!("sup gaps [{}]", shown.join(", ")))
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0_f64;
    for j in [0u32, 2, 4, 6, 8] {
        for z in [-2.0, 0.0, 1.0, 3.0] {
            let quad = adaptive_quadrature(|y| y.powi(j as i32) * normal_pdf(y), z, 40.0, 1e-11)
                .unwrap()
                .value;
            worst = worst.max((upper_incomplete_moment(j, z).unwrap() - quad).abs());
        }
    }
    let at_zero = [(2u32, 0.5), (4, 1.5), (6, 7.5), (8, 52.5)]
        .iter()
        .all(|&(j, v)| (upper_incomplete_moment(j, 0.0).unwrap() - v).abs() <= 1e-14 * v);
    merge(vec![
        check(
            worst <= 1e-10,
            format!("closed form vs quadrature {worst:.1e}"),
        ),
        check(at_zero, "values at 0"),
    ])
}

fn criterion_9() -> Outcome {
    let args = [
        "error-scan",
        "--target",
        "log_ratio",
        "--kappa-min",
        "32",
        "--kappa-max",
        "2048",
        "--steps",
        "7",
        "--eta",
        "0.5",
        "--grid",
        "201",
    ];
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_circ-bridge"))
            .args(args)
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    let text = String::from_utf8_lossy(&a.stdout);
    let slope = text
        .lines()
        .find(|l| l.starts_with("slope,"))
        .and_then(|l| l.rsplit(',').next())
        .and_then(|s| s.parse::<f64>().ok());
    merge(vec![
        check(
            a.status.code() == Some(0) && b.status.code() == Some(0),
            "exit 0",
        ),
        check(
            !a.stdout.is_empty() && a.stdout == b.stdout,
            "byte-identical output",
        ),
        match slope {
            Some(s) => check((-3.3..=-2.7).contains(&s), format!("reported slope {s:.4}")),
            None => check(false, "no slope record"),
        },
    ])
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "1 variance expansion order",
            criterion_1,
            Some(Duration::from_secs(1)),
        ),
        (
            "2 Bessel asymptotics",
            criterion_2,
            Some(Duration::from_secs(1)),
        ),
        (
            "3 log-ratio expansion",
            criterion_3,
            Some(Duration::from_secs(5)),
        ),
        (
            "4 ratio expansion",
            criterion_4,
            Some(Duration::from_secs(5)),
        ),
        (
            "5 distribution function expansion",
            criterion_5,
            Some(Duration::from_secs(10)),
        ),
        ("6 normalization constant", criterion_6, None),
        ("7 wrapped-normal limit", criterion_7, None),
        ("8 incomplete normal moments", criterion_8, None),
        ("9 CLI determinism", criterion_9, None),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let mut out = run();
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed >= limit {
                out.ok = false;
                out.detail.push_str(&format!("; !! runtime over {limit:?}"));
            }
        }
        if !out.ok {
            failed += 1;
        }
        println!(
            "criterion {name}: {} ({}; {:.1} ms)",
            if out.ok { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64() * 1e3
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
