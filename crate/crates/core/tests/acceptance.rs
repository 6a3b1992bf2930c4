//! Exit criteria. Each test prints one PASS/FAIL line straight to stderr
//! (bypassing the test harness capture) and then asserts.

use std::io::Write;
use std::time::{Duration, Instant};

use stirling_core::asympt_eval::{
    error_table, factorial_approx, optimal_truncation, reciprocal_factorial_approx, stirling_ratio,
};
use stirling_core::coeffs::{
    self, convolution_check, egf_growth, log_coefficient, log_series_coeffs, reciprocal_coeffs,
};
use stirling_core::exactnum::{int, ratio};
use stirling_core::quadrature::{bound_checks, f_integral, g_integral, t_for_n, BoundGrid};
use stirling_core::{BigFloat, Expansion, Method, Rational};

fn report(id: u32, name: &str, limit: Duration, body: impl FnOnce() -> (bool, String)) {
    let start = Instant::now();
    let (ok, detail) = body();
    let elapsed = start.elapsed();
    let in_time = elapsed < limit;
    let passed = ok && in_time;
    let line = format!(
        "{} criterion {id:>2} {name}: {detail} [{:.2} s, limit {} s]",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    let _ = writeln!(std::io::stderr(), "{line}");
    assert!(passed, "{line}");
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn expected_a0_a5() -> Vec<Rational> {
    vec![
        int(1),
        ratio(1, 12),
        ratio(1, 288),
        ratio(-139, 51840),
        ratio(-571, 2488320),
        ratio(163879, 209018880),
    ]
}

#[test]
fn criterion_01_coefficient_reproduction() {
    report(1, "coefficient reproduction", secs(1), || {
        let expected = expected_a0_a5();
        let bad: Vec<&str> = Method::ALL
            .iter()
            .filter(|&&m| coeffs::compute(m, 5).values != expected)
            .map(|m| m.as_str())
            .collect();
        (
            bad.is_empty(),
            format!("a_0..a_5 exact for all three methods; mismatches {bad:?}"),
        )
    });
}

#[test]
fn criterion_02_cross_method_agreement() {
    report(2, "cross-method agreement", secs(10), || {
        let tables: Vec<_> = Method::ALL.iter().map(|&m| coeffs::compute(m, 20)).collect();
        let ok = tables.windows(2).all(|w| w[0].values == w[1].values);
        (ok, format!("K = 20, a_20 = {}", tables[0].values[20]))
    });
}

#[test]
fn criterion_03_convolution_identity() {
    report(3, "convolution identity", secs(1), || {
        let t = coeffs::compute(Method::Recurrence, 20);
        let s = convolution_check(&t, 20).unwrap();
        let nonzero: Vec<usize> = (1..=20).filter(|&m| s[m] != int(0)).collect();
        (
            s[0] == int(1) && nonzero.is_empty(),
            format!("s_0 = {}, nonzero s_m at m = {nonzero:?}", s[0]),
        )
    });
}

#[test]
fn criterion_04_odd_powers_logarithm() {
    report(4, "odd-powers-only logarithm", secs(1), || {
        let t = coeffs::compute(Method::Recurrence, 20);
        let log = log_series_coeffs(&t, 20).unwrap();
        let even_bad: Vec<usize> = (1..=10).map(|j| 2 * j).filter(|&d| log[d] != int(0)).collect();
        let odd_bad: Vec<u32> = (1..=10)
            .filter(|&j| log[2 * j as usize - 1] != log_coefficient(j))
            .collect();
        let ok = even_bad.is_empty() && odd_bad.is_empty();
        (
            ok,
            format!("x^2..x^20 nonzero at {even_bad:?}; x^(2j-1) mismatches at j = {odd_bad:?}"),
        )
    });
}

#[test]
fn criterion_05_reciprocal_expansion() {
    report(5, "reciprocal expansion", secs(10), || {
        let prec = 256;
        let t = coeffs::compute(Method::Recurrence, 8);
        let flipped = reciprocal_coeffs(&t);
        let table_ok = flipped.expansion == Expansion::Reciprocal
            && flipped
                .values
                .iter()
                .enumerate()
                .all(|(k, b)| *b == if k % 2 == 0 { t.values[k].clone() } else { -&t.values[k] })
            && t.as_series().recip().unwrap() == flipped.as_series();

        let ns = [10u64, 20, 40, 80];
        let mut bands = Vec::new();
        for order in 0..=8usize {
            let scaled: Vec<f64> = ns
                .iter()
                .map(|&n| {
                    let p = factorial_approx(n, order, &t, prec).unwrap()
                        * reciprocal_factorial_approx(n, order, &flipped, prec).unwrap();
                    let nn = BigFloat::from_i64(n as i64, prec);
                    let mut s = (p - BigFloat::one(prec)).abs();
                    for _ in 0..=order {
                        s = s * nn.clone();
                    }
                    s.to_f64()
                })
                .collect();
            let max = scaled.iter().cloned().fold(0.0, f64::max);
            let min = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
            bands.push((order, max / min));
        }
        let outside: Vec<usize> = bands
            .iter()
            .filter(|(_, r)| r.is_nan() || *r >= 4.0)
            .map(|(o, _)| *o)
            .collect();
        let ratios: Vec<String> = bands.iter().map(|(o, r)| format!("N={o}:{r:.3}")).collect();
        (
            table_ok && outside.is_empty(),
            format!(
                "sign-flipped table {}; max/min of scaled product residual {}; outside factor-4 band at N = {outside:?}",
                if table_ok { "ok" } else { "WRONG" },
                ratios.join(" ")
            ),
        )
    });
}

#[test]
fn criterion_06_asymptotic_contract() {
    report(6, "asymptotic-series contract", secs(30), || {
        let t = coeffs::compute(Method::Recurrence, 4);
        let ns = [10u64, 20, 40, 80, 160];
        let orders = [0usize, 1, 2, 3];
        let rows = error_table(&t, &ns, &orders, 256).unwrap();
        let mut ok = true;
        let mut parts = Vec::new();
        for &order in &orders {
            let scaled: Vec<f64> = rows
                .iter()
                .filter(|r| r.order == order)
                .map(|r| r.scaled_error.to_f64())
                .collect();
            let max = scaled.iter().cloned().fold(0.0, f64::max);
            let min = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
            let target = BigFloat::from_rational(&t.values[order + 1], 64).abs().to_f64();
            let rel = (scaled[4] - target).abs() / target;
            ok &= max / min < 4.0 && rel <= 0.25;
            parts.push(format!(
                "N={order}: band {:.3}, n=160 off |a_N+1| by {:.2}%",
                max / min,
                100.0 * rel
            ));
        }
        (ok, parts.join("; "))
    });
}

#[test]
fn criterion_07_divergence() {
    report(7, "divergence behavior", secs(5), || {
        let t = coeffs::compute(Method::Recurrence, 10);
        let at1 = optimal_truncation(&t, 1, 256).unwrap();
        let at100 = optimal_truncation(&t, 100, 256).unwrap();
        let ok = !at1.is_strictly_decreasing() && at100.is_strictly_decreasing();
        (
            ok,
            format!(
                "n=1 best N = {} (min error {:.3e}), n=100 strictly decreasing = {}",
                at1.best_order,
                at1.min_error.to_f64(),
                at100.is_strictly_decreasing()
            ),
        )
    });
}

const QUAD_NS: [u64; 7] = [1, 2, 4, 8, 16, 32, 64];
const QUAD_PREC: u32 = 128;

#[test]
fn criterion_08_f_identity() {
    report(8, "f-identity", secs(60), || {
        let mut worst = 0.0f64;
        for n in QUAD_NS {
            let r = f_integral(&t_for_n(n, QUAD_PREC), QUAD_PREC, 1e-10).unwrap();
            let exact = stirling_ratio(n, QUAD_PREC).unwrap();
            worst = worst.max((&r.value - &exact).abs().to_f64());
        }
        (
            worst <= 1e-9,
            format!("n in {QUAD_NS:?}, worst |f - F(n)| = {worst:.3e} (<= 1e-9)"),
        )
    });
}

#[test]
fn criterion_09_g_identity() {
    report(9, "g-identity", secs(60), || {
        let mut worst = 0.0f64;
        let mut worst_imag = 0.0f64;
        for n in QUAD_NS {
            let r = g_integral(&t_for_n(n, QUAD_PREC), QUAD_PREC, 1e-10).unwrap();
            let exact = BigFloat::one(QUAD_PREC) / stirling_ratio(n, QUAD_PREC).unwrap();
            worst = worst.max((&r.value - &exact).abs().to_f64());
            worst_imag = worst_imag.max(r.imag.abs().to_f64());
        }
        (
            worst <= 1e-9 && worst_imag <= 1e-10,
            format!("worst |g - 1/F(n)| = {worst:.3e} (<= 1e-9), worst |Im| = {worst_imag:.3e} (<= 1e-10)"),
        )
    });
}

#[test]
fn criterion_10_bound_spot_checks() {
    report(10, "bound spot-checks", secs(10), || {
        let grid = BoundGrid::standard();
        assert_eq!(grid.reflection_tol, 1e-20);
        let r = bound_checks(&grid, 128).unwrap();
        let parts: Vec<String> = r
            .checks
            .iter()
            .map(|c| {
                format!(
                    "{} {} ({:.2e})",
                    c.name,
                    if c.passed { "ok" } else { "VIOLATED" },
                    c.worst_margin
                )
            })
            .collect();
        (r.all_passed(), parts.join(", "))
    });
}

/// Observed sup of `(|a_k| / k!)^(1/k)` over `1 <= k <= 40`, attained at
/// `k = 39`. The limit as `k -> oo` is `1/(2 pi)`.
const EGF_OBSERVED_SUP: f64 = 0.14069383983385783;
const EGF_BOUND: f64 = 0.1407;

#[test]
fn criterion_11_egf_growth() {
    report(11, "EGF growth diagnostic", secs(30), || {
        let r = egf_growth(&coeffs::compute(Method::Recurrence, 40));
        let (k, sup) = r
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |acc, (i, &v)| if v > acc.1 { (i + 1, v) } else { acc });
        let ok = sup <= EGF_BOUND && (sup - EGF_OBSERVED_SUP).abs() < 1e-12 && sup < 1.0 / (2.0 * std::f64::consts::PI);
        (
            ok,
            format!("sup_(k<=40) r_k = {sup:.17} at k = {k} (bound {EGF_BOUND}, 1/(2 pi) = 0.159155)"),
        )
    });
}
