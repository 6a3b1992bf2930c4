use proptest::prelude::*;

use stirling_core::asympt_eval::{error_table, factorial_approx, reciprocal_factorial_approx, stirling_ratio};
use stirling_core::coeffs::{self, reciprocal_coeffs};
use stirling_core::io::{read_coeff_csv, write_coeff_csv};
use stirling_core::quadrature::{f_integral, g_integral, t_for_n};
use stirling_core::series::TruncSeries;
use stirling_core::{BigFloat, Method};

const P: u32 = 128;

fn method() -> impl Strategy<Value = Method> {
    prop::sample::select(Method::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn duality_is_an_involution(m in method(), k in 0usize..25) {
        let t = coeffs::compute(m, k);
        let r = reciprocal_coeffs(&t);
        prop_assert_eq!(&reciprocal_coeffs(&r), &t);
        prop_assert_eq!(&t.as_series() * &r.as_series(), TruncSeries::one(k));
    }

    #[test]
    fn coefficient_csv_round_trips(m in method(), k in 0usize..30, flip in any::<bool>()) {
        let mut t = coeffs::compute(m, k);
        if flip {
            t = reciprocal_coeffs(&t);
        }
        let mut buf = Vec::new();
        write_coeff_csv(&mut buf, &t, m.as_str()).unwrap();
        prop_assert_eq!(read_coeff_csv(buf.as_slice()).unwrap(), t);
    }

    #[test]
    fn scaled_error_is_abs_error_times_power(n in 1u64..500, order in 0usize..6) {
        let t = coeffs::compute(Method::Recurrence, 6);
        let row = &error_table(&t, &[n], &[order], P).unwrap()[0];
        let want = row.abs_error.to_f64() * (n as f64).powi(order as i32 + 1);
        prop_assert!((row.scaled_error.to_f64() - want).abs() <= 1e-12 * want.abs());
        prop_assert_eq!(&row.abs_error, &(&row.ratio - &row.partial).abs());
    }
}

/// `|n! approx * 1/n! approx - 1| * n^(N+1)` never grows as `n` doubles.
#[test]
fn numeric_duality_residual_is_bounded() {
    let t = coeffs::compute(Method::Recurrence, 8);
    let r = reciprocal_coeffs(&t);
    for order in 1..=8usize {
        let scaled: Vec<f64> = [10u64, 20, 40, 80]
            .iter()
            .map(|&n| {
                let p = factorial_approx(n, order, &t, 256).unwrap()
                    * reciprocal_factorial_approx(n, order, &r, 256).unwrap();
                (p - BigFloat::one(256)).abs().to_f64() * (n as f64).powi(order as i32 + 1)
            })
            .collect();
        assert!(
            scaled.iter().all(|&s| s <= scaled[0] * 1.001),
            "N = {order}: {scaled:?}"
        );
    }
}

#[test]
fn f_times_g_is_one() {
    for n in [1u64, 2, 4, 8, 16, 32, 64] {
        let t = t_for_n(n, P);
        let f = f_integral(&t, P, 1e-12).unwrap();
        let g = g_integral(&t, P, 1e-12).unwrap();
        let tol = f.err_estimate.to_f64() + g.err_estimate.to_f64() + 1e-12;
        let residual = (&f.value * &g.value - BigFloat::one(P)).abs().to_f64();
        assert!(residual <= tol, "n = {n}: {residual:e}");
    }
}

#[test]
fn halving_tol_never_hurts() {
    let t = t_for_n(3, P);
    let exact = stirling_ratio(3, P).unwrap();
    let mut prev = f64::INFINITY;
    let mut tol = 1e-4;
    while tol > 1e-16 {
        let diff = (&f_integral(&t, P, tol).unwrap().value - &exact).abs().to_f64();
        assert!(diff <= prev, "tol {tol:e}: {diff:e} > {prev:e}");
        prev = diff;
        tol /= 2.0;
    }
}

#[test]
fn f_decreases_to_one_as_t_shrinks() {
    let values: Vec<f64> = (1..=10)
        .rev()
        .map(|i| {
            f_integral(&BigFloat::from_f64(i as f64 / 10.0, P), P, 1e-14)
                .unwrap()
                .value
                .to_f64()
        })
        .collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
    assert!(values.iter().all(|&v| v > 1.0));
}
