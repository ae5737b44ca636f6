//! Cross-module pipelines: quantities that can be computed by two different
//! routes must agree, and corrected closed forms must converge.

use expcluster::asymptotics::{
    c_log_asymptotic, geometric_divisor_correction, knopfmacher_log_c, limit_d, sigma_asymptotic,
    Side,
};
use expcluster::coeff::{smallest_cluster_tail, CoefficientTable, KpMarginal, SizeWindow};
use expcluster::saddle::{llt_product_with_table, solve_sigma};
use expcluster::sequences::{ParameterFunction, SlowlyVarying};

#[test]
fn geometric_generator_pipeline_converges_with_correction() {
    // p_j = 2^j through the divisor sum; with the higher-divisor correction
    // applied the predicted constant is right and the ratio drifts to 1
    let n_max = 10_000usize;
    let ln2 = std::f64::consts::LN_2;
    let log_p: Vec<f64> = (1..=n_max).map(|j| j as f64 * ln2).collect();
    let tamed = ParameterFunction::from_multiset_log(&log_p, n_max)
        .unwrap()
        .h_transform(0.5)
        .unwrap();
    let table = CoefficientTable::build_full(&tamed, n_max).unwrap();
    let ln_corr = geometric_divisor_correction(1.0, 2.0).unwrap();
    let mut prev_dev = f64::INFINITY;
    for n in [1_000usize, 3_000, 10_000] {
        let ln_c = n as f64 * ln2 + table.log_c(n);
        let pred = knopfmacher_log_c(1.0, 2.0, n as u64).unwrap() + ln_corr;
        let ratio = (ln_c - pred).exp();
        let dev = (ratio - 1.0).abs();
        assert!(dev < prev_dev, "no convergence at n={n}: ratio {ratio}");
        prev_dev = dev;
        if n == 10_000 {
            assert!((0.9..=1.1).contains(&ratio), "corrected ratio {ratio}");
        }
    }
}

#[test]
fn smallest_cluster_tail_equals_excluded_size_marginal_at_r2() {
    // window [2, n] and "no components of size 1" are the same event,
    // computed through different tables
    let pf = ParameterFunction::ones();
    for n in [50usize, 500] {
        let tail = smallest_cluster_tail(&pf, n, 2).unwrap();
        let marginal = KpMarginal::new(&pf, n, 1).unwrap().prob(0);
        assert!(
            (tail - marginal).abs() <= 1e-12,
            "n={n}: {tail} vs {marginal}"
        );
    }
}

#[test]
fn c_log_prediction_gap_is_exactly_the_llt_product() {
    let pf = ParameterFunction::ones();
    let n = 800usize;
    let table = CoefficientTable::build_full(&pf, n).unwrap();
    let pred = c_log_asymptotic(&pf, SizeWindow::full(), n).unwrap();
    let llt = llt_product_with_table(&pf, &table, n).unwrap();
    // ln c - pred = ln(llt)
    let gap = table.log_c(n) - pred;
    assert!((gap - llt.ln()).abs() <= 1e-9, "gap {gap} vs ln llt {}", llt.ln());
}

#[test]
fn closed_form_sigma_tracks_solver_in_supercritical_regime() {
    // ratio |pred/exact - 1| <= 5% at n = 1e6 and improving with n
    for (l, h) in [(0.5, 1.0), (1.0, 1.0), (2.0, 1.0), (1.0, 4.0)] {
        let sv = SlowlyVarying::constant(h).unwrap();
        let pf = ParameterFunction::power_law(l, sv.clone()).unwrap();
        let mut prev = f64::INFINITY;
        for n in [1_000usize, 1_000_000] {
            let pred = sigma_asymptotic(l, &sv, 1.0, Side::Lower, n as u64).unwrap();
            let exact = solve_sigma(&pf, SizeWindow::full(), n, 1e-10).unwrap().sigma;
            let dev = (pred / exact - 1.0).abs();
            assert!(dev <= prev + 1e-12, "l={l} h={h} n={n}");
            prev = dev;
        }
        assert!(prev <= 0.05, "l={l} h={h}: dev {prev}");
    }
}

#[test]
fn threshold_consistency_between_regime_and_tables() {
    // finite-n CDF orders the same way the limit law does, across the
    // critical exponent, even where the limit itself is far away
    let pf = ParameterFunction::ones();
    let n = 2_000usize;
    let nf = n as f64;
    let low = expcluster::coeff::largest_cluster_cdf(&pf, n, nf.powf(0.3) as usize).unwrap();
    let high = expcluster::coeff::largest_cluster_cdf(&pf, n, nf.powf(0.9) as usize).unwrap();
    assert!(low < 0.05);
    assert!(high > 0.9);
    assert_eq!(
        limit_d(1.0, 1.0, 0.3, Side::Lower, None, None).unwrap().as_f64(),
        0.0
    );
    assert_eq!(
        limit_d(1.0, 1.0, 0.9, Side::Lower, None, None).unwrap().as_f64(),
        1.0
    );
}

#[test]
fn successive_coefficient_ratio_drifts_to_one() {
    // c_n / c_{n+1} within 10% of 1 at n = 1e3 and 4% at n = 1e4
    let table = CoefficientTable::build_full(&ParameterFunction::ones(), 10_001).unwrap();
    let at = |n: usize| (table.log_c(n) - table.log_c(n + 1)).exp();
    let r3 = at(1_000);
    let r4 = at(10_000);
    assert!((r3 - 1.0).abs() <= 0.10, "c_1000/c_1001 = {r3}");
    assert!((r4 - 1.0).abs() <= 0.04, "c_10000/c_10001 = {r4}");
    assert!((r4 - 1.0).abs() < (r3 - 1.0).abs());
}

#[test]
fn fixed_cut_tail_approaches_its_limit_law() {
    let pf = ParameterFunction::ones();
    let lim = limit_d(1.0, 1.0, 0.0, Side::Upper, Some(3), Some(&pf))
        .unwrap()
        .as_f64();
    let mut prev = f64::INFINITY;
    for n in [200usize, 800, 2_000] {
        let tail = smallest_cluster_tail(&pf, n, 3).unwrap();
        let dev = (tail - lim).abs();
        assert!(dev < prev, "n={n}");
        prev = dev;
    }
    assert!(prev < 0.01);
}
