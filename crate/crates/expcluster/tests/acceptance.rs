//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see the lines for passing criteria too).
//!
//! Every tolerance is pinned in code. Two criteria are known to fail against
//! exact computation and are kept failing on purpose rather than loosened;
//! their printed output carries the measured values (see the README section
//! on known-failing checks).

use expcluster::asymptotics::{
    geometric_divisor_correction, knopfmacher_log_c, solve_critical_root, Side,
};
use expcluster::cfp::{
    detailed_balance_residual, exact_measure, stationary_tv, CfpModel,
};
use expcluster::coeff::{
    brute_force_exact, brute_force_real, largest_cluster_cdf_grid, smallest_cluster_tail,
    CoefficientTable, KpJoint, KpMarginal, SizeWindow,
};
use expcluster::saddle::{llt_products, solve_sigma};
use expcluster::sequences::{ParameterFunction, SlowlyVarying};

struct Criterion {
    name: &'static str,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Criterion { name, failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, pass: bool, detail: String) {
        if pass {
            self.notes.push(detail);
        } else {
            self.failures.push(detail);
        }
    }

    fn finish(self) {
        let status = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("acceptance {:<28} {status}", self.name);
        for n in &self.notes {
            println!("    ok   {n}");
        }
        for f in &self.failures {
            println!("    FAIL {f}");
        }
        assert!(
            self.failures.is_empty(),
            "{}: {} check(s) failed: {:?}",
            self.name,
            self.failures.len(),
            self.failures
        );
    }
}

fn pf_matrix() -> Vec<(&'static str, ParameterFunction)> {
    vec![
        ("l=0.5", ParameterFunction::power_law(0.5, SlowlyVarying::constant(1.0).unwrap()).unwrap()),
        ("l=1", ParameterFunction::ones()),
        ("l=2", ParameterFunction::power_law(2.0, SlowlyVarying::constant(1.0).unwrap()).unwrap()),
    ]
}

fn windows() -> Vec<SizeWindow> {
    vec![
        SizeWindow::full(),
        SizeWindow::up_to(2).unwrap(),
        SizeWindow::at_least(2).unwrap(),
        SizeWindow::at_least(3).unwrap(),
    ]
}

#[test]
fn criterion_01_oracle_equivalence() {
    let mut c = Criterion::new("1 oracle equivalence");
    for (label, pf) in pf_matrix() {
        for w in windows() {
            let table = CoefficientTable::build(&pf, w, 20).unwrap();
            if pf.has_exact_form() {
                let table = table.with_exact(&pf).unwrap();
                let mut all_equal = true;
                for n in 0..=20usize {
                    let oracle = brute_force_exact(&pf, w, n).unwrap();
                    if table.exact(n).unwrap() != &oracle {
                        all_equal = false;
                        c.check(false, format!("{label} {w} n={n}: rational mismatch"));
                    }
                }
                if all_equal {
                    c.check(true, format!("{label} {w}: exact-rational equality, n <= 20"));
                }
            } else {
                let mut worst: f64 = 0.0;
                for n in 0..=20usize {
                    let oracle = brute_force_real(&pf, w, n).unwrap();
                    if oracle == 0.0 {
                        if table.log_c(n) != f64::NEG_INFINITY {
                            c.check(false, format!("{label} {w} n={n}: zero expected"));
                        }
                    } else {
                        worst = worst.max((table.c(n) / oracle - 1.0).abs());
                    }
                }
                c.check(
                    worst <= 1e-10,
                    format!("{label} {w}: max rel dev {worst:.2e} (10 significant digits)"),
                );
            }
        }
    }
    c.finish();
}

#[test]
fn criterion_02_local_limit_product() {
    let mut c = Criterion::new("2 local limit product");
    for (label, pf) in [
        ("l=1", ParameterFunction::ones()),
        ("l=2", ParameterFunction::power_law(2.0, SlowlyVarying::constant(1.0).unwrap()).unwrap()),
    ] {
        let values = llt_products(&pf, &[100, 1000, 10_000]).unwrap();
        let at_1e4 = values[2];
        c.check(
            (0.9..=1.1).contains(&at_1e4),
            format!("{label}: llt(1e4) = {at_1e4:.6} in [0.9, 1.1]"),
        );
        let devs: Vec<f64> = values.iter().map(|v| (v - 1.0).abs()).collect();
        c.check(
            devs[0] > devs[1] && devs[1] > devs[2],
            format!("{label}: |llt-1| strictly decreasing: {devs:.3?}"),
        );
    }
    c.finish();
}

#[test]
fn criterion_03_saddle_scaling() {
    let mut c = Criterion::new("3 saddle scaling");
    for (l, h) in [(0.5, 1.0), (1.0, 1.0), (2.0, 1.0), (1.0, 4.0)] {
        let sv = SlowlyVarying::constant(h).unwrap();
        let pf = ParameterFunction::power_law(l, sv).unwrap();
        let l1 = h.powf(1.0 / (l + 1.0));
        let const_part = expcluster::special::gamma(l + 1.0).powf(1.0 / (l + 1.0));
        let mut prev = f64::INFINITY;
        let mut dev_at_1e6 = f64::NAN;
        let mut monotone = true;
        for n in [1_000usize, 10_000, 100_000, 1_000_000] {
            let sp = solve_sigma(&pf, SizeWindow::full(), n, 1e-10).unwrap();
            let ratio = sp.sigma * (n as f64).powf(1.0 / (l + 1.0)) / (const_part * l1);
            let dev = (ratio - 1.0).abs();
            if dev > prev + 1e-9 {
                monotone = false;
            }
            prev = dev;
            dev_at_1e6 = dev;
        }
        c.check(
            dev_at_1e6 <= 0.05,
            format!("l={l}, L={h}: |ratio-1| = {dev_at_1e6:.2e} at n=1e6 (<= 0.05)"),
        );
        c.check(monotone, format!("l={l}, L={h}: deviation nonincreasing over n = 1e3..1e6"));
    }
    c.finish();
}

#[test]
fn criterion_04_knopfmacher_reproduction() {
    let mut c = Criterion::new("4 geometric-generator constant");
    // pipeline: p_j = 2^j -> divisor sum -> 1/q rescale -> table -> undo rescale
    let n_max = 10_000usize;
    let ln2 = std::f64::consts::LN_2;
    let log_p: Vec<f64> = (1..=n_max).map(|j| j as f64 * ln2).collect();
    let tamed = ParameterFunction::from_multiset_log(&log_p, n_max)
        .unwrap()
        .h_transform(0.5)
        .unwrap();
    let table = CoefficientTable::build_full(&tamed, n_max).unwrap();
    let mut ratios = Vec::new();
    for n in [1_000usize, 3_000, 10_000] {
        let ln_c = n as f64 * ln2 + table.log_c(n); // undo the 1/q rescale
        let pred = knopfmacher_log_c(1.0, 2.0, n as u64).unwrap();
        ratios.push((ln_c - pred).exp());
    }
    let at_1e4 = ratios[2];
    c.check(
        (0.9..=1.1).contains(&at_1e4),
        format!("ratio(1e4) = {at_1e4:.4} in [0.9, 1.1]"),
    );
    c.check(
        (ratios[0] - 1.0).abs() > (ratios[1] - 1.0).abs()
            && (ratios[1] - 1.0).abs() > (ratios[2] - 1.0).abs(),
        format!("trend toward 1 over n = 1e3, 3e3, 1e4: {ratios:.4?}"),
    );
    // diagnosis for the record: the exact pipeline converges to the
    // higher-divisor correction factor, not to 1
    let correction = geometric_divisor_correction(1.0, 2.0).unwrap().exp();
    println!(
        "    note: measured ratios {ratios:.4?} converge to the divisor-correction \
         factor {correction:.4}, which the packaged constant omits"
    );
    c.finish();
}

#[test]
fn criterion_05_threshold_law() {
    let mut c = Criterion::new("5 largest-cluster threshold");
    let pf = ParameterFunction::ones();
    let n = 10_000usize;
    let nf = n as f64;
    let r030 = nf.powf(0.30).floor() as usize;
    let r035 = nf.powf(0.35).floor() as usize;
    let r065 = nf.powf(0.65).floor() as usize;
    let r070 = nf.powf(0.70).floor() as usize;
    let cdf = largest_cluster_cdf_grid(&pf, n, &[r030, r035, r065, r070]).unwrap();
    c.check(
        cdf[0] <= 0.05,
        format!("P(largest <= n^0.3 = {r030}) = {:.3e} (<= 0.05)", cdf[0]),
    );
    c.check(
        cdf[3] >= 0.95,
        format!("P(largest <= n^0.7 = {r070}) = {:.4} (>= 0.95)", cdf[3]),
    );
    let bracket = cdf[2] - cdf[1];
    c.check(
        bracket >= 0.9,
        format!("P(n^0.35 < largest < n^0.65) = {bracket:.4} (>= 0.9)"),
    );
    c.finish();
}

#[test]
fn criterion_06_smallest_cluster_limit() {
    let mut c = Criterion::new("6 smallest-cluster limit");
    let pf = ParameterFunction::ones();
    for r in [2usize, 3] {
        let limit = (-(r as f64 - 1.0)).exp();
        let mut errs = Vec::new();
        for n in [1_000usize, 3_000, 10_000] {
            let tail = smallest_cluster_tail(&pf, n, r).unwrap();
            errs.push((tail - limit).abs());
        }
        c.check(
            errs[2] <= 0.05,
            format!("r={r}: |tail(1e4) - e^-{}| = {:.4} (<= 0.05)", r - 1, errs[2]),
        );
        c.check(
            errs[0] > errs[1] && errs[1] > errs[2],
            format!("r={r}: error decreasing over n = 1e3, 3e3, 1e4: {errs:.4?}"),
        );
    }
    c.finish();
}

#[test]
fn criterion_07_poisson_independence() {
    let mut c = Criterion::new("7 factorised count limits");
    let pf = ParameterFunction::ones();
    let n = 10_000usize;
    let e1 = (-1.0f64).exp();
    let marginal = KpMarginal::new(&pf, n, 1).unwrap();
    let mut worst: f64 = 0.0;
    for k in 0..=5usize {
        let mut limit = e1;
        for i in 1..=k {
            limit /= i as f64;
        }
        worst = worst.max((marginal.prob(k) - limit).abs());
    }
    c.check(worst <= 0.01, format!("max_k |P(K_1=k) - e^-1/k!| = {worst:.4} (k <= 5, <= 0.01)"));

    let joint = KpJoint::new(&pf, n, &[1, 2]).unwrap();
    let j00 = joint.prob(&[0, 0]).unwrap();
    let gap = (j00 - (-2.0f64).exp()).abs();
    c.check(gap <= 0.02, format!("|P(K_1=0, K_2=0) - e^-2| = {gap:.4} (<= 0.02)"));

    let table = CoefficientTable::build_full(&pf, n).unwrap();
    let cov = table.kp_covariance(&pf, n, 1, 2).unwrap();
    c.check(cov.abs() <= 0.01, format!("|cov(K_1, K_2)| = {:.2e} (<= 0.01)", cov.abs()));
    c.finish();
}

#[test]
fn criterion_08_cfp_stationarity() {
    let mut c = Criterion::new("8 chain stationarity");
    let pf = ParameterFunction::ones();
    for seed in [1u64, 2, 3] {
        let tv = stationary_tv(&pf, 10, 1_000_000, seed, 0.1).unwrap();
        c.check(tv < 0.05, format!("seed {seed}: TV(empirical, exact) = {tv:.4} (< 0.05)"));
    }
    let matrix = [
        ("l=1", ParameterFunction::ones()),
        ("l=2", ParameterFunction::power_law(2.0, SlowlyVarying::constant(1.0).unwrap()).unwrap()),
        ("l=0.5 L=2", ParameterFunction::power_law(0.5, SlowlyVarying::constant(2.0).unwrap()).unwrap()),
        ("h=1/2", ParameterFunction::ones().h_transform(0.5).unwrap()),
    ];
    let mut worst: f64 = 0.0;
    for (_, pf) in &matrix {
        for n in [6usize, 9, 12] {
            let model = CfpModel::reversible(pf, n).unwrap();
            let measure = exact_measure(pf, n).unwrap();
            worst = worst.max(detailed_balance_residual(&model, &measure).unwrap());
        }
    }
    c.check(worst <= 1e-10, format!("max balance residual over matrix = {worst:.2e} (<= 1e-10)"));

    let mut perturbed = CfpModel::reversible(&pf, 10).unwrap();
    perturbed.perturb_psi(1, 2, 1.01);
    let measure = exact_measure(&pf, 10).unwrap();
    let r = detailed_balance_residual(&perturbed, &measure).unwrap();
    c.check(r > 1e-4, format!("negative control flagged: residual {r:.3e} after 1% rate skew"));
    c.finish();
}

#[test]
fn criterion_09_rescaling_invariance() {
    let mut c = Criterion::new("9 h^j rescaling invariance");
    let base_pf = ParameterFunction::ones();
    for &h in &[0.5, 2.0] {
        let scaled_pf = base_pf.h_transform(h).unwrap();
        let mut worst: f64 = 0.0;
        for n in 2..=12usize {
            let base = exact_measure(&base_pf, n).unwrap();
            let scaled = exact_measure(&scaled_pf, n).unwrap();
            for (st, &p) in base.states().iter().zip(base.probs()) {
                worst = worst.max((p - scaled.prob(st).unwrap()).abs());
            }
        }
        c.check(
            worst <= 1e-10,
            format!("h={h}: max measure deviation over n <= 12 = {worst:.2e} (<= 1e-10)"),
        );
    }
    let n_max = 500usize;
    let base = CoefficientTable::build_full(&base_pf, n_max).unwrap();
    for &h in &[0.5, 2.0] {
        let scaled = CoefficientTable::build_full(&base_pf.h_transform(h).unwrap(), n_max).unwrap();
        let mut worst_scaled: f64 = 0.0;
        for n in 1..=n_max {
            let drift = (scaled.log_c(n) - n as f64 * h.ln() - base.log_c(n)).abs();
            worst_scaled = worst_scaled.max(drift / n as f64);
        }
        c.check(
            worst_scaled <= 1e-9,
            format!("h={h}: max |log drift|/n over n <= 500 = {worst_scaled:.2e} (<= 1e-9)"),
        );
    }
    c.finish();
}

#[test]
fn criterion_10_critical_roots() {
    let mut c = Criterion::new("10 critical root equation");
    let mut worst: f64 = 0.0;
    for &l in &[0.5, 1.0, 2.0] {
        for &d in &[0.1, 1.0, 10.0] {
            for side in [Side::Lower, Side::Upper] {
                let root = solve_critical_root(l, d, side).unwrap();
                worst = worst.max(root.residual);
            }
        }
    }
    c.check(worst <= 1e-10, format!("max residual over grid = {worst:.2e} (<= 1e-10)"));
    let root = solve_critical_root(1.0, 1e6, Side::Lower).unwrap();
    c.check(
        (root.a - 1.0).abs() <= 1e-3,
        format!("large-d continuity: A(l=1, d=1e6) = {:.6} within 1e-3 of 1", root.a),
    );
    c.finish();
}
