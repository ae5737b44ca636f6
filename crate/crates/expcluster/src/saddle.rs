//! The tilting (free-parameter) equation and its exact finite-`n` moments.
//!
//! Writing `X_j / j ~ Poisson(a_j e^{-sigma j})` for `j` in a size window,
//! the window sum `Y = sum X_j` has mean `M(sigma) = sum j a_j e^{-sigma j}`,
//! variance `B^2 = sum j^2 a_j e^{-sigma j}` and third central moment
//! `rho = sum j^3 a_j e^{-sigma j}`. Choosing `sigma` so that `M(sigma) = n`
//! makes `n` the most probable total mass; `M` is strictly decreasing in
//! `sigma`, so the root is unique and bracketing cannot fail.
//!
//! [`llt_product`] combines a solved tilt with a coefficient table into
//! `c_n exp(-S(e^{-sigma}) - n sigma) * sqrt(2 pi B^2)`, which tends to 1
//! exactly when the normal local limit behaviour holds — the strongest
//! end-to-end identity in the crate.

use crate::coeff::{CoefficientTable, SizeWindow};
use crate::logspace::pairwise_sum;
use crate::sequences::ParameterFunction;
use crate::{Error, Result};

/// Default relative residual `|M(sigma) - n| / n` for the solver.
pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// `sigma * cap` must reach this before an unbounded window may be truncated
/// (relative tail `e^{-40}` is far below every tolerance in use).
const TAIL_EXPONENT_MIN: f64 = 40.0;

/// A solved tilt for one `(window, n)` pair.
#[derive(Clone, Copy, Debug)]
pub struct SaddlePoint {
    /// Root of `M(sigma) = n`; either sign.
    pub sigma: f64,
    /// `M(sigma)` as evaluated at the root.
    pub mean: f64,
    /// `B^2`.
    pub variance: f64,
    /// `rho`.
    pub third_moment: f64,
    /// Window actually summed, clamped.
    pub window: (usize, usize),
    /// Target total mass.
    pub n: usize,
}

impl SaddlePoint {
    /// `rho / B^3`; vanishes when normal local limit behaviour sets in.
    pub fn lyapunov_ratio(&self) -> f64 {
        self.third_moment / self.variance.powf(1.5)
    }
}

/// Pairwise sums of the first three tilted moments in one pass.
fn tilted_moments3(pf: &ParameterFunction, lo: usize, hi: usize, sigma: f64) -> (f64, f64, f64) {
    // terms grow with j when sigma < 0: sum those largest-first
    let descending = sigma < 0.0;
    let term = |j: usize| {
        let jf = j as f64;
        let t = (pf.log_a(j) - sigma * jf).exp();
        jf * t
    };
    let m = pairwise_sum(lo, hi, descending, &term);
    let b2 = pairwise_sum(lo, hi, descending, &|j| {
        let jf = j as f64;
        jf * jf * (pf.log_a(j) - sigma * jf).exp()
    });
    let rho = pairwise_sum(lo, hi, descending, &|j| {
        let jf = j as f64;
        jf * jf * jf * (pf.log_a(j) - sigma * jf).exp()
    });
    (m, b2, rho)
}

fn mean_only(pf: &ParameterFunction, lo: usize, hi: usize, sigma: f64) -> f64 {
    let descending = sigma < 0.0;
    pairwise_sum(lo, hi, descending, &|j| {
        let jf = j as f64;
        jf * (pf.log_a(j) - sigma * jf).exp()
    })
}

/// `S(e^{-sigma}) = sum_{j=lo}^{hi} a_j e^{-sigma j}`.
pub fn tilted_sum(pf: &ParameterFunction, lo: usize, hi: usize, sigma: f64) -> f64 {
    pairwise_sum(lo, hi, sigma < 0.0, &|j| (pf.log_a(j) - sigma * (j as f64)).exp())
}

fn resolve_for_moments(
    pf: &ParameterFunction,
    window: SizeWindow,
    sigma: f64,
    n_cap: usize,
) -> Result<(usize, usize)> {
    let (lo, hi) = window.resolve(n_cap);
    if lo > hi {
        return Err(Error::Window(format!(
            "window {window} is empty after clamping to [1, {n_cap}]"
        )));
    }
    if window.is_unbounded() {
        if sigma <= 0.0 {
            return Err(Error::Divergence(format!(
                "sum over unbounded window diverges for sigma = {sigma} <= 0"
            )));
        }
        if sigma * (n_cap as f64) < TAIL_EXPONENT_MIN {
            return Err(Error::Divergence(format!(
                "truncating an unbounded window at {n_cap} is not safe: sigma*cap = {:.3} < {TAIL_EXPONENT_MIN}",
                sigma * n_cap as f64
            )));
        }
    }
    pf.validate_window(lo, hi)?;
    Ok((lo, hi))
}

/// `(M, B^2, rho)` at a given tilt over `window` clamped to `[1, n_cap]`.
///
/// Unbounded windows require `sigma > 0` and a cap deep enough that the
/// dropped tail is negligible.
pub fn moments(
    pf: &ParameterFunction,
    window: SizeWindow,
    sigma: f64,
    n_cap: usize,
) -> Result<(f64, f64, f64)> {
    let (lo, hi) = resolve_for_moments(pf, window, sigma, n_cap)?;
    Ok(tilted_moments3(pf, lo, hi, sigma))
}

/// Solve `M(sigma) = n` over `window` (unbounded ends resolve to `n`).
///
/// Exponential bracket expansion from the scale `n^{-1/(l+1)}`, bisection to
/// 1e-12 absolute, then two Newton steps using `M' = -B^2`. Fails only if the
/// residual contract `|M - n| <= rel_tol * n` cannot be met.
pub fn solve_sigma(
    pf: &ParameterFunction,
    window: SizeWindow,
    n: usize,
    rel_tol: f64,
) -> Result<SaddlePoint> {
    if n < 1 {
        return Err(Error::Domain("need n >= 1".into()));
    }
    if !(rel_tol > 0.0) {
        return Err(Error::Domain(format!("need rel_tol > 0, got {rel_tol}")));
    }
    let (lo, hi) = window.resolve(n);
    if lo > hi {
        return Err(Error::Window(format!("window {window} is empty at n = {n}")));
    }
    pf.validate_window(lo, hi)?;

    let target = n as f64;
    let f = |s: f64| mean_only(pf, lo, hi, s) - target;
    let scale = (target).powf(-1.0 / (pf.l() + 1.0));
    let (a, b) = crate::roots::expand_bracket_decreasing(&f, scale, 400)?;
    let mut sigma = crate::roots::bisect(&f, a, b, 1e-12, 200)?;

    // Newton polish; guarded so a bad step can only be rejected, not kept
    let mut best = sigma;
    let mut best_resid = f64::INFINITY;
    for _ in 0..3 {
        let (m, b2, _) = tilted_moments3(pf, lo, hi, sigma);
        let resid = (m - target).abs();
        if resid < best_resid {
            best_resid = resid;
            best = sigma;
        }
        if resid == 0.0 || !b2.is_finite() || b2 == 0.0 {
            break;
        }
        sigma += (m - target) / b2;
    }
    let sigma = best;

    let (mean, variance, third_moment) = tilted_moments3(pf, lo, hi, sigma);
    let resid = (mean - target).abs() / target;
    if !(resid <= rel_tol) {
        return Err(Error::SolverFailure(format!(
            "residual |M - n|/n = {resid:.3e} exceeds {rel_tol:.3e} (window {window}, n = {n}, sigma = {sigma})"
        )));
    }
    Ok(SaddlePoint { sigma, mean, variance, third_moment, window: (lo, hi), n })
}

/// Local-limit product `T_n sqrt(2 pi B^2)` over the full window `[1, n]`,
/// where `T_n = c_n exp(-S(e^{-sigma}) - n sigma)`; tends to 1 as `n` grows.
pub fn llt_product(pf: &ParameterFunction, n: usize) -> Result<f64> {
    let table = CoefficientTable::build_full(pf, n)?;
    llt_product_with_table(pf, &table, n)
}

/// Several local-limit products sharing one `O(n_max^2)` table.
pub fn llt_products(pf: &ParameterFunction, ns: &[usize]) -> Result<Vec<f64>> {
    let n_max = ns.iter().copied().max().unwrap_or(0);
    if n_max == 0 {
        return Err(Error::Domain("need at least one n >= 1".into()));
    }
    let table = CoefficientTable::build_full(pf, n_max)?;
    ns.iter().map(|&n| llt_product_with_table(pf, &table, n)).collect()
}

/// Local-limit product reusing a prebuilt unrestricted table.
pub fn llt_product_with_table(
    pf: &ParameterFunction,
    table: &CoefficientTable,
    n: usize,
) -> Result<f64> {
    if n < 1 || n > table.n_max() {
        return Err(Error::Domain(format!(
            "n = {n} outside table range 1..={}",
            table.n_max()
        )));
    }
    let sp = solve_sigma(pf, SizeWindow::full(), n, DEFAULT_REL_TOL)?;
    let s_val = tilted_sum(pf, 1, n, sp.sigma);
    let log_t = table.log_c(n) - s_val - n as f64 * sp.sigma;
    let log_norm = 0.5 * (2.0 * std::f64::consts::PI * sp.variance).ln();
    Ok((log_t + log_norm).exp())
}
