//! Coefficient tables for `g(z) = exp(S(z))` and everything built from them.
//!
//! With `S(z) = sum_{j in window} a_j z^j`, the coefficients `c_n` of `g`
//! satisfy the convolution recurrence `n c_n = sum_k k a_k c_{n-k}` (from
//! `g' = S' g`). The recurrence is implemented once, generically over a
//! [`Weight`] scalar, and instantiated with log-space floats for large `n`
//! and with exact rationals for oracle mode. An independent brute-force
//! enumeration over partitions validates both.
//!
//! On top of the tables sit the finite-`n` cluster statistics: window ratios,
//! the largest/smallest-component CDFs, and the distribution of component
//! counts `K_p` (via tables with selected sizes excluded).

use std::ops::{Div, Mul};

use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};

use crate::logspace::LogNum;
use crate::sequences::ParameterFunction;
use crate::special::ln_factorial;
use crate::{Error, LogReal, Result};

/// Cap for brute-force partition enumeration (p(25) = 1958 partitions).
pub const BRUTE_FORCE_MAX_N: usize = 25;

/// Cap for exact-rational tables; denominators grow factorially past this.
pub const EXACT_TABLE_MAX_N: usize = 400;

/// Scalar that the coefficient recurrence and the enumeration oracle run on.
///
/// Implemented by `f64`, [`LogNum`], and `BigRational` via the blanket impl.
pub trait Weight:
    Clone + PartialEq + Zero + One + Mul<Output = Self> + Div<Output = Self> + FromPrimitive
{
}

impl<T> Weight for T where
    T: Clone + PartialEq + Zero + One + Mul<Output = Self> + Div<Output = Self> + FromPrimitive
{
}

/// A component-size window `[lo, hi]`, both ends inclusive.
///
/// `hi` may be left unbounded, meaning "up to the table length `n`"; size
/// exactly `lo` and exactly `hi` are both allowed (restricted series share
/// their boundary index).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeWindow {
    lo: usize,
    hi: WindowEnd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowEnd {
    At(usize),
    Unbounded,
}

impl SizeWindow {
    /// `[lo, hi]` with `1 <= lo <= hi`.
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo < 1 || hi < lo {
            return Err(Error::Window(format!("need 1 <= lo <= hi, got [{lo}, {hi}]")));
        }
        Ok(SizeWindow { lo, hi: WindowEnd::At(hi) })
    }

    /// `[1, n]` — the unrestricted window.
    pub fn full() -> Self {
        SizeWindow { lo: 1, hi: WindowEnd::Unbounded }
    }

    /// `[1, r]` — components no larger than `r`.
    pub fn up_to(r: usize) -> Result<Self> {
        Self::new(1, r)
    }

    /// `[r, n]` — components no smaller than `r`.
    pub fn at_least(r: usize) -> Result<Self> {
        if r < 1 {
            return Err(Error::Window("window must start at 1 or later".into()));
        }
        Ok(SizeWindow { lo: r, hi: WindowEnd::Unbounded })
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> WindowEnd {
        self.hi
    }

    /// Clamp to `[1, n]`; the result may be empty (`lo > hi`).
    pub fn resolve(&self, n: usize) -> (usize, usize) {
        let hi = match self.hi {
            WindowEnd::At(h) => h.min(n),
            WindowEnd::Unbounded => n,
        };
        (self.lo, hi)
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self.hi, WindowEnd::Unbounded)
    }
}

impl std::fmt::Display for SizeWindow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.hi {
            WindowEnd::At(h) => write!(f, "[{},{}]", self.lo, h),
            WindowEnd::Unbounded => write!(f, "[{},n]", self.lo),
        }
    }
}

/// The convolution recurrence `n c_n = sum_{k} w_k c_{n-k}` with
/// `w_k = k a_k` supported on `window_lo..=window_hi` minus `excluded`.
///
/// Runs on any [`Weight`] scalar; `O(n_max * |window|)` time.
pub fn coefficient_recurrence<W: Weight>(
    a: impl Fn(usize) -> W,
    window_lo: usize,
    window_hi: usize,
    excluded: &[usize],
    n_max: usize,
) -> Vec<W> {
    let hi = window_hi.min(n_max);
    let mut w: Vec<W> = vec![W::zero(); hi + 1];
    for (k, slot) in w.iter_mut().enumerate().skip(window_lo.min(hi + 1)) {
        if !excluded.contains(&k) {
            *slot = W::from_usize(k).expect("index weight") * a(k);
        }
    }
    let mut c: Vec<W> = vec![W::zero(); n_max + 1];
    c[0] = W::one();
    for n in 1..=n_max {
        let mut acc = W::zero();
        for k in window_lo..=hi.min(n) {
            if w[k].is_zero() || c[n - k].is_zero() {
                continue;
            }
            acc = acc + w[k].clone() * c[n - k].clone();
        }
        if !acc.is_zero() {
            c[n] = acc / W::from_usize(n).expect("row index");
        }
    }
    c
}

/// Brute-force `c_n`: direct sum over all partitions of `n` with parts in
/// `[lo, hi]` minus `excluded`, each weighted `prod a_i^{k_i} / k_i!`.
///
/// Exponential-time oracle, deliberately capped at [`BRUTE_FORCE_MAX_N`].
pub fn brute_force_coefficient<W: Weight>(
    a: impl Fn(usize) -> W,
    window_lo: usize,
    window_hi: usize,
    excluded: &[usize],
    n: usize,
) -> Result<W> {
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge(format!(
            "brute-force enumeration is capped at n = {BRUTE_FORCE_MAX_N}, got {n}"
        )));
    }
    let hi = window_hi.min(n);
    fn recurse<W: Weight>(
        a: &impl Fn(usize) -> W,
        lo: usize,
        excluded: &[usize],
        remaining: usize,
        max_part: usize,
        acc: W,
        total: &mut W,
    ) {
        if remaining == 0 {
            *total = total.clone() + acc;
            return;
        }
        if max_part < lo || remaining < lo {
            return;
        }
        let s = max_part.min(remaining);
        // multiplicity of part size s: 0..=remaining/s
        let mut weight = acc.clone();
        recurse(a, lo, excluded, remaining, s - 1, acc, total); // k_s = 0
        if excluded.contains(&s) {
            return;
        }
        let a_s = a(s);
        for k in 1..=remaining / s {
            weight = weight * a_s.clone() / W::from_usize(k).expect("multiplicity");
            recurse(a, lo, excluded, remaining - k * s, s - 1, weight.clone(), total);
        }
    }
    let mut total = if n == 0 { W::one() } else { W::zero() };
    if n > 0 && hi >= window_lo {
        recurse(&a, window_lo, excluded, n, hi, W::one(), &mut total);
    }
    Ok(total)
}

/// Log-space table of `ln c_n` for `n = 0..=n_max`, with optional exact
/// rationals alongside (oracle mode).
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    window: SizeWindow,
    lo: usize,
    hi: usize,
    excluded: Vec<usize>,
    log_c: Vec<f64>,
    exact_c: Option<Vec<BigRational>>,
    window_empty: bool,
}

impl CoefficientTable {
    /// Build the table for `pf` restricted to `window`, up to `n_max`.
    pub fn build(pf: &ParameterFunction, window: SizeWindow, n_max: usize) -> Result<Self> {
        Self::build_excluding(pf, window, n_max, &[])
    }

    /// Unrestricted table `[1, n_max]`.
    pub fn build_full(pf: &ParameterFunction, n_max: usize) -> Result<Self> {
        Self::build(pf, SizeWindow::full(), n_max)
    }

    /// Table with selected component sizes forbidden (their `a_k` forced to
    /// zero); used for the count distributions of `K_p`.
    pub fn build_excluding(
        pf: &ParameterFunction,
        window: SizeWindow,
        n_max: usize,
        excluded: &[usize],
    ) -> Result<Self> {
        let mut excl = excluded.to_vec();
        excl.sort_unstable();
        if excl.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("excluded sizes must be distinct".into()));
        }
        let (lo, hi) = window.resolve(n_max);
        let window_empty = lo > hi;
        if !window_empty {
            pf.validate_window(lo, hi)?;
        }
        let log_c = if window_empty {
            let mut v = vec![f64::NEG_INFINITY; n_max + 1];
            v[0] = 0.0;
            v
        } else {
            coefficient_recurrence::<LogReal>(
                |k| LogNum::from_ln(pf.log_a(k)),
                lo,
                hi,
                &excl,
                n_max,
            )
            .into_iter()
            .map(|x| x.ln())
            .collect()
        };
        Ok(CoefficientTable {
            window,
            lo,
            hi,
            excluded: excl,
            log_c,
            exact_c: None,
            window_empty,
        })
    }

    /// Attach exact rationals computed by the same recurrence over
    /// `BigRational`. Requires the sequence to have exact form.
    pub fn with_exact(mut self, pf: &ParameterFunction) -> Result<Self> {
        let n_max = self.n_max();
        if n_max > EXACT_TABLE_MAX_N {
            return Err(Error::TooLarge(format!(
                "exact mode capped at n = {EXACT_TABLE_MAX_N}, got {n_max}"
            )));
        }
        if !pf.has_exact_form() {
            return Err(Error::NotImplemented(
                "sequence has no exact rational form".into(),
            ));
        }
        let exact = if self.window_empty {
            let mut v = vec![BigRational::zero(); n_max + 1];
            v[0] = BigRational::one();
            v
        } else {
            coefficient_recurrence::<BigRational>(
                |k| pf.exact_eval(k).expect("exact form checked"),
                self.lo,
                self.hi,
                &self.excluded,
                n_max,
            )
        };
        self.exact_c = Some(exact);
        Ok(self)
    }

    pub fn n_max(&self) -> usize {
        self.log_c.len() - 1
    }

    /// The window as requested (before clamping).
    pub fn window(&self) -> SizeWindow {
        self.window
    }

    /// The window actually applied, clamped to `[1, n_max]`.
    pub fn resolved_window(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    pub fn excluded(&self) -> &[usize] {
        &self.excluded
    }

    /// True when the requested window missed `[1, n_max]` entirely; the
    /// table is then `1, 0, 0, ...`.
    pub fn window_empty(&self) -> bool {
        self.window_empty
    }

    /// Whether this is an unrestricted table (full window, nothing excluded).
    pub fn is_unrestricted(&self) -> bool {
        self.lo == 1 && self.hi == self.n_max() && self.excluded.is_empty()
    }

    /// `ln c_n`; `-inf` encodes `c_n = 0`.
    pub fn log_c(&self, n: usize) -> f64 {
        self.log_c[n]
    }

    pub fn log_values(&self) -> &[f64] {
        &self.log_c
    }

    /// Linear `c_n`; overflows to `+inf` when out of the exponent range.
    pub fn c(&self, n: usize) -> f64 {
        self.log_c[n].exp()
    }

    pub fn exact(&self, n: usize) -> Option<&BigRational> {
        self.exact_c.as_ref().map(|v| &v[n])
    }

    /// Does `self` carry exact rationals?
    pub fn has_exact(&self) -> bool {
        self.exact_c.is_some()
    }

    /// Mean number of size-`p` components at total mass `n`:
    /// `E K_p = a_p c_{n-p} / c_n`. Needs an unrestricted table.
    pub fn kp_mean(&self, pf: &ParameterFunction, n: usize, p: usize) -> Result<f64> {
        self.require_unrestricted("kp_mean")?;
        if p > n {
            return Ok(0.0);
        }
        log_ratio(pf.log_a(p) + self.log_c(n - p), self.log_c(n))
    }

    /// Exact covariance of the counts at two distinct sizes:
    /// `cov(K_p, K_q) = a_p a_q (c_{n-p-q}/c_n - c_{n-p} c_{n-q} / c_n^2)`.
    pub fn kp_covariance(
        &self,
        pf: &ParameterFunction,
        n: usize,
        p: usize,
        q: usize,
    ) -> Result<f64> {
        self.require_unrestricted("kp_covariance")?;
        if p == q {
            return Err(Error::Domain("covariance needs two distinct sizes".into()));
        }
        if p + q > n {
            let m1 = self.kp_mean(pf, n, p)?;
            let m2 = self.kp_mean(pf, n, q)?;
            return Ok(-m1 * m2);
        }
        let ln_cn = self.log_c(n);
        let cross = (pf.log_a(p) + pf.log_a(q) + self.log_c(n - p - q) - ln_cn).exp();
        let m1 = (pf.log_a(p) + self.log_c(n - p) - ln_cn).exp();
        let m2 = (pf.log_a(q) + self.log_c(n - q) - ln_cn).exp();
        Ok(cross - m1 * m2)
    }

    fn require_unrestricted(&self, what: &str) -> Result<()> {
        if self.is_unrestricted() {
            Ok(())
        } else {
            Err(Error::Domain(format!("{what} needs an unrestricted table")))
        }
    }
}

/// `exp(num - den)` with zero/zero and x/zero rejected.
pub(crate) fn log_ratio(log_num: f64, log_den: f64) -> Result<f64> {
    if log_den == f64::NEG_INFINITY {
        return Err(Error::Domain(
            "ratio with zero denominator (0/0 or x/0)".into(),
        ));
    }
    if log_num == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    Ok((log_num - log_den).exp())
}

/// Brute-force `c_n` in exact rationals; the sequence must have exact form.
pub fn brute_force_exact(
    pf: &ParameterFunction,
    window: SizeWindow,
    n: usize,
) -> Result<BigRational> {
    if !pf.has_exact_form() {
        return Err(Error::NotImplemented("sequence has no exact rational form".into()));
    }
    let (lo, hi) = window.resolve(n.max(1));
    brute_force_coefficient::<BigRational>(
        |k| pf.exact_eval(k).expect("exact form checked"),
        lo,
        hi.max(lo),
        &[],
        n,
    )
}

/// Brute-force `c_n` in plain floating point (for sequences without exact
/// rational form). Positive-term sum over at most p(25) partitions, so the
/// result carries ~1e-14 relative error.
pub fn brute_force_real(pf: &ParameterFunction, window: SizeWindow, n: usize) -> Result<f64> {
    let (lo, hi) = window.resolve(n.max(1));
    if !(lo > hi) && n >= 1 {
        pf.validate_window(lo, hi)?;
    }
    brute_force_coefficient::<f64>(|k| pf.log_a(k).exp(), lo, hi.max(lo), &[], n)
}

/// The window ratios `(c^window[1,r]_n / c_n, c^window[r,n]_n / c_n)`.
///
/// Both lie in `[0, 1]`; the first is the CDF of the largest component at
/// `r`, the second the tail of the smallest.
pub fn d_ratios(pf: &ParameterFunction, n: usize, r: usize) -> Result<(f64, f64)> {
    if r < 1 || r > n {
        return Err(Error::Domain(format!("need 1 <= r <= n, got r={r}, n={n}")));
    }
    let full = CoefficientTable::build_full(pf, n)?;
    let lower = CoefficientTable::build(pf, SizeWindow::up_to(r)?, n)?;
    let upper = CoefficientTable::build(pf, SizeWindow::at_least(r)?, n)?;
    Ok((
        log_ratio(lower.log_c(n), full.log_c(n))?,
        log_ratio(upper.log_c(n), full.log_c(n))?,
    ))
}

/// `P(largest component <= r)` at total mass `n`.
pub fn largest_cluster_cdf(pf: &ParameterFunction, n: usize, r: usize) -> Result<f64> {
    Ok(largest_cluster_cdf_grid(pf, n, &[r])?[0])
}

/// CDF of the largest component at several thresholds, sharing one
/// unrestricted table.
pub fn largest_cluster_cdf_grid(
    pf: &ParameterFunction,
    n: usize,
    rs: &[usize],
) -> Result<Vec<f64>> {
    let full = CoefficientTable::build_full(pf, n)?;
    rs.iter()
        .map(|&r| {
            if r < 1 || r > n {
                return Err(Error::Domain(format!("need 1 <= r <= n, got r={r}, n={n}")));
            }
            let lower = CoefficientTable::build(pf, SizeWindow::up_to(r)?, n)?;
            log_ratio(lower.log_c(n), full.log_c(n))
        })
        .collect()
}

/// `P(smallest component >= r)` at total mass `n`.
pub fn smallest_cluster_tail(pf: &ParameterFunction, n: usize, r: usize) -> Result<f64> {
    if r < 1 {
        return Err(Error::Domain("need r >= 1".into()));
    }
    if r > n {
        return Ok(0.0);
    }
    let full = CoefficientTable::build_full(pf, n)?;
    let upper = CoefficientTable::build(pf, SizeWindow::at_least(r)?, n)?;
    log_ratio(upper.log_c(n), full.log_c(n))
}

/// Distribution of `K_p`, the number of size-`p` components, at total mass
/// `n`: `P(K_p = k) = (a_p^k / k!) c^{(excl p)}_{n - pk} / c_n`.
///
/// Holds the two tables it needs, so sweeping over `k` is cheap.
pub struct KpMarginal {
    p: usize,
    n: usize,
    log_a_p: f64,
    log_c_n: f64,
    excl: CoefficientTable,
}

impl KpMarginal {
    pub fn new(pf: &ParameterFunction, n: usize, p: usize) -> Result<Self> {
        if p < 1 || p > n {
            return Err(Error::Domain(format!("need 1 <= p <= n, got p={p}, n={n}")));
        }
        let full = CoefficientTable::build_full(pf, n)?;
        let excl = CoefficientTable::build_excluding(pf, SizeWindow::full(), n, &[p])?;
        Ok(KpMarginal { p, n, log_a_p: pf.log_a(p), log_c_n: full.log_c(n), excl })
    }

    /// `P(K_p = k)`; zero (not an error) when `pk > n`.
    pub fn prob(&self, k: usize) -> f64 {
        match k.checked_mul(self.p) {
            Some(pk) if pk <= self.n => {
                let log_num =
                    k as f64 * self.log_a_p - ln_factorial(k) + self.excl.log_c(self.n - pk);
                (log_num - self.log_c_n).exp()
            }
            _ => 0.0,
        }
    }

    /// All probabilities for `k = 0..=n/p`; sums to 1 up to rounding.
    pub fn distribution(&self) -> Vec<f64> {
        (0..=self.n / self.p).map(|k| self.prob(k)).collect()
    }
}

/// `P(K_p = k)` as a one-shot call (builds the tables each time; use
/// [`KpMarginal`] to sweep over `k`).
pub fn kp_marginal(pf: &ParameterFunction, n: usize, p: usize, k: usize) -> Result<f64> {
    Ok(KpMarginal::new(pf, n, p)?.prob(k))
}

/// Joint distribution of component counts at several distinct sizes.
pub struct KpJoint {
    ps: Vec<usize>,
    n: usize,
    log_a: Vec<f64>,
    log_c_n: f64,
    excl: CoefficientTable,
}

impl KpJoint {
    pub fn new(pf: &ParameterFunction, n: usize, ps: &[usize]) -> Result<Self> {
        if ps.is_empty() {
            return Err(Error::Domain("need at least one size".into()));
        }
        let mut sorted = ps.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("joint sizes must be distinct".into()));
        }
        if sorted[0] < 1 || *sorted.last().unwrap() > n {
            return Err(Error::Domain(format!("sizes must lie in 1..={n}")));
        }
        let full = CoefficientTable::build_full(pf, n)?;
        let excl = CoefficientTable::build_excluding(pf, SizeWindow::full(), n, ps)?;
        Ok(KpJoint {
            ps: ps.to_vec(),
            n,
            log_a: ps.iter().map(|&p| pf.log_a(p)).collect(),
            log_c_n: full.log_c(n),
            excl,
        })
    }

    /// `P(K_{p_1} = k_1, ..., K_{p_s} = k_s)`.
    pub fn prob(&self, ks: &[usize]) -> Result<f64> {
        if ks.len() != self.ps.len() {
            return Err(Error::Domain(format!(
                "expected {} counts, got {}",
                self.ps.len(),
                ks.len()
            )));
        }
        let mut mass = 0usize;
        let mut log_num = 0.0;
        for ((&p, &k), &la) in self.ps.iter().zip(ks).zip(&self.log_a) {
            mass = match k.checked_mul(p).and_then(|pk| mass.checked_add(pk)) {
                Some(m) => m,
                None => return Ok(0.0),
            };
            log_num += k as f64 * la - ln_factorial(k);
        }
        if mass > self.n {
            return Ok(0.0);
        }
        Ok((log_num + self.excl.log_c(self.n - mass) - self.log_c_n).exp())
    }
}

/// One-shot joint probability; see [`KpJoint`] for sweeps.
pub fn kp_joint(pf: &ParameterFunction, n: usize, ps: &[usize], ks: &[usize]) -> Result<f64> {
    KpJoint::new(pf, n, ps)?.prob(ks)
}
