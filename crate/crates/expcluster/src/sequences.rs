//! Weight sequences of regular variation and their slowly varying parts.
//!
//! A model here is a positive sequence `a_j ~ j^{l-1} L(j)` with `l > 0` and
//! `L` slowly varying, optionally rescaled by `h^j`. The sequence drives both
//! the combinatorial weights (coefficient tables) and the intensity ratios of
//! the reversible coagulation-fragmentation chain. Multiset and
//! generator-count inputs are converted to the same shape through divisor
//! sums.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::FromPrimitive;

use crate::logspace::logaddexp;
use crate::{Error, Result};

/// Floor for conjugate evaluation; below it the defining asymptotic relation
/// carries no information.
pub const CONJUGATE_X_MIN: f64 = 10.0;

type SvFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type SeqFn = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

/// A slowly varying function `L` with its limit `d = lim L(x)`.
///
/// Built-in kinds are positive constants and `h * ln(e + x)^p`; the shifted
/// logarithm keeps `L` positive and defined on `[0, inf)`. Arbitrary
/// evaluatables are accepted but carry no automatic conjugate.
#[derive(Clone)]
pub enum SlowlyVarying {
    Constant {
        h: f64,
    },
    LogPower {
        h: f64,
        p: f64,
    },
    Custom {
        f: SvFn,
        /// Declared `lim L(x)`: `0.0`, a finite positive value, or `+inf`.
        limit: f64,
        /// Declared bound on `|L(lambda x)/L(x) - 1|` at `x = 1e6`, `lambda <= 10`.
        modulus: f64,
    },
}

impl SlowlyVarying {
    /// The constant function `L == h`.
    pub fn constant(h: f64) -> Result<Self> {
        if h > 0.0 && h.is_finite() {
            Ok(SlowlyVarying::Constant { h })
        } else {
            Err(Error::Domain(format!("constant L requires h > 0, got {h}")))
        }
    }

    /// `L(x) = h * ln(e + x)^p`.
    pub fn log_power(h: f64, p: f64) -> Result<Self> {
        if h > 0.0 && h.is_finite() && p.is_finite() {
            Ok(SlowlyVarying::LogPower { h, p })
        } else {
            Err(Error::Domain(format!("log-power L requires h > 0, got h={h}, p={p}")))
        }
    }

    /// User-supplied evaluatable with declared limit and variation modulus.
    pub fn custom(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        limit: f64,
        modulus: f64,
    ) -> Result<Self> {
        let sv = SlowlyVarying::Custom { f: Arc::new(f), limit, modulus };
        sv.check_slow_variation()?;
        Ok(sv)
    }

    /// `L(x)`; positive for all `x >= 0`.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            SlowlyVarying::Constant { h } => *h,
            SlowlyVarying::LogPower { h, p } => h * (std::f64::consts::E + x).ln().powf(*p),
            SlowlyVarying::Custom { f, .. } => f(x),
        }
    }

    /// `d = lim L(x)`: `0.0`, a finite value, or `+inf`.
    pub fn limit(&self) -> f64 {
        match self {
            SlowlyVarying::Constant { h } => *h,
            SlowlyVarying::LogPower { h, p } => {
                if *p > 0.0 {
                    f64::INFINITY
                } else if *p < 0.0 {
                    0.0
                } else {
                    *h
                }
            }
            SlowlyVarying::Custom { limit, .. } => *limit,
        }
    }

    /// First-order bound on `|L(lambda x)/L(x) - 1|`.
    pub fn variation_modulus(&self, x: f64, lambda: f64) -> f64 {
        match self {
            SlowlyVarying::Constant { .. } => 0.0,
            SlowlyVarying::LogPower { p, .. } => {
                p.abs() * lambda.ln().abs() / (std::f64::consts::E + x).ln()
            }
            SlowlyVarying::Custom { modulus, .. } => *modulus,
        }
    }

    /// Numeric slow-variation check: `L(lambda x)/L(x)` must approach 1.
    pub fn check_slow_variation(&self) -> Result<()> {
        for &lambda in &[2.0, 10.0] {
            for &x in &[1e3, 1e4, 1e5, 1e6] {
                let lx = self.eval(x);
                let llx = self.eval(lambda * x);
                if !(lx > 0.0) || !(llx > 0.0) {
                    return Err(Error::Domain(format!("L not positive near x={x}")));
                }
                if x == 1e6 {
                    let dev = (llx / lx - 1.0).abs();
                    let allowed = 10.0 * self.variation_modulus(x, lambda) + 1e-9;
                    if dev > allowed {
                        return Err(Error::Domain(format!(
                            "L({lambda}x)/L(x) - 1 = {dev:.3e} at x=1e6 exceeds 10x declared modulus {allowed:.3e}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `L(x)^alpha` when closed under powers (constant and log-power kinds).
    pub fn powf(&self, alpha: f64) -> Option<Self> {
        match self {
            SlowlyVarying::Constant { h } => Some(SlowlyVarying::Constant { h: h.powf(alpha) }),
            SlowlyVarying::LogPower { h, p } => {
                Some(SlowlyVarying::LogPower { h: h.powf(alpha), p: p * alpha })
            }
            SlowlyVarying::Custom { .. } => None,
        }
    }
}

impl fmt::Debug for SlowlyVarying {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlowlyVarying::Constant { h } => write!(f, "Constant({h})"),
            SlowlyVarying::LogPower { h, p } => write!(f, "LogPower(h={h}, p={p})"),
            SlowlyVarying::Custom { limit, .. } => write!(f, "Custom(limit={limit})"),
        }
    }
}

/// Conjugate value `L*(x)`, defined by `L*(x) L(x L*(x)) -> 1`.
///
/// For a constant `h` the conjugate is `1/h`; for log-power kinds the
/// defining relation is solved by fixed-point iteration `v <- 1/L(x v)`.
/// Custom kinds have no automatic conjugate.
pub fn conjugate_sv(sv: &SlowlyVarying, x: f64) -> Result<f64> {
    // small slack so an exact power like 1000^(1/3) does not trip the floor
    if x < CONJUGATE_X_MIN - 1e-9 {
        return Err(Error::Domain(format!(
            "conjugate evaluation needs x >= {CONJUGATE_X_MIN}, got {x}"
        )));
    }
    match sv {
        SlowlyVarying::Constant { h } => Ok(1.0 / h),
        SlowlyVarying::LogPower { .. } => {
            let mut v = 1.0 / sv.eval(x);
            for _ in 0..500 {
                let next = 1.0 / sv.eval(x * v);
                if (next - v).abs() <= 1e-13 * v.abs() {
                    return Ok(next);
                }
                v = next;
            }
            Ok(v)
        }
        SlowlyVarying::Custom { .. } => Err(Error::NotImplemented(
            "no automatic conjugate for user-supplied L".into(),
        )),
    }
}

#[derive(Clone)]
enum Seq {
    /// Default shape `a_j = j^{l-1} L(j)`.
    PowerLaw,
    /// Tabulated `ln a_j`, index `j` in `1..=len`.
    Table(Arc<[f64]>),
    /// User evaluatable returning linear `a_j`.
    Custom(SeqFn),
}

/// The model input: a positive weight sequence with its regular-variation
/// descriptor `(l, L)` and an `h^j` rescaling factor.
///
/// Immutable after construction; cheap to clone and safe to share across
/// threads.
#[derive(Clone)]
pub struct ParameterFunction {
    l: f64,
    sv: SlowlyVarying,
    log_h_scale: f64,
    seq: Seq,
}

impl fmt::Debug for ParameterFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.seq {
            Seq::PowerLaw => "power-law".to_string(),
            Seq::Table(t) => format!("table[1..={}]", t.len().saturating_sub(1)),
            Seq::Custom(_) => "custom".to_string(),
        };
        write!(
            f,
            "ParameterFunction(l={}, L={:?}, h_scale={}, seq={kind})",
            self.l,
            self.sv,
            self.h_scale()
        )
    }
}

impl ParameterFunction {
    /// `a_j = j^{l-1} L(j)`, the default shape.
    pub fn power_law(l: f64, sv: SlowlyVarying) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidParameterFunction(format!("need l > 0, got {l}")));
        }
        Ok(ParameterFunction { l, sv, log_h_scale: 0.0, seq: Seq::PowerLaw })
    }

    /// `a_j == 1` (`l = 1`, `L == 1`), the workhorse test sequence.
    pub fn ones() -> Self {
        ParameterFunction {
            l: 1.0,
            sv: SlowlyVarying::Constant { h: 1.0 },
            log_h_scale: 0.0,
            seq: Seq::PowerLaw,
        }
    }

    /// User-supplied `a_j` evaluator with a declared descriptor.
    pub fn custom(
        f: impl Fn(usize) -> f64 + Send + Sync + 'static,
        l: f64,
        sv: SlowlyVarying,
    ) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidParameterFunction(format!("need l > 0, got {l}")));
        }
        Ok(ParameterFunction { l, sv, log_h_scale: 0.0, seq: Seq::Custom(Arc::new(f)) })
    }

    /// Convert multiset/generator counts `m` (with `m[j-1] = m_j`) through the
    /// divisor sum `a_n = sum_{jk=n} m_j / k`, tabulated for `n <= n_max`.
    ///
    /// Sieve over multiples, `O(n_max log n_max)`. The result keeps the
    /// descriptor `(l=1, L==1)`; override with [`with_descriptor`] when the
    /// input implies another envelope.
    ///
    /// [`with_descriptor`]: ParameterFunction::with_descriptor
    pub fn from_multiset(m: &[f64], n_max: usize) -> Result<Self> {
        if let Some(bad) = m.iter().find(|&&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::InvalidParameterFunction(format!(
                "multiset counts must be finite and nonnegative, got {bad}"
            )));
        }
        let log_m: Vec<f64> = m.iter().map(|&x| x.ln()).collect();
        Self::from_multiset_log(&log_m, n_max)
    }

    /// Same divisor-sum conversion with `ln m_j` inputs (`log_m[j-1] = ln m_j`),
    /// for counts like `q^j` that overflow linear floats.
    pub fn from_multiset_log(log_m: &[f64], n_max: usize) -> Result<Self> {
        if n_max == 0 || log_m.is_empty() {
            return Err(Error::InvalidParameterFunction("empty multiset input".into()));
        }
        if log_m.iter().all(|&x| x == f64::NEG_INFINITY) {
            return Err(Error::InvalidParameterFunction("all multiset counts are zero".into()));
        }
        let mut log_a = vec![f64::NEG_INFINITY; n_max + 1];
        for (idx, &lm) in log_m.iter().enumerate() {
            let j = idx + 1;
            if j > n_max {
                break;
            }
            if lm == f64::NEG_INFINITY {
                continue;
            }
            let mut target = j;
            let mut k = 1usize;
            while target <= n_max {
                log_a[target] = logaddexp(log_a[target], lm - (k as f64).ln());
                k += 1;
                target += j;
            }
        }
        if let Some(n) = (1..=n_max).find(|&n| log_a[n] == f64::NEG_INFINITY) {
            return Err(Error::InvalidParameterFunction(format!(
                "divisor sum gives a_{n} = 0; positivity is required"
            )));
        }
        log_a[0] = f64::NAN; // index 0 unused
        Ok(ParameterFunction {
            l: 1.0,
            sv: SlowlyVarying::Constant { h: 1.0 },
            log_h_scale: 0.0,
            seq: Seq::Table(log_a.into()),
        })
    }

    /// Replace the regular-variation descriptor on a tabulated or custom
    /// sequence (used by conversion pipelines that know their envelope).
    pub fn with_descriptor(mut self, l: f64, sv: SlowlyVarying) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidParameterFunction(format!("need l > 0, got {l}")));
        }
        self.l = l;
        self.sv = sv;
        Ok(self)
    }

    /// Rescale by `h^j`: returns a new function with term `h^j a_j`.
    pub fn h_transform(&self, h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Domain(format!("h-transform requires h > 0, got {h}")));
        }
        let mut out = self.clone();
        out.log_h_scale += h.ln();
        Ok(out)
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn sv(&self) -> &SlowlyVarying {
        &self.sv
    }

    /// Accumulated `h^j` factor.
    pub fn h_scale(&self) -> f64 {
        self.log_h_scale.exp()
    }

    pub fn log_h_scale(&self) -> f64 {
        self.log_h_scale
    }

    /// Highest tabulated index, when the sequence is a table.
    pub fn table_len(&self) -> Option<usize> {
        match &self.seq {
            Seq::Table(t) => Some(t.len() - 1),
            _ => None,
        }
    }

    /// `ln(h_scale^j * a_j)`; infallible on validated inputs.
    pub fn log_a(&self, j: usize) -> f64 {
        debug_assert!(j >= 1);
        let base = match &self.seq {
            Seq::PowerLaw => {
                (self.l - 1.0) * (j as f64).ln() + self.sv.eval(j as f64).ln()
            }
            Seq::Table(t) => t.get(j).copied().unwrap_or(f64::NAN),
            Seq::Custom(f) => f(j).ln(),
        };
        (j as f64) * self.log_h_scale + base
    }

    /// `h_scale^j * a_j` with positivity checking.
    pub fn eval_a(&self, j: usize) -> Result<f64> {
        if j == 0 {
            return Err(Error::Domain("sequence index starts at 1".into()));
        }
        if let Seq::Table(t) = &self.seq {
            if j >= t.len() {
                return Err(Error::Domain(format!(
                    "a_{j} outside tabulated range 1..={}",
                    t.len() - 1
                )));
            }
        }
        let la = self.log_a(j);
        if la.is_nan() || la == f64::INFINITY {
            return Err(Error::InvalidParameterFunction(format!(
                "a_{j} is not a positive finite value"
            )));
        }
        Ok(la.exp())
    }

    /// Check `a_j > 0` and finite over a window before heavy use.
    pub fn validate_window(&self, lo: usize, hi: usize) -> Result<()> {
        for j in lo..=hi {
            self.eval_a(j)?;
        }
        Ok(())
    }

    /// Exact rational `h_scale^j * a_j` when the sequence has exact form:
    /// power-law shape, constant `L`, and `l - 1` a nonnegative integer.
    /// (`h` values are taken at their exact binary-float value.)
    pub fn exact_eval(&self, j: usize) -> Option<BigRational> {
        match (&self.seq, &self.sv) {
            (Seq::PowerLaw, SlowlyVarying::Constant { h }) => {
                let m = self.l - 1.0;
                if m < 0.0 || m.fract() != 0.0 || m > 64.0 {
                    return None;
                }
                let h_rat = BigRational::from_f64(*h)?;
                let scale = BigRational::from_f64(self.h_scale())?;
                if scale.numer().bits() > 512 || scale.denom().bits() > 512 {
                    return None; // h_scale not an exact product of short dyadics
                }
                let jm = BigInt::from(j).pow(m as u32);
                Some(scale.pow(j as i32) * BigRational::from_integer(jm) * h_rat)
            }
            _ => None,
        }
    }

    /// Whether [`exact_eval`](ParameterFunction::exact_eval) succeeds.
    pub fn has_exact_form(&self) -> bool {
        self.exact_eval(1).is_some()
    }
}

/// Ratio table `a_j / m_j` for the divisor-sum conversion, `j = 1..=n_max`.
///
/// When `m_j / m_{j+1}` tends to a constant in `(0, 1)` the ratios tend to 1;
/// callers assert convergence against that hypothesis.
pub fn divisor_sum_ratios(m: &[f64], n_max: usize) -> Result<Vec<f64>> {
    if m.len() < n_max {
        return Err(Error::Domain(format!(
            "need m_1..m_{n_max}, got {} entries",
            m.len()
        )));
    }
    if let Some(bad) = m[..n_max].iter().find(|&&x| !(x > 0.0)) {
        return Err(Error::Domain(format!("ratios need m_j > 0, got {bad}")));
    }
    let pf = ParameterFunction::from_multiset(m, n_max)?;
    (1..=n_max)
        .map(|j| Ok((pf.log_a(j) - m[j - 1].ln()).exp()))
        .collect()
}

/// Log-scale variant of [`divisor_sum_ratios`] for fast-growing counts.
pub fn divisor_sum_ratios_log(log_m: &[f64], n_max: usize) -> Result<Vec<f64>> {
    if log_m.len() < n_max {
        return Err(Error::Domain(format!(
            "need log m_1..log m_{n_max}, got {} entries",
            log_m.len()
        )));
    }
    let pf = ParameterFunction::from_multiset_log(log_m, n_max)?;
    (1..=n_max)
        .map(|j| Ok((pf.log_a(j) - log_m[j - 1]).exp()))
        .collect()
}
