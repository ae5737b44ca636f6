//! Log-space arithmetic for nonnegative reals.
//!
//! Coefficients here grow like `exp(const * n^{1/(l+1)})` or `q^n`, which
//! leaves fixed-width floats around `n ~ 10^3`. All large-`n` quantities are
//! therefore carried as logarithms, with `-inf` encoding zero. [`LogNum`]
//! wraps a log value in a numeric type implementing the `num-traits`
//! identities, so the coefficient recurrence can run unchanged over log-space
//! floats or exact rationals.

use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Div, Mul};

use num_traits::{FromPrimitive, One, Zero};

use crate::scalar::Scalar;

/// `ln(exp(a) + exp(b))` without overflow; `-inf` operands act as zero.
#[inline]
pub fn logaddexp<S: Scalar>(a: S, b: S) -> S {
    if a == S::neg_infinity() {
        return b;
    }
    if b == S::neg_infinity() {
        return a;
    }
    if a > b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

/// `ln(sum_i exp(x_i))` over a slice, max-shifted for stability.
pub fn logsumexp<S: Scalar>(xs: &[S]) -> S {
    let mut m = S::neg_infinity();
    for &x in xs {
        if x > m {
            m = x;
        }
    }
    if !m.is_finite() {
        return m; // empty, all -inf, or a +inf dominates
    }
    let mut s = S::zero();
    for &x in xs {
        s += (x - m).exp();
    }
    m + s.ln()
}

/// Pairwise (cascade) sum of `f(i)` for `i in lo..=hi`.
///
/// Terms are positive in every caller, so there is no cancellation; pairwise
/// recursion keeps the relative error at `O(eps log n)`. `descending` flips
/// the leaf iteration order for sums whose terms grow with the index.
pub fn pairwise_sum<S: Scalar>(lo: usize, hi: usize, descending: bool, f: &impl Fn(usize) -> S) -> S {
    const LEAF: usize = 64;
    if lo > hi {
        return S::zero();
    }
    let len = hi - lo + 1;
    if len <= LEAF {
        let mut s = S::zero();
        if descending {
            for i in (lo..=hi).rev() {
                s += f(i);
            }
        } else {
            for i in lo..=hi {
                s += f(i);
            }
        }
        return s;
    }
    let mid = lo + len / 2;
    if descending {
        pairwise_sum(mid, hi, true, f) + pairwise_sum(lo, mid - 1, true, f)
    } else {
        pairwise_sum(lo, mid - 1, false, f) + pairwise_sum(mid, hi, false, f)
    }
}

/// Neumaier-compensated sum, used as an independent summation oracle in tests.
pub fn compensated_sum<S: Scalar>(terms: impl Iterator<Item = S>) -> S {
    let mut sum = S::zero();
    let mut comp = S::zero();
    for t in terms {
        let next = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - next) + t;
        } else {
            comp += (t - next) + sum;
        }
        sum = next;
    }
    sum + comp
}

/// A nonnegative real stored as its natural logarithm.
///
/// `LogNum(-inf)` is zero, `LogNum(0)` is one. Addition is `logaddexp`,
/// multiplication adds logs. Ordering follows the represented value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogNum<S: Scalar>(S);

impl<S: Scalar> LogNum<S> {
    /// Wrap a log value directly.
    #[inline]
    pub fn from_ln(ln: S) -> Self {
        LogNum(ln)
    }

    /// From a linear nonnegative value.
    #[inline]
    pub fn from_linear(x: S) -> Self {
        debug_assert!(x >= S::zero());
        LogNum(x.ln())
    }

    /// The stored logarithm (`-inf` for zero).
    #[inline]
    pub fn ln(self) -> S {
        self.0
    }

    /// Back to linear scale; overflows to `+inf` when out of range.
    #[inline]
    pub fn linear(self) -> S {
        self.0.exp()
    }
}

impl<S: Scalar> Add for LogNum<S> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        LogNum(logaddexp(self.0, rhs.0))
    }
}

impl<S: Scalar> AddAssign for LogNum<S> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        self.0 = logaddexp(self.0, rhs.0);
    }
}

impl<S: Scalar> Mul for LogNum<S> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        // zero absorbs: -inf + anything (incl. +inf) must stay -inf
        if self.0 == S::neg_infinity() || rhs.0 == S::neg_infinity() {
            return LogNum(S::neg_infinity());
        }
        LogNum(self.0 + rhs.0)
    }
}

impl<S: Scalar> Div for LogNum<S> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        debug_assert!(rhs.0 != S::neg_infinity(), "division by log-space zero");
        if self.0 == S::neg_infinity() {
            return self;
        }
        LogNum(self.0 - rhs.0)
    }
}

impl<S: Scalar> Zero for LogNum<S> {
    #[inline]
    fn zero() -> Self {
        LogNum(S::neg_infinity())
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.0 == S::neg_infinity()
    }
}

impl<S: Scalar> One for LogNum<S> {
    #[inline]
    fn one() -> Self {
        LogNum(S::zero())
    }
}

impl<S: Scalar> FromPrimitive for LogNum<S> {
    fn from_i64(n: i64) -> Option<Self> {
        if n < 0 {
            None
        } else {
            Self::from_u64(n as u64)
        }
    }
    fn from_u64(n: u64) -> Option<Self> {
        S::from_u64(n).map(|x| LogNum(x.ln()))
    }
    fn from_f64(x: f64) -> Option<Self> {
        if x < 0.0 {
            None
        } else {
            S::from_f64(x).map(|x| LogNum(x.ln()))
        }
    }
}

impl<S: Scalar> PartialOrd for LogNum<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}
