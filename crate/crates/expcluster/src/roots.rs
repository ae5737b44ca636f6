//! Bracketing root finders for monotone functions.
//!
//! Every root problem in this crate is strictly monotone (tilted moment sums
//! in the saddle equation, the critical-regime integral equations), so
//! bracket-expansion plus bisection is globally convergent; callers polish
//! with Newton where a derivative is available.

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Expand around `x0` until `f` changes sign, for strictly decreasing `f`.
///
/// Returns `(a, b)` with `a < b`, `f(a) >= 0 >= f(b)`. The step doubles each
/// iteration, so the bracket reaches any finite root in ~`max_steps` moves
/// even from a poor scale guess. Non-finite `f` values (overflowing sums) are
/// treated by their sign: `+inf` counts as positive.
pub fn expand_bracket_decreasing<S: Scalar>(
    f: &impl Fn(S) -> S,
    x0: S,
    max_steps: u32,
) -> Result<(S, S)> {
    let fx0 = f(x0);
    if fx0.is_nan() {
        return Err(Error::SolverFailure(format!("f({x0}) is NaN")));
    }
    let mut step = if x0 == S::zero() { S::one() } else { x0.abs() };
    if fx0 >= S::zero() {
        // root is to the right
        let mut a = x0;
        let mut b = x0 + step;
        for _ in 0..max_steps {
            let fb = f(b);
            if fb.is_nan() {
                return Err(Error::SolverFailure(format!("f({b}) is NaN")));
            }
            if fb <= S::zero() {
                return Ok((a, b));
            }
            a = b;
            step = step + step;
            b = b + step;
        }
    } else {
        let mut b = x0;
        let mut a = x0 - step;
        for _ in 0..max_steps {
            let fa = f(a);
            if fa.is_nan() {
                return Err(Error::SolverFailure(format!("f({a}) is NaN")));
            }
            if fa >= S::zero() {
                return Ok((a, b));
            }
            b = a;
            step = step + step;
            a = a - step;
        }
    }
    Err(Error::SolverFailure(format!(
        "no sign change within {max_steps} doublings from {x0}"
    )))
}

/// Bisection on `[a, b]` given `f(a)` and `f(b)` of opposite (or zero) sign.
///
/// Runs until the interval is narrower than `xtol` (absolute). Monotone
/// direction is inferred from the endpoint signs.
pub fn bisect<S: Scalar>(f: &impl Fn(S) -> S, a: S, b: S, xtol: S, max_iter: u32) -> Result<S> {
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let fa = f(a);
    let fb = f(b);
    if fa == S::zero() {
        return Ok(a);
    }
    if fb == S::zero() {
        return Ok(b);
    }
    if (fa > S::zero()) == (fb > S::zero()) {
        return Err(Error::SolverFailure(format!(
            "no sign change on [{a}, {b}]: f(a)={fa}, f(b)={fb}"
        )));
    }
    let positive_at_a = fa > S::zero();
    for _ in 0..max_iter {
        let mid = a + (b - a) / S::from_f(2.0);
        if mid <= a || mid >= b {
            break; // interval at floating resolution
        }
        let fm = f(mid);
        if fm == S::zero() {
            return Ok(mid);
        }
        if (fm > S::zero()) == positive_at_a {
            a = mid;
        } else {
            b = mid;
        }
        if b - a <= xtol {
            break;
        }
    }
    Ok(a + (b - a) / S::from_f(2.0))
}
