//! Bracketed root finding for strictly decreasing residuals on `(0, inf)`.

use crate::{Error, Result};

const BRACKET_STEPS: usize = 1100;
const BISECTION_STEPS: usize = 200;
const SECANT_STEPS: usize = 8;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Root {
    pub x: f64,
    pub residual: f64,
}

/// Finds `x > 0` with `f(x) = 0` for strictly decreasing `f`. `f` may return
/// `+inf` where the residual is undefined from above (divergent partition function).
///
/// The bracket is grown from `x = 1` by doubling or halving, refined by bisection
/// and then polished by guarded secant steps. Returns the evaluated point with
/// the smallest absolute residual.
pub(crate) fn decreasing_root<F>(mut f: F, relative_tolerance: f64) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut x = 1.0;
    let mut r = f(x)?;
    if r == 0.0 {
        return Ok(Root { x, residual: r });
    }
    let (mut lo, mut r_lo, mut hi, mut r_hi);
    if r > 0.0 {
        lo = x;
        r_lo = r;
        let mut steps = 0;
        loop {
            x *= 2.0;
            r = f(x)?;
            steps += 1;
            if r <= 0.0 {
                hi = x;
                r_hi = r;
                break;
            }
            lo = x;
            r_lo = r;
            if steps > BRACKET_STEPS || !x.is_finite() {
                return Err(Error::NoConvergenceCertificate { b: x });
            }
        }
    } else {
        hi = x;
        r_hi = r;
        let mut steps = 0;
        loop {
            x *= 0.5;
            r = f(x)?;
            steps += 1;
            if r >= 0.0 {
                lo = x;
                r_lo = r;
                break;
            }
            hi = x;
            r_hi = r;
            if steps > BRACKET_STEPS || x == 0.0 {
                return Err(Error::NoConvergenceCertificate { b: x });
            }
        }
    }

    let mut best = if r_lo.abs() < r_hi.abs() {
        Root {
            x: lo,
            residual: r_lo,
        }
    } else {
        Root {
            x: hi,
            residual: r_hi,
        }
    };
    let scale = relative_tolerance;
    for _ in 0..BISECTION_STEPS {
        if best.residual.abs() <= scale {
            return Ok(best);
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let r_mid = f(mid)?;
        if r_mid.abs() < best.residual.abs() {
            best = Root {
                x: mid,
                residual: r_mid,
            };
        }
        if r_mid > 0.0 {
            lo = mid;
            r_lo = r_mid;
        } else if r_mid < 0.0 {
            hi = mid;
            r_hi = r_mid;
        } else {
            return Ok(best);
        }
    }

    // secant polish inside the final bracket
    for _ in 0..SECANT_STEPS {
        if best.residual.abs() <= scale || !r_lo.is_finite() || r_hi == r_lo {
            break;
        }
        let candidate = hi - r_hi * (hi - lo) / (r_hi - r_lo);
        if !(candidate > lo && candidate < hi) {
            break;
        }
        let r_c = f(candidate)?;
        if r_c.abs() < best.residual.abs() {
            best = Root {
                x: candidate,
                residual: r_c,
            };
        }
        if r_c > 0.0 {
            lo = candidate;
            r_lo = r_c;
        } else if r_c < 0.0 {
            hi = candidate;
            r_hi = r_c;
        } else {
            break;
        }
    }
    Ok(best)
}
