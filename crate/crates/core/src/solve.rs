//! Scalar root bracketing and bisection.

use crate::error::{Error, Result};

pub const MAX_BISECTIONS: usize = 200;

/// Root of `f` on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs.
///
/// Stops when the bracket is narrower than `xtol` or `f` vanishes exactly.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64, what: &str) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::domain(format!("{what}: root is not bracketed")));
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= xtol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        what: what.to_string(),
        iterations: MAX_BISECTIONS,
    })
}

/// Grow `hi` geometrically from `start` until `f(hi) >= 0`, returning the bracket.
pub fn expand_upward<F>(mut f: F, start: f64, factor: f64, what: &str) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut lo = 0.0;
    let mut hi = start;
    for _ in 0..MAX_BISECTIONS {
        if f(hi)? >= 0.0 {
            return Ok((lo, hi));
        }
        lo = hi;
        hi *= factor;
    }
    Err(Error::NoConvergence {
        what: format!("{what} (bracket expansion)"),
        iterations: MAX_BISECTIONS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_square_root() {
        let r = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-14, "sqrt").unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn rejects_unbracketed() {
        assert!(bisect(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, "none").is_err());
    }

    #[test]
    fn expansion_brackets_root() {
        let (lo, hi) = expand_upward(|x| Ok(x - 37.0), 1e-4, 2.0, "grow").unwrap();
        assert!(lo < 37.0 && hi >= 37.0);
    }
}
