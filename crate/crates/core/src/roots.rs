//! Bracketing scalar root finder (Brent's method).

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Stopping rule for [`brent`].
#[derive(Debug, Clone, Copy)]
pub struct BrentTolerance<T> {
    /// Absolute tolerance on the bracket width.
    pub x_tol: T,
    /// Stop as soon as `|f(x)| <= f_tol`.
    pub f_tol: T,
    pub max_iter: usize,
}

/// Finds a root of `f` in `[a, b]` given `f(a)` and `f(b)` of opposite sign.
///
/// Combines inverse quadratic interpolation, secant steps and bisection; the
/// bracket is maintained throughout. Errors from `f` are propagated.
pub fn brent<T, F>(mut f: F, a: T, b: T, fa: T, fb: T, tol: BrentTolerance<T>) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let two = lit::<T>(2.0);
    let half = lit::<T>(0.5);
    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoBracket);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..tol.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs() + half * tol.x_tol;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb.abs() <= tol.f_tol {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = lit::<T>(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 {
            b + d
        } else {
            b + tol1 * xm.signum()
        };
        fb = f(b)?;
    }
    Err(Error::RootFinderFailed {
        iterations: tol.max_iter,
    })
}
