//! Scalar root finding: geometric bracket growth plus Brent's
//! bisection/secant/inverse-quadratic hybrid.

use crate::error::{Error, Result};

const MAX_BRENT_ITER: usize = 200;

/// Find `x` in `[a, b]` with `f(x) = 0`, given `f(a)` and `f(b)` of opposite sign.
pub fn brent<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, x_tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::BracketFailure(format!(
            "no sign change on [{a}, {b}]: f(a)={fa}, f(b)={fb}"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_BRENT_ITER {
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
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * x_tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::BracketFailure(format!("objective is NaN at {b}")));
        }
    }
    Ok(b)
}

/// Grow `[x0 - step*2^k, x0 + step*2^k]` until `f` changes sign between the
/// ends (or between `x0` and one end). Returns the tightest such pair found.
pub fn grow_bracket<F: Fn(f64) -> f64>(
    f: F,
    x0: f64,
    step: f64,
    max_doublings: usize,
) -> Result<(f64, f64)> {
    let f0 = f(x0);
    if f0 == 0.0 {
        return Ok((x0, x0));
    }
    let mut width = step.abs().max(f64::MIN_POSITIVE);
    for _ in 0..max_doublings {
        let lo = x0 - width;
        let hi = x0 + width;
        let (flo, fhi) = (f(lo), f(hi));
        if !flo.is_nan() && flo.signum() != f0.signum() {
            return Ok((lo, x0));
        }
        if !fhi.is_nan() && fhi.signum() != f0.signum() {
            return Ok((x0, hi));
        }
        width *= 2.0;
    }
    Err(Error::BracketFailure(format!(
        "no sign change within {width:e} of {x0} (f(x0)={f0})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_root() {
        let r = brent(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn flat_then_steep() {
        // exp-like function with the root far from the midpoint
        let r = brent(|x| (x - 9.99).exp() - 1.0, 0.0, 10.0, 1e-14).unwrap();
        assert!((r - 9.99).abs() < 1e-10);
    }

    #[test]
    fn same_sign_is_error() {
        assert!(matches!(
            brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::BracketFailure(_))
        ));
    }

    #[test]
    fn bracket_grows_outward() {
        let (a, b) = grow_bracket(|x| x - 1000.0, 0.0, 1.0, 60).unwrap();
        assert!(a <= 1000.0 && b >= 1000.0);
        let (a, b) = grow_bracket(|x| -x - 1000.0, 0.0, 1.0, 60).unwrap();
        assert!(a <= -1000.0 && b >= -1000.0);
    }

    #[test]
    fn bracket_failure_reported() {
        assert!(grow_bracket(|_| 1.0, 0.0, 1.0, 10).is_err());
    }
}
