//! Gauss hypergeometric function F(a, b; c; x) for complex a, b, c and real x in [0, 1).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance of the power series.
pub const SERIES_REL_TOL: f64 = 1e-14;
/// Largest number of series terms before giving up.
pub const MAX_TERMS: usize = 100_000;
/// Default distance kept from the singular point x = 1.
pub const X_GUARD: f64 = 1e-6;
/// Above this argument the direct series is replaced by analytic continuation.
pub const SERIES_SWITCH: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyp2F1Params {
    pub a: Complex64,
    pub b: Complex64,
    pub x: f64,
}

impl Hyp2F1Params {
    pub fn new(a: Complex64, b: Complex64, x: f64) -> Self {
        Self { a, b, x }
    }
}

/// F(a, b; 1; x).
pub fn hyp2f1_c1(p: Hyp2F1Params) -> Result<Complex64> {
    hyp2f1(p.a, p.b, Complex64::new(1.0, 0.0), p.x)
}

/// General-c evaluation used by the Jacobi functions and off-diagonal matrix elements.
pub(crate) fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<Complex64> {
    check_c(c)?;
    if !(0.0..1.0 - X_GUARD).contains(&x) {
        return Err(Error::Domain(format!(
            "hypergeometric argument x = {x} outside [0, 1 - {X_GUARD:e})"
        )));
    }
    if x <= SERIES_SWITCH || is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        hyp2f1_series(a, b, c, x)
    } else {
        hyp2f1_continued(a, b, c, x)
    }
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

fn check_c(c: Complex64) -> Result<()> {
    if is_nonpositive_integer(c) {
        return Err(Error::Singularity(format!(
            "c = {} is a nonpositive integer",
            c.re
        )));
    }
    Ok(())
}

/// Direct power series Σ (a)_k (b)_k / ((c)_k k!) x^k.
pub(crate) fn hyp2f1_series(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small_run = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        if term == Complex64::new(0.0, 0.0) {
            return Ok(sum);
        }
        sum += term;
        if term.norm() <= SERIES_REL_TOL * sum.norm() {
            small_run += 1;
            if small_run >= 3 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::Convergence { terms: MAX_TERMS })
}

/// Analytic continuation along [0.5, x] by Taylor re-expansion of the
/// hypergeometric equation x(1-x)F'' + (c - (a+b+1)x)F' - abF = 0.
fn hyp2f1_continued(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<Complex64> {
    let mut x0 = 0.5;
    let mut f = hyp2f1_series(a, b, c, x0)?;
    let mut df = a * b / c * hyp2f1_series(a + 1.0, b + 1.0, c + 1.0, x0)?;
    let ab = a * b;
    let q1 = -(a + b + 1.0);
    while x0 < x {
        let radius = x0.min(1.0 - x0);
        let h = (x - x0).min(0.5 * radius);
        let (nf, ndf) = taylor_step(f, df, x0, h, ab, c, q1)?;
        f = nf;
        df = ndf;
        x0 += h;
        if (x - x0).abs() < 1e-15 {
            break;
        }
    }
    Ok(f)
}

fn taylor_step(
    f: Complex64,
    df: Complex64,
    x0: f64,
    h: f64,
    ab: Complex64,
    c: Complex64,
    q1: Complex64,
) -> Result<(Complex64, Complex64)> {
    // x(1-x) = p0 + p1 u + p2 u², c - (a+b+1)x = q0 + q1 u with u = x - x0
    let p0 = x0 * (1.0 - x0);
    let p1 = 1.0 - 2.0 * x0;
    let p2 = -1.0;
    let q0 = c + q1 * x0;
    // Taylor terms c_k = C_k h^k; the recurrence is
    // p0 (k+2)(k+1) C_{k+2} + (p1 k + q0)(k+1) C_{k+1} + (p2 k(k-1) + q1 k - ab) C_k = 0
    let mut ck = f;
    let mut ck1 = df * h;
    let mut val = ck + ck1;
    let mut dval = df;
    let mut small_run = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let a1 = (q0 + p1 * kf) * (kf + 1.0);
        let a0 = q1 * kf + p2 * kf * (kf - 1.0) - ab;
        let ck2 = -(a1 * ck1 * h + a0 * ck * h * h) / (p0 * (kf + 2.0) * (kf + 1.0));
        val += ck2;
        dval += ck2 * (kf + 2.0) / h;
        let scale = val.norm().max(dval.norm() * h);
        if ck2.norm() <= 1e-3 * SERIES_REL_TOL * scale {
            small_run += 1;
            if small_run >= 3 {
                return Ok((val, dval));
            }
        } else {
            small_run = 0;
        }
        ck = ck1;
        ck1 = ck2;
    }
    Err(Error::Convergence { terms: MAX_TERMS })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_argument_is_one() {
        let v = hyp2f1_c1(Hyp2F1Params::new(c(0.3, 2.0), c(-1.7, 0.4), 0.0)).unwrap();
        assert_eq!(v, c(1.0, 0.0));
    }

    #[test]
    fn geometric_series() {
        let v = hyp2f1_c1(Hyp2F1Params::new(c(1.0, 0.0), c(1.0, 0.0), 0.5)).unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-13);
        let v = hyp2f1_c1(Hyp2F1Params::new(c(1.0, 0.0), c(1.0, 0.0), 0.95)).unwrap();
        assert!((v - c(20.0, 0.0)).norm() < 1e-10, "{v}");
    }

    #[test]
    fn polynomial_case_terminates() {
        // F(-2, b; 1; x) = 1 - 2bx + b(b+1)x²/2
        let b = c(0.5, 0.25);
        let x = 0.4;
        let expect = 1.0 - 2.0 * b * x + b * (b + 1.0) * x * x / 2.0;
        let v = hyp2f1_c1(Hyp2F1Params::new(c(-2.0, 0.0), b, x)).unwrap();
        assert!((v - expect).norm() < 1e-15);
    }

    #[test]
    fn continuation_agrees_with_series_in_overlap() {
        let (a, b, cc) = (c(0.5, 0.7), c(0.5, -0.7), c(1.0, 0.0));
        for x in [0.72, 0.8, 0.9] {
            let s = hyp2f1_series(a, b, cc, x).unwrap();
            let t = hyp2f1_continued(a, b, cc, x).unwrap();
            assert!((s - t).norm() < 1e-12 * s.norm(), "x={x}: {s} vs {t}");
        }
    }

    #[test]
    fn guard_band_is_enforced() {
        let e = hyp2f1_c1(Hyp2F1Params::new(c(0.5, 0.0), c(0.5, 0.0), 1.0 - 1e-7));
        assert!(matches!(e, Err(Error::Domain(_))));
    }

    #[test]
    fn nonpositive_integer_c_is_singular() {
        let e = hyp2f1(c(0.5, 0.0), c(0.5, 0.0), c(-1.0, 0.0), 0.3);
        assert!(matches!(e, Err(Error::Singularity(_))));
    }

    #[test]
    fn slow_series_reports_nonconvergence() {
        // x very close to 1 with large parameters would need > MAX_TERMS terms on the series path
        let e = hyp2f1_series(c(5.0, 0.0), c(5.0, 0.0), c(1.0, 0.0), 1.0 - 1e-7);
        assert!(matches!(e, Err(Error::Convergence { .. })));
    }
}
