//! Closed-form routes for the matrix elements: the Gauss hypergeometric form,
//! the Jacobi-function form of the diagonal, and the terminating polynomial
//! form of the discrete-series diagonal.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{hyp2f1, jacobi_phi, JacobiParams};
use crate::spectrum::RepPoint;

/// Affine maps from the representation parameters to the parameter κ in which
/// the hypergeometric form is written: κ = i(scale·ν + shift) on the continuous
/// series and κ = m_scale·m + m_shift on the discrete series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypergeoNormalization {
    pub nu_scale: f64,
    pub nu_shift: f64,
    pub m_scale: f64,
    pub m_shift: f64,
}

/// Frozen result of the qualification fit (see `qualification::fit_normalization`).
pub const HYPERGEO_NORMALIZATION: HypergeoNormalization = HypergeoNormalization {
    nu_scale: 1.0,
    nu_shift: 0.0,
    m_scale: 0.5,
    m_shift: -0.5,
};

impl HypergeoNormalization {
    pub fn kappa(&self, rep: RepPoint) -> Complex64 {
        match rep {
            RepPoint::Continuous { nu, .. } => {
                Complex64::new(0.0, self.nu_scale * nu + self.nu_shift)
            }
            RepPoint::Discrete { m, .. } => {
                Complex64::new(self.m_scale * m as f64 + self.m_shift, 0.0)
            }
        }
    }
}

fn pochhammer_over_factorial(a: Complex64, k: u64) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    for i in 0..k {
        p *= (a + i as f64) / (i as f64 + 1.0);
    }
    p
}

/// The hypergeometric form with κ = iν:
/// M = P_j T^{|j|} cosh(s/2)^{-2κ-1} F(a, b; 1 + |j|; T²), j = (n₁ - n₂)/2,
/// a = κ + 1/2 + |n₁-n₂|/4 + (n₁+n₂)/4, b = κ + 1/2 + |n₁-n₂|/4 - (n₁+n₂)/4,
/// P_j = (κ + (1 - n₁)/2)_j / j! for j > 0 and (κ + (1 + n₁)/2)_{|j|} / |j|! for j < 0.
/// On the diagonal this is the printed c = 1 form.
pub(crate) fn hypergeometric(kappa: Complex64, n1: i64, n2: i64, s: f64) -> Result<Complex64> {
    let s = s.abs();
    if s == 0.0 {
        return Ok(Complex64::new(if n1 == n2 { 1.0 } else { 0.0 }, 0.0));
    }
    let j = (n1 - n2) / 2;
    let aj = j.unsigned_abs();
    let d = (n1 - n2).abs() as f64 / 4.0;
    let sum = (n1 + n2) as f64 / 4.0;
    let a = kappa + 0.5 + d + sum;
    let b = kappa + 0.5 + d - sum;
    let pref = match j.cmp(&0) {
        std::cmp::Ordering::Greater => {
            pochhammer_over_factorial(kappa + (1.0 - n1 as f64) / 2.0, aj)
        }
        std::cmp::Ordering::Less => pochhammer_over_factorial(kappa + (1.0 + n1 as f64) / 2.0, aj),
        std::cmp::Ordering::Equal => Complex64::new(1.0, 0.0),
    };
    let t = (0.5 * s).tanh();
    let f = hyp2f1(a, b, Complex64::new(1.0 + aj as f64, 0.0), t * t)?;
    let ch = (0.5 * s).cosh();
    Ok(pref * t.powi(aj as i32) * (-(2.0 * kappa + 1.0) * ch.ln()).exp() * f)
}

/// The printed off-diagonal form (c = 1, no Pochhammer prefactor); kept only
/// so the qualification report can record how far it is from the integral.
pub(crate) fn hypergeometric_printed(
    kappa: Complex64,
    n1: i64,
    n2: i64,
    s: f64,
) -> Result<Complex64> {
    let d = (n1 - n2).abs() as f64 / 4.0;
    let sum = (n1 + n2) as f64 / 4.0;
    let a = kappa + 0.5 + d + sum;
    let b = kappa + 0.5 + d - sum;
    let t = (0.5 * s).tanh();
    let f = hyp2f1(a, b, Complex64::new(1.0, 0.0), t * t)?;
    let ch = (0.5 * s).cosh();
    Ok(t.powf(2.0 * d) * (-(2.0 * kappa + 1.0) * ch.ln()).exp() * f)
}

/// cosh(s/2)^n φ_λ^{(0,n)}(s/2) with λ = 2ν (continuous) or λ = i(m - 1) (discrete).
pub(crate) fn jacobi_diagonal(rep: RepPoint, n: i64, s: f64) -> Result<Complex64> {
    let lambda = jacobi_lambda(rep);
    let p = JacobiParams::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(n as f64, 0.0),
        lambda,
        0.5 * s.abs(),
    );
    let ch = (0.5 * s).cosh();
    Ok(jacobi_phi(p)? * ch.powi(n as i32))
}

/// The printed Jacobi prefactor (cosh s)^n; for the qualification report only.
pub(crate) fn jacobi_diagonal_printed(rep: RepPoint, n: i64, s: f64) -> Result<Complex64> {
    let lambda = jacobi_lambda(rep);
    let p = JacobiParams::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(n as f64, 0.0),
        lambda,
        0.5 * s.abs(),
    );
    Ok(jacobi_phi(p)? * s.cosh().powi(n as i32))
}

fn jacobi_lambda(rep: RepPoint) -> Complex64 {
    match rep {
        RepPoint::Continuous { nu, .. } => Complex64::new(2.0 * nu, 0.0),
        RepPoint::Discrete { m, .. } => Complex64::new(0.0, m as f64 - 1.0),
    }
}

/// Diagonal discrete-series element at weight n, |n| ≥ m:
/// cosh(s/2)^{-m} P_k^{(0,m-1)}(1 - 2 tanh²(s/2)), k = (|n| - m)/2.
///
/// The Jacobi polynomial is evaluated by its three-term recurrence, which
/// stays accurate at large s where the ψ-integral loses digits to cancellation.
pub fn discrete_diagonal(m: u32, n: i64, s: f64) -> Result<f64> {
    let abs = n.unsigned_abs();
    let m64 = m as u64;
    if m < 2 || abs < m64 || !(abs - m64).is_multiple_of(2) {
        return Err(Error::Weight {
            n1: n,
            n2: n,
            rep: format!("U(m={m})"),
        });
    }
    let k = (abs - m64) / 2;
    let t = (0.5 * s).tanh();
    let x = 1.0 - 2.0 * t * t;
    let p = jacobi_polynomial(k, 0.0, m as f64 - 1.0, x);
    // cosh(s/2)^{-m} = (1 - T²)^{m/2}
    let ch = (0.5 * s.abs()).cosh();
    Ok(p * (-(m as f64) * ch.ln()).exp())
}

pub(crate) fn jacobi_polynomial(k: u64, alpha: f64, beta: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let ab = alpha + beta;
    let mut p0 = 1.0;
    let mut p1 = (alpha + 1.0) + (ab + 2.0) * (x - 1.0) / 2.0;
    for j in 2..=k {
        let j = j as f64;
        let c = 2.0 * j + ab;
        let a1 = 2.0 * j * (j + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (c * (c - 2.0) * x + alpha * alpha - beta * beta);
        let a3 = 2.0 * (j + alpha - 1.0) * (j + beta - 1.0) * c;
        let p2 = (a2 * p1 - a3 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    p1
}
