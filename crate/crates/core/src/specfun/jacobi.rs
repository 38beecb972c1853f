//! Jacobi functions φ_λ^{(α,β)}: the even solution with φ(0) = 1 of
//! φ'' + ((2α+1)coth t + (2β+1)tanh t)φ' + (λ² + (α+β+1)²)φ = 0.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hyp::hyp2f1;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiParams {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub lambda: Complex64,
    pub t: f64,
}

impl JacobiParams {
    pub fn new(alpha: Complex64, beta: Complex64, lambda: Complex64, t: f64) -> Self {
        Self {
            alpha,
            beta,
            lambda,
            t,
        }
    }

    /// Coefficient λ² + (α+β+1)² of the zeroth-order term.
    pub fn potential(&self) -> Complex64 {
        let rho = self.alpha + self.beta + 1.0;
        self.lambda * self.lambda + rho * rho
    }
}

/// φ_λ^{(α,β)}(t) = F((ρ+iλ)/2, (ρ-iλ)/2; α+1; -sinh²t), ρ = α+β+1.
///
/// Evaluated after Pfaff's transformation as
/// cosh(t)^{-(ρ+iλ)} F((ρ+iλ)/2, (α-β+1+iλ)/2; α+1; tanh²t),
/// which keeps the argument in [0, 1). Depends on t only through cosh t and
/// tanh² t, so the result is even in t.
pub fn jacobi_phi(p: JacobiParams) -> Result<Complex64> {
    let alpha = p.alpha;
    if alpha.im == 0.0 && alpha.re <= -1.0 && alpha.re.fract() == 0.0 {
        return Err(Error::Singularity(format!(
            "alpha = {} is a negative integer",
            alpha.re
        )));
    }
    let i = Complex64::i();
    let rho = alpha + p.beta + 1.0;
    let a = (rho + i * p.lambda) / 2.0;
    let b = (rho - i * p.lambda) / 2.0;
    let c = alpha + 1.0;
    let t = p.t.abs();
    if t == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let th = t.tanh();
    let f = hyp2f1(a, c - b, c, th * th)?;
    Ok((-2.0 * a * t.cosh().ln()).exp() * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn normalized_at_origin() {
        let p = JacobiParams::new(re(0.0), re(3.0), Complex64::new(1.2, 0.4), 0.0);
        assert_eq!(jacobi_phi(p).unwrap(), re(1.0));
    }

    #[test]
    fn even_in_t() {
        let p = JacobiParams::new(re(0.0), re(2.0), re(1.4), 0.8);
        let q = JacobiParams { t: -0.8, ..p };
        assert_eq!(jacobi_phi(p).unwrap(), jacobi_phi(q).unwrap());
    }

    #[test]
    fn legendre_special_case() {
        // α = β = 0, λ = i/... : φ_{i}^{(0,0)} has λ² + 1 = 0, so φ ≡ 1
        let p = JacobiParams::new(re(0.0), re(0.0), Complex64::new(0.0, 1.0), 1.3);
        assert!((jacobi_phi(p).unwrap() - re(1.0)).norm() < 1e-13);
    }

    #[test]
    fn negative_integer_alpha_is_rejected() {
        let p = JacobiParams::new(re(-2.0), re(0.0), re(1.0), 0.5);
        assert!(matches!(jacobi_phi(p), Err(Error::Singularity(_))));
    }
}
