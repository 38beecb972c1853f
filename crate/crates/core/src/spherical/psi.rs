//! The ψ-integral of the matrix elements,
//!
//!   M_{n₁n₂}(s) = (1/2π) ∫ (1 - T e^{iψ})^{α} (1 - T e^{-iψ})^{β} e^{i(n₂-n₁)ψ/2} dψ · cosh(s/2)^{-σ},
//!
//! with T = tanh(s/2), α = (n₁ - σ)/2, β = (-n₁ - σ)/2.
//!
//! The substitution e^{iψ} = (w + r)/(1 + r w), w = e^{iu}, r = tanh(s/4) moves
//! both branch points symmetrically to |w| = 1/r, so the trapezoid rule in u
//! converges like r^N instead of T^N. It also gives the cancellation-free form
//! cosh(s/2)(1 - T e^{iψ}) = (1 - r w)/(1 + r w), so the integrand is
//! exp(-σℓ + i n₁ A) e^{ijψ} J(u) with ℓ + iA = log((1 - rw)/(1 + rw)).

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const PSI_MIN_NODES: usize = 16;
pub const PSI_MAX_NODES: usize = 1 << 17;
pub const PSI_REL_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy)]
pub(crate) struct PsiGeometry {
    r: f64,
    one_minus_r: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PsiNode {
    /// log|cosh(s/2)(1 - T e^{iψ})|
    pub ell: f64,
    /// arg(1 - T e^{iψ})
    pub angle: f64,
    /// e^{iψ}
    pub z: Complex64,
    /// dψ/du
    pub jac: f64,
}

impl PsiGeometry {
    pub fn new(s: f64) -> Self {
        let s = s.abs();
        let e = (-0.5 * s).exp();
        // 1 - tanh(s/4) = 2e^{-s/2}/(1 + e^{-s/2})
        let one_minus_r = 2.0 * e / (1.0 + e);
        Self {
            r: 1.0 - one_minus_r,
            one_minus_r,
        }
    }

    #[cfg(test)]
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn node(&self, u: f64) -> PsiNode {
        let r = self.r;
        let om = self.one_minus_r;
        let (su, cu) = (0.5 * u).sin_cos();
        let sin_u = 2.0 * su * cu;
        let d_minus = om * om + 4.0 * r * su * su;
        let d_plus = om * om + 4.0 * r * cu * cu;
        let arg_minus = (-r * sin_u).atan2(om + 2.0 * r * su * su);
        let arg_plus = (r * sin_u).atan2(om + 2.0 * r * cu * cu);
        let num = Complex64::new(2.0 * cu * cu - om, sin_u);
        let den = Complex64::new(om + 2.0 * r * cu * cu, r * sin_u);
        let z = num / den;
        PsiNode {
            ell: 0.5 * (d_minus.ln() - d_plus.ln()),
            angle: arg_minus - arg_plus,
            z: z / z.norm(),
            jac: om * (1.0 + r) / d_plus,
        }
    }
}

/// exp(-σℓ + i n₁ A) e^{ijψ} J at one node.
#[inline]
pub(crate) fn integrand(node: &PsiNode, sigma: Complex64, n1: i64, j: i64) -> Complex64 {
    let e = -sigma * node.ell + Complex64::new(0.0, n1 as f64 * node.angle);
    let phase = if j == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        node.z.powi(j as i32)
    };
    e.exp() * phase * node.jac
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct ScalarPsi {
    pub value: Complex64,
    pub delta: f64,
}

/// Mean over u ∈ [0, 2π) of the mapped integrand by the nested trapezoid rule.
pub(crate) fn psi_mean(s: f64, sigma: Complex64, n1: i64, n2: i64) -> Result<ScalarPsi> {
    let j = (n2 - n1) / 2;
    let start = 2 * j.unsigned_abs() as usize + 2;
    let (v, _, delta) = psi_mean_vec_from(s, 1, PSI_REL_TOL, start, |node, acc, abs| {
        let v = integrand(node, sigma, n1, j);
        acc[0] += v;
        *abs += v.norm();
    })?;
    Ok(ScalarPsi { value: v[0], delta })
}

/// Vector-valued nested trapezoid: `f` adds each node's contribution into the
/// accumulator (already multiplied by nothing; the rule weight is applied here).
/// Returns the means, node count and the last doubling change in sup norm.
pub(crate) fn psi_mean_vec<F>(
    s: f64,
    dim: usize,
    rel_tol: f64,
    f: F,
) -> Result<(Vec<Complex64>, usize, f64)>
where
    F: FnMut(&PsiNode, &mut [Complex64], &mut f64),
{
    psi_mean_vec_from(s, dim, rel_tol, PSI_MIN_NODES, f)
}

fn psi_mean_vec_from<F>(
    s: f64,
    dim: usize,
    rel_tol: f64,
    start: usize,
    mut f: F,
) -> Result<(Vec<Complex64>, usize, f64)>
where
    F: FnMut(&PsiNode, &mut [Complex64], &mut f64),
{
    let geo = PsiGeometry::new(s);
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut sum = vec![Complex64::new(0.0, 0.0); dim];
    let mut abs_sum = 0.0;
    let mut n = start.max(PSI_MIN_NODES).next_power_of_two();
    for k in 0..n {
        f(
            &geo.node(two_pi * k as f64 / n as f64),
            &mut sum,
            &mut abs_sum,
        );
    }
    let mut prev: Vec<Complex64> = sum.iter().map(|v| v / n as f64).collect();
    let mut scratch = vec![Complex64::new(0.0, 0.0); dim];
    loop {
        // new nodes sit at the odd multiples of 2π/(2n)
        for v in scratch.iter_mut() {
            *v = Complex64::new(0.0, 0.0);
        }
        let mut abs_new = 0.0;
        let h = two_pi / (2 * n) as f64;
        for k in 0..n {
            f(
                &geo.node(h * (2 * k + 1) as f64),
                &mut scratch,
                &mut abs_new,
            );
        }
        for (a, b) in sum.iter_mut().zip(&scratch) {
            *a += b;
        }
        abs_sum += abs_new;
        n *= 2;
        let cur: Vec<Complex64> = sum.iter().map(|v| v / n as f64).collect();
        let delta = cur
            .iter()
            .zip(&prev)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        let peak = cur.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        let floor = rel_tol * abs_sum / n as f64;
        if delta <= rel_tol * peak + floor || delta == 0.0 {
            return Ok((cur, n, delta));
        }
        if n >= PSI_MAX_NODES {
            return Err(Error::Convergence { terms: n });
        }
        prev = cur;
    }
}
