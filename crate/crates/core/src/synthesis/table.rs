//! Tabulated radial profiles R_n(s) on a uniform s-grid, for integrands that
//! need ρ at many points (Haar quadrature, convolution, Monte Carlo comparison).

use num_complex::Complex64;
use rayon::prelude::*;
use std::ops::{Add, Mul};

use super::KernelPlan;
use crate::error::Result;
use crate::group::{CartanFrame, GroupElement};

pub const DEFAULT_TABLE_STEP: f64 = 0.02;

#[derive(Debug, Clone)]
pub struct RadialTable {
    pub t: f64,
    pub cutoff: i64,
    pub step: f64,
    pub s_max: f64,
    pub tail_bound: f64,
    /// values[n][i] = R_n(i·step)
    values: Vec<Vec<f64>>,
}

impl RadialTable {
    /// Tabulates R_0..R_N on [0, s_max]; beyond s_max the profiles are taken as 0.
    pub fn build(plan: &KernelPlan, s_max: f64, step: f64) -> Result<Self> {
        let count = (s_max / step).ceil() as usize + 1;
        let profiles: Vec<Vec<Complex64>> = (0..count)
            .into_par_iter()
            .map(|i| plan.profile(i as f64 * step).map(|p| p.values))
            .collect::<Result<_>>()?;
        let dim = plan.cutoff as usize + 1;
        let mut values = vec![Vec::with_capacity(count); dim];
        for p in &profiles {
            for (n, v) in p.iter().enumerate() {
                values[n].push(v.re);
            }
        }
        Ok(Self {
            t: plan.t,
            cutoff: plan.cutoff,
            step,
            s_max: (count - 1) as f64 * step,
            tail_bound: plan.tail_bound(),
            values,
        })
    }

    /// Default range 6√t + 4 at the default step.
    pub fn for_plan(plan: &KernelPlan) -> Result<Self> {
        Self::build(plan, 6.0 * plan.t.sqrt() + 4.0, DEFAULT_TABLE_STEP)
    }

    /// R_n(s) by four-point Lagrange interpolation; R_n is even in s.
    pub fn profile(&self, n: i64, s: f64) -> f64 {
        let n = n.unsigned_abs() as usize;
        if n > self.cutoff as usize {
            return 0.0;
        }
        interp_even(&self.values[n], self.step, s)
    }

    /// ρ_{t,n}(g) = e^{-in(θ₁+θ₂)/2} R_n(s).
    pub fn rho_n(&self, n: i64, g: &GroupElement) -> Complex64 {
        let f = CartanFrame::of(g);
        Complex64::from_polar(self.profile(n, f.s()), n as f64 * f.alpha)
    }

    /// ρ(t, g) = R_0(s) + 2 Σ_{n≥1} cos(n(θ₁+θ₂)/2) R_n(s).
    pub fn rho(&self, g: &GroupElement) -> f64 {
        let f = CartanFrame::of(g);
        self.rho_frame(&f)
    }

    pub fn rho_frame(&self, f: &CartanFrame) -> f64 {
        let s = f.s();
        let mut acc = self.profile(0, s);
        for n in 1..=self.cutoff {
            acc += 2.0 * (n as f64 * f.alpha).cos() * self.profile(n, s);
        }
        acc
    }
}

/// Four-point Lagrange interpolation of an even function sampled at i·step,
/// i = 0..len; zero beyond the last sample.
pub(crate) fn interp_even<T>(col: &[T], step: f64, s: f64) -> T
where
    T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
{
    let s = s.abs();
    let last = col.len() as i64 - 1;
    if last < 1 || s > last as f64 * step {
        return if last == 0 && s == 0.0 {
            col[0]
        } else {
            T::default()
        };
    }
    let x = s / step;
    let i = (x.floor() as i64).min(last - 1).max(0);
    let u = x - i as f64;
    let at = |k: i64| -> T {
        if k < 0 {
            col[(-k) as usize]
        } else if k > last {
            T::default()
        } else {
            col[k as usize]
        }
    };
    // weights on nodes -1, 0, 1, 2
    let w0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
    let w1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
    let w2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
    let w3 = (u + 1.0) * u * (u - 1.0) / 6.0;
    at(i - 1) * w0 + at(i) * w1 + at(i + 1) * w2 + at(i + 2) * w3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{exp_sl2, AlgebraElement};
    use crate::synthesis::SynthesisConfig;

    #[test]
    fn table_interpolates_direct_values() {
        let plan = KernelPlan::new(1.0, &SynthesisConfig::default()).unwrap();
        let table = RadialTable::build(&plan, 6.0, 0.02).unwrap();
        let g = exp_sl2(&AlgebraElement::new(0.5, -0.8, 0.6));
        let direct = plan.rho(&g).unwrap().value;
        let tab = table.rho(&g);
        assert!(
            (direct - tab).abs() < 1e-8 * direct.abs(),
            "{direct} vs {tab}"
        );
        assert_eq!(table.profile(0, 7.0), 0.0);
    }
}
