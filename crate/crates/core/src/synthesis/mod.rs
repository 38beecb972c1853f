//! Spectral synthesis of the heat kernel,
//!
//!   ρ_{t,n}(g) = ∫_{Ĝ(τ_n)} Φ̃_{τ_n}^U(g) e^{tλ} dμ(U),   ρ(t, g) = Σ_n ρ_{t,n}(g).
//!
//! On g = k_{θ₁} a_s k_{θ₂} one has ρ_{t,n}(g) = e^{-in(θ₁+θ₂)/2} R_n(s) with a real
//! radial profile R_n = R_{-n}. The continuous part of R_n is computed from the
//! ψ-integral of the matrix elements with the ν-quadrature moved inside:
//!
//!   R_n^{cont}(s) = e^{-tn²/4} mean_u[ J e^{inA} e^{-ℓ} G_ε(ℓ) ],
//!   G_ε(ℓ) = Σ_k w_k μ_ε(ν_k) e^{-t(ν_k²/2 + 1/8)} e^{-2iν_k ℓ},
//!
//! which is the same Gauss–Legendre sum over ν of Φ̃·e^{tλ}·density, evaluated
//! once per ψ-node for all K-types at the same time.

mod table;

pub(crate) use table::interp_even;
pub use table::{RadialTable, DEFAULT_TABLE_STEP};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::group::{CartanFrame, GroupElement};
use crate::spectrum::{
    continuous_density, enumerate_discrete, heat_eigenvalue, ktype_tail_bound, ktype_tail_sum,
    nu_cutoff, nu_nodes, nu_tail_bound, KType, RepPoint, Sign,
};
use crate::spherical::{discrete_diagonal, psi_mean_vec};

/// Relative convergence target of the ψ-rule doubling.
pub const PSI_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutoffPolicy {
    Automatic,
    Fixed(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesisConfig {
    pub tol: f64,
    pub t_min: f64,
    pub nu_nodes_per_unit: usize,
    pub ktype_cutoff_policy: CutoffPolicy,
    /// Largest K-type cutoff the automatic policy may choose.
    pub n_max: i64,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            t_min: 0.2,
            nu_nodes_per_unit: 32,
            ktype_cutoff_policy: CutoffPolicy::Automatic,
            n_max: 200,
        }
    }
}

impl SynthesisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !(self.t_min > 0.0) || self.nu_nodes_per_unit == 0 {
            return Err(Error::Domain(format!(
                "invalid synthesis config: tol = {}, t_min = {}, nu_nodes_per_unit = {}",
                self.tol, self.t_min, self.nu_nodes_per_unit
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: f64,
    pub imag_residual: f64,
    pub per_n: BTreeMap<i64, Complex64>,
    /// Bound on the discarded K-types and ν-tails.
    pub tail_bound: f64,
    /// Last ψ-rule doubling change summed over the K-types.
    pub quad_error: f64,
}

/// Fixed truncation and quadrature for one time t: K-type cutoff N, ν-range
/// [0, V] and the ν-nodes. Reusing a plan across nearby points (and nearby t)
/// keeps finite differences of ρ free of truncation jumps.
#[derive(Debug, Clone)]
pub struct KernelPlan {
    pub t: f64,
    pub cutoff: i64,
    pub nu_max: f64,
    pub nu_nodes_per_unit: usize,
    ktype_tail: f64,
    nu_tail: f64,
    nus2: Vec<f64>,
    weights: [Vec<f64>; 2],
    ktype_damping: Vec<f64>,
    discrete: Vec<Vec<(u32, f64)>>,
}

impl KernelPlan {
    pub fn new(t: f64, cfg: &SynthesisConfig) -> Result<Self> {
        cfg.validate()?;
        if !(t >= cfg.t_min) || !t.is_finite() {
            return Err(Error::Tail {
                t,
                tol: cfg.tol,
                max_cutoff: cfg.n_max,
            });
        }
        let half = 0.5 * cfg.tol;
        let cutoff = match cfg.ktype_cutoff_policy {
            CutoffPolicy::Automatic => crate::spectrum::ktype_cutoff(t, half, cfg.n_max)?.0,
            CutoffPolicy::Fixed(n) => n.max(0),
        };
        let v = nu_cutoff(t, KType(0), half / (2 * cutoff + 1) as f64).max(1.0);
        Self::with_parameters(t, cutoff, v, cfg.nu_nodes_per_unit)
    }

    pub fn with_parameters(
        t: f64,
        cutoff: i64,
        nu_max: f64,
        nu_nodes_per_unit: usize,
    ) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("kernel plan needs t > 0, got {t}")));
        }
        let nodes = nu_nodes(nu_max, nu_nodes_per_unit);
        let mut weights = [
            Vec::with_capacity(nodes.len()),
            Vec::with_capacity(nodes.len()),
        ];
        let mut nus2 = Vec::with_capacity(nodes.len());
        for &(nu, w) in &nodes {
            let damp = (-t * (0.5 * nu * nu + 0.125)).exp();
            for (eps, ws) in weights.iter_mut().enumerate() {
                ws.push(w * continuous_density(eps as u8, nu) * damp);
            }
            nus2.push(2.0 * nu);
        }
        let mut ktype_damping = Vec::with_capacity(cutoff as usize + 1);
        let mut discrete = Vec::with_capacity(cutoff as usize + 1);
        let mut nu_tail = 0.0;
        for n in 0..=cutoff {
            let nf = n as f64;
            ktype_damping.push((-0.25 * t * nf * nf).exp());
            let mult = if n == 0 { 1.0 } else { 2.0 };
            nu_tail += mult * nu_tail_bound(t, KType(n), nu_max);
            let reps = enumerate_discrete(KType(n))
                .into_iter()
                .map(|rep| {
                    let m = match rep {
                        RepPoint::Discrete { m, .. } => m,
                        RepPoint::Continuous { .. } => unreachable!(),
                    };
                    let lam = heat_eigenvalue(KType(n), rep).expect("enumerated reps contain n");
                    (m, (t * lam).exp() * (m as f64 - 1.0) / (4.0 * PI))
                })
                .collect();
            discrete.push(reps);
        }
        Ok(Self {
            t,
            cutoff,
            nu_max,
            nu_nodes_per_unit,
            ktype_tail: ktype_tail_sum(t, cutoff)?,
            nu_tail,
            nus2,
            weights,
            ktype_damping,
            discrete,
        })
    }

    /// Same truncation and nodes at another time (for ∂t by differences).
    pub fn at_time(&self, t: f64) -> Result<Self> {
        Self::with_parameters(t, self.cutoff, self.nu_max, self.nu_nodes_per_unit)
    }

    /// Cutoffs doubled: K-types N → 2N + 2, ν-range V → 2V, node density doubled.
    pub fn refined(&self) -> Result<Self> {
        Self::with_parameters(
            self.t,
            2 * self.cutoff + 2,
            2.0 * self.nu_max,
            2 * self.nu_nodes_per_unit,
        )
    }

    pub fn tail_bound(&self) -> f64 {
        self.ktype_tail + self.nu_tail
    }

    pub fn ktype_tail(&self) -> f64 {
        self.ktype_tail
    }

    pub fn nu_tail(&self) -> f64 {
        self.nu_tail
    }

    pub fn nu_node_count(&self) -> usize {
        self.nus2.len()
    }

    /// (G_0(ℓ), G_1(ℓ)).
    #[inline]
    fn g_values(&self, ell: f64) -> (Complex64, Complex64) {
        let (mut r0, mut i0, mut r1, mut i1) = (0.0, 0.0, 0.0, 0.0);
        for ((&k2, &w0), &w1) in self.nus2.iter().zip(&self.weights[0]).zip(&self.weights[1]) {
            let (s, c) = (k2 * ell).sin_cos();
            r0 += w0 * c;
            i0 -= w0 * s;
            r1 += w1 * c;
            i1 -= w1 * s;
        }
        (Complex64::new(r0, i0), Complex64::new(r1, i1))
    }

    /// Radial profiles R_0(s), …, R_N(s) (complex; the imaginary parts are round-off).
    pub fn profile(&self, s: f64) -> Result<Profile> {
        let s = s.abs();
        let dim = self.cutoff as usize + 1;
        let (cont, nodes, delta) = psi_mean_vec(s, dim, PSI_TOL, |node, acc, abs| {
            let (g0, g1) = self.g_values(node.ell);
            let damp = node.jac * (-node.ell).exp();
            let b = [g0 * damp, g1 * damp];
            *abs += b[0].norm() + b[1].norm();
            let c = Complex64::from_polar(1.0, node.angle);
            let mut p = Complex64::new(1.0, 0.0);
            for (n, a) in acc.iter_mut().enumerate() {
                *a += p * b[n & 1] * self.ktype_damping[n];
                p *= c;
            }
        })?;
        let mut values = cont;
        for (n, v) in values.iter_mut().enumerate() {
            for &(m, w) in &self.discrete[n] {
                *v += w * discrete_diagonal(m, n as i64, s)?;
            }
        }
        Ok(Profile {
            s,
            values,
            psi_nodes: nodes,
            psi_delta: delta,
        })
    }

    pub fn rho(&self, g: &GroupElement) -> Result<KernelValue> {
        let frame = CartanFrame::of(g);
        let p = self.profile(frame.s())?;
        Ok(assemble(self, &p, frame.alpha))
    }

    pub fn rho_n(&self, n: KType, g: &GroupElement) -> Result<Complex64> {
        if n.0.abs() > self.cutoff {
            return Err(Error::Domain(format!(
                "K-type {} is beyond the plan cutoff {}",
                n.0, self.cutoff
            )));
        }
        let frame = CartanFrame::of(g);
        let p = self.profile(frame.s())?;
        Ok(Complex64::from_polar(1.0, n.0 as f64 * frame.alpha)
            * p.values[n.0.unsigned_abs() as usize])
    }
}

#[derive(Debug, Clone)]
pub struct Profile {
    pub s: f64,
    pub values: Vec<Complex64>,
    pub psi_nodes: usize,
    pub psi_delta: f64,
}

fn assemble(plan: &KernelPlan, p: &Profile, alpha: f64) -> KernelValue {
    let mut per_n = BTreeMap::new();
    let mut total = p.values[0];
    per_n.insert(0, p.values[0]);
    // ±n are added as a pair before joining the running sum
    for n in 1..=plan.cutoff {
        let r = p.values[n as usize];
        let plus = Complex64::from_polar(1.0, n as f64 * alpha) * r;
        let minus = Complex64::from_polar(1.0, -(n as f64) * alpha) * r;
        per_n.insert(n, plus);
        per_n.insert(-n, minus);
        total += plus + minus;
    }
    KernelValue {
        value: total.re,
        imag_residual: total.im.abs(),
        per_n,
        tail_bound: plan.tail_bound(),
        quad_error: p.psi_delta * (2 * plan.cutoff + 1) as f64,
    }
}

/// ρ_{t,n}(g).
pub fn rho_n(t: f64, n: KType, g: &GroupElement, cfg: &SynthesisConfig) -> Result<Complex64> {
    let mut plan = KernelPlan::new(t, cfg)?;
    if n.0.abs() > plan.cutoff {
        plan = KernelPlan::with_parameters(t, n.0.abs(), plan.nu_max, plan.nu_nodes_per_unit)?;
    }
    plan.rho_n(n, g)
}

/// ρ(t, g) with certified truncation.
pub fn rho(t: f64, g: &GroupElement, cfg: &SynthesisConfig) -> Result<KernelValue> {
    KernelPlan::new(t, cfg)?.rho(g)
}

/// The spherical transform of ρ_{t,n}: e^{tλ} on Ĝ(τ_n)_p.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformSide {
    pub t: f64,
    pub n: KType,
    pub discrete: Vec<(u32, f64)>,
}

impl TransformSide {
    /// ν ↦ e^{tλ(ν)} on the continuous series of parity n mod 2.
    pub fn continuous(&self, nu: f64) -> f64 {
        let nf = self.n.0 as f64;
        (-self.t * (0.25 * nf * nf + 0.5 * (nu * nu + 0.25))).exp()
    }

    /// ∫ |e^{tλ}|² dμ over Ĝ(τ_n)_p, i.e. ∥ρ_{t,n}∥²_{L²}.
    pub fn l2_norm_sq(&self, tol: f64) -> f64 {
        let eps = self.n.parity();
        let v = nu_cutoff(2.0 * self.t, self.n, tol).max(1.0);
        let cont: f64 = nu_nodes(v, 64)
            .into_iter()
            .map(|(nu, w)| w * self.continuous(nu).powi(2) * continuous_density(eps, nu))
            .sum();
        let disc: f64 = self
            .discrete
            .iter()
            .map(|&(m, e)| e * e * (m as f64 - 1.0) / (4.0 * PI))
            .sum();
        cont + disc
    }
}

pub fn rho_transform_side(t: f64, n: KType) -> TransformSide {
    let sign = Sign::for_weight(n.0);
    let discrete = enumerate_discrete(n)
        .into_iter()
        .map(|rep| {
            let m = match rep {
                RepPoint::Discrete { m, .. } => m,
                RepPoint::Continuous { .. } => unreachable!(),
            };
            let lam =
                heat_eigenvalue(n, RepPoint::discrete(m, sign)).expect("enumerated reps contain n");
            (m, (t * lam).exp())
        })
        .collect();
    TransformSide { t, n, discrete }
}

/// Comparison of a plan with its refinement at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub t: f64,
    pub cutoff: i64,
    pub value: f64,
    pub refined_value: f64,
    /// |refined - value|
    pub change: f64,
    pub tail_bound: f64,
    pub quad_error: f64,
    /// Σ |ρ_{t,n}(g)| over the K-types the refined plan adds.
    pub discarded: f64,
    /// Σ ktype_tail_bound over the same K-types.
    pub discarded_bound: f64,
    /// Largest |ρ_{t,n}(g)| / ktype_tail_bound(t, n) over all K-types of the refined plan.
    pub worst_ratio: f64,
}

impl Certification {
    pub fn holds(&self) -> bool {
        self.change <= self.tail_bound + self.quad_error
            && self.discarded <= self.discarded_bound
            && self.worst_ratio <= 1.0
    }
}

pub fn certify(t: f64, g: &GroupElement, cfg: &SynthesisConfig) -> Result<Certification> {
    let plan = KernelPlan::new(t, cfg)?;
    let fine = plan.refined()?;
    let a = plan.rho(g)?;
    let b = fine.rho(g)?;
    let mut discarded = 0.0;
    let mut discarded_bound = 0.0;
    let mut worst: f64 = 0.0;
    for (&n, v) in &b.per_n {
        let bound = ktype_tail_bound(t, KType(n))?;
        worst = worst.max(v.norm() / bound);
        if n.abs() > plan.cutoff {
            discarded += v.norm();
            discarded_bound += bound;
        }
    }
    Ok(Certification {
        t,
        cutoff: plan.cutoff,
        value: a.value,
        refined_value: b.value,
        change: (b.value - a.value).abs(),
        tail_bound: a.tail_bound,
        quad_error: a.quad_error + b.quad_error,
        discarded,
        discarded_bound,
        worst_ratio: worst,
    })
}

/// What a plan at (t, tol) would need, without the n_max budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostEstimate {
    pub t: f64,
    pub tol: f64,
    pub cutoff: i64,
    pub nu_max: f64,
    pub nu_nodes: usize,
}

/// Cost model behind the t_min guard: K-types and ν-nodes needed at (t, tol).
pub fn cost_model(t: f64, tol: f64, nu_nodes_per_unit: usize) -> Result<CostEstimate> {
    let (cutoff, _) = crate::spectrum::ktype_cutoff(t, 0.5 * tol, 1 << 20)?;
    let nu_max = nu_cutoff(t, KType(0), 0.5 * tol / (2 * cutoff + 1) as f64).max(1.0);
    let nu_nodes = nu_nodes(nu_max, nu_nodes_per_unit).len();
    Ok(CostEstimate {
        t,
        tol,
        cutoff,
        nu_max,
        nu_nodes,
    })
}

/// Σ_n bound(t, n) over the kept K-types: a crude a-priori bound on |ρ|.
pub fn kept_mass_bound(t: f64, cutoff: i64) -> Result<f64> {
    let mut s = 0.0;
    for n in -cutoff..=cutoff {
        s += ktype_tail_bound(t, KType(n))?;
    }
    Ok(s)
}
