//! Independent checks: finite-difference Laplacian, heat-equation residuals,
//! Brownian motion on G and the verification reports built from them.

mod mc;
mod report;
pub mod suites;

pub use mc::{
    mass_grid, mc_compare, mc_sample, observable_grid, quadrature_expectation, sample_mean,
    McConfig, Observable, Orientation, MASS_RANGE,
};
pub use report::VerifyReport;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{exp_sl2, AlgebraElement, BasisDirection, GroupElement};
use crate::spectrum::{heat_eigenvalue, KType, RepPoint};
use crate::spherical::phi_tilde;
use crate::synthesis::{KernelPlan, SynthesisConfig};

/// Central second differences along the one-parameter subgroups of the basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FDScheme {
    pub h: f64,
    pub order: u32,
}

pub const FD_MIN_STEP: f64 = 1e-5;
pub const FD_MAX_STEP: f64 = 1e-2;

impl Default for FDScheme {
    fn default() -> Self {
        Self { h: 1e-3, order: 2 }
    }
}

impl FDScheme {
    pub fn new(h: f64) -> Result<Self> {
        if !(FD_MIN_STEP..=FD_MAX_STEP).contains(&h) {
            return Err(Error::Domain(format!(
                "FD step {h} outside [{FD_MIN_STEP}, {FD_MAX_STEP}]"
            )));
        }
        Ok(Self { h, order: 2 })
    }

    pub fn halved(&self) -> Self {
        Self {
            h: 0.5 * self.h,
            order: self.order,
        }
    }

    /// g·exp(±hZ) for each basis direction Z.
    pub fn stencil(&self, g: &GroupElement) -> [(GroupElement, GroupElement); 3] {
        BasisDirection::ALL.map(|dir| {
            let z = AlgebraElement::basis(dir).scale(self.h);
            (*g * exp_sl2(&z), *g * exp_sl2(&z.scale(-1.0)))
        })
    }
}

/// Σ_Z [f(g e^{hZ}) - 2f(g) + f(g e^{-hZ})]/h².
pub fn fd_laplacian<F>(f: F, g: &GroupElement, scheme: &FDScheme) -> Complex64
where
    F: Fn(&GroupElement) -> Complex64,
{
    let centre = f(g);
    let h2 = scheme.h * scheme.h;
    scheme
        .stencil(g)
        .iter()
        .map(|(p, m)| (f(p) - centre * 2.0 + f(m)) / h2)
        .sum()
}

fn try_fd_laplacian<F>(f: F, g: &GroupElement, scheme: &FDScheme) -> Result<Complex64>
where
    F: Fn(&GroupElement) -> Result<Complex64>,
{
    let centre = f(g)?;
    let h2 = scheme.h * scheme.h;
    let mut acc = Complex64::new(0.0, 0.0);
    for (p, m) in scheme.stencil(g).iter() {
        acc += (f(p)? - centre * 2.0 + f(m)?) / h2;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenCheck {
    pub laplacian: Complex64,
    pub expected: Complex64,
    /// |ΔΦ̃ - λΦ̃| / |λΦ̃|
    pub relative_error: f64,
}

/// Compares the FD Laplacian of Φ̃_{τ_n}^U with λ Φ̃ at g.
pub fn eigen_check(
    n: KType,
    rep: RepPoint,
    g: &GroupElement,
    scheme: &FDScheme,
) -> Result<EigenCheck> {
    let lam = heat_eigenvalue(n, rep)?;
    let lap = try_fd_laplacian(|h| Ok(phi_tilde(n, rep, h)?.value), g, scheme)?;
    let expected = phi_tilde(n, rep, g)?.value * lam;
    Ok(EigenCheck {
        laplacian: lap,
        expected,
        relative_error: (lap - expected).norm() / expected.norm(),
    })
}

/// Added to |ρ| when normalizing heat residuals.
pub const RESIDUAL_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatResidual {
    pub value: f64,
    pub time_derivative: f64,
    pub laplacian: f64,
    /// |∂_t ρ - Δρ| / (|ρ| + floor)
    pub residual: f64,
}

/// Which kernel the residual is taken of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelPart {
    Full,
    KType(KType),
}

fn evaluate(plan: &KernelPlan, part: KernelPart, g: &GroupElement) -> Result<Complex64> {
    match part {
        KernelPart::Full => Ok(Complex64::new(plan.rho(g)?.value, 0.0)),
        KernelPart::KType(n) => plan.rho_n(n, g),
    }
}

/// Time step for the five-point ∂_t: δt = 1e-3·t.
pub const TIME_STEP_FACTOR: f64 = 1e-3;

/// Heat-equation residual of ρ (or of one ρ_{t,n}) at (t, g), with one fixed
/// truncation plan shared by every stencil point and time level.
pub fn heat_residual_part(
    t: f64,
    g: &GroupElement,
    part: KernelPart,
    cfg: &SynthesisConfig,
    scheme: &FDScheme,
) -> Result<HeatResidual> {
    let dt = TIME_STEP_FACTOR * t;
    if t - 2.0 * dt < cfg.t_min {
        return Err(Error::Domain(format!(
            "t = {t} leaves no room for the time stencil above t_min"
        )));
    }
    let plan = KernelPlan::new(t, cfg)?;
    if let KernelPart::KType(n) = part {
        if n.0.abs() > plan.cutoff {
            return Err(Error::Domain(format!(
                "K-type {} beyond cutoff {}",
                n.0, plan.cutoff
            )));
        }
    }
    let value = evaluate(&plan, part, g)?;
    let mut levels = [Complex64::new(0.0, 0.0); 4];
    for (slot, k) in levels.iter_mut().zip([-2.0, -1.0, 1.0, 2.0]) {
        *slot = evaluate(&plan.at_time(t + k * dt)?, part, g)?;
    }
    let d_t = (levels[0] - levels[1] * 8.0 + levels[2] * 8.0 - levels[3]) / (12.0 * dt);
    let lap = try_fd_laplacian(|h| evaluate(&plan, part, h), g, scheme)?;
    // ρ_{t,n} is complex off the symmetric axis; compare the complex numbers
    let residual = (d_t - lap).norm() / (value.norm() + RESIDUAL_FLOOR);
    Ok(HeatResidual {
        value: value.re,
        time_derivative: d_t.re,
        laplacian: lap.re,
        residual,
    })
}

pub fn heat_residual(
    t: f64,
    g: &GroupElement,
    cfg: &SynthesisConfig,
    scheme: &FDScheme,
) -> Result<f64> {
    Ok(heat_residual_part(t, g, KernelPart::Full, cfg, scheme)?.residual)
}

/// The group points used by the residual checks: e, a_{1/2}, a_1, k_{π/3}a_1 and
/// a_1 n_{1/2} rebuilt from its Iwasawa coordinates.
pub fn residual_points() -> Vec<(String, GroupElement)> {
    let an = GroupElement::a(1.0) * GroupElement::n(0.5);
    let iw = crate::group::iwasawa(&an).to_element();
    vec![
        ("e".into(), GroupElement::identity()),
        ("a(0.5)".into(), GroupElement::a(0.5)),
        ("a(1)".into(), GroupElement::a(1.0)),
        (
            "k(pi/3)a(1)".into(),
            GroupElement::k(std::f64::consts::FRAC_PI_3) * GroupElement::a(1.0),
        ),
        ("a(1)n(0.5)".into(), iw),
    ]
}
