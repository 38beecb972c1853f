//! τ_n-radial functions and their spherical transforms.
//!
//! A τ_n-radial F is fixed by its profile on A: F(k_{θ₁} a_s k_{θ₂}) = e^{-in(θ₁+θ₂)/2} F(a_s).
//! Its transform is F̂(U) = ∫ Φ^U(g) F(g) dg and the inverse is
//! F(g) = ∫ Φ^U(g⁻¹) F̂(U) dμ(U), where Φ^U(g⁻¹) = Φ̃^U(g).

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{haar_integrate, k_integrate, CartanFrame, GroupElement, HaarGrid};
use crate::specfun::{composite_nodes, GaussLegendre};
use crate::spectrum::{continuous_density, enumerate_discrete, nu_nodes, KType, RepPoint};
use crate::spherical::{diagonal_element, phi, phi_tilde};
use crate::synthesis::{interp_even, RadialTable, TransformSide};

/// Points where |F| is below this are skipped by the Haar-grid transform.
pub const SKIP_FLOOR: f64 = 1e-30;

type ProfileFn = dyn Fn(f64) -> Complex64 + Send + Sync;

#[derive(Clone)]
pub struct RadialFunction {
    pub n: KType,
    profile: Arc<ProfileFn>,
}

impl std::fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialFunction")
            .field("n", &self.n)
            .finish_non_exhaustive()
    }
}

impl RadialFunction {
    /// `profile(s)` gives F(a_s) for s ≥ 0.
    pub fn new<F>(n: KType, profile: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            n,
            profile: Arc::new(profile),
        }
    }

    /// F(a_s) = e^{-σ s²}.
    pub fn gaussian(n: KType, sigma: f64) -> Self {
        Self::new(n, move |s| Complex64::new((-sigma * s * s).exp(), 0.0))
    }

    /// Profile sampled at s = i·step, interpolated and zero past the last sample.
    pub fn from_samples(n: KType, step: f64, values: Vec<Complex64>) -> Self {
        Self::new(n, move |s| interp_even(&values, step, s))
    }

    /// The K-type n component of a tabulated heat kernel.
    pub fn from_table(table: Arc<RadialTable>, n: KType) -> Self {
        Self::new(n, move |s| Complex64::new(table.profile(n.0, s), 0.0))
    }

    pub fn zero(n: KType) -> Self {
        Self::new(n, |_| Complex64::new(0.0, 0.0))
    }

    pub fn profile(&self, s: f64) -> Complex64 {
        (self.profile)(s.abs())
    }

    pub fn eval(&self, g: &GroupElement) -> Complex64 {
        self.eval_frame(&CartanFrame::of(g))
    }

    pub fn eval_frame(&self, f: &CartanFrame) -> Complex64 {
        // e^{-in(θ₁+θ₂)/2} = e^{inα}
        Complex64::from_polar(1.0, self.n.0 as f64 * f.alpha) * self.profile(f.s())
    }
}

/// P_{τ_n} f(g) = ∫_K τ_n(k) f(gk) dk with τ_n(k_θ) = e^{inθ/2}.
pub fn project_ktype<F>(f: F, n: KType, g: &GroupElement, k_nodes: usize) -> Complex64
where
    F: Fn(&GroupElement) -> Complex64,
{
    let nf = n.0 as f64;
    k_integrate(
        |theta| Complex64::from_polar(1.0, 0.5 * nf * theta) * f(&(*g * GroupElement::k(theta))),
        k_nodes,
    )
}

fn check_rep(n: KType, rep: RepPoint) -> Result<()> {
    if !rep.contains(n) {
        return Err(Error::SpectrumMismatch {
            n: n.0,
            rep: rep.label(),
        });
    }
    Ok(())
}

/// F̂(U) = ∫_G Φ^U(g) F(g) dg on the Haar grid.
pub fn spherical_transform(
    f: &RadialFunction,
    rep: RepPoint,
    grid: &HaarGrid,
) -> Result<Complex64> {
    check_rep(f.n, rep)?;
    let n = f.n;
    // Φ is continuous in g, so per-point failures cannot occur for valid reps;
    // they are still surfaced rather than silently zeroed
    let failure = std::sync::Mutex::new(None);
    let v = haar_integrate(
        |g| {
            let fv = f.eval(g);
            // |Φ| ≤ 1, so skipped points contribute below SKIP_FLOOR·volume
            if fv.norm() < SKIP_FLOOR {
                return Complex64::new(0.0, 0.0);
            }
            match phi(n, rep, g) {
                Ok(p) => p.value * fv,
                Err(e) => {
                    failure.lock().unwrap().get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        grid,
    )?;
    match failure.into_inner().unwrap() {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Radial integrals reduce to ∫_G h(s(g)) dg = 2π ∫_0^∞ h(s) sinh(s) ds.
pub fn radial_integrate<F>(h: F, s_max: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let rule = GaussLegendre::new(20);
    composite_nodes(&[0.0, s_max], 0.5, &rule)
        .into_iter()
        .map(|(s, w)| h(s) * (w * s.sinh()))
        .sum::<Complex64>()
        * (2.0 * PI)
}

/// F̂(U) through the one-dimensional Cartan reduction of the same integral.
pub fn spherical_transform_radial(
    f: &RadialFunction,
    rep: RepPoint,
    s_max: f64,
) -> Result<Complex64> {
    check_rep(f.n, rep)?;
    let rule = GaussLegendre::new(20);
    let mut acc = Complex64::new(0.0, 0.0);
    for (s, w) in composite_nodes(&[0.0, s_max], 0.5, &rule) {
        let m = diagonal_element(rep, f.n.0, s)?.value;
        acc += m.conj() * f.profile(s) * (w * s.sinh());
    }
    Ok(acc * (2.0 * PI))
}

type SpectralFn = dyn Fn(f64) -> Complex64 + Send + Sync;

/// A function on Ĝ(τ_n)_p: values on the continuous series of parity n mod 2
/// for ν ∈ (0, nu_max] and on the listed discrete series.
#[derive(Clone)]
pub struct SpectralFunction {
    pub n: KType,
    pub nu_max: f64,
    continuous: Arc<SpectralFn>,
    pub discrete: Vec<(u32, Complex64)>,
}

impl std::fmt::Debug for SpectralFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralFunction")
            .field("n", &self.n)
            .field("nu_max", &self.nu_max)
            .field("discrete", &self.discrete)
            .finish_non_exhaustive()
    }
}

impl SpectralFunction {
    pub fn new<F>(n: KType, nu_max: f64, continuous: F, discrete: Vec<(u32, Complex64)>) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            n,
            nu_max,
            continuous: Arc::new(continuous),
            discrete,
        }
    }

    /// e^{tλ} on Ĝ(τ_n)_p.
    pub fn heat(side: &TransformSide, nu_max: f64) -> Self {
        let s = side.clone();
        let discrete = side
            .discrete
            .iter()
            .map(|&(m, e)| (m, Complex64::new(e, 0.0)))
            .collect();
        Self::new(
            side.n,
            nu_max,
            move |nu| Complex64::new(s.continuous(nu), 0.0),
            discrete,
        )
    }

    /// Samples F̂ of a radial function at the ν-nodes and at every discrete series
    /// containing τ_n, using the radial transform.
    pub fn of_radial(
        f: &RadialFunction,
        nu_max: f64,
        nodes_per_unit: usize,
        s_max: f64,
    ) -> Result<SampledSpectrum> {
        let eps = f.n.parity();
        let mut cont = Vec::new();
        for (nu, w) in nu_nodes(nu_max, nodes_per_unit) {
            let v = spherical_transform_radial(f, RepPoint::continuous(eps, nu), s_max)?;
            cont.push((nu, w, v));
        }
        let mut discrete = Vec::new();
        for rep in enumerate_discrete(f.n) {
            if let RepPoint::Discrete { m, .. } = rep {
                discrete.push((m, spherical_transform_radial(f, rep, s_max)?));
            }
        }
        Ok(SampledSpectrum {
            n: f.n,
            continuous: cont,
            discrete,
        })
    }

    pub fn continuous(&self, nu: f64) -> Complex64 {
        (self.continuous)(nu)
    }
}

/// F̂ tabulated on ν-quadrature nodes (ν, weight, value) plus discrete values.
#[derive(Debug, Clone)]
pub struct SampledSpectrum {
    pub n: KType,
    pub continuous: Vec<(f64, f64, Complex64)>,
    pub discrete: Vec<(u32, Complex64)>,
}

impl SampledSpectrum {
    /// ∫ |F̂|² dμ.
    pub fn l2_norm_sq(&self) -> f64 {
        let eps = self.n.parity();
        let c: f64 = self
            .continuous
            .iter()
            .map(|&(nu, w, v)| w * v.norm_sqr() * continuous_density(eps, nu))
            .sum();
        let d: f64 = self
            .discrete
            .iter()
            .map(|&(m, v)| v.norm_sqr() * (m as f64 - 1.0) / (4.0 * PI))
            .sum();
        c + d
    }

    /// ∫ Φ^U(g⁻¹) F̂(U) dμ(U) from the sampled values.
    pub fn inverse(&self, g: &GroupElement) -> Result<Complex64> {
        let eps = self.n.parity();
        let mut acc = Complex64::new(0.0, 0.0);
        for &(nu, w, v) in &self.continuous {
            let p = phi_tilde(self.n, RepPoint::continuous(eps, nu), g)?.value;
            acc += p * v * (w * continuous_density(eps, nu));
        }
        Ok(acc + discrete_inverse(self.n, &self.discrete, g)?)
    }
}

fn discrete_inverse(
    n: KType,
    discrete: &[(u32, Complex64)],
    g: &GroupElement,
) -> Result<Complex64> {
    let sign = crate::spectrum::Sign::for_weight(n.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for &(m, v) in discrete {
        let p = phi_tilde(n, RepPoint::discrete(m, sign), g)?.value;
        acc += p * v * ((m as f64 - 1.0) / (4.0 * PI));
    }
    Ok(acc)
}

/// F(g) = ∫_{Ĝ(τ_n)} Φ^U(g⁻¹) F̂(U) dμ(U).
pub fn inverse_spherical_transform(
    fhat: &SpectralFunction,
    g: &GroupElement,
    nodes_per_unit: usize,
) -> Result<Complex64> {
    let n = fhat.n;
    let eps = n.parity();
    let mut acc = Complex64::new(0.0, 0.0);
    for (nu, w) in nu_nodes(fhat.nu_max, nodes_per_unit) {
        let v = fhat.continuous(nu);
        if v == Complex64::new(0.0, 0.0) {
            continue;
        }
        let p = phi_tilde(n, RepPoint::continuous(eps, nu), g)?.value;
        acc += p * v * (w * continuous_density(eps, nu));
    }
    Ok(acc + discrete_inverse(n, &fhat.discrete, g)?)
}

/// (F₁ * F₂)(g) = ∫_G F₁(g'⁻¹ g) F₂(g') dg'.
pub fn convolve(
    f1: &RadialFunction,
    f2: &RadialFunction,
    g: &GroupElement,
    grid: &HaarGrid,
) -> Result<Complex64> {
    if f1.n != f2.n {
        return Err(Error::Domain(format!(
            "convolution of K-types {} and {}",
            f1.n.0, f2.n.0
        )));
    }
    haar_integrate(|h| f1.eval(&(h.inverse() * *g)) * f2.eval(h), grid)
}

/// Profile of F₁ * F₂ sampled at s = i·step on [0, s_max].
pub fn convolve_profile(
    f1: &RadialFunction,
    f2: &RadialFunction,
    s_max: f64,
    step: f64,
    grid: &HaarGrid,
) -> Result<RadialFunction> {
    let count = (s_max / step).round() as usize + 1;
    let values = (0..count)
        .map(|i| convolve(f1, f2, &GroupElement::a(i as f64 * step), grid))
        .collect::<Result<Vec<_>>>()?;
    Ok(RadialFunction::from_samples(f1.n, step, values))
}

/// ∥F∥² = ∫_G |F|² dg on the Haar grid.
pub fn l2_norm_sq(f: &RadialFunction, grid: &HaarGrid) -> Result<f64> {
    Ok(haar_integrate(|g| Complex64::new(f.eval(g).norm_sqr(), 0.0), grid)?.re)
}
