//! The τ_n-spherical dual: continuous series U_{ε,ν} and discrete series U_m^±,
//! their Casimir characters, heat eigenvalues, Plancherel weights and the tail
//! bounds used to truncate the spectral synthesis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::{composite_nodes, GaussLegendre};

/// Gauss–Legendre order of one ν panel.
pub const NU_PANEL_ORDER: usize = 32;
/// ν-panels are split here so the tanh/coth curvature near 0 sits in its own panel.
pub const NU_SPLIT: f64 = 1.0;

/// The character τ_n(k_θ) = e^{inθ/2} of K.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KType(pub i64);

impl KType {
    pub fn n(self) -> i64 {
        self.0
    }

    /// Parity ε of the continuous series containing τ_n.
    pub fn parity(self) -> u8 {
        self.0.rem_euclid(2) as u8
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// U_m^- carries the weights n ≥ m, U_m^+ the weights n ≤ -m.
    pub fn for_weight(n: i64) -> Sign {
        if n > 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RepPoint {
    Continuous { eps: u8, nu: f64 },
    Discrete { m: u32, sign: Sign },
}

impl RepPoint {
    pub fn continuous(eps: u8, nu: f64) -> Self {
        RepPoint::Continuous { eps, nu }
    }

    pub fn discrete(m: u32, sign: Sign) -> Self {
        RepPoint::Discrete { m, sign }
    }

    /// Whether `n` is a weight of this representation.
    pub fn has_weight(&self, n: i64) -> bool {
        match *self {
            RepPoint::Continuous { eps, .. } => n.rem_euclid(2) == eps as i64,
            RepPoint::Discrete { m, sign } => {
                let m = m as i64;
                match sign {
                    Sign::Minus => n >= m && (n - m) % 2 == 0,
                    Sign::Plus => n <= -m && (n + m) % 2 == 0,
                }
            }
        }
    }

    /// Membership in Ĝ(τ_n)_p.
    pub fn contains(&self, n: KType) -> bool {
        match *self {
            RepPoint::Continuous { eps, nu } => eps <= 1 && nu > 0.0 && self.has_weight(n.0),
            RepPoint::Discrete { m, .. } => m >= 2 && self.has_weight(n.0),
        }
    }

    /// σ = 1 + 2iν for U_{ε,ν} and σ = m for U_m^±: the exponent shared by all
    /// matrix-element formulas.
    pub fn exponent(&self) -> Complex64 {
        match *self {
            RepPoint::Continuous { nu, .. } => Complex64::new(1.0, 2.0 * nu),
            RepPoint::Discrete { m, .. } => Complex64::new(m as f64, 0.0),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            RepPoint::Continuous { eps, nu } => format!("U(eps={eps},nu={nu})"),
            RepPoint::Discrete { m, sign } => {
                format!("U(m={m},{})", if sign == Sign::Plus { "+" } else { "-" })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub rep: RepPoint,
    pub n: KType,
    pub eigenvalue: f64,
    pub weight: f64,
}

impl SpectralPoint {
    pub fn new(n: KType, rep: RepPoint) -> Result<Self> {
        Ok(Self {
            rep,
            n,
            eigenvalue: heat_eigenvalue(n, rep)?,
            weight: plancherel_weight(rep)?,
        })
    }
}

/// χ_U(C_G).
pub fn casimir_character(rep: RepPoint) -> f64 {
    match rep {
        RepPoint::Continuous { nu, .. } => -0.5 * (nu * nu + 0.25),
        RepPoint::Discrete { m, .. } => {
            let m = m as f64;
            m * (m - 2.0) / 8.0
        }
    }
}

fn casimir_unchecked(n: KType, rep: RepPoint) -> f64 {
    let nf = n.0 as f64;
    -0.25 * nf * nf + casimir_character(rep)
}

/// λ = -n²/4 + χ_U(C_G), the eigenvalue of Δ_G on Φ̃_{τ_n}^U.
pub fn heat_eigenvalue(n: KType, rep: RepPoint) -> Result<f64> {
    // the ν → 0⁺ limit is allowed here so the boundary eigenvalue can be queried
    let member = match rep {
        RepPoint::Continuous { eps, nu } => eps <= 1 && nu >= 0.0 && rep.has_weight(n.0),
        RepPoint::Discrete { .. } => rep.contains(n),
    };
    if !member {
        return Err(Error::SpectrumMismatch {
            n: n.0,
            rep: rep.label(),
        });
    }
    let lam = casimir_unchecked(n, rep);
    debug_assert!(lam < 0.0);
    Ok(lam)
}

/// Plancherel density in ν (continuous series) or point mass (discrete series).
pub fn plancherel_weight(rep: RepPoint) -> Result<f64> {
    match rep {
        RepPoint::Continuous { eps, nu } => {
            if !(nu > 0.0) || !nu.is_finite() {
                return Err(Error::Domain(format!(
                    "Plancherel density needs nu > 0, got {nu}"
                )));
            }
            Ok(continuous_density(eps, nu))
        }
        RepPoint::Discrete { m, .. } => {
            if m < 2 {
                return Err(Error::Domain(format!(
                    "discrete series needs m >= 2, got {m}"
                )));
            }
            Ok((m as f64 - 1.0) / (4.0 * PI))
        }
    }
}

/// (1/2π) ν tanh(πν) for ε = 0, (1/2π) ν coth(πν) for ε = 1; continuous at ν = 0.
pub fn continuous_density(eps: u8, nu: f64) -> f64 {
    let x = PI * nu;
    let v = if eps == 0 {
        nu * x.tanh()
    } else if x < 1e-8 {
        1.0 / PI + nu * x / 3.0
    } else {
        nu / x.tanh()
    };
    v / (2.0 * PI)
}

/// The discrete series containing τ_n.
pub fn enumerate_discrete(n: KType) -> Vec<RepPoint> {
    let abs = n.0.unsigned_abs();
    let sign = Sign::for_weight(n.0);
    let start = if abs.is_multiple_of(2) { 2 } else { 3 };
    (start..=abs)
        .step_by(2)
        .map(|m| RepPoint::discrete(m as u32, sign))
        .collect()
}

/// Upper bound for ∫ e^{Tλ} dμ over Ĝ(τ_n)_p.
pub fn ktype_tail_bound(t: f64, n: KType) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("tail bound needs T > 0, got {t}")));
    }
    let nf = n.0 as f64;
    let n2 = nf * nf;
    let cont = (-t / 8.0).exp() / PI * (1.0 + (-t / 2.0).exp() / t) * (-t * n2 / 4.0).exp();
    let disc = (-t * n2 / 8.0).exp() * n2 / (8.0 * PI);
    Ok(cont + disc)
}

/// Σ_{|n| > cutoff} ktype_tail_bound(t, n).
pub fn ktype_tail_sum(t: f64, cutoff: i64) -> Result<f64> {
    let mut sum = 0.0;
    let mut n = cutoff.max(-1) + 1;
    loop {
        let b = ktype_tail_bound(t, KType(n))?;
        let factor = if n == 0 { 1.0 } else { 2.0 };
        sum += factor * b;
        // terms are eventually Gaussian; stop when they no longer register
        if n > 2 && b <= 1e-18 * sum.max(1e-300) {
            break;
        }
        if b == 0.0 {
            break;
        }
        n += 1;
    }
    Ok(sum)
}

/// Smallest N ≤ n_max with Σ_{|n|>N} ktype_tail_bound(t, n) ≤ tol.
pub fn ktype_cutoff(t: f64, tol: f64, n_max: i64) -> Result<(i64, f64)> {
    for n in 0..=n_max {
        let tail = ktype_tail_sum(t, n)?;
        if tail <= tol {
            return Ok((n, tail));
        }
    }
    Err(Error::Tail {
        t,
        tol,
        max_cutoff: n_max,
    })
}

/// Upper bound on ∫_V^∞ e^{tλ} dμ(U_{ε,ν}) for the continuous series at weight n.
///
/// Uses ν coth(πν) ≤ ν (1 + 1/(πV)) on [V, ∞) and ∫_V^∞ ν e^{-tν²/2} dν = e^{-tV²/2}/t.
/// At V = 0 it switches to ν coth(πν) ≤ ν + 1/π.
pub fn nu_tail_bound(t: f64, n: KType, v: f64) -> f64 {
    let nf = n.0 as f64;
    let base = (-t * (0.125 + 0.25 * nf * nf)).exp() / (2.0 * PI);
    let slope = (-t * v * v / 2.0).exp() / t;
    if v <= 0.0 {
        return base * (1.0 / t + (0.5 / (PI * t)).sqrt());
    }
    let full = base * (1.0 / t + (0.5 / (PI * t)).sqrt());
    (base * (1.0 + 1.0 / (PI * v)) * slope).min(full)
}

/// Smallest V whose discarded continuous tail is at most `tol`.
pub fn nu_cutoff(t: f64, n: KType, tol: f64) -> f64 {
    if nu_tail_bound(t, n, 0.0) <= tol {
        return 0.0;
    }
    let mut hi = 1.0;
    while nu_tail_bound(t, n, hi) > tol {
        hi *= 2.0;
        if hi > 1e8 {
            return hi;
        }
    }
    let mut lo = 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if nu_tail_bound(t, n, mid) > tol {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * hi {
            break;
        }
    }
    hi
}

/// Gauss–Legendre nodes and weights on [0, V] with a break at ν = 1.
pub fn nu_nodes(v: f64, nodes_per_unit: usize) -> Vec<(f64, f64)> {
    nu_nodes_with_order(v, nodes_per_unit, NU_PANEL_ORDER)
}

pub fn nu_nodes_with_order(v: f64, nodes_per_unit: usize, order: usize) -> Vec<(f64, f64)> {
    if v <= 0.0 {
        return Vec::new();
    }
    let rule = GaussLegendre::new(order);
    let width = order as f64 / nodes_per_unit.max(1) as f64;
    let breaks = if v > NU_SPLIT {
        vec![0.0, NU_SPLIT, v]
    } else {
        vec![0.0, v]
    };
    composite_nodes(&breaks, width, &rule)
}

/// ∫ e^{tλ} dμ over Ĝ(τ_n)_p by quadrature; an oracle for the tail bound.
pub fn spectral_mass(t: f64, n: KType, tol: f64) -> f64 {
    let eps = n.parity();
    let v = nu_cutoff(t, n, tol).max(1.0);
    let cont: f64 = nu_nodes(v, 32)
        .into_iter()
        .map(|(nu, w)| {
            let rep = RepPoint::continuous(eps, nu);
            w * (t * casimir_unchecked(n, rep)).exp() * continuous_density(eps, nu)
        })
        .sum();
    let disc: f64 = enumerate_discrete(n)
        .into_iter()
        .map(|rep| (t * casimir_unchecked(n, rep)).exp() * plancherel_weight(rep).unwrap_or(0.0))
        .sum();
    cont + disc
}
