//! SL(2,ℝ) geometry: elements, the Lie algebra basis, the exponential map and
//! the Iwasawa and Cartan decompositions.
//!
//! Conventions: K is parametrized with period 4π,
//! `k_θ = [[cos θ/2, sin θ/2], [-sin θ/2, cos θ/2]]`, `a_s = diag(e^{s/2}, e^{-s/2})`
//! and `n_x = [[1, x], [0, 1]]`. The algebra basis
//! `X₁ = [[0,-1],[1,0]]/√8`, `Y₁ = [[1,0],[0,-1]]/√8`, `Y₂ = [[0,1],[1,0]]/√8`
//! is orthonormal for ⟨X, Y⟩ = 4 tr(XᵀY).

mod haar;

pub use haar::{
    haar_integrate, haar_integrate_detailed, k_integrate, HaarGrid, HaarIntegral, PlaneNode, XMap,
    DEFAULT_BOX, DEFAULT_K_NODES, DEFAULT_PANEL_ORDER, DEFAULT_PANEL_WIDTH,
};

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::Mul;

use crate::error::{Error, Result};

pub const FOUR_PI: f64 = 4.0 * PI;
/// Construction tolerance on |det - 1|.
pub const DET_TOL: f64 = 1e-12;
/// Renormalization accepts |det - 1| below this.
pub const RENORMALIZE_TOL: f64 = 1e-8;
/// Below this Cartan `s` the split between θ₁ and θ₂ is not resolved.
pub const CARTAN_S_TOL: f64 = 1e-12;

const INV_SQRT8: f64 = 0.353_553_390_593_273_8;

/// A real 2×2 matrix of determinant one, `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl GroupElement {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || (det - 1.0).abs() > DET_TOL {
            return Err(Error::NotUnimodular { det });
        }
        Ok(Self { a, b, c, d })
    }

    /// Divides by √det when the determinant is within `RENORMALIZE_TOL` of one.
    pub fn renormalized(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || (det - 1.0).abs() >= RENORMALIZE_TOL {
            return Err(Error::NotUnimodular { det });
        }
        let r = det.sqrt();
        Ok(Self {
            a: a / r,
            b: b / r,
            c: c / r,
            d: d / r,
        })
    }

    /// Products and inverses of valid elements; skips the determinant check.
    pub(crate) fn from_entries(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::from_entries(1.0, 0.0, 0.0, 1.0)
    }

    pub fn k(theta: f64) -> Self {
        let (s, c) = (0.5 * theta).sin_cos();
        Self::from_entries(c, s, -s, c)
    }

    pub fn a(s: f64) -> Self {
        Self::from_entries((0.5 * s).exp(), 0.0, 0.0, (-0.5 * s).exp())
    }

    pub fn n(x: f64) -> Self {
        Self::from_entries(1.0, x, 0.0, 1.0)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        Self::from_entries(self.d, -self.b, -self.c, self.a)
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, r: GroupElement) -> GroupElement {
        GroupElement::from_entries(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

/// Coordinates in the orthonormal basis {X₁, Y₁, Y₂}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraElement {
    pub x1: f64,
    pub y1: f64,
    pub y2: f64,
}

/// Index into the basis {X₁, Y₁, Y₂}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisDirection {
    X1,
    Y1,
    Y2,
}

impl BasisDirection {
    pub const ALL: [BasisDirection; 3] =
        [BasisDirection::X1, BasisDirection::Y1, BasisDirection::Y2];
}

impl AlgebraElement {
    pub fn new(x1: f64, y1: f64, y2: f64) -> Self {
        Self { x1, y1, y2 }
    }

    pub fn basis(dir: BasisDirection) -> Self {
        match dir {
            BasisDirection::X1 => Self::new(1.0, 0.0, 0.0),
            BasisDirection::Y1 => Self::new(0.0, 1.0, 0.0),
            BasisDirection::Y2 => Self::new(0.0, 0.0, 1.0),
        }
    }

    pub fn scale(&self, t: f64) -> Self {
        Self::new(self.x1 * t, self.y1 * t, self.y2 * t)
    }

    /// The traceless matrix `[[p, q], [r, -p]]` as (p, q, r).
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let p = self.y1 * INV_SQRT8;
        let q = (self.y2 - self.x1) * INV_SQRT8;
        let r = (self.y2 + self.x1) * INV_SQRT8;
        [[p, q], [r, -p]]
    }

    /// 4 tr(ZᵀZ).
    pub fn norm_sq(&self) -> f64 {
        let m = self.matrix();
        4.0 * (m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1])
    }
}

/// exp of a traceless 2×2 matrix from Z² = -det(Z)·I.
///
/// With δ = -det Z, exp Z = C(δ) I + S(δ) Z where C = cosh √δ, S = sinh √δ / √δ
/// (trigonometric for δ < 0). Near δ = 0 both are summed as power series in δ.
pub fn exp_sl2(z: &AlgebraElement) -> GroupElement {
    let m = z.matrix();
    let (p, q, r) = (m[0][0], m[0][1], m[1][0]);
    let delta = p * p + q * r;
    let (ch, sh) = if delta.abs() < 0.1 {
        let mut c = 0.0;
        let mut s = 0.0;
        let mut term = 1.0;
        for k in 0..14 {
            let k2 = 2.0 * k as f64;
            // term = δ^k / (2k)!
            c += term;
            s += term / (k2 + 1.0);
            term *= delta / ((k2 + 1.0) * (k2 + 2.0));
        }
        (c, s)
    } else if delta > 0.0 {
        let w = delta.sqrt();
        (w.cosh(), w.sinh() / w)
    } else {
        let w = (-delta).sqrt();
        (w.cos(), w.sin() / w)
    };
    GroupElement::from_entries(ch + sh * p, sh * q, sh * r, ch - sh * p)
}

/// g = k_θ a_s n_x with θ ∈ [0, 4π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IwasawaCoords {
    pub theta: f64,
    pub s: f64,
    pub x: f64,
}

impl IwasawaCoords {
    pub fn new(theta: f64, s: f64, x: f64) -> Self {
        Self { theta, s, x }
    }

    pub fn to_element(&self) -> GroupElement {
        GroupElement::k(self.theta) * GroupElement::a(self.s) * GroupElement::n(self.x)
    }
}

/// g = k_{θ₁} a_s k_{θ₂} with s ≥ 0 and θ₁, θ₂ ∈ [0, 4π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartanCoords {
    pub theta1: f64,
    pub s: f64,
    pub theta2: f64,
}

impl CartanCoords {
    pub fn new(theta1: f64, s: f64, theta2: f64) -> Self {
        Self { theta1, s, theta2 }
    }

    pub fn to_element(&self) -> GroupElement {
        GroupElement::k(self.theta1) * GroupElement::a(self.s) * GroupElement::k(self.theta2)
    }

    /// θ₁ + θ₂, the only angle that survives on the diagonal.
    pub fn phase_angle(&self) -> f64 {
        self.theta1 + self.theta2
    }
}

pub(crate) fn wrap_4pi(theta: f64) -> f64 {
    let r = theta.rem_euclid(FOUR_PI);
    if r >= FOUR_PI {
        0.0
    } else {
        r
    }
}

pub fn iwasawa(g: &GroupElement) -> IwasawaCoords {
    let r2 = g.a * g.a + g.c * g.c;
    let phi = (-g.c).atan2(g.a);
    IwasawaCoords {
        theta: wrap_4pi(2.0 * phi),
        s: r2.ln(),
        x: (g.a * g.b + g.c * g.d) / r2,
    }
}

/// Cartan data in the form consumed by the spherical functions.
///
/// `cosh_half = cosh(s/2)`, `sinh_half = sinh(s/2)`, and the two half-angle
/// sums: `e^{i·alpha} = (E + iH)/cosh(s/2)`, `e^{i·beta} = (F + iG)/sinh(s/2)` with
/// E = (a+d)/2, F = (a-d)/2, G = (b+c)/2, H = (c-b)/2. Then θ₁ = -(alpha+beta)
/// and θ₂ = beta - alpha.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartanFrame {
    pub cosh_half: f64,
    pub sinh_half: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl CartanFrame {
    pub fn of(g: &GroupElement) -> Self {
        let e = 0.5 * (g.a + g.d);
        let f = 0.5 * (g.a - g.d);
        let gg = 0.5 * (g.c + g.b);
        let h = 0.5 * (g.c - g.b);
        let q = e.hypot(h);
        let r = f.hypot(gg);
        Self {
            cosh_half: q,
            sinh_half: r,
            alpha: h.atan2(e),
            beta: if r == 0.0 { 0.0 } else { gg.atan2(f) },
        }
    }

    pub fn s(&self) -> f64 {
        2.0 * self.sinh_half.asinh()
    }

    pub fn tanh_half(&self) -> f64 {
        self.sinh_half / self.cosh_half
    }

    /// θ₁ + θ₂ = -2·alpha (mod 4π).
    pub fn phase_angle(&self) -> f64 {
        -2.0 * self.alpha
    }
}

pub fn cartan(g: &GroupElement) -> CartanCoords {
    let fr = CartanFrame::of(g);
    let s = fr.s();
    if s < CARTAN_S_TOL {
        return CartanCoords {
            theta1: wrap_4pi(-2.0 * fr.alpha),
            s: 0.0,
            theta2: 0.0,
        };
    }
    CartanCoords {
        theta1: wrap_4pi(-(fr.alpha + fr.beta)),
        s,
        theta2: wrap_4pi(fr.beta - fr.alpha),
    }
}
