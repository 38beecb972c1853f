//! Haar-measure quadrature on a truncated Iwasawa box and normalized K-averages.
//!
//! dg = (1/4π) e^s dθ ds dx over (θ, s, x) ∈ [0,4π) × ℝ × ℝ. The θ direction uses
//! the periodic trapezoid rule; s and x use composite Gauss–Legendre panels.

use num_complex::Complex64;
use rayon::prelude::*;

use super::GroupElement;
use crate::error::{Error, Result};
use crate::specfun::{composite_nodes, trapezoid_periodic, GaussLegendre};

pub const DEFAULT_BOX: f64 = 8.0;
pub const DEFAULT_PANEL_WIDTH: f64 = 0.5;
pub const DEFAULT_PANEL_ORDER: usize = 10;
pub const DEFAULT_K_NODES: usize = 64;

/// How the third Iwasawa coordinate is sampled.
///
/// `Plain` integrates x over [-X, X] directly. `Balanced` substitutes
/// x = 2e^{-s/2} sinh(v/2) with v ∈ [-X, X]; since
/// cosh(dist(e, k a_s n_x)) = cosh s + cosh v - 1, the box then contains the
/// whole geodesic ball of radius min(S, X) around the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XMap {
    Plain,
    Balanced,
}

#[derive(Debug, Clone)]
pub struct HaarGrid {
    pub s_max: f64,
    pub x_max: f64,
    pub n_theta: usize,
    pub xmap: XMap,
    /// Fail when this fraction of ∫|f| sits in the outermost panels.
    pub boundary_fraction: Option<f64>,
    s_nodes: Vec<(f64, f64)>,
    x_nodes: Vec<(f64, f64)>,
    s_edge: f64,
    x_edge: f64,
}

/// A planar node: Iwasawa (s, x), the density-carrying weight and whether the
/// node lies in an outermost panel.
#[derive(Debug, Clone, Copy)]
pub struct PlaneNode {
    pub s: f64,
    pub x: f64,
    pub weight: f64,
    pub boundary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaarIntegral {
    pub value: Complex64,
    /// ∫|f| over the box.
    pub abs_total: f64,
    /// ∫|f| over the outermost s and x panels.
    pub abs_boundary: f64,
}

impl HaarIntegral {
    pub fn boundary_ratio(&self) -> f64 {
        if self.abs_total == 0.0 {
            0.0
        } else {
            self.abs_boundary / self.abs_total
        }
    }
}

impl Default for HaarGrid {
    fn default() -> Self {
        Self::new(DEFAULT_BOX, DEFAULT_BOX, 16)
    }
}

impl HaarGrid {
    pub fn new(s_max: f64, x_max: f64, n_theta: usize) -> Self {
        Self::build(
            s_max,
            x_max,
            n_theta,
            XMap::Plain,
            DEFAULT_PANEL_WIDTH,
            DEFAULT_PANEL_ORDER,
        )
    }

    pub fn balanced(s_max: f64, v_max: f64, n_theta: usize) -> Self {
        Self::build(
            s_max,
            v_max,
            n_theta,
            XMap::Balanced,
            DEFAULT_PANEL_WIDTH,
            DEFAULT_PANEL_ORDER,
        )
    }

    pub fn with_panels(&self, width: f64, order: usize) -> Self {
        let mut g = Self::build(
            self.s_max,
            self.x_max,
            self.n_theta,
            self.xmap,
            width,
            order,
        );
        g.boundary_fraction = self.boundary_fraction;
        g
    }

    pub fn with_boundary_check(mut self, fraction: f64) -> Self {
        self.boundary_fraction = Some(fraction);
        self
    }

    fn build(s_max: f64, x_max: f64, n_theta: usize, xmap: XMap, width: f64, order: usize) -> Self {
        assert!(s_max > 0.0 && x_max > 0.0 && n_theta > 0 && width > 0.0);
        let rule = GaussLegendre::new(order);
        let s_nodes = composite_nodes(&[-s_max, 0.0, s_max], width, &rule);
        let x_nodes = composite_nodes(&[-x_max, 0.0, x_max], width, &rule);
        let s_edge = s_max - (s_max / width).ceil().recip() * s_max;
        let x_edge = x_max - (x_max / width).ceil().recip() * x_max;
        Self {
            s_max,
            x_max,
            n_theta,
            xmap,
            boundary_fraction: None,
            s_nodes,
            x_nodes,
            s_edge,
            x_edge,
        }
    }

    /// Closed-form ∫ 1 dg over the box.
    pub fn volume(&self) -> f64 {
        match self.xmap {
            XMap::Plain => 2.0 * self.x_max * (self.s_max.exp() - (-self.s_max).exp()),
            XMap::Balanced => 16.0 * (0.5 * self.s_max).sinh() * (0.5 * self.x_max).sinh(),
        }
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.s_nodes.len() * self.x_nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        let h = super::FOUR_PI / self.n_theta as f64;
        (0..self.n_theta).map(move |j| j as f64 * h)
    }

    /// Nodes of the (s, x) plane with weights that already include the
    /// density and the θ normalization, so Σ_θ Σ_plane w f = ∫ f dg.
    pub fn plane_nodes(&self) -> Vec<PlaneNode> {
        let mut out = Vec::with_capacity(self.s_nodes.len() * self.x_nodes.len());
        let inv_theta = 1.0 / self.n_theta as f64;
        for &(s, ws) in &self.s_nodes {
            for &(u, wu) in &self.x_nodes {
                let (x, dens) = match self.xmap {
                    XMap::Plain => (u, s.exp()),
                    XMap::Balanced => (
                        2.0 * (-0.5 * s).exp() * (0.5 * u).sinh(),
                        (0.5 * s).exp() * (0.5 * u).cosh(),
                    ),
                };
                out.push(PlaneNode {
                    s,
                    x,
                    weight: ws * wu * dens * inv_theta,
                    boundary: s.abs() >= self.s_edge || u.abs() >= self.x_edge,
                });
            }
        }
        out
    }
}

/// ∫_G f dg over the grid box.
pub fn haar_integrate<F>(f: F, grid: &HaarGrid) -> Result<Complex64>
where
    F: Fn(&GroupElement) -> Complex64 + Sync,
{
    haar_integrate_detailed(f, grid).map(|r| r.value)
}

/// As `haar_integrate`, also returning the |f| diagnostics.
pub fn haar_integrate_detailed<F>(f: F, grid: &HaarGrid) -> Result<HaarIntegral>
where
    F: Fn(&GroupElement) -> Complex64 + Sync,
{
    let ks: Vec<GroupElement> = grid.thetas().map(GroupElement::k).collect();
    let plane = grid.plane_nodes();
    let rows: Vec<(Complex64, f64, f64)> = plane
        .par_chunks(grid.x_nodes.len().max(1))
        .map(|row| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut abs = 0.0;
            let mut edge = 0.0;
            for node in row {
                let an = GroupElement::a(node.s) * GroupElement::n(node.x);
                for k in &ks {
                    let v = f(&(*k * an));
                    acc += v * node.weight;
                    let m = v.norm() * node.weight;
                    abs += m;
                    if node.boundary {
                        edge += m;
                    }
                }
            }
            (acc, abs, edge)
        })
        .collect();
    let mut out = HaarIntegral {
        value: Complex64::new(0.0, 0.0),
        abs_total: 0.0,
        abs_boundary: 0.0,
    };
    for (v, a, e) in rows {
        out.value += v;
        out.abs_total += a;
        out.abs_boundary += e;
    }
    if let Some(frac) = grid.boundary_fraction {
        if out.abs_boundary > frac * out.abs_total {
            return Err(Error::BoundaryMass {
                boundary: out.abs_boundary,
                total: out.abs_total,
                fraction: frac,
            });
        }
    }
    Ok(out)
}

/// Normalized ∫_K f(k_θ) dk over one 4π period.
pub fn k_integrate<F>(f: F, n_nodes: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    trapezoid_periodic(f, n_nodes) / super::FOUR_PI
}
