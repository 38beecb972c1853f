//! The named verification suites run by the command-line tool.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::sync::Arc;

use super::{
    eigen_check, heat_residual_part, mc_compare, residual_points, FDScheme, KernelPart, McConfig,
    Observable, VerifyReport,
};
use crate::error::Result;
use crate::group::{exp_sl2, AlgebraElement, GroupElement, HaarGrid};
use crate::spectrum::{heat_eigenvalue, KType, RepPoint, Sign};
use crate::spherical::qualification_report;
use crate::synthesis::{
    rho_transform_side, KernelPlan, RadialTable, SynthesisConfig, DEFAULT_TABLE_STEP,
};
use crate::transforms::{convolve, l2_norm_sq, spherical_transform, RadialFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Residual,
    Plancherel,
    Semigroup,
    SphericalCrosscheck,
    Mc,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "residual" => Ok(Suite::Residual),
            "plancherel" => Ok(Suite::Plancherel),
            "semigroup" => Ok(Suite::Semigroup),
            "spherical-crosscheck" => Ok(Suite::SphericalCrosscheck),
            "mc" => Ok(Suite::Mc),
            "all" => Ok(Suite::All),
            other => Err(format!("unknown suite '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub synthesis: SynthesisConfig,
    /// Restricts the time grid of the suites that take one.
    pub t: Option<f64>,
    /// Restricts the K-types of the plancherel and semigroup suites.
    pub n: Option<i64>,
    pub paths: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            synthesis: SynthesisConfig::default(),
            t: None,
            n: None,
            paths: 100_000,
            seed: 7,
        }
    }
}

pub const EIGEN_TOL: f64 = 1e-5;
pub const ROUTE_TOL: f64 = 1e-8;
pub const S0_TOL: f64 = 1e-13;
pub const RESIDUAL_TOL: f64 = 1e-4;
pub const PLANCHEREL_TOL: f64 = 1e-3;
pub const SEMIGROUP_TOL: f64 = 1e-2;
pub const TRANSFORM_TOL: f64 = 1e-3;
/// Accepted window for the observed FD convergence order.
pub const ORDER_RANGE: (f64, f64) = (1.7, 2.3);

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Vec<VerifyReport> {
    match suite {
        Suite::Residual => residual_suite(opts),
        Suite::Plancherel => plancherel_suite(opts),
        Suite::Semigroup => semigroup_suite(opts),
        Suite::SphericalCrosscheck => spherical_crosscheck_suite(),
        Suite::Mc => mc_suite(opts),
        Suite::All => [
            Suite::SphericalCrosscheck,
            Suite::Residual,
            Suite::Plancherel,
            Suite::Semigroup,
            Suite::Mc,
        ]
        .into_iter()
        .flat_map(|s| run_suite(s, opts))
        .collect(),
    }
}

fn guard(check: &str, inputs: serde_json::Value, r: Result<VerifyReport>) -> VerifyReport {
    r.unwrap_or_else(|e| VerifyReport::failed(check, inputs, e.to_string()))
}

/// The (n, rep) pairs of the eigenvalue check: every qualification rep with
/// several of its K-types, at two group points each (40 combinations).
pub fn eigen_cases() -> Vec<(KType, RepPoint, GroupElement)> {
    let points = [
        exp_sl2(&AlgebraElement::new(0.4, 0.7, -0.3)),
        GroupElement::k(0.9) * GroupElement::a(1.6),
    ];
    let mut out = Vec::new();
    for nu in [0.3, 0.7, 1.5, 4.0] {
        for n in [0i64, 1, -2, 3] {
            let rep = RepPoint::continuous((n.rem_euclid(2)) as u8, nu);
            out.push((KType(n), rep));
        }
    }
    out.push((KType(2), RepPoint::discrete(2, Sign::Minus)));
    out.push((KType(-4), RepPoint::discrete(2, Sign::Plus)));
    out.push((KType(3), RepPoint::discrete(3, Sign::Minus)));
    out.push((KType(4), RepPoint::discrete(4, Sign::Minus)));
    out.into_iter()
        .enumerate()
        .map(|(i, (n, rep))| (n, rep, points[i % 2]))
        .chain([
            (KType(-3), RepPoint::discrete(3, Sign::Plus), points[1]),
            (KType(6), RepPoint::discrete(4, Sign::Minus), points[0]),
            (KType(5), RepPoint::continuous(1, 0.7), points[1]),
            (KType(-6), RepPoint::continuous(0, 1.5), points[0]),
            (KType(8), RepPoint::discrete(2, Sign::Minus), points[1]),
            (KType(-5), RepPoint::discrete(3, Sign::Plus), points[0]),
            (KType(2), RepPoint::continuous(0, 4.0), points[1]),
            (KType(-1), RepPoint::continuous(1, 0.3), points[0]),
            (KType(4), RepPoint::discrete(2, Sign::Minus), points[0]),
            (KType(-2), RepPoint::discrete(2, Sign::Plus), points[1]),
            (KType(5), RepPoint::discrete(3, Sign::Minus), points[1]),
            (KType(-4), RepPoint::discrete(4, Sign::Plus), points[0]),
            (KType(6), RepPoint::discrete(2, Sign::Minus), points[0]),
            (KType(-7), RepPoint::continuous(1, 4.0), points[1]),
            (KType(0), RepPoint::continuous(0, 0.3), GroupElement::a(2.5)),
            (KType(1), RepPoint::continuous(1, 1.5), GroupElement::a(2.5)),
            (KType(-6), RepPoint::discrete(4, Sign::Plus), points[1]),
            (
                KType(3),
                RepPoint::discrete(3, Sign::Minus),
                GroupElement::a(2.5),
            ),
            (
                KType(2),
                RepPoint::discrete(2, Sign::Minus),
                GroupElement::a(2.5),
            ),
            (KType(4), RepPoint::continuous(0, 0.7), GroupElement::a(2.5)),
        ])
        .collect()
}

pub fn eigen_suite() -> Vec<VerifyReport> {
    let scheme = FDScheme::default();
    eigen_cases()
        .into_iter()
        .map(|(n, rep, g)| {
            let inputs = json!({ "n": n.0, "rep": rep.label(), "g": g.entries(), "h": scheme.h });
            guard(
                "eigen",
                inputs.clone(),
                eigen_check(n, rep, &g, &scheme).map(|c| {
                    VerifyReport::bounded("eigen", inputs, c.relative_error, 0.0, EIGEN_TOL)
                        .with_diagnostics(json!({
                            "laplacian": [c.laplacian.re, c.laplacian.im],
                            "lambda_phi": [c.expected.re, c.expected.im],
                        }))
                }),
            )
        })
        .collect()
}

pub fn spherical_crosscheck_suite() -> Vec<VerifyReport> {
    let mut out = Vec::new();
    match qualification_report() {
        Ok(q) => {
            let inputs = json!({ "grid_points": q.entries.len() });
            out.push(VerifyReport::bounded(
                "routes.integral_vs_hypergeometric",
                inputs.clone(),
                q.max_integral_vs_hypergeometric,
                0.0,
                ROUTE_TOL,
            ));
            out.push(VerifyReport::bounded(
                "routes.integral_vs_jacobi",
                inputs.clone(),
                q.max_integral_vs_jacobi,
                0.0,
                ROUTE_TOL,
            ));
            out.push(
                VerifyReport::bounded(
                    "routes.s0_delta",
                    inputs.clone(),
                    q.max_s0_deviation,
                    0.0,
                    S0_TOL,
                )
                .with_diagnostics(json!({
                    "printed_off_diagonal_delta": q.printed_off_diagonal_delta,
                    "printed_jacobi_prefactor_delta": q.printed_jacobi_prefactor_delta,
                    "fit": q.fit,
                    "frozen": q.frozen,
                })),
            );
        }
        Err(e) => out.push(VerifyReport::failed("routes", json!({}), e.to_string())),
    }
    out.extend(eigen_suite());
    out
}

fn times(opts: &SuiteOptions, default: &[f64]) -> Vec<f64> {
    opts.t.map(|t| vec![t]).unwrap_or_else(|| default.to_vec())
}

fn ktypes(opts: &SuiteOptions, default: &[i64]) -> Vec<i64> {
    opts.n.map(|n| vec![n]).unwrap_or_else(|| default.to_vec())
}

/// Observed order log₂(r(h)/r(h/2)) of the heat residual at one point.
pub fn residual_order(t: f64, g: &GroupElement, cfg: &SynthesisConfig) -> Result<(f64, f64, f64)> {
    let coarse = FDScheme::new(1e-2)?;
    let r1 = heat_residual_part(t, g, KernelPart::Full, cfg, &coarse)?.residual;
    let r2 = heat_residual_part(t, g, KernelPart::Full, cfg, &coarse.halved())?.residual;
    Ok(((r1 / r2).log2(), r1, r2))
}

pub fn residual_suite(opts: &SuiteOptions) -> Vec<VerifyReport> {
    let scheme = FDScheme::default();
    let mut out = Vec::new();
    for t in times(opts, &[0.5, 1.0, 2.0]) {
        for (name, g) in residual_points() {
            let inputs = json!({ "t": t, "g": name, "h": scheme.h });
            out.push(guard(
                "heat_residual",
                inputs.clone(),
                heat_residual_part(t, &g, KernelPart::Full, &opts.synthesis, &scheme).map(|r| {
                    VerifyReport::bounded("heat_residual", inputs, r.residual, 0.0, RESIDUAL_TOL)
                        .with_diagnostics(json!({
                            "rho": r.value, "d_t": r.time_derivative, "laplacian": r.laplacian,
                        }))
                }),
            ));
        }
        let g = GroupElement::a(1.0);
        let inputs = json!({ "t": t, "g": "a(1)", "h": [1e-2, 5e-3] });
        out.push(guard(
            "heat_residual.order",
            inputs.clone(),
            residual_order(t, &g, &opts.synthesis).map(|(order, r1, r2)| VerifyReport {
                check: "heat_residual.order".into(),
                inputs,
                computed: order,
                reference: 2.0,
                tolerance: ORDER_RANGE.1 - 2.0,
                pass: (ORDER_RANGE.0..=ORDER_RANGE.1).contains(&order),
                diagnostics: json!({ "residual_h": r1, "residual_h_half": r2 }),
            }),
        ));
    }
    out
}

/// Radial table of ρ_t with the default certified plan, reaching s_max.
pub fn kernel_table(t: f64, s_max: f64, cfg: &SynthesisConfig) -> Result<Arc<RadialTable>> {
    let plan = KernelPlan::new(t, cfg)?;
    Ok(Arc::new(RadialTable::build(
        &plan,
        s_max,
        DEFAULT_TABLE_STEP,
    )?))
}

/// Group-side ∥ρ_{t,n}∥² on a balanced box and its spectral-side value.
pub fn plancherel_pair(t: f64, n: i64, cfg: &SynthesisConfig) -> Result<(f64, f64)> {
    let s_max = 3.0 + 4.0 * t.sqrt();
    let table = kernel_table(t, s_max, cfg)?;
    let f = RadialFunction::from_table(table, KType(n));
    // |ρ_{t,n}|² is bi-K-invariant: one θ node is exact
    let grid = HaarGrid::balanced(s_max, s_max, 1);
    let group = l2_norm_sq(&f, &grid)?;
    let spectral = rho_transform_side(t, KType(n)).l2_norm_sq(1e-14);
    Ok((group, spectral))
}

pub fn plancherel_suite(opts: &SuiteOptions) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for t in times(opts, &[1.0, 2.0]) {
        for n in ktypes(opts, &[0, 1, 2, 3]) {
            let inputs = json!({ "t": t, "n": n });
            out.push(guard(
                "plancherel",
                inputs.clone(),
                plancherel_pair(t, n, &opts.synthesis).map(|(g, s)| {
                    VerifyReport::relative("plancherel", inputs, g, s, PLANCHEREL_TOL)
                }),
            ));
        }
    }
    out
}

/// Grid for convolutions of ρ_{1/2}: balanced box of radius 6.
pub fn convolution_grid() -> HaarGrid {
    HaarGrid::balanced(6.0, 6.0, 32)
}

pub fn semigroup_points() -> Vec<(String, GroupElement)> {
    residual_points()
}

/// Reps at which transforms of ρ_{t,n} are checked against e^{tλ}.
pub fn transform_reps(n: KType) -> Vec<RepPoint> {
    let eps = n.parity();
    let mut v = vec![
        RepPoint::continuous(eps, 0.5),
        RepPoint::continuous(eps, 1.5),
    ];
    v.extend(crate::spectrum::enumerate_discrete(n));
    v
}

pub fn semigroup_suite(opts: &SuiteOptions) -> Vec<VerifyReport> {
    let cfg = &opts.synthesis;
    let mut out = Vec::new();
    let half = kernel_table(0.5, 7.0, cfg);
    let one = kernel_table(1.0, 8.0, cfg);
    let (half, one) = match (half, one) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            return vec![VerifyReport::failed("semigroup", json!({}), e.to_string())]
        }
    };
    let grid = convolution_grid();
    let transform_grid = HaarGrid::balanced(6.0, 6.0, 1);
    for n in ktypes(opts, &[0, 1]) {
        let f = RadialFunction::from_table(half.clone(), KType(n));
        for (name, g) in semigroup_points() {
            let inputs = json!({ "t": [0.5, 0.5], "n": n, "g": name });
            let target = one.rho_n(n, &g);
            out.push(guard(
                "semigroup.convolution",
                inputs.clone(),
                convolve(&f, &f, &g, &grid).map(|c| {
                    let err = (c - target).norm() / target.norm();
                    VerifyReport::bounded("semigroup.convolution", inputs, err, 0.0, SEMIGROUP_TOL)
                        .with_diagnostics(
                            json!({ "convolution": [c.re, c.im], "rho_1": [target.re, target.im] }),
                        )
                }),
            ));
        }
        let f1 = RadialFunction::from_table(one.clone(), KType(n));
        for rep in transform_reps(KType(n)) {
            let lam = match heat_eigenvalue(KType(n), rep) {
                Ok(l) => l,
                Err(e) => {
                    out.push(VerifyReport::failed(
                        "semigroup.transform",
                        json!({ "n": n }),
                        e.to_string(),
                    ));
                    continue;
                }
            };
            for (t, func) in [(0.5, &f), (1.0, &f1)] {
                let inputs = json!({ "t": t, "n": n, "rep": rep.label() });
                let expect = (t * lam).exp();
                out.push(guard(
                    "semigroup.transform",
                    inputs.clone(),
                    spherical_transform(func, rep, &transform_grid).map(|v: Complex64| {
                        VerifyReport::relative(
                            "semigroup.transform",
                            inputs,
                            v.re,
                            expect,
                            TRANSFORM_TOL,
                        )
                        .with_diagnostics(json!({ "imag": v.im }))
                    }),
                ));
            }
        }
    }
    out
}

pub fn mc_suite(opts: &SuiteOptions) -> Vec<VerifyReport> {
    let t = opts.t.unwrap_or(0.5);
    let cfg = McConfig::new(opts.paths, t, opts.seed);
    let inputs = json!({ "t": t, "paths": opts.paths, "seed": opts.seed });
    match mc_compare(t, &Observable::standard(), &cfg, &opts.synthesis) {
        Ok(r) => r,
        Err(e) => vec![VerifyReport::failed("mc", inputs, e.to_string())],
    }
}
