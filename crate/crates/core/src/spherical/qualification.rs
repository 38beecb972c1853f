//! Route qualification: cross-route deltas on a fixed grid and the
//! least-squares fit of the hypergeometric parameter normalization.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::routes::{self, HypergeoNormalization, HYPERGEO_NORMALIZATION};
use super::{matrix_element, MatrixElementQuery, Route};
use crate::error::Result;
use crate::spectrum::{RepPoint, Sign};

pub const QUAL_S: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 3.0];
pub const QUAL_NU: [f64; 4] = [0.3, 0.7, 1.5, 4.0];
pub const QUAL_M: [u32; 3] = [2, 3, 4];
pub const QUAL_N: std::ops::RangeInclusive<i64> = -4..=4;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RouteDelta {
    pub rep: String,
    pub n1: i64,
    pub n2: i64,
    pub s: f64,
    pub integral: Complex64,
    pub hypergeometric: Complex64,
    pub jacobi: Option<Complex64>,
}

impl RouteDelta {
    pub fn max_delta(&self) -> f64 {
        let h = (self.integral - self.hypergeometric).norm();
        let j = self.jacobi.map_or(0.0, |j| (self.integral - j).norm());
        h.max(j)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResult {
    pub normalization: HypergeoNormalization,
    pub residual_continuous: f64,
    pub residual_discrete: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QualificationReport {
    pub entries: Vec<RouteDelta>,
    pub max_integral_vs_hypergeometric: f64,
    pub max_integral_vs_jacobi: f64,
    pub max_s0_deviation: f64,
    /// Largest |printed c = 1 off-diagonal form - integral| on the grid.
    pub printed_off_diagonal_delta: f64,
    /// Largest |printed (cosh s)^n Jacobi prefactor form - integral| on the grid.
    pub printed_jacobi_prefactor_delta: f64,
    pub fit: FitResult,
    pub frozen: HypergeoNormalization,
}

impl QualificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Representation grid paired with the weights it carries in `QUAL_N`.
pub fn qualification_reps() -> Vec<(RepPoint, Vec<i64>)> {
    let mut out = Vec::new();
    for &nu in &QUAL_NU {
        for eps in 0..2u8 {
            let rep = RepPoint::continuous(eps, nu);
            out.push((rep, QUAL_N.filter(|n| rep.has_weight(*n)).collect()));
        }
    }
    for &m in &QUAL_M {
        for sign in [Sign::Minus, Sign::Plus] {
            let rep = RepPoint::discrete(m, sign);
            out.push((rep, QUAL_N.filter(|n| rep.has_weight(*n)).collect()));
        }
    }
    out
}

pub fn qualification_report() -> Result<QualificationReport> {
    let mut entries = Vec::new();
    let mut printed_off = 0.0f64;
    let mut printed_jac = 0.0f64;
    for (rep, weights) in qualification_reps() {
        let kappa = HYPERGEO_NORMALIZATION.kappa(rep);
        for &n1 in &weights {
            for n2 in [n1 - 2, n1, n1 + 2] {
                if !weights.contains(&n2) {
                    continue;
                }
                for &s in &QUAL_S {
                    let integral =
                        matrix_element(MatrixElementQuery::new(rep, n1, n2, s, Route::Integral))?
                            .value;
                    let hypergeometric = matrix_element(MatrixElementQuery::new(
                        rep,
                        n1,
                        n2,
                        s,
                        Route::Hypergeometric,
                    ))?
                    .value;
                    let jacobi = if n1 == n2 {
                        let j =
                            matrix_element(MatrixElementQuery::new(rep, n1, n2, s, Route::Jacobi))?
                                .value;
                        let raw = routes::jacobi_diagonal_printed(rep, n1, s)?;
                        printed_jac = printed_jac.max((raw - integral).norm());
                        Some(j)
                    } else {
                        let raw = routes::hypergeometric_printed(kappa, n1, n2, s)?;
                        printed_off = printed_off.max((raw - integral).norm());
                        None
                    };
                    entries.push(RouteDelta {
                        rep: rep.label(),
                        n1,
                        n2,
                        s,
                        integral,
                        hypergeometric,
                        jacobi,
                    });
                }
            }
        }
    }
    let max_h = entries
        .iter()
        .fold(0.0f64, |m, e| m.max((e.integral - e.hypergeometric).norm()));
    let max_j = entries.iter().fold(0.0f64, |m, e| {
        m.max(e.jacobi.map_or(0.0, |j| (e.integral - j).norm()))
    });
    Ok(QualificationReport {
        max_integral_vs_hypergeometric: max_h,
        max_integral_vs_jacobi: max_j,
        max_s0_deviation: s0_deviation()?,
        printed_off_diagonal_delta: printed_off,
        printed_jacobi_prefactor_delta: printed_jac,
        fit: fit_normalization()?,
        frozen: HYPERGEO_NORMALIZATION,
        entries,
    })
}

/// max |M_{n₁n₂}(0) - δ| over all grid representations and weight pairs.
pub fn s0_deviation() -> Result<f64> {
    let mut worst = 0.0f64;
    for (rep, weights) in qualification_reps() {
        for &n1 in &weights {
            for &n2 in &weights {
                for route in [Route::Integral, Route::Hypergeometric] {
                    let v = matrix_element(MatrixElementQuery::new(rep, n1, n2, 0.0, route))?.value;
                    let d = if n1 == n2 { 1.0 } else { 0.0 };
                    worst = worst.max((v - d).norm());
                }
            }
        }
    }
    Ok(worst)
}

struct Sample {
    rep: RepPoint,
    n1: i64,
    n2: i64,
    s: f64,
    target: Complex64,
}

fn fit_samples(discrete: bool) -> Result<Vec<Sample>> {
    // diagonal and off-diagonal entries; the off-diagonal ones break the ν ↦ -ν symmetry
    let specs: Vec<(RepPoint, i64, i64, f64)> = if discrete {
        vec![
            (RepPoint::discrete(2, Sign::Minus), 2, 2, 0.6),
            (RepPoint::discrete(2, Sign::Minus), 4, 4, 1.3),
            (RepPoint::discrete(2, Sign::Minus), 2, 4, 0.9),
            (RepPoint::discrete(2, Sign::Minus), 6, 4, 1.7),
            (RepPoint::discrete(3, Sign::Minus), 3, 3, 0.8),
            (RepPoint::discrete(3, Sign::Minus), 5, 5, 2.1),
            (RepPoint::discrete(3, Sign::Minus), 3, 5, 1.1),
            (RepPoint::discrete(3, Sign::Plus), -5, -3, 0.7),
            (RepPoint::discrete(4, Sign::Minus), 4, 4, 1.4),
            (RepPoint::discrete(4, Sign::Minus), 6, 4, 0.5),
            (RepPoint::discrete(4, Sign::Plus), -4, -4, 2.4),
            (RepPoint::discrete(4, Sign::Plus), -4, -6, 1.9),
            (RepPoint::discrete(5, Sign::Minus), 5, 7, 1.2),
            (RepPoint::discrete(5, Sign::Minus), 7, 7, 0.4),
            (RepPoint::discrete(2, Sign::Plus), -2, -2, 2.8),
            (RepPoint::discrete(2, Sign::Plus), -4, -2, 0.3),
            (RepPoint::discrete(3, Sign::Minus), 7, 5, 1.6),
            (RepPoint::discrete(6, Sign::Minus), 6, 6, 1.0),
            (RepPoint::discrete(6, Sign::Minus), 8, 6, 0.8),
            (RepPoint::discrete(2, Sign::Minus), 8, 8, 0.65),
        ]
    } else {
        vec![
            (RepPoint::continuous(0, 0.3), 0, 0, 0.7),
            (RepPoint::continuous(0, 0.7), 0, 2, 1.2),
            (RepPoint::continuous(0, 1.5), 2, 2, 0.9),
            (RepPoint::continuous(0, 0.5), -2, 0, 2.0),
            (RepPoint::continuous(0, 2.2), 4, 2, 0.6),
            (RepPoint::continuous(0, 1.1), -4, -4, 1.5),
            (RepPoint::continuous(0, 0.9), 2, -2, 1.1),
            (RepPoint::continuous(1, 0.3), 1, 1, 1.3),
            (RepPoint::continuous(1, 0.7), 1, 3, 0.8),
            (RepPoint::continuous(1, 1.5), -1, 1, 1.7),
            (RepPoint::continuous(1, 3.0), 3, 1, 0.5),
            (RepPoint::continuous(1, 0.4), -3, -3, 2.5),
            (RepPoint::continuous(1, 1.9), 5, 3, 0.4),
            (RepPoint::continuous(1, 0.6), -1, -3, 1.0),
            (RepPoint::continuous(0, 4.0), 0, 0, 0.3),
            (RepPoint::continuous(0, 2.7), 0, -2, 0.75),
            (RepPoint::continuous(1, 1.2), 3, 3, 1.9),
            (RepPoint::continuous(0, 0.2), 4, 4, 2.2),
            (RepPoint::continuous(1, 2.4), 1, -1, 1.4),
            (RepPoint::continuous(0, 1.3), -2, -4, 0.95),
        ]
    };
    specs
        .into_iter()
        .map(|(rep, n1, n2, s)| {
            let target =
                matrix_element(MatrixElementQuery::new(rep, n1, n2, s, Route::Integral))?.value;
            Ok(Sample {
                rep,
                n1,
                n2,
                s,
                target,
            })
        })
        .collect()
}

fn residuals(samples: &[Sample], norm: &HypergeoNormalization) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * samples.len());
    for smp in samples {
        let kappa = norm.kappa(smp.rep);
        let d = match routes::hypergeometric(kappa, smp.n1, smp.n2, smp.s) {
            Ok(v) if v.re.is_finite() && v.im.is_finite() => v - smp.target,
            _ => Complex64::new(1e3, 1e3),
        };
        out.push(d.re);
        out.push(d.im);
    }
    out
}

fn sum_sq(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

/// Levenberg–Marquardt on the two parameters picked out by `set`.
fn levenberg_marquardt<F>(start: [f64; 2], samples: &[Sample], set: F) -> ([f64; 2], f64)
where
    F: Fn([f64; 2]) -> HypergeoNormalization,
{
    let mut p = start;
    let mut r = residuals(samples, &set(p));
    let mut cost = sum_sq(&r);
    let mut mu = 1e-3;
    for _ in 0..200 {
        let h = 1e-7;
        let mut jac = [vec![0.0; r.len()], vec![0.0; r.len()]];
        for (k, col) in jac.iter_mut().enumerate() {
            let mut q = p;
            q[k] += h;
            let rq = residuals(samples, &set(q));
            for (c, (a, b)) in col.iter_mut().zip(rq.iter().zip(&r)) {
                *c = (a - b) / h;
            }
        }
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let (a00, a01, a11) = (
            dot(&jac[0], &jac[0]),
            dot(&jac[0], &jac[1]),
            dot(&jac[1], &jac[1]),
        );
        let (g0, g1) = (dot(&jac[0], &r), dot(&jac[1], &r));
        let mut improved = false;
        for _ in 0..30 {
            let (b00, b11) = (a00 * (1.0 + mu), a11 * (1.0 + mu));
            let det = b00 * b11 - a01 * a01;
            if det == 0.0 || !det.is_finite() {
                mu *= 10.0;
                continue;
            }
            let d0 = -(b11 * g0 - a01 * g1) / det;
            let d1 = -(b00 * g1 - a01 * g0) / det;
            let q = [p[0] + d0, p[1] + d1];
            let rq = residuals(samples, &set(q));
            let cq = sum_sq(&rq);
            if cq < cost {
                p = q;
                r = rq;
                let rel = (cost - cq) / cost.max(1e-300);
                cost = cq;
                mu = (mu / 10.0).max(1e-12);
                improved = rel > 1e-14;
                break;
            }
            mu *= 10.0;
        }
        if !improved || cost < 1e-28 {
            break;
        }
    }
    (p, cost.sqrt())
}

/// Fits κ = i(a·ν + b) and κ = c·m + d against the integral route at 20 sample
/// entries per series, from several starting points.
pub fn fit_normalization() -> Result<FitResult> {
    let cont = fit_samples(false)?;
    let disc = fit_samples(true)?;
    let base = HYPERGEO_NORMALIZATION;
    let mut best_c = ([0.0, 0.0], f64::INFINITY);
    for scale in [-1.0, 0.5, 1.5, 2.0] {
        for shift in [-0.5, 0.0, 0.5] {
            let found = levenberg_marquardt([scale, shift], &cont, |p| HypergeoNormalization {
                nu_scale: p[0],
                nu_shift: p[1],
                ..base
            });
            if found.1 < best_c.1 {
                best_c = found;
            }
        }
    }
    let mut best_d = ([0.0, 0.0], f64::INFINITY);
    for scale in [0.25, 1.0] {
        for shift in [-1.0, 0.0, 0.5] {
            let found = levenberg_marquardt([scale, shift], &disc, |p| HypergeoNormalization {
                m_scale: p[0],
                m_shift: p[1],
                ..base
            });
            if found.1 < best_d.1 {
                best_d = found;
            }
        }
    }
    Ok(FitResult {
        normalization: HypergeoNormalization {
            nu_scale: best_c.0[0],
            nu_shift: best_c.0[1],
            m_scale: best_d.0[0],
            m_shift: best_d.0[1],
        },
        residual_continuous: best_c.1,
        residual_discrete: best_d.1,
        samples: cont.len() + disc.len(),
    })
}
