//! Matrix elements of the continuous and discrete series on the weight
//! vectors, the spherical functions Φ and Φ̃ of a K-type, and their first
//! derivatives along the basis of the Lie algebra.
//!
//! The canonical table is M_{n₁n₂}(s) = ⟨U(a_s)e_{n₁}, e_{n₂}⟩ from the
//! ψ-integral. On all of G,
//!
//!   ⟨e_n, U(k_{θ₁} a_s k_{θ₂}) e_{n'}⟩ = e^{-i(nθ₁ + n'θ₂)/2} conj(M_{n'n}(s)),
//!
//! so Φ̃(g) = ⟨e_n, U(g)e_n⟩ = e^{-in(θ₁+θ₂)/2} M_{nn}(s) and Φ = conj(Φ̃). The
//! diagonal entries are real.

mod psi;
pub mod qualification;
mod routes;

pub use qualification::{fit_normalization, qualification_report, QualificationReport};
pub use routes::{discrete_diagonal, HypergeoNormalization, HYPERGEO_NORMALIZATION};

pub(crate) use psi::psi_mean_vec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{BasisDirection, CartanCoords, CartanFrame, GroupElement};
use crate::spectrum::{KType, RepPoint};

const INV_SQRT8: f64 = 0.353_553_390_593_273_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Route {
    Integral,
    Hypergeometric,
    Jacobi,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixElementQuery {
    pub rep: RepPoint,
    pub n1: i64,
    pub n2: i64,
    pub s: f64,
    pub route: Route,
}

impl MatrixElementQuery {
    pub fn new(rep: RepPoint, n1: i64, n2: i64, s: f64, route: Route) -> Self {
        Self {
            rep,
            n1,
            n2,
            s,
            route,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalValue {
    pub value: Complex64,
    pub route: Route,
    pub est_error: f64,
}

fn check_weights(rep: RepPoint, n1: i64, n2: i64) -> Result<()> {
    let valid = match rep {
        RepPoint::Continuous { eps, nu } => eps <= 1 && nu >= 0.0,
        RepPoint::Discrete { m, .. } => m >= 2,
    };
    if !valid || !rep.has_weight(n1) || !rep.has_weight(n2) {
        return Err(Error::Weight {
            n1,
            n2,
            rep: rep.label(),
        });
    }
    Ok(())
}

/// M_{n₁n₂}(s) by the requested route.
pub fn matrix_element(q: MatrixElementQuery) -> Result<SphericalValue> {
    check_weights(q.rep, q.n1, q.n2)?;
    if !(q.s >= 0.0) || !q.s.is_finite() {
        return Err(Error::Domain(format!(
            "matrix element needs s >= 0, got {}",
            q.s
        )));
    }
    match q.route {
        Route::Integral => {
            let r = psi::psi_mean(q.s, q.rep.exponent(), q.n1, q.n2)?;
            Ok(SphericalValue {
                value: r.value,
                route: Route::Integral,
                est_error: r.delta,
            })
        }
        Route::Hypergeometric => {
            let kappa = HYPERGEO_NORMALIZATION.kappa(q.rep);
            let v = routes::hypergeometric(kappa, q.n1, q.n2, q.s)?;
            Ok(SphericalValue {
                value: v,
                route: Route::Hypergeometric,
                est_error: 1e-13 * v.norm().max(1e-300),
            })
        }
        Route::Jacobi => {
            if q.n1 != q.n2 {
                return Err(Error::Route(format!(
                    "the Jacobi form covers only the diagonal, got ({}, {})",
                    q.n1, q.n2
                )));
            }
            let v = routes::jacobi_diagonal(q.rep, q.n1, q.s)?;
            Ok(SphericalValue {
                value: v,
                route: Route::Jacobi,
                est_error: 1e-13 * v.norm().max(1e-300),
            })
        }
    }
}

/// M_{nn}(s) as used by the synthesis: the ψ-integral for the continuous
/// series, the terminating Jacobi-polynomial form for the discrete series.
pub fn diagonal_element(rep: RepPoint, n: i64, s: f64) -> Result<SphericalValue> {
    match rep {
        RepPoint::Continuous { .. } => {
            matrix_element(MatrixElementQuery::new(rep, n, n, s, Route::Integral))
        }
        RepPoint::Discrete { m, .. } => {
            check_weights(rep, n, n)?;
            let v = discrete_diagonal(m, n, s)?;
            Ok(SphericalValue {
                value: Complex64::new(v, 0.0),
                route: Route::Jacobi,
                est_error: 1e-15 * (1.0 + n.unsigned_abs() as f64) * v.abs().max(1e-300),
            })
        }
    }
}

fn check_member(n: KType, rep: RepPoint) -> Result<()> {
    if !rep.contains(n) {
        return Err(Error::SpectrumMismatch {
            n: n.0,
            rep: rep.label(),
        });
    }
    Ok(())
}

/// e^{-in(θ₁+θ₂)/2} for the Cartan frame of g.
fn ktype_phase(n: KType, frame: &CartanFrame) -> Complex64 {
    // θ₁ + θ₂ = -2α
    Complex64::from_polar(1.0, n.0 as f64 * frame.alpha)
}

/// Φ̃_{τ_n}^U(g) = ⟨e_n, U(g) e_n⟩.
pub fn phi_tilde(n: KType, rep: RepPoint, g: &GroupElement) -> Result<SphericalValue> {
    check_member(n, rep)?;
    let frame = CartanFrame::of(g);
    let d = diagonal_element(rep, n.0, frame.s())?;
    Ok(SphericalValue {
        value: ktype_phase(n, &frame) * d.value,
        ..d
    })
}

/// Φ_{τ_n}^U(g) = ⟨U(g) e_n, e_n⟩ = conj Φ̃(g).
pub fn phi(n: KType, rep: RepPoint, g: &GroupElement) -> Result<SphericalValue> {
    let v = phi_tilde(n, rep, g)?;
    Ok(SphericalValue {
        value: v.value.conj(),
        ..v
    })
}

/// Φ evaluated from explicit Cartan coordinates (any valid representative).
pub fn phi_from_cartan(n: KType, rep: RepPoint, c: &CartanCoords) -> Result<SphericalValue> {
    check_member(n, rep)?;
    let d = diagonal_element(rep, n.0, c.s)?;
    let phase = Complex64::from_polar(1.0, 0.5 * n.0 as f64 * (c.theta1 + c.theta2));
    Ok(SphericalValue {
        value: phase * d.value,
        ..d
    })
}

/// ⟨e_{n₁}, U(g) e_{n₂}⟩ for weights of `rep`.
pub fn matrix_coefficient(rep: RepPoint, n1: i64, n2: i64, g: &GroupElement) -> Result<Complex64> {
    let frame = CartanFrame::of(g);
    let s = frame.s();
    let m = matrix_element(MatrixElementQuery::new(rep, n2, n1, s, Route::Integral))?.value;
    // n₁θ₁ + n₂θ₂ = -(n₁ + n₂)α + (n₂ - n₁)β
    let arg = -0.5 * ((n2 - n1) as f64 * frame.beta - (n1 + n2) as f64 * frame.alpha);
    Ok(Complex64::from_polar(1.0, arg) * m.conj())
}

/// (d/du) Φ̃(g exp(uZ)) at u = 0 for a basis direction Z.
///
/// X₁ acts on the K-type by i n/√8. Y₁ and Y₂ move the weight by ±2 with
/// coefficients (σ̄ ∓ n)/(2√8), σ̄ = 1 - 2iν on the continuous series and m on
/// the discrete series; ladder terms with a vanishing coefficient are skipped.
pub fn phi_tilde_derivative(
    n: KType,
    rep: RepPoint,
    g: &GroupElement,
    dir: BasisDirection,
) -> Result<Complex64> {
    check_member(n, rep)?;
    let nn = n.0;
    if dir == BasisDirection::X1 {
        let v = phi_tilde(n, rep, g)?.value;
        return Ok(Complex64::new(0.0, nn as f64 * INV_SQRT8) * v);
    }
    let sbar = rep.exponent().conj();
    let c_down = sbar - nn as f64;
    let c_up = sbar + nn as f64;
    let ladder = |c: Complex64, target: i64| -> Result<Complex64> {
        if c.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if !rep.has_weight(target) {
            return Err(Error::Weight {
                n1: nn,
                n2: target,
                rep: rep.label(),
            });
        }
        Ok(c * matrix_coefficient(rep, nn, target, g)?)
    };
    let down = ladder(c_down, nn - 2)?;
    let up = ladder(c_up, nn + 2)?;
    let k = 0.5 * INV_SQRT8;
    Ok(match dir {
        BasisDirection::Y1 => (down + up) * k,
        BasisDirection::Y2 => Complex64::new(0.0, -k) * (down - up),
        BasisDirection::X1 => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cartan, exp_sl2, AlgebraElement};
    use crate::spectrum::{heat_eigenvalue, Sign};
    use proptest::prelude::*;

    fn sample_g() -> GroupElement {
        exp_sl2(&AlgebraElement::new(0.3, 0.7, -0.4))
    }

    #[test]
    fn s_zero_gives_delta() {
        let rep = RepPoint::continuous(0, 0.7);
        for route in [Route::Integral, Route::Hypergeometric] {
            let v = matrix_element(MatrixElementQuery::new(rep, 2, 2, 0.0, route)).unwrap();
            assert!((v.value - 1.0).norm() < 1e-15);
            let v = matrix_element(MatrixElementQuery::new(rep, 2, -2, 0.0, route)).unwrap();
            assert!(v.value.norm() < 1e-15);
        }
    }

    #[test]
    fn integral_and_hypergeometric_agree() {
        let rep = RepPoint::continuous(0, 0.7);
        let a = matrix_element(MatrixElementQuery::new(rep, 0, 0, 1.0, Route::Integral)).unwrap();
        let b = matrix_element(MatrixElementQuery::new(
            rep,
            0,
            0,
            1.0,
            Route::Hypergeometric,
        ))
        .unwrap();
        assert!((a.value - b.value).norm() < 1e-8);
        assert!(
            (a.value - b.value).norm() < 1e-13,
            "{} vs {}",
            a.value,
            b.value
        );
    }

    #[test]
    fn off_diagonal_routes_agree() {
        let rep = RepPoint::continuous(1, 0.7);
        for (n1, n2) in [(1, 3), (3, 1), (-1, 1), (5, -3)] {
            let a =
                matrix_element(MatrixElementQuery::new(rep, n1, n2, 1.3, Route::Integral)).unwrap();
            let b = matrix_element(MatrixElementQuery::new(
                rep,
                n1,
                n2,
                1.3,
                Route::Hypergeometric,
            ))
            .unwrap();
            assert!(
                (a.value - b.value).norm() < 1e-12,
                "({n1},{n2}): {} vs {}",
                a.value,
                b.value
            );
        }
    }

    #[test]
    fn jacobi_route_is_diagonal_only() {
        let rep = RepPoint::continuous(0, 0.7);
        let e = matrix_element(MatrixElementQuery::new(rep, 0, 2, 1.0, Route::Jacobi));
        assert!(matches!(e, Err(Error::Route(_))));
        let a = matrix_element(MatrixElementQuery::new(rep, 2, 2, 1.0, Route::Jacobi)).unwrap();
        let b = matrix_element(MatrixElementQuery::new(rep, 2, 2, 1.0, Route::Integral)).unwrap();
        assert!((a.value - b.value).norm() < 1e-12);
    }

    #[test]
    fn weight_set_is_enforced() {
        let rep = RepPoint::discrete(3, Sign::Minus);
        assert!(matches!(
            matrix_element(MatrixElementQuery::new(rep, 1, 3, 1.0, Route::Integral)),
            Err(Error::Weight { .. })
        ));
        let rep = RepPoint::continuous(0, 1.0);
        assert!(matches!(
            matrix_element(MatrixElementQuery::new(rep, 1, 1, 1.0, Route::Integral)),
            Err(Error::Weight { .. })
        ));
    }

    #[test]
    fn discrete_element_is_bounded_and_decays() {
        let rep = RepPoint::discrete(2, Sign::Minus);
        let mut prev = f64::INFINITY;
        for i in 0..30 {
            let s = 0.25 * i as f64;
            let v = matrix_element(MatrixElementQuery::new(rep, 2, 2, s, Route::Integral)).unwrap();
            assert!(v.value.norm() <= 1.0 + 1e-9);
            assert!(v.value.norm() < prev || i == 0);
            prev = v.value.norm();
        }
    }

    #[test]
    fn phi_at_identity_and_rotations() {
        let rep = RepPoint::continuous(1, 0.4);
        let v = phi(KType(3), rep, &GroupElement::identity()).unwrap();
        assert!((v.value - 1.0).norm() < 1e-15);
        let theta = 1.1;
        let v = phi_tilde(KType(3), rep, &GroupElement::k(theta)).unwrap();
        let expect = Complex64::from_polar(1.0, -1.5 * theta);
        assert!((v.value - expect).norm() < 1e-14);
    }

    #[test]
    fn phi_ignores_cartan_representative() {
        let g = sample_g();
        let c = cartan(&g);
        let shifted = CartanCoords::new(
            c.theta1 + 2.0 * std::f64::consts::PI,
            c.s,
            c.theta2 + 2.0 * std::f64::consts::PI,
        );
        assert!(shifted.to_element().max_abs_diff(&g) < 1e-12);
        for (n, rep) in [
            (1, RepPoint::continuous(1, 0.7)),
            (4, RepPoint::discrete(2, Sign::Minus)),
        ] {
            let a = phi_from_cartan(KType(n), rep, &c).unwrap().value;
            let b = phi_from_cartan(KType(n), rep, &shifted).unwrap().value;
            let d = phi(KType(n), rep, &g).unwrap().value;
            assert!((a - b).norm() < 1e-12 && (a - d).norm() < 1e-12);
        }
    }

    #[test]
    fn phi_tilde_is_conjugate_and_inverse() {
        let g = sample_g();
        for (n, rep) in [
            (2, RepPoint::continuous(0, 1.5)),
            (-3, RepPoint::discrete(3, Sign::Plus)),
        ] {
            let pt = phi_tilde(KType(n), rep, &g).unwrap().value;
            let p = phi(KType(n), rep, &g).unwrap().value;
            let pinv = phi(KType(n), rep, &g.inverse()).unwrap().value;
            assert!((pt - p.conj()).norm() < 1e-12);
            assert!((pt - pinv).norm() < 1e-10);
        }
    }

    fn fd_first(
        n: KType,
        rep: RepPoint,
        g: &GroupElement,
        dir: BasisDirection,
        h: f64,
    ) -> Complex64 {
        let z = AlgebraElement::basis(dir);
        let gp = *g * exp_sl2(&z.scale(h));
        let gm = *g * exp_sl2(&z.scale(-h));
        (phi_tilde(n, rep, &gp).unwrap().value - phi_tilde(n, rep, &gm).unwrap().value) / (2.0 * h)
    }

    #[test]
    fn ladder_derivatives_match_finite_differences() {
        let g = sample_g();
        let cases = [
            (0, RepPoint::continuous(0, 0.3)),
            (1, RepPoint::continuous(1, 0.7)),
            (-2, RepPoint::continuous(0, 1.5)),
            (3, RepPoint::continuous(1, 4.0)),
            (2, RepPoint::discrete(2, Sign::Minus)),
            (5, RepPoint::discrete(3, Sign::Minus)),
            (-4, RepPoint::discrete(2, Sign::Plus)),
            (-4, RepPoint::discrete(4, Sign::Plus)),
        ];
        for (n, rep) in cases {
            for dir in BasisDirection::ALL {
                let a = phi_tilde_derivative(KType(n), rep, &g, dir).unwrap();
                let fd = fd_first(KType(n), rep, &g, dir, 1e-5);
                assert!((a - fd).norm() < 1e-6, "n={n} {rep:?} {dir:?}: {a} vs {fd}");
            }
        }
    }

    #[test]
    fn x1_derivative_vanishes_for_n_zero() {
        let v = phi_tilde_derivative(
            KType(0),
            RepPoint::continuous(0, 0.9),
            &sample_g(),
            BasisDirection::X1,
        )
        .unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn edge_of_weight_set_skips_lower_ladder() {
        // n = m: the (m - n) coefficient is zero, so e_{m-2} is never requested
        let rep = RepPoint::discrete(3, Sign::Minus);
        assert!(phi_tilde_derivative(KType(3), rep, &sample_g(), BasisDirection::Y1).is_ok());
    }

    #[test]
    fn eigenvalue_law_by_second_differences() {
        let g = sample_g();
        let h = 1e-3;
        for (n, rep) in [
            (1, RepPoint::continuous(1, 0.7)),
            (4, RepPoint::discrete(4, Sign::Minus)),
        ] {
            let f0 = phi_tilde(KType(n), rep, &g).unwrap().value;
            let mut lap = Complex64::new(0.0, 0.0);
            for dir in BasisDirection::ALL {
                let z = AlgebraElement::basis(dir);
                let p = phi_tilde(KType(n), rep, &(g * exp_sl2(&z.scale(h))))
                    .unwrap()
                    .value;
                let m = phi_tilde(KType(n), rep, &(g * exp_sl2(&z.scale(-h))))
                    .unwrap()
                    .value;
                lap += (p - 2.0 * f0 + m) / (h * h);
            }
            let lam = heat_eigenvalue(KType(n), rep).unwrap();
            assert!((lap - lam * f0).norm() <= 1e-5 * (lam * f0).norm() + 1e-9);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn matrix_elements_are_bounded(nu in 0.05f64..6.0, s in 0.0f64..6.0, half in -4i64..4, step in -2i64..3, eps in 0u8..2) {
            let n1 = 2 * half + eps as i64;
            let n2 = n1 + 2 * step;
            let rep = RepPoint::continuous(eps, nu);
            let v = matrix_element(MatrixElementQuery::new(rep, n1, n2, s, Route::Integral)).unwrap();
            prop_assert!(v.value.norm() <= 1.0 + 1e-9);
        }

        #[test]
        fn diagonal_is_real(nu in 0.05f64..6.0, s in 0.0f64..5.0, n in -6i64..6) {
            let rep = RepPoint::continuous(n.rem_euclid(2) as u8, nu);
            let v = matrix_element(MatrixElementQuery::new(rep, n, n, s, Route::Integral)).unwrap();
            prop_assert!(v.value.im.abs() < 1e-13);
        }

        #[test]
        fn zero_s_representative_is_irrelevant(theta in 0.0f64..12.0, split in 0.0f64..12.0, n in -5i64..5) {
            // at s = 0 only θ₁ + θ₂ matters
            let rep = RepPoint::continuous(n.rem_euclid(2) as u8, 0.8);
            let a = phi_from_cartan(KType(n), rep, &CartanCoords::new(theta, 0.0, 0.0)).unwrap().value;
            let b = phi_from_cartan(KType(n), rep, &CartanCoords::new(theta - split, 0.0, split)).unwrap().value;
            prop_assert!((a - b).norm() < 1e-12);
        }
    }
}
