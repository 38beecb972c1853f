use std::f64::consts::PI;

use sl2heat::group::{exp_sl2, AlgebraElement, GroupElement};
use sl2heat::spectrum::{ktype_tail_bound, KType, RepPoint};
use sl2heat::spherical::{matrix_element, MatrixElementQuery, Route};
use sl2heat::synthesis::{rho, rho_n, KernelPlan, SynthesisConfig};
use sl2heat::verify::suites::plancherel_pair;

fn de(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    quadrature::double_exponential::integrate(f, a, b, 1e-13).integral
}

fn points() -> Vec<GroupElement> {
    vec![
        GroupElement::a(0.8),
        exp_sl2(&AlgebraElement::new(0.4, 0.9, -0.6)),
        exp_sl2(&AlgebraElement::new(-1.1, 0.2, 1.5)),
        GroupElement::k(2.0) * GroupElement::a(1.7) * GroupElement::k(-0.4),
        GroupElement::n(1.3) * GroupElement::a(-0.5),
    ]
}

#[test]
fn radial_part_matches_adaptive_nu_integral() {
    let cfg = SynthesisConfig::default();
    for s in [0.0, 0.4, 1.0, 2.5] {
        // ∫ e^{-(ν²/2 + 1/8)} M_00(ν, s) (1/2π) ν tanh(πν) dν with hypergeometric matrix elements
        let oracle = de(
            |nu| {
                if nu == 0.0 {
                    return 0.0;
                }
                let q = MatrixElementQuery::new(
                    RepPoint::continuous(0, nu),
                    0,
                    0,
                    s,
                    Route::Hypergeometric,
                );
                let m = matrix_element(q).unwrap().value.re;
                (-(nu * nu / 2.0 + 0.125)).exp() * m * nu * (PI * nu).tanh() / (2.0 * PI)
            },
            0.0,
            14.0,
        );
        let v = rho_n(1.0, KType(0), &GroupElement::a(s), &cfg).unwrap();
        assert!((v.re - oracle).abs() < 1e-9, "s={s}: {} vs {oracle}", v.re);
        assert!(v.im.abs() < 1e-14);
    }
}

#[test]
fn kernel_is_real_and_inversion_symmetric() {
    let cfg = SynthesisConfig::default();
    for t in [0.5, 1.0] {
        let plan = KernelPlan::new(t, &cfg).unwrap();
        for g in points() {
            let v = plan.rho(&g).unwrap();
            assert!(v.imag_residual < 1e-12, "{g:?}: {}", v.imag_residual);
            let w = plan.rho(&g.inverse()).unwrap();
            assert!((v.value - w.value).abs() < 1e-12 * v.value.abs().max(1e-3));
            // ρ_{t,-n}(g) = conj ρ_{t,n}(g)
            for (n, c) in &v.per_n {
                let d = v.per_n[&-n];
                assert!((c - d.conj()).norm() < 1e-13, "n={n}");
            }
        }
    }
}

#[test]
fn components_are_dominated_by_their_tail_bounds() {
    let t = 0.7;
    let plan = KernelPlan::with_parameters(t, 24, 14.0, 32).unwrap();
    for g in points() {
        let v = plan.rho(&g).unwrap();
        for (&n, c) in &v.per_n {
            assert!(
                c.norm() <= ktype_tail_bound(t, KType(n)).unwrap(),
                "n={n}: {}",
                c.norm()
            );
        }
        // past the first few K-types the components decay monotonically
        let mags: Vec<f64> = (6..=24).map(|n| v.per_n[&n].norm()).collect();
        assert!(mags.windows(2).all(|w| w[1] <= w[0]), "{mags:?}");
    }
}

#[test]
fn discarded_mass_stays_below_reported_tail() {
    let cfg = SynthesisConfig {
        tol: 1e-6,
        ..Default::default()
    };
    for t in [0.5, 2.0] {
        let plan = KernelPlan::new(t, &cfg).unwrap();
        let wide = KernelPlan::with_parameters(
            t,
            3 * plan.cutoff + 6,
            plan.nu_max,
            plan.nu_nodes_per_unit,
        )
        .unwrap();
        for g in points() {
            let v = wide.rho(&g).unwrap();
            let dropped: f64 = v
                .per_n
                .iter()
                .filter(|(n, _)| n.abs() > plan.cutoff)
                .map(|(_, c)| c.norm())
                .sum();
            assert!(
                dropped <= plan.ktype_tail(),
                "t={t}: {dropped} > {}",
                plan.ktype_tail()
            );
            let kept = plan.rho(&g).unwrap().value;
            assert!((kept - v.value).abs() <= plan.tail_bound() + 1e-12);
        }
    }
}

#[test]
fn plancherel_norm_matches_closed_density() {
    let cfg = SynthesisConfig::default();
    let t = 2.0;
    let oracle = de(
        |nu| (-t * (nu * nu + 0.25)).exp() * nu * (PI * nu).tanh() / (2.0 * PI),
        0.0,
        12.0,
    );
    let (group, spectral) = plancherel_pair(t, 0, &cfg).unwrap();
    assert!((spectral - oracle).abs() < 1e-10 * oracle);
    assert!(
        (group - oracle).abs() < 1e-3 * oracle,
        "{group} vs {oracle}"
    );
}

#[test]
fn identity_value_is_positive_and_decays_in_time() {
    let cfg = SynthesisConfig::default();
    let vals: Vec<f64> = [0.3, 0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|&t| rho(t, &GroupElement::identity(), &cfg).unwrap().value)
        .collect();
    assert!(vals.iter().all(|v| *v > 0.0));
    assert!(vals.windows(2).all(|w| w[1] < w[0]), "{vals:?}");
}
