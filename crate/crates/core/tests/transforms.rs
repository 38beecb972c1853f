use num_complex::Complex64;
use std::f64::consts::PI;

use sl2heat::group::{exp_sl2, AlgebraElement, GroupElement};
use sl2heat::spectrum::{nu_cutoff, KType, RepPoint, Sign};
use sl2heat::spherical::{matrix_element, MatrixElementQuery, Route};
use sl2heat::synthesis::{rho_n, rho_transform_side, SynthesisConfig};
use sl2heat::transforms::{
    convolve, inverse_spherical_transform, spherical_transform_radial, RadialFunction,
    SampledSpectrum, SpectralFunction,
};
use sl2heat::verify::suites::convolution_grid;

fn de(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    quadrature::double_exponential::integrate(f, a, b, 1e-13).integral
}

#[test]
fn gaussian_transform_matches_adaptive_quadrature() {
    let (n, sigma) = (2, 0.9);
    let f = RadialFunction::gaussian(KType(n), sigma);
    for rep in [
        RepPoint::continuous(0, 0.6),
        RepPoint::discrete(2, Sign::for_weight(n)),
    ] {
        // 2π ∫ conj M_nn(s) e^{-σs²} sinh s ds, matrix elements by the hypergeometric route
        let m = |s: f64| {
            matrix_element(MatrixElementQuery::new(rep, n, n, s, Route::Hypergeometric))
                .unwrap()
                .value
                .conj()
                * ((-sigma * s * s).exp() * s.sinh())
        };
        let want =
            Complex64::new(de(|s| m(s).re, 0.0, 8.0), de(|s| m(s).im, 0.0, 8.0)) * (2.0 * PI);
        let got = spherical_transform_radial(&f, rep, 8.0).unwrap();
        assert!(
            (got - want).norm() < 1e-6 * want.norm(),
            "{}: {got} vs {want}",
            rep.label()
        );
    }
}

#[test]
fn inverse_of_heat_multiplier_is_the_kernel_component() {
    let cfg = SynthesisConfig::default();
    let t = 1.0;
    let points = [
        GroupElement::a(0.6),
        exp_sl2(&AlgebraElement::new(0.3, -0.8, 0.5)),
        GroupElement::k(1.1) * GroupElement::a(1.9),
    ];
    for n in [0, 1, 2, -3] {
        let side = rho_transform_side(t, KType(n));
        let fhat = SpectralFunction::heat(&side, nu_cutoff(t, KType(n), 1e-13).max(1.0));
        for g in &points {
            let a = inverse_spherical_transform(&fhat, g, 32).unwrap();
            let b = rho_n(t, KType(n), g, &cfg).unwrap();
            assert!((a - b).norm() < 1e-6, "n={n}: {a} vs {b}");
        }
    }
}

#[test]
fn gaussian_round_trip() {
    for (n, sigma) in [(1, 1.0), (2, 0.7)] {
        let f = RadialFunction::gaussian(KType(n), sigma);
        let spectrum = SpectralFunction::of_radial(&f, 7.0, 32, 6.5).unwrap();
        let (mut err, mut norm) = (0.0, 0.0);
        for i in 0..=30 {
            let s = 0.1 * i as f64;
            let back = spectrum.inverse(&GroupElement::a(s)).unwrap();
            err += (back - f.profile(s)).norm_sqr();
            norm += f.profile(s).norm_sqr();
        }
        let rel = (err / norm).sqrt();
        assert!(rel < 1e-3, "n={n}: {rel}");
    }
}

#[test]
fn transform_of_convolution_is_the_product() {
    let n = KType(0);
    let f1 = RadialFunction::gaussian(n, 1.0);
    let f2 = RadialFunction::gaussian(n, 1.5);
    let a = SpectralFunction::of_radial(&f1, 10.0, 32, 6.0).unwrap();
    let b = SpectralFunction::of_radial(&f2, 10.0, 32, 6.0).unwrap();
    let product = SampledSpectrum {
        n,
        continuous: a
            .continuous
            .iter()
            .zip(&b.continuous)
            .map(|(&(nu, w, x), &(_, _, y))| (nu, w, x * y))
            .collect(),
        discrete: Vec::new(),
    };
    let grid = convolution_grid();
    for g in [GroupElement::identity(), GroupElement::a(0.9)] {
        let direct = convolve(&f1, &f2, &g, &grid).unwrap();
        let spectral = product.inverse(&g).unwrap();
        assert!(
            (direct - spectral).norm() < 1e-6 * spectral.norm(),
            "{direct} vs {spectral}"
        );
    }
}
