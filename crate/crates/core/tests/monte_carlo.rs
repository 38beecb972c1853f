use num_complex::Complex64;

use sl2heat::group::GroupElement;
use sl2heat::synthesis::SynthesisConfig;
use sl2heat::verify::suites::kernel_table;
use sl2heat::verify::{
    fd_laplacian, mc_sample, observable_grid, quadrature_expectation, sample_mean, FDScheme,
    McConfig, Observable, Orientation,
};

#[test]
fn generator_is_the_laplacian() {
    let h = 0.004;
    let cfg = McConfig {
        paths: 40_000,
        dt: h / 100.0,
        t_final: h,
        seed: 21,
        orientation: Orientation::Direct,
    };
    let ends = mc_sample(&cfg).unwrap();
    let e = GroupElement::identity();
    for obs in [
        Observable::RadialBump { sigma: 1.0 },
        Observable::KPhaseBump { sigma: 0.5 },
    ] {
        let f0 = obs.eval(&e);
        let diffs: Vec<f64> = ends.iter().map(|g| (obs.eval(g) - f0) / h).collect();
        let (mean, se) = sample_mean(&diffs);
        let lap = fd_laplacian(
            |g| Complex64::new(obs.eval(g), 0.0),
            &e,
            &FDScheme::default(),
        )
        .re;
        // O(h) bias of the difference quotient is well below the sampling error here
        assert!(
            (mean - lap).abs() <= 3.0 * se,
            "{}: {mean} ± {se} vs {lap}",
            obs.name()
        );
    }
}

#[test]
fn expectations_agree_across_seeds() {
    let t = 0.5;
    let table = kernel_table(t, 8.0, &SynthesisConfig::default()).unwrap();
    let obs = Observable::RadialBump { sigma: 1.0 };
    let (quad, _) =
        quadrature_expectation(&table, obs, Orientation::Direct, &observable_grid()).unwrap();
    for seed in [3, 11, 2024] {
        let ends = mc_sample(&McConfig::new(20_000, t, seed)).unwrap();
        let (mean, se) = sample_mean(&ends.iter().map(|g| obs.eval(g)).collect::<Vec<_>>());
        assert!(
            (mean - quad).abs() <= 3.5 * se,
            "seed {seed}: {mean} ± {se} vs {quad}"
        );
    }
}
