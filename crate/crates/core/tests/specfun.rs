use num_complex::Complex64;
use ode_solvers::{Rk4, System, Vector2};
use std::f64::consts::PI;

use sl2heat::specfun::{hyp2f1_c1, jacobi_phi, Hyp2F1Params, JacobiParams};

fn de(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    quadrature::double_exponential::integrate(f, a, b, 1e-14).integral
}

/// F(a, b; 1; x) = sin(πb)/π ∫₀¹ u^{b-1} (1-u)^{-b} (1-xu)^{-a} du, 0 < Re b < 1.
///
/// Each half of [0, 1] is mapped by a square so the endpoint factor has unit modulus.
fn euler_integral(a: Complex64, b: Complex64, x: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let pow = |base: f64, e: Complex64| (e * base.ln()).exp();
    // u = w², w² ≤ 1/2
    let left =
        |w: f64| pow(w, 2.0 * b - 1.0) * pow(1.0 - w * w, -b) * pow(1.0 - x * w * w, -a) * 2.0;
    // 1 - u = w², w² ≤ 1/2
    let right = |w: f64| {
        let u = 1.0 - w * w;
        pow(u, b - one) * pow(w, 1.0 - 2.0 * b) * pow(1.0 - x * u, -a) * 2.0
    };
    let r = 0.5f64.sqrt();
    let part = |f: &dyn Fn(f64) -> Complex64| {
        Complex64::new(de(|w| f(w).re, 0.0, r), de(|w| f(w).im, 0.0, r))
    };
    (PI * b).sin() / PI * (part(&left) + part(&right))
}

#[test]
fn hypergeometric_matches_euler_integral() {
    let a = Complex64::new(0.5, 0.7);
    let b = a.conj();
    for x in [0.3, 0.65, 0.8, 0.95] {
        let got = hyp2f1_c1(Hyp2F1Params::new(a, b, x)).unwrap();
        let want = euler_integral(a, b, x);
        assert!(
            (got - want).norm() < 1e-10 * want.norm(),
            "x={x}: {got} vs {want}"
        );
    }
    // independent 30-digit evaluation
    let (a, b) = (Complex64::new(1.2, -0.4), Complex64::new(0.3, 0.9));
    let got = hyp2f1_c1(Hyp2F1Params::new(a, b, 0.5)).unwrap();
    let want = Complex64::new(1.384_932_183_204_029_8, 0.949_476_768_868_857_9);
    assert!((got - want).norm() < 1e-13, "{got} vs {want}");
}

/// φ'' + (coth t + tanh t) φ' + (λ² + 1) φ = 0, the α = β = 0 Jacobi equation.
struct Legendre {
    q: f64,
}

impl System<f64, Vector2<f64>> for Legendre {
    fn system(&self, t: f64, y: &Vector2<f64>, dy: &mut Vector2<f64>) {
        dy[0] = y[1];
        dy[1] = -(1.0 / t.tanh() + t.tanh()) * y[1] - self.q * y[0];
    }
}

#[test]
fn jacobi_matches_ode_integration() {
    for lambda in [0.0, 0.7, 2.5] {
        let q = lambda * lambda + 1.0;
        // Taylor start off the regular singular point: φ = 1 + c₂t² + c₄t⁴ + O(t⁶)
        let (c2, c4) = (-q / 4.0, q * (q + 8.0 / 3.0) / 64.0);
        let t0: f64 = 0.01;
        let y0 = Vector2::new(
            1.0 + c2 * t0.powi(2) + c4 * t0.powi(4),
            2.0 * c2 * t0 + 4.0 * c4 * t0.powi(3),
        );
        for t in [0.5, 1.0, 2.0, 3.0] {
            let steps = 20_000.0;
            let mut solver = Rk4::new(Legendre { q }, t0, y0, t, (t - t0) / steps);
            solver.integrate().map_err(|e| format!("{e:?}")).unwrap();
            let y = solver.y_out().last().unwrap()[0];
            let p = JacobiParams::new(
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(lambda, 0.0),
                t,
            );
            let v = jacobi_phi(p).unwrap();
            assert!((v.re - y).abs() < 1e-8, "λ={lambda} t={t}: {} vs {y}", v.re);
            assert!(v.im.abs() < 1e-12);
        }
    }
}

#[test]
fn jacobi_solves_its_equation() {
    let alpha = Complex64::new(0.5, 0.0);
    let beta = Complex64::new(-0.5, 0.0);
    let lambda = Complex64::new(1.3, 0.0);
    let f = |t: f64| jacobi_phi(JacobiParams::new(alpha, beta, lambda, t)).unwrap();
    let q = JacobiParams::new(alpha, beta, lambda, 0.0).potential();
    let h = 1e-3;
    for t in [0.1, 0.5, 1.0, 2.0, 3.0] {
        let d1 = (f(t + h) - f(t - h)) / (2.0 * h);
        let d2 = (f(t + h) - f(t) * 2.0 + f(t - h)) / (h * h);
        let r =
            d2 + d1 * ((2.0 * alpha + 1.0) / t.tanh() + (2.0 * beta + 1.0) * t.tanh()) + q * f(t);
        assert!(r.norm() < 1e-5, "t={t}: {r}");
    }
}
