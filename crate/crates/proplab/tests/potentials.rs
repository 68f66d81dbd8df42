use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use proplab::c64;
use proplab::potentials::schwarzschild::{peak_radius, tortoise, tortoise_inverse};
use proplab::potentials::stieltjes::{stieltjes_evaluate, StieltjesDensity};
use proplab::potentials::*;
use proptest::prelude::*;

fn lor() -> PotentialSpec {
    PotentialSpec::lorentzian(1.0, 1.0).unwrap()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

#[test]
fn evaluation_examples() {
    assert_eq!(evaluate(&lor(), 0.0).unwrap(), 1.0);
    let s = PotentialSpec::schwarzschild(1.0, 0).unwrap();
    let x = tortoise(3.0, 1.0).unwrap();
    assert!((x - 3.0).abs() < 1e-15);
    assert!((evaluate(&s, x).unwrap() - 2.0 / 81.0).abs() < 1e-12);
}

#[test]
fn continuation_examples() {
    let z = evaluate_continued(&lor(), 1.0, FRAC_PI_8).unwrap().value;
    let want = c64::new(1.0, 0.0) / (c64::new(0.0, FRAC_PI_4).exp() + 1.0);
    assert!((z - want).norm() < 1e-15);
    for spec in [lor(), PotentialSpec::schwarzschild(1.0, 2).unwrap()] {
        let z0 = evaluate_continued(&spec, 2.0, 0.0).unwrap().value;
        assert!((z0.re - evaluate(&spec, 2.0).unwrap()).abs() < 1e-12 && z0.im.abs() < 1e-12);
        let up = evaluate_continued(&spec, 2.0, 0.1).unwrap().value;
        let down = evaluate_continued(&spec, 2.0, -0.1).unwrap().value;
        assert!((up.conj() - down).norm() < 1e-12);
    }
    assert!(evaluate_continued(&lor(), 1.0, 1.6).is_err());
}

#[test]
fn v_beta_examples() {
    let v = 2.0 * v_beta(&lor(), 1.0, FRAC_PI_8).unwrap();
    assert!((v - 2.0f64.sqrt() / (2.0 + 2.0f64.sqrt())).abs() < 1e-14);
    assert!((v - 0.41421).abs() < 1e-5);
    for spec in [lor(), PotentialSpec::exponential_tail(0.3, 1.0).unwrap()] {
        assert_eq!(v_beta(&spec, 0.0, 0.2).unwrap(), 0.0);
    }
    // 0.5 sech(x) ~ e^{-x} far out
    let tail = PotentialSpec::exponential_tail(0.5, 1.0).unwrap();
    for (x, beta) in [(20.0, 0.3), (25.0, 0.7)] {
        let want = 2.0 * (-x * f64::cos(beta)).exp() * (x * f64::sin(beta)).sin();
        let got = 2.0 * v_beta(&tail, x, beta).unwrap();
        assert!((got - want).abs() <= 1e-12 * (-x * f64::cos(beta)).exp());
    }
}

#[test]
fn v_beta_is_odd_and_positive_for_lorentzian() {
    for x in linspace(-15.0, 15.0, 61) {
        for beta in [0.05, 0.3, 0.7] {
            let p = v_beta(&lor(), x, beta).unwrap();
            let m = v_beta(&lor(), x, -beta).unwrap();
            assert!((p + m).abs() < 1e-15);
            assert!(p >= 0.0);
        }
        assert_eq!(v_beta(&lor(), x, 0.0).unwrap(), 0.0);
    }
}

#[test]
fn first_order_law_is_the_virial() {
    let specs = [
        lor(),
        PotentialSpec::lorentzian(2.0, 0.5).unwrap(),
        PotentialSpec::exponential_tail(0.5, 1.0).unwrap(),
    ];
    for spec in &specs {
        for x in [0.3, 1.0, 2.5] {
            let vir = virial(spec, x).unwrap();
            let q = |b: f64| v_beta(spec, x, b).unwrap() / b;
            let (e1, e2) = ((q(0.02) - vir).abs(), (q(0.01) - vir).abs());
            assert!((e1 / e2 - 4.0).abs() < 0.05, "error ratio {}", e1 / e2);
            let rich = (4.0 * q(0.01) - q(0.02)) / 3.0;
            assert!((rich - vir).abs() < 1e-6 * vir.abs().max(1.0));
        }
    }
}

#[test]
fn virial_examples() {
    for (c0, b) in [(1.0, 1.0), (2.0, 0.5)] {
        let spec = PotentialSpec::lorentzian(c0, b).unwrap();
        for x in [0.5, 1.0, 3.0] {
            let want = 2.0 * c0 * x * x / (b * b + x * x).powi(2);
            assert!((virial(&spec, x).unwrap() - want).abs() < 1e-14);
        }
        assert_eq!(virial(&spec, 0.0).unwrap(), 0.0);
    }
    // centered at the hump, the virial of a one-hump potential never goes negative
    let s = PotentialSpec::centered_schwarzschild(1.0, 2).unwrap();
    let xs = linspace(-30.0, 60.0, 3001);
    assert!(hump_analysis(&s, &xs).unwrap().is_one_hump);
    let scale = evaluate(&s, 0.0).unwrap();
    assert!(xs.iter().all(|&x| virial(&s, x).unwrap() >= -1e-10 * scale));
}

#[test]
fn tortoise_examples() {
    assert!((tortoise(4.0, 1.0).unwrap() - (4.0 + 2.0 * 2.0f64.ln())).abs() < 1e-14);
    assert!((tortoise(4.0, 1.0).unwrap() - 5.386294).abs() < 1e-6);
    assert!(tortoise(2.0, 1.0).is_err());
    let mut prev = f64::INFINITY;
    for s in [-5.0, -10.0, -20.0, -40.0] {
        let r = tortoise_inverse(s, 1.0).unwrap();
        assert!(r > 2.0 && r < prev);
        prev = r;
    }
    assert!(tortoise_inverse(-40.0, 1.0).unwrap() - 2.0 < 1e-8);
    for r in [2.5, 3.0, 10.0] {
        let d = (tortoise(r + 1e-5, 1.0).unwrap() - tortoise(r - 1e-5, 1.0).unwrap()) / 2e-5;
        assert!((d - r / (r - 2.0)).abs() < 1e-6);
    }
}

proptest! {
    #[test]
    fn tortoise_round_trip(s in -20.0f64..50.0) {
        let back = tortoise(tortoise_inverse(s, 1.0).unwrap(), 1.0).unwrap();
        prop_assert!((back - s).abs() <= 1e-10 * (1.0 + s.abs()));
    }
}

#[test]
fn schwarzschild_shape() {
    for ell in [0u32, 1, 2, 5] {
        let s = PotentialSpec::schwarzschild(1.0, ell).unwrap();
        for x in linspace(-30.0, 200.0, 500) {
            assert!(evaluate(&s, x).unwrap() > 0.0);
        }
        // exponential decay toward the horizon: V(x - 10)/V(x) ~ e^{-10/(2M)}
        let ratio = evaluate(&s, -40.0).unwrap() / evaluate(&s, -30.0).unwrap();
        assert!((ratio / (-5.0f64).exp() - 1.0).abs() < 1e-3);
    }
    let s = PotentialSpec::schwarzschild(1.0, 3).unwrap();
    let far = 1e5;
    assert!((evaluate(&s, far).unwrap() * far * far / 12.0 - 1.0).abs() < 1e-3);
}

#[test]
fn humps() {
    let xs = linspace(-20.0, 20.0, 4001);
    let h = hump_analysis(&lor(), &xs).unwrap();
    assert!(h.is_one_hump && h.peak_x.abs() < 1e-6, "{h:?}");
    let wide = linspace(-30.0, 90.0, 12001);
    for ell in [2u32, 10, 40] {
        let s = PotentialSpec::schwarzschild(1.0, ell).unwrap();
        let h = hump_analysis(&s, &wide).unwrap();
        let r = tortoise_inverse(h.peak_x, 1.0).unwrap();
        assert!((r - peak_radius(1.0, ell)).abs() < 1e-6);
    }
    let r40 = peak_radius(1.0, 40);
    assert!((r40 - 3.0).abs() < (peak_radius(1.0, 10) - 3.0).abs());
    assert!((r40 - 3.0).abs() < 1e-3);
    let two = PotentialSpec::sum(vec![
        (1.0, PotentialSpec::shifted_lorentzian(1.0, 1.0, -6.0).unwrap()),
        (1.0, PotentialSpec::shifted_lorentzian(1.0, 1.0, 6.0).unwrap()),
    ]);
    assert!(!hump_analysis(&two, &xs).unwrap().is_one_hump);
    let flat = PotentialSpec::zero();
    let h = hump_analysis(&flat, &xs).unwrap();
    assert!(!h.is_one_hump && h.diagnostic.is_some());
}

#[test]
fn stieltjes_examples() {
    // unit-mass triangle of half-width 1e-3 at alpha = 1
    let eps = 1e-3;
    let d = StieltjesDensity::new(
        vec![0.0, 1.0 - eps, 1.0, 1.0 + eps, 2.0],
        vec![0.0, 0.0, 1.0 / eps, 0.0, 0.0],
    )
    .unwrap();
    assert!((d.mass() - 1.0).abs() < 1e-12);
    assert!((stieltjes_evaluate(&d, 0.0).unwrap() - 1.0).abs() < 1e-5);
    let x: f64 = 1e3;
    assert!((stieltjes_evaluate(&d, x).unwrap() * x * x - d.mass()).abs() < 1e-5);
    let zero = StieltjesDensity::new(vec![0.0, 1.0, 2.0], vec![0.0; 3]).unwrap();
    assert_eq!(stieltjes_evaluate(&zero, 3.0).unwrap(), 0.0);
    assert!(StieltjesDensity::new(vec![0.0, 1.0], vec![1.0, -1.0]).is_err());
    // point mass at b² reproduces the Lorentzian c0/(b² + x²)
    let b2: f64 = 2.0;
    let spike = StieltjesDensity::new(vec![b2 - eps, b2, b2 + eps], vec![0.0, 1.0 / eps, 0.0]).unwrap();
    for x in [0.0, 0.7, 3.0] {
        let want = 1.0 / (b2 + x * x);
        assert!((stieltjes_evaluate(&spike, x).unwrap() - want).abs() < 1e-6);
    }
}

#[test]
fn stieltjes_is_monotone_and_repulsive() {
    let alpha = linspace(0.0, 10.0, 201);
    let rho: Vec<f64> = alpha.iter().map(|a| (-a).exp() * a).collect();
    let spec = PotentialSpec::stieltjes(StieltjesDensity::new(alpha, rho).unwrap());
    let xs = linspace(0.0, 20.0, 201);
    let vals: Vec<f64> = xs.iter().map(|&x| evaluate(&spec, x).unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[1] <= w[0]));
    for &x in &xs {
        assert!(v_beta(&spec, x, 0.4).unwrap() >= -1e-15);
        assert!(virial(&spec, x).unwrap() >= -1e-15);
    }
    let _ = PI;
}
