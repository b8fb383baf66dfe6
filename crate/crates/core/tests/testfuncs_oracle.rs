//! Full-fidelity synthetic functions against independently written
//! textbook formulas and their published optima.

use std::f64::consts::PI;

use hpobench_core::testfuncs::SyntheticFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn branin(x: &[f64]) -> f64 {
    let (a, b, c, r, s, t) = (1.0, 5.1 / (4.0 * PI.powi(2)), 5.0 / PI, 6.0, 10.0, 1.0 / (8.0 * PI));
    a * (x[1] - b * x[0].powi(2) + c * x[0] - r).powi(2) + s * (1.0 - t) * x[0].cos() + s
}

fn currin(x: &[f64]) -> f64 {
    let p = 2300.0 * x[0].powi(3) + 1900.0 * x[0].powi(2) + 2092.0 * x[0] + 60.0;
    let q = 100.0 * x[0].powi(3) + 500.0 * x[0].powi(2) + 4.0 * x[0] + 20.0;
    (1.0 - (-0.5 / x[1]).exp()) * p / q
}

fn hartmann3(x: &[f64]) -> f64 {
    let alpha = [1.0, 1.2, 3.0, 3.2];
    let a = [[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]];
    let p = [[3689.0, 1170.0, 2673.0], [4699.0, 4387.0, 7470.0], [1091.0, 8732.0, 5547.0], [381.0, 5743.0, 8828.0]];
    -(0..4)
        .map(|i| alpha[i] * (-(0..3).map(|j| a[i][j] * (x[j] - 1e-4 * p[i][j]).powi(2)).sum::<f64>()).exp())
        .sum::<f64>()
}

fn hartmann6(x: &[f64]) -> f64 {
    let alpha = [1.0, 1.2, 3.0, 3.2];
    let a = [
        [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
        [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
    ];
    let p = [
        [1312.0, 1696.0, 5569.0, 124.0, 8283.0, 5886.0],
        [2329.0, 4135.0, 8307.0, 3736.0, 1004.0, 9991.0],
        [2348.0, 1451.0, 3522.0, 2883.0, 3047.0, 6650.0],
        [4047.0, 8828.0, 8732.0, 5743.0, 1091.0, 381.0],
    ];
    -(0..4)
        .map(|i| alpha[i] * (-(0..6).map(|j| a[i][j] * (x[j] - 1e-4 * p[i][j]).powi(2)).sum::<f64>()).exp())
        .sum::<f64>()
}

/// Water flow through a borehole; minimized as its negative.
fn borehole(x: &[f64]) -> f64 {
    let [rw, r, tu, hu, tl, hl, l, kw] = [x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7]];
    let log_ratio = (r / rw).ln();
    let flow = 2.0 * PI * tu * (hu - hl) / (log_ratio * (1.0 + 2.0 * l * tu / (log_ratio * rw * rw * kw) + tu / tl));
    -flow
}

fn oracle(f: SyntheticFunction) -> fn(&[f64]) -> f64 {
    match f {
        SyntheticFunction::Branin2 => branin,
        SyntheticFunction::Currin2 => currin,
        SyntheticFunction::Hartmann3 => hartmann3,
        SyntheticFunction::Hartmann6 => hartmann6,
        SyntheticFunction::Borehole8 => borehole,
    }
}

#[test]
fn full_fidelity_matches_textbook_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for f in SyntheticFunction::ALL {
        for _ in 0..500 {
            let x: Vec<f64> = f.input_box().iter().map(|(lo, hi)| rng.random_range(*lo..=*hi)).collect();
            let (got, want) = (f.eval(&x, 1.0).unwrap(), oracle(f)(&x));
            assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "{f} at {x:?}: {got} vs {want}");
        }
    }
}

#[test]
fn published_optima() {
    let cases: [(SyntheticFunction, &[f64], f64, f64); 5] = [
        (SyntheticFunction::Branin2, &[-PI, 12.275], 0.397887, 1e-5),
        (SyntheticFunction::Branin2, &[PI, 2.275], 0.397887, 1e-5),
        (SyntheticFunction::Branin2, &[9.42478, 2.475], 0.397887, 1e-5),
        (SyntheticFunction::Hartmann3, &[0.114614, 0.555649, 0.852547], -3.86278, 1e-4),
        (SyntheticFunction::Hartmann6, &[0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573], -3.32237, 1e-4),
    ];
    for (f, x, v, tol) in cases {
        assert!((f.eval(x, 1.0).unwrap() - v).abs() < tol, "{f}");
    }
}

#[test]
fn known_optimum_is_never_beaten_by_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for f in SyntheticFunction::ALL {
        let opt = f.known_optimum();
        for p in &opt.points {
            assert!((f.eval(p, 1.0).unwrap() - opt.value).abs() <= 1e-4 * opt.value.abs().max(1.0), "{f}");
        }
        for _ in 0..2000 {
            let x: Vec<f64> = f.input_box().iter().map(|(lo, hi)| rng.random_range(*lo..=*hi)).collect();
            assert!(f.eval(&x, 1.0).unwrap() >= opt.value - 1e-6, "{f} beaten at {x:?}");
        }
    }
}
