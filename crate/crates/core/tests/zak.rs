use gaborlab::frame::{classify, Classification};
use gaborlab::hermite_bargmann::{hermite_eval, SampledSignal};
use gaborlab::zak::*;
use gaborlab::Lattice2D;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

/// Direct Zak sum with a generous fixed truncation.
fn zak_direct(n: usize, a: f64, x: f64, xi: f64) -> Complex64 {
    (-60i64..=60)
        .map(|k| hermite_eval(n, x - a * k as f64).unwrap() * Complex64::from_polar(1.0, 2.0 * PI * a * k as f64 * xi))
        .sum()
}

#[test]
fn grid_matches_direct_sum() {
    let g = zak_transform(ZakInput::Hermite(2), 0.7, 16, 12).unwrap();
    for (i, j) in [(0, 0), (3, 5), (15, 11), (8, 1)] {
        let d = zak_direct(2, 0.7, g.x(i), g.xi(j));
        assert!((g.at(i, j) - d).norm() < 1e-13);
    }
}

#[test]
fn odd_windows_vanish_at_forced_zeros() {
    for n in [1usize, 3, 5] {
        for a in [0.5, 1.0, 2.0] {
            let g = zak_transform(ZakInput::Hermite(n), a, 8, 8).unwrap();
            assert!(g.at(0, 0).norm() < 1e-15);
            assert!(g.at(4, 0).norm() < 1e-14, "n={n} a={a}: {}", g.at(4, 0));
        }
    }
}

#[test]
fn gaussian_zak_is_positive_at_zero_frequency() {
    let g = zak_transform(ZakInput::Hermite(0), 1.3, 64, 4).unwrap();
    for i in 0..64 {
        assert!(g.at(i, 0).re > 0.0 && g.at(i, 0).im.abs() < 1e-15);
    }
}

#[test]
fn unitarity_on_hermite_inputs() {
    for n in 0..5 {
        for a in [0.8, 1.0, 1.5] {
            let g = zak_transform(ZakInput::Hermite(n), a, 64, 64).unwrap();
            assert!((g.l2_norm() - 1.0).abs() < 1e-6, "n={n} a={a}: {}", g.l2_norm());
        }
    }
}

#[test]
fn quasi_periodicity() {
    for n in [0usize, 1, 4] {
        let r = quasi_periodicity_residual(ZakInput::Hermite(n), 1.1, 32, 32).unwrap();
        assert!(r < 1e-8, "n={n}: {r}");
    }
    let s = SampledSignal::hermite(2).unwrap();
    let r = quasi_periodicity_residual(ZakInput::Sampled(&s), 1.0, 32, 32).unwrap();
    assert!(r < 1e-8, "{r}");
}

#[test]
fn sampled_input_matches_hermite_input() {
    let s = SampledSignal::hermite(3).unwrap();
    let a = zak_transform(ZakInput::Sampled(&s), 1.0, 16, 16).unwrap();
    let b = zak_transform(ZakInput::Hermite(3), 1.0, 16, 16).unwrap();
    for (u, v) in a.values.iter().zip(&b.values) {
        assert!((u - v).norm() < 1e-9);
    }
    let cut = SampledSignal::from_fn(-1.0, 0.01, 201, |t| Complex64::new(hermite_eval(0, t).unwrap(), 0.0)).unwrap();
    assert!(zak_transform(ZakInput::Sampled(&cut), 1.0, 8, 8).is_err());
}

#[test]
fn odd_hermite_is_not_a_frame_at_half_density() {
    for n in [1usize, 3] {
        let c = half_integer_criterion(n, 1.0, 128, 128).unwrap();
        assert!(!c.is_frame);
        assert!(c.inf_val < 1e-6);
        assert!(c.forced_zero_distance_cells.unwrap() <= 2.0);
    }
}

#[test]
fn gaussian_is_a_frame_at_half_density() {
    let c = half_integer_criterion(0, 1.0, 128, 128).unwrap();
    assert!(c.is_frame && c.inf_val > 1e-2, "{c:?}");
    assert!(c.certified_lower <= c.inf_val && c.sup_val >= c.inf_val);
    assert!(c.forced_zero_distance_cells.is_none());
    let l = Lattice2D::rect(1.0, 0.5).unwrap();
    assert_eq!(classify(&l, 0), Classification::Frame);
}

#[test]
fn certified_lower_bound_is_sound_off_grid() {
    let c = half_integer_criterion(2, 0.8, 64, 64).unwrap();
    let w = |x: f64, xi: f64| zak_direct(2, 1.6, x, xi).norm_sqr() + zak_direct(2, 1.6, x - 0.8, xi).norm_sqr();
    let mut dense_min = f64::INFINITY;
    for i in 0..300 {
        for j in 0..300 {
            dense_min = dense_min.min(w(1.6 * i as f64 / 300.0, j as f64 / (1.6 * 300.0)));
        }
    }
    assert!(c.certified_lower <= dense_min);
    assert!(c.inf_val <= c.grid_min);
}

#[test]
fn rejects_bad_parameters() {
    assert!(zak_transform(ZakInput::Hermite(0), 0.0, 8, 8).is_err());
    assert!(zak_transform(ZakInput::Hermite(0), 1.0, 1, 8).is_err());
    assert!(half_integer_criterion(100, 1.0, 8, 8).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn criterion_is_a_periodic(n in 0usize..4, x in 0.0f64..2.0, xi in 0.0f64..0.5) {
        let a = 1.0;
        let m = |x: f64| zak_direct(n, 2.0 * a, x, xi).norm_sqr() + zak_direct(n, 2.0 * a, x - a, xi).norm_sqr();
        prop_assert!((m(x) - m(x + a)).abs() < 1e-12);
    }
}
