use gaborlab::dual_window::solve_coefficients;
use gaborlab::frame::*;
use gaborlab::hermite_bargmann::{hermite_eval, hermite_gram_entry, SampledSignal};
use gaborlab::Lattice2D;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn skew(s: f64) -> Lattice2D {
    let a = s.sqrt();
    Lattice2D::from_generators([[a, 0.3 * a], [0.0, a]]).unwrap()
}

/// `π_z H_k` sampled on a wide grid.
fn shifted_hermite(z: Complex64, k: usize) -> SampledSignal {
    SampledSignal::from_fn(-12.0, 1.0 / 128.0, 3073, |t| {
        Complex64::from_polar(hermite_eval(k, t - z.re).unwrap(), 2.0 * PI * z.im * t)
    })
    .unwrap()
}

#[test]
fn classification() {
    assert_eq!(classify(&Lattice2D::square(0.5).unwrap(), 0), Classification::Frame);
    assert_eq!(classify(&Lattice2D::square(1.0).unwrap(), 0), Classification::Critical);
    assert_eq!(classify(&Lattice2D::rect(1.0, 0.5).unwrap(), 1), Classification::Critical);
    assert_eq!(classify(&Lattice2D::square(0.34).unwrap(), 2), Classification::NotFrame);
    assert_eq!(classify(&skew(0.3), 2), Classification::Frame);
}

#[test]
fn shifted_inner_products_match_time_domain() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(4);
    for _ in 0..12 {
        let a = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let b = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (k, l) = (rng.gen_range(0..4), rng.gen_range(0..4));
        let direct = shifted_hermite(a, k).inner(&shifted_hermite(b, l)).unwrap();
        let fast = shifted_hermite_inner(a, k, b, l).unwrap();
        assert!((direct - fast).norm() < 1e-10, "{a} {b} {k} {l}: {direct} vs {fast}");
    }
}

#[test]
fn dual_gamma_matrix_orientation() {
    let l = Lattice2D::square(0.25).unwrap();
    let m = solve_coefficients(&l, 1).unwrap();
    let tabs: Vec<_> = (0..=1).map(|j| m.gamma_sampler(j).unwrap().table(12.0, 1.0 / 64.0)).collect();
    let mu = c(0.7, -0.4);
    let a = gamma_matrix(l.area(), &WindowFamily::Dual(&m), &WindowFamily::Hermite(1), mu).unwrap();
    let b = gamma_matrix(l.area(), &WindowFamily::Hermite(1), &WindowFamily::Dual(&m), mu).unwrap();
    for k in 0..=1 {
        let h = shifted_hermite(c(0.0, 0.0), k);
        for j in 0..=1 {
            let g = SampledSignal::from_fn(-12.0, 1.0 / 128.0, 3073, |t| tabs[j].at(t)).unwrap();
            let pg = SampledSignal::from_fn(-12.0, 1.0 / 128.0, 3073, |t| {
                tabs[j].at(t - mu.re) * Complex64::from_polar(1.0, 2.0 * PI * mu.im * t)
            })
            .unwrap();
            let hk_pg = h.inner(&pg).unwrap() / l.area();
            assert!((a.entries[(k, j)] - hk_pg).norm() < 1e-6, "{} vs {hk_pg}", a.entries[(k, j)]);
            let g_ph = g.inner(&shifted_hermite(mu, k)).unwrap() / l.area();
            assert!((b.entries[(j, k)] - g_ph).norm() < 1e-6, "{} vs {g_ph}", b.entries[(j, k)]);
        }
    }
    assert!(gamma_matrix(1.0, &WindowFamily::Dual(&m), &WindowFamily::Dual(&m), mu).is_err());
}

#[test]
fn wexler_raz_certifies_duals() {
    for (n, l) in [(0usize, skew(0.6)), (1, Lattice2D::rect(0.8, 0.5).unwrap()), (2, skew(0.25))] {
        let m = solve_coefficients(&l, n).unwrap();
        let r = wexler_raz_residual(&m, 4.0).unwrap();
        assert!(r < 1e-8, "n={n}: {r}");
    }
}

#[test]
fn gram_envelope_bounds_entries() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    for n in [0usize, 1, 3] {
        let env = hermite_gram_envelope(n);
        for _ in 0..200 {
            let mu = Complex64::from_polar(rng.gen_range(0.0..6.0), rng.gen_range(0.0..2.0 * PI));
            let m = gamma_matrix(1.0, &WindowFamily::Hermite(n), &WindowFamily::Hermite(n), mu).unwrap();
            assert!(m.op_norm() <= env * (-PI * mu.norm_sqr() / 4.0).exp() * (1.0 + 1e-9));
        }
    }
}

#[test]
fn janssen_tail_dominates_omitted_terms() {
    let l = skew(0.3);
    let n = 1;
    let near = janssen_bounds(JanssenPair::HermiteOnly { lattice: &l, n }, 0.0).unwrap();
    let far = janssen_bounds(JanssenPair::HermiteOnly { lattice: &l, n }, near.radius + 3.0).unwrap();
    assert!(far.head - near.head <= near.tail);
    assert!(!near.inconclusive);
    assert!(near.lower <= far.lower + 1e-12 && far.upper <= near.upper + 1e-12);
}

#[test]
fn frame_inequality_within_janssen_bounds() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(6);
    for (n, l) in [(0usize, Lattice2D::square(0.4).unwrap()), (1, skew(0.3))] {
        let jb = janssen_bounds(JanssenPair::HermiteOnly { lattice: &l, n }, 0.0).unwrap();
        assert!(!jb.inconclusive && jb.lower > 0.0);
        for _ in 0..5 {
            // f = (π_{z_0} H_{k_0}, …, π_{z_n} H_{k_n})
            let parts: Vec<(Complex64, usize)> =
                (0..=n).map(|_| (c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), rng.gen_range(0..3))).collect();
            let norm_sq = (n + 1) as f64;
            let mut energy = 0.0;
            for lam in l.enumerate(9.0).unwrap() {
                let mut v = c(0.0, 0.0);
                for (j, (z, k)) in parts.iter().enumerate() {
                    v += shifted_hermite_inner(*z, *k, lam, j).unwrap();
                }
                energy += v.norm_sqr();
            }
            assert!(energy >= jb.lower * norm_sq * (1.0 - 1e-9), "{energy} < {}", jb.lower * norm_sq);
            assert!(energy <= jb.upper * norm_sq * (1.0 + 1e-9), "{energy} > {}", jb.upper * norm_sq);
        }
    }
}

#[test]
fn dual_pair_janssen_is_identity() {
    let l = skew(0.3);
    let m = solve_coefficients(&l, 1).unwrap();
    let jb = janssen_bounds(JanssenPair::Dual(&m), 4.0).unwrap();
    assert_eq!(jb.tail, 0.0);
    assert!(jb.head < 1e-7, "{jb:?}");
    assert!((jb.lower - 1.0).abs() < 1e-7 && (jb.upper - 1.0).abs() < 1e-7);
}

#[test]
fn riesz_section_inside_frame_bounds() {
    for (n, l) in [(0usize, Lattice2D::square(0.5).unwrap()), (1, skew(0.3))] {
        let jb = janssen_bounds(JanssenPair::HermiteOnly { lattice: &l, n }, 0.0).unwrap();
        let r = riesz_check(&l, n, 3.0).unwrap();
        let s = l.area();
        assert!(r.min_eig >= s * jb.lower * (1.0 - 1e-9), "{r:?} vs {}", s * jb.lower);
        assert!(r.max_eig <= s * jb.upper * (1.0 + 1e-9), "{r:?} vs {}", s * jb.upper);
    }
    assert!(riesz_check(&Lattice2D::square(2.0).unwrap(), 3, 12.0).is_err());
}

#[test]
fn reconstruction_of_hermite_and_shifted_signals() {
    let l = Lattice2D::square(0.3).unwrap();
    let m = solve_coefficients(&l, 1).unwrap();
    let h: Vec<SampledSignal> = (0..=1).map(|k| SampledSignal::hermite(k).unwrap()).collect();
    let rec = reconstruct(&m, &h, 7.0).unwrap();
    assert!(rec.rel_error < 1e-6, "{}", rec.rel_error);
    let f: Vec<SampledSignal> = [(c(0.4, -0.3), 2usize), (c(-0.2, 0.5), 0)]
        .iter()
        .map(|(z, k)| {
            SampledSignal::from_fn_default(|t| Complex64::from_polar(hermite_eval(*k, t - z.re).unwrap(), 2.0 * PI * z.im * t))
        })
        .collect();
    let rec = reconstruct(&m, &f, 7.0).unwrap();
    assert!(rec.rel_error < 1e-6, "{}", rec.rel_error);
    assert!(reconstruct(&m, &h[..1], 7.0).is_err());
}

#[test]
fn lower_bound_estimate_is_positive_and_below_janssen_upper() {
    let l = Lattice2D::square(0.6).unwrap();
    let m = solve_coefficients(&l, 0).unwrap();
    let lb = lower_bound_estimate(&m).unwrap();
    let jb = janssen_bounds(JanssenPair::HermiteOnly { lattice: &l, n: 0 }, 0.0).unwrap();
    assert!(lb.value > 0.0 && lb.value <= jb.upper);
    assert!(!lb.heuristic);
}

#[test]
fn analyze_report_shape() {
    let r = analyze(&Lattice2D::square(0.5).unwrap(), 0, 5.0).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["schema"], "frame-report/1");
    assert_eq!(v["density_classification"], "frame");
    assert!(v["wexler_raz_residual"].as_f64().unwrap() < 1e-8);
    assert!(v["provenance"]["density_classification"].is_string());
    let r = analyze(&Lattice2D::square(0.8).unwrap(), 1, 5.0).unwrap();
    assert_eq!(r.density_classification, Classification::NotFrame);
    assert!(r.wexler_raz_residual.is_none() && r.reconstruction_error.is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn gram_is_hermitian(ax in -2.0f64..2.0, ay in -2.0f64..2.0, bx in -2.0f64..2.0, by in -2.0f64..2.0,
                         k in 0usize..5, l in 0usize..5) {
        let g1 = shifted_hermite_inner(c(ax, ay), k, c(bx, by), l).unwrap();
        let g2 = shifted_hermite_inner(c(bx, by), l, c(ax, ay), k).unwrap();
        prop_assert!((g1 - g2.conj()).norm() < 1e-12);
    }

    #[test]
    fn gram_diagonal_is_unit(x in -3.0f64..3.0, y in -3.0f64..3.0, k in 0usize..8) {
        let g = shifted_hermite_inner(c(x, y), k, c(x, y), k).unwrap();
        prop_assert!((g - 1.0).norm() < 1e-12);
        prop_assert!((hermite_gram_entry(k, k, c(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-12);
    }
}
