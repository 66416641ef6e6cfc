use gaborlab::elliptic::{series::LatticeSeries, WeierstrassContext};
use gaborlab::Lattice2D;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_lattice(rng: &mut impl Rng) -> Lattice2D {
    let a = rng.gen_range(0.5..1.5);
    let aspect = rng.gen_range(0.5..2.0);
    let shear = rng.gen_range(-0.5..0.5);
    Lattice2D::from_generators([[a, shear * a], [0.0, a * aspect]]).unwrap()
}

#[test]
fn legendre_relation_on_random_lattices() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for _ in 0..20 {
        let l = random_lattice(&mut rng);
        let ctx = WeierstrassContext::new(&l, 1e-12).unwrap();
        let lhs = ctx.eta1() * l.omega2() - ctx.eta2() * l.omega1();
        assert!((lhs - c(0.0, 2.0 * PI)).norm() < 1e-9, "{lhs}");
        assert!(ctx.legendre_residual() < 1e-9);
    }
}

#[test]
fn truncated_products_converge_to_engine() {
    let l = Lattice2D::from_generators([[1.1, 0.35], [0.0, 0.8]]).unwrap();
    let ctx = WeierstrassContext::new(&l, 1e-12).unwrap();
    let pts = [c(0.3, 0.2), c(-0.7, 0.5), c(1.3, -0.9), c(0.05, -0.4)];
    let err = |r: f64| {
        let s = LatticeSeries::new(&l, r).unwrap();
        pts.iter()
            .map(|&z| {
                let a = ((s.sigma(z) - ctx.sigma(z)) / ctx.sigma(z)).norm();
                let b = (s.zeta(z) - ctx.zeta(z).unwrap()).norm();
                let p = (s.weierstrass_p(z) - ctx.weierstrass_p(z).unwrap()).norm();
                a.max(b).max(p)
            })
            .fold(0.0, f64::max)
    };
    let (e1, e2) = (err(40.0), err(160.0));
    assert!(e2 < 1e-6, "{e2}");
    assert!(e2 < e1 / 20.0, "{e1} -> {e2}");
}

#[test]
fn zeta_quasi_periods_and_p_derivative() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(12);
    for _ in 0..5 {
        let l = random_lattice(&mut rng);
        let ctx = WeierstrassContext::new(&l, 1e-12).unwrap();
        for _ in 0..10 {
            let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let Ok(zz) = ctx.zeta(z) else { continue };
            let d1 = ctx.zeta(z + l.omega1()).unwrap() - zz - ctx.eta1();
            let d2 = ctx.zeta(z + l.omega2()).unwrap() - zz - ctx.eta2();
            assert!(d1.norm() < 1e-9 * (1.0 + zz.norm()) && d2.norm() < 1e-9 * (1.0 + zz.norm()));
            let h = 1e-5;
            let fd = (ctx.zeta(z + h).unwrap() - ctx.zeta(z - h).unwrap()) / (2.0 * h);
            let p = ctx.weierstrass_p(z).unwrap();
            assert!((fd + p).norm() < 1e-5 * (1.0 + p.norm()), "{fd} vs {p}");
        }
    }
}

#[test]
fn envelope_is_doubly_periodic() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(13);
    for _ in 0..5 {
        let l = random_lattice(&mut rng);
        let ctx = WeierstrassContext::new(&l, 1e-12).unwrap();
        for _ in 0..20 {
            let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let (m, k) = (rng.gen_range(-3i32..=3), rng.gen_range(-3i32..=3));
            let w = l.omega1() * m as f64 + l.omega2() * k as f64;
            let a = ctx.log_envelope(z).exp();
            let b = ctx.log_envelope(z + w).exp();
            assert!((a - b).abs() <= 1e-8 * a, "{a} vs {b}");
        }
    }
}

#[test]
fn sigma_zeros_and_growth_constant() {
    let l = Lattice2D::from_generators([[0.9, 0.2], [0.1, 1.2]]).unwrap();
    let ctx = WeierstrassContext::new(&l, 1e-12).unwrap();
    for w in l.enumerate(4.0).unwrap() {
        assert_eq!(ctx.sigma(w), c(0.0, 0.0));
        assert!(ctx.zeta(w).is_err());
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(14);
    for _ in 0..500 {
        let z = c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        assert!(ctx.log_envelope(z) <= ctx.growth_constant().ln() + 1e-12);
    }
}

fn arb_lattice() -> impl Strategy<Value = Lattice2D> {
    (0.6f64..1.4, 0.5f64..2.0, -0.5f64..0.5)
        .prop_map(|(a, r, s)| Lattice2D::from_generators([[a, s * a], [0.0, a * r]]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn sigma_depends_only_on_the_lattice(l in arb_lattice(), m in -2i32..=2, x in -1.5f64..1.5, y in -1.5f64..1.5) {
        // unimodular change of basis (ω1, ω2) → (ω1, ω2 + m ω1)
        let a = l.generator();
        let b = Lattice2D::from_generators([[a[0][0], a[0][1] + m as f64 * a[0][0]], [a[1][0], a[1][1] + m as f64 * a[1][0]]]).unwrap();
        let (c1, c2) = (WeierstrassContext::new(&l, 1e-12).unwrap(), WeierstrassContext::new(&b, 1e-12).unwrap());
        let z = c(x, y);
        let (s1, s2) = (c1.sigma(z), c2.sigma(z));
        prop_assert!((s1 - s2).norm() <= 1e-9 * s1.norm().max(1e-300));
        prop_assert!((c1.sigma(-z) + s1).norm() <= 1e-12 * s1.norm().max(1.0));
        prop_assert!((c1.a_const() - c2.a_const()).norm() < 1e-9);
    }

    #[test]
    fn adjoint_points_commute_with_lattice(l in arb_lattice(), i in -4i32..=4, j in -4i32..=4, p in -4i32..=4, q in -4i32..=4) {
        let lam = l.point(i as i64, j as i64);
        let mu = l.adjoint().point(p as i64, q as i64);
        let symp = lam.re * mu.im - lam.im * mu.re;
        prop_assert!((symp - symp.round()).abs() < 1e-9);
        prop_assert!((l.area() * l.adjoint().area() - 1.0).abs() < 1e-12);
    }
}
