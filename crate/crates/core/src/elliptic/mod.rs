//! Weierstrass σ, ζ and ℘ for an arbitrary planar lattice, the quasi-period
//! constants η₁, η₂, the modified function `σ_Λ(z) = σ(z) e^{a(Λ) z²}` and
//! its growth constant `c(Λ)`.
//!
//! Every evaluation first reduces its argument into the centered period
//! cell of a Lagrange-reduced basis and then applies the quasi-periodicity
//! law `σ(z + ω) = ± σ(z) e^{η(ω)(z + ω/2)}` exactly. Inside the cell, σ is
//! computed from Jacobi's `ϑ₁`, whose nome satisfies `|q| ≤ e^{-π√3/2}` on a
//! reduced basis, so a handful of terms reach machine precision. The
//! defining lattice products and sums are kept in [`series`] as an
//! independent (slowly convergent) reference.

pub mod series;
mod theta;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::contour::{self, CONTOUR_NODES};
use crate::error::{GaborError, Result};
use crate::lattice::Lattice2D;
use theta::Theta;

/// Legendre-relation residual above which a context is rejected.
pub const LEGENDRE_TOLERANCE: f64 = 1e-9;

/// Grid resolution used for `c(Λ)`.
pub const GROWTH_GRID: usize = 256;

/// Coordinates closer than this to an integer are treated as a lattice point.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// Number of Taylor coefficients of σ at the origin kept in the context.
const SIGMA0_TERMS: usize = 32;

/// Precomputed σ-machinery for one lattice.
#[derive(Clone, Debug)]
pub struct WeierstrassContext {
    lattice: Lattice2D,
    eta1: Complex64,
    eta2: Complex64,
    alpha: f64,
    a_const: Complex64,
    c_growth: f64,
    trunc_radius: f64,
    tolerance: f64,
    legendre_residual: f64,
    // reduced basis and its quasi-periods
    u: Complex64,
    v: Complex64,
    eta_u: Complex64,
    eta_v: Complex64,
    inv_uv: [[f64; 2]; 2],
    theta: Theta,
    ln_u_over_pi: Complex64,
    ln_theta1_prime0: Complex64,
    sigma0: Vec<Complex64>,
    contour_radius: f64,
}

/// Position of a point relative to the reduced lattice.
#[derive(Clone, Copy, Debug)]
struct Reduced {
    z0: Complex64,
    m: i64,
    k: i64,
    on_lattice: bool,
}

impl WeierstrassContext {
    /// Builds the context; fails if the Legendre relation is not met to
    /// [`LEGENDRE_TOLERANCE`].
    pub fn new(lattice: &Lattice2D, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance <= 1e-3) {
            return Err(GaborError::InvalidInput(format!(
                "tolerance must lie in (0, 1e-3], got {tolerance}"
            )));
        }
        let rb = lattice.reduced_basis();
        let (u, v) = (rb.u, rb.v);
        let theta = Theta::new(u, v);
        let eta_u = theta.eta_u();
        let det = u.re * v.im - v.re * u.im;
        let inv_uv = [[v.im / det, -v.re / det], [-u.im / det, u.re / det]];
        let shortest = u.norm();
        let mut ctx = Self {
            lattice: lattice.clone(),
            eta1: Complex64::new(0.0, 0.0),
            eta2: Complex64::new(0.0, 0.0),
            alpha: PI / (2.0 * lattice.area()),
            a_const: Complex64::new(0.0, 0.0),
            c_growth: 0.0,
            trunc_radius: 40.0 * lattice.omega1().norm().max(lattice.omega2().norm()),
            tolerance,
            legendre_residual: f64::INFINITY,
            u,
            v,
            eta_u,
            eta_v: Complex64::new(0.0, 0.0),
            inv_uv,
            ln_u_over_pi: (u / PI).ln(),
            ln_theta1_prime0: theta.theta1_prime0.ln(),
            theta,
            sigma0: Vec::new(),
            contour_radius: (0.5f64).min(0.5 * shortest),
        };
        // η(v) as a difference quotient of ζ at a generic base point.
        let base = u * 0.3217 + v * 0.2113;
        ctx.eta_v = ctx.zeta_unreduced(base + v) - ctx.zeta_unreduced(base);
        let legendre_reduced = (eta_u * v - ctx.eta_v * u - Complex64::new(0.0, 2.0 * PI)).norm();

        let t = rb.transform;
        // ω₁ = d u - b v, ω₂ = -c u + a v
        ctx.eta1 = ctx.eta_u * t[1][1] as f64 - ctx.eta_v * t[0][1] as f64;
        ctx.eta2 = -ctx.eta_u * t[1][0] as f64 + ctx.eta_v * t[0][0] as f64;
        let (w1, w2) = (lattice.omega1(), lattice.omega2());
        let legendre = (ctx.eta1 * w2 - ctx.eta2 * w1 - Complex64::new(0.0, 2.0 * PI)).norm();
        ctx.legendre_residual = legendre.max(legendre_reduced);
        if !(ctx.legendre_residual < LEGENDRE_TOLERANCE) {
            return Err(GaborError::Accuracy(format!(
                "Legendre residual {:.3e} exceeds {LEGENDRE_TOLERANCE:e}",
                ctx.legendre_residual
            )));
        }
        ctx.a_const = 0.5 * (ctx.eta2 * w1.conj() - ctx.eta1 * w2.conj())
            / (w1 * w2.conj() - w2 * w1.conj());

        let mut s0 = contour::taylor_coefficients(
            |z| ctx.sigma_core(z),
            Complex64::new(0.0, 0.0),
            ctx.contour_radius,
            CONTOUR_NODES,
            SIGMA0_TERMS,
        );
        // σ is odd with σ'(0) = 1.
        for (k, a) in s0.iter_mut().enumerate() {
            if k % 2 == 0 {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        s0[1] = Complex64::new(1.0, 0.0);
        ctx.sigma0 = s0;

        ctx.c_growth = ctx.compute_growth_constant(GROWTH_GRID);
        Ok(ctx)
    }

    pub fn lattice(&self) -> &Lattice2D {
        &self.lattice
    }
    pub fn eta1(&self) -> Complex64 {
        self.eta1
    }
    pub fn eta2(&self) -> Complex64 {
        self.eta2
    }
    /// `α(Λ) = π / (2 s(Λ))`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    /// `a(Λ) = ½ (η₂ω̄₁ − η₁ω̄₂)/(ω₁ω̄₂ − ω₂ω̄₁)`.
    pub fn a_const(&self) -> Complex64 {
        self.a_const
    }
    /// `c(Λ) = sup_{Π_Λ} |σ_Λ(z)| e^{−α|z|²}`.
    pub fn growth_constant(&self) -> f64 {
        self.c_growth
    }
    /// Radius used by the truncated lattice-series reference evaluators.
    pub fn trunc_radius(&self) -> f64 {
        self.trunc_radius
    }
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
    /// `|η₁ω₂ − η₂ω₁ − 2πi|` at construction.
    pub fn legendre_residual(&self) -> f64 {
        self.legendre_residual
    }
    /// Default radius of Cauchy circles around points of this lattice.
    pub fn contour_radius(&self) -> f64 {
        self.contour_radius
    }
    /// Taylor coefficients of σ at 0 (odd, `σ'(0) = 1`).
    pub fn sigma_taylor_at_zero(&self) -> &[Complex64] {
        &self.sigma0
    }

    fn reduce(&self, z: Complex64) -> Reduced {
        let x = self.inv_uv[0][0] * z.re + self.inv_uv[0][1] * z.im;
        let y = self.inv_uv[1][0] * z.re + self.inv_uv[1][1] * z.im;
        let (mr, kr) = (x.round(), y.round());
        let on_lattice = (x - mr).abs() <= ZERO_THRESHOLD * mr.abs().max(1.0)
            && (y - kr).abs() <= ZERO_THRESHOLD * kr.abs().max(1.0);
        let (m, k) = (mr as i64, kr as i64);
        let z0 = z - self.u * m as f64 - self.v * k as f64;
        Reduced { z0, m, k, on_lattice }
    }

    fn eta_of(&self, m: i64, k: i64) -> Complex64 {
        self.eta_u * m as f64 + self.eta_v * k as f64
    }

    /// `ln σ(z) − ln σ(z₀) ` contribution of the lattice translation.
    fn translation_log(&self, r: &Reduced) -> Complex64 {
        if r.m == 0 && r.k == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let omega = self.u * r.m as f64 + self.v * r.k as f64;
        let parity = (r.m + r.k + r.m * r.k).rem_euclid(2) as f64;
        self.eta_of(r.m, r.k) * (r.z0 + omega * 0.5) + Complex64::new(0.0, PI * parity)
    }

    /// σ from the theta formula without argument reduction.
    fn sigma_core(&self, z: Complex64) -> Complex64 {
        let (t, _, _) = self.theta.eval(z * PI / self.u);
        (self.u / PI) * (self.eta_u * z * z / (2.0 * self.u)).exp() * t / self.theta.theta1_prime0
    }

    fn ln_sigma_core(&self, z: Complex64) -> Complex64 {
        let (t, _, _) = self.theta.eval(z * PI / self.u);
        self.ln_u_over_pi + self.eta_u * z * z / (2.0 * self.u) + t.ln() - self.ln_theta1_prime0
    }

    /// ζ from the theta formula without argument reduction; accurate for
    /// arguments within a few periods of the origin.
    pub(crate) fn zeta_unreduced(&self, z: Complex64) -> Complex64 {
        let (t, t1, _) = self.theta.eval(z * PI / self.u);
        self.eta_u * z / self.u + (PI / self.u) * t1 / t
    }

    fn wp_core(&self, z: Complex64) -> Complex64 {
        let (t, t1, t2) = self.theta.eval(z * PI / self.u);
        let k = PI / self.u;
        -self.eta_u / self.u - k * k * (t2 * t - t1 * t1) / (t * t)
    }

    /// Some branch of `ln σ(z)`; `None` at lattice points.
    pub fn ln_sigma(&self, z: Complex64) -> Option<Complex64> {
        let r = self.reduce(z);
        if r.on_lattice {
            return None;
        }
        Some(self.ln_sigma_core(r.z0) + self.translation_log(&r))
    }

    /// Weierstrass σ. Exactly zero at lattice points.
    pub fn sigma(&self, z: Complex64) -> Complex64 {
        self.ln_sigma(z).map_or(Complex64::new(0.0, 0.0), |l| l.exp())
    }

    /// Weierstrass ζ; pole error on the lattice.
    pub fn zeta(&self, z: Complex64) -> Result<Complex64> {
        let r = self.reduce(z);
        if r.on_lattice {
            return Err(GaborError::Pole(format!("zeta at {z}")));
        }
        Ok(self.zeta_unreduced(r.z0) + self.eta_of(r.m, r.k))
    }

    /// Weierstrass ℘; pole error on the lattice.
    pub fn weierstrass_p(&self, z: Complex64) -> Result<Complex64> {
        let r = self.reduce(z);
        if r.on_lattice {
            return Err(GaborError::Pole(format!("weierstrass_p at {z}")));
        }
        Ok(self.wp_core(r.z0))
    }

    /// Some branch of `ln σ_Λ(z) = ln σ(z) + a(Λ) z²`; `None` on the lattice.
    pub fn ln_sigma_mod(&self, z: Complex64) -> Option<Complex64> {
        self.ln_sigma(z).map(|l| l + self.a_const * z * z)
    }

    /// `σ_Λ(z) = σ(z) e^{a(Λ) z²}`.
    pub fn sigma_mod(&self, z: Complex64) -> Complex64 {
        self.ln_sigma_mod(z).map_or(Complex64::new(0.0, 0.0), |l| l.exp())
    }

    /// `ln(|σ_Λ(z)| e^{−α|z|²})`, doubly periodic; `-inf` on the lattice.
    pub fn log_envelope(&self, z: Complex64) -> f64 {
        match self.ln_sigma_mod(z) {
            Some(l) => l.re - self.alpha * z.norm_sqr(),
            None => f64::NEG_INFINITY,
        }
    }

    /// Taylor coefficients of `σ_Λ` at `w`, `len` terms.
    ///
    /// Uses `σ_Λ(ω + z₀ + h) = ± σ(z₀ + h) e^{η(ω)(z₀ + h + ω/2) + a(ω + z₀ + h)²}`,
    /// so the coefficients vanish exactly at lattice points.
    pub fn sigma_mod_taylor(&self, w: Complex64, len: usize) -> Vec<Complex64> {
        let (l0, s) = self.sigma_mod_taylor_scaled(w, len);
        let f = l0.exp();
        s.into_iter().map(|c| c * f).collect()
    }

    /// Same as [`Self::sigma_mod_taylor`], returned as `(ℓ, c)` with the true
    /// coefficients equal to `e^ℓ c`, so that far-out expansions do not
    /// overflow.
    pub fn sigma_mod_taylor_scaled(&self, w: Complex64, len: usize) -> (Complex64, Vec<Complex64>) {
        let r = self.reduce(w);
        let base: Vec<Complex64> = if r.on_lattice {
            let mut s = self.sigma0.clone();
            s.resize(len.max(s.len()), Complex64::new(0.0, 0.0));
            s.truncate(len);
            s
        } else {
            contour::taylor_coefficients(
                |z| self.sigma_core(z),
                r.z0,
                self.contour_radius,
                CONTOUR_NODES,
                len.min(CONTOUR_NODES),
            )
        };
        let eta = self.eta_of(r.m, r.k);
        let omega = self.u * r.m as f64 + self.v * r.k as f64;
        let w_exact = if r.on_lattice { omega } else { w };
        let z0 = if r.on_lattice { Complex64::new(0.0, 0.0) } else { r.z0 };
        let parity = (r.m + r.k + r.m * r.k).rem_euclid(2) as f64;
        let l0 = eta * (z0 + omega * 0.5) + Complex64::new(0.0, PI * parity) + self.a_const * w_exact * w_exact;
        let l1 = eta + self.a_const * w_exact * 2.0;
        let l2 = self.a_const;
        let e = contour::series_exp(&[Complex64::new(0.0, 0.0), l1, l2], len);
        (l0, contour::series_mul(&base, &e, len))
    }

    /// `c(Λ)` on an `n × n` grid over the period parallelogram followed by a
    /// golden-section refinement around the grid maximum.
    pub fn compute_growth_constant(&self, n: usize) -> f64 {
        let (w1, w2) = (self.lattice.omega1(), self.lattice.omega2());
        let at = |x: f64, y: f64| self.log_envelope(w1 * x + w2 * y);
        let (best, bi, bj) = (0..n)
            .into_par_iter()
            .map(|i| {
                let x = i as f64 / n as f64;
                let mut row_best = (f64::NEG_INFINITY, i, 0usize);
                for j in 0..n {
                    let val = at(x, j as f64 / n as f64);
                    if val > row_best.0 {
                        row_best = (val, i, j);
                    }
                }
                row_best
            })
            .reduce(
                || (f64::NEG_INFINITY, 0, 0),
                |a, b| if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) { b } else { a },
            );
        let h = 1.0 / n as f64;
        let (mut x, mut y) = (bi as f64 * h, bj as f64 * h);
        let mut val = best;
        for _ in 0..4 {
            let (nx, vx) = golden_max(|t| at(t, y), x - h, x + h);
            if vx > val {
                x = nx;
                val = vx;
            }
            let (ny, vy) = golden_max(|t| at(x, t), y - h, y + h);
            if vy > val {
                y = ny;
                val = vy;
            }
        }
        val.max(best).exp()
    }

    /// Range `[min, max]` of `|σ_Λ(z)| e^{−α|z|²}` over grid points of the
    /// period cell at distance greater than `eps` from the lattice.
    pub fn envelope_range(&self, eps: f64, n: usize) -> (f64, f64) {
        let (w1, w2) = (self.lattice.omega1(), self.lattice.omega2());
        let corners = [
            Complex64::new(0.0, 0.0),
            w1,
            w2,
            w1 + w2,
            w1 - w2,
            w2 - w1,
            -w1,
            -w2,
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            for j in 0..n {
                let z = w1 * ((i as f64 + 0.5) / n as f64) + w2 * ((j as f64 + 0.5) / n as f64);
                let d = corners.iter().map(|c| (z - c).norm()).fold(f64::INFINITY, f64::min);
                if d <= eps {
                    continue;
                }
                let e = self.log_envelope(z).exp();
                lo = lo.min(e);
                hi = hi.max(e);
            }
        }
        (lo, hi)
    }
}

/// Maximizes a unimodal-near-the-peak function on `[a, b]`.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-12 {
            break;
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Diagnostic summary printed by the `elliptic-check` command.
#[derive(Clone, Debug, Serialize)]
pub struct EllipticSummary {
    pub lattice: Lattice2D,
    pub eta1: [f64; 2],
    pub eta2: [f64; 2],
    pub legendre_residual: f64,
    pub alpha: f64,
    pub a_const: [f64; 2],
    pub c_growth: f64,
    pub envelope_min_eps_0_1: f64,
}

impl WeierstrassContext {
    pub fn summary(&self) -> EllipticSummary {
        let c2 = |z: Complex64| [z.re, z.im];
        EllipticSummary {
            lattice: self.lattice.clone(),
            eta1: c2(self.eta1),
            eta2: c2(self.eta2),
            legendre_residual: self.legendre_residual,
            alpha: self.alpha,
            a_const: c2(self.a_const),
            c_growth: self.c_growth,
            envelope_min_eps_0_1: self.envelope_range(0.1, 64).0,
        }
    }
}
