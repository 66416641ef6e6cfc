//! Explicit dual windows for the Hermite superframe `G(h, Λ)`,
//! `h = (H_0, …, H_n)`, below the density threshold `s(Λ) < 1/(n+1)`.
//!
//! In Fock space the duals are `G_j = Σ_{m≥j} c_{m,j} S_m` with
//! `S_m(z) = S(z)/z^{n+1−m}` and `S = σ_{Λ°̄}^{n+1}`, where `Λ°̄` is the
//! complex conjugate of the adjoint lattice. The coefficients are fixed by
//! `(π^l l!)^{−1/2} G_j^{(l)}(0) = s(Λ) δ_{jl}`, which together with the
//! zeros of order `n+1` at every other point of `Λ°̄` is the Wexler–Raz
//! system in Fock form.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::contour::{factorial, to_derivatives};
use crate::elliptic::WeierstrassContext;
use crate::error::{GaborError, Result};
use crate::hermite_bargmann::{
    fock_norms, FockFunction, FockNorms, GrowthCertificate, SigmaProduct, HERMITE_MAX_ORDER,
};
use crate::lattice::Lattice2D;

/// Tolerance used for the elliptic context of the adjoint lattice.
/// Width of the band `|(n+1)s − 1|` treated as critical density.
pub const CRITICAL_BAND: f64 = 1e-12;

pub const CONTEXT_TOLERANCE: f64 = 1e-10;

/// Absolute accuracy targeted by time-domain synthesis.
pub const SYNTHESIS_TOLERANCE: f64 = 1e-12;

/// Accuracy targeted by the norm quadratures (tail bound).
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Relative safety margin applied to the numerically computed `c(Λ)`.
const GROWTH_MARGIN: f64 = 1e-3;

/// Cap on the number of nodes of a synthesis grid.
pub const MAX_SYNTHESIS_NODES: usize = 20_000_000;

/// `|t − x|` beyond which `H_0(t − x)` is negligible in synthesis.
const SYNTHESIS_WINDOW: f64 = 3.5;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Elliptic context of `Λ°̄`, the conjugate of the adjoint lattice.
pub fn adjoint_context(lattice: &Lattice2D) -> Result<Arc<WeierstrassContext>> {
    Ok(Arc::new(WeierstrassContext::new(&lattice.adjoint().conjugate(), CONTEXT_TOLERANCE)?))
}

/// `S = σ_{Λ°̄}^{n+1}`.
pub fn build_s(lattice: &Lattice2D, n: usize) -> Result<FockFunction> {
    check_order(n)?;
    let ctx = adjoint_context(lattice)?;
    Ok(FockFunction::SigmaProduct(SigmaProduct::new(ctx, n as u32 + 1, vec![Complex64::new(1.0, 0.0)])?))
}

/// `S_m(z) = S(z) / z^{n+1−m}` from an `S` built by [`build_s`].
pub fn build_s_m(s: &FockFunction, n: usize, m: usize) -> Result<FockFunction> {
    let FockFunction::SigmaProduct(sp) = s else {
        return Err(GaborError::InvalidInput("S must be a σ-product".into()));
    };
    if sp.power() as usize != n + 1 || sp.laurent().len() != 1 || m > n {
        return Err(GaborError::InvalidInput(format!("S_m needs S = σ^(n+1) and m ≤ n (n = {n}, m = {m})")));
    }
    let mut laurent = vec![czero(); n + 2 - m];
    laurent[n + 1 - m] = sp.laurent()[0];
    Ok(FockFunction::SigmaProduct(SigmaProduct::new(sp.context().clone(), sp.power(), laurent)?))
}

fn check_order(n: usize) -> Result<()> {
    if n > HERMITE_MAX_ORDER {
        return Err(GaborError::UnsupportedOrder { order: n, max: HERMITE_MAX_ORDER });
    }
    Ok(())
}

/// The dual-window system for one lattice and Hermite order.
#[derive(Clone, Debug)]
pub struct DualWindowModel {
    n: usize,
    lattice: Lattice2D,
    s: f64,
    adjoint_ctx: Arc<WeierstrassContext>,
    /// `coeffs[m][j] = c_{m,j}`, zero for `m < j`.
    coeffs: Vec<Vec<Complex64>>,
    rho: f64,
    kappa_decay: f64,
    windows: Vec<FockFunction>,
    certificates: Vec<GrowthCertificate>,
}

/// Solves the triangular system for `c_{m,j}`.
///
/// Requires `ρ = 1 − (n+1)s(Λ) > 0`.
pub fn solve_coefficients(lattice: &Lattice2D, n: usize) -> Result<DualWindowModel> {
    check_order(n)?;
    let s = lattice.area();
    let product = (n + 1) as f64 * s;
    let rho = 1.0 - product;
    if !(rho > CRITICAL_BAND) {
        return Err(GaborError::Density { product });
    }
    let ctx = adjoint_context(lattice)?;
    let p = n as u32 + 1;
    // S_m^{(l)}(0) = l! b_{l−m}
    let b = SigmaProduct::reduced_power_series(&ctx, p, n + 1);
    if b[0].norm() < 1e-10 {
        return Err(GaborError::Accuracy("ill-conditioned diagonal S_m^(m)(0)".into()));
    }
    let mut coeffs = vec![vec![czero(); n + 1]; n + 1];
    for j in 0..=n {
        coeffs[j][j] = Complex64::new(s * (PI.powi(j as i32) * factorial(j)).sqrt() / factorial(j), 0.0) / b[0];
        for l in j + 1..=n {
            let mut acc = czero();
            for m in j..l {
                acc += coeffs[m][j] * b[l - m];
            }
            coeffs[l][j] = -acc / b[0];
        }
    }
    let c_growth = ctx.growth_constant() * (1.0 + GROWTH_MARGIN);
    let theta = product;
    let mut windows = Vec::with_capacity(n + 1);
    let mut certificates = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut laurent = vec![czero(); n + 2 - j];
        for m in j..=n {
            laurent[n + 1 - m] = coeffs[m][j];
        }
        let total: f64 = laurent.iter().map(|c| c.norm()).sum();
        windows.push(FockFunction::SigmaProduct(SigmaProduct::new(ctx.clone(), p, laurent)?));
        certificates.push(GrowthCertificate { c: total * c_growth.powi(p as i32), theta });
    }
    Ok(DualWindowModel {
        n,
        lattice: lattice.clone(),
        s,
        adjoint_ctx: ctx,
        coeffs,
        rho,
        kappa_decay: rho / (2.0 + rho),
        windows,
        certificates,
    })
}

/// Norms of one dual window.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DualNorms {
    /// `‖γ_j‖₂ = ‖G_j‖_𝓕`.
    pub l2: f64,
    /// `4 c(Λ°̄)^{n+1} / ρ`.
    pub m1_bound: f64,
    /// `∫ |G_j(z)| e^{−π|z|²/2} dm(z)`.
    pub m1_quadrature: f64,
    pub m1_tail: f64,
    pub radius: f64,
}

impl DualWindowModel {
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn lattice(&self) -> &Lattice2D {
        &self.lattice
    }
    /// `s(Λ)`.
    pub fn size(&self) -> f64 {
        self.s
    }
    pub fn adjoint_context(&self) -> &Arc<WeierstrassContext> {
        &self.adjoint_ctx
    }
    /// `c_{m,j}`, rows `m`, columns `j`.
    pub fn coeffs(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }
    /// `ρ = 1 − (n+1) s(Λ)`.
    pub fn rho(&self) -> f64 {
        self.rho
    }
    /// `κ = ρ / (2 + ρ)`.
    pub fn kappa_decay(&self) -> f64 {
        self.kappa_decay
    }
    /// Fock-side dual window `G_j`.
    pub fn window(&self, j: usize) -> &FockFunction {
        &self.windows[j]
    }
    pub fn windows(&self) -> &[FockFunction] {
        &self.windows
    }
    /// `|G_j(z)| ≤ C e^{πθ|z|²/2}` for `|z| ≥ 1`, with `θ = (n+1)s(Λ)`.
    pub fn growth_certificate(&self, j: usize) -> GrowthCertificate {
        self.certificates[j]
    }

    /// `max_{j,l} |(π^l l!)^{−1/2} G_j^{(l)}(0) − s δ_{jl}|` from Cauchy
    /// integrals of the evaluation handle.
    pub fn delta_residual(&self) -> f64 {
        let r = self.adjoint_ctx.contour_radius();
        let mut worst = 0.0f64;
        for (j, g) in self.windows.iter().enumerate() {
            let d = to_derivatives(&g.taylor_contour(czero(), r, self.n + 1));
            for (l, dl) in d.iter().enumerate() {
                let v = dl / (PI.powi(l as i32) * factorial(l)).sqrt();
                let target = if l == j { self.s } else { 0.0 };
                worst = worst.max((v - target).norm());
            }
        }
        worst
    }

    /// `max |G_j^{(l)}(μ̄)|` over nonzero `μ ∈ Λ°`, `|μ| ≤ radius`, `j, l ≤ n`.
    pub fn interpolation_residual(&self, radius: f64) -> Result<f64> {
        let r = self.adjoint_ctx.contour_radius();
        let points = self.lattice.adjoint().enumerate(radius)?;
        let vals: Vec<f64> = points
            .par_iter()
            .filter(|mu| mu.norm() > 0.0)
            .map(|mu| {
                let mut worst = 0.0f64;
                for g in &self.windows {
                    for d in to_derivatives(&g.taylor_contour(mu.conj(), r, self.n + 1)) {
                        worst = worst.max(d.norm());
                    }
                }
                worst
            })
            .collect();
        Ok(vals.into_iter().fold(0.0, f64::max))
    }

    /// `‖γ_j‖₂`, the quadrature `M¹` norm and its closed-form bound.
    pub fn dual_norms(&self, j: usize) -> Result<DualNorms> {
        let cert = self.certificates[j];
        let radius = cert.radius_for(NORM_TOLERANCE);
        let FockNorms { l2, m1, m1_tail, l2_sq_tail, .. } = fock_norms(&self.windows[j], radius, cert)?;
        if !(m1_tail <= NORM_TOLERANCE * (1.0 + 1e-9)) || !(l2_sq_tail <= NORM_TOLERANCE) {
            return Err(GaborError::Accuracy(format!("norm tail {m1_tail:e} above tolerance")));
        }
        let c = self.adjoint_ctx.growth_constant();
        Ok(DualNorms {
            l2,
            m1_bound: 4.0 * c.powi(self.n as i32 + 1) / self.rho,
            m1_quadrature: m1,
            m1_tail,
            radius,
        })
    }

    /// Precomputes the short-time Fourier inversion grid for `γ_j`.
    pub fn gamma_sampler(&self, j: usize) -> Result<GammaSampler> {
        GammaSampler::new(self, j, SYNTHESIS_TOLERANCE)
    }
}

/// `γ_j(t)`. Builds the synthesis grid on every call; use
/// [`DualWindowModel::gamma_sampler`] for repeated evaluation.
pub fn gamma_time(model: &DualWindowModel, j: usize, t: f64) -> Result<Complex64> {
    Ok(model.gamma_sampler(j)?.eval(t))
}

/// Trapezoid discretization of
/// `γ(t) = ∫ ⟨γ, π_z H_0⟩ π_z H_0(t) dm(z)` over `|z| ≤ R`, with
/// `⟨γ, π_z H_0⟩ = e^{−iπxξ} e^{−π|z|²/2} G(z̄)`.
#[derive(Clone, Debug)]
pub struct GammaSampler {
    h: f64,
    radius: f64,
    xs: Vec<f64>,
    xis: Vec<f64>,
    /// Row-major over `(x, ξ)`, with `h²` folded in.
    values: Vec<Complex64>,
}

impl GammaSampler {
    fn new(model: &DualWindowModel, j: usize, tol: f64) -> Result<Self> {
        let cert = model.certificates[j];
        let rho = model.rho;
        let c0 = 2f64.powf(0.25) * 2.0 * cert.c / rho;
        let radius = (2.0 * (c0 / tol).max(std::f64::consts::E).ln() / (PI * rho)).sqrt().max(1.0);
        let cap = 8.0 / rho.sqrt();
        if radius > cap {
            return Err(GaborError::Accuracy(format!(
                "synthesis radius {radius:.2} exceeds cap {cap:.2} for tolerance {tol:e}"
            )));
        }
        let inv_h = (radius + 8.0).ceil().max(16.0);
        let h = 1.0 / inv_h;
        let k = (radius * inv_h).ceil() as i64;
        let side = (2 * k + 1) as usize;
        if side * side > MAX_SYNTHESIS_NODES {
            return Err(GaborError::Resource(format!(
                "synthesis grid {side}x{side} exceeds {MAX_SYNTHESIS_NODES} nodes"
            )));
        }
        let axis: Vec<f64> = (-k..=k).map(|i| i as f64 * h).collect();
        let g = &model.windows[j];
        let values: Vec<Complex64> = axis
            .par_iter()
            .flat_map_iter(|&x| {
                axis.iter().map(move |&xi| {
                    let z = Complex64::new(x, xi);
                    if z.norm() > radius {
                        return czero();
                    }
                    match g.log_eval(z.conj()) {
                        Some(l) => {
                            let e = l + Complex64::new(-PI * z.norm_sqr() * 0.5, -PI * x * xi);
                            e.exp() * (h * h)
                        }
                        None => czero(),
                    }
                })
            })
            .collect();
        Ok(Self { h, radius, xs: axis.clone(), xis: axis, values })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let nxi = self.xis.len();
        let phases: Vec<Complex64> =
            self.xis.iter().map(|xi| Complex64::from_polar(1.0, 2.0 * PI * xi * t)).collect();
        let norm = 2f64.powf(0.25);
        let mut acc = czero();
        for (ix, x) in self.xs.iter().enumerate() {
            let d = t - x;
            if d.abs() > SYNTHESIS_WINDOW {
                continue;
            }
            let row = &self.values[ix * nxi..(ix + 1) * nxi];
            let inner: Complex64 = row.iter().zip(&phases).map(|(a, p)| a * p).sum();
            acc += inner * (norm * (-PI * d * d).exp());
        }
        acc
    }

    pub fn eval_many(&self, ts: &[f64]) -> Vec<Complex64> {
        ts.par_iter().map(|&t| self.eval(t)).collect()
    }

    /// Samples on `[−half_width, half_width]` with step `dt`.
    pub fn table(&self, half_width: f64, dt: f64) -> GammaTable {
        let k = (half_width / dt).ceil() as i64;
        let ts: Vec<f64> = (-k..=k).map(|i| i as f64 * dt).collect();
        GammaTable { t_min: -(k as f64) * dt, dt, values: self.eval_many(&ts) }
    }
}

/// Tabulated `γ_j` with 8-point Lagrange interpolation; zero outside.
#[derive(Clone, Debug)]
pub struct GammaTable {
    pub t_min: f64,
    pub dt: f64,
    pub values: Vec<Complex64>,
}

const INTERP_POINTS: usize = 8;

impl GammaTable {
    pub fn t_max(&self) -> f64 {
        self.t_min + (self.values.len() - 1) as f64 * self.dt
    }

    pub fn at(&self, t: f64) -> Complex64 {
        let u = (t - self.t_min) / self.dt;
        let len = self.values.len();
        if u < 0.0 || u > (len - 1) as f64 {
            return czero();
        }
        let i0 = (u.floor() as i64 - (INTERP_POINTS as i64 / 2 - 1)).clamp(0, (len - INTERP_POINTS) as i64) as usize;
        let mut acc = czero();
        for a in 0..INTERP_POINTS {
            let xa = (i0 + a) as f64;
            let mut w = 1.0;
            for b in 0..INTERP_POINTS {
                if a != b {
                    let xb = (i0 + b) as f64;
                    w *= (u - xb) / (xa - xb);
                }
            }
            acc += self.values[i0 + a] * w;
        }
        acc
    }
}
