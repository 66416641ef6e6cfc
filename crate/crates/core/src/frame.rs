//! Frame analysis for Hermite superframes: density classification, the
//! Janssen matrices `Γ(μ)`, Wexler–Raz certification of a dual system,
//! frame-bound estimates, reconstruction and a truncated Riesz probe on the
//! adjoint lattice.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::contour::{binomial, factorial};
use crate::dual_window::{solve_coefficients, CRITICAL_BAND, DualWindowModel, GammaTable};
use crate::error::{GaborError, Result};
use crate::hermite_bargmann::{
    hermite_all, hermite_gram_entry, monomial_norm, stft_hermite, stft_hermite_contour, FockFunction,
    SampledSignal,
};
use crate::lattice::Lattice2D;

/// Schema tag written into every [`FrameReport`].
pub const REPORT_SCHEMA: &str = "frame-report/1";

/// Largest Gram matrix assembled by [`riesz_check`].
pub const MAX_GRAM_SIZE: usize = 2500;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Frame,
    NotFrame,
    Critical,
}

/// `frame` iff `s(Λ) < 1/(n+1)`; the boundary is reported as `critical`.
pub fn classify(lattice: &Lattice2D, n: usize) -> Classification {
    let p = (n + 1) as f64 * lattice.area();
    if (p - 1.0).abs() < CRITICAL_BAND {
        Classification::Critical
    } else if p < 1.0 {
        Classification::Frame
    } else {
        Classification::NotFrame
    }
}

/// One of the two window families that can enter `Γ(μ)`.
#[derive(Clone, Copy, Debug)]
pub enum WindowFamily<'a> {
    /// `h = (H_0, …, H_n)`.
    Hermite(usize),
    /// The σ-dual system of a model.
    Dual(&'a DualWindowModel),
}

impl WindowFamily<'_> {
    fn order(&self) -> usize {
        match self {
            Self::Hermite(n) => *n,
            Self::Dual(m) => m.n(),
        }
    }
}

/// `Γ(μ)_{kl} = s(Λ)^{−1} ⟨γ_k, π_μ g_l⟩`.
#[derive(Clone, Debug)]
pub struct GammaMatrix {
    pub mu: Complex64,
    pub entries: DMatrix<Complex64>,
}

impl GammaMatrix {
    pub fn op_norm(&self) -> f64 {
        op_norm(&self.entries)
    }
}

fn op_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.nrows() == 1 && m.ncols() == 1 {
        return m[(0, 0)].norm();
    }
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Cauchy radius used when certificates must not rely on structural zeros.
pub const CERTIFICATE_CONTOUR_RADIUS: f64 = 0.5;

/// `⟨γ_k, π_μ g_l⟩` scaled by `1/s`. At least one family must be Hermite.
pub fn gamma_matrix(s: f64, g: &WindowFamily, gamma: &WindowFamily, mu: Complex64) -> Result<GammaMatrix> {
    gamma_matrix_with(s, g, gamma, mu, None)
}

/// As [`gamma_matrix`], with dual-window Taylor data taken from a Cauchy
/// integral of the evaluation handle, so zeros on the adjoint lattice are
/// measured rather than built in.
pub fn gamma_matrix_contour(s: f64, g: &WindowFamily, gamma: &WindowFamily, mu: Complex64) -> Result<GammaMatrix> {
    gamma_matrix_with(s, g, gamma, mu, Some(CERTIFICATE_CONTOUR_RADIUS))
}

fn gamma_matrix_with(
    s: f64,
    g: &WindowFamily,
    gamma: &WindowFamily,
    mu: Complex64,
    contour: Option<f64>,
) -> Result<GammaMatrix> {
    let stft = |f: &FockFunction, n: usize, z: Complex64| match (contour, f) {
        (Some(r), FockFunction::SigmaProduct(_)) => stft_hermite_contour(f, n, z, r),
        _ => stft_hermite(f, n, z),
    };
    let (rows, cols) = (gamma.order() + 1, g.order() + 1);
    let mut entries = DMatrix::from_element(rows, cols, czero());
    match (g, gamma) {
        (WindowFamily::Hermite(_), _) => {
            for k in 0..rows {
                let f = match gamma {
                    WindowFamily::Hermite(_) => FockFunction::Monomial(k),
                    WindowFamily::Dual(m) => m.window(k).clone(),
                };
                for l in 0..cols {
                    entries[(k, l)] = stft(&f, l, mu)? / s;
                }
            }
        }
        (WindowFamily::Dual(m), WindowFamily::Hermite(_)) => {
            // ⟨H_k, π_μ g⟩ = e^{−2πi x ξ} conj(⟨g, π_{−μ} H_k⟩)
            let phase = Complex64::from_polar(1.0, -2.0 * PI * mu.re * mu.im);
            for k in 0..rows {
                for l in 0..cols {
                    entries[(k, l)] = phase * stft(m.window(l), k, -mu)?.conj() / s;
                }
            }
        }
        (WindowFamily::Dual(_), WindowFamily::Dual(_)) => {
            return Err(GaborError::InvalidInput("Γ(μ) needs at least one Hermite family".into()));
        }
    }
    Ok(GammaMatrix { mu, entries })
}

/// `max |s^{−1}⟨γ_l, π_μ H_j⟩ − δ_{μ,0} δ_{lj}|` over `μ ∈ Λ°`, `|μ| ≤ radius`.
pub fn wexler_raz_residual(model: &DualWindowModel, radius: f64) -> Result<f64> {
    let points = model.lattice().adjoint().enumerate(radius)?;
    let fam = WindowFamily::Dual(model);
    let g = WindowFamily::Hermite(model.n());
    let vals: Vec<Result<f64>> = points
        .par_iter()
        .map(|mu| {
            let m = gamma_matrix_contour(model.size(), &g, &fam, *mu)?;
            let mut worst = 0.0f64;
            for k in 0..m.entries.nrows() {
                for l in 0..m.entries.ncols() {
                    let target = if *mu == czero() && k == l { 1.0 } else { 0.0 };
                    worst = worst.max((m.entries[(k, l)] - target).norm());
                }
            }
            Ok(worst)
        })
        .collect();
    let mut worst = 0.0f64;
    for v in vals {
        worst = worst.max(v?);
    }
    Ok(worst)
}

/// Which analysis/synthesis pair enters the Janssen sum.
#[derive(Clone, Copy, Debug)]
pub enum JanssenPair<'a> {
    /// `g = γ = h` on the given lattice.
    HermiteOnly { lattice: &'a Lattice2D, n: usize },
    /// `g = h`, `γ` = σ-dual of the model.
    Dual(&'a DualWindowModel),
}

/// Frame-operator bounds from the absolute Janssen sum.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct JanssenBounds {
    pub lower: f64,
    pub upper: f64,
    /// `Σ_{0<|μ|≤R} ‖Γ(μ)‖` in units of `Γ(0)`.
    pub head: f64,
    /// Bound on the same sum over `|μ| > R`.
    pub tail: f64,
    /// Radius actually summed.
    pub radius: f64,
    /// Set when `head + tail ≥ 1`, so no positive lower bound follows.
    pub inconclusive: bool,
}

/// Diameter of a fundamental cell on the reduced basis.
fn cell_diameter(lattice: &Lattice2D) -> f64 {
    let rb = lattice.reduced_basis();
    (rb.u + rb.v).norm().max((rb.u - rb.v).norm())
}

/// `C` with `‖(⟨H_k, π_μ H_l⟩)_{kl}‖_op ≤ C e^{−π|μ|²/4}` for all `μ`.
pub fn hermite_gram_envelope(n: usize) -> f64 {
    let mut total = 0.0;
    for k in 0..=n {
        for l in 0..=n {
            let ck = (0..=30_000)
                .map(|i| {
                    let r = i as f64 * 1e-3;
                    hermite_gram_poly(k, l, r) * (-PI * r * r / 4.0).exp()
                })
                .fold(0.0, f64::max);
            total += ck * ck;
        }
    }
    total.sqrt() * (1.0 + 1e-3)
}

/// Majorant `P(r)` with `|⟨H_k, π_μ H_l⟩| ≤ P(|μ|) e^{−π|μ|²/2}`.
fn hermite_gram_poly(k: usize, l: usize, r: f64) -> f64 {
    let mut acc = 0.0;
    for j in 0..=l {
        let m = l - j;
        if m > k {
            continue;
        }
        let dk = monomial_norm(k) * factorial(k) / factorial(k - m) * r.powi((k - m) as i32);
        acc += binomial(l, j) * (PI * r).powi(j as i32) * dk;
    }
    acc / (PI.powi(l as i32) * factorial(l)).sqrt()
}

/// `Σ_{μ∈Λ°, |μ|>R} e^{−a|μ|²}` bounded by comparison with an integral.
fn lattice_gaussian_tail(adjoint: &Lattice2D, radius: f64, a: f64) -> f64 {
    let d = cell_diameter(adjoint);
    let u = radius - 2.0 * d;
    if u <= 0.0 {
        return f64::INFINITY;
    }
    let area = adjoint.area();
    2.0 * PI / area * (-a * u * u).exp() * (1.0 / (2.0 * a) + d / (2.0 * a * u))
}

/// Lower and upper frame-operator bounds `s^{−1}(1 ∓ T)` (Hermite pair) or
/// `1 ∓ T` (dual pair), where `T` is the off-origin absolute Janssen sum.
///
/// For the Hermite pair the summation radius is raised to at least twice
/// the adjoint cell diameter plus 6 so that the Gaussian tail estimate
/// applies. The dual pair has no tail: its `Γ(μ)` vanish off the origin.
pub fn janssen_bounds(pair: JanssenPair, radius: f64) -> Result<JanssenBounds> {
    match pair {
        JanssenPair::HermiteOnly { lattice, n } => {
            let s = lattice.area();
            let adj = lattice.adjoint();
            let r = radius.max(2.0 * cell_diameter(&adj) + 6.0);
            let points = adj.enumerate(r)?;
            let fam = WindowFamily::Hermite(n);
            let norms: Vec<Result<f64>> = points
                .par_iter()
                .filter(|mu| mu.norm() > 0.0)
                .map(|mu| Ok(gamma_matrix(1.0, &fam, &fam, *mu)?.op_norm()))
                .collect();
            let mut head = 0.0;
            for v in norms {
                head += v?;
            }
            let tail = hermite_gram_envelope(n) * lattice_gaussian_tail(&adj, r, PI / 4.0);
            let t = head + tail;
            Ok(JanssenBounds {
                lower: ((1.0 - t) / s).max(0.0),
                upper: (1.0 + t) / s,
                head,
                tail,
                radius: r,
                inconclusive: t >= 1.0,
            })
        }
        JanssenPair::Dual(model) => {
            let points = model.lattice().adjoint().enumerate(radius)?;
            let g = WindowFamily::Hermite(model.n());
            let fam = WindowFamily::Dual(model);
            let n1 = model.n() + 1;
            let norms: Vec<Result<f64>> = points
                .par_iter()
                .map(|mu| {
                    let mut m = gamma_matrix_contour(model.size(), &g, &fam, *mu)?.entries;
                    if *mu == czero() {
                        m -= DMatrix::<Complex64>::identity(n1, n1);
                    }
                    Ok(op_norm(&m))
                })
                .collect();
            let mut head = 0.0;
            for v in norms {
                head += v?;
            }
            Ok(JanssenBounds {
                lower: (1.0 - head).max(0.0),
                upper: 1.0 + head,
                head,
                tail: 0.0,
                radius,
                inconclusive: head >= 1.0,
            })
        }
    }
}

/// `A ≥ n(Λ)^{−1} ‖γ‖_{M¹}^{−2}`, with the `M¹` norm normalized by the
/// Gaussian window (`κ = 1`).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LowerBoundEstimate {
    pub value: f64,
    pub max_m1: f64,
    pub packing_count: usize,
    /// True for `n > 0`, where the bound is applied componentwise.
    pub heuristic: bool,
}

pub fn lower_bound_estimate(model: &DualWindowModel) -> Result<LowerBoundEstimate> {
    let mut max_m1 = 0.0f64;
    for j in 0..=model.n() {
        let d = model.dual_norms(j)?;
        max_m1 = max_m1.max(d.m1_quadrature + d.m1_tail);
    }
    let packing = model.lattice().packing_count();
    Ok(LowerBoundEstimate {
        value: 1.0 / (packing as f64 * max_m1 * max_m1),
        max_m1,
        packing_count: packing,
        heuristic: model.n() > 0,
    })
}

/// Result of a truncated frame expansion.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub signals: Vec<SampledSignal>,
    pub rel_error: f64,
    pub terms: usize,
}

/// `f ≈ Σ_{λ∈Λ, |λ|≤R} ⟨f, π_λ h⟩ π_λ γ` for a vector signal `f`.
pub fn reconstruct(model: &DualWindowModel, f: &[SampledSignal], radius: f64) -> Result<Reconstruction> {
    let tables: Vec<GammaTable> = {
        let half = f
            .first()
            .map(|s| s.t_min.abs().max((s.t(s.len().saturating_sub(1))).abs()))
            .unwrap_or(0.0)
            + radius;
        let mut v = Vec::with_capacity(model.n() + 1);
        for j in 0..=model.n() {
            v.push(model.gamma_sampler(j)?.table(half, 1.0 / 64.0));
        }
        v
    };
    reconstruct_with_tables(model, &tables, f, radius)
}

/// As [`reconstruct`], reusing tabulated duals.
pub fn reconstruct_with_tables(
    model: &DualWindowModel,
    tables: &[GammaTable],
    f: &[SampledSignal],
    radius: f64,
) -> Result<Reconstruction> {
    let n1 = model.n() + 1;
    if f.len() != n1 || tables.len() != n1 {
        return Err(GaborError::InvalidInput(format!("expected {n1} signal components")));
    }
    if f.iter().any(|s| !s.same_grid(&f[0])) {
        return Err(GaborError::InvalidInput("components live on different grids".into()));
    }
    let norm_sq: f64 = f.iter().map(|s| s.norm().powi(2)).sum();
    if norm_sq == 0.0 {
        return Err(GaborError::Degenerate("signal has zero norm".into()));
    }
    let grid = &f[0];
    let w = grid.weights();
    let lambdas = model.lattice().enumerate(radius)?;

    let coeffs: Vec<Complex64> = lambdas
        .par_iter()
        .map(|lam| {
            let mut acc = czero();
            for i in 0..grid.len() {
                let t = grid.t(i);
                let h = hermite_all(model.n(), t - lam.re).expect("order checked by model");
                let mut v = czero();
                for (j, hj) in h.iter().enumerate() {
                    v += f[j].samples[i] * *hj;
                }
                acc += v * Complex64::from_polar(w[i], -2.0 * PI * lam.im * t);
            }
            acc
        })
        .collect();

    let rows: Vec<Vec<Complex64>> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let t = grid.t(i);
            let mut out = vec![czero(); n1];
            for (lam, c) in lambdas.iter().zip(&coeffs) {
                let e = c * Complex64::from_polar(1.0, 2.0 * PI * lam.im * t);
                for (j, o) in out.iter_mut().enumerate() {
                    *o += e * tables[j].at(t - lam.re);
                }
            }
            out
        })
        .collect();

    let mut signals: Vec<SampledSignal> = f.iter().map(|s| s.zeros_like()).collect();
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n1 {
            signals[j].samples[i] = row[j];
        }
    }
    let mut err_sq = 0.0;
    for (a, b) in f.iter().zip(&signals) {
        let mut d = a.clone();
        d.axpy(Complex64::new(-1.0, 0.0), b)?;
        err_sq += d.norm().powi(2);
    }
    Ok(Reconstruction { signals, rel_error: (err_sq / norm_sq).sqrt(), terms: lambdas.len() })
}

/// `⟨π_a H_k, π_b H_l⟩ = e^{−2πi a_x (b_ξ − a_ξ)} ⟨H_k, π_{b−a} H_l⟩`.
pub fn shifted_hermite_inner(a: Complex64, k: usize, b: Complex64, l: usize) -> Result<Complex64> {
    let phase = Complex64::from_polar(1.0, -2.0 * PI * a.re * (b.im - a.im));
    Ok(phase * hermite_gram_entry(k, l, b - a)?)
}

/// Extreme eigenvalues of a truncated Gram matrix.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RieszCheck {
    pub min_eig: f64,
    pub max_eig: f64,
    pub size: usize,
}

/// Gram matrix of `{π_μ H_j : μ ∈ Λ°, |μ| ≤ R, j ≤ n}`. A consistency
/// probe only: finite sections do not certify the infinite Riesz bound.
pub fn riesz_check(lattice: &Lattice2D, n: usize, radius: f64) -> Result<RieszCheck> {
    let points = lattice.adjoint().enumerate(radius)?;
    let size = points.len() * (n + 1);
    if size > MAX_GRAM_SIZE {
        return Err(GaborError::Resource(format!("Gram matrix of size {size} exceeds {MAX_GRAM_SIZE}")));
    }
    let idx: Vec<(Complex64, usize)> = points.iter().flat_map(|p| (0..=n).map(move |j| (*p, j))).collect();
    let rows: Vec<Result<Vec<Complex64>>> = idx
        .par_iter()
        .map(|(a, k)| idx.iter().map(|(b, l)| shifted_hermite_inner(*a, *k, *b, *l)).collect())
        .collect();
    let mut g = DMatrix::from_element(size, size, czero());
    for (r, row) in rows.into_iter().enumerate() {
        for (c, v) in row?.into_iter().enumerate() {
            g[(r, c)] = v;
        }
    }
    // symmetrize against rounding
    let g = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = g.symmetric_eigenvalues();
    let min_eig = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_eig = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(RieszCheck { min_eig, max_eig, size })
}

/// Full report produced by [`analyze`].
#[derive(Clone, Debug, Serialize)]
pub struct FrameReport {
    pub schema: &'static str,
    pub lattice: Lattice2D,
    pub n: usize,
    pub size: f64,
    pub density_classification: Classification,
    pub radius: f64,
    pub wexler_raz_residual: Option<f64>,
    pub delta_residual: Option<f64>,
    pub janssen: JanssenBounds,
    pub janssen_tail: f64,
    pub dual_janssen: Option<JanssenBounds>,
    pub lower_bound_estimate: Option<f64>,
    pub lower_bound: Option<LowerBoundEstimate>,
    pub lower_bound_convention: &'static str,
    pub upper_bound_estimate: f64,
    pub reconstruction_error: Option<f64>,
    pub riesz: Option<RieszCheck>,
    pub provenance: BTreeMap<&'static str, &'static str>,
}

fn provenance() -> BTreeMap<&'static str, &'static str> {
    BTreeMap::from([
        ("size", "area of the fundamental cell, s = |det A|"),
        ("density_classification", "Hermite superframe density theorem: frame iff s < 1/(n+1)"),
        ("wexler_raz_residual", "Wexler-Raz biorthogonality on the adjoint lattice, Fock form"),
        ("delta_residual", "normalized Taylor conditions of the dual at the origin"),
        ("janssen", "absolute Janssen sum over the adjoint lattice with Gaussian tail"),
        ("janssen_tail", "Gaussian tail bound of the Janssen sum"),
        ("dual_janssen", "Janssen sum for the (Hermite, dual) pair; zero tail by biorthogonality"),
        ("lower_bound_estimate", "A >= 1/(n(Lambda) * ||gamma||_M1^2), componentwise for n > 0"),
        ("upper_bound_estimate", "upper Janssen bound of the Hermite frame operator"),
        ("reconstruction_error", "truncated frame expansion of f = h with the sigma duals"),
        ("riesz", "finite-section Gram probe of the adjoint system (not a certificate)"),
        ("radius", "plumbing"),
    ])
}

/// Classification, bounds, certification and reconstruction for `(Λ, n)`.
pub fn analyze(lattice: &Lattice2D, n: usize, radius: f64) -> Result<FrameReport> {
    let class = classify(lattice, n);
    let janssen = janssen_bounds(JanssenPair::HermiteOnly { lattice, n }, radius)?;
    let riesz = match riesz_check(lattice, n, radius) {
        Ok(r) => Some(r),
        Err(GaborError::Resource(_)) => None,
        Err(e) => return Err(e),
    };
    let mut report = FrameReport {
        schema: REPORT_SCHEMA,
        lattice: lattice.clone(),
        n,
        size: lattice.area(),
        density_classification: class,
        radius,
        wexler_raz_residual: None,
        delta_residual: None,
        janssen,
        janssen_tail: janssen.tail,
        dual_janssen: None,
        lower_bound_estimate: None,
        lower_bound: None,
        lower_bound_convention: "kappa=1",
        upper_bound_estimate: janssen.upper,
        reconstruction_error: None,
        riesz,
        provenance: provenance(),
    };
    if class == Classification::Frame {
        let model = solve_coefficients(lattice, n)?;
        report.wexler_raz_residual = Some(wexler_raz_residual(&model, radius)?);
        report.delta_residual = Some(model.delta_residual());
        report.dual_janssen = Some(janssen_bounds(JanssenPair::Dual(&model), radius)?);
        let lb = lower_bound_estimate(&model)?;
        report.lower_bound_estimate = Some(lb.value);
        report.lower_bound = Some(lb);
        let h: Vec<SampledSignal> = (0..=n).map(SampledSignal::hermite).collect::<Result<_>>()?;
        report.reconstruction_error = Some(reconstruct(&model, &h, radius)?.rel_error);
    }
    Ok(report)
}
