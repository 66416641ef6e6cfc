use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::contour::{self, CONTOUR_NODES};
use crate::elliptic::WeierstrassContext;
use crate::error::{GaborError, Result};
use crate::quadrature::gauss_legendre;

/// Radius of the Cauchy circle used for generic derivative extraction.
const GENERIC_CONTOUR_RADIUS: f64 = 0.5;

/// Below this modulus σ-products are evaluated from their Taylor series.
const TAYLOR_MODE_RADIUS: f64 = 1e-3;

/// Spatial resolution of the polar Fock quadrature.
pub const FOCK_STEP: f64 = 0.125;

const RADIAL_PANEL: f64 = 0.5;
const RADIAL_NODES: usize = 8;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `(π^k / k!)^{1/2}`, the normalization of `e_k`.
pub fn monomial_norm(k: usize) -> f64 {
    let mut r = 1.0f64;
    for j in 1..=k {
        r *= PI / j as f64;
    }
    r.sqrt()
}

/// `σ_Λ(z)^p · Σ_d c_d z^{−d}` with `d ≤ p`, an entire function.
#[derive(Clone, Debug)]
pub struct SigmaProduct {
    ctx: Arc<WeierstrassContext>,
    power: u32,
    laurent: Vec<Complex64>,
    taylor0: Vec<Complex64>,
}

impl SigmaProduct {
    pub fn new(ctx: Arc<WeierstrassContext>, power: u32, laurent: Vec<Complex64>) -> Result<Self> {
        if laurent.len() > power as usize + 1 {
            return Err(GaborError::InvalidInput(format!(
                "pole order {} exceeds zero order {power} at the origin",
                laurent.len() - 1
            )));
        }
        let len = 2 * power as usize + 5;
        let b = Self::reduced_power_series(&ctx, power, len);
        let mut taylor0 = vec![czero(); len];
        for (d, c) in laurent.iter().enumerate() {
            let shift = power as usize - d;
            for k in shift..len {
                taylor0[k] += c * b[k - shift];
            }
        }
        Ok(Self { ctx, power, laurent, taylor0 })
    }

    /// Taylor coefficients at 0 of `(σ_Λ(z)/z)^p`.
    pub fn reduced_power_series(ctx: &WeierstrassContext, power: u32, len: usize) -> Vec<Complex64> {
        let s = ctx.sigma_mod_taylor(czero(), len + 1);
        contour::series_pow(&s[1..], power, len)
    }

    pub fn context(&self) -> &Arc<WeierstrassContext> {
        &self.ctx
    }
    pub fn power(&self) -> u32 {
        self.power
    }
    pub fn laurent(&self) -> &[Complex64] {
        &self.laurent
    }
    /// Taylor coefficients at the origin.
    pub fn taylor_at_zero(&self) -> &[Complex64] {
        &self.taylor0
    }

    fn log_eval(&self, z: Complex64) -> Option<Complex64> {
        if z.norm() < TAYLOR_MODE_RADIUS {
            let v = horner(&self.taylor0, z);
            return (v != czero()).then(|| v.ln());
        }
        let ls = self.ctx.ln_sigma_mod(z)?;
        let inv = z.inv();
        let poly = horner(&self.laurent, inv);
        if poly == czero() {
            return None;
        }
        Some(ls * self.power as f64 + poly.ln())
    }

    fn taylor_scaled(&self, w: Complex64, len: usize) -> (f64, Vec<Complex64>) {
        if w == czero() && len <= self.taylor0.len() {
            return (0.0, self.taylor0[..len].to_vec());
        }
        if w.norm() < GENERIC_CONTOUR_RADIUS {
            return contour_scaled(|z| self.log_eval(z), w, len);
        }
        let (l0, s) = self.ctx.sigma_mod_taylor_scaled(w, len);
        let sp = contour::series_pow(&s, self.power, len);
        let mut lp = vec![czero(); len];
        for (d, c) in self.laurent.iter().enumerate() {
            if *c == czero() {
                continue;
            }
            for (k, v) in contour::inverse_power_series(w, d as u32, len).into_iter().enumerate() {
                lp[k] += c * v;
            }
        }
        let l = l0 * self.power as f64;
        let phase = Complex64::from_polar(1.0, l.im);
        let out = contour::series_mul(&sp, &lp, len).into_iter().map(|c| c * phase).collect();
        (l.re, out)
    }
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(czero(), |acc, a| acc * z + a)
}

/// Cauchy-integral Taylor coefficients of `exp(log_f)` at `w`, with the
/// largest log-modulus on the circle factored out.
fn contour_scaled<F>(log_f: F, w: Complex64, len: usize) -> (f64, Vec<Complex64>)
where
    F: Fn(Complex64) -> Option<Complex64>,
{
    let logs: Vec<Option<Complex64>> = (0..CONTOUR_NODES)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / CONTOUR_NODES as f64;
            log_f(w + Complex64::from_polar(GENERIC_CONTOUR_RADIUS, th))
        })
        .collect();
    let scale = logs.iter().flatten().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    if !scale.is_finite() {
        return (0.0, vec![czero(); len]);
    }
    let samples: Vec<Complex64> =
        logs.iter().map(|l| l.map_or(czero(), |l| (l - scale).exp())).collect();
    let mut c = contour::coefficients_from_samples(&samples, GENERIC_CONTOUR_RADIUS, len.min(CONTOUR_NODES));
    c.resize(len, czero());
    (scale, c)
}

/// An entire function in the Fock space, held symbolically.
#[derive(Clone)]
pub enum FockFunction {
    Zero,
    /// `e_k(z) = (π^k/k!)^{1/2} z^k`, the image of `H_k`.
    Monomial(usize),
    SigmaProduct(SigmaProduct),
    Combination(Vec<(Complex64, FockFunction)>),
    /// `β_ζ F(z) = e^{iπxξ} e^{−π|ζ|²/2} e^{πζz} F(z − ζ̄)` with `ζ = x + iξ`.
    Shifted { zeta: Complex64, inner: Box<FockFunction> },
    /// Any entire function given by a closure.
    Analytic(Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>),
}

impl fmt::Debug for FockFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "Zero"),
            Self::Monomial(k) => write!(f, "Monomial({k})"),
            Self::SigmaProduct(s) => f
                .debug_struct("SigmaProduct")
                .field("power", &s.power)
                .field("laurent", &s.laurent)
                .finish(),
            Self::Combination(v) => f.debug_list().entries(v.iter()).finish(),
            Self::Shifted { zeta, inner } => {
                f.debug_struct("Shifted").field("zeta", zeta).field("inner", inner).finish()
            }
            Self::Analytic(_) => write!(f, "Analytic(..)"),
        }
    }
}

impl FockFunction {
    /// A branch of `ln F(z)`, or `None` where `F(z) = 0`.
    pub fn log_eval(&self, z: Complex64) -> Option<Complex64> {
        match self {
            Self::Zero => None,
            Self::Monomial(0) => Some(czero()),
            Self::Monomial(k) => {
                (z != czero()).then(|| Complex64::new(monomial_norm(*k).ln(), 0.0) + z.ln() * *k as f64)
            }
            Self::SigmaProduct(s) => s.log_eval(z),
            Self::Combination(terms) => {
                let logs: Vec<(Complex64, Complex64)> = terms
                    .iter()
                    .filter(|(c, _)| *c != czero())
                    .filter_map(|(c, g)| g.log_eval(z).map(|l| (*c, l)))
                    .collect();
                let m = logs.iter().map(|(_, l)| l.re).fold(f64::NEG_INFINITY, f64::max);
                if !m.is_finite() {
                    return None;
                }
                let sum: Complex64 = logs.iter().map(|(c, l)| c * (l - m).exp()).sum();
                (sum != czero()).then(|| sum.ln() + m)
            }
            Self::Shifted { zeta, inner } => {
                let l = inner.log_eval(z - zeta.conj())?;
                Some(l + shift_log_factor(*zeta) + PI * zeta * z)
            }
            Self::Analytic(f) => {
                let v = f(z);
                (v != czero()).then(|| v.ln())
            }
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.log_eval(z).map_or(czero(), |l| l.exp())
    }

    /// Taylor coefficients at `w` in the form `(s, c)` with true
    /// coefficients `e^s c_k`.
    pub fn taylor_scaled(&self, w: Complex64, len: usize) -> (f64, Vec<Complex64>) {
        match self {
            Self::Zero => (0.0, vec![czero(); len]),
            Self::Monomial(k) => {
                let nk = monomial_norm(*k);
                let out = (0..len)
                    .map(|j| {
                        if j > *k {
                            czero()
                        } else {
                            w.powu((*k - j) as u32) * (contour::binomial(*k, j) * nk)
                        }
                    })
                    .collect();
                (0.0, out)
            }
            Self::SigmaProduct(s) => s.taylor_scaled(w, len),
            Self::Combination(terms) => {
                let parts: Vec<(Complex64, f64, Vec<Complex64>)> = terms
                    .iter()
                    .filter(|(c, _)| *c != czero())
                    .map(|(c, g)| {
                        let (s, v) = g.taylor_scaled(w, len);
                        (*c, s, v)
                    })
                    .collect();
                let m = parts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
                if !m.is_finite() {
                    return (0.0, vec![czero(); len]);
                }
                let mut out = vec![czero(); len];
                for (c, s, v) in parts {
                    let f = c * (s - m).exp();
                    for (o, x) in out.iter_mut().zip(v) {
                        *o += f * x;
                    }
                }
                (m, out)
            }
            Self::Shifted { zeta, inner } => {
                let (s, v) = inner.taylor_scaled(w - zeta.conj(), len);
                let l = shift_log_factor(*zeta) + PI * zeta * w;
                let e = contour::series_exp(&[czero(), PI * zeta], len);
                let phase = Complex64::from_polar(1.0, l.im);
                let out = contour::series_mul(&e, &v, len).into_iter().map(|c| c * phase).collect();
                (s + l.re, out)
            }
            Self::Analytic(_) => contour_scaled(|z| self.log_eval(z), w, len),
        }
    }

    /// Taylor coefficients `F^{(k)}(w)/k!`, `k < len`.
    pub fn taylor(&self, w: Complex64, len: usize) -> Vec<Complex64> {
        let (s, v) = self.taylor_scaled(w, len);
        let f = s.exp();
        v.into_iter().map(|c| c * f).collect()
    }

    /// Taylor coefficients from a Cauchy integral of the evaluation handle,
    /// ignoring any structural shortcut.
    pub fn taylor_contour(&self, w: Complex64, radius: f64, len: usize) -> Vec<Complex64> {
        contour::taylor_coefficients(|z| self.eval(z), w, radius, CONTOUR_NODES, len)
    }
}

/// `ln(e^{iπxξ} e^{−π|ζ|²/2})` for `ζ = x + iξ`.
fn shift_log_factor(zeta: Complex64) -> Complex64 {
    Complex64::new(-PI * zeta.norm_sqr() * 0.5, PI * zeta.re * zeta.im)
}

/// `β_ζ F`.
pub fn fock_shift(zeta: Complex64, f: &FockFunction) -> FockFunction {
    if zeta == czero() {
        return f.clone();
    }
    FockFunction::Shifted { zeta, inner: Box::new(f.clone()) }
}

/// A bound `|F(z)| ≤ C e^{πθ|z|²/2}` valid for `|z| ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct GrowthCertificate {
    pub c: f64,
    pub theta: f64,
}

impl GrowthCertificate {
    /// Certificate for `e_k` with a given exponent `θ ∈ (0, 1)`.
    pub fn for_monomial(k: usize, theta: f64) -> Self {
        // max_r r^k e^{−πθr²/2} is attained at r² = k/(πθ)
        let c = if k == 0 {
            1.0
        } else {
            let r2 = k as f64 / (PI * theta);
            monomial_norm(k) * (0.5 * k as f64 * r2.ln() - 0.5 * k as f64).exp()
        };
        Self { c, theta }
    }

    /// Radius beyond which the `M¹` tail is below `tol`.
    pub fn radius_for(&self, tol: f64) -> f64 {
        let q = 1.0 - self.theta;
        let arg = (2.0 * self.c / (q * tol)).max(std::f64::consts::E);
        (2.0 * arg.ln() / (PI * q)).sqrt().max(1.0)
    }

    /// Bound on `∫_{|z|>R} |F| e^{−π|z|²/2}`.
    pub fn m1_tail(&self, r: f64) -> f64 {
        let q = 1.0 - self.theta;
        2.0 * self.c / q * (-PI * q * r * r * 0.5).exp()
    }

    /// Bound on `∫_{|z|>R} |F|² e^{−π|z|²}`.
    pub fn l2_tail(&self, r: f64) -> f64 {
        let q = 1.0 - self.theta;
        self.c * self.c / q * (-PI * q * r * r).exp()
    }
}

/// Fock and `M¹` norms over `|z| ≤ radius` plus certified tails.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct FockNorms {
    /// `‖F‖_𝓕 = (∫|F|² e^{−π|z|²})^{1/2}`.
    pub l2: f64,
    /// `∫|F| e^{−π|z|²/2}`.
    pub m1: f64,
    pub l2_sq_tail: f64,
    pub m1_tail: f64,
    pub radius: f64,
}

/// Polar nodes `(z, weight)` covering the disk `|z| ≤ radius`.
fn polar_nodes(radius: f64) -> (Vec<(f64, f64)>, usize) {
    let (gx, gw) = gauss_legendre(RADIAL_NODES);
    let panels = (radius / RADIAL_PANEL).ceil().max(1.0) as usize;
    let h = radius / panels as f64;
    let mut radial = Vec::with_capacity(panels * RADIAL_NODES);
    for p in 0..panels {
        let a = p as f64 * h;
        for (x, w) in gx.iter().zip(&gw) {
            let r = a + 0.5 * h * (x + 1.0);
            radial.push((r, 0.5 * h * w * r));
        }
    }
    let n_theta = ((2.0 * PI * radius / FOCK_STEP).ceil() as usize).max(64).next_multiple_of(4);
    (radial, n_theta)
}

/// Sum over polar nodes of `f(z)·weight`, row-parallel with a fixed-order
/// reduction.
fn polar_sum<F>(radius: f64, f: F) -> Vec<f64>
where
    F: Fn(Complex64) -> [f64; 2] + Sync,
{
    let (radial, n_theta) = polar_nodes(radius);
    let dth = 2.0 * PI / n_theta as f64;
    let rows: Vec<[f64; 2]> = radial
        .par_iter()
        .map(|&(r, w)| {
            let mut acc = [0.0; 2];
            for j in 0..n_theta {
                let z = Complex64::from_polar(r, (j as f64 + 0.5) * dth);
                let v = f(z);
                acc[0] += v[0];
                acc[1] += v[1];
            }
            [acc[0] * w * dth, acc[1] * w * dth]
        })
        .collect();
    let mut tot = vec![0.0, 0.0];
    for r in rows {
        tot[0] += r[0];
        tot[1] += r[1];
    }
    tot
}

/// `‖F‖_𝓕` and `‖F‖_{M¹}` by polar quadrature on `|z| ≤ radius` plus the
/// Gaussian tails implied by `cert`.
pub fn fock_norms(f: &FockFunction, radius: f64, cert: GrowthCertificate) -> Result<FockNorms> {
    if !(cert.theta < 1.0) {
        return Err(GaborError::Divergence { theta: cert.theta });
    }
    if !(radius >= 1.0 && radius.is_finite()) {
        return Err(GaborError::InvalidInput(format!("truncation radius must be >= 1, got {radius}")));
    }
    if let FockFunction::Zero = f {
        return Ok(FockNorms { l2: 0.0, m1: 0.0, l2_sq_tail: 0.0, m1_tail: 0.0, radius });
    }
    let sums = polar_sum(radius, |z| match f.log_eval(z) {
        Some(l) => {
            let r2 = z.norm_sqr();
            [(2.0 * l.re - PI * r2).exp(), (l.re - 0.5 * PI * r2).exp()]
        }
        None => [0.0, 0.0],
    });
    let l2_sq_tail = cert.l2_tail(radius);
    let m1_tail = cert.m1_tail(radius);
    Ok(FockNorms { l2: sums[0].sqrt(), m1: sums[1], l2_sq_tail, m1_tail, radius })
}

/// `⟨F, G⟩_𝓕 = ∫ F(z) conj(G(z)) e^{−π|z|²}` over `|z| ≤ radius`.
pub fn fock_inner(f: &FockFunction, g: &FockFunction, radius: f64) -> Complex64 {
    let s = polar_sum(radius, |z| match (f.log_eval(z), g.log_eval(z)) {
        (Some(a), Some(b)) => {
            let v = (a + b.conj() - PI * z.norm_sqr()).exp();
            [v.re, v.im]
        }
        _ => [0.0, 0.0],
    });
    Complex64::new(s[0], s[1])
}
