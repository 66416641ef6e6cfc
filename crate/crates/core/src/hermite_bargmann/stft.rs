use num_complex::Complex64;
use std::f64::consts::PI;

use super::fock::FockFunction;
use super::hermite::{hermite_eval, HERMITE_MAX_ORDER};
use super::signal::SampledSignal;
use crate::contour::{binomial, factorial, to_derivatives};
use crate::error::{GaborError, Result};

/// `π_z f(t) = e^{2πiξt} f(t − x)` for `z = x + iξ`.
pub fn tf_shift<F>(z: Complex64, f: F) -> impl Fn(f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    move |t| Complex64::from_polar(1.0, 2.0 * PI * z.im * t) * f(t - z.re)
}

/// `⟨f, π_ζ H_n⟩` for the signal whose Bargmann transform is `F`:
///
/// `(π^n n!)^{−1/2} e^{−iπxξ} e^{−π|ζ|²/2} Σ_k C(n,k) (−πζ)^k F^{(n−k)}(ζ̄)`.
pub fn stft_hermite(f: &FockFunction, n: usize, zeta: Complex64) -> Result<Complex64> {
    check_order(n)?;
    let (scale, coeffs) = f.taylor_scaled(zeta.conj(), n + 1);
    stft_from_taylor(scale, &coeffs, n, zeta)
}

/// As [`stft_hermite`], with Taylor data from a Cauchy integral of radius
/// `radius` around `ζ̄` instead of the structural expansion.
pub fn stft_hermite_contour(f: &FockFunction, n: usize, zeta: Complex64, radius: f64) -> Result<Complex64> {
    check_order(n)?;
    let coeffs = f.taylor_contour(zeta.conj(), radius, n + 1);
    stft_from_taylor(0.0, &coeffs, n, zeta)
}

fn check_order(n: usize) -> Result<()> {
    if n > HERMITE_MAX_ORDER {
        return Err(GaborError::UnsupportedOrder { order: n, max: HERMITE_MAX_ORDER });
    }
    Ok(())
}

/// STFT from `e^{scale} · coeffs`, the Taylor coefficients of `F` at `ζ̄`.
fn stft_from_taylor(scale: f64, coeffs: &[Complex64], n: usize, zeta: Complex64) -> Result<Complex64> {
    let d = to_derivatives(coeffs);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut p = Complex64::new(1.0, 0.0);
    let step = -PI * zeta;
    for k in 0..=n {
        sum += p * d[n - k] * binomial(n, k);
        p *= step;
    }
    let log_pref = Complex64::new(scale - PI * zeta.norm_sqr() * 0.5, -PI * zeta.re * zeta.im);
    let v = sum * log_pref.exp() / (PI.powi(n as i32) * factorial(n)).sqrt();
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(GaborError::Accuracy(format!("non-finite STFT value at ζ = {zeta}")));
    }
    Ok(v)
}

/// `⟨H_k, π_μ H_l⟩` in closed form.
pub fn hermite_gram_entry(k: usize, l: usize, mu: Complex64) -> Result<Complex64> {
    if k > HERMITE_MAX_ORDER {
        return Err(GaborError::UnsupportedOrder { order: k, max: HERMITE_MAX_ORDER });
    }
    stft_hermite(&FockFunction::Monomial(k), l, mu)
}

/// `⟨f, π_ζ H_n⟩` by Simpson quadrature on the signal's grid.
pub fn stft_time_domain(f: &SampledSignal, n: usize, zeta: Complex64) -> Result<Complex64> {
    hermite_eval(n, 0.0)?;
    let w = f.weights();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, (s, wi)) in f.samples.iter().zip(&w).enumerate() {
        let t = f.t(i);
        let g = Complex64::from_polar(hermite_eval(n, t - zeta.re)?, 2.0 * PI * zeta.im * t);
        acc += s * g.conj() * *wi;
    }
    Ok(acc)
}
