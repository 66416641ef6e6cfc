//! Taylor-coefficient extraction by trapezoidal Cauchy integrals, and the
//! small amount of truncated power-series arithmetic built on top of it.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Default number of nodes on the Cauchy circle.
pub const CONTOUR_NODES: usize = 64;

/// Taylor coefficients `a_k = f^{(k)}(center)/k!`, `k < count`, from the
/// `nodes`-point trapezoidal rule on `|z - center| = radius`.
///
/// Exponentially accurate for entire `f`; `count` must not exceed `nodes`.
pub fn taylor_coefficients<F>(f: F, center: Complex64, radius: f64, nodes: usize, count: usize) -> Vec<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    assert!(count <= nodes, "cannot extract {count} coefficients from {nodes} nodes");
    let samples: Vec<Complex64> = (0..nodes)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / nodes as f64;
            f(center + Complex64::from_polar(radius, th))
        })
        .collect();
    coefficients_from_samples(&samples, radius, count)
}

/// Taylor coefficients from samples at `center + radius·e^{2πij/N}`.
pub fn coefficients_from_samples(samples: &[Complex64], radius: f64, count: usize) -> Vec<Complex64> {
    let nodes = samples.len();
    let mut out = Vec::with_capacity(count);
    let mut rk = 1.0;
    for k in 0..count {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, s) in samples.iter().enumerate() {
            let th = -2.0 * PI * ((j * k) % nodes) as f64 / nodes as f64;
            acc += s * Complex64::from_polar(1.0, th);
        }
        out.push(acc / (nodes as f64 * rk));
        rk *= radius;
    }
    out
}

/// Converts Taylor coefficients to derivatives `f^{(k)} = k! a_k`.
pub fn to_derivatives(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut fact = 1.0;
    coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| {
            if k > 0 {
                fact *= k as f64;
            }
            a * fact
        })
        .collect()
}

pub fn series_mul(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if *ai == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

pub fn series_pow(a: &[Complex64], p: u32, len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    if len > 0 {
        out[0] = Complex64::new(1.0, 0.0);
    }
    for _ in 0..p {
        out = series_mul(&out, a, len);
    }
    out
}

/// `exp(h(z))` as a power series, via `g' = h' g`.
pub fn series_exp(h: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut g = vec![Complex64::new(0.0, 0.0); len];
    if len == 0 {
        return g;
    }
    g[0] = h.first().copied().unwrap_or_default().exp();
    for k in 1..len {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k.min(h.len().saturating_sub(1)) {
            acc += h[j] * (j as f64) * g[k - j];
        }
        g[k] = acc / k as f64;
    }
    g
}

/// Taylor coefficients of `(w + h)^{-d}` in `h`.
pub fn inverse_power_series(w: Complex64, d: u32, len: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(len);
    let base = w.powi(-(d as i32));
    let mut c = Complex64::new(1.0, 0.0);
    for k in 0..len {
        out.push(base * c);
        // binom(-d, k+1) / binom(-d, k) = (-d - k)/(k+1)
        c = c * (-(d as f64) - k as f64) / ((k + 1) as f64) / w;
    }
    out
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
