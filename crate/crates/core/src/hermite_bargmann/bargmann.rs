use num_complex::Complex64;
use std::f64::consts::PI;

use super::signal::{SampledSignal, SUPPORT_THRESHOLD};
use crate::error::{GaborError, Result};

/// `Bf(z) = 2^{1/4} e^{−πz²/2} ∫ f(t) e^{−πt²} e^{2πtz} dt` by Simpson's rule.
///
/// All exponentials are combined before exponentiation so that large
/// `Re z` does not overflow. Fails if the integrand is not negligible at
/// the ends of the grid.
pub fn bargmann(f: &SampledSignal, z: Complex64) -> Result<Complex64> {
    let w = f.weights();
    let c = 2f64.powf(0.25);
    let mut peak = 0.0f64;
    let vals: Vec<Complex64> = f
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let t = f.t(i);
            let e = -PI * z * z * 0.5 - PI * t * t + 2.0 * PI * t * z;
            let v = s * e.exp();
            peak = peak.max(v.norm());
            v
        })
        .collect();
    if peak == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let edge = vals.first().unwrap().norm().max(vals.last().unwrap().norm());
    if edge > SUPPORT_THRESHOLD * peak {
        return Err(GaborError::TruncationDomain(format!(
            "Bargmann integrand at z = {z} has endpoint mass {:.2e} of peak",
            edge / peak
        )));
    }
    Ok(vals.iter().zip(&w).map(|(v, w)| v * *w).sum::<Complex64>() * c)
}
