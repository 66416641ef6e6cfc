//! Jacobi `ϑ₁` on a reduced basis. Evaluation core for σ, ζ and ℘.

use num_complex::Complex64;
use std::f64::consts::PI;

const MAX_TERMS: usize = 64;

/// `ϑ₁(v | τ) = 2 Σ (-1)^n q^{(n+1/2)²} sin((2n+1)v)` with `q = e^{iπτ}`,
/// for a basis `(u, v)` with `τ = v/u` in the reduced domain.
#[derive(Clone, Debug)]
pub(crate) struct Theta {
    pub u: Complex64,
    pub tau: Complex64,
    /// `(-1)^n q^{(n+1/2)²}`
    coeff: Vec<Complex64>,
    /// `ln |q^{(n+1/2)²}|`
    log_mag: Vec<f64>,
    pub theta1_prime0: Complex64,
    pub theta1_third0: Complex64,
}

impl Theta {
    pub fn new(u: Complex64, v: Complex64) -> Self {
        let tau = v / u;
        let mut coeff = Vec::with_capacity(MAX_TERMS);
        let mut log_mag = Vec::with_capacity(MAX_TERMS);
        for n in 0..MAX_TERMS {
            let h = n as f64 + 0.5;
            let e = Complex64::new(0.0, PI) * tau * (h * h);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            coeff.push(e.exp() * sign);
            log_mag.push(e.re);
        }
        let mut p1 = Complex64::new(0.0, 0.0);
        let mut p3 = Complex64::new(0.0, 0.0);
        for (n, c) in coeff.iter().enumerate() {
            let k = (2 * n + 1) as f64;
            p1 += c * k;
            p3 -= c * (k * k * k);
        }
        Self {
            u,
            tau,
            coeff,
            log_mag,
            theta1_prime0: p1 * 2.0,
            theta1_third0: p3 * 2.0,
        }
    }

    /// `(ϑ₁, ϑ₁', ϑ₁'')` at `v`.
    pub fn eval(&self, v: Complex64) -> (Complex64, Complex64, Complex64) {
        let grow = v.im.abs();
        let mut t0 = Complex64::new(0.0, 0.0);
        let mut t1 = Complex64::new(0.0, 0.0);
        let mut t2 = Complex64::new(0.0, 0.0);
        let mut peak = f64::NEG_INFINITY;
        for (n, c) in self.coeff.iter().enumerate() {
            let k = (2 * n + 1) as f64;
            let log_term = self.log_mag[n] + k * grow;
            peak = peak.max(log_term);
            // Terms are eventually decreasing; stop once they cannot matter.
            if n > 1 && log_term < peak - 45.0 && k > 2.0 * grow / (PI * self.tau.im) {
                break;
            }
            let (s, co) = ((v * k).sin(), (v * k).cos());
            t0 += c * s;
            t1 += c * co * k;
            t2 -= c * s * (k * k);
        }
        (t0 * 2.0, t1 * 2.0, t2 * 2.0)
    }

    /// Quasi-period `η(u) = ζ(z + u) - ζ(z)` from the q-series of `ϑ₁'''/ϑ₁'`.
    pub fn eta_u(&self) -> Complex64 {
        -(PI * PI / (3.0 * self.u)) * (self.theta1_third0 / self.theta1_prime0)
    }
}
