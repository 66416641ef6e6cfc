//! Direct truncated lattice products and sums for σ, ζ and ℘.
//!
//! Truncation errors decay only algebraically in the radius, so these are
//! accurate to a handful of digits at practical radii. They exist as an independent reference for
//! the theta-based evaluators.

use num_complex::Complex64;

use crate::error::Result;
use crate::lattice::Lattice2D;

/// Nonzero lattice points with `|ω| ≤ radius`.
pub struct LatticeSeries {
    points: Vec<Complex64>,
}

impl LatticeSeries {
    pub fn new(lattice: &Lattice2D, radius: f64) -> Result<Self> {
        let points = lattice
            .enumerate(radius)?
            .into_iter()
            .filter(|w| w.norm() > 0.0)
            .collect();
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `ln σ(z)` from `z ∏ (1 − z/ω) e^{z/ω + z²/(2ω²)}`.
    pub fn ln_sigma(&self, z: Complex64) -> Complex64 {
        let mut acc = z.ln();
        for w in &self.points {
            let x = z / w;
            acc += log1m_plus(x);
        }
        acc
    }

    pub fn sigma(&self, z: Complex64) -> Complex64 {
        if z.norm() == 0.0 {
            return z;
        }
        self.ln_sigma(z).exp()
    }

    /// `1/z + Σ (1/(z − ω) + 1/ω + z/ω²)`.
    pub fn zeta(&self, z: Complex64) -> Complex64 {
        let mut acc = z.inv();
        for w in &self.points {
            acc += (z - w).inv() + w.inv() + z / (w * w);
        }
        acc
    }

    /// `1/z² + Σ (1/(z − ω)² − 1/ω²)`.
    pub fn weierstrass_p(&self, z: Complex64) -> Complex64 {
        let mut acc = (z * z).inv();
        for w in &self.points {
            acc += ((z - w) * (z - w)).inv() - (w * w).inv();
        }
        acc
    }
}

/// `ln(1 − x) + x + x²/2`, with a series for small `x`.
fn log1m_plus(x: Complex64) -> Complex64 {
    if x.norm() < 0.05 {
        let mut term = x * x * x;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 3..20 {
            acc -= term / k as f64;
            term *= x;
        }
        acc
    } else {
        (Complex64::new(1.0, 0.0) - x).ln() + x + x * x * 0.5
    }
}
