use std::f64::consts::PI;

use crate::error::{GaborError, Result};

/// Highest supported Hermite order.
pub const HERMITE_MAX_ORDER: usize = 64;

fn check_order(n: usize) -> Result<()> {
    if n > HERMITE_MAX_ORDER {
        return Err(GaborError::UnsupportedOrder { order: n, max: HERMITE_MAX_ORDER });
    }
    Ok(())
}

/// `H_0(t), …, H_n(t)`, L²-normalized with `H_0(t) = 2^{1/4} e^{−πt²}`.
///
/// Signs are chosen so that the Bargmann transform of `H_k` is the
/// normalized monomial `e_k(z) = (π^k/k!)^{1/2} z^k`.
pub fn hermite_all(n: usize, t: f64) -> Result<Vec<f64>> {
    check_order(n)?;
    let x = (2.0 * PI).sqrt() * t;
    let mut out = Vec::with_capacity(n + 1);
    out.push(2f64.powf(0.25) * (-PI * t * t).exp());
    if n >= 1 {
        out.push(2f64.sqrt() * x * out[0]);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    Ok(out)
}

/// `H_n(t)`.
pub fn hermite_eval(n: usize, t: f64) -> Result<f64> {
    Ok(hermite_all(n, t)?[n])
}

/// The vector window `h = (H_0, …, H_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HermiteWindow {
    order: usize,
}

impl HermiteWindow {
    pub fn new(order: usize) -> Result<Self> {
        check_order(order)?;
        Ok(Self { order })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of components, `n + 1`.
    pub fn components(&self) -> usize {
        self.order + 1
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        hermite_all(self.order, t).expect("order checked at construction")
    }
}
