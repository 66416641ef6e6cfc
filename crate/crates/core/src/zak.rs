//! Zak transform `Z_A f(x, ξ) = Σ_k f(x − Ak) e^{2πiAkξ}` and the frame
//! criterion for separable lattices `aℤ × bℤ` with `ab = 1/2`.
//!
//! For such a lattice the frame operator of `G(g, Λ)` is, after `Z_A` with
//! `A = 1/b = 2a`, multiplication by a positive multiple of
//! `m(x, ξ) = |Z_A g(x, ξ)|² + |Z_A g(x − a, ξ)|²`, so `G(g, Λ)` is a frame
//! iff `m` is bounded away from zero on `[0, A) × [0, 1/A)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::dual_window::GammaTable;
use crate::error::{GaborError, Result};
use crate::hermite_bargmann::{hermite_eval, SampledSignal, SUPPORT_THRESHOLD};

/// Window magnitude treated as zero when truncating the Zak series.
pub const TRUNCATION: f64 = 1e-15;

/// Decision threshold on `inf m`.
pub const FRAME_THRESHOLD: f64 = 1e-6;

/// Default grid size of [`half_integer_criterion`] per axis.
pub const DEFAULT_GRID: usize = 512;

/// Local refinement passes around the grid minimum, each 8× finer.
pub const REFINEMENT_PASSES: usize = 3;

const REFINE_FACTOR: usize = 8;

/// Window fed to the Zak transform.
#[derive(Clone, Copy, Debug)]
pub enum ZakInput<'a> {
    Hermite(usize),
    Sampled(&'a SampledSignal),
}

enum Window {
    Hermite { n: usize, support: f64 },
    Table { table: GammaTable, support: f64 },
}

impl Window {
    fn new(input: ZakInput) -> Result<Self> {
        match input {
            ZakInput::Hermite(n) => {
                hermite_eval(n, 0.0)?;
                // |H_n| decreases beyond the turning point
                let mut t = ((2 * n + 1) as f64 / (2.0 * PI)).sqrt();
                while hermite_eval(n, t)?.abs() >= TRUNCATION {
                    t += 0.01;
                }
                Ok(Self::Hermite { n, support: t })
            }
            ZakInput::Sampled(s) => {
                if s.len() < 8 {
                    return Err(GaborError::InvalidInput("sampled window needs at least 8 samples".into()));
                }
                if !s.is_effectively_supported() {
                    return Err(GaborError::TruncationDomain(format!(
                        "window does not decay below {SUPPORT_THRESHOLD:e} at the grid ends"
                    )));
                }
                let table = GammaTable { t_min: s.t_min, dt: s.dt, values: s.samples.clone() };
                let support = table.t_min.abs().max(table.t_max().abs());
                Ok(Self::Table { table, support })
            }
        }
    }

    fn support(&self) -> f64 {
        match self {
            Self::Hermite { support, .. } | Self::Table { support, .. } => *support,
        }
    }

    fn eval(&self, t: f64) -> Complex64 {
        if t.abs() > self.support() {
            return Complex64::new(0.0, 0.0);
        }
        match self {
            Self::Hermite { n, .. } => Complex64::new(hermite_eval(*n, t).expect("order checked"), 0.0),
            Self::Table { table, .. } => table.at(t),
        }
    }

    /// `(k, f(x − Ak))` for all non-negligible terms.
    fn terms(&self, a: f64, x: f64) -> Vec<(i64, Complex64)> {
        let t = self.support();
        let k0 = ((x - t) / a).ceil() as i64;
        let k1 = ((x + t) / a).floor() as i64;
        (k0..=k1).map(|k| (k, self.eval(x - a * k as f64))).collect()
    }

    fn zak(&self, a: f64, x: f64, xi: f64) -> Complex64 {
        self.terms(a, x)
            .into_iter()
            .map(|(k, v)| v * Complex64::from_polar(1.0, 2.0 * PI * a * k as f64 * xi))
            .sum()
    }
}

/// Samples of `Z_a f` on `x_i = i a / nx`, `ξ_j = j / (a nxi)`.
#[derive(Clone, Debug)]
pub struct ZakGrid {
    pub a: f64,
    pub nx: usize,
    pub nxi: usize,
    /// Row-major in `x`.
    pub values: Vec<Complex64>,
}

impl ZakGrid {
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.a / self.nx as f64
    }

    pub fn xi(&self, j: usize) -> f64 {
        j as f64 / (self.a * self.nxi as f64)
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.nxi + j]
    }

    /// Discrete `L²(Q_{a,1/a})` norm with measure `a dx dξ`, which makes
    /// `Z_a` unitary.
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (self.a * sum / (self.nx * self.nxi) as f64).sqrt()
    }
}

fn check_grid(a: f64, nx: usize, nxi: usize) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(GaborError::InvalidInput(format!("Zak parameter must be positive, got {a}")));
    }
    if nx < 2 || nxi < 2 {
        return Err(GaborError::InvalidInput("Zak grid needs at least 2 points per axis".into()));
    }
    Ok(())
}

pub fn zak_transform(input: ZakInput, a: f64, nx: usize, nxi: usize) -> Result<ZakGrid> {
    check_grid(a, nx, nxi)?;
    let w = Window::new(input)?;
    let grid = ZakGrid { a, nx, nxi, values: Vec::new() };
    let rows: Vec<Vec<Complex64>> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let terms = w.terms(a, grid.x(i));
            (0..nxi)
                .map(|j| {
                    let xi = grid.xi(j);
                    terms.iter().map(|(k, v)| v * Complex64::from_polar(1.0, 2.0 * PI * a * *k as f64 * xi)).sum()
                })
                .collect()
        })
        .collect();
    Ok(ZakGrid { values: rows.concat(), ..grid })
}

/// `max |Z_a f(x + a, ξ) − e^{2πiaξ} Z_a f(x, ξ)|` over the grid.
pub fn quasi_periodicity_residual(input: ZakInput, a: f64, nx: usize, nxi: usize) -> Result<f64> {
    check_grid(a, nx, nxi)?;
    let w = Window::new(input)?;
    let res = (0..nx)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 * a / nx as f64;
            (0..nxi)
                .map(|j| {
                    let xi = j as f64 / (a * nxi as f64);
                    let lhs = w.zak(a, x + a, xi);
                    let rhs = Complex64::from_polar(1.0, 2.0 * PI * a * xi) * w.zak(a, x, xi);
                    (lhs - rhs).norm()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(res)
}

/// Outcome of [`half_integer_criterion`].
#[derive(Clone, Debug, Serialize)]
pub struct HalfIntegerCriterion {
    pub n: usize,
    /// Time step of the lattice `aℤ × bℤ`.
    pub a: f64,
    pub b: f64,
    /// Zak parameter `A = 2a`.
    pub zak_parameter: f64,
    pub nx: usize,
    pub nxi: usize,
    pub inf_val: f64,
    pub sup_val: f64,
    pub grid_min: f64,
    pub argmin: [f64; 2],
    /// Lower bound on `inf m` from the grid minimum and a Lipschitz estimate.
    pub certified_lower: f64,
    pub lipschitz: [f64; 2],
    /// Distance of the minimizer to the nearest forced zero `(0, 0)` or
    /// `(a, 0)` in grid cells (odd windows only).
    pub forced_zero_distance_cells: Option<f64>,
    pub threshold: f64,
    pub is_frame: bool,
    #[serde(skip)]
    pub surface: Vec<f64>,
}

impl HalfIntegerCriterion {
    /// Grid coordinates of surface sample `(i, j)`.
    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        (
            i as f64 * self.zak_parameter / self.nx as f64,
            j as f64 / (self.zak_parameter * self.nxi as f64),
        )
    }
}

fn criterion_value(w: &Window, big_a: f64, a: f64, x: f64, xi: f64) -> f64 {
    w.zak(big_a, x, xi).norm_sqr() + w.zak(big_a, x - a, xi).norm_sqr()
}

/// `sup_x Σ_k |f(x − Ak)|`, `sup_x Σ_k |f'(x − Ak)|`, `sup_x Σ_k 2πA|k| |f(x − Ak)|`.
fn series_bounds(w: &Window, big_a: f64, a: f64, nx: usize) -> (f64, f64, f64) {
    let h = 1e-5;
    let mut out = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..=nx {
        for x in [i as f64 * big_a / nx as f64, i as f64 * big_a / nx as f64 - a] {
            let terms = w.terms(big_a, x);
            let s0: f64 = terms.iter().map(|(_, v)| v.norm()).sum();
            let s1: f64 = terms
                .iter()
                .map(|(k, _)| {
                    let t = x - big_a * *k as f64;
                    ((w.eval(t + h) - w.eval(t - h)) / (2.0 * h)).norm()
                })
                .sum();
            let s2: f64 = terms.iter().map(|(k, v)| 2.0 * PI * big_a * k.abs() as f64 * v.norm()).sum();
            out = (out.0.max(s0), out.1.max(s1), out.2.max(s2));
        }
    }
    // grid sup plus a margin for the sup between nodes
    let m = 1.0 + 4.0 / nx as f64 + 1e-3;
    (out.0 * m, out.1 * m, out.2 * m)
}

/// Frame criterion for `G(H_n, aℤ × (2a)^{−1}ℤ)` on an `nx × nxi` grid of
/// `[0, 2a) × [0, 1/(2a))` with local refinement around the minimum.
pub fn half_integer_criterion(n: usize, a: f64, nx: usize, nxi: usize) -> Result<HalfIntegerCriterion> {
    check_grid(a, nx, nxi)?;
    let w = Window::new(ZakInput::Hermite(n))?;
    let big_a = 2.0 * a;
    let (hx, hxi) = (big_a / nx as f64, 1.0 / (big_a * nxi as f64));

    let rows: Vec<Vec<f64>> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 * hx;
            let t0 = w.terms(big_a, x);
            let t1 = w.terms(big_a, x - a);
            (0..nxi)
                .map(|j| {
                    let xi = j as f64 * hxi;
                    let z = |terms: &[(i64, Complex64)]| -> Complex64 {
                        terms.iter().map(|(k, v)| v * Complex64::from_polar(1.0, 2.0 * PI * big_a * *k as f64 * xi)).sum()
                    };
                    z(&t0).norm_sqr() + z(&t1).norm_sqr()
                })
                .collect()
        })
        .collect();
    let surface = rows.concat();

    let mut best = (f64::INFINITY, 0usize);
    let mut sup_val = 0.0f64;
    for (idx, v) in surface.iter().enumerate() {
        if *v < best.0 {
            best = (*v, idx);
        }
        sup_val = sup_val.max(*v);
    }
    let grid_min = best.0;
    let mut argmin = [(best.1 / nxi) as f64 * hx, (best.1 % nxi) as f64 * hxi];
    let mut inf_val = grid_min;

    let (mut rx, mut rxi) = (hx, hxi);
    for _ in 0..REFINEMENT_PASSES {
        let (cx, cxi) = (argmin[0], argmin[1]);
        rx /= REFINE_FACTOR as f64;
        rxi /= REFINE_FACTOR as f64;
        let half = 2 * REFINE_FACTOR as i64;
        for p in -half..=half {
            for q in -half..=half {
                let (x, xi) = (cx + p as f64 * rx, cxi + q as f64 * rxi);
                let v = criterion_value(&w, big_a, a, x, xi);
                if v < inf_val {
                    inf_val = v;
                    argmin = [x, xi];
                }
            }
        }
    }

    let (s0, s1, s2) = series_bounds(&w, big_a, a, nx);
    let lipschitz = [4.0 * s0 * s1, 4.0 * s0 * s2];
    let certified_lower = (grid_min - lipschitz[0] * hx / 2.0 - lipschitz[1] * hxi / 2.0).max(0.0);

    let forced_zero_distance_cells = (n % 2 == 1).then(|| {
        let wrap = |d: f64, p: f64| {
            let r = d.rem_euclid(p);
            r.min(p - r)
        };
        [0.0, a]
            .iter()
            .map(|x0| {
                let dx = wrap(argmin[0] - x0, big_a) / hx;
                let dxi = wrap(argmin[1], 1.0 / big_a) / hxi;
                dx.max(dxi)
            })
            .fold(f64::INFINITY, f64::min)
    });

    Ok(HalfIntegerCriterion {
        n,
        a,
        b: 1.0 / big_a,
        zak_parameter: big_a,
        nx,
        nxi,
        inf_val,
        sup_val,
        grid_min,
        argmin,
        certified_lower,
        lipschitz,
        forced_zero_distance_cells,
        threshold: FRAME_THRESHOLD,
        is_frame: inf_val > FRAME_THRESHOLD,
        surface,
    })
}
