//! Planar lattices `Λ = A Z²` in the time-frequency plane.
//!
//! A point `(x, ξ)` is identified with the complex number `x + iξ`, so the
//! columns of the generator matrix are the periods `ω₁`, `ω₂`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GaborError, Result};

/// Hard cap on the number of points a single enumeration may return.
pub const DEFAULT_ENUMERATION_CAP: usize = 4_000_000;

/// Half-width of the window of unit squares scanned by [`Lattice2D::packing_count`].
pub const PACKING_WINDOW: i64 = 10;

/// A full-rank lattice in `R² ≅ C`, normalized so that `Im(ω₂/ω₁) > 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LatticeJson", into = "LatticeJson")]
pub struct Lattice2D {
    /// Row-major generator; columns are the basis vectors.
    a: [[f64; 2]; 2],
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    #[serde(rename = "A")]
    a: [[f64; 2]; 2],
}

impl TryFrom<LatticeJson> for Lattice2D {
    type Error = GaborError;
    fn try_from(value: LatticeJson) -> Result<Self> {
        Lattice2D::from_generators(value.a)
    }
}

impl From<Lattice2D> for LatticeJson {
    fn from(l: Lattice2D) -> Self {
        LatticeJson { a: l.a }
    }
}

fn det2(a: &[[f64; 2]; 2]) -> f64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Largest singular value of a 2×2 real matrix.
fn op_norm2(m: &[[f64; 2]; 2]) -> f64 {
    let p = m[0][0] * m[0][0] + m[1][0] * m[1][0];
    let q = m[0][1] * m[0][1] + m[1][1] * m[1][1];
    let r = m[0][0] * m[0][1] + m[1][0] * m[1][1];
    let tr = p + q;
    let disc = ((p - q) * (p - q) + 4.0 * r * r).sqrt();
    (0.5 * (tr + disc)).sqrt()
}

impl Lattice2D {
    /// Builds the lattice generated by the columns of `a` (row-major).
    ///
    /// If `det A < 0` the second column is negated so that the periods are
    /// positively oriented; the point set is unchanged.
    pub fn from_generators(a: [[f64; 2]; 2]) -> Result<Self> {
        if a.iter().flatten().any(|v| !v.is_finite()) {
            return Err(GaborError::InvalidInput(
                "generator entries must be finite".into(),
            ));
        }
        let det = det2(&a);
        let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        if det == 0.0 || det.abs() <= 1e-14 * scale * scale {
            return Err(GaborError::SingularLattice { det });
        }
        let mut a = a;
        if det < 0.0 {
            a[0][1] = -a[0][1];
            a[1][1] = -a[1][1];
        }
        Ok(Self { a })
    }

    /// `aZ × bZ`.
    pub fn rect(a: f64, b: f64) -> Result<Self> {
        Self::from_generators([[a, 0.0], [0.0, b]])
    }

    /// `√s · Z²`, the square lattice of area `s`.
    pub fn square(s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(GaborError::InvalidInput(format!(
                "square lattice area must be positive, got {s}"
            )));
        }
        let r = s.sqrt();
        Self::rect(r, r)
    }

    /// `q Λ`.
    pub fn scaled(&self, q: f64) -> Result<Self> {
        let a = self.a;
        Self::from_generators([[q * a[0][0], q * a[0][1]], [q * a[1][0], q * a[1][1]]])
    }

    pub fn generator(&self) -> [[f64; 2]; 2] {
        self.a
    }

    pub fn omega1(&self) -> Complex64 {
        Complex64::new(self.a[0][0], self.a[1][0])
    }

    pub fn omega2(&self) -> Complex64 {
        Complex64::new(self.a[0][1], self.a[1][1])
    }

    /// `s(Λ) = |det A|`.
    pub fn area(&self) -> f64 {
        det2(&self.a).abs()
    }

    pub fn point(&self, m1: i64, m2: i64) -> Complex64 {
        self.omega1() * m1 as f64 + self.omega2() * m2 as f64
    }

    fn inverse(&self) -> [[f64; 2]; 2] {
        let a = self.a;
        let d = det2(&a);
        [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]
    }

    /// Real coordinates `c` with `A c = z`.
    pub fn coordinates(&self, z: Complex64) -> (f64, f64) {
        let inv = self.inverse();
        (
            inv[0][0] * z.re + inv[0][1] * z.im,
            inv[1][0] * z.re + inv[1][1] * z.im,
        )
    }

    /// The adjoint lattice `Λ° = J (Aᵀ)⁻¹ Z²` with `J = [[0,1],[-1,0]]`.
    pub fn adjoint(&self) -> Self {
        let inv = self.inverse();
        // (A^T)^{-1} = (A^{-1})^T
        let it = [[inv[0][0], inv[1][0]], [inv[0][1], inv[1][1]]];
        let g = [[it[1][0], it[1][1]], [-it[0][0], -it[0][1]]];
        Self::from_generators(g).expect("adjoint of a valid lattice is valid")
    }

    /// Complex conjugate lattice `Λ̄ = { λ̄ : λ ∈ Λ }`.
    pub fn conjugate(&self) -> Self {
        let a = self.a;
        Self::from_generators([[a[0][0], a[0][1]], [-a[1][0], -a[1][1]]])
            .expect("conjugate of a valid lattice is valid")
    }

    /// All lattice points with `|λ| ≤ radius`, ordered lexicographically by
    /// their integer coordinates `(m₁, m₂)`.
    pub fn enumerate(&self, radius: f64) -> Result<Vec<Complex64>> {
        Ok(self
            .enumerate_indexed_with_cap(radius, DEFAULT_ENUMERATION_CAP)?
            .into_iter()
            .map(|(_, _, z)| z)
            .collect())
    }

    pub fn enumerate_indexed(&self, radius: f64) -> Result<Vec<(i64, i64, Complex64)>> {
        self.enumerate_indexed_with_cap(radius, DEFAULT_ENUMERATION_CAP)
    }

    pub fn enumerate_indexed_with_cap(
        &self,
        radius: f64,
        cap: usize,
    ) -> Result<Vec<(i64, i64, Complex64)>> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(GaborError::InvalidInput(format!(
                "enumeration radius must be finite and nonnegative, got {radius}"
            )));
        }
        let expected = std::f64::consts::PI * radius * radius / self.area();
        let half = (radius * op_norm2(&self.inverse())).ceil() + 1.0;
        let box_count = (2.0 * half + 1.0).powi(2);
        if expected > cap as f64 || box_count > 64.0 * cap as f64 {
            return Err(GaborError::Resource(format!(
                "enumerating radius {radius} would produce ~{expected:.0} points (cap {cap})"
            )));
        }
        let half = half as i64;
        let (w1, w2) = (self.omega1(), self.omega2());
        // Points exactly on the circle must not be lost to rounding.
        let r2 = radius * radius * (1.0 + 1e-12);
        let mut out = Vec::new();
        for m1 in -half..=half {
            for m2 in -half..=half {
                let z = w1 * m1 as f64 + w2 * m2 as f64;
                if z.norm_sqr() <= r2 {
                    out.push((m1, m2, z));
                }
            }
        }
        if out.len() > cap {
            return Err(GaborError::Resource(format!(
                "{} points exceed enumeration cap {cap}",
                out.len()
            )));
        }
        Ok(out)
    }

    /// `max_k card(Λ ∩ (k + [0,1)²))` over the window `k ∈ [-K, K]²`.
    ///
    /// This is the counting function of the Bessel bound with the absolute
    /// constant set to one.
    pub fn packing_count(&self) -> usize {
        let k = PACKING_WINDOW;
        let side = (2 * k + 1) as usize;
        let mut counts = vec![0usize; side * side];
        let reach = ((k + 1) as f64) * std::f64::consts::SQRT_2 + 1.0;
        let pts = self
            .enumerate_indexed_with_cap(reach, usize::MAX / 2)
            .expect("packing window enumeration is bounded");
        for (_, _, z) in pts {
            // Nudge so points sitting on an integer grid line are binned
            // into the square they close.
            let bx = (z.re + 1e-12).floor() as i64;
            let by = (z.im + 1e-12).floor() as i64;
            if (-k..=k).contains(&bx) && (-k..=k).contains(&by) {
                counts[((bx + k) as usize) * side + (by + k) as usize] += 1;
            }
        }
        counts.into_iter().max().unwrap_or(0).max(1)
    }

    /// Splits `z = z₀ + m₁ω₁ + m₂ω₂` with `z₀` in the half-open period
    /// parallelogram `A [0,1)²`.
    pub fn reduce_to_fundamental(&self, z: Complex64) -> (Complex64, i64, i64) {
        let (c1, c2) = self.coordinates(z);
        let snap = |c: f64| {
            let r = c.round();
            if (c - r).abs() <= 1e-12 * r.abs().max(1.0) {
                r
            } else {
                c
            }
        };
        let m1 = snap(c1).floor() as i64;
        let m2 = snap(c2).floor() as i64;
        let z0 = z - self.point(m1, m2);
        (z0, m1, m2)
    }

    /// Lagrange–Gauss reduced basis `(u, v)` of the same lattice together with
    /// the integer matrix `[[a, b], [c, d]]` such that `u = a ω₁ + b ω₂`,
    /// `v = c ω₁ + d ω₂`. The result has `|u| ≤ |v|`, `|Re(v/u)| ≤ 1/2` and
    /// `Im(v/u) > 0`.
    pub fn reduced_basis(&self) -> ReducedBasis {
        let mut u = self.omega1();
        let mut v = self.omega2();
        let mut m = [[1i64, 0], [0, 1]];
        for _ in 0..200 {
            let k = (v / u).re.round();
            if k != 0.0 {
                v -= u * k;
                let k = k as i64;
                m[1][0] -= k * m[0][0];
                m[1][1] -= k * m[0][1];
            }
            if v.norm_sqr() < u.norm_sqr() * (1.0 - 1e-14) {
                // (u, v) -> (v, -u) keeps the orientation.
                let (nu, nv) = (v, -u);
                u = nu;
                v = nv;
                m = [[m[1][0], m[1][1]], [-m[0][0], -m[0][1]]];
            } else {
                break;
            }
        }
        ReducedBasis { u, v, transform: m }
    }

    /// Length of a shortest nonzero lattice vector.
    pub fn shortest_vector(&self) -> f64 {
        self.reduced_basis().u.norm()
    }
}

/// A reduced basis together with its relation to the stored periods.
#[derive(Clone, Copy, Debug)]
pub struct ReducedBasis {
    pub u: Complex64,
    pub v: Complex64,
    pub transform: [[i64; 2]; 2],
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn identity_lattice() {
        let l = Lattice2D::from_generators([[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(l.omega1(), Complex64::new(1.0, 0.0));
        assert_eq!(l.omega2(), Complex64::new(0.0, 1.0));
        assert_eq!(l.area(), 1.0);
    }

    #[test]
    fn diagonal_area() {
        let l = Lattice2D::rect(0.5, 3.0).unwrap();
        assert!((l.area() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn negative_determinant_is_reoriented() {
        let l = Lattice2D::from_generators([[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!((l.omega2() / l.omega1()).im > 0.0);
        assert_eq!(l.area(), 1.0);
        let a = l.omega1().conj() * l.omega2();
        assert!((a.im - l.area()).abs() < 1e-15);
    }

    #[test]
    fn singular_is_rejected() {
        assert!(matches!(
            Lattice2D::from_generators([[1.0, 2.0], [2.0, 4.0]]),
            Err(GaborError::SingularLattice { .. })
        ));
    }

    #[test]
    fn adjoint_of_rectangular() {
        let l = Lattice2D::rect(0.5, 0.25).unwrap();
        let adj = l.adjoint();
        let pts = adj.enumerate(4.01).unwrap();
        // (1/b) Z × (1/a) Z = 4Z × 2Z
        assert!(pts.iter().any(|z| close(*z, Complex64::new(4.0, 0.0), 1e-12)));
        assert!(pts.iter().any(|z| close(*z, Complex64::new(0.0, 2.0), 1e-12)));
        assert!((adj.area() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn enumerate_counts() {
        let z2 = Lattice2D::square(1.0).unwrap();
        assert_eq!(z2.enumerate(1.5).unwrap().len(), 9);
        assert_eq!(z2.enumerate(0.0).unwrap(), vec![Complex64::new(0.0, 0.0)]);
        // brute-force scan |m|,|n| ≤ 3
        let mut brute = 0;
        for m in -3i32..=3 {
            for n in -3i32..=3 {
                if ((m * m + n * n) as f64) <= 6.25 {
                    brute += 1;
                }
            }
        }
        assert_eq!(brute, 21);
        assert_eq!(z2.enumerate(2.5).unwrap().len(), brute);
    }

    #[test]
    fn enumerate_order_is_lexicographic() {
        let l = Lattice2D::from_generators([[1.0, 0.3], [0.1, 0.9]]).unwrap();
        let pts = l.enumerate_indexed(3.0).unwrap();
        for w in pts.windows(2) {
            assert!((w[0].0, w[0].1) < (w[1].0, w[1].1));
        }
    }

    #[test]
    fn enumerate_cap() {
        let l = Lattice2D::square(1.0).unwrap();
        assert!(matches!(
            l.enumerate_indexed_with_cap(100.0, 1000),
            Err(GaborError::Resource(_))
        ));
    }

    #[test]
    fn packing_counts() {
        assert_eq!(Lattice2D::square(1.0).unwrap().packing_count(), 1);
        assert_eq!(Lattice2D::rect(0.5, 0.5).unwrap().packing_count(), 4);
        let theta: f64 = 0.7;
        let (c, s) = (theta.cos(), theta.sin());
        let rot = Lattice2D::from_generators([[c, -s], [s, c]]).unwrap();
        assert!(rot.packing_count() >= 1);
    }

    #[test]
    fn reduce_examples() {
        let z2 = Lattice2D::square(1.0).unwrap();
        let (z0, m1, m2) = z2.reduce_to_fundamental(Complex64::new(2.5, 3.5));
        assert!(close(z0, Complex64::new(0.5, 0.5), 1e-15));
        assert_eq!((m1, m2), (2, 3));
        let l = Lattice2D::from_generators([[1.1, 0.4], [0.2, 0.8]]).unwrap();
        let (z0, m1, m2) = l.reduce_to_fundamental(l.omega1());
        assert!(z0.norm() < 1e-15);
        assert_eq!((m1, m2), (1, 0));
        let inside = l.omega1() * 0.3 + l.omega2() * 0.6;
        let (z0, m1, m2) = l.reduce_to_fundamental(inside);
        assert_eq!((m1, m2), (0, 0));
        assert!(close(z0, inside, 1e-15));
    }

    #[test]
    fn reduced_basis_is_reduced() {
        let l = Lattice2D::from_generators([[1.0, 7.3], [0.0, 0.2]]).unwrap();
        let rb = l.reduced_basis();
        let tau = rb.v / rb.u;
        assert!(tau.im > 0.0);
        assert!(tau.re.abs() <= 0.5 + 1e-12);
        assert!(tau.norm() >= 1.0 - 1e-12);
        let t = rb.transform;
        assert!(close(rb.u, l.omega1() * t[0][0] as f64 + l.omega2() * t[0][1] as f64, 1e-12));
        assert!(close(rb.v, l.omega1() * t[1][0] as f64 + l.omega2() * t[1][1] as f64, 1e-12));
        assert_eq!(t[0][0] * t[1][1] - t[0][1] * t[1][0], 1);
    }

    #[test]
    fn json_shape() {
        let l = Lattice2D::rect(2.0, 0.5).unwrap();
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, r#"{"A":[[2.0,0.0],[0.0,0.5]]}"#);
        let back: Lattice2D = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
        assert!(serde_json::from_str::<Lattice2D>(r#"{"A":[[1,2],[2,4]]}"#).is_err());
    }

    fn arb_lattice() -> impl Strategy<Value = Lattice2D> {
        (0.3f64..2.0, -1.0f64..1.0, -1.0f64..1.0, 0.3f64..2.0)
            .prop_filter_map("singular", |(a, b, c, d)| {
                Lattice2D::from_generators([[a, b], [c, d]]).ok()
                    .filter(|l| l.area() > 0.05)
            })
    }

    proptest! {
        #[test]
        fn area_is_abs_det(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, d in -2.0f64..2.0) {
            let det: f64 = a * d - b * c;
            prop_assume!(det.abs() > 1e-3);
            let l = Lattice2D::from_generators([[a, b], [c, d]]).unwrap();
            prop_assert!((l.area() - det.abs()).abs() <= 1e-15 * (1.0 + det.abs()) * 4.0);
            prop_assert!((l.omega2() / l.omega1()).im > 0.0);
            prop_assert!(((l.omega1().conj() * l.omega2()).im - l.area()).abs() < 1e-12);
        }

        #[test]
        fn adjoint_is_involution(l in arb_lattice()) {
            let back = l.adjoint().adjoint();
            prop_assert!((l.area() * l.adjoint().area() - 1.0).abs() < 1e-12);
            let p = l.enumerate(5.0).unwrap();
            let q = back.enumerate(5.0).unwrap();
            prop_assert_eq!(p.len(), q.len());
            for z in &p {
                prop_assert!(q.iter().any(|w| (w - z).norm() < 1e-12));
            }
        }

        #[test]
        fn enumeration_is_monotone(l in arb_lattice(), r1 in 0.0f64..3.0, dr in 0.0f64..2.0) {
            let small = l.enumerate(r1).unwrap();
            let big = l.enumerate(r1 + dr).unwrap();
            for z in &small {
                prop_assert!(big.contains(z));
            }
        }

        #[test]
        fn reduction_round_trips(l in arb_lattice(), x in -20.0f64..20.0, y in -20.0f64..20.0) {
            let z = Complex64::new(x, y);
            let (z0, m1, m2) = l.reduce_to_fundamental(z);
            let (c1, c2) = l.coordinates(z0);
            prop_assert!((-1e-12..1.0).contains(&c1) && (-1e-12..1.0).contains(&c2));
            let back = z0 + l.point(m1, m2);
            prop_assert!((back - z).norm() <= 1e-12 * z.norm().max(1.0));
        }
    }
}
