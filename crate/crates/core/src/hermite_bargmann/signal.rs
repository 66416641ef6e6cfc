use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

use super::hermite::hermite_eval;
use crate::error::{GaborError, Result};
use crate::quadrature::simpson_weights;

/// Default time window `[-8, 8]`.
pub const DEFAULT_T_MIN: f64 = -8.0;
pub const DEFAULT_DT: f64 = 1.0 / 256.0;
pub const DEFAULT_LEN: usize = 4097;

/// Relative endpoint magnitude above which a signal is considered truncated.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

/// Complex samples on the uniform grid `t_i = t_min + i dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSignal {
    pub t_min: f64,
    pub dt: f64,
    pub samples: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct Row {
    t: f64,
    re: f64,
    im: f64,
}

impl SampledSignal {
    pub fn new(t_min: f64, dt: f64, samples: Vec<Complex64>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite() && t_min.is_finite()) {
            return Err(GaborError::InvalidInput(format!("bad grid t_min={t_min}, dt={dt}")));
        }
        Ok(Self { t_min, dt, samples })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(t_min: f64, dt: f64, len: usize, f: F) -> Result<Self> {
        let samples = (0..len).map(|i| f(t_min + i as f64 * dt)).collect();
        Self::new(t_min, dt, samples)
    }

    /// Samples `f` on the default grid.
    pub fn from_fn_default<F: Fn(f64) -> Complex64>(f: F) -> Self {
        Self::from_fn(DEFAULT_T_MIN, DEFAULT_DT, DEFAULT_LEN, f).expect("default grid is valid")
    }

    /// `H_n` on the default grid.
    pub fn hermite(n: usize) -> Result<Self> {
        hermite_eval(n, 0.0)?;
        Ok(Self::from_fn_default(|t| Complex64::new(hermite_eval(n, t).unwrap(), 0.0)))
    }

    /// A zero signal on the same grid.
    pub fn zeros_like(&self) -> Self {
        Self { t_min: self.t_min, dt: self.dt, samples: vec![Complex64::new(0.0, 0.0); self.len()] }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn t(&self, i: usize) -> f64 {
        self.t_min + i as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.t(i))
    }

    pub fn weights(&self) -> Vec<f64> {
        simpson_weights(self.len(), self.dt)
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.len() == other.len()
            && (self.t_min - other.t_min).abs() <= 1e-12 * self.dt
            && (self.dt - other.dt).abs() <= 1e-15 * self.dt.max(1.0)
    }

    /// `∫ self · conj(other) dt` by composite Simpson.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if !self.same_grid(other) {
            return Err(GaborError::InvalidInput("signals live on different grids".into()));
        }
        let w = self.weights();
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .zip(&w)
            .map(|((a, b), w)| a * b.conj() * *w)
            .sum())
    }

    pub fn norm(&self) -> f64 {
        let w = self.weights();
        self.samples.iter().zip(&w).map(|(a, w)| a.norm_sqr() * w).sum::<f64>().sqrt()
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }

    /// Whether the endpoint magnitudes are negligible relative to the peak.
    pub fn is_effectively_supported(&self) -> bool {
        let peak = self.peak();
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => a.norm().max(b.norm()) <= SUPPORT_THRESHOLD * peak,
            _ => true,
        }
    }

    pub fn axpy(&mut self, a: Complex64, x: &Self) -> Result<()> {
        if !self.same_grid(x) {
            return Err(GaborError::InvalidInput("signals live on different grids".into()));
        }
        for (s, v) in self.samples.iter_mut().zip(&x.samples) {
            *s += a * v;
        }
        Ok(())
    }

    /// Reads a headered `t,re,im` CSV on a uniform grid.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut ts = Vec::new();
        let mut samples = Vec::new();
        for row in rdr.deserialize() {
            let row: Row = row?;
            ts.push(row.t);
            samples.push(Complex64::new(row.re, row.im));
        }
        if ts.len() < 2 {
            return Err(GaborError::InvalidInput("signal needs at least two samples".into()));
        }
        let dt = (ts[ts.len() - 1] - ts[0]) / (ts.len() - 1) as f64;
        for (i, t) in ts.iter().enumerate() {
            let expect = ts[0] + i as f64 * dt;
            if (t - expect).abs() > 1e-9 * dt.abs().max(1e-300) {
                return Err(GaborError::InvalidInput(format!(
                    "non-uniform time grid at row {} (t = {t})",
                    i + 2
                )));
            }
        }
        Self::new(ts[0], dt, samples)
    }

    pub fn read_csv_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    /// Writes `t,re,im` with 17 significant digits.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t", "re", "im"])?;
        for (i, s) in self.samples.iter().enumerate() {
            w.write_record([
                format!("{:.16e}", self.t(i)),
                format!("{:.16e}", s.re),
                format!("{:.16e}", s.im),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_path<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_samples_are_orthonormal() {
        let hs: Vec<_> = (0..=6).map(|k| SampledSignal::hermite(k).unwrap()).collect();
        for j in 0..=6 {
            assert!(hs[j].is_effectively_supported());
            for k in 0..=6 {
                let ip = hs[j].inner(&hs[k]).unwrap();
                let expect = if j == k { 1.0 } else { 0.0 };
                assert!((ip.re - expect).abs() < 1e-10 && ip.im.abs() < 1e-15, "{j},{k}: {ip}");
            }
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let s = SampledSignal::from_fn(-1.0, 0.125, 17, |t| Complex64::new(t.sin() / 3.0, t * 0.1)).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let back = SampledSignal::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.samples, s.samples);
        assert!((back.dt - s.dt).abs() < 1e-15);
    }

    #[test]
    fn non_uniform_csv_is_rejected() {
        let data = "t,re,im\n0,1,0\n0.1,1,0\n0.25,1,0\n";
        assert!(SampledSignal::read_csv(data.as_bytes()).is_err());
    }
}
