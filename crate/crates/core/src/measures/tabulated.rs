//! Tabulated spectral densities with a positivity-preserving interpolant.
//!
//! Between two positive samples the interpolant is a monotone cubic
//! (Fritsch–Carlson) on `ln J`; any interval touching a zero sample is
//! linear in `J`. The result is never negative.

use std::path::Path;

use super::MeasureError;

#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDensity {
    omega: Vec<f64>,
    value: Vec<f64>,
    /// Slopes of `ln J` at each sample; unused where `J = 0`.
    slope: Vec<f64>,
}

impl TabulatedDensity {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self, MeasureError> {
        if samples.len() < 2 {
            return Err(MeasureError::InvalidParameter(
                "a tabulated density needs at least two samples".into(),
            ));
        }
        for (i, &(w, j)) in samples.iter().enumerate() {
            if !w.is_finite() || !j.is_finite() {
                return Err(MeasureError::InvalidParameter(format!("non-finite sample at row {i}")));
            }
            if w < 0.0 {
                return Err(MeasureError::InvalidParameter(format!("negative energy {w} at row {i}")));
            }
            if j < 0.0 {
                return Err(MeasureError::NegativeDensity { omega: w, value: j });
            }
            if i > 0 && w <= samples[i - 1].0 {
                return Err(MeasureError::InvalidParameter(format!(
                    "energies must be strictly increasing (row {i})"
                )));
            }
        }
        let omega: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let value: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let slope = log_slopes(&omega, &value);
        Ok(Self { omega, value, slope })
    }

    /// Parses two-column text: `ω J(ω)` per line, whitespace or comma
    /// separated, `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, MeasureError> {
        let mut samples = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect();
            if cols.len() != 2 {
                return Err(MeasureError::Table(format!(
                    "line {}: expected two columns, found {}",
                    lineno + 1,
                    cols.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| MeasureError::Table(format!("line {}: {e}", lineno + 1)))
            };
            samples.push((parse(cols[0])?, parse(cols[1])?));
        }
        Self::new(samples)
    }

    pub fn from_file(path: &Path) -> Result<Self, MeasureError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MeasureError::Table(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn values(&self) -> &[f64] {
        &self.value
    }

    pub fn omega_min(&self) -> f64 {
        self.omega[0]
    }

    pub fn omega_max(&self) -> f64 {
        *self.omega.last().unwrap()
    }

    /// Interpolated `J(ω)`; zero outside the sampled range.
    pub fn eval(&self, w: f64) -> f64 {
        let n = self.omega.len();
        if !(w >= self.omega[0] && w <= self.omega[n - 1]) {
            return 0.0;
        }
        let i = match self.omega.partition_point(|&x| x <= w) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let (x0, x1) = (self.omega[i], self.omega[i + 1]);
        let (y0, y1) = (self.value[i], self.value[i + 1]);
        let h = x1 - x0;
        let t = (w - x0) / h;
        if y0 > 0.0 && y1 > 0.0 {
            let (l0, l1) = (y0.ln(), y1.ln());
            let (d0, d1) = (self.slope[i] * h, self.slope[i + 1] * h);
            let t2 = t * t;
            let t3 = t2 * t;
            let l = (2.0 * t3 - 3.0 * t2 + 1.0) * l0
                + (t3 - 2.0 * t2 + t) * d0
                + (-2.0 * t3 + 3.0 * t2) * l1
                + (t3 - t2) * d1;
            l.exp()
        } else {
            y0 + t * (y1 - y0)
        }
    }

    /// Maximal runs of zero samples wider than `min_width`, as `(lo, hi)`.
    pub fn zero_runs(&self, min_width: f64) -> Vec<(f64, f64)> {
        let mut runs = Vec::new();
        let mut i = 0;
        while i < self.value.len() {
            if self.value[i] == 0.0 {
                let start = i;
                while i + 1 < self.value.len() && self.value[i + 1] == 0.0 {
                    i += 1;
                }
                let (lo, hi) = (self.omega[start], self.omega[i]);
                if hi - lo > min_width {
                    runs.push((lo, hi));
                }
            }
            i += 1;
        }
        runs
    }

    /// Restriction of the table to `[lo, hi]`, with interpolated end samples.
    pub fn restrict(&self, lo: f64, hi: f64) -> Result<Self, MeasureError> {
        let mut samples = vec![(lo, self.eval(lo))];
        for (&w, &j) in self.omega.iter().zip(&self.value) {
            if w > lo && w < hi {
                samples.push((w, j));
            }
        }
        samples.push((hi, self.eval(hi)));
        Self::new(samples)
    }
}

/// Fritsch–Carlson slopes of `ln y`; one-sided where a neighbour is zero.
fn log_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let secant = |i: usize| -> Option<f64> {
        if y[i] > 0.0 && y[i + 1] > 0.0 {
            Some((y[i + 1].ln() - y[i].ln()) / (x[i + 1] - x[i]))
        } else {
            None
        }
    };
    let mut d = vec![0.0; n];
    for i in 0..n {
        if y[i] <= 0.0 {
            continue;
        }
        let left = if i > 0 { secant(i - 1) } else { None };
        let right = if i + 1 < n { secant(i) } else { None };
        d[i] = match (left, right) {
            (Some(a), Some(b)) => {
                if a * b <= 0.0 {
                    0.0
                } else {
                    let h0 = x[i] - x[i - 1];
                    let h1 = x[i + 1] - x[i];
                    let w1 = 2.0 * h1 + h0;
                    let w2 = h1 + 2.0 * h0;
                    (w1 + w2) / (w1 / a + w2 / b)
                }
            }
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => 0.0,
        };
    }
    d
}
