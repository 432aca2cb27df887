//! Amplitude holograms that route the projection of an input field onto a
//! target mode into the first diffraction order.

use std::f64::consts::PI;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{parse_two_column, write_two_column};
use crate::modes::Mode;

/// Minimum samples per carrier period.
pub const MIN_SAMPLES_PER_PERIOD: f64 = 8.0;
/// Minimum carrier frequency in units of the mode's RMS bandwidth.
pub const MIN_CARRIER_OVER_BANDWIDTH: f64 = 4.0;
/// Width of the first-order band in units of the carrier.
pub const BAND_FRACTION: f64 = 0.25;

/// Symmetric sampling grid x_j = −L + (j + ½)·pitch, j = 0..n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub half_width: f64,
    pub n_samples: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, n_samples: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() || n_samples < 2 {
            return Err(Error::Parameter(format!(
                "grid needs positive half-width and >= 2 samples (got {half_width}, {n_samples})"
            )));
        }
        Ok(Self {
            half_width,
            n_samples,
        })
    }

    pub fn pitch(&self) -> f64 {
        2.0 * self.half_width / self.n_samples as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + (j as f64 + 0.5) * self.pitch()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_samples).map(|j| self.x(j)).collect()
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.n_samples).map(|j| f(self.x(j))).collect()
    }
}

/// RMS spatial frequency (cycles per length) of a sampled real field.
pub fn rms_bandwidth(samples: &[f64], pitch: f64) -> f64 {
    let power: f64 = samples.iter().map(|v| v * v).sum();
    if power == 0.0 {
        return 0.0;
    }
    let n = samples.len();
    let at = |j: isize| {
        if j < 0 || j as usize >= n {
            0.0
        } else {
            samples[j as usize]
        }
    };
    let grad: f64 = (0..n as isize)
        .map(|j| {
            let d = (at(j + 1) - at(j - 1)) / (2.0 * pitch);
            d * d
        })
        .sum();
    (grad / power).sqrt() / (2.0 * PI)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HologramMask {
    pub samples: Vec<f64>,
    pub grid: GridSpec,
    pub carrier_frequency: f64,
    pub mode_bandwidth: f64,
}

/// Records |r·e^{i2πcx} + m(x)|² with r = max|m|, rescaled to [0, 1].
pub fn synthesize(mode: &Mode, carrier: f64, grid: &GridSpec) -> Result<HologramMask> {
    let (lo, hi) = mode.support();
    let reach = lo.abs().max(hi.abs());
    if grid.half_width < reach * (1.0 - 1e-12) {
        return Err(Error::Parameter(format!(
            "grid half-width {} does not span the mode support ±{reach}",
            grid.half_width
        )));
    }
    let m = grid.sample(|x| mode.amplitude(x));
    synthesize_samples(&m, carrier, grid)
}

/// Same as [`synthesize`] for a mode given by samples on `grid`.
pub fn synthesize_samples(mode: &[f64], carrier: f64, grid: &GridSpec) -> Result<HologramMask> {
    if mode.len() != grid.n_samples {
        return Err(Error::Parameter(format!(
            "{} mode samples on a {}-point grid",
            mode.len(),
            grid.n_samples
        )));
    }
    if !(carrier > 0.0) || !carrier.is_finite() {
        return Err(Error::Parameter(format!("carrier must be positive (got {carrier})")));
    }
    let per_period = 1.0 / (carrier * grid.pitch());
    if per_period < MIN_SAMPLES_PER_PERIOD {
        return Err(Error::Parameter(format!(
            "carrier undersampled: {per_period:.2} samples per period (need {MIN_SAMPLES_PER_PERIOD})"
        )));
    }
    let bandwidth = rms_bandwidth(mode, grid.pitch());
    if carrier < MIN_CARRIER_OVER_BANDWIDTH * bandwidth {
        return Err(Error::Parameter(format!(
            "carrier {carrier} is below {MIN_CARRIER_OVER_BANDWIDTH}× the mode bandwidth {bandwidth}"
        )));
    }
    let r = mode.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if r == 0.0 {
        return Ok(HologramMask {
            samples: vec![1.0; grid.n_samples],
            grid: *grid,
            carrier_frequency: carrier,
            mode_bandwidth: 0.0,
        });
    }
    let raw: Vec<f64> = mode
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let phase = 2.0 * PI * carrier * grid.x(j);
            r * r + m * m + 2.0 * r * m * phase.cos()
        })
        .collect();
    let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let max = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let samples = if max > min {
        raw.iter().map(|t| ((t - min) / (max - min)).clamp(0.0, 1.0)).collect()
    } else {
        vec![1.0; grid.n_samples]
    };
    Ok(HologramMask {
        samples,
        grid: *grid,
        carrier_frequency: carrier,
        mode_bandwidth: bandwidth,
    })
}

impl HologramMask {
    /// Far-field amplitude of `input · mask` at spatial frequency `f`.
    fn far_field(&self, input: &[f64], f: f64) -> Complex64 {
        let pitch = self.grid.pitch();
        input
            .iter()
            .zip(&self.samples)
            .enumerate()
            .map(|(j, (u, t))| Complex64::from_polar(u * t * pitch, -2.0 * PI * f * self.grid.x(j)))
            .sum()
    }

    /// Intensity diffracted along the reference direction for a coherent
    /// input field sampled on the mask grid; ∝ |⟨mode|input⟩|².
    pub fn first_order_readout(&self, input: &[f64]) -> Result<f64> {
        if input.len() != self.samples.len() {
            return Err(Error::Parameter(format!(
                "{} input samples on a {}-sample mask",
                input.len(),
                self.samples.len()
            )));
        }
        let band_low = self.carrier_frequency * (1.0 - 0.5 * BAND_FRACTION);
        let zero_order = 2.0 * (self.mode_bandwidth + rms_bandwidth(input, self.grid.pitch()));
        if band_low <= zero_order {
            return Err(Error::Parameter(format!(
                "first-order band starts at {band_low} but the zero order reaches {zero_order}"
            )));
        }
        Ok(self.far_field(input, self.carrier_frequency).norm_sqr())
    }

    /// Readout of mutually incoherent inputs: the intensities add.
    pub fn incoherent_readout(&self, inputs: &[Vec<f64>]) -> Result<f64> {
        inputs.iter().map(|u| self.first_order_readout(u)).sum()
    }

    /// Power spectrum of the mask as (frequency, |FFT|²) pairs, in FFT order.
    pub fn spectrum(&self) -> Vec<(f64, f64)> {
        let n = self.samples.len();
        let mean = self.samples.iter().sum::<f64>() / n as f64;
        let mut buf: Vec<Complex64> = self.samples.iter().map(|t| Complex64::new(t - mean, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let df = 1.0 / (n as f64 * self.grid.pitch());
        buf.iter()
            .enumerate()
            .map(|(k, c)| {
                let k = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
                (k * df, c.norm_sqr())
            })
            .collect()
    }

    /// Power in the band of width `BAND_FRACTION·carrier` around ±carrier,
    /// over the total AC power of the mask.
    pub fn sideband_fraction(&self) -> f64 {
        let spec = self.spectrum();
        let half = 0.5 * BAND_FRACTION * self.carrier_frequency;
        let total: f64 = spec.iter().map(|(_, p)| p).sum();
        if total == 0.0 {
            return 0.0;
        }
        let band: f64 = spec
            .iter()
            .filter(|(f, _)| (f.abs() - self.carrier_frequency).abs() <= half)
            .map(|(_, p)| p)
            .sum();
        band / total
    }

    pub fn to_rows(&self) -> Vec<(f64, f64)> {
        self.grid.points().into_iter().zip(self.samples.iter().copied()).collect()
    }

    pub fn write_text(&self, path: &Path) -> Result<()> {
        let comment = format!(
            "hologram mask\ncarrier_frequency {}\nmode_bandwidth {}\ngrid_half_width {}\nn_samples {}",
            self.carrier_frequency, self.mode_bandwidth, self.grid.half_width, self.grid.n_samples
        );
        write_two_column(path, &self.to_rows(), Some(&comment))
    }

    /// Reads a mask written by [`HologramMask::write_text`].
    pub fn read_text(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse_text(&text)
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let header = |key: &str| {
            text.lines()
                .filter_map(|l| l.strip_prefix("# "))
                .find_map(|l| l.strip_prefix(key))
                .and_then(|v| v.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::Data(format!("mask header lacks '{key}'")))
        };
        let rows = parse_two_column(text)?;
        let grid = grid_from_rows(&rows)?;
        let samples: Vec<f64> = rows.iter().map(|r| r.1).collect();
        if samples.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(Error::Data("mask transmission outside [0, 1]".into()));
        }
        Ok(Self {
            samples,
            grid,
            carrier_frequency: header("carrier_frequency ")?,
            mode_bandwidth: header("mode_bandwidth ")?,
        })
    }

    /// 8-bit binary graymap with the profile repeated on `rows` lines.
    pub fn to_pgm(&self, rows: usize) -> Vec<u8> {
        let rows = rows.max(1);
        let mut out = format!("P5\n{} {}\n255\n", self.samples.len(), rows).into_bytes();
        let line: Vec<u8> = self.samples.iter().map(|t| (t * 255.0).round() as u8).collect();
        for _ in 0..rows {
            out.extend_from_slice(&line);
        }
        out
    }

    pub fn write_pgm(&self, path: &Path, rows: usize) -> Result<()> {
        let mut file = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        file.write_all(&self.to_pgm(rows))
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

/// Reads field samples written as `x value` lines and checks they lie on `grid`.
pub fn field_on_grid(text: &str, grid: &GridSpec) -> Result<Vec<f64>> {
    let rows = parse_two_column(text)?;
    if rows.len() != grid.n_samples {
        return Err(Error::Data(format!(
            "{} samples for a {}-point grid",
            rows.len(),
            grid.n_samples
        )));
    }
    let tol = 1e-6 * grid.pitch();
    for (j, (x, _)) in rows.iter().enumerate() {
        if (x - grid.x(j)).abs() > tol {
            return Err(Error::Data(format!("sample {j} at x = {x} is off the grid point {}", grid.x(j))));
        }
    }
    Ok(rows.into_iter().map(|(_, v)| v).collect())
}

/// Infers the grid from sample abscissae written by [`HologramMask::write_text`].
pub fn grid_from_rows(rows: &[(f64, f64)]) -> Result<GridSpec> {
    if rows.len() < 2 {
        return Err(Error::Data("need at least two samples".into()));
    }
    let pitch = (rows[rows.len() - 1].0 - rows[0].0) / (rows.len() - 1) as f64;
    let grid = GridSpec::new(0.5 * pitch * rows.len() as f64, rows.len())?;
    for (j, (x, _)) in rows.iter().enumerate() {
        if (x - grid.x(j)).abs() > 1e-6 * pitch {
            return Err(Error::Data("samples are not on a symmetric uniform grid".into()));
        }
    }
    Ok(grid)
}
