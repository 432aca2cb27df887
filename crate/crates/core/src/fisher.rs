//! Quantum and classical Fisher information for the separation δ of two
//! equally bright incoherent sources at ±δ/2.
//!
//! All informations are per detected photon and taken with respect to δ
//! (not the half-separation), so the quantum value is ∫[ψ′(x)]² dx.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{find_root_monotone, integrate, integrate_with_points, QuadratureSpec};
use crate::psf::{PsfKind, PsfModel};

/// Densities below this are treated as empty when dividing by ϱ.
pub const DENSITY_FLOOR: f64 = 1e-300;

/// Minimum fraction of ϱ_δ that a pixel grid must capture.
pub const MIN_GRID_COVERAGE: f64 = 0.999;

/// Quantum Fisher information per photon, ⟨ψ|P²|ψ⟩ = ∫[ψ′]².
pub fn quantum_fisher(psf: &PsfModel) -> Result<f64> {
    quantum_fisher_with(psf, &QuadratureSpec::default())
}

pub fn quantum_fisher_with(psf: &PsfModel, spec: &QuadratureSpec) -> Result<f64> {
    match psf.band_limit() {
        Some(k_max) => {
            // ψ̂(k) = √w on |k| < k_max; ∫ψ′² = (1/2π)∫ k²|ψ̂|² dk.
            let w = psf.width();
            Ok(integrate(|k| w * k * k, -k_max, k_max, spec)? / (2.0 * PI))
        }
        None => integrate_with_points(|x| psf.derivative(x).powi(2), &psf.quadrature_points(), spec),
    }
}

/// Quantum Cramér-Rao bound on the variance of δ̂ for `n_photons` photons.
pub fn qcrlb(psf: &PsfModel, n_photons: u64) -> Result<f64> {
    if n_photons == 0 {
        return Err(Error::Parameter("qCRLB needs at least one photon".into()));
    }
    Ok(1.0 / (n_photons as f64 * quantum_fisher(psf)?))
}

fn shifted_points(psf: &PsfModel, half: f64) -> Vec<f64> {
    let base = psf.quadrature_points();
    let mut pts: Vec<f64> = base
        .iter()
        .flat_map(|p| [p - half, p + half])
        .chain([-half, 0.0, half])
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Classical Fisher information of direct intensity detection,
/// ∫ (∂ϱ_δ/∂δ)² / ϱ_δ dx with ϱ_δ(x) = ½[I(x − δ/2) + I(x + δ/2)].
pub fn classical_fisher_exact(psf: &PsfModel, delta: f64) -> Result<f64> {
    classical_fisher_exact_with(psf, delta, &QuadratureSpec::default())
}

pub fn classical_fisher_exact_with(psf: &PsfModel, delta: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::Parameter(format!("separation must be >= 0 (got {delta})")));
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    let half = 0.5 * delta;
    let integrand = |x: f64| {
        let rho = 0.5 * (psf.intensity(x - half) + psf.intensity(x + half));
        if rho < DENSITY_FLOOR {
            return 0.0;
        }
        let drho = 0.25 * (psf.intensity_derivative(x + half) - psf.intensity_derivative(x - half));
        drho * drho / rho
    };
    integrate_with_points(integrand, &shifted_points(psf, half), spec)
}

/// Small-separation coefficient c with F_cl(δ) ≈ c·δ².
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallDeltaCoefficient {
    pub value: f64,
    /// Set when ∫ I″²/I grows without bound as neighbourhoods of the zeros
    /// of I are shrunk; `value` is then the truncated-domain estimate.
    pub divergent: bool,
}

/// c = (1/16) ∫ [I″(x)]² / I(x) dx.
pub fn classical_fisher_smalld(psf: &PsfModel) -> Result<SmallDeltaCoefficient> {
    let spec = QuadratureSpec::default();
    let integrand = |x: f64| {
        let i = psf.intensity(x);
        if i < DENSITY_FLOOR {
            return 0.0;
        }
        psf.intensity_second_derivative(x).powi(2) / i
    };
    let zeros = amplitude_zeros(psf)?;
    let points = psf.quadrature_points();
    if zeros.is_empty() {
        let value = integrate_with_points(integrand, &points, &spec)?;
        return Ok(SmallDeltaCoefficient {
            value: value / 16.0,
            divergent: false,
        });
    }

    let width = psf.width();
    let mut values = Vec::new();
    for eps in [1e-2, 1e-3, 1e-4].map(|e| e * width) {
        let mut total = 0.0;
        for (a, b) in excluded_intervals(&points, &zeros, eps) {
            total += integrate(integrand, a, b, &spec)?;
        }
        values.push(total / 16.0);
    }
    let (v1, v2, v3) = (values[0], values[1], values[2]);
    let divergent = v3 - v2 > (1e-6 * v3.abs()).max(v2 - v1);
    Ok(SmallDeltaCoefficient {
        value: v3,
        divergent,
    })
}

/// Zeros of ψ on its support: sign changes plus grid points where the
/// amplitude is negligible (including the support edges).
fn amplitude_zeros(psf: &PsfModel) -> Result<Vec<f64>> {
    let (lo, hi) = psf.support();
    let step = psf.width() / 64.0;
    let n = ((hi - lo) / step).ceil() as usize;
    let negligible = 1e-12 * psf.amplitude(0.5 * (lo + hi)).abs().max(psf.width().sqrt().recip());
    let mut zeros = Vec::new();
    let mut prev_x = lo;
    let mut prev = psf.amplitude(lo);
    if prev.abs() <= negligible {
        zeros.push(lo);
    }
    for j in 1..=n {
        let x = (lo + j as f64 * step).min(hi);
        let v = psf.amplitude(x);
        if v.abs() <= negligible {
            zeros.push(x);
        } else if prev.abs() > negligible && prev.signum() != v.signum() {
            zeros.push(find_root_monotone(|t| psf.amplitude(t), prev_x, x, 1e-14 * psf.width())?);
        }
        prev_x = x;
        prev = v;
    }
    zeros.sort_by(f64::total_cmp);
    zeros.dedup_by(|a, b| (*a - *b).abs() < 0.5 * step);
    Ok(zeros)
}

/// Splits the span of `points` into intervals avoiding `zeros ± eps`,
/// keeping the original breakpoints.
fn excluded_intervals(points: &[f64], zeros: &[f64], eps: f64) -> Vec<(f64, f64)> {
    let lo = points[0];
    let hi = points[points.len() - 1];
    let mut cuts: Vec<f64> = points.to_vec();
    for &z in zeros {
        cuts.push((z - eps).max(lo));
        cuts.push((z + eps).min(hi));
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .map(|w| (w[0], w[1]))
        .filter(|(a, b)| {
            let mid = 0.5 * (a + b);
            b > a && zeros.iter().all(|z| (mid - z).abs() >= eps)
        })
        .collect()
}

/// Pixel edges of `n_pixels` pixels of width `pixel_width` centred on 0.
pub fn centered_edges(pixel_width: f64, n_pixels: usize) -> Vec<f64> {
    let start = -0.5 * pixel_width * n_pixels as f64;
    (0..=n_pixels).map(|i| start + i as f64 * pixel_width).collect()
}

/// Mass of I on `[a, b]`, taken from whichever tail keeps precision.
fn interval_mass(psf: &PsfModel, a: f64, b: f64) -> f64 {
    if psf.is_symmetric() && a > 0.0 {
        psf.cdf(-a) - psf.cdf(-b)
    } else {
        psf.cdf(b) - psf.cdf(a)
    }
}

/// Pixel probabilities q_i = ∫_pixel ϱ_δ and their δ-derivatives.
pub fn pixel_probabilities(psf: &PsfModel, delta: f64, edges: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let half = 0.5 * delta;
    let n = edges.len().saturating_sub(1);
    let mut q = Vec::with_capacity(n);
    let mut dq = Vec::with_capacity(n);
    let mut i_minus = psf.intensity(edges[0] - half);
    let mut i_plus = psf.intensity(edges[0] + half);
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mass = 0.5 * (interval_mass(psf, a - half, b - half) + interval_mass(psf, a + half, b + half));
        let next_minus = psf.intensity(b - half);
        let next_plus = psf.intensity(b + half);
        // ∂/∂δ of ½[F(b−δ/2) − F(a−δ/2) + F(b+δ/2) − F(a+δ/2)].
        let deriv = 0.25 * ((next_plus - i_plus) - (next_minus - i_minus));
        q.push(mass.max(0.0));
        dq.push(deriv);
        i_minus = next_minus;
        i_plus = next_plus;
    }
    (q, dq)
}

/// Only ϱ_δ's pixel probabilities, for likelihood evaluation.
pub fn pixel_masses(psf: &PsfModel, delta: f64, edges: &[f64]) -> Vec<f64> {
    let all: Vec<usize> = (0..edges.len().saturating_sub(1)).collect();
    pixel_masses_subset(psf, delta, edges, &all)
}

/// ϱ_δ's probability of the pixels listed in `pixels` (increasing indices).
///
/// Each shifted edge needs a single CDF call, shared by adjacent pixels; for
/// symmetric PSFs the smaller tail is used so masses far from the axis keep
/// their precision.
pub fn pixel_masses_subset(psf: &PsfModel, delta: f64, edges: &[f64], pixels: &[usize]) -> Vec<f64> {
    let half = 0.5 * delta;
    let symmetric = psf.is_symmetric();
    let tail = |x: f64| {
        if symmetric && x > 0.0 {
            psf.cdf(-x)
        } else {
            psf.cdf(x)
        }
    };
    let edge_tails = |e: f64| (tail(e - half), tail(e + half));
    let mut cache: Option<(usize, (f64, f64))> = None;
    pixels
        .iter()
        .map(|&i| {
            let left = match cache {
                Some((j, t)) if j == i => t,
                _ => edge_tails(edges[i]),
            };
            let right = edge_tails(edges[i + 1]);
            cache = Some((i + 1, right));
            let (a, b) = (edges[i], edges[i + 1]);
            let m = tail_mass(symmetric, left.0, right.0, a - half, b - half)
                + tail_mass(symmetric, left.1, right.1, a + half, b + half);
            (0.5 * m).max(0.0)
        })
        .collect()
}

/// Mass on [a, b] from the tail values stored by [`pixel_masses_subset`].
fn tail_mass(symmetric: bool, ta: f64, tb: f64, a: f64, b: f64) -> f64 {
    if !symmetric || b <= 0.0 {
        tb - ta
    } else if a > 0.0 {
        ta - tb
    } else {
        1.0 - ta - tb
    }
}

/// Total probability of ϱ_δ on [lo, hi].
pub fn grid_mass(psf: &PsfModel, delta: f64, lo: f64, hi: f64) -> f64 {
    pixel_masses_subset(psf, delta, &[lo, hi], &[0])[0]
}

pub(crate) fn check_coverage(q: &[f64]) -> Result<f64> {
    let coverage: f64 = q.iter().sum();
    if coverage < MIN_GRID_COVERAGE {
        return Err(Error::Parameter(format!(
            "pixel grid captures only {:.4}% of the image (need {}%)",
            100.0 * coverage,
            100.0 * MIN_GRID_COVERAGE
        )));
    }
    Ok(coverage)
}

/// Classical Fisher information of a pixelated detector with
/// `n_pixels` pixels of width `pixel_width` centred on the optical axis.
pub fn pixelated_classical_fisher(
    psf: &PsfModel,
    delta: f64,
    pixel_width: f64,
    n_pixels: usize,
) -> Result<f64> {
    if !(pixel_width > 0.0) || n_pixels == 0 {
        return Err(Error::Parameter("pixel grid must be non-empty".into()));
    }
    pixelated_classical_fisher_on(psf, delta, &centered_edges(pixel_width, n_pixels))
}

pub fn pixelated_classical_fisher_on(psf: &PsfModel, delta: f64, edges: &[f64]) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(Error::Parameter(format!("separation must be >= 0 (got {delta})")));
    }
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Parameter("pixel edges must be strictly increasing".into()));
    }
    let (q, dq) = pixel_probabilities(psf, delta, edges);
    check_coverage(&q)?;
    Ok(q.iter()
        .zip(&dq)
        .filter(|(q, _)| **q > DENSITY_FLOOR)
        .map(|(q, d)| d * d / q)
        .sum())
}

/// Summary of the information-theoretic limits for one PSF.
#[derive(Debug, Clone, Serialize)]
pub struct FisherReport {
    pub psf: PsfKind,
    pub width: f64,
    pub quantum_fi_per_photon: f64,
    pub qcrlb_per_photon: f64,
    /// `(δ, F_cl(δ))` pairs.
    pub classical_fi_exact: Vec<(f64, f64)>,
    pub classical_fi_smalld: SmallDeltaCoefficient,
}

impl FisherReport {
    pub fn compute(psf: &PsfModel, deltas: &[f64]) -> Result<Self> {
        let qfi = quantum_fisher(psf)?;
        let classical = deltas
            .iter()
            .map(|&d| classical_fisher_exact(psf, d).map(|f| (d, f)).map_err(|e| e.at_separation(d)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            psf: psf.kind(),
            width: psf.width(),
            quantum_fi_per_photon: qfi,
            qcrlb_per_photon: 1.0 / qfi,
            classical_fi_exact: classical,
            classical_fi_smalld: classical_fisher_smalld(psf)?,
        })
    }

    pub fn qcrlb(&self, n_photons: u64) -> f64 {
        self.qcrlb_per_photon / n_photons as f64
    }
}
