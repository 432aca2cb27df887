//! Photon-counting acquisitions: two-channel mode projection (optionally
//! through an EMCCD gain register) and direct imaging on a pixelated camera.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::{check_coverage, pixel_masses};
use crate::modes::OutcomeProbabilities;
use crate::numerics::{
    sample_gamma, sample_multinomial, sample_normal, sample_poisson, RngStream,
};
use crate::psf::PsfModel;

/// How the number of detected photons per acquisition is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhotonModel {
    /// Exactly N photons.
    Fixed,
    /// Poisson with mean N.
    Poisson,
}

impl std::str::FromStr for PhotonModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fixed" | "fixedn" => Ok(PhotonModel::Fixed),
            "poisson" | "poissonmeann" => Ok(PhotonModel::Poisson),
            other => Err(Error::Parameter(format!("unknown photon model '{other}'"))),
        }
    }
}

impl std::fmt::Display for PhotonModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PhotonModel::Fixed => "fixed",
            PhotonModel::Poisson => "poisson",
        })
    }
}

/// One simulated scene: two equally bright incoherent sources at ±δ/2.
#[derive(Debug, Clone)]
pub struct SceneConfig {
    pub delta_true: f64,
    pub psf: PsfModel,
    pub photon_budget: u64,
    pub photon_model: PhotonModel,
}

impl SceneConfig {
    pub fn new(psf: PsfModel, delta_true: f64, photon_budget: u64, photon_model: PhotonModel) -> Result<Self> {
        if !(delta_true >= 0.0) || !delta_true.is_finite() {
            return Err(Error::Parameter(format!(
                "true separation must be >= 0 (got {delta_true})"
            )));
        }
        Ok(Self {
            delta_true,
            psf,
            photon_budget,
            photon_model,
        })
    }

    fn draw_total(&self, rng: &mut RngStream) -> Result<u64> {
        match self.photon_model {
            PhotonModel::Fixed => Ok(self.photon_budget),
            PhotonModel::Poisson => sample_poisson(self.photon_budget as f64, rng),
        }
    }
}

/// Electron-multiplying CCD readout parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmccdParams {
    pub gain: f64,
    /// Readout noise standard deviation in analog counts.
    pub readout_sigma: f64,
    /// Analog level at which a pixel saturates.
    pub pixel_capacity: f64,
}

impl EmccdParams {
    pub fn new(gain: f64, readout_sigma: f64, pixel_capacity: f64) -> Result<Self> {
        let params = Self {
            gain,
            readout_sigma,
            pixel_capacity,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gain >= 1.0) || !self.gain.is_finite() {
            return Err(Error::Parameter(format!("EMCCD gain must be >= 1 (got {})", self.gain)));
        }
        if !(self.readout_sigma >= 0.0) {
            return Err(Error::Parameter("readout noise must be >= 0".into()));
        }
        if !(self.pixel_capacity > 0.0) {
            return Err(Error::Parameter("pixel capacity must be positive".into()));
        }
        Ok(())
    }
}

/// Analog value and recovered photon count of one EMCCD channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmccdReadout {
    pub analog: f64,
    pub recovered: u64,
}

/// Passes `photons` through the gain register.
///
/// Each photon is multiplied by an exponential gain of mean g, so the sum is
/// Gamma(photons, g); normal readout noise is added, the result clipped at the
/// pixel capacity, and the count recovered as round(analog / g).
pub fn emccd_readout(photons: u64, params: &EmccdParams, rng: &mut RngStream) -> Result<EmccdReadout> {
    params.validate()?;
    let amplified = if photons == 0 {
        0.0
    } else {
        sample_gamma(photons as f64, params.gain, rng)?
    };
    let noisy = amplified + sample_normal(0.0, params.readout_sigma, rng)?;
    let analog = noisy.clamp(0.0, params.pixel_capacity);
    Ok(EmccdReadout {
        analog,
        recovered: (analog / params.gain).round() as u64,
    })
}

/// Counts from one projection acquisition.
///
/// Without EMCCD `n_0 + n_a + n_lost == total`. With EMCCD, `n_0` and `n_a`
/// are the counts recovered from the analog values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectionOutcome {
    pub n_0: u64,
    pub n_a: u64,
    pub n_lost: u64,
    pub total: u64,
    pub analog_0: Option<f64>,
    pub analog_a: Option<f64>,
}

impl ProjectionOutcome {
    /// Noiseless outcome with counts proportional to the probabilities.
    pub fn expected(probs: &OutcomeProbabilities, total: u64) -> Self {
        let n = total as f64;
        let n_0 = (probs.p_0 * n).round() as u64;
        let n_a = (probs.p_a * n).round() as u64;
        Self {
            n_0,
            n_a,
            n_lost: total.saturating_sub(n_0 + n_a),
            total,
            analog_0: None,
            analog_a: None,
        }
    }
}

fn same_separation(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Simulates one mode-projection acquisition.
pub fn simulate_projection(
    scene: &SceneConfig,
    probs: &OutcomeProbabilities,
    emccd: Option<&EmccdParams>,
    rng: &mut RngStream,
) -> Result<ProjectionOutcome> {
    if !same_separation(probs.delta, scene.delta_true) {
        return Err(Error::Model(format!(
            "outcome probabilities were evaluated at δ = {} but the scene has δ = {}",
            probs.delta, scene.delta_true
        )));
    }
    let total = scene.draw_total(rng)?;
    let p_lost = (1.0 - probs.p_0 - probs.p_a).max(0.0);
    let norm = probs.p_0 + probs.p_a + p_lost;
    let counts = sample_multinomial(total, &[probs.p_0 / norm, probs.p_a / norm, p_lost / norm], rng)?;
    let (mut n_0, mut n_a) = (counts[0], counts[1]);
    let (mut analog_0, mut analog_a) = (None, None);
    if let Some(params) = emccd {
        let r0 = emccd_readout(n_0, params, rng)?;
        let ra = emccd_readout(n_a, params, rng)?;
        n_0 = r0.recovered;
        n_a = ra.recovered;
        analog_0 = Some(r0.analog);
        analog_a = Some(ra.analog);
    }
    Ok(ProjectionOutcome {
        n_0,
        n_a,
        n_lost: counts[2],
        total,
        analog_0,
        analog_a,
    })
}

/// A one-dimensional camera frame.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CcdFrame {
    pub pixel_edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl CcdFrame {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn pixel_centers(&self) -> Vec<f64> {
        self.pixel_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Same frame reflected through x = 0.
    pub fn mirrored(&self) -> Self {
        Self {
            pixel_edges: self.pixel_edges.iter().rev().map(|e| -e).collect(),
            counts: self.counts.iter().rev().copied().collect(),
        }
    }
}

/// Simulates direct imaging onto a pixel grid with the given edges.
///
/// Photons falling outside the grid are lost.
pub fn simulate_ccd(scene: &SceneConfig, pixel_edges: &[f64], rng: &mut RngStream) -> Result<CcdFrame> {
    if pixel_edges.len() < 2 || pixel_edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Parameter("pixel edges must be strictly increasing".into()));
    }
    let q = pixel_masses(&scene.psf, scene.delta_true, pixel_edges);
    let coverage = check_coverage(&q)?;
    let counts = match scene.photon_model {
        PhotonModel::Fixed => {
            let mut probs = q.clone();
            probs.push((1.0 - coverage).max(0.0));
            let sum: f64 = probs.iter().sum();
            probs.iter_mut().for_each(|p| *p /= sum);
            let mut counts = sample_multinomial(scene.photon_budget, &probs, rng)?;
            counts.pop();
            counts
        }
        PhotonModel::Poisson => q
            .iter()
            .map(|qi| sample_poisson(scene.photon_budget as f64 * qi, rng))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(CcdFrame {
        pixel_edges: pixel_edges.to_vec(),
        counts,
    })
}
