//! Reproducible random streams and the samplers used by the simulators.
//!
//! Each trial of a sweep owns a ChaCha8 stream selected by `(seed, stream_id)`,
//! so draws do not depend on scheduling or worker count.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Gamma, Normal, Poisson};

use crate::error::{Error, Result};

/// A deterministic random stream keyed by `(seed, stream_id)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

pub fn sample_binomial(n: u64, p: f64, rng: &mut RngStream) -> Result<u64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parameter(format!("binomial p = {p} outside [0, 1]")));
    }
    if n == 0 || p == 0.0 {
        return Ok(0);
    }
    if p == 1.0 {
        return Ok(n);
    }
    let dist = Binomial::new(n, p).map_err(|e| Error::Parameter(e.to_string()))?;
    Ok(dist.sample(&mut rng.rng))
}

/// Multinomial counts by sequential conditional binomials.
pub fn sample_multinomial(n: u64, probs: &[f64], rng: &mut RngStream) -> Result<Vec<u64>> {
    if probs.is_empty() {
        return Err(Error::Parameter("multinomial needs at least one category".into()));
    }
    if probs.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
        return Err(Error::Parameter("multinomial probabilities must be non-negative".into()));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter(format!(
            "multinomial probabilities sum to {total}, not 1"
        )));
    }
    let mut counts = vec![0u64; probs.len()];
    let mut remaining = n;
    let mut mass = 1.0;
    let last = probs.len() - 1;
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if i == last {
            counts[i] = remaining;
            break;
        }
        let conditional = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 1.0 };
        let k = sample_binomial(remaining, conditional, rng)?;
        counts[i] = k;
        remaining -= k;
        mass -= p;
    }
    Ok(counts)
}

pub fn sample_gamma(shape: f64, scale: f64, rng: &mut RngStream) -> Result<f64> {
    if !(shape > 0.0) || !(scale > 0.0) || !shape.is_finite() || !scale.is_finite() {
        return Err(Error::Parameter(format!(
            "gamma needs shape > 0 and scale > 0 (got {shape}, {scale})"
        )));
    }
    let dist = Gamma::new(shape, scale).map_err(|e| Error::Parameter(e.to_string()))?;
    Ok(dist.sample(&mut rng.rng))
}

pub fn sample_poisson(mean: f64, rng: &mut RngStream) -> Result<u64> {
    if !(mean >= 0.0) || !mean.is_finite() {
        return Err(Error::Parameter(format!("poisson mean {mean} must be >= 0")));
    }
    if mean == 0.0 {
        return Ok(0);
    }
    let dist = Poisson::new(mean).map_err(|e| Error::Parameter(e.to_string()))?;
    let draw: f64 = dist.sample(&mut rng.rng);
    Ok(draw as u64)
}

pub fn sample_normal(mean: f64, std_dev: f64, rng: &mut RngStream) -> Result<f64> {
    if std_dev == 0.0 {
        return Ok(mean);
    }
    let dist = Normal::new(mean, std_dev).map_err(|e| Error::Parameter(e.to_string()))?;
    Ok(dist.sample(&mut rng.rng))
}
