//! Separation estimators and their trial statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::{grid_mass, pixel_masses_subset};
use crate::modes::ProjectionModel;
use crate::numerics::{find_root_monotone, golden_section_max};
use crate::psf::PsfModel;
use crate::sim::{CcdFrame, ProjectionOutcome};

/// Points of the coarse likelihood scan.
pub const MLE_GRID_POINTS: usize = 64;
/// Upper end of the likelihood search, in PSF widths.
pub const MLE_RANGE_WIDTHS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[serde(rename = "projection")]
    ProjectionInversion,
    #[serde(rename = "direct")]
    DirectMle,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ProjectionInversion => "projection",
            Method::DirectMle => "direct",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "projection" => Ok(Method::ProjectionInversion),
            "direct" => Ok(Method::DirectMle),
            other => Err(Error::Parameter(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateRecord {
    pub delta_hat: f64,
    pub method: Method,
    pub clamped: bool,
    pub trial_id: u64,
}

/// Inverts n_a / (n_0 + n_a) = p_a / (p_a + p_0) on [0, δ_peak].
pub fn estimate_from_projection(
    outcome: &ProjectionOutcome,
    model: &ProjectionModel,
    trial_id: u64,
) -> Result<EstimateRecord> {
    let denom = outcome.n_0 + outcome.n_a;
    if denom == 0 {
        return Err(Error::Data("no photons in either monitored channel".into()));
    }
    let f = outcome.n_a as f64 / denom as f64;
    let (delta_hat, clamped) = invert_ratio(f, model)?;
    Ok(EstimateRecord {
        delta_hat,
        method: Method::ProjectionInversion,
        clamped,
        trial_id,
    })
}

/// Solves p_a / (p_a + p_0) = f for δ; returns (δ, clamped).
pub fn invert_ratio(f: f64, model: &ProjectionModel) -> Result<(f64, bool)> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::Data(format!("frequency must lie in [0, 1] (got {f})")));
    }
    if f == 0.0 {
        return Ok((0.0, false));
    }
    let peak = model.branch_peak();
    let ratio = |d: f64| {
        model
            .probabilities(d)
            .map(|p| p.conditional_ratio())
            .unwrap_or(f64::NAN)
    };
    if f >= ratio(peak) {
        return Ok((peak, true));
    }
    let tol = 1e-9 * model.psf().width();
    let delta = find_root_monotone(|d| ratio(d) - f, 0.0, peak, tol)?;
    Ok((delta, false))
}

/// Log-likelihood of a frame at δ, normalized to the photons on the grid.
pub fn ccd_log_likelihood(frame: &CcdFrame, psf: &PsfModel, delta: f64) -> f64 {
    let lit: Vec<usize> = (0..frame.counts.len()).filter(|&i| frame.counts[i] > 0).collect();
    log_likelihood_on(frame, psf, delta, &lit)
}

fn log_likelihood_on(frame: &CcdFrame, psf: &PsfModel, delta: f64, lit: &[usize]) -> f64 {
    let edges = &frame.pixel_edges;
    let q = pixel_masses_subset(psf, delta, edges, lit);
    let coverage = grid_mass(psf, delta, edges[0], edges[edges.len() - 1]);
    let mut ll = 0.0;
    for (&i, qi) in lit.iter().zip(&q) {
        if *qi <= 0.0 {
            return f64::NEG_INFINITY;
        }
        ll += frame.counts[i] as f64 * (qi / coverage).ln();
    }
    ll
}

/// Maximum-likelihood separation from a direct-imaging frame.
pub fn estimate_direct_mle(frame: &CcdFrame, psf: &PsfModel, trial_id: u64) -> Result<EstimateRecord> {
    if frame.counts.len() + 1 != frame.pixel_edges.len() {
        return Err(Error::Data(format!(
            "frame has {} counts but {} edges",
            frame.counts.len(),
            frame.pixel_edges.len()
        )));
    }
    if frame.total() == 0 {
        return Err(Error::Data("frame contains no photons".into()));
    }
    let width = psf.width();
    let upper = MLE_RANGE_WIDTHS * width;
    let step = upper / (MLE_GRID_POINTS - 1) as f64;
    let lit: Vec<usize> = (0..frame.counts.len()).filter(|&i| frame.counts[i] > 0).collect();
    let ll = |d: f64| log_likelihood_on(frame, psf, d, &lit);

    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..MLE_GRID_POINTS {
        let v = ll(i as f64 * step);
        if v > best.1 {
            best = (i, v);
        }
    }
    let lo = best.0.saturating_sub(1) as f64 * step;
    let hi = ((best.0 + 1).min(MLE_GRID_POINTS - 1)) as f64 * step;
    let mut delta_hat = golden_section_max(ll, lo, hi, 1e-6 * width).clamp(0.0, upper);
    // The refinement only samples the interior of the bracket.
    for end in [lo, hi] {
        if ll(end) > ll(delta_hat) {
            delta_hat = end;
        }
    }
    Ok(EstimateRecord {
        delta_hat,
        method: Method::DirectMle,
        clamped: false,
        trial_id,
    })
}

/// Statistics of one method at one separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepStats {
    pub method: Method,
    pub delta_true: f64,
    pub n_trials: usize,
    pub mean: f64,
    pub std: f64,
    pub bias: f64,
    pub mse: f64,
    pub mse_over_qcrlb: f64,
    /// Classical CRLB of the method's measurement over the qCRLB.
    pub crlb_ratio: f64,
    pub clamp_count: usize,
}

impl SweepStats {
    pub fn with_crlb(mut self, crlb: f64, qcrlb: f64) -> Self {
        self.crlb_ratio = crlb / qcrlb;
        self
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.method,
            self.delta_true,
            self.n_trials,
            self.mean,
            self.std,
            self.bias,
            self.mse,
            self.mse_over_qcrlb,
            self.crlb_ratio,
            self.clamp_count
        )
    }
}

pub const CSV_HEADER: &str =
    "method,delta_true,n_trials,mean,std,bias,mse,mse_over_qcrlb,crlb_ratio,clamp_count";

/// Mean, sample standard deviation, bias and MSE of a set of estimates.
///
/// `crlb_ratio` is left NaN until set with [`SweepStats::with_crlb`].
pub fn aggregate(records: &[EstimateRecord], delta_true: f64, qcrlb: f64) -> Result<SweepStats> {
    if records.len() < 2 {
        return Err(Error::Data("aggregation needs at least two records".into()));
    }
    if !(qcrlb > 0.0) {
        return Err(Error::Parameter(format!("qCRLB must be positive (got {qcrlb})")));
    }
    let method = records[0].method;
    if records.iter().any(|r| r.method != method) {
        return Err(Error::Data("records mix estimation methods".into()));
    }
    let n = records.len() as f64;
    let mean = records.iter().map(|r| r.delta_hat).sum::<f64>() / n;
    let var = records.iter().map(|r| (r.delta_hat - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let mse = records.iter().map(|r| (r.delta_hat - delta_true).powi(2)).sum::<f64>() / n;
    Ok(SweepStats {
        method,
        delta_true,
        n_trials: records.len(),
        mean,
        std: var.sqrt(),
        bias: mean - delta_true,
        mse,
        mse_over_qcrlb: mse / qcrlb,
        crlb_ratio: f64::NAN,
        clamp_count: records.iter().filter(|r| r.clamped).count(),
    })
}
