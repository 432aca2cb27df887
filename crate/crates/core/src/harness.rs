//! Configuration-driven separation sweeps.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimate::{
    aggregate, estimate_direct_mle, estimate_from_projection, EstimateRecord, Method, SweepStats, CSV_HEADER,
};
use crate::fisher::{centered_edges, pixelated_classical_fisher_on};
use crate::io::read_two_column;
use crate::modes::{OutcomeProbabilities, ProjectionModel};
use crate::numerics::RngStream;
use crate::psf::{PsfKind, PsfModel};
use crate::sim::{simulate_ccd, simulate_projection, EmccdParams, PhotonModel, SceneConfig};

/// Environment variable overriding the number of worker threads.
pub const WORKERS_ENV: &str = "SPADE_WORKERS";

const KNOWN_KEYS: &[&str] = &[
    "psf",
    "width",
    "psf_file",
    "delta_start",
    "delta_stop",
    "delta_step",
    "n_trials",
    "photon_budget",
    "photon_model",
    "emccd_gain",
    "emccd_readout_sigma",
    "emccd_pixel_capacity",
    "ccd_pixels",
    "ccd_half_width",
    "methods",
    "seed",
    "dump_trials",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub psf: PsfKind,
    pub width: f64,
    pub psf_file: Option<PathBuf>,
    /// Separation grid in PSF widths.
    pub delta_start: f64,
    pub delta_stop: f64,
    pub delta_step: f64,
    pub n_trials: usize,
    pub photon_budget: u64,
    pub photon_model: PhotonModel,
    pub emccd: Option<EmccdParams>,
    pub ccd_pixels: usize,
    /// Half-width of the camera in PSF widths.
    pub ccd_half_width: f64,
    pub methods: Vec<Method>,
    pub seed: u64,
    pub dump_trials: bool,
}

impl SweepConfig {
    /// Defaults for a PSF kind: the separation grid and camera follow the PSF.
    pub fn for_kind(psf: PsfKind, width: f64) -> Self {
        let (start, stop, step, pixels, half) = match psf {
            PsfKind::Gaussian => (0.2, 2.0, 0.2, 1024, 8.0),
            PsfKind::Sinc => (0.067, 0.67, 0.067, 4096, 128.0),
            PsfKind::Tabulated => (0.2, 2.0, 0.2, 1024, 0.0),
        };
        Self {
            psf,
            width,
            psf_file: None,
            delta_start: start,
            delta_stop: stop,
            delta_step: step,
            n_trials: 500,
            photon_budget: 100_000,
            photon_model: PhotonModel::Poisson,
            emccd: None,
            ccd_pixels: pixels,
            ccd_half_width: half,
            methods: vec![Method::ProjectionInversion, Method::DirectMle],
            seed: 0,
            dump_trials: false,
        }
    }

    /// Parses the flat `key = value` configuration format.
    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
        for (key, value) in &table {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown key '{key}'")));
            }
            if value.is_table() {
                return Err(Error::Config(format!("'{key}': nested tables are not supported")));
            }
        }
        let float = |key: &str| -> Result<Option<f64>> {
            match table.get(key) {
                None => Ok(None),
                Some(toml::Value::Float(v)) => Ok(Some(*v)),
                Some(toml::Value::Integer(v)) => Ok(Some(*v as f64)),
                Some(_) => Err(Error::Config(format!("'{key}' must be a number"))),
            }
        };
        let int = |key: &str| -> Result<Option<u64>> {
            match table.get(key) {
                None => Ok(None),
                Some(toml::Value::Integer(v)) if *v >= 0 => Ok(Some(*v as u64)),
                Some(toml::Value::Float(v)) if *v >= 0.0 && v.fract() == 0.0 && *v < 2f64.powi(63) => {
                    Ok(Some(*v as u64))
                }
                Some(_) => Err(Error::Config(format!("'{key}' must be a non-negative integer"))),
            }
        };
        let string = |key: &str| -> Result<Option<&str>> {
            match table.get(key) {
                None => Ok(None),
                Some(toml::Value::String(s)) => Ok(Some(s.as_str())),
                Some(_) => Err(Error::Config(format!("'{key}' must be a string"))),
            }
        };
        let cfg_err = |e: Error| match e {
            Error::Parameter(m) => Error::Config(m),
            other => other,
        };

        let kind: PsfKind = string("psf")?.unwrap_or("gaussian").parse().map_err(cfg_err)?;
        let mut cfg = Self::for_kind(kind, float("width")?.unwrap_or(1.0));
        cfg.psf_file = string("psf_file")?.map(PathBuf::from);
        if let Some(v) = float("delta_start")? {
            cfg.delta_start = v;
        }
        if let Some(v) = float("delta_stop")? {
            cfg.delta_stop = v;
        }
        if let Some(v) = float("delta_step")? {
            cfg.delta_step = v;
        }
        if let Some(v) = int("n_trials")? {
            cfg.n_trials = v as usize;
        }
        if let Some(v) = int("photon_budget")? {
            cfg.photon_budget = v;
        }
        if let Some(v) = string("photon_model")? {
            cfg.photon_model = v.parse().map_err(cfg_err)?;
        }
        let gain = float("emccd_gain")?;
        let readout = float("emccd_readout_sigma")?;
        let capacity = float("emccd_pixel_capacity")?;
        if gain.is_some() || readout.is_some() || capacity.is_some() {
            let params = EmccdParams::new(
                gain.unwrap_or(1.0),
                readout.unwrap_or(0.0),
                capacity.unwrap_or(f64::MAX),
            )
            .map_err(cfg_err)?;
            cfg.emccd = Some(params);
        }
        if let Some(v) = int("ccd_pixels")? {
            cfg.ccd_pixels = v as usize;
        }
        if let Some(v) = float("ccd_half_width")? {
            cfg.ccd_half_width = v;
        }
        match table.get("methods") {
            None => {}
            Some(toml::Value::String(s)) => {
                cfg.methods = s.split(',').map(|m| m.parse()).collect::<Result<_>>().map_err(cfg_err)?;
            }
            Some(toml::Value::Array(items)) => {
                cfg.methods = items
                    .iter()
                    .map(|v| match v {
                        toml::Value::String(s) => s.parse().map_err(cfg_err),
                        _ => Err(Error::Config("'methods' entries must be strings".into())),
                    })
                    .collect::<Result<_>>()?;
            }
            Some(_) => return Err(Error::Config("'methods' must be a string or a list of strings".into())),
        }
        if let Some(v) = int("seed")? {
            cfg.seed = v;
        }
        match table.get("dump_trials") {
            None => {}
            Some(toml::Value::Boolean(b)) => cfg.dump_trials = *b,
            Some(_) => return Err(Error::Config("'dump_trials' must be true or false".into())),
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        if let Some(file) = &cfg.psf_file {
            if file.is_relative() {
                if let Some(dir) = path.parent() {
                    cfg.psf_file = Some(dir.join(file));
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.psf == PsfKind::Tabulated {
            if self.psf_file.is_none() {
                return bad("psf = \"tabulated\" needs psf_file".into());
            }
        } else if !(self.width > 0.0) || !self.width.is_finite() {
            return bad(format!("width must be positive (got {})", self.width));
        }
        if !(self.delta_start > 0.0 && self.delta_step > 0.0 && self.delta_stop >= self.delta_start)
            || !self.delta_stop.is_finite()
        {
            return bad(format!(
                "separation grid must be positive and increasing (start {}, stop {}, step {})",
                self.delta_start, self.delta_stop, self.delta_step
            ));
        }
        if self.n_trials < 2 {
            return bad(format!("n_trials must be >= 2 (got {})", self.n_trials));
        }
        if self.photon_budget == 0 {
            return bad("photon_budget must be >= 1".into());
        }
        if self.methods.is_empty() {
            return bad("at least one method is required".into());
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return bad(format!("method '{m}' listed twice"));
            }
        }
        if self.ccd_pixels == 0 {
            return bad("ccd_pixels must be >= 1".into());
        }
        if self.psf != PsfKind::Tabulated && !(self.ccd_half_width > 0.0) {
            return bad("ccd_half_width must be positive".into());
        }
        if let Some(e) = &self.emccd {
            e.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn build_psf(&self) -> Result<PsfModel> {
        match self.psf {
            PsfKind::Tabulated => {
                let path = self
                    .psf_file
                    .as_ref()
                    .ok_or_else(|| Error::Config("psf_file missing".into()))?;
                PsfModel::tabulated(&read_two_column(path)?)
            }
            kind => PsfModel::from_kind(kind, self.width),
        }
    }

    /// Separations in PSF widths.
    pub fn delta_grid(&self) -> Vec<f64> {
        let n = ((self.delta_stop - self.delta_start) / self.delta_step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| round12(self.delta_start + i as f64 * self.delta_step)).collect()
    }

    pub fn pixel_edges(&self, psf: &PsfModel) -> Vec<f64> {
        let (lo, hi) = psf.support();
        let half = if self.psf == PsfKind::Tabulated && self.ccd_half_width <= 0.0 {
            lo.abs().max(hi.abs())
        } else {
            self.ccd_half_width * psf.width()
        };
        centered_edges(2.0 * half / self.ccd_pixels as f64, self.ccd_pixels)
    }
}

/// Rounds to 12 significant digits so grid points print as typed.
fn round12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Theoretical bounds on the variance at one separation, for N photons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceCurves {
    pub delta: f64,
    pub qcrlb: f64,
    pub ccd_crlb: f64,
    pub projection_crlb: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub code_version: &'static str,
    pub seed: u64,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub workers: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub delta_true: f64,
    #[serde(flatten)]
    pub record: EstimateRecord,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub psf_width: f64,
    pub photon_budget: u64,
    pub quantum_fisher_per_photon: f64,
    pub qcrlb: f64,
    pub rows: Vec<SweepStats>,
    pub reference: Vec<ReferenceCurves>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<Vec<TrialRecord>>,
    pub provenance: Provenance,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(128 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.csv_row());
            out.push('\n');
        }
        out
    }

    pub fn reference_csv(&self) -> String {
        let mut out = String::from("delta,qcrlb,ccd_crlb,projection_crlb\n");
        for r in &self.reference {
            let _ = writeln!(out, "{},{},{},{}", r.delta, r.qcrlb, r.ccd_crlb, r.projection_crlb);
        }
        out
    }

    pub fn trials_csv(&self) -> Option<String> {
        self.trials.as_ref().map(|trials| {
            let mut out = String::from("method,delta_true,trial_id,delta_hat,clamped\n");
            for t in trials {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    t.record.method, t.delta_true, t.record.trial_id, t.record.delta_hat, t.record.clamped
                );
            }
            out
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn rows_for(&self, method: Method) -> impl Iterator<Item = &SweepStats> {
        self.rows.iter().filter(move |r| r.method == method)
    }

    /// Row of `method` whose true separation is closest to `delta`.
    pub fn row_near(&self, method: Method, delta: f64) -> Option<&SweepStats> {
        self.rows_for(method).min_by(|a, b| {
            (a.delta_true - delta)
                .abs()
                .total_cmp(&(b.delta_true - delta).abs())
        })
    }
}

fn method_tag(method: Method) -> u64 {
    match method {
        Method::ProjectionInversion => 1,
        Method::DirectMle => 2,
    }
}

/// Stream id of one trial: method tag, separation index and trial index.
pub fn stream_id(method: Method, delta_index: usize, trial: usize) -> u64 {
    (method_tag(method) << 62) | ((delta_index as u64) << 32) | trial as u64
}

pub fn worker_count() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Error::Config(format!("{WORKERS_ENV} must be a positive integer (got '{v}')"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0.0, |d| d.as_secs_f64())
}

struct Job<'a> {
    method: Method,
    delta_index: usize,
    trial: usize,
    scene: &'a SceneConfig,
    probs: &'a OutcomeProbabilities,
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    run_sweep_with_workers(config, worker_count()?)
}

pub fn run_sweep_with_workers(config: &SweepConfig, workers: usize) -> Result<SweepResult> {
    config.validate()?;
    let started = unix_now();
    let psf = config.build_psf()?;
    let model = ProjectionModel::new(&psf)?;
    let width = psf.width();
    let n = config.photon_budget;
    let qfi = model.quantum_fisher();
    let qcrlb = 1.0 / (n as f64 * qfi);
    let edges = config.pixel_edges(&psf);

    let deltas: Vec<f64> = config.delta_grid().iter().map(|d| d * width).collect();
    let mut scenes = Vec::with_capacity(deltas.len());
    let mut probs = Vec::with_capacity(deltas.len());
    let mut reference = Vec::with_capacity(deltas.len());
    for &delta in &deltas {
        let ctx = |e: Error| e.at_separation(delta);
        scenes.push(SceneConfig::new(psf.clone(), delta, n, config.photon_model).map_err(ctx)?);
        probs.push(model.probabilities(delta).map_err(ctx)?);
        let f_ccd = pixelated_classical_fisher_on(&psf, delta, &edges).map_err(ctx)?;
        let f_proj = model.binary_fisher(delta).map_err(ctx)?;
        reference.push(ReferenceCurves {
            delta,
            qcrlb,
            ccd_crlb: 1.0 / (n as f64 * f_ccd),
            projection_crlb: 1.0 / (n as f64 * f_proj),
        });
    }

    let mut jobs = Vec::with_capacity(deltas.len() * config.methods.len() * config.n_trials);
    for delta_index in 0..deltas.len() {
        for &method in &config.methods {
            for trial in 0..config.n_trials {
                jobs.push(Job {
                    method,
                    delta_index,
                    trial,
                    scene: &scenes[delta_index],
                    probs: &probs[delta_index],
                });
            }
        }
    }

    let run = |job: &Job| -> Result<EstimateRecord> {
        let id = stream_id(job.method, job.delta_index, job.trial);
        let mut rng = RngStream::new(config.seed, id);
        let estimate = match job.method {
            Method::ProjectionInversion => {
                let outcome = simulate_projection(job.scene, job.probs, config.emccd.as_ref(), &mut rng)?;
                estimate_from_projection(&outcome, &model, id)
            }
            Method::DirectMle => {
                let frame = simulate_ccd(job.scene, &edges, &mut rng)?;
                estimate_direct_mle(&frame, &psf, id)
            }
        };
        estimate.map_err(|e| e.at_separation(job.scene.delta_true))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let records: Vec<EstimateRecord> = pool.install(|| jobs.par_iter().map(run).collect::<Result<Vec<_>>>())?;

    let mut rows = Vec::new();
    for (chunk, job) in records.chunks(config.n_trials).zip(jobs.iter().step_by(config.n_trials)) {
        let r = &reference[job.delta_index];
        let crlb = match job.method {
            Method::ProjectionInversion => r.projection_crlb,
            Method::DirectMle => r.ccd_crlb,
        };
        let stats = aggregate(chunk, r.delta, qcrlb)?.with_crlb(crlb, qcrlb);
        rows.push(stats);
    }
    let trials = config.dump_trials.then(|| {
        records
            .iter()
            .zip(&jobs)
            .map(|(record, job)| TrialRecord {
                delta_true: job.scene.delta_true,
                record: *record,
            })
            .collect()
    });

    Ok(SweepResult {
        config: config.clone(),
        psf_width: width,
        photon_budget: n,
        quantum_fisher_per_photon: qfi,
        qcrlb,
        rows,
        reference,
        trials,
        provenance: Provenance {
            code_version: env!("CARGO_PKG_VERSION"),
            seed: config.seed,
            started_unix: started,
            finished_unix: unix_now(),
            workers,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_config() {
        let cfg = SweepConfig::parse(
            "psf = \"sinc\"\nwidth = 2\nn_trials = 10\nphoton_budget = 1000\nmethods = \"projection\"\nseed = 7\n\
             emccd_gain = 100.0\nphoton_model = \"fixed\"\n",
        )
        .unwrap();
        assert_eq!(cfg.psf, PsfKind::Sinc);
        assert_eq!(cfg.width, 2.0);
        assert_eq!(cfg.methods, vec![Method::ProjectionInversion]);
        assert_eq!(cfg.emccd.unwrap().gain, 100.0);
        assert_eq!(cfg.photon_model, PhotonModel::Fixed);
        assert_eq!(cfg.delta_grid().len(), 10);
        assert_eq!(cfg.delta_grid()[2], 0.201);
    }

    #[test]
    fn default_gaussian_grid() {
        let cfg = SweepConfig::parse("").unwrap();
        assert_eq!(
            cfg.delta_grid(),
            vec![0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0]
        );
        assert_eq!(cfg.n_trials, 500);
        assert_eq!(cfg.photon_budget, 100_000);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "[section]\nx = 1\n",
            "unknown = 1\n",
            "psf = \"airy\"\n",
            "n_trials = 1\n",
            "delta_step = 0\n",
            "delta_start = 2\ndelta_stop = 1\n",
            "methods = \"projection,projection\"\n",
            "width = \"wide\"\n",
            "psf = \"tabulated\"\n",
            "emccd_gain = 0.5\n",
            "this is not toml",
        ] {
            assert!(
                matches!(SweepConfig::parse(text), Err(Error::Config(_))),
                "{text:?}"
            );
        }
    }

    #[test]
    fn stream_ids_are_distinct() {
        let a = stream_id(Method::ProjectionInversion, 3, 7);
        let b = stream_id(Method::DirectMle, 3, 7);
        let c = stream_id(Method::ProjectionInversion, 7, 3);
        assert!(a != b && a != c && b != c);
    }

    fn small() -> SweepConfig {
        SweepConfig::parse("n_trials = 2\nphoton_budget = 10\ndelta_start = 1.0\ndelta_stop = 2.0\ndelta_step = 0.5\n")
            .unwrap()
    }

    #[test]
    fn degenerate_sweep_is_finite() {
        let result = run_sweep_with_workers(&small(), 2).unwrap();
        assert_eq!(result.rows.len(), 6);
        for row in &result.rows {
            assert!(row.mean.is_finite() && row.std.is_finite() && row.mse.is_finite());
            assert!(row.crlb_ratio.is_finite());
        }
    }

    #[test]
    fn output_independent_of_worker_count() {
        let mut cfg = small();
        cfg.photon_budget = 1000;
        cfg.n_trials = 8;
        let a = run_sweep_with_workers(&cfg, 1).unwrap().to_csv();
        let b = run_sweep_with_workers(&cfg, 4).unwrap().to_csv();
        assert_eq!(a, b);
        assert!(a.starts_with(CSV_HEADER));
        assert!(!a.contains('\r'));
    }

    #[test]
    fn method_filter() {
        let mut cfg = small();
        cfg.methods = vec![Method::ProjectionInversion];
        let csv = run_sweep_with_workers(&cfg, 1).unwrap().to_csv();
        assert!(!csv.contains("\ndirect,"));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn projection_tracks_its_crlb_at_large_separation() {
        let mut cfg = SweepConfig::for_kind(PsfKind::Gaussian, 1.0);
        cfg.methods = vec![Method::ProjectionInversion];
        cfg.delta_start = 1.8;
        cfg.n_trials = 400;
        let result = run_sweep_with_workers(&cfg, 4).unwrap();
        let model = ProjectionModel::new(&PsfModel::gaussian(1.0).unwrap()).unwrap();
        for row in &result.rows {
            // The ratio statistic attains 1/(N·F_ratio), slightly above the binary-outcome bound.
            let expected = 1.0 / (cfg.photon_budget as f64 * model.ratio_fisher(row.delta_true).unwrap());
            let rel = row.mse / expected;
            assert!((0.8..1.25).contains(&rel), "δ={} mse/expected={rel}", row.delta_true);
        }
    }

    #[test]
    fn dump_and_json() {
        let mut cfg = small();
        cfg.dump_trials = true;
        let result = run_sweep_with_workers(&cfg, 1).unwrap();
        let trials = result.trials_csv().unwrap();
        assert_eq!(trials.lines().count(), 1 + 12);
        let json: serde_json::Value = serde_json::from_str(&result.to_json().unwrap()).unwrap();
        assert_eq!(json["provenance"]["seed"], 0);
        assert_eq!(json["rows"].as_array().unwrap().len(), 6);
        assert!(json["qcrlb"].as_f64().unwrap() > 0.0);
    }
}
