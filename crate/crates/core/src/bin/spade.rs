use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use spade::estimate::{estimate_direct_mle, estimate_from_projection};
use spade::fisher::{classical_fisher_smalld, qcrlb, FisherReport};
use spade::harness::{run_sweep, SweepConfig};
use spade::hologram::{field_on_grid, synthesize, GridSpec, HologramMask};
use spade::io::{read_two_column, write_two_column};
use spade::numerics::RngStream;
use spade::sim::{simulate_ccd, simulate_projection, EmccdParams, PhotonModel, SceneConfig};
use spade::{Error, Mode, ProjectionModel, PsfKind, PsfModel, Result};

#[derive(Parser)]
#[command(name = "spade", version, about = "Two-point separation estimation by mode projection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct PsfArgs {
    /// gaussian, sinc or tabulated
    #[arg(long, default_value = "gaussian")]
    psf: PsfKind,
    /// σ for the Gaussian, w for the sinc
    #[arg(long, default_value_t = 1.0)]
    width: f64,
    /// Two-column amplitude samples for a tabulated PSF
    #[arg(long)]
    psf_file: Option<PathBuf>,
}

impl PsfArgs {
    fn build(&self) -> Result<PsfModel> {
        match (self.psf, &self.psf_file) {
            (PsfKind::Tabulated, Some(path)) => PsfModel::tabulated(&read_two_column(path)?),
            (PsfKind::Tabulated, None) => Err(Error::Config("--psf tabulated needs --psf-file".into())),
            (kind, _) => PsfModel::from_kind(kind, self.width),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Quantum and classical Fisher information of a PSF
    Fisher {
        #[command(flatten)]
        psf: PsfArgs,
        /// Photon number for the qCRLB
        #[arg(long, default_value_t = 100_000)]
        photons: u64,
        /// Largest δ of the classical FI table, in widths
        #[arg(long, default_value_t = 2.0)]
        delta_max: f64,
        /// Number of δ points in the table
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long)]
        json: bool,
    },
    /// Projection mode samples
    Modes {
        #[command(subcommand)]
        action: ModesAction,
    },
    /// One simulated acquisition
    Simulate {
        #[command(flatten)]
        psf: PsfArgs,
        /// Separation in widths
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 100_000)]
        photons: u64,
        #[arg(long, default_value = "poisson")]
        photon_model: PhotonModel,
        #[arg(long, value_enum, default_value = "projection")]
        method: SimMethod,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        emccd_gain: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        emccd_readout_sigma: f64,
        #[arg(long, default_value_t = f64::MAX)]
        emccd_pixel_capacity: f64,
        #[arg(long, default_value_t = 1024)]
        ccd_pixels: usize,
        /// Camera half-width in widths
        #[arg(long, default_value_t = 8.0)]
        ccd_half_width: f64,
    },
    /// Separation sweep from a configuration file
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Also write per-trial estimates
        #[arg(long)]
        dump_trials: bool,
    },
    /// Hologram masks
    Hologram {
        #[command(subcommand)]
        action: HologramAction,
    },
}

#[derive(Subcommand)]
enum ModesAction {
    /// Write PSF and antisymmetric mode samples as two-column text
    Export {
        #[command(flatten)]
        psf: PsfArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Sampled range ±half_width, in widths
        #[arg(long, default_value_t = 8.0)]
        half_width: f64,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum HologramAction {
    /// Synthesize a mask for a projection mode
    Synth {
        #[command(flatten)]
        psf: PsfArgs,
        #[arg(long, value_enum, default_value = "optimal")]
        mode: ModeChoice,
        /// Two-column samples of a custom mode
        #[arg(long)]
        mode_file: Option<PathBuf>,
        /// Carrier frequency in cycles per width
        #[arg(long, default_value_t = 10.0)]
        carrier: f64,
        /// Grid half-width in widths; defaults to the mode support
        #[arg(long)]
        half_width: Option<f64>,
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        /// Output prefix; writes PREFIX.txt and PREFIX.pgm
        #[arg(long, default_value = "mask")]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        pgm_rows: usize,
    },
    /// First-order readout of input fields through a mask
    Readout {
        #[arg(long)]
        mask: PathBuf,
        /// Field samples on the mask grid; several inputs add incoherently
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SimMethod {
    Projection,
    Direct,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeChoice {
    Psf,
    Optimal,
    Custom,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fisher {
            psf,
            photons,
            delta_max,
            points,
            json,
        } => fisher(&psf.build()?, photons, delta_max, points, json),
        Command::Modes {
            action:
                ModesAction::Export {
                    psf,
                    out_dir,
                    half_width,
                    samples,
                },
        } => export_modes(&psf.build()?, &out_dir, half_width, samples),
        Command::Simulate {
            psf,
            delta,
            photons,
            photon_model,
            method,
            seed,
            emccd_gain,
            emccd_readout_sigma,
            emccd_pixel_capacity,
            ccd_pixels,
            ccd_half_width,
        } => {
            let psf = psf.build()?;
            let scene = SceneConfig::new(psf.clone(), delta * psf.width(), photons, photon_model)?;
            let mut rng = RngStream::new(seed, 0);
            let out = match method {
                SimMethod::Projection => {
                    let model = ProjectionModel::new(&psf)?;
                    let probs = model.probabilities(scene.delta_true)?;
                    let emccd = emccd_gain
                        .map(|g| EmccdParams::new(g, emccd_readout_sigma, emccd_pixel_capacity))
                        .transpose()?;
                    let outcome = simulate_projection(&scene, &probs, emccd.as_ref(), &mut rng)?;
                    let estimate = estimate_from_projection(&outcome, &model, 0).ok();
                    json!({ "probabilities": probs, "outcome": outcome, "estimate": estimate })
                }
                SimMethod::Direct => {
                    let half = ccd_half_width * psf.width();
                    let edges = spade::fisher::centered_edges(2.0 * half / ccd_pixels as f64, ccd_pixels);
                    let frame = simulate_ccd(&scene, &edges, &mut rng)?;
                    let estimate = estimate_direct_mle(&frame, &psf, 0).ok();
                    json!({ "frame": frame, "estimate": estimate })
                }
            };
            println!("{}", serde_json::to_string_pretty(&out).map_err(|e| Error::Io(e.to_string()))?);
            Ok(())
        }
        Command::Sweep {
            config,
            out_dir,
            dump_trials,
        } => {
            let mut cfg = SweepConfig::from_file(&config)?;
            cfg.dump_trials |= dump_trials;
            let result = run_sweep(&cfg)?;
            std::fs::create_dir_all(&out_dir)?;
            write(&out_dir.join("sweep.csv"), &result.to_csv())?;
            write(&out_dir.join("reference.csv"), &result.reference_csv())?;
            write(&out_dir.join("sweep.json"), &result.to_json()?)?;
            if let Some(trials) = result.trials_csv() {
                write(&out_dir.join("trials.csv"), &trials)?;
            }
            print!("{}", result.to_csv());
            Ok(())
        }
        Command::Hologram { action } => hologram(action),
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn fisher(psf: &PsfModel, photons: u64, delta_max: f64, points: usize, json: bool) -> Result<()> {
    let w = psf.width();
    let deltas: Vec<f64> = (0..=points).map(|i| delta_max * w * i as f64 / points.max(1) as f64).collect();
    let report = FisherReport::compute(psf, &deltas)?;
    let bound = qcrlb(psf, photons)?;
    if json {
        let out = json!({ "report": report, "photons": photons, "qcrlb": bound });
        println!("{}", serde_json::to_string_pretty(&out).map_err(|e| Error::Io(e.to_string()))?);
        return Ok(());
    }
    let small = classical_fisher_smalld(psf)?;
    println!("psf {} width {}", report.psf, w);
    println!("quantum_fisher {}", report.quantum_fi_per_photon);
    println!("qcrlb_per_photon {}", report.qcrlb_per_photon);
    println!("qcrlb(N={photons}) {bound}");
    println!(
        "classical_smalld_coefficient {}{}",
        small.value,
        if small.divergent { " (divergent)" } else { "" }
    );
    println!("delta classical_fisher");
    for (d, f) in &report.classical_fi_exact {
        println!("{d} {f}");
    }
    Ok(())
}

fn export_modes(psf: &PsfModel, out_dir: &Path, half_width: f64, samples: usize) -> Result<()> {
    if samples < 2 || !(half_width > 0.0) {
        return Err(Error::Parameter("need >= 2 samples over a positive range".into()));
    }
    let grid = GridSpec::new(half_width * psf.width(), samples)?;
    std::fs::create_dir_all(out_dir)?;
    for (name, mode) in [("mode_psf.txt", Mode::psf(psf)?), ("mode_antisym.txt", Mode::optimal(psf)?)] {
        let rows: Vec<(f64, f64)> = grid.points().into_iter().map(|x| (x, mode.amplitude(x))).collect();
        let path = out_dir.join(name);
        write_two_column(&path, &rows, Some(&format!("{:?} mode of {} psf, width {}", mode.label(), psf.kind(), psf.width())))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn hologram(action: HologramAction) -> Result<()> {
    match action {
        HologramAction::Synth {
            psf,
            mode,
            mode_file,
            carrier,
            half_width,
            samples,
            out,
            pgm_rows,
        } => {
            let psf = psf.build()?;
            let w = psf.width();
            let mode = match (mode, mode_file) {
                (ModeChoice::Psf, _) => Mode::psf(&psf)?,
                (ModeChoice::Optimal, _) => Mode::optimal(&psf)?,
                (ModeChoice::Custom, Some(path)) => Mode::custom(&read_two_column(&path)?)?,
                (ModeChoice::Custom, None) => return Err(Error::Config("--mode custom needs --mode-file".into())),
            };
            let half = match half_width {
                Some(h) => h * w,
                None => {
                    let (lo, hi) = mode.support();
                    lo.abs().max(hi.abs())
                }
            };
            let mask = synthesize(&mode, carrier / w, &GridSpec::new(half, samples)?)?;
            let txt = out.with_extension("txt");
            let pgm = out.with_extension("pgm");
            mask.write_text(&txt)?;
            mask.write_pgm(&pgm, pgm_rows)?;
            println!("{}\n{}", txt.display(), pgm.display());
            Ok(())
        }
        HologramAction::Readout { mask, input } => {
            let mask = HologramMask::read_text(&mask)?;
            let grid = mask.grid;
            let mut fields = Vec::with_capacity(input.len());
            for path in &input {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                fields.push(field_on_grid(&text, &grid)?);
            }
            println!("{}", mask.incoherent_readout(&fields)?);
            Ok(())
        }
    }
}
