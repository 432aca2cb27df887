//! Separation estimation for two incoherent point sources: Fisher
//! information, mode projection, photon-counting simulation and estimators.

pub mod error;
pub mod estimate;
pub mod fisher;
pub mod harness;
pub mod hologram;
pub mod io;
pub mod modes;
pub mod numerics;
pub mod psf;
pub mod sim;

pub use error::{Error, Result};
pub use estimate::{EstimateRecord, Method, SweepStats};
pub use harness::{run_sweep, SweepConfig, SweepResult};
pub use modes::{Mode, OutcomeProbabilities, ProjectionModel};
pub use psf::{PsfKind, PsfModel};
pub use sim::{EmccdParams, PhotonModel, SceneConfig};
