//! Experiment driver: target kinematics, the per-dwell tracking loop,
//! track differentiation, configuration and file output.

mod config;
mod differentiate;
mod experiments;
mod output;
mod scenario;
mod track;

pub use config::{Config, SignProbeMode};
pub use differentiate::{differentiate, Derivatives};
pub use experiments::{
    run_angle_scan, run_fringe_scan, run_resolution_sweep, run_track_experiment, AngleScanRow,
    ExperimentOutput, ResolutionRow, ScanRow,
};
pub use output::{write_csv, write_envelope, Envelope, SvgPlot, SCHEMA_VERSION};
pub use scenario::{evolve_target, PhotonSource, Scenario, TargetState};
pub use track::{run_track, TrackPoint};
