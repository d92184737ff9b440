// Config-driven experiments writing CSV, JSON and SVG files.

use parity_radar::harness::{
    run_angle_scan, run_fringe_scan, run_resolution_sweep, run_track_experiment, Config,
};

pub fn run() -> parity_radar::Result<()> {
    let cfg = Config::parse(
        r#"
        seed = 11
        noiseless = true
        phase_step = 0.002
        dwells = 50
        theta_start = -0.002
        theta_stop = 0.002
        theta_step = 0.0001
        "#,
    )?;
    let out = std::env::temp_dir().join(format!("parity-radar-example-{}", std::process::id()));
    for o in [
        run_fringe_scan(&cfg, &out, true)?,
        run_angle_scan(&cfg, &out, true)?,
        run_resolution_sweep(&cfg, &out, true)?,
        run_track_experiment(&cfg, &out, true)?,
    ] {
        println!("{} -> {}", o.csv.display(), o.metadata);
    }
    let _ = std::fs::remove_dir_all(&out);
    Ok(())
}

fn main() -> parity_radar::Result<()> {
    run()
}
