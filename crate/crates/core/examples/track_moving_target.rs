// Closed-loop track of an accelerating target with derived velocity and
// acceleration.

use parity_radar::harness::{run_track, Scenario};

pub fn run() -> parity_radar::Result<()> {
    let s = Scenario {
        radial_velocity: 0.4,
        radial_acceleration: 30.0,
        altitude_rate: 1e-3,
        initial_altitude: 1e-3,
        dwells: 100,
        diff_window: 21,
        ..Scenario::default()
    };
    let track = run_track(&s)?;
    for p in track.iter().step_by(20) {
        println!(
            "t = {:.3} s  R - R_true = {:+.2e} m  v = {:.3} m/s  a = {:.1} m/s^2  alt = {:.6} rad  locked {}",
            p.time_s,
            p.range_m - p.true_range_m,
            p.velocity_mps,
            p.acceleration_mps2,
            p.altitude_rad,
            p.locked
        );
    }
    let locked = track.iter().filter(|p| p.locked).count();
    println!(
        "locked {locked}/{} dwells, range sigma {:.2e} m",
        track.len(),
        track[0].range_sigma_m
    );
    Ok(())
}

fn main() -> parity_radar::Result<()> {
    run()
}
