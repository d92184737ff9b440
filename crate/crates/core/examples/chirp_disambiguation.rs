// Absolute range from a phase known modulo one wavelength plus a coarse
// chirp round-trip time.

use std::f64::consts::TAU;

use parity_radar::homodyne::DwellStream;
use parity_radar::interferometer::SPEED_OF_LIGHT;
use parity_radar::reconstruction::ChirpRanger;

pub fn run() -> parity_radar::Result<()> {
    let lambda = 0.03;
    let range = 12_345.678_9;
    let phase = (TAU * range / lambda).rem_euclid(TAU);
    for sigma in [1e-11, 5e-11, 1.2 * lambda / SPEED_OF_LIGHT] {
        let ranger = ChirpRanger::new(lambda, sigma)?;
        let tof = ranger.simulate_time_of_flight(range, &mut DwellStream::new(3, 0).rng());
        let fix = ranger.resolve(tof, phase)?;
        println!(
            "sigma_t = {sigma:.1e} s: coarse {:.4} m, fringe {}, range {:.6} m, error {:+.2e} m, ambiguous {}",
            fix.coarse_range,
            fix.fringe_index,
            fix.range,
            fix.range - range,
            fix.ambiguous
        );
    }
    Ok(())
}

fn main() -> parity_radar::Result<()> {
    run()
}
