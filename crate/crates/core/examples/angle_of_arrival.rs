// Altitude and azimuth from a two-receiver baseline.

use std::f64::consts::FRAC_PI_2;

use parity_radar::angular::{
    angular_resolution, classical_angular_resolution, estimate_angle, estimate_azimuth,
    receive_from_direction, receive_plane_wave, BaselineGeometry, Orientation,
};
use parity_radar::homodyne::{Detection, DwellStream, HomodyneSetup};
use parity_radar::CoherentAmplitude;

pub fn run() -> parity_radar::Result<()> {
    let n_bar = 100.0_f64;
    let alpha = CoherentAmplitude::real(n_bar.sqrt());
    let setup = HomodyneSetup::ideal(1e6, FRAC_PI_2, 1)?;
    let geom = BaselineGeometry::new(3.0, 0.03, Orientation::Altitudinal)?;
    println!(
        "sigma_theta {:.3e} rad vs classical {:.3e} rad",
        angular_resolution(&geom, n_bar)?,
        classical_angular_resolution(&geom)
    );

    let theta = 1e-3;
    let exact = estimate_angle(
        &receive_plane_wave(alpha, &geom, theta, &setup, Detection::Expectation),
        &geom,
        n_bar,
        None,
    )?;
    println!("noiseless: theta = {:.12} rad", exact.theta);
    for seed in 0..3 {
        let det = Detection::Sampled(DwellStream::new(seed, 0));
        let e = estimate_angle(
            &receive_plane_wave(alpha, &geom, theta, &setup, det),
            &geom,
            n_bar,
            None,
        )?;
        println!("seed {seed}: theta = {:.6e} rad", e.theta);
    }

    let az = BaselineGeometry::new(3.0, 0.03, Orientation::Azimuthal)?;
    let (altitude, azimuth) = (0.2, -4e-4);
    let dwell = receive_from_direction(
        alpha,
        &az,
        altitude,
        azimuth,
        &setup,
        Detection::Expectation,
        0.0,
    );
    let e = estimate_azimuth(&dwell, &az, n_bar, altitude, None)?;
    println!(
        "azimuth at altitude {altitude}: {:.9} rad (sigma {:.2e})",
        e.theta, e.sigma_theta
    );
    Ok(())
}

fn main() -> parity_radar::Result<()> {
    run()
}
