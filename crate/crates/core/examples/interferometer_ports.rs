// Output ports of the lossy two-arm interferometer and the return photon
// budget of a monostatic link.

use parity_radar::interferometer::{
    classical_difference, link_budget, photons_per_dwell, propagate, working_phase,
    InterferometerConfig,
};
use parity_radar::CoherentAmplitude;

pub fn run() -> parity_radar::Result<()> {
    let cfg = InterferometerConfig::new(0.03, 0.0)?;
    let beta = CoherentAmplitude::real(10.0);
    for range in [0.0, 0.00375, 0.0075, 0.015] {
        let ports = propagate(beta, &cfg, range);
        let phi = working_phase(&cfg, range);
        println!(
            "R = {range:.5} m  phi = {phi:.4}  |A|^2 = {:.3}  |B|^2 = {:.3}  A-B = {:.3}",
            ports.port_a.mean_photon_number(),
            ports.port_b.mean_photon_number(),
            classical_difference(beta.mean_photon_number(), phi)
        );
    }

    let lossy = InterferometerConfig::new(0.03, 2.0 * std::f64::consts::LN_10 / 1e4)?;
    let ports = propagate(beta, &lossy, 1e4);
    println!(
        "20 dB loss: {:.4} photons left of 100",
        ports.total_photon_number()
    );

    for range in [5e4, 1e5, 2e5] {
        let p_rx = link_budget(1e3, range, 1.0, 1.0, &cfg)?;
        println!(
            "R = {range:.0e} m: P_rx = {p_rx:.3e} W, {:.3e} photons per ms",
            photons_per_dwell(p_rx, 1e-3, &cfg)
        );
    }
    Ok(())
}

fn main() -> parity_radar::Result<()> {
    run()
}
