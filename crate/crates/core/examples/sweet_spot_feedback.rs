// Holding the working phase at zero while the target phase drifts.

use std::f64::consts::FRAC_PI_2;

use parity_radar::homodyne::{measure_dwell, DwellStream, HomodyneSetup};
use parity_radar::interferometer::PortPair;
use parity_radar::reconstruction::{
    estimate_signed_amplitude, SignProbe, SweetSpotController, DEFAULT_GAIN,
};
use parity_radar::CoherentAmplitude;

pub fn run() -> parity_radar::Result<()> {
    let n_bar = 100.0_f64;
    let setup = HomodyneSetup::ideal(1e6, FRAC_PI_2, 1)?;
    let mut controller = SweetSpotController::new(DEFAULT_GAIN, n_bar)?;
    let mut reference = 0.0;
    let slew = 0.2;
    for k in 0..20u64 {
        let target = 0.8 + slew * k as f64;
        let phi = target - reference;
        let ports = PortPair::at_phase(CoherentAmplitude::real(n_bar.sqrt()), phi);
        let stats = measure_dwell(ports.port_b, &setup, DwellStream::new(7, k));
        let a = estimate_signed_amplitude(&stats, &setup)?;
        let step = controller.step(reference, a.abs(), SignProbe::Quadrature(a));
        println!(
            "dwell {k:>2}: phi = {phi:+.3}  estimate = {:+.3}",
            step.phase_estimate
        );
        reference = step.reference_after;
    }
    println!("steady lag slew/gain = {:.2} rad", slew / DEFAULT_GAIN);
    Ok(())
}

fn main() -> parity_radar::Result<()> {
    run()
}
