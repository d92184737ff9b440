// From photocount differences to parity at both interferometer ports.

use std::f64::consts::FRAC_PI_2;

use parity_radar::homodyne::{acquire, measure_dwell, Detection, DwellStream, HomodyneSetup};
use parity_radar::interferometer::PortPair;
use parity_radar::reconstruction::{
    combine_ports, estimate_signal_amplitude, reconstruct_parity_a, reconstruct_parity_b,
};
use parity_radar::CoherentAmplitude;

pub fn run() -> parity_radar::Result<()> {
    let n_bar = 100.0_f64;
    let phi = 0.1;
    let ports = PortPair::at_phase(CoherentAmplitude::real(n_bar.sqrt()), phi);
    let base = HomodyneSetup::ideal(1e6, FRAC_PI_2, 100_000)?;

    let setup_b = base.with_lo_phase(FRAC_PI_2);
    let setup_a = base.with_lo_phase(phi / 2.0);
    let b = reconstruct_parity_b(
        &acquire(ports.port_b, &setup_b, Detection::Expectation),
        &setup_b,
        phi,
    )?;
    let a = reconstruct_parity_a(
        &acquire(ports.port_a, &setup_a, Detection::Expectation),
        &setup_a,
        phi,
    )?;
    println!(
        "noiseless  S_B = {:.6}  S_A = {:.6}  combined = {:.6}",
        b.signal_value,
        a.signal_value,
        combine_ports(&a, &b)
    );
    println!(
        "closed form S_B = {:.6}",
        (-2.0 * n_bar * (phi / 2.0).sin().powi(2)).exp()
    );

    for seed in 0..3 {
        let stats = measure_dwell(ports.port_b, &setup_b, DwellStream::new(seed, 0));
        let s = reconstruct_parity_b(&stats, &setup_b, phi)?;
        println!(
            "seed {seed}: |a| = {:.4}  S_B = {:.4}",
            estimate_signal_amplitude(&stats, &setup_b)?,
            s.signal_value
        );
    }
    Ok(())
}

fn main() -> parity_radar::Result<()> {
    run()
}
