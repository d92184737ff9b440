// Coherent-state parity three ways: closed form, Wigner function at the
// origin, and the alternating Poisson sum over photon numbers.

use std::f64::consts::PI;

use parity_radar::optics::{log_parity, parity_expectation, wigner_coherent};
use parity_radar::{CoherentAmplitude, PhaseSpacePoint};

fn poisson_parity(n_bar: f64) -> f64 {
    let terms = (n_bar + 20.0 * n_bar.sqrt() + 50.0).ceil() as u64;
    let mut log_p = -n_bar;
    let mut sum = log_p.exp();
    for n in 1..=terms {
        log_p += n_bar.ln() - (n as f64).ln();
        sum += if n % 2 == 0 {
            log_p.exp()
        } else {
            -log_p.exp()
        };
    }
    sum
}

pub fn run() -> parity_radar::Result<()> {
    println!(
        "{:>6}  {:>14}  {:>14}  {:>14}",
        "n", "exp(-2n)", "(pi/2)W(0)", "Poisson sum"
    );
    for n_bar in [0.5, 1.0, 4.0, 9.0, 25.0] {
        let a = CoherentAmplitude::from_photon_number(n_bar, 0.3);
        let w = PI / 2.0 * wigner_coherent(PhaseSpacePoint::ORIGIN, a);
        println!(
            "{n_bar:>6}  {:>14.6e}  {w:>14.6e}  {:>14.6e}",
            parity_expectation(a),
            poisson_parity(n_bar)
        );
    }
    // far past double-precision underflow the log stays finite
    let bright = CoherentAmplitude::real(30.0);
    println!(
        "n = 900: parity {} , ln parity {}",
        parity_expectation(bright),
        log_parity(bright)
    );
    Ok(())
}

fn main() -> parity_radar::Result<()> {
    run()
}
