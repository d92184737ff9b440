// Balanced homodyne photocounts: detector means, a sampled dwell, and the
// Skellam mean and variance of the count difference.

use std::f64::consts::FRAC_PI_2;

use parity_radar::homodyne::{
    detector_means, measure_dwell, DwellStatistics, DwellStream, HomodyneSetup,
};
use parity_radar::CoherentAmplitude;

pub fn run() -> parity_radar::Result<()> {
    let signal = CoherentAmplitude::real(1.0);
    let setup = HomodyneSetup::ideal(1e4, FRAC_PI_2, 100_000)?;
    let means = detector_means(signal, &setup);
    println!(
        "mean counts: e = {}, d = {}, e - d = {}",
        means.e,
        means.d,
        means.difference()
    );

    let expected = DwellStatistics::expected(signal, &setup);
    let stats = measure_dwell(signal, &setup, DwellStream::new(42, 0));
    println!(
        "sampled mean {:.3} +- {:.3} (expected {})",
        stats.mean_difference,
        stats.standard_error(),
        expected.mean_difference
    );
    println!(
        "sampled variance {:.1} (expected {})",
        stats.var_difference, expected.var_difference
    );

    let again = measure_dwell(signal, &setup, DwellStream::new(42, 0));
    println!("same seed reproduces the dwell: {}", again == stats);
    Ok(())
}

fn main() -> parity_radar::Result<()> {
    run()
}
