// The parity fringe against the classical one at n = 100, and how its
// width falls with photon number.

use std::f64::consts::{FRAC_PI_2, PI};

use parity_radar::homodyne::HomodyneSetup;
use parity_radar::interferometer::InterferometerConfig;
use parity_radar::reconstruction::{
    classical_fringe, classical_resolution, fringe_fwhm, range_resolution, scan_fringe, FringeScan,
};

pub fn run() -> parity_radar::Result<()> {
    let setup = HomodyneSetup::ideal(1e6, FRAC_PI_2, 1)?;
    let g = scan_fringe(&FringeScan::noiseless(100.0, setup, -PI, PI, 1e-3))?;
    let c = classical_fringe(100.0, g.phases())?;
    let (q, cl) = (fringe_fwhm(&g)?, fringe_fwhm(&c)?);
    println!(
        "n = 100: parity FWHM {q:.5} rad, classical {cl:.5} rad, ratio {:.2}",
        cl / q
    );

    let cfg = InterferometerConfig::new(0.03, 0.0)?;
    println!(
        "range resolution {:.3e} m vs classical {:.3e} m (x{:.1})",
        range_resolution(100.0, &cfg)?,
        classical_resolution(&cfg),
        classical_resolution(&cfg) / range_resolution(100.0, &cfg)?
    );

    for n in [25.0, 100.0, 400.0, 1600.0] {
        let s = 1.0 / f64::sqrt(n);
        let g = scan_fringe(&FringeScan::noiseless(
            n,
            setup,
            -6.0 * s,
            6.0 * s,
            s / 100.0,
        ))?;
        println!(
            "n = {n:>6}: FWHM {:.5} rad, FWHM*sqrt(n) = {:.4}",
            fringe_fwhm(&g)?,
            fringe_fwhm(&g)? / s
        );
    }
    Ok(())
}

fn main() -> parity_radar::Result<()> {
    run()
}
