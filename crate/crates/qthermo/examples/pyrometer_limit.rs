//! Resolution of an ideal blackbody pyrometer and the spectral route to it.
//!
//! The closed form is sqrt(k_B / (4 sigma S dt T)); the cross-check
//! integrates the photon-counting Fisher information over the Planck
//! spectrum, which collapses to the same expression.

use qthermo::constants::PhysicalConstants;
use qthermo::pyrometer::{
    fisher_total, pyrometer_precision, pyrometer_precision_fisher, PyrometerConfig,
};
use qthermo::Result;

fn main() -> Result<()> {
    let pc = PhysicalConstants::codata();

    println!("ideal pyrometer, 1 cm^2 detector, 10 ms integration:");
    println!("{:>8}  {:>13}  {:>13}  {:>10}", "T (K)", "closed (K)", "fisher (K)", "rel gap");
    for t in [77.0, 195.0, 298.0, 500.0, 1000.0] {
        let cfg = PyrometerConfig::new(1e-4, 1e-2, t)?;
        let closed = pyrometer_precision(&pc, &cfg)?;
        let fisher = pyrometer_precision_fisher(&pc, &cfg)?;
        println!(
            "{t:>8}  {closed:>13.5e}  {fisher:>13.5e}  {:>10.2e}",
            (fisher / closed - 1.0).abs()
        );
    }

    let t = 298.0;
    println!();
    println!(
        "spectral Fisher information at {t} K: {:.5e} 1/(K^2 m^2 s)",
        fisher_total(&pc, t)?
    );
    println!(
        "closed form 4 sigma T / k_B:          {:.5e} 1/(K^2 m^2 s)",
        4.0 * pc.sigma * t / pc.k_b
    );
    Ok(())
}
