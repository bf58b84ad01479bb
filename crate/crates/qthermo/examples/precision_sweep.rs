//! Temperature precision across fourteen decades of probe energy.
//!
//! Prints the total bound (statistical plus heating) for the optimized
//! Gaussian probe, the squeezed and coherent large-energy forms, and the
//! constant pyrometer reference. Both interferometric families beat the
//! pyrometer over a wide window before heating turns the curves upward.

use qthermo::constants::PhysicalConstants;
use qthermo::material::{omega_from_wavelength, Material};
use qthermo::optimize::{sweep_nbar, ProbeContext};
use qthermo::pyrometer::PyrometerConfig;
use qthermo::Result;

fn main() -> Result<()> {
    let pc = PhysicalConstants::codata();
    let material = Material::builtin("ppktp").expect("preset exists");
    let omega = omega_from_wavelength(&pc, 1064e-9)?;
    let ctx = ProbeContext::new(pc, material, omega, 1.0)?.with_sample_temperature(298.0)?;
    let pyro = PyrometerConfig::new(1e-4, 1e-2, 298.0)?;

    let rows = sweep_nbar(&ctx, (1e8, 1e16), 25, 0, &pyro)?;
    println!(
        "{:>10}  {:>12}  {:>12}  {:>12}  {:>12}",
        "nbar", "exact (K)", "squeezed (K)", "coherent (K)", "pyrometer (K)"
    );
    for r in &rows {
        println!(
            "{:>10.2e}  {:>12.4e}  {:>12.4e}  {:>12.4e}  {:>12.4e}",
            r.nbar, r.dt_exact, r.dt_sq_asym, r.dt_coh_asym, r.dt_pyro
        );
    }

    let best = rows
        .iter()
        .min_by(|a, b| a.dt_exact.partial_cmp(&b.dt_exact).expect("finite"))
        .expect("nonempty sweep");
    println!();
    println!(
        "best exact bound: {:.4e} K at nbar = {:.2e} ({:.0}x below the pyrometer)",
        best.dt_exact,
        best.nbar,
        best.dt_pyro / best.dt_exact
    );
    Ok(())
}
