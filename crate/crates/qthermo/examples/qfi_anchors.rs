//! Phase information carried by Gaussian probes, and its conversion to
//! temperature information through the thermo-optic coupling of a crystal.

use qthermo::channel::{apply_channel, ChannelParams};
use qthermo::constants::PhysicalConstants;
use qthermo::gaussian::{make_gaussian_state, InputStateParams};
use qthermo::material::{omega_from_wavelength, Material};
use qthermo::metrology::{cramer_rao, qfi_phase, qfi_temperature};
use qthermo::optimize::ProbeContext;
use qthermo::Result;

fn main() -> Result<()> {
    println!("lossless anchors (Q_c = 4 nbar, Q_s = 8 nbar (nbar + 1)):");
    println!("{:>8}  {:>12}  {:>12}", "nbar", "coherent", "squeezed");
    for nbar in [0.5, 1.0, 5.0, 50.0] {
        let q_c = qfi_phase(&make_gaussian_state(&InputStateParams::coherent(nbar))?)?;
        let q_s = qfi_phase(&make_gaussian_state(&InputStateParams::squeezed_vacuum(nbar))?)?;
        println!("{nbar:>8}  {q_c:>12.6e}  {q_s:>12.6e}");
    }

    println!();
    println!("loss erodes the squeezing advantage (nbar = 5):");
    println!("{:>8}  {:>12}  {:>12}  {:>8}", "eta", "coherent", "squeezed", "ratio");
    let coh = make_gaussian_state(&InputStateParams::coherent(5.0))?;
    let sq = make_gaussian_state(&InputStateParams::squeezed_vacuum(5.0))?;
    for eta in [1.0, 0.99, 0.9, 0.5] {
        let ch = ChannelParams::new(0.0, eta, 0.0)?;
        let q_c = qfi_phase(&apply_channel(&coh, &ch)?)?;
        let q_s = qfi_phase(&apply_channel(&sq, &ch)?)?;
        println!("{eta:>8}  {q_c:>12.6e}  {q_s:>12.6e}  {:>8.3}", q_s / q_c);
    }

    // Phase precision becomes temperature precision through alpha = dphi/dT.
    let pc = PhysicalConstants::codata();
    let material = Material::builtin("ppktp").expect("preset exists");
    let omega = omega_from_wavelength(&pc, 1064e-9)?;
    let ctx = ProbeContext::new(pc, material, omega, 1.0)?.with_sample_temperature(298.0)?;
    let alpha = ctx.phase_coupling();
    let q_phi = qfi_phase(&apply_channel(
        &sq,
        &ChannelParams::new(0.0, ctx.material.transmissivity(), ctx.n_res)?,
    )?)?;
    let q_t = qfi_temperature(q_phi, alpha);
    println!();
    println!("KTP crystal at 1064 nm: alpha = {alpha:.5e} rad/K");
    println!("squeezed nbar = 5 probe: Q_T = {q_t:.5e} 1/K^2");
    println!("single-shot bound: delta T >= {:.5e} K", cramer_rao(q_t, 1.0)?);
    Ok(())
}
