//! Thermal-loss channel: closed-form moment update vs direct integration
//! of the quadrature moment equations, plus the semigroup property.

use qthermo::channel::{
    apply_channel, compose, integrate_master_equation, temperature_for_occupation,
    PhysicalChannelParams,
};
use qthermo::constants::PhysicalConstants;
use qthermo::gaussian::{make_gaussian_state, InputStateParams};
use qthermo::Result;

fn main() -> Result<()> {
    let pc = PhysicalConstants::codata();
    let probe = make_gaussian_state(&InputStateParams::new(1.2, -0.3, 0.2, 0.6)?)?;

    // A mode at omega = 2, damped at gamma = 0.4 for t = 1.5 against a
    // reservoir holding 0.3 thermal quanta.
    let temp = temperature_for_occupation(&pc, 2.0, 0.3)?;
    let phys = PhysicalChannelParams::new(2.0, 0.4, 1.5, temp)?;
    let channel = phys.to_channel(&pc)?;
    println!(
        "equivalent channel: phi = {:.4}, eta = {:.6}, n_res = {:.3}",
        channel.phi, channel.eta, channel.n_res
    );

    let closed = apply_channel(&probe, &channel)?;
    let integrated = integrate_master_equation(&probe, &phys, &pc, None)?;
    println!("closed-form mean:  ({:+.8e}, {:+.8e})", closed.mean[0], closed.mean[1]);
    println!("integrated mean:   ({:+.8e}, {:+.8e})", integrated.mean[0], integrated.mean[1]);
    println!(
        "max covariance gap: {:.2e}",
        (closed.cov - integrated.cov).abs().max()
    );

    // Two half-duration channels composed equal one full-duration channel.
    let half = PhysicalChannelParams::new(2.0, 0.4, 0.75, temp)?.to_channel(&pc)?;
    let two_halves = compose(&half, &half)?;
    println!(
        "semigroup: eta(t) = {:.10}, eta(t/2)^2 = {:.10}",
        channel.eta, two_halves.eta
    );
    let via_halves = apply_channel(&apply_channel(&probe, &half)?, &half)?;
    println!(
        "composition moment gap: {:.2e}",
        (closed.cov - via_halves.cov).abs().max().max(
            (closed.mean - via_halves.mean).abs().max()
        )
    );
    Ok(())
}
