//! Probe-state optimization at fixed mean photon number.
//!
//! The three-way split of N-bar between displacement, its direction, and the
//! squeezed/thermal balance is parametrized so every point of R^3 maps to a
//! valid state; derivative-free search then needs no constraint handling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::ChannelParams;
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::gaussian::{make_gaussian_state, InputStateParams};
use crate::material::Material;
use crate::metrology::{cramer_rao, heating_disturbance, qfi_phase, qfi_temperature};

const GOLDEN_INV: f64 = 0.618_033_988_749_894_9;

// -- Objective --

/// Experiment description shared by every optimizer entry point.
#[derive(Debug, Clone)]
pub struct ProbeContext {
    pub constants: PhysicalConstants,
    pub material: Material,
    /// Probe angular frequency, rad/s.
    pub omega: f64,
    /// Number of independent probe repetitions.
    pub repetitions: f64,
    /// Reservoir occupation seen by the lost mode (0 at optical frequencies
    /// and room temperature).
    pub n_res: f64,
}

impl ProbeContext {
    pub fn new(
        constants: PhysicalConstants,
        material: Material,
        omega: f64,
        repetitions: f64,
    ) -> Result<Self> {
        material.validate()?;
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "omega",
                reason: "must be finite and > 0",
                value: omega,
            });
        }
        if !repetitions.is_finite() || repetitions < 1.0 {
            return Err(Error::InvalidParameter {
                name: "repetitions",
                reason: "must be >= 1",
                value: repetitions,
            });
        }
        Ok(Self {
            constants,
            material,
            omega,
            repetitions,
            n_res: 0.0,
        })
    }

    /// Set the reservoir occupation from the sample temperature.
    pub fn with_sample_temperature(mut self, temperature: f64) -> Result<Self> {
        self.n_res = if temperature == 0.0 {
            0.0
        } else {
            crate::channel::thermal_occupation(&self.constants, self.omega, temperature)?
        };
        Ok(self)
    }

    pub fn phase_coupling(&self) -> f64 {
        self.material
            .phase_coupling(&self.constants, self.omega)
            .expect("omega validated in constructor")
    }

    fn channel(&self) -> ChannelParams {
        ChannelParams::new(0.0, self.material.transmissivity(), self.n_res)
            .expect("transmissivity is in (0, 1]")
    }
}

/// Map an unconstrained point u in R^3 to a probe at exactly `nbar`.
///
/// sin^2 terms split the energy budget: u[0] sets the displaced fraction,
/// u[1] the displacement direction, u[2] the thermal share of the rest.
pub fn params_from_unconstrained(u: [f64; 3], nbar: f64) -> InputStateParams {
    let f_disp = u[0].sin().powi(2);
    let n_disp = f_disp * nbar;
    let theta = u[1];
    let x0 = (2.0 * n_disp).sqrt() * theta.cos();
    let p0 = (2.0 * n_disp).sqrt() * theta.sin();
    let rest = nbar - n_disp;
    let f_th = u[2].sin().powi(2);
    let n0 = f_th * rest;
    // (N0 + 1/2) cosh 2r = rest + 1/2 fixes the squeezing that spends the
    // remaining budget on top of the thermal occupation.
    let cosh2r = (rest + 0.5) / (n0 + 0.5);
    let r0 = 0.5 * cosh2r.acosh();
    InputStateParams::new(x0, p0, n0, r0).expect("parametrization stays in the valid domain")
}

/// QFI with respect to temperature for the probe described by `params`.
pub fn qfi_t_for_params(ctx: &ProbeContext, params: &InputStateParams) -> Result<f64> {
    let state = make_gaussian_state(params)?;
    let out = crate::channel::apply_channel(&state, &ctx.channel())?;
    let q_phi = qfi_phase(&out)?;
    Ok(qfi_temperature(q_phi, ctx.phase_coupling()))
}

// -- Nelder-Mead --

/// Nelder-Mead on R^n. Returns (best point, best value, evaluations).
fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    scale: f64,
    max_evals: usize,
) -> (Vec<f64>, f64, usize) {
    let n = start.len();
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(start, &mut evals);
    simplex.push((start.to_vec(), v0));
    for i in 0..n {
        let mut x = start.to_vec();
        x[i] += scale;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < 1e-10 * (1.0 + simplex[0].0.iter().fold(0.0f64, |m, v| m.max(v.abs())))
            || evals >= max_evals
        {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(x, _)| x[i]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = (0..n)
            .map(|i| centroid[i] + alpha * (centroid[i] - worst.0[i]))
            .collect();
        let fr = eval(&reflect, &mut evals);
        if fr < simplex[0].1 {
            let expand: Vec<f64> = (0..n)
                .map(|i| centroid[i] + gamma * (reflect[i] - centroid[i]))
                .collect();
            let fe = eval(&expand, &mut evals);
            simplex[n] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflect, fr);
        } else {
            let contract: Vec<f64> = (0..n)
                .map(|i| centroid[i] + rho * (worst.0[i] - centroid[i]))
                .collect();
            let fc = eval(&contract, &mut evals);
            if fc < worst.1 {
                simplex[n] = (contract, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let shrunk: Vec<f64> = (0..n)
                        .map(|i| best[i] + sigma * (entry.0[i] - best[i]))
                        .collect();
                    let fv = eval(&shrunk, &mut evals);
                    *entry = (shrunk, fv);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, v) = simplex.swap_remove(0);
    (x, v, evals)
}

/// Golden-section minimization of a unimodal scalar function on [a, b].
fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - GOLDEN_INV * (b - a);
    let mut d = a + GOLDEN_INV * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol * (1.0 + a.abs() + b.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN_INV * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN_INV * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

// -- Entry points --

/// Outcome of a state or energy optimization.
#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub params: InputStateParams,
    /// QFI with respect to temperature at the optimum, 1/K^2.
    pub qfi_t: f64,
    /// Statistical temperature bound at the optimum, K.
    pub delta_t: f64,
    /// Mean photon number of the optimal probe.
    pub nbar: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Best Gaussian probe at fixed mean photon number.
///
/// Runs several Nelder-Mead restarts from seeded random points; the energy
/// split parametrization keeps every iterate feasible.
pub fn optimize_state_at_nbar(ctx: &ProbeContext, nbar: f64, seed: u64) -> Result<OptimizationResult> {
    if !nbar.is_finite() || nbar <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "nbar",
            reason: "must be finite and > 0",
            value: nbar,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<[f64; 3]> = vec![
        [0.0, 0.0, 0.0],                        // pure squeezed vacuum
        [std::f64::consts::FRAC_PI_2, 0.0, 0.0], // pure coherent
    ];
    for _ in 0..6 {
        starts.push([
            rng.gen_range(0.0..std::f64::consts::FRAC_PI_2),
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
            rng.gen_range(0.0..std::f64::consts::FRAC_PI_2),
        ]);
    }
    let mut best: Option<(Vec<f64>, f64, usize)> = None;
    let mut total_evals = 0;
    for start in &starts {
        let objective = |u: &[f64]| {
            let p = params_from_unconstrained([u[0], u[1], u[2]], nbar);
            match qfi_t_for_params(ctx, &p) {
                Ok(q) if q.is_finite() => -q,
                _ => f64::INFINITY,
            }
        };
        let (x, v, e) = nelder_mead(objective, start, 0.3, 10_000);
        total_evals += e;
        if best.as_ref().is_none_or(|(_, bv, _)| v < *bv) {
            best = Some((x, v, e));
        }
    }
    let (u, neg_q, _) = best.expect("at least one restart ran");
    let params = params_from_unconstrained([u[0], u[1], u[2]], nbar);
    let params = canonicalize(&params);
    let qfi_t = qfi_t_for_params(ctx, &params)?;
    let delta_t = cramer_rao(qfi_t, ctx.repetitions)?;
    Ok(OptimizationResult {
        params,
        qfi_t,
        delta_t,
        nbar,
        evaluations: total_evals,
        converged: neg_q.is_finite(),
    })
}

/// Displacement direction does not change the QFI here, so report any
/// displaced component along +x with zero thermal noise share kept as-is.
fn canonicalize(params: &InputStateParams) -> InputStateParams {
    let amp = (params.x0 * params.x0 + params.p0 * params.p0).sqrt();
    let (x0, p0) = if amp < 1e-9 { (0.0, 0.0) } else { (amp, 0.0) };
    let n0 = if params.n0 < 1e-12 { 0.0 } else { params.n0 };
    let r0 = if params.r0.abs() < 1e-12 { 0.0 } else { params.r0 };
    InputStateParams::new(x0, p0, n0, r0).expect("canonical form preserves validity")
}

/// Total bound (statistical + heating) for the best probe at a given energy.
fn total_at_nbar(ctx: &ProbeContext, nbar: f64, seed: u64) -> Result<(f64, OptimizationResult)> {
    let res = optimize_state_at_nbar(ctx, nbar, seed)?;
    let heating = heating_disturbance(
        &ctx.constants,
        nbar,
        ctx.material.transmissivity(),
        ctx.omega,
        ctx.material.mass,
        ctx.material.specific_heat,
    )?;
    Ok((res.delta_t + heating, res))
}

/// Result of the energy sweep for the disturbance trade-off.
#[derive(Debug, Clone)]
pub struct EnergyOptimum {
    pub result: OptimizationResult,
    /// Heating disturbance at the optimal energy, K.
    pub heating: f64,
    /// Total bound (statistical + heating), K.
    pub total: f64,
}

/// Best mean photon number balancing statistical precision against heating.
///
/// A coarse log grid around an analytic initializer brackets the minimum,
/// then golden-section refines log10(nbar).
pub fn optimize_nbar(
    ctx: &ProbeContext,
    nbar_range: (f64, f64),
    seed: u64,
) -> Result<EnergyOptimum> {
    let (lo, hi) = nbar_range;
    if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi <= lo {
        return Err(Error::Range(format!(
            "need 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    // Statistical term ~ a / sqrt(nbar), heating ~ b * nbar: balance at
    // nbar* = (a / 2b)^{2/3}. Evaluate a at a mid-grid energy.
    let eta = ctx.material.transmissivity();
    let n_mid = (lo.log10() + hi.log10()) / 2.0;
    let probe = optimize_state_at_nbar(ctx, 10f64.powf(n_mid), seed)?;
    let a = probe.delta_t * probe.nbar.sqrt();
    let b = (1.0 - eta) * ctx.constants.hbar * ctx.omega
        / (ctx.material.mass * ctx.material.specific_heat);
    let guess = if b > 0.0 {
        (a / (2.0 * b)).powf(2.0 / 3.0).clamp(lo, hi)
    } else {
        return Err(Error::Range(
            "lossless material: total bound decreases monotonically, no interior optimum".into(),
        ));
    };
    let (l_lo, l_hi) = (lo.log10(), hi.log10());
    let l_guess = guess.log10();
    let span = ((l_hi - l_lo) / 8.0).max(0.5);
    let (mut g_lo, mut g_hi) = (
        (l_guess - span).max(l_lo),
        (l_guess + span).min(l_hi),
    );
    // Walk the bracket outward until the minimum is interior.
    let eval_log = |l: f64| -> Result<f64> {
        Ok(total_at_nbar(ctx, 10f64.powf(l), seed)?.0)
    };
    for _ in 0..16 {
        let f_lo = eval_log(g_lo)?;
        let f_hi = eval_log(g_hi)?;
        let f_mid = eval_log((g_lo + g_hi) / 2.0)?;
        if f_mid <= f_lo && f_mid <= f_hi {
            break;
        }
        if f_lo < f_hi {
            if (g_lo - l_lo).abs() < 1e-12 {
                break;
            }
            g_lo = (g_lo - span).max(l_lo);
        } else {
            if (g_hi - l_hi).abs() < 1e-12 {
                break;
            }
            g_hi = (g_hi + span).min(l_hi);
        }
    }
    let mut cache: Option<(f64, f64)> = None;
    let (l_best, _) = golden_section(
        |l| match eval_log(l) {
            Ok(v) => {
                cache = Some((l, v));
                v
            }
            Err(_) => f64::INFINITY,
        },
        g_lo,
        g_hi,
        1e-6,
    );
    let nbar_best = 10f64.powf(l_best);
    let (total, result) = total_at_nbar(ctx, nbar_best, seed)?;
    let heating = total - result.delta_t;
    if (nbar_best / lo - 1.0).abs() < 1e-4 || (nbar_best / hi - 1.0).abs() < 1e-4 {
        return Err(Error::Range(format!(
            "optimum pinned to search boundary at nbar = {nbar_best:.3e}"
        )));
    }
    Ok(EnergyOptimum {
        result,
        heating,
        total,
    })
}

/// Analytic optimum of a / sqrt(nbar) + b nbar for the large-energy bounds.
/// Returns (nbar_star, delta_t_min).
pub fn analytic_energy_optimum(
    ctx: &ProbeContext,
    kind: crate::metrology::AsymptoticKind,
    n_res: f64,
) -> Result<(f64, f64)> {
    let eta = ctx.material.transmissivity();
    let alpha = ctx.phase_coupling();
    let a = match kind {
        crate::metrology::AsymptoticKind::Squeezed => {
            crate::metrology::asymptotic_bound_squeezed(eta, n_res, 1.0, alpha)?
        }
        crate::metrology::AsymptoticKind::Coherent => {
            crate::metrology::asymptotic_bound_coherent(eta, n_res, 1.0, alpha)?
        }
    } / ctx.repetitions.sqrt();
    let b = (1.0 - eta) * ctx.constants.hbar * ctx.omega
        / (ctx.material.mass * ctx.material.specific_heat);
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::Range(
            "lossless sample: no heating, the bound has no interior optimum".into(),
        ));
    }
    let nbar_star = (a / (2.0 * b)).powf(2.0 / 3.0);
    let dt_min = 3.0 * a.powf(2.0 / 3.0) * b.powf(1.0 / 3.0) / 2f64.powf(2.0 / 3.0);
    Ok((nbar_star, dt_min))
}

/// One row of an energy sweep. All interferometric columns are total bounds,
/// statistical plus probe-heating disturbance, so each traces a U-shape.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub nbar: f64,
    /// Exact optimal-probe total bound, K.
    pub dt_exact: f64,
    /// Large-energy squeezed-probe total bound, K.
    pub dt_sq_asym: f64,
    /// Large-energy coherent-probe total bound, K.
    pub dt_coh_asym: f64,
    /// Blackbody pyrometer bound for the reference detector, K.
    pub dt_pyro: f64,
}

/// Sweep the optimal-probe bound over a log grid of energies, in parallel.
/// Each row gets a deterministic seed derived from `seed` and its index.
pub fn sweep_nbar(
    ctx: &ProbeContext,
    nbar_range: (f64, f64),
    points: usize,
    seed: u64,
    pyro: &crate::pyrometer::PyrometerConfig,
) -> Result<Vec<SweepRow>> {
    let (lo, hi) = nbar_range;
    if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi <= lo {
        return Err(Error::Range(format!("need 0 < lo < hi, got [{lo}, {hi}]")));
    }
    if points < 2 {
        return Err(Error::Range("need at least 2 sweep points".into()));
    }
    let eta = ctx.material.transmissivity();
    let alpha = ctx.phase_coupling();
    let dt_pyro = crate::pyrometer::pyrometer_precision(&ctx.constants, pyro)?;
    let (l_lo, l_hi) = (lo.log10(), hi.log10());
    let rows: Result<Vec<SweepRow>> = (0..points)
        .into_par_iter()
        .map(|i| {
            let l = l_lo + (l_hi - l_lo) * i as f64 / (points - 1) as f64;
            let nbar = 10f64.powf(l);
            let res = optimize_state_at_nbar(ctx, nbar, seed.wrapping_add(i as u64))?;
            let heating = heating_disturbance(
                &ctx.constants,
                nbar,
                eta,
                ctx.omega,
                ctx.material.mass,
                ctx.material.specific_heat,
            )?;
            let k = ctx.repetitions.sqrt();
            let dt_sq =
                crate::metrology::asymptotic_bound_squeezed(eta, ctx.n_res, nbar, alpha)? / k;
            let dt_coh =
                crate::metrology::asymptotic_bound_coherent(eta, ctx.n_res, nbar, alpha)? / k;
            Ok(SweepRow {
                nbar,
                dt_exact: res.delta_t + heating,
                dt_sq_asym: dt_sq + heating,
                dt_coh_asym: dt_coh + heating,
                dt_pyro,
            })
        })
        .collect();
    rows
}
