//! Closed-form probe response: sideband coefficient chain, anti-Stokes
//! amplitude, output field, transmission, phase, and group delay.
//!
//! Conventions: delta is the probe detuning from the drive frame (rad/s).
//! Re of the rescaled output field is the absorption quadrature, Im the
//! dispersion quadrature. Positive group delay is slow light.

use num_complex::Complex64;

use crate::error::ResponseError;
use crate::model::SweepSpec;
use crate::steady_state::DerivedState;

/// Relative floor (in units of the natural scale) below which a denominator
/// is reported as vanishing rather than divided by.
const VANISH_REL: f64 = 1e-14;

/// Default finite-difference step for the group delay, as a fraction of
/// omega_b1. Balances truncation against cancellation for delays in the
/// 1-100 us range at 10 MHz mechanics.
pub const DEFAULT_DELAY_STEP_FRAC: f64 = 1e-5;

/// Warning threshold on the step-halving disagreement of the delay estimate.
pub const DELAY_STEP_WARNING: f64 = 5e-3;

/// The eight sideband denominators evaluated at one probe detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaSet {
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub alpha3: Complex64,
    pub alpha4: Complex64,
    pub alpha5: Complex64,
    pub alpha6: Complex64,
    pub alpha7: Complex64,
    pub alpha8: Complex64,
}

/// alpha1 = kappa_c + i(Dc - delta)        alpha2 = kappa_c - i(Dc + delta)
/// alpha3 = kappa_a + i(Da - delta)        alpha4 = kappa_a - i(Da + delta)
/// alpha5 = kappa_m + i(Dm - delta)        alpha6 = kappa_m - i(Dm + delta)
/// alpha7 = omega_b1 - (delta/omega_b1)(delta + i gamma_b1)
/// alpha8 = omega_b2 - (delta/omega_b2)(delta + i gamma_b2)
pub fn alpha_coeffs(state: &DerivedState, delta: f64) -> AlphaSet {
    let p = &state.params;
    let dc = state.delta_c_eff;
    let dm = state.delta_m_eff;
    let da = p.delta_a;
    AlphaSet {
        alpha1: Complex64::new(p.kappa_c, dc - delta),
        alpha2: Complex64::new(p.kappa_c, -(dc + delta)),
        alpha3: Complex64::new(p.kappa_a, da - delta),
        alpha4: Complex64::new(p.kappa_a, -(da + delta)),
        alpha5: Complex64::new(p.kappa_m, dm - delta),
        alpha6: Complex64::new(p.kappa_m, -(dm + delta)),
        alpha7: Complex64::new(p.omega_b1, 0.0)
            - delta / p.omega_b1 * Complex64::new(delta, p.gamma_b1),
        alpha8: Complex64::new(p.omega_b2, 0.0)
            - delta / p.omega_b2 * Complex64::new(delta, p.gamma_b2),
    }
}

/// The seven composite coefficients built on top of the alphas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalSet {
    pub a_cal: Complex64,
    pub b_cal: Complex64,
    pub c_cal: Complex64,
    pub d_cal: Complex64,
    pub e_cal: Complex64,
    pub m_cal: Complex64,
    pub n_cal: Complex64,
}

fn ensure_nonzero(
    z: Complex64,
    symbol: &'static str,
    delta: f64,
    scale: f64,
) -> Result<Complex64, ResponseError> {
    if z.norm() < VANISH_REL * scale {
        Err(ResponseError::VanishingDenominator { symbol, delta })
    } else {
        Ok(z)
    }
}

/// Evaluate A..N at one detuning:
///
/// A = 1 + g_a^2/(a4 a6)
/// B = 1/a5 + 2 lambda e^{i theta}/(A a5 a6)
/// C = 1 + g_a^2/(a3 a5) - 4 lambda^2/(A a5 a6)
/// D = i a7 - G1^2/a2 - Gmm^2/(A a6) + (Gmm^2 B/C)(1 - 2 lambda e^{-i theta}/(A a6))
/// E = i a8 - G2^2/a2
/// M = 1/D + G2^2/(D E a2)
/// N = 1 - G1^2 G2^2/(D E a2^2)
pub fn cal_coeffs(state: &DerivedState, delta: f64) -> Result<CalSet, ResponseError> {
    let p = &state.params;
    let al = alpha_coeffs(state, delta);
    let wb = p.omega_b1;
    let i = Complex64::new(0.0, 1.0);

    let a2 = ensure_nonzero(al.alpha2, "alpha2", delta, wb)?;
    let a3 = ensure_nonzero(al.alpha3, "alpha3", delta, wb)?;
    let a4 = ensure_nonzero(al.alpha4, "alpha4", delta, wb)?;
    let a5 = ensure_nonzero(al.alpha5, "alpha5", delta, wb)?;
    let a6 = ensure_nonzero(al.alpha6, "alpha6", delta, wb)?;

    let ga2 = p.g_a * p.g_a;
    let lam = p.lambda_sq;
    let phase = Complex64::from_polar(1.0, p.theta);

    let a_cal = ensure_nonzero(1.0 + ga2 / (a4 * a6), "A", delta, 1.0)?;
    let b_cal = 1.0 / a5 + 2.0 * lam * phase / (a_cal * a5 * a6);
    let c_cal = ensure_nonzero(
        1.0 + ga2 / (a3 * a5) - 4.0 * lam * lam / (a_cal * a5 * a6),
        "C",
        delta,
        1.0,
    )?;

    let g1 = state.gc1_red;
    let g2 = state.gc2_red;
    let gmm = state.gm_red;
    let d_cal = ensure_nonzero(
        i * al.alpha7 - g1 * g1 / a2 - gmm * gmm / (a_cal * a6)
            + (gmm * gmm * b_cal / c_cal) * (1.0 - 2.0 * lam * phase.conj() / (a_cal * a6)),
        "D",
        delta,
        wb,
    )?;
    let e_cal = ensure_nonzero(i * al.alpha8 - g2 * g2 / a2, "E", delta, wb)?;
    let m_cal = 1.0 / d_cal + g2 * g2 / (d_cal * e_cal * a2);
    let n_cal = ensure_nonzero(
        1.0 - g1 * g1 * g2 * g2 / (d_cal * e_cal * a2 * a2),
        "N",
        delta,
        1.0,
    )?;

    Ok(CalSet {
        a_cal,
        b_cal,
        c_cal,
        d_cal,
        e_cal,
        m_cal,
        n_cal,
    })
}

/// Scale-free anti-Stokes amplitude c_-/eps_p:
/// [a1 + G2^2/E + (G1^2 M/N)(1 + G2^2/(E a2))]^{-1}.
pub fn probe_sideband_ratio(state: &DerivedState, delta: f64) -> Result<Complex64, ResponseError> {
    let al = alpha_coeffs(state, delta);
    let cal = cal_coeffs(state, delta)?;
    let g1 = state.gc1_red;
    let g2 = state.gc2_red;
    let bracket = al.alpha1
        + g2 * g2 / cal.e_cal
        + (g1 * g1 * cal.m_cal / cal.n_cal) * (1.0 + g2 * g2 / (cal.e_cal * al.alpha2));
    if bracket.norm() < VANISH_REL * state.params.omega_b1 {
        return Err(ResponseError::Pole { delta });
    }
    Ok(1.0 / bracket)
}

/// Full anti-Stokes amplitude c_- = eps_p * (scale-free ratio).
pub fn probe_sideband(state: &DerivedState, delta: f64) -> Result<Complex64, ResponseError> {
    Ok(state.params.eps_p * probe_sideband_ratio(state, delta)?)
}

/// Rescaled output field 2 kappa_c c_-/eps_p. Re is absorption, Im is
/// dispersion.
pub fn output_field(state: &DerivedState, delta: f64) -> Result<Complex64, ResponseError> {
    Ok(2.0 * state.params.kappa_c * probe_sideband_ratio(state, delta)?)
}

/// Evaluation options shared by transmission-derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResponseOptions {
    /// Rescale the transmitted field with kappa_a instead of kappa_c.
    /// Off by default: the output field and the transmission describe the
    /// same optical port, so they share kappa_c.
    pub strict_kappa_a: bool,
    /// Finite-difference step for the group delay, rad/s.
    pub delay_step: Option<f64>,
}

/// Rescaled transmitted probe field 1 - 2 kappa (c_-/eps_p).
pub fn transmission_opts(
    state: &DerivedState,
    delta: f64,
    opts: &ResponseOptions,
) -> Result<Complex64, ResponseError> {
    let kappa = if opts.strict_kappa_a {
        state.params.kappa_a
    } else {
        state.params.kappa_c
    };
    Ok(1.0 - 2.0 * kappa * probe_sideband_ratio(state, delta)?)
}

pub fn transmission(state: &DerivedState, delta: f64) -> Result<Complex64, ResponseError> {
    transmission_opts(state, delta, &ResponseOptions::default())
}

/// Principal-value phase of the transmitted field, in (-pi, pi].
pub fn phase_opts(
    state: &DerivedState,
    delta: f64,
    opts: &ResponseOptions,
) -> Result<f64, ResponseError> {
    let t = transmission_opts(state, delta, opts)?;
    if t.norm() == 0.0 {
        return Err(ResponseError::ZeroTransmission { delta });
    }
    Ok(t.arg())
}

pub fn phase(state: &DerivedState, delta: f64) -> Result<f64, ResponseError> {
    phase_opts(state, delta, &ResponseOptions::default())
}

/// Group delay estimate with its own step-halving self-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayEstimate {
    /// tau = Im[(T(d+h) - T(d-h)) / (2h T(d))], seconds.
    pub tau: f64,
    /// Step h actually used, rad/s.
    pub step: f64,
    /// |tau(h) - tau(h/2)| / |tau(h/2)|.
    pub step_halving_rel_diff: f64,
}

impl DelayEstimate {
    /// False when the step-halving disagreement exceeds 0.5%, i.e. the
    /// finite difference has not converged at this detuning.
    pub fn is_converged(&self) -> bool {
        self.step_halving_rel_diff <= DELAY_STEP_WARNING
    }
}

fn delay_from_step(
    state: &DerivedState,
    delta: f64,
    h: f64,
    t0: Complex64,
    opts: &ResponseOptions,
) -> Result<f64, ResponseError> {
    let tp = transmission_opts(state, delta + h, opts)?;
    let tm = transmission_opts(state, delta - h, opts)?;
    Ok(((tp - tm) / (2.0 * h * t0)).im)
}

/// Group delay tau = d(arg T)/d(delta) via the complex ratio
/// Im[(dT/ddelta)/T], which needs no phase unwrapping and so stays smooth
/// across deep transmission dips where the phase jumps by ~pi.
pub fn group_delay_opts(
    state: &DerivedState,
    delta: f64,
    opts: &ResponseOptions,
) -> Result<DelayEstimate, ResponseError> {
    let h = opts
        .delay_step
        .unwrap_or(DEFAULT_DELAY_STEP_FRAC * state.params.omega_b1);
    let t0 = transmission_opts(state, delta, opts)?;
    if t0.norm() == 0.0 {
        return Err(ResponseError::ZeroTransmission { delta });
    }
    let tau = delay_from_step(state, delta, h, t0, opts)?;
    let tau_half = delay_from_step(state, delta, 0.5 * h, t0, opts)?;
    let rel = if tau_half != 0.0 {
        ((tau - tau_half) / tau_half).abs()
    } else if tau == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(DelayEstimate {
        tau,
        step: h,
        step_halving_rel_diff: rel,
    })
}

pub fn group_delay(
    state: &DerivedState,
    delta: f64,
    step: Option<f64>,
) -> Result<DelayEstimate, ResponseError> {
    group_delay_opts(
        state,
        delta,
        &ResponseOptions {
            delay_step: step,
            ..ResponseOptions::default()
        },
    )
}

/// Everything the response yields at one probe detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponsePoint {
    /// Probe detuning, rad/s.
    pub delta: f64,
    /// Anti-Stokes amplitude (c_-), full scale.
    pub c_minus: Complex64,
    /// Rescaled output field.
    pub eps_out: Complex64,
    /// Rescaled transmitted field.
    pub transmission: Complex64,
    /// Phase of the transmitted field, rad.
    pub phi: f64,
    /// Group delay, s.
    pub tau: f64,
    /// True when the delay finite difference failed its step-halving check.
    pub tau_step_warning: bool,
}

/// A grid point that could not be evaluated.
#[derive(Debug)]
pub struct PointFailure {
    pub index: usize,
    pub delta: f64,
    pub error: ResponseError,
}

/// Response evaluated over a detuning grid. Failures are collected per
/// point instead of aborting the sweep.
#[derive(Debug, Default)]
pub struct Spectrum {
    pub points: Vec<ResponsePoint>,
    pub failures: Vec<PointFailure>,
}

pub fn spectrum_opts(
    state: &DerivedState,
    sweep: &SweepSpec,
    opts: &ResponseOptions,
) -> Result<Spectrum, ResponseError> {
    sweep
        .validate()
        .map_err(|e| ResponseError::Sweep(e.to_string()))?;
    let mut out = Spectrum {
        points: Vec::with_capacity(sweep.n_points),
        failures: Vec::new(),
    };
    for (index, delta) in sweep.grid(state.params.omega_b1).into_iter().enumerate() {
        match response_point(state, delta, opts) {
            Ok(point) => out.points.push(point),
            Err(error) => out.failures.push(PointFailure {
                index,
                delta,
                error,
            }),
        }
    }
    Ok(out)
}

pub fn spectrum(state: &DerivedState, sweep: &SweepSpec) -> Result<Spectrum, ResponseError> {
    spectrum_opts(state, sweep, &ResponseOptions::default())
}

fn response_point(
    state: &DerivedState,
    delta: f64,
    opts: &ResponseOptions,
) -> Result<ResponsePoint, ResponseError> {
    let ratio = probe_sideband_ratio(state, delta)?;
    let c_minus = state.params.eps_p * ratio;
    let eps_out = 2.0 * state.params.kappa_c * ratio;
    let kappa = if opts.strict_kappa_a {
        state.params.kappa_a
    } else {
        state.params.kappa_c
    };
    let transmission = 1.0 - 2.0 * kappa * ratio;
    if transmission.norm() == 0.0 {
        return Err(ResponseError::ZeroTransmission { delta });
    }
    let phi = transmission.arg();
    let delay = group_delay_opts(state, delta, opts)?;
    Ok(ResponsePoint {
        delta,
        c_minus,
        eps_out,
        transmission,
        phi,
        tau: delay.tau,
        tau_step_warning: !delay.is_converged(),
    })
}
