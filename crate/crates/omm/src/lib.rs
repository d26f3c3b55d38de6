//! Linear probe response of a driven opto-magnomechanical cavity.
//!
//! The system couples an optical cavity to two mechanical modes, one of
//! which is driven magnetostrictively by a magnon mode that in turn talks
//! to a microwave cavity; a two-magnon squeezing drive acts on the magnon.
//! A strong control field sets the operating point and a weak probe is
//! scanned across it. This crate computes, from one validated parameter
//! set:
//!
//! - the steady state and effective detunings ([`steady_state`]),
//! - the closed-form anti-Stokes response, output field, transmission,
//!   phase, and group delay ([`response`]),
//! - an independent 8x8 sideband linear-system solve used as ground truth
//!   for the closed form ([`oracle`]),
//! - transparency-window counts, Fano asymmetry scores, and refined delay
//!   extrema ([`analysis`]).
//!
//! Configs quote frequencies as nu = omega/2pi in Hz; everything internal
//! is angular (rad/s). See [`model`] for the config schema and the built-in
//! presets.

pub mod analysis;
pub mod error;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod response;
pub mod steady_state;

pub use analysis::{
    delay_extrema, fano_asymmetry, fano_asymmetry_in, find_windows, find_windows_in, DelayExtremum,
    ExtremumKind, FanoScore, WindowReport, DEFAULT_PROMINENCE,
};
pub use error::{AnalysisError, ModelError, OracleError, ResponseError, SteadyError};
pub use model::{
    apply_swept, build_params, paper_preset, Config, DetuningMode, Preset, SweepSpec, SweptName,
    SweptParam, SystemParams,
};
pub use oracle::{
    sideband_system, solve_sidebands, verify_closed_form, verify_random_draws, RandomDrawReport,
    SidebandSolution, VerifyReport,
};
pub use response::{
    alpha_coeffs, cal_coeffs, group_delay, output_field, phase, probe_sideband,
    probe_sideband_ratio, spectrum, spectrum_opts, transmission, transmission_opts, AlphaSet,
    CalSet, DelayEstimate, ResponseOptions, ResponsePoint, Spectrum,
};
pub use steady_state::{derive, freeze_prescribed, solve_self_consistent, DerivedState};
