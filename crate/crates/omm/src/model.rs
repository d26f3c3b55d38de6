//! Model parameters, unit conventions, validation, and figure presets.
//!
//! Configs quote every frequency-like quantity as nu = omega/2pi in Hz;
//! internally everything is angular (rad/s). Converting once at build time
//! keeps factor-of-2pi mistakes out of the physics code.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::error::ModelError;

/// How the effective detunings and couplings are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetuningMode {
    /// Effective detunings and coupling magnitudes are given directly.
    Prescribed,
    /// Bare detunings and single-photon couplings are given; the steady
    /// state closes the loop self-consistently.
    SelfConsistent,
}

/// Prescribed-mode block of a config document (Hz units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrescribedConfig {
    /// Effective cavity detuning, Hz.
    pub delta_c_eff_hz: f64,
    /// Effective magnon detuning, Hz.
    pub delta_m_eff_hz: f64,
    /// Effective photon-phonon coupling to mirror mode 1, Hz.
    pub g_c1_hz: f64,
    /// Effective photon-phonon coupling to mirror mode 2, Hz.
    pub g_c2_hz: f64,
    /// Effective magnon-phonon coupling, Hz.
    pub g_m_hz: f64,
}

/// First-principles block of a config document (Hz units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FirstPrinciplesConfig {
    /// Bare cavity detuning, Hz.
    pub delta_c_hz: f64,
    /// Bare magnon detuning, Hz.
    pub delta_m_hz: f64,
    /// Single-photon optomechanical coupling to mode 1, Hz.
    pub g1_hz: f64,
    /// Single-photon optomechanical coupling to mode 2, Hz.
    pub g2_hz: f64,
    /// Single-magnon magnomechanical coupling, Hz.
    pub gm_hz: f64,
    /// Laser drive amplitude, Hz-equivalent (amplitude/2pi).
    pub eps_l_hz: f64,
    /// Magnon Rabi drive amplitude, Hz-equivalent.
    pub omega_hz: f64,
}

fn default_eps_p() -> f64 {
    1.0
}

/// Flat, JSON-compatible config document. All frequency-like values are
/// nu = omega/2pi in Hz; phases are radians.
///
/// Exactly one of `prescribed` / `first_principles` must be present. The
/// squeezing amplitude may be given either as `lambda_hz` or as a multiple
/// of the optical decay rate via `lambda_over_kappa_c` (not both).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub omega_b1_hz: f64,
    pub omega_b2_hz: f64,
    pub kappa_c_hz: f64,
    pub kappa_a_hz: f64,
    pub kappa_m_hz: f64,
    pub gamma_b1_hz: f64,
    pub gamma_b2_hz: f64,
    pub g_a_hz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_over_kappa_c: Option<f64>,
    #[serde(default)]
    pub theta_rad: f64,
    pub delta_a_hz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prescribed: Option<PrescribedConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_principles: Option<FirstPrinciplesConfig>,
    /// Probe amplitude (arbitrary units; cancels in the rescaled output).
    #[serde(default = "default_eps_p")]
    pub eps_p: f64,
}

impl Config {
    pub fn from_json_str(s: &str) -> Result<Self, ModelError> {
        serde_json::from_str(s).map_err(|e| ModelError::Parse(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        // Serialization of a validated config cannot fail.
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Prescribed effective quantities in angular units (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prescribed {
    pub delta_c_eff: f64,
    pub delta_m_eff: f64,
    pub g_c1: f64,
    pub g_c2: f64,
    pub g_m: f64,
}

/// First-principles quantities in angular units (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstPrinciples {
    pub delta_c: f64,
    pub delta_m: f64,
    pub g1: f64,
    pub g2: f64,
    pub gm: f64,
    pub eps_l: f64,
    pub omega: f64,
}

/// Validated system parameters, all angular (rad/s). Immutable once built;
/// safe to share and send across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub omega_b1: f64,
    pub omega_b2: f64,
    pub kappa_c: f64,
    pub kappa_a: f64,
    pub kappa_m: f64,
    pub gamma_b1: f64,
    pub gamma_b2: f64,
    pub g_a: f64,
    /// Magnon squeezing amplitude lambda, rad/s.
    pub lambda_sq: f64,
    /// Squeezing phase theta, rad.
    pub theta: f64,
    /// Microwave cavity detuning Delta_a, rad/s.
    pub delta_a: f64,
    pub eps_p: f64,
    pub prescribed: Option<Prescribed>,
    pub first_principles: Option<FirstPrinciples>,
    /// The originating config, retained so `emit_config` round-trips exactly.
    source: Config,
}

impl SystemParams {
    pub fn mode(&self) -> DetuningMode {
        if self.prescribed.is_some() {
            DetuningMode::Prescribed
        } else {
            DetuningMode::SelfConsistent
        }
    }

    /// The config document this parameter set was built from, bit-for-bit.
    pub fn emit_config(&self) -> Config {
        self.source.clone()
    }
}

fn require_positive(name: &'static str, value: f64) -> Result<(), ModelError> {
    if !value.is_finite() {
        return Err(ModelError::NonFinite { name, value });
    }
    if value <= 0.0 {
        return Err(ModelError::NonPositiveRate { name, value });
    }
    Ok(())
}

fn require_non_negative(name: &'static str, value: f64) -> Result<(), ModelError> {
    if !value.is_finite() {
        return Err(ModelError::NonFinite { name, value });
    }
    if value < 0.0 {
        return Err(ModelError::Negative { name, value });
    }
    Ok(())
}

fn require_finite(name: &'static str, value: f64) -> Result<(), ModelError> {
    if !value.is_finite() {
        return Err(ModelError::NonFinite { name, value });
    }
    Ok(())
}

/// Build validated `SystemParams` from a config document, converting every
/// frequency-like value from Hz to rad/s.
pub fn build_params(cfg: &Config) -> Result<SystemParams, ModelError> {
    require_positive("omega_b1_hz", cfg.omega_b1_hz)?;
    require_positive("omega_b2_hz", cfg.omega_b2_hz)?;
    require_positive("kappa_c_hz", cfg.kappa_c_hz)?;
    require_positive("kappa_a_hz", cfg.kappa_a_hz)?;
    require_positive("kappa_m_hz", cfg.kappa_m_hz)?;
    require_positive("gamma_b1_hz", cfg.gamma_b1_hz)?;
    require_positive("gamma_b2_hz", cfg.gamma_b2_hz)?;
    require_non_negative("g_a_hz", cfg.g_a_hz)?;
    require_finite("theta_rad", cfg.theta_rad)?;
    require_finite("delta_a_hz", cfg.delta_a_hz)?;
    require_positive("eps_p", cfg.eps_p)?;

    let kappa_c = TAU * cfg.kappa_c_hz;
    let lambda_sq = match (cfg.lambda_hz, cfg.lambda_over_kappa_c) {
        (Some(_), Some(_)) => return Err(ModelError::LambdaConflict),
        (Some(hz), None) => {
            require_non_negative("lambda_hz", hz)?;
            TAU * hz
        }
        (None, Some(ratio)) => {
            require_non_negative("lambda_over_kappa_c", ratio)?;
            ratio * kappa_c
        }
        (None, None) => 0.0,
    };

    let (prescribed, first_principles) = match (&cfg.prescribed, &cfg.first_principles) {
        (Some(p), None) => {
            require_finite("prescribed.delta_c_eff_hz", p.delta_c_eff_hz)?;
            require_finite("prescribed.delta_m_eff_hz", p.delta_m_eff_hz)?;
            require_non_negative("prescribed.g_c1_hz", p.g_c1_hz)?;
            require_non_negative("prescribed.g_c2_hz", p.g_c2_hz)?;
            require_non_negative("prescribed.g_m_hz", p.g_m_hz)?;
            (
                Some(Prescribed {
                    delta_c_eff: TAU * p.delta_c_eff_hz,
                    delta_m_eff: TAU * p.delta_m_eff_hz,
                    g_c1: TAU * p.g_c1_hz,
                    g_c2: TAU * p.g_c2_hz,
                    g_m: TAU * p.g_m_hz,
                }),
                None,
            )
        }
        (None, Some(f)) => {
            require_finite("first_principles.delta_c_hz", f.delta_c_hz)?;
            require_finite("first_principles.delta_m_hz", f.delta_m_hz)?;
            require_non_negative("first_principles.g1_hz", f.g1_hz)?;
            require_non_negative("first_principles.g2_hz", f.g2_hz)?;
            require_non_negative("first_principles.gm_hz", f.gm_hz)?;
            require_finite("first_principles.eps_l_hz", f.eps_l_hz)?;
            require_finite("first_principles.omega_hz", f.omega_hz)?;
            (
                None,
                Some(FirstPrinciples {
                    delta_c: TAU * f.delta_c_hz,
                    delta_m: TAU * f.delta_m_hz,
                    g1: TAU * f.g1_hz,
                    g2: TAU * f.g2_hz,
                    gm: TAU * f.gm_hz,
                    eps_l: TAU * f.eps_l_hz,
                    omega: TAU * f.omega_hz,
                }),
            )
        }
        _ => return Err(ModelError::BlockConflict),
    };

    Ok(SystemParams {
        omega_b1: TAU * cfg.omega_b1_hz,
        omega_b2: TAU * cfg.omega_b2_hz,
        kappa_c,
        kappa_a: TAU * cfg.kappa_a_hz,
        kappa_m: TAU * cfg.kappa_m_hz,
        gamma_b1: TAU * cfg.gamma_b1_hz,
        gamma_b2: TAU * cfg.gamma_b2_hz,
        g_a: TAU * cfg.g_a_hz,
        lambda_sq,
        theta: cfg.theta_rad,
        delta_a: TAU * cfg.delta_a_hz,
        eps_p: cfg.eps_p,
        prescribed,
        first_principles,
        source: cfg.clone(),
    })
}

/// A parameter that can be swept trace-by-trace on top of a base config.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweptName {
    GA,
    GC1,
    GC2,
    GM,
    Lambda,
    LambdaOverKappaC,
    Theta,
    DeltaCEff,
    DeltaMEff,
}

impl SweptName {
    pub fn key(&self) -> &'static str {
        match self {
            SweptName::GA => "g_a",
            SweptName::GC1 => "G_c1",
            SweptName::GC2 => "G_c2",
            SweptName::GM => "G_m",
            SweptName::Lambda => "lambda",
            SweptName::LambdaOverKappaC => "lambda_over_kappa_c",
            SweptName::Theta => "theta",
            SweptName::DeltaCEff => "Delta_c_eff",
            SweptName::DeltaMEff => "Delta_m_eff",
        }
    }

    /// Whether values of this parameter are Hz-like (unit suffixes allowed).
    pub fn is_hz(&self) -> bool {
        !matches!(self, SweptName::LambdaOverKappaC | SweptName::Theta)
    }
}

impl FromStr for SweptName {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "g_a" => Ok(SweptName::GA),
            "G_c1" => Ok(SweptName::GC1),
            "G_c2" => Ok(SweptName::GC2),
            "G_m" => Ok(SweptName::GM),
            "lambda" => Ok(SweptName::Lambda),
            "lambda_over_kappa_c" => Ok(SweptName::LambdaOverKappaC),
            "theta" => Ok(SweptName::Theta),
            "Delta_c_eff" => Ok(SweptName::DeltaCEff),
            "Delta_m_eff" => Ok(SweptName::DeltaMEff),
            other => Err(ModelError::InvalidSweep(format!(
                "unknown swept parameter `{other}`"
            ))),
        }
    }
}

impl fmt::Display for SweptName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// One swept parameter and its trace values (Hz for Hz-like parameters,
/// plain ratio for `lambda_over_kappa_c`, radians for `theta`).
#[derive(Debug, Clone, PartialEq)]
pub struct SweptParam {
    pub name: SweptName,
    pub values: Vec<f64>,
}

/// Grid definition over the probe detuning, in units of omega_b1, with an
/// optional swept parameter for multi-trace runs.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Lower edge of the detuning grid, units of omega_b1.
    pub delta_min: f64,
    /// Upper edge of the detuning grid, units of omega_b1.
    pub delta_max: f64,
    pub n_points: usize,
    pub swept: Option<SweptParam>,
}

impl SweepSpec {
    pub fn new(
        delta_min: f64,
        delta_max: f64,
        n_points: usize,
        swept: Option<SweptParam>,
    ) -> Result<Self, ModelError> {
        let spec = SweepSpec {
            delta_min,
            delta_max,
            n_points,
            swept,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !self.delta_min.is_finite() || !self.delta_max.is_finite() {
            return Err(ModelError::InvalidSweep("non-finite grid edge".into()));
        }
        if self.delta_min >= self.delta_max {
            return Err(ModelError::InvalidSweep(format!(
                "delta_min ({}) must be < delta_max ({})",
                self.delta_min, self.delta_max
            )));
        }
        if self.n_points < 3 {
            return Err(ModelError::InvalidSweep(format!(
                "n_points must be >= 3, got {}",
                self.n_points
            )));
        }
        if let Some(sw) = &self.swept {
            if sw.values.is_empty() {
                return Err(ModelError::InvalidSweep(format!(
                    "swept parameter {} has no values",
                    sw.name
                )));
            }
            if sw.values.iter().any(|v| !v.is_finite()) {
                return Err(ModelError::InvalidSweep(format!(
                    "swept parameter {} has a non-finite value",
                    sw.name
                )));
            }
        }
        Ok(())
    }

    /// The detuning grid in rad/s for a given mechanical frequency.
    pub fn grid(&self, omega_b1: f64) -> Vec<f64> {
        let n = self.n_points;
        let step = (self.delta_max - self.delta_min) / (n - 1) as f64;
        (0..n)
            .map(|i| (self.delta_min + i as f64 * step) * omega_b1)
            .collect()
    }
}

/// Rebuild a parameter set with one swept parameter replaced. The change is
/// applied in config space (Hz) so emitted configs stay exact.
pub fn apply_swept(
    params: &SystemParams,
    name: SweptName,
    value: f64,
) -> Result<SystemParams, ModelError> {
    let mut cfg = params.emit_config();
    match name {
        SweptName::GA => cfg.g_a_hz = value,
        SweptName::Lambda => {
            cfg.lambda_hz = Some(value);
            cfg.lambda_over_kappa_c = None;
        }
        SweptName::LambdaOverKappaC => {
            cfg.lambda_over_kappa_c = Some(value);
            cfg.lambda_hz = None;
        }
        SweptName::Theta => cfg.theta_rad = value,
        SweptName::GC1
        | SweptName::GC2
        | SweptName::GM
        | SweptName::DeltaCEff
        | SweptName::DeltaMEff => {
            let block = cfg.prescribed.as_mut().ok_or(ModelError::SweptParamMode {
                name: name.key(),
                need: "prescribed",
            })?;
            match name {
                SweptName::GC1 => block.g_c1_hz = value,
                SweptName::GC2 => block.g_c2_hz = value,
                SweptName::GM => block.g_m_hz = value,
                SweptName::DeltaCEff => block.delta_c_eff_hz = value,
                SweptName::DeltaMEff => block.delta_m_eff_hz = value,
                _ => unreachable!(),
            }
        }
    }
    build_params(&cfg)
}

/// Built-in parameter presets. Each id names one panel/trace configuration;
/// all share the common operating point (mechanical modes at 10 MHz, optical
/// decay 2 MHz, microwave/magnon decay 1.5 MHz, effective cavity detuning at
/// +omega_b and magnon/microwave detunings at -omega_b) unless noted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Fig2a,
    Fig2b,
    Fig2c,
    Fig2d,
    Fig2e,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig5aFano,
    Fig5bFano,
    FigPhaseA,
    FigPhaseB,
    FigPhaseC,
    FigPhaseD,
    Fig6a,
    Fig6b,
    Fig8,
}

impl Preset {
    pub const ALL: [Preset; 18] = [
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig2c,
        Preset::Fig2d,
        Preset::Fig2e,
        Preset::Fig3a,
        Preset::Fig3b,
        Preset::Fig4a,
        Preset::Fig4b,
        Preset::Fig5aFano,
        Preset::Fig5bFano,
        Preset::FigPhaseA,
        Preset::FigPhaseB,
        Preset::FigPhaseC,
        Preset::FigPhaseD,
        Preset::Fig6a,
        Preset::Fig6b,
        Preset::Fig8,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig2c => "fig2c",
            Preset::Fig2d => "fig2d",
            Preset::Fig2e => "fig2e",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
            Preset::Fig4a => "fig4a",
            Preset::Fig4b => "fig4b",
            Preset::Fig5aFano => "fig5a_fano",
            Preset::Fig5bFano => "fig5b_fano",
            Preset::FigPhaseA => "fig_phase_a",
            Preset::FigPhaseB => "fig_phase_b",
            Preset::FigPhaseC => "fig_phase_c",
            Preset::FigPhaseD => "fig_phase_d",
            Preset::Fig6a => "fig6a",
            Preset::Fig6b => "fig6b",
            Preset::Fig8 => "fig8",
        }
    }
}

impl FromStr for Preset {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .iter()
            .copied()
            .find(|p| p.id() == s)
            .ok_or_else(|| ModelError::UnknownPreset(s.to_string()))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Common operating point shared by all presets.
fn base_config() -> Config {
    Config {
        omega_b1_hz: 10.0e6,
        omega_b2_hz: 10.0e6,
        kappa_c_hz: 2.0e6,
        kappa_a_hz: 1.5e6,
        kappa_m_hz: 1.5e6,
        gamma_b1_hz: 100.0,
        gamma_b2_hz: 100.0,
        g_a_hz: 2.0e6,
        lambda_hz: None,
        lambda_over_kappa_c: Some(0.5),
        theta_rad: 0.0,
        delta_a_hz: -10.0e6,
        prescribed: Some(PrescribedConfig {
            delta_c_eff_hz: 10.0e6,
            delta_m_eff_hz: -10.0e6,
            g_c1_hz: 3.2e6,
            g_c2_hz: 4.8e6,
            g_m_hz: 4.8e6,
        }),
        first_principles: None,
        eps_p: 1.0,
    }
}

/// Resolve a preset into validated parameters plus its default sweep
/// (delta/omega_b in [0, 2], 4001 points).
pub fn paper_preset(preset: Preset) -> (SystemParams, SweepSpec) {
    let mut cfg = base_config();
    let mut swept = None;
    {
        let p = cfg.prescribed.as_mut().expect("base config is prescribed");
        match preset {
            Preset::Fig2a => {
                p.g_c1_hz = 0.0;
                p.g_c2_hz = 0.0;
                cfg.g_a_hz = 0.0;
            }
            Preset::Fig2b => {
                p.g_c1_hz = 0.0;
                cfg.g_a_hz = 0.0;
            }
            Preset::Fig2c => {
                cfg.g_a_hz = 0.0;
            }
            Preset::Fig2d => {
                cfg.g_a_hz = 2.0e6;
            }
            Preset::Fig2e => {
                cfg.g_a_hz = 2.4e6;
            }
            Preset::Fig3a => {
                p.g_c1_hz = 0.0;
                p.g_c2_hz = 4.0e6;
                cfg.g_a_hz = 0.0;
            }
            Preset::Fig3b => {
                cfg.g_a_hz = 0.0;
            }
            Preset::Fig4a | Preset::Fig4b => {
                cfg.g_a_hz = 2.4e6;
            }
            Preset::Fig5aFano => {
                p.g_c1_hz = 3.5e6;
                p.delta_c_eff_hz = 9.0e6;
                cfg.g_a_hz = 0.0;
            }
            Preset::Fig5bFano => {
                p.g_c1_hz = 3.5e6;
                cfg.g_a_hz = 0.0;
            }
            Preset::FigPhaseA => {
                p.g_c1_hz = 0.0;
                cfg.g_a_hz = 0.0;
            }
            Preset::FigPhaseB => {
                cfg.g_a_hz = 0.0;
            }
            Preset::FigPhaseC => {
                cfg.g_a_hz = 2.0e6;
            }
            Preset::FigPhaseD => {
                cfg.g_a_hz = 3.0e6;
            }
            Preset::Fig6a => {
                p.g_c1_hz = 3.5e6;
                cfg.g_a_hz = 0.0;
                cfg.lambda_over_kappa_c = Some(0.0);
            }
            Preset::Fig6b => {
                p.g_c1_hz = 3.5e6;
                cfg.g_a_hz = 3.0e6;
            }
            Preset::Fig8 => {
                // The trace family sweeps the squeezing amplitude; g_a is
                // fixed at 1 MHz (matching the 1 MHz delay trace).
                p.g_c1_hz = 3.5e6;
                cfg.g_a_hz = 1.0e6;
                cfg.lambda_over_kappa_c = Some(0.0);
                swept = Some(SweptParam {
                    name: SweptName::LambdaOverKappaC,
                    values: vec![0.0, 0.15, 0.5, 0.9],
                });
            }
        }
    }
    let params = build_params(&cfg).expect("preset configs are valid");
    let sweep = SweepSpec::new(0.0, 2.0, 4001, swept).expect("preset sweep is valid");
    (params, sweep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_as_multiple_of_kappa_c() {
        // kappa_c/2pi = 2 MHz with lambda = 0.5 kappa_c
        let (params, _) = paper_preset(Preset::Fig2e);
        assert_eq!(params.lambda_sq, 0.5 * TAU * 2.0e6);
    }

    #[test]
    fn nonpositive_rate_rejected() {
        let mut cfg = base_config();
        cfg.kappa_c_hz = 0.0;
        match build_params(&cfg) {
            Err(ModelError::NonPositiveRate { name, .. }) => assert_eq!(name, "kappa_c_hz"),
            other => panic!("expected NonPositiveRate, got {other:?}"),
        }
    }

    #[test]
    fn angular_conversion() {
        // omega_b/2pi = 10 MHz -> omega_b1 = 2picross 1e7 rad/s
        let (params, _) = paper_preset(Preset::Fig2a);
        assert_eq!(params.omega_b1, TAU * 1.0e7);
    }

    #[test]
    fn both_blocks_rejected() {
        let mut cfg = base_config();
        cfg.first_principles = Some(FirstPrinciplesConfig {
            delta_c_hz: 1.0e7,
            delta_m_hz: -1.0e7,
            g1_hz: 50.0,
            g2_hz: 50.0,
            gm_hz: 50.0,
            eps_l_hz: 1.0e11,
            omega_hz: 1.0e11,
        });
        assert!(matches!(build_params(&cfg), Err(ModelError::BlockConflict)));
    }

    #[test]
    fn neither_block_rejected() {
        let mut cfg = base_config();
        cfg.prescribed = None;
        assert!(matches!(build_params(&cfg), Err(ModelError::BlockConflict)));
    }

    #[test]
    fn lambda_conflict_rejected() {
        let mut cfg = base_config();
        cfg.lambda_hz = Some(1.0e6);
        assert!(matches!(
            build_params(&cfg),
            Err(ModelError::LambdaConflict)
        ));
    }

    #[test]
    fn missing_key_reported() {
        let err = Config::from_json_str("{\"omega_b1_hz\": 1e7}").unwrap_err();
        match err {
            ModelError::Parse(msg) => assert!(msg.contains("missing field")),
            other => panic!("expected Parse, got {other:?}"),
        }
    }

    #[test]
    fn unknown_key_reported() {
        let mut json = base_config().to_json_string();
        json.insert_str(1, "\"omega_b_hz\": 1.0,");
        assert!(Config::from_json_str(&json).is_err());
    }

    #[test]
    fn config_round_trip_exact() {
        for preset in Preset::ALL {
            let (params, _) = paper_preset(preset);
            let rebuilt = build_params(&params.emit_config()).unwrap();
            assert_eq!(params, rebuilt, "round trip failed for {preset}");
        }
    }

    #[test]
    fn json_round_trip_exact() {
        let (params, _) = paper_preset(Preset::Fig5aFano);
        let json = params.emit_config().to_json_string();
        let rebuilt = build_params(&Config::from_json_str(&json).unwrap()).unwrap();
        assert_eq!(params, rebuilt);
    }

    #[test]
    fn every_frequency_field_is_tau_times_config() {
        let cfg = base_config();
        let p = build_params(&cfg).unwrap();
        assert_eq!(p.omega_b1, TAU * cfg.omega_b1_hz);
        assert_eq!(p.omega_b2, TAU * cfg.omega_b2_hz);
        assert_eq!(p.kappa_c, TAU * cfg.kappa_c_hz);
        assert_eq!(p.kappa_a, TAU * cfg.kappa_a_hz);
        assert_eq!(p.kappa_m, TAU * cfg.kappa_m_hz);
        assert_eq!(p.gamma_b1, TAU * cfg.gamma_b1_hz);
        assert_eq!(p.gamma_b2, TAU * cfg.gamma_b2_hz);
        assert_eq!(p.g_a, TAU * cfg.g_a_hz);
        assert_eq!(p.delta_a, TAU * cfg.delta_a_hz);
        let pr = p.prescribed.unwrap();
        let prc = cfg.prescribed.unwrap();
        assert_eq!(pr.delta_c_eff, TAU * prc.delta_c_eff_hz);
        assert_eq!(pr.delta_m_eff, TAU * prc.delta_m_eff_hz);
        assert_eq!(pr.g_c1, TAU * prc.g_c1_hz);
        assert_eq!(pr.g_c2, TAU * prc.g_c2_hz);
        assert_eq!(pr.g_m, TAU * prc.g_m_hz);
    }

    #[test]
    fn preset_fig2e_values() {
        let (p, sweep) = paper_preset(Preset::Fig2e);
        let pr = p.prescribed.unwrap();
        assert_eq!(pr.g_c1, TAU * 3.2e6);
        assert_eq!(pr.g_c2, TAU * 4.8e6);
        assert_eq!(p.g_a, TAU * 2.4e6);
        assert_eq!(p.lambda_sq, 0.5 * p.kappa_c);
        assert_eq!(p.theta, 0.0);
        assert_eq!(sweep.n_points, 4001);
        assert_eq!(sweep.delta_min, 0.0);
        assert_eq!(sweep.delta_max, 2.0);
    }

    #[test]
    fn preset_fig5a_fano_detuned() {
        let (p, _) = paper_preset(Preset::Fig5aFano);
        let pr = p.prescribed.unwrap();
        assert_eq!(pr.delta_c_eff, TAU * 9.0e6);
        assert!((pr.delta_c_eff - 0.9 * p.omega_b1).abs() < 1e-6 * p.omega_b1);
        assert_eq!(pr.g_c1, TAU * 3.5e6);
        assert_eq!(p.g_a, 0.0);
    }

    #[test]
    fn preset_fig6a_unsqueezed() {
        let (p, _) = paper_preset(Preset::Fig6a);
        let pr = p.prescribed.unwrap();
        assert_eq!(p.lambda_sq, 0.0);
        assert_eq!(pr.g_c1, TAU * 3.5e6);
        assert_eq!(pr.g_c2, TAU * 4.8e6);
        assert_eq!(pr.g_m, TAU * 4.8e6);
        assert_eq!(p.g_a, 0.0);
    }

    #[test]
    fn params_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<SystemParams>();
        assert_send_sync::<SweepSpec>();
    }

    #[test]
    fn preset_ids_round_trip() {
        for preset in Preset::ALL {
            assert_eq!(preset.id().parse::<Preset>().unwrap(), preset);
        }
        assert!(matches!(
            "fig99".parse::<Preset>(),
            Err(ModelError::UnknownPreset(_))
        ));
    }

    #[test]
    fn sweep_validation() {
        assert!(SweepSpec::new(0.0, 2.0, 3, None).is_ok());
        assert!(SweepSpec::new(0.0, 2.0, 2, None).is_err());
        assert!(SweepSpec::new(2.0, 0.0, 11, None).is_err());
        assert!(SweepSpec::new(1.0, 1.0, 11, None).is_err());
    }

    #[test]
    fn grid_endpoints() {
        let sweep = SweepSpec::new(0.0, 2.0, 5, None).unwrap();
        let grid = sweep.grid(TAU * 1.0e7);
        assert_eq!(grid.len(), 5);
        assert_eq!(grid[0], 0.0);
        assert!((grid[4] - 2.0 * TAU * 1.0e7).abs() < 1e-6);
        assert!((grid[2] - TAU * 1.0e7).abs() < 1e-6);
    }

    #[test]
    fn apply_swept_rebuilds() {
        let (p, _) = paper_preset(Preset::Fig3a);
        let p2 = apply_swept(&p, SweptName::GC2, 8.0e6).unwrap();
        assert_eq!(p2.prescribed.unwrap().g_c2, TAU * 8.0e6);
        // untouched fields carried over
        assert_eq!(p2.kappa_c, p.kappa_c);
        let p3 = apply_swept(&p, SweptName::LambdaOverKappaC, 0.9).unwrap();
        assert_eq!(p3.lambda_sq, 0.9 * p.kappa_c);
    }
}
