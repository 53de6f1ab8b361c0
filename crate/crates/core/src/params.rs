//! Domain types shared by every other module: the mode/drive/damping
//! parameter triple, drive-regime classification, input states, and the
//! flat-band bath discretization.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default relative tolerance for regime classification. The critical
/// magnitude is a measure-zero set, so a tolerance band is mandatory.
pub const EPS_REGIME_DEFAULT: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("parameter {name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("mode frequency omega must be >= 0, got {0}")]
    NegativeOmega(f64),
    #[error("drive magnitude lambda must be >= 0, got {0}")]
    NegativeLambda(f64),
    #[error("damping rate gamma must be > 0, got {0} (use SystemParams::lossless for gamma = 0 limit checks)")]
    NonPositiveGamma(f64),
    #[error("bath band [{min}, {max}] must be a nonempty interval containing omega = {omega}")]
    BadBand { min: f64, max: f64, omega: f64 },
    #[error("bath mode count must be >= 1")]
    EmptyBath,
}

/// The mode/drive/damping triple (omega, lambda, gamma), all in rad/time.
///
/// `gamma` is the amplitude damping rate set by the flat spectral density,
/// `gamma = pi * J0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    omega: f64,
    lambda: f64,
    gamma: f64,
}

impl SystemParams {
    /// Validated constructor: finite fields, `omega >= 0`, `lambda >= 0`,
    /// `gamma > 0`.
    pub fn new(omega: f64, lambda: f64, gamma: f64) -> Result<Self, ParamError> {
        for (name, value) in [("omega", omega), ("lambda", lambda), ("gamma", gamma)] {
            if !value.is_finite() {
                return Err(ParamError::NonFinite { name, value });
            }
        }
        if omega < 0.0 {
            return Err(ParamError::NegativeOmega(omega));
        }
        if lambda < 0.0 {
            return Err(ParamError::NegativeLambda(lambda));
        }
        if gamma <= 0.0 {
            return Err(ParamError::NonPositiveGamma(gamma));
        }
        Ok(Self { omega, lambda, gamma })
    }

    /// Lossless variant with `gamma = 0`, permitted only for closed-system
    /// limit checks (pure squeezing, free rotation) and oracle tests.
    pub fn lossless(omega: f64, lambda: f64) -> Result<Self, ParamError> {
        for (name, value) in [("omega", omega), ("lambda", lambda)] {
            if !value.is_finite() {
                return Err(ParamError::NonFinite { name, value });
            }
        }
        if omega < 0.0 {
            return Err(ParamError::NegativeOmega(omega));
        }
        if lambda < 0.0 {
            return Err(ParamError::NegativeLambda(lambda));
        }
        Ok(Self { omega, lambda, gamma: 0.0 })
    }

    /// Unvalidated constructor for internal probes (finite-difference
    /// evaluation needs omega slightly below zero when differentiating at
    /// the band edge omega = 0).
    pub(crate) fn raw(omega: f64, lambda: f64, gamma: f64) -> Self {
        Self { omega, lambda, gamma }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Flat spectral density level `J0 = gamma / pi`.
    pub fn density_level(&self) -> f64 {
        self.gamma / std::f64::consts::PI
    }

    /// `gamma^2 + omega^2 - lambda^2`; positive in the small-magnitude
    /// regime, zero at the critical magnitude.
    pub fn regime_gap(&self) -> f64 {
        self.gamma * self.gamma + self.omega * self.omega - self.lambda * self.lambda
    }

    /// The critical drive magnitude `sqrt(gamma^2 + omega^2)`.
    pub fn critical_lambda(&self) -> f64 {
        self.gamma.hypot(self.omega)
    }
}

/// Drive-magnitude bands relative to the critical magnitude
/// `lambda = sqrt(gamma^2 + omega^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `lambda^2 < gamma^2 + omega^2`: long-time decay to a stationary state.
    Small,
    /// `lambda^2 = gamma^2 + omega^2` within tolerance: threshold dynamics.
    Critical,
    /// `lambda^2 > gamma^2 + omega^2`: exponential amplification.
    Large,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Small => write!(f, "small"),
            Regime::Critical => write!(f, "critical"),
            Regime::Large => write!(f, "large"),
        }
    }
}

/// Regime classification together with the PT exceptional-point flag
/// (`lambda = omega`), which is independent of the magnitude band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveRegime {
    pub regime: Regime,
    pub exceptional_point: bool,
}

/// Classify the drive magnitude. Total in the parameters:
/// Small iff `lambda^2 < (gamma^2+omega^2)(1-eps)`, Large iff
/// `lambda^2 > (gamma^2+omega^2)(1+eps)`, Critical otherwise.
pub fn classify_regime(p: &SystemParams, eps_regime: f64) -> DriveRegime {
    let l2 = p.lambda * p.lambda;
    let crit2 = p.gamma * p.gamma + p.omega * p.omega;
    let regime = if l2 < crit2 * (1.0 - eps_regime) {
        Regime::Small
    } else if l2 > crit2 * (1.0 + eps_regime) {
        Regime::Large
    } else {
        Regime::Critical
    };
    let scale = p.lambda.max(p.omega).max(f64::MIN_POSITIVE);
    let exceptional_point = (p.lambda - p.omega).abs() <= eps_regime * scale;
    DriveRegime { regime, exceptional_point }
}

/// Input state of the optical mode. The drive phase convention makes a real
/// coherent amplitude the natural choice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InputState {
    Vacuum,
    /// Coherent state with real amplitude `alpha`; photon number `alpha^2`.
    Coherent { alpha: f64 },
}

impl InputState {
    pub fn coherent(alpha: f64) -> Self {
        InputState::Coherent { alpha }
    }

    /// Mean input photon number `N = alpha^2` (0 for vacuum).
    pub fn photon_number(&self) -> f64 {
        match self {
            InputState::Vacuum => 0.0,
            InputState::Coherent { alpha } => alpha * alpha,
        }
    }

    pub fn amplitude(&self) -> f64 {
        match self {
            InputState::Vacuum => 0.0,
            InputState::Coherent { alpha } => *alpha,
        }
    }
}

/// Uniform flat-band discretization of the environment.
///
/// `mode_count` modes on the midpoint grid of `[omega_min, omega_max]` with
/// equal couplings `g_k = sqrt(J0 * dw)`, so that `sum_k g_k^2` equals
/// `J0 * (omega_max - omega_min)` exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    mode_count: usize,
    omega_min: f64,
    omega_max: f64,
    density: f64,
}

impl BathSpec {
    /// Band `[omega_min, omega_max]` with `mode_count` modes and flat level
    /// `J0 = gamma / pi` taken from `p`. The band must contain the mode
    /// frequency.
    pub fn new(p: &SystemParams, mode_count: usize, omega_min: f64, omega_max: f64) -> Result<Self, ParamError> {
        if mode_count == 0 {
            return Err(ParamError::EmptyBath);
        }
        if omega_min.is_nan()
            || omega_max.is_nan()
            || omega_min >= omega_max
            || p.omega() < omega_min
            || p.omega() > omega_max
        {
            return Err(ParamError::BadBand { min: omega_min, max: omega_max, omega: p.omega() });
        }
        Ok(Self {
            mode_count,
            omega_min,
            omega_max,
            density: p.density_level(),
        })
    }

    /// Band of width `width` centered on the mode frequency. Negative bath
    /// frequencies are a deliberate modeling choice for wide bands: the
    /// stationary spectral integrals run over the whole real line.
    pub fn centered(p: &SystemParams, mode_count: usize, width: f64) -> Result<Self, ParamError> {
        Self::new(p, mode_count, p.omega() - 0.5 * width, p.omega() + 0.5 * width)
    }

    /// Default band width `80 * max(gamma, lambda, omega)`: wide enough for
    /// percent-level agreement with the broadband closed forms while keeping
    /// the mode count tractable.
    pub fn default_width(p: &SystemParams) -> f64 {
        80.0 * p.gamma().max(p.lambda()).max(p.omega()).max(f64::MIN_POSITIVE)
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn band(&self) -> (f64, f64) {
        (self.omega_min, self.omega_max)
    }

    /// Flat spectral density level J0.
    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn spacing(&self) -> f64 {
        (self.omega_max - self.omega_min) / self.mode_count as f64
    }

    /// Midpoint-grid mode frequency.
    pub fn frequency(&self, k: usize) -> f64 {
        debug_assert!(k < self.mode_count);
        self.omega_min + (k as f64 + 0.5) * self.spacing()
    }

    /// Uniform coupling `g = sqrt(J0 * dw)`.
    pub fn coupling(&self) -> f64 {
        (self.density * self.spacing()).sqrt()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.mode_count).map(|k| self.frequency(k)).collect()
    }

    pub fn couplings(&self) -> Vec<f64> {
        vec![self.coupling(); self.mode_count]
    }
}
