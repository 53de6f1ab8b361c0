//! Frequency-estimation uncertainty: the error-propagation pipeline
//! (variance over squared signal slope) evaluated through the full
//! coefficient route, the published per-regime asymptotic formulas as pinned
//! evaluators, the PT-symmetry eigenvalue analysis, and the drive-magnitude
//! scan.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeffs::{bath_coeffs, mode_coeffs, CoeffsError};
use crate::measurement::{
    homodyne_stats, moments, photon_stats, Detector, MeasurementError, MomentSet,
};
use crate::params::{
    classify_regime, BathSpec, DriveRegime, InputState, ParamError, Regime, SystemParams,
    EPS_REGIME_DEFAULT,
};

/// Default relative step for the frequency derivative.
pub const FD_STEP_DEFAULT: f64 = 1e-5;

#[derive(Debug, Error)]
pub enum PrecisionError {
    #[error("finite-difference step {0} outside the supported relative range [1e-7, 1e-2]")]
    BadFdStep(f64),
    #[error("ill-conditioned frequency derivative: estimates {coarse:e} and {fine:e} disagree beyond 10%")]
    IllConditionedDerivative { coarse: f64, fine: f64 },
    #[error("no published asymptotic form for {detector:?} in the {regime} regime")]
    NoAsymptoticForm { regime: Regime, detector: Detector },
    #[error("formula validity violated: {0}")]
    ValidityViolation(String),
    #[error(transparent)]
    Coeffs(#[from] CoeffsError),
    #[error(transparent)]
    Measurement(#[from] MeasurementError),
    #[error(transparent)]
    Params(#[from] ParamError),
}

/// Printed asymptotic formulas, named by regime and measurement channel.
/// The `General` variants are the unsimplified long-time forms; the rest
/// are their quoted limits. They are evaluated verbatim so that any gap
/// between them and the full pipeline is measurable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Formula {
    /// Small magnitude, photon counting, stationary limit.
    SmallPhoton,
    /// Large magnitude, photon counting, leading long-time limit.
    LargePhoton,
    /// Large magnitude, photon counting, general long-time form.
    LargePhotonGeneral,
    /// Large magnitude, homodyne at arbitrary angle, general form.
    LargeHomodyneGeneral,
    /// Large magnitude, homodyne at the amplitude quadrature (theta = 0).
    LargeHomodyneAmplitude,
    /// Large magnitude, homodyne at the phase quadrature (theta = pi/2).
    LargeHomodynePhase,
    /// Large magnitude, phase quadrature, vanishing-frequency limit.
    LargeHomodyneLowFreq,
    /// Critical magnitude, homodyne, general form.
    CriticalHomodyneGeneral,
    /// Critical magnitude, amplitude quadrature.
    CriticalHomodyneAmplitude,
    /// Critical magnitude, phase quadrature.
    CriticalHomodynePhase,
    /// Critical magnitude, phase quadrature, omega = 0.
    CriticalHomodyneZeroFreq,
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Formula::SmallPhoton => "small-photon",
            Formula::LargePhoton => "large-photon",
            Formula::LargePhotonGeneral => "large-photon-general",
            Formula::LargeHomodyneGeneral => "large-homodyne-general",
            Formula::LargeHomodyneAmplitude => "large-homodyne-amplitude",
            Formula::LargeHomodynePhase => "large-homodyne-phase",
            Formula::LargeHomodyneLowFreq => "large-homodyne-lowfreq",
            Formula::CriticalHomodyneGeneral => "critical-homodyne-general",
            Formula::CriticalHomodyneAmplitude => "critical-homodyne-amplitude",
            Formula::CriticalHomodynePhase => "critical-homodyne-phase",
            Formula::CriticalHomodyneZeroFreq => "critical-homodyne-zerofreq",
        };
        write!(f, "{name}")
    }
}

/// Provenance of an uncertainty value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Source {
    FullPipeline,
    Asymptotic(Formula),
}

/// Squared frequency uncertainty with its ingredients. `delta_omega_sq`
/// may be `+inf`: vanishing signal slope is a finding (the parameter
/// information disappears), not an error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyResult {
    pub delta_omega_sq: f64,
    pub mean: Option<f64>,
    pub variance: Option<f64>,
    pub dmean_domega: Option<f64>,
    /// Mode occupation at the evaluation point: the energy-cost diagnostic
    /// that diverges as the drive approaches the critical magnitude.
    pub photon_number: Option<f64>,
    pub source: Source,
    pub detector: Detector,
    pub regime: DriveRegime,
    pub params: SystemParams,
    pub t: f64,
    pub input: InputState,
    /// Validity gates hold but with little margin (long-time factor or
    /// side conditions inside the warning band).
    pub marginal_validity: bool,
}

fn stats_for(m: &MomentSet, detector: Detector) -> (f64, f64) {
    match detector {
        Detector::PhotonCounting => {
            let s = photon_stats(m);
            (s.mean, s.variance)
        }
        Detector::Homodyne { theta } => {
            let s = homodyne_stats(m, theta);
            (s.mean, s.variance)
        }
    }
}

/// Full-pipeline uncertainty by error propagation: the mean signal is
/// differentiated in the mode frequency by Richardson-extrapolated central
/// differences through the closed-form coefficient route, at a fixed bath
/// discretization; the variance is exact Gaussian at the center point.
pub fn delta_omega_full(
    p: &SystemParams,
    input: &InputState,
    detector: Detector,
    bath: &BathSpec,
    t: f64,
    fd_step: f64,
) -> Result<UncertaintyResult, PrecisionError> {
    if !(1e-7..=1e-2).contains(&fd_step) {
        return Err(PrecisionError::BadFdStep(fd_step));
    }
    let mean_at = |omega: f64| -> Result<f64, PrecisionError> {
        let probe = SystemParams::raw(omega, p.lambda(), p.gamma());
        let mode = mode_coeffs(&probe, t)?;
        let bathc = bath_coeffs(&probe, bath, t)?;
        let m = moments(&mode, &bathc, input)?;
        Ok(stats_for(&m, detector).0)
    };

    let mode = mode_coeffs(p, t)?;
    let bathc = bath_coeffs(p, bath, t)?;
    let m = moments(&mode, &bathc, input)?;
    let (mean, variance) = stats_for(&m, detector);

    let h = fd_step * p.omega().abs().max(p.lambda()).max(p.gamma());
    let sampled = [
        mean_at(p.omega() + h)?,
        mean_at(p.omega() - h)?,
        mean_at(p.omega() + 0.5 * h)?,
        mean_at(p.omega() - 0.5 * h)?,
    ];
    let coarse = (sampled[0] - sampled[1]) / (2.0 * h);
    let fine = (sampled[2] - sampled[3]) / h;

    // slope estimates at the rounding floor mean the signal carries no
    // frequency information at this point: report infinite uncertainty
    let mean_scale = sampled
        .iter()
        .fold(mean.abs(), |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let noise_floor = 128.0 * f64::EPSILON * mean_scale / h;
    let derivative = (4.0 * fine - coarse) / 3.0;
    let vanished = derivative.abs() < 1e-300
        || (coarse.abs() <= noise_floor && fine.abs() <= noise_floor);
    if !vanished && (coarse - fine).abs() > 0.1 * fine.abs().max(noise_floor) {
        return Err(PrecisionError::IllConditionedDerivative { coarse, fine });
    }

    let delta_omega_sq = if vanished {
        f64::INFINITY
    } else {
        variance / (derivative * derivative)
    };
    Ok(UncertaintyResult {
        delta_omega_sq,
        mean: Some(mean),
        variance: Some(variance),
        dmean_domega: Some(derivative),
        photon_number: Some(m.n_mean()),
        source: Source::FullPipeline,
        detector,
        regime: classify_regime(p, EPS_REGIME_DEFAULT),
        params: *p,
        t,
        input: *input,
        marginal_validity: false,
    })
}

/// Long-time factor of a regime's validity condition.
fn long_time_factor(p: &SystemParams, t: f64, regime: Regime) -> f64 {
    let s2 = p.lambda() * p.lambda() - p.omega() * p.omega();
    let s_re = if s2 > 0.0 { s2.sqrt() } else { 0.0 };
    match regime {
        Regime::Small => t * (p.gamma() - s_re),
        Regime::Large => t * (s_re - p.gamma()),
        Regime::Critical => t * p.gamma(),
    }
}

fn require_regime(p: &SystemParams, want: Regime) -> Result<DriveRegime, PrecisionError> {
    let r = classify_regime(p, EPS_REGIME_DEFAULT);
    if r.regime != want {
        return Err(PrecisionError::ValidityViolation(format!(
            "formula requires the {want} regime, parameters classify as {}",
            r.regime
        )));
    }
    Ok(r)
}

fn require_photons(input: &InputState) -> Result<f64, PrecisionError> {
    let n = input.photon_number();
    if n <= 0.0 {
        return Err(PrecisionError::ValidityViolation(
            "amplified-regime formulas assume a bright coherent input (N = alpha^2 > 0)".into(),
        ));
    }
    Ok(n)
}

/// Evaluate one published asymptotic formula at its face value, checking the
/// regime, the long-time condition (error below factor 3, marginal below
/// 10), and the quoted side conditions (marginal flags only).
pub fn evaluate_formula(
    formula: Formula,
    p: &SystemParams,
    input: &InputState,
    theta: Option<f64>,
    t: f64,
) -> Result<UncertaintyResult, PrecisionError> {
    let (omega, lambda, gamma) = (p.omega(), p.lambda(), p.gamma());
    let need_regime = match formula {
        Formula::SmallPhoton => Regime::Small,
        Formula::LargePhoton
        | Formula::LargePhotonGeneral
        | Formula::LargeHomodyneGeneral
        | Formula::LargeHomodyneAmplitude
        | Formula::LargeHomodynePhase
        | Formula::LargeHomodyneLowFreq => Regime::Large,
        _ => Regime::Critical,
    };
    let regime = require_regime(p, need_regime)?;
    let factor = long_time_factor(p, t, need_regime);
    if factor < 3.0 {
        return Err(PrecisionError::ValidityViolation(format!(
            "long-time factor {factor:.2} below 3"
        )));
    }
    let mut marginal = factor < 10.0;

    let s = (lambda * lambda - omega * omega).max(0.0).sqrt();
    let gap = p.regime_gap();
    let crit = p.critical_lambda();
    let infinity_on_zero = |num: f64, den: f64| if den == 0.0 { f64::INFINITY } else { num / den };

    let value = match formula {
        Formula::SmallPhoton => {
            let num = gap * gap * (3.0 * (gamma * gamma + omega * omega) - lambda * lambda);
            infinity_on_zero(num, 4.0 * lambda * lambda * omega * omega)
        }
        Formula::LargePhoton => {
            let n = require_photons(input)?;
            let num = lambda * (lambda - omega) * (lambda + omega);
            infinity_on_zero(num, 4.0 * n * t * t * omega * omega * (lambda + s))
        }
        Formula::LargePhotonGeneral => {
            let n = require_photons(input)?;
            let s2 = lambda * lambda - omega * omega;
            let bracket = -2.0 * lambda.powi(3) * t
                + 2.0 * lambda * (t * omega * omega + s)
                + lambda * lambda * (1.0 - 2.0 * t * s)
                + omega * omega * (2.0 * t * s - 1.0);
            let num = lambda * s2.powi(3) * (lambda + s);
            infinity_on_zero(num, n * omega * omega * bracket * bracket)
        }
        Formula::LargeHomodyneGeneral => {
            let n = require_photons(input)?;
            let th = theta.ok_or_else(|| {
                PrecisionError::ValidityViolation("homodyne formula needs an angle".into())
            })?;
            let s2 = lambda * lambda - omega * omega;
            let num = lambda
                * (lambda - omega).powi(2)
                * (lambda + omega).powi(2)
                * ((s2 - 2.0 * gamma * s) * (2.0 * th).cos()
                    + (s - 2.0 * gamma) * (lambda + omega * (2.0 * th).sin()));
            let bracket = omega
                * (lambda - 2.0 * lambda * lambda * t + 2.0 * t * omega * omega - 2.0 * lambda * t * s)
                * th.cos()
                + (lambda * lambda - 2.0 * t * omega * omega * s) * th.sin();
            infinity_on_zero(num, 2.0 * n * (s - gamma) * bracket * bracket)
        }
        Formula::LargeHomodyneAmplitude => {
            let n = require_photons(input)?;
            if lambda < 10.0 * omega || gamma * omega * omega * t < lambda * lambda {
                marginal = true;
            }
            infinity_on_zero(lambda * lambda, 16.0 * n * t * t * omega * omega)
        }
        Formula::LargeHomodynePhase => {
            let n = require_photons(input)?;
            if lambda < 10.0 * omega || gamma * omega * omega * t < lambda * lambda {
                marginal = true;
            }
            lambda * lambda / (8.0 * n * t * t)
        }
        Formula::LargeHomodyneLowFreq => {
            require_photons(input)?;
            if omega > 0.05 * lambda {
                return Err(PrecisionError::ValidityViolation(format!(
                    "vanishing-frequency form needs omega << lambda, got omega/lambda = {:.3}",
                    omega / lambda
                )));
            }
            0.0
        }
        Formula::CriticalHomodyneGeneral => {
            let n = require_photons(input)?;
            let th = theta.ok_or_else(|| {
                PrecisionError::ValidityViolation("homodyne formula needs an angle".into())
            })?;
            let num = gamma.powi(4)
                * (7.0 * gamma * gamma + 3.0 * omega * omega
                    + 2.0 * omega * crit * (2.0 * th).sin());
            let bracket = omega * (gamma * gamma * t + (gamma * t - 1.0) * crit) * th.cos()
                - (gamma * gamma + (1.0 - gamma * t) * omega * omega) * th.sin();
            infinity_on_zero(num, 4.0 * n * bracket * bracket)
        }
        Formula::CriticalHomodyneAmplitude => {
            let n = require_photons(input)?;
            let num = gamma * gamma * (7.0 * gamma * gamma + 3.0 * omega * omega);
            infinity_on_zero(num, 4.0 * n * t * t * omega * omega * (gamma + crit) * (gamma + crit))
        }
        Formula::CriticalHomodynePhase => {
            let n = require_photons(input)?;
            let num = 7.0 * gamma.powi(4) + 3.0 * gamma * gamma * omega * omega;
            infinity_on_zero(num, 4.0 * n * t * t * omega.powi(4))
        }
        Formula::CriticalHomodyneZeroFreq => {
            let n = require_photons(input)?;
            if omega > 0.1 * gamma {
                return Err(PrecisionError::ValidityViolation(format!(
                    "zero-frequency form needs omega << gamma, got omega/gamma = {:.3}",
                    omega / gamma
                )));
            }
            7.0 * gamma * gamma / (4.0 * n)
        }
    };

    let detector = match formula {
        Formula::SmallPhoton | Formula::LargePhoton | Formula::LargePhotonGeneral => {
            Detector::PhotonCounting
        }
        Formula::LargeHomodyneAmplitude | Formula::CriticalHomodyneAmplitude => {
            Detector::Homodyne { theta: 0.0 }
        }
        Formula::LargeHomodynePhase
        | Formula::LargeHomodyneLowFreq
        | Formula::CriticalHomodynePhase
        | Formula::CriticalHomodyneZeroFreq => Detector::Homodyne {
            theta: std::f64::consts::FRAC_PI_2,
        },
        _ => Detector::Homodyne { theta: theta.unwrap_or(0.0) },
    };

    Ok(UncertaintyResult {
        delta_omega_sq: value,
        mean: None,
        variance: None,
        dmean_domega: None,
        photon_number: None,
        source: Source::Asymptotic(formula),
        detector,
        regime,
        params: *p,
        t,
        input: *input,
        marginal_validity: marginal,
    })
}

/// Asymptotic uncertainty with automatic dispatch to the general published
/// form matching the regime and detector.
pub fn delta_omega_asymptotic(
    p: &SystemParams,
    input: &InputState,
    detector: Detector,
    t: f64,
) -> Result<UncertaintyResult, PrecisionError> {
    let regime = classify_regime(p, EPS_REGIME_DEFAULT).regime;
    let formula = match (regime, detector) {
        (Regime::Small, Detector::PhotonCounting) => Formula::SmallPhoton,
        (Regime::Large, Detector::PhotonCounting) => Formula::LargePhotonGeneral,
        (Regime::Large, Detector::Homodyne { .. }) => Formula::LargeHomodyneGeneral,
        (Regime::Critical, Detector::Homodyne { .. }) => Formula::CriticalHomodyneGeneral,
        _ => return Err(PrecisionError::NoAsymptoticForm { regime, detector }),
    };
    let theta = match detector {
        Detector::Homodyne { theta } => Some(theta),
        Detector::PhotonCounting => None,
    };
    evaluate_formula(formula, p, input, theta, t)
}

/// The 2x2 non-Hermitian generator of the mean-field dynamics with its
/// PT-symmetric eigenvalue pair and exceptional point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveHamiltonian {
    pub matrix: [[Complex64; 2]; 2],
    /// `+-sqrt(omega^2 - lambda^2)`: real in the PT-unbroken phase, purely
    /// imaginary in the broken phase, doubly degenerate zero at the
    /// exceptional point.
    pub eigenvalues: (Complex64, Complex64),
    pub exceptional_point: bool,
}

/// Eigenvalue analysis of the effective non-Hermitian mean-field
/// Hamiltonian; the exceptional point sits at `lambda = omega`.
pub fn pt_eigenvalues(p: &SystemParams) -> EffectiveHamiltonian {
    let (omega, lambda) = (p.omega(), p.lambda());
    let i = Complex64::i();
    let root = Complex64::new(omega * omega - lambda * lambda, 0.0).sqrt();
    EffectiveHamiltonian {
        matrix: [[omega.into(), i * lambda], [i * lambda, (-omega).into()]],
        eigenvalues: (root, -root),
        exceptional_point: classify_regime(p, EPS_REGIME_DEFAULT).exceptional_point,
    }
}

/// Bath discretization settings for scan/sweep entry points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSettings {
    pub mode_count: usize,
    /// Band width; `None` selects the default `80 max(gamma, lambda, omega)`.
    pub width: Option<f64>,
}

impl Default for BathSettings {
    fn default() -> Self {
        Self { mode_count: 4000, width: None }
    }
}

impl BathSettings {
    pub fn build(&self, p: &SystemParams) -> Result<BathSpec, ParamError> {
        let width = self.width.unwrap_or_else(|| BathSpec::default_width(p));
        BathSpec::centered(p, self.mode_count, width)
    }
}

/// Full-pipeline scan over a drive-magnitude grid.
#[derive(Debug, Clone)]
pub struct DriveScan {
    pub results: Vec<UncertaintyResult>,
    /// Index of the grid minimum; ties break toward smaller magnitude.
    pub best: usize,
}

impl DriveScan {
    pub fn best_lambda(&self) -> f64 {
        self.results[self.best].params.lambda()
    }
}

/// Evaluate the full pipeline across an ascending drive-magnitude grid at
/// fixed `(omega, gamma)`. Grid points run in parallel; infinite entries
/// are recorded, evaluation errors abort the scan.
#[allow(clippy::too_many_arguments)]
pub fn optimal_drive_scan(
    omega: f64,
    gamma: f64,
    input: &InputState,
    detector: Detector,
    bath: BathSettings,
    t: f64,
    lambda_grid: &[f64],
    fd_step: f64,
) -> Result<DriveScan, PrecisionError> {
    assert!(!lambda_grid.is_empty(), "scan needs at least one grid point");
    let results: Vec<UncertaintyResult> = lambda_grid
        .par_iter()
        .map(|&lambda| {
            let p = SystemParams::new(omega, lambda, gamma)?;
            let spec = bath.build(&p)?;
            delta_omega_full(&p, input, detector, &spec, t, fd_step)
        })
        .collect::<Result<_, _>>()?;
    let mut best = 0;
    for (idx, r) in results.iter().enumerate() {
        if r.delta_omega_sq < results[best].delta_omega_sq {
            best = idx;
        }
    }
    Ok(DriveScan { results, best })
}
