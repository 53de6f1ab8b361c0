//! Parameter-sweep engine behind the command-line interface: axis grids,
//! deterministic row evaluation, and CSV emission.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::measurement::Detector;
use crate::params::{classify_regime, InputState, SystemParams, EPS_REGIME_DEFAULT};
use crate::precision::{
    delta_omega_asymptotic, delta_omega_full, BathSettings, PrecisionError, Source,
    FD_STEP_DEFAULT,
};
use crate::spectral::{symplectic_defect_continuum, SpectralError};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep configuration: {0}")]
    Config(String),
    #[error("evaluation failed at grid point {point}: {source}")]
    Evaluation {
        point: String,
        #[source]
        source: PrecisionError,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Grid scale for a sweep axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

/// One sweep axis: a fixed value or a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisSpec {
    Fixed(f64),
    Grid {
        min: f64,
        max: f64,
        count: usize,
        #[serde(default)]
        scale: Scale,
    },
}

impl AxisSpec {
    pub fn is_grid(&self) -> bool {
        matches!(self, AxisSpec::Grid { .. })
    }

    pub fn values(&self) -> Result<Vec<f64>, SweepError> {
        match *self {
            AxisSpec::Fixed(v) => Ok(vec![v]),
            AxisSpec::Grid { min, max, count, scale } => {
                if count == 0 {
                    return Err(SweepError::Config("grid count must be >= 1".into()));
                }
                if scale == Scale::Log && (min <= 0.0 || max <= 0.0) {
                    return Err(SweepError::Config(
                        "log grids require strictly positive bounds".into(),
                    ));
                }
                if count == 1 {
                    return Ok(vec![min]);
                }
                let n = (count - 1) as f64;
                Ok((0..count)
                    .map(|i| {
                        let f = i as f64 / n;
                        match scale {
                            Scale::Linear => min + (max - min) * f,
                            Scale::Log => (min.ln() + (max.ln() - min.ln()) * f).exp(),
                        }
                    })
                    .collect())
            }
        }
    }

    /// Parse the CLI syntax: a bare number, or `min:max:count[:log]`.
    pub fn parse(text: &str) -> Result<Self, SweepError> {
        let parts: Vec<&str> = text.split(':').collect();
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| SweepError::Config(format!("cannot parse `{s}` as a number")))
        };
        match parts.as_slice() {
            [v] => Ok(AxisSpec::Fixed(num(v)?)),
            [min, max, count] | [min, max, count, _] => {
                let scale = match parts.get(3) {
                    None => Scale::Linear,
                    Some(&"log") => Scale::Log,
                    Some(&"linear") => Scale::Linear,
                    Some(other) => {
                        return Err(SweepError::Config(format!("unknown grid scale `{other}`")))
                    }
                };
                Ok(AxisSpec::Grid {
                    min: num(min)?,
                    max: num(max)?,
                    count: count
                        .trim()
                        .parse()
                        .map_err(|_| SweepError::Config(format!("bad grid count `{count}`")))?,
                    scale,
                })
            }
            _ => Err(SweepError::Config(format!("cannot parse axis `{text}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectorKind {
    Photon,
    Homodyne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PipelineMode {
    Full,
    Asymptotic,
    Both,
}

/// Declarative sweep description; accepted from flags or a TOML file with
/// flags taking precedence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub omega: AxisSpec,
    pub lambda: AxisSpec,
    pub gamma: AxisSpec,
    pub t: AxisSpec,
    #[serde(default = "default_theta")]
    pub theta: AxisSpec,
    #[serde(default = "default_alpha_sq")]
    pub alpha_sq: AxisSpec,
    pub detector: DetectorKind,
    #[serde(default = "default_pipeline")]
    pub pipeline: PipelineMode,
    #[serde(default)]
    pub bath: BathSettings,
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    /// Reserved for future stochastic extensions; all current paths are
    /// deterministic.
    #[serde(default)]
    pub seed: u64,
}

fn default_theta() -> AxisSpec {
    AxisSpec::Fixed(0.0)
}

fn default_alpha_sq() -> AxisSpec {
    AxisSpec::Fixed(0.0)
}

fn default_pipeline() -> PipelineMode {
    PipelineMode::Full
}

fn default_fd_step() -> f64 {
    FD_STEP_DEFAULT
}

/// One evaluated grid point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub omega: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub t: f64,
    pub theta: f64,
    pub alpha_sq: f64,
    pub regime: String,
    pub exceptional_point: bool,
    pub detector: &'static str,
    pub bath_modes: usize,
    pub band_width: f64,
    pub mean: Option<f64>,
    pub variance: Option<f64>,
    pub dmean_domega: Option<f64>,
    pub photon_number: Option<f64>,
    pub delta_omega_sq_full: Option<f64>,
    pub delta_omega_sq_asymptotic: Option<f64>,
    pub formula: Option<String>,
}

/// Serialize a value with 17 significant digits; infinities keep the
/// literal `inf` spelling.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{v:.16e}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), SweepError> {
        let gridded = [
            self.omega, self.lambda, self.gamma, self.t, self.theta, self.alpha_sq,
        ]
        .iter()
        .filter(|a| a.is_grid())
        .count();
        if gridded > 2 {
            return Err(SweepError::Config(format!(
                "at most 2 gridded axes per sweep, got {gridded}"
            )));
        }
        if self.bath.mode_count == 0 {
            return Err(SweepError::Config("bath mode count must be >= 1".into()));
        }
        Ok(())
    }

    /// Cartesian grid in canonical axis order
    /// (omega, lambda, gamma, t, theta, alpha_sq).
    fn points(&self) -> Result<Vec<[f64; 6]>, SweepError> {
        let axes = [
            self.omega.values()?,
            self.lambda.values()?,
            self.gamma.values()?,
            self.t.values()?,
            self.theta.values()?,
            self.alpha_sq.values()?,
        ];
        let mut out = Vec::new();
        for &w in &axes[0] {
            for &l in &axes[1] {
                for &g in &axes[2] {
                    for &t in &axes[3] {
                        for &th in &axes[4] {
                            for &n in &axes[5] {
                                out.push([w, l, g, t, th, n]);
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

fn evaluate_point(config: &SweepConfig, point: [f64; 6]) -> Result<SweepRow, SweepError> {
    let [omega, lambda, gamma, t, theta, alpha_sq] = point;
    let describe = || format!(
        "omega={omega} lambda={lambda} gamma={gamma} t={t} theta={theta} alpha_sq={alpha_sq}"
    );
    let as_eval = |source: PrecisionError| SweepError::Evaluation { point: describe(), source };

    let p = SystemParams::new(omega, lambda, gamma).map_err(|e| as_eval(e.into()))?;
    let input = if alpha_sq > 0.0 {
        InputState::coherent(alpha_sq.sqrt())
    } else {
        InputState::Vacuum
    };
    let detector = match config.detector {
        DetectorKind::Photon => Detector::PhotonCounting,
        DetectorKind::Homodyne => Detector::Homodyne { theta },
    };
    let regime = classify_regime(&p, EPS_REGIME_DEFAULT);
    let bath = config.bath.build(&p).map_err(|e| as_eval(e.into()))?;

    let mut row = SweepRow {
        omega,
        lambda,
        gamma,
        t,
        theta,
        alpha_sq,
        regime: regime.regime.to_string(),
        exceptional_point: regime.exceptional_point,
        detector: match config.detector {
            DetectorKind::Photon => "photon",
            DetectorKind::Homodyne => "homodyne",
        },
        bath_modes: bath.mode_count(),
        band_width: bath.band().1 - bath.band().0,
        mean: None,
        variance: None,
        dmean_domega: None,
        photon_number: None,
        delta_omega_sq_full: None,
        delta_omega_sq_asymptotic: None,
        formula: None,
    };

    if matches!(config.pipeline, PipelineMode::Full | PipelineMode::Both) {
        let r = delta_omega_full(&p, &input, detector, &bath, t, config.fd_step)
            .map_err(as_eval)?;
        row.mean = r.mean;
        row.variance = r.variance;
        row.dmean_domega = r.dmean_domega;
        row.photon_number = r.photon_number;
        row.delta_omega_sq_full = Some(r.delta_omega_sq);
    }
    if matches!(config.pipeline, PipelineMode::Asymptotic | PipelineMode::Both) {
        // points where no published form applies leave the column empty; a
        // sweep crossing regime boundaries is not an error
        match delta_omega_asymptotic(&p, &input, detector, t) {
            Ok(r) => {
                row.delta_omega_sq_asymptotic = Some(r.delta_omega_sq);
                if let Source::Asymptotic(f) = r.source {
                    row.formula = Some(f.to_string());
                }
            }
            Err(PrecisionError::NoAsymptoticForm { .. })
            | Err(PrecisionError::ValidityViolation(_)) => {}
            Err(e) => return Err(as_eval(e)),
        }
    }
    Ok(row)
}

pub const SWEEP_HEADER: &str = "omega,lambda,gamma,t,theta,alpha_sq,detector,regime,exceptional_point,bath_modes,band_width,mean,variance,dmean_domega,photon_number,delta_omega_sq_full,delta_omega_sq_asymptotic,formula";

/// Run the sweep and write the CSV table. Grid points are evaluated in
/// parallel and emitted in deterministic grid order.
pub fn run_sweep<W: Write>(config: &SweepConfig, out: &mut W) -> Result<(), SweepError> {
    config.validate()?;
    let points = config.points()?;
    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|&pt| evaluate_point(config, pt))
        .collect::<Result<_, _>>()?;

    writeln!(out, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(r.omega),
            fmt_f64(r.lambda),
            fmt_f64(r.gamma),
            fmt_f64(r.t),
            fmt_f64(r.theta),
            fmt_f64(r.alpha_sq),
            r.detector,
            r.regime,
            r.exceptional_point,
            r.bath_modes,
            fmt_f64(r.band_width),
            fmt_opt(r.mean),
            fmt_opt(r.variance),
            fmt_opt(r.dmean_domega),
            fmt_opt(r.photon_number),
            fmt_opt(r.delta_omega_sq_full),
            fmt_opt(r.delta_omega_sq_asymptotic),
            r.formula.unwrap_or_default(),
        )?;
    }
    Ok(())
}

/// Best-effort symplectic defect for table output: the infinite-band
/// quadrature value where the exponential decomposition is regular. At the
/// degenerate points (drive at the mode frequency or at the critical
/// magnitude) the diagnostic is evaluated at a microscopically shifted
/// drive: the defect is smooth in the drive magnitude, so the shift is
/// invisible at display precision.
pub fn symplectic_defect_reported(p: &SystemParams, t: f64) -> f64 {
    match symplectic_defect_continuum(p, t, 1e-9) {
        Ok(d) => d,
        Err(SpectralError::DegenerateDecomposition { .. }) => {
            let scale = p.omega().abs().max(p.lambda()).max(p.gamma()).max(1.0);
            for delta in [3e-6, 1e-5, 3e-5, 1e-4] {
                for sign in [1.0, -1.0] {
                    let lambda = p.lambda() + sign * delta * scale;
                    if lambda < 0.0 {
                        continue;
                    }
                    let shifted = match SystemParams::new(p.omega(), lambda, p.gamma()) {
                        Ok(s) => s,
                        Err(_) => continue,
                    };
                    if let Ok(d) = symplectic_defect_continuum(&shifted, t, 1e-9) {
                        return d;
                    }
                }
            }
            f64::NAN
        }
        Err(_) => f64::NAN,
    }
}

/// Rows of the `coeffs` table.
#[derive(Debug, Clone)]
pub struct CoeffsRow {
    pub t: f64,
    pub g: num_complex::Complex64,
    pub l: num_complex::Complex64,
    pub symplectic_defect: f64,
    pub oracle: Option<OracleColumns>,
}

#[derive(Debug, Clone)]
pub struct OracleColumns {
    pub g: num_complex::Complex64,
    pub l: num_complex::Complex64,
    pub g_abs_err: f64,
    pub l_abs_err: f64,
}

pub fn coeffs_header(with_oracle: bool) -> String {
    let base = "t,re_g,im_g,re_l,im_l,symplectic_defect";
    if with_oracle {
        format!("{base},re_g_oracle,im_g_oracle,re_l_oracle,im_l_oracle,g_abs_err,l_abs_err")
    } else {
        base.to_string()
    }
}

pub fn write_coeffs_rows<W: Write>(rows: &[CoeffsRow], out: &mut W) -> std::io::Result<()> {
    for r in rows {
        write!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(r.t),
            fmt_f64(r.g.re),
            fmt_f64(r.g.im),
            fmt_f64(r.l.re),
            fmt_f64(r.l.im),
            fmt_f64(r.symplectic_defect),
        )?;
        if let Some(o) = &r.oracle {
            write!(
                out,
                ",{},{},{},{},{},{}",
                fmt_f64(o.g.re),
                fmt_f64(o.g.im),
                fmt_f64(o.l.re),
                fmt_f64(o.l.im),
                fmt_f64(o.g_abs_err),
                fmt_f64(o.l_abs_err),
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}
