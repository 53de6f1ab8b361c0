//! Machine-checkable verification suites behind `verify`: each suite runs a
//! battery of oracle-backed comparisons and reports one JSON record per
//! case. The process exits nonzero when any case fails, so the suites work
//! as CI gates.

use rayon::prelude::*;
use serde::Serialize;

use crate::coeffs::{bath_coeffs, mode_coeffs};
use crate::measurement::{moments, photon_stats, photon_stats_decoupling, Detector};
use crate::oracle::{propagate, reduced_row, symplectic_defect_map, PropagationMethod};
use crate::params::{BathSpec, InputState, SystemParams};
use crate::precision::{delta_omega_full, evaluate_formula, Formula};
use crate::spectral::{spectral_sums_closed, spectral_sums_quadrature, symplectic_defect_continuum};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Symplectic,
    MarkovConvergence,
    Spectral,
    Asymptotics,
    WickVsDecoupling,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "symplectic" => Some(Suite::Symplectic),
            "markov-convergence" => Some(Suite::MarkovConvergence),
            "spectral" => Some(Suite::Spectral),
            "asymptotics" => Some(Suite::Asymptotics),
            "wick-vs-decoupling" => Some(Suite::WickVsDecoupling),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Symplectic => "symplectic",
            Suite::MarkovConvergence => "markov-convergence",
            Suite::Spectral => "spectral",
            Suite::Asymptotics => "asymptotics",
            Suite::WickVsDecoupling => "wick-vs-decoupling",
        }
    }

    pub const ALL: [Suite; 5] = [
        Suite::Symplectic,
        Suite::MarkovConvergence,
        Suite::Spectral,
        Suite::Asymptotics,
        Suite::WickVsDecoupling,
    ];
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    /// Absent for report-only cases that carry no gate.
    pub tol: Option<f64>,
    pub pass: bool,
}

impl CaseReport {
    fn gated(name: impl Into<String>, observed: f64, expected: f64, tol: f64) -> Self {
        let pass = (observed - expected).abs() <= tol;
        Self { name: name.into(), observed, expected, tol: Some(tol), pass }
    }

    fn bound(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            observed,
            expected: 0.0,
            tol: Some(bound),
            pass: observed <= bound,
        }
    }

    fn informational(name: impl Into<String>, observed: f64) -> Self {
        Self { name: name.into(), observed, expected: 0.0, tol: None, pass: true }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub cases: Vec<CaseReport>,
    pub pass: bool,
}

impl SuiteReport {
    fn new(suite: Suite, cases: Vec<CaseReport>) -> Self {
        let pass = cases.iter().all(|c| c.pass);
        Self { suite: suite.name(), cases, pass }
    }
}

pub fn run_suite(suite: Suite) -> SuiteReport {
    let cases = match suite {
        Suite::Symplectic => symplectic_cases(),
        Suite::MarkovConvergence => markov_cases(),
        Suite::Spectral => spectral_cases(),
        Suite::Asymptotics => asymptotics_cases(),
        Suite::WickVsDecoupling => wick_cases(),
    };
    SuiteReport::new(suite, cases)
}

fn symplectic_cases() -> Vec<CaseReport> {
    let mut cases = Vec::new();
    // broadband closed forms against the infinite-band identity
    for (w, l, g) in [
        (1.0, 0.0, 1.0),
        (1.0, 0.6, 1.0),
        (1.0, 1.02, 1.0),
        (1.0, 1.4, 1.0),
        (1.0, 1.8, 1.0),
        (0.4, 1.1, 0.7),
    ] {
        let p = SystemParams::new(w, l, g).unwrap();
        for t in [0.5, 3.0, 8.0] {
            let defect = symplectic_defect_continuum(&p, t, 1e-10).unwrap_or(f64::NAN);
            cases.push(CaseReport::bound(
                format!("closed-form defect (w={w}, l={l}, g={g}, t={t})"),
                defect,
                1e-8,
            ));
        }
    }
    // exact propagator: full-map and reduced-row defects
    let p = SystemParams::new(1.0, 0.8, 0.6).unwrap();
    let bath = BathSpec::centered(&p, 40, 30.0).unwrap();
    for t in [1.0, 5.0] {
        let map = propagate(&p, &bath, t, PropagationMethod::MatrixExp).unwrap();
        cases.push(CaseReport::bound(
            format!("oracle map defect (t={t})"),
            symplectic_defect_map(&map),
            1e-9,
        ));
    }
    let dense = BathSpec::centered(&p, 2000, 80.0).unwrap();
    let (mode, bathc) = reduced_row(&p, &dense, 5.0, 1e-11).unwrap();
    cases.push(CaseReport::bound(
        "oracle row defect (Nb=2000, t=5)",
        crate::coeffs::symplectic_defect(&mode, &bathc),
        1e-9,
    ));
    cases
}

fn markov_cases() -> Vec<CaseReport> {
    // broadband validation at the stated width, with resolution-halving and
    // width-doubling studies; the discrepancy scales like 1/W and is
    // insensitive to the grid spacing at these densities
    let lambdas = [0.0, 0.5, 1.0, 1.3];
    let runs: Vec<(f64, f64, usize, f64, f64)> = lambdas
        .par_iter()
        .map(|&l| {
            let p = SystemParams::new(1.0, l, 1.0).unwrap();
            let w = BathSpec::default_width(&p);
            let err = |width: f64, nb: usize| -> f64 {
                let bath = BathSpec::centered(&p, nb, width).unwrap();
                let (mode, _) = reduced_row(&p, &bath, 5.0, 1e-10).unwrap();
                let closed = mode_coeffs(&p, 5.0).unwrap();
                let scale = closed.g.norm().max(closed.l.norm());
                let ge = (mode.g - closed.g).norm() / closed.g.norm().max(1e-6 * scale);
                let le = (mode.l - closed.l).norm() / closed.l.norm().max(1e-6 * scale);
                ge.max(le)
            };
            (l, err(w, 4000), 4000, err(w, 8000), err(2.0 * w, 8000))
        })
        .collect();
    let mut cases = Vec::new();
    for (l, base, _, halved_dw, doubled_w) in runs {
        cases.push(CaseReport::bound(
            format!("mode coefficients vs exact band (lambda={l}, W=80max, Nb=4000, tg<=5)"),
            base,
            0.01,
        ));
        cases.push(CaseReport {
            name: format!("halving the grid spacing reduces the discrepancy (lambda={l})"),
            observed: halved_dw / base,
            expected: 1.0,
            tol: None,
            pass: halved_dw < base,
        });
        cases.push(CaseReport {
            name: format!("doubling band width and modes halves the discrepancy (lambda={l})"),
            observed: doubled_w / base,
            expected: 0.5,
            tol: Some(0.1),
            pass: (doubled_w / base - 0.5).abs() <= 0.1,
        });
    }
    cases
}

fn spectral_cases() -> Vec<CaseReport> {
    let mut cases = Vec::new();
    // closed forms vs quadrature on a log grid across the small regime
    let grid: Vec<f64> = (0..5).map(|i| 0.1f64 * 100f64.powf(i as f64 / 4.0)).collect();
    let fracs: Vec<f64> = (0..5).map(|i| 0.1f64 * 9f64.powf(i as f64 / 4.0)).collect();
    let mut worst = [0.0f64; 3];
    for &w in &grid {
        for &g in &grid {
            for &f in &fracs {
                let lambda = f * w.hypot(g);
                let p = SystemParams::new(w, lambda, g).unwrap();
                let closed = spectral_sums_closed(&p).unwrap();
                let quad = spectral_sums_quadrature(&p, 1e-10).unwrap();
                worst[0] = worst[0].max((quad.sum_mu2 - closed.sum_mu2).abs() / closed.sum_mu2);
                worst[1] = worst[1]
                    .max((quad.sum_nu2 - closed.sum_nu2).abs() / closed.sum_nu2.max(1e-30));
                worst[2] =
                    worst[2].max((quad.cross - closed.cross).norm() / closed.cross.norm().max(1e-30));
            }
        }
    }
    cases.push(CaseReport::bound("max relative gap, occupation-type sum (125-point grid)", worst[0], 1e-9));
    cases.push(CaseReport::bound("max relative gap, anomalous-type sum", worst[1], 1e-9));
    cases.push(CaseReport::bound("max relative gap, cross pairing", worst[2], 1e-9));

    let p = SystemParams::new(1.0, 1.0, 1.0).unwrap();
    let s = spectral_sums_closed(&p).unwrap();
    cases.push(CaseReport::gated("unit-point occupation sum", s.sum_mu2, 1.5, 0.0));
    cases.push(CaseReport::gated("unit-point cross pairing (real part)", s.cross.re, 0.5, 0.0));
    cases.push(CaseReport::gated("unit-point cross pairing (imag part)", s.cross.im, 0.5, 0.0));
    cases
}

fn asymptotics_cases() -> Vec<CaseReport> {
    // full-pipeline over published-formula ratios at preset long-time points
    let mut cases = Vec::new();

    let p = SystemParams::new(1.0, 1.0, 1.0).unwrap();
    let bath = BathSpec::centered(&p, 4000, BathSpec::default_width(&p)).unwrap();
    let full = delta_omega_full(&p, &InputState::Vacuum, Detector::PhotonCounting, &bath, 30.0, 1e-5)
        .unwrap();
    let asym = evaluate_formula(Formula::SmallPhoton, &p, &InputState::Vacuum, None, 30.0).unwrap();
    cases.push(CaseReport::gated(
        "small-regime photon counting, full/published ratio",
        full.delta_omega_sq / asym.delta_omega_sq,
        1.0,
        0.1,
    ));

    let p = SystemParams::new(1.0, 2.0, 1.0).unwrap();
    let input = InputState::coherent(10.0);
    let bath = BathSpec::centered(&p, 6000, BathSpec::default_width(&p)).unwrap();
    let full = delta_omega_full(&p, &input, Detector::PhotonCounting, &bath, 10.0, 1e-5).unwrap();
    let asym = evaluate_formula(Formula::LargePhoton, &p, &input, None, 10.0).unwrap();
    cases.push(CaseReport::gated(
        "large-regime photon counting, full/published ratio",
        full.delta_omega_sq / asym.delta_omega_sq,
        1.0,
        0.1,
    ));

    let gamma = 0.1;
    let p = SystemParams::new(1.0, 1.0f64.hypot(gamma), gamma).unwrap();
    let width = BathSpec::default_width(&p);
    let nb = (4.0 * width * 100.0 / std::f64::consts::PI).ceil() as usize;
    let bath = BathSpec::centered(&p, nb, width).unwrap();
    let theta = std::f64::consts::FRAC_PI_2;
    let full =
        delta_omega_full(&p, &input, Detector::Homodyne { theta }, &bath, 100.0, 1e-5).unwrap();
    let asym = evaluate_formula(Formula::CriticalHomodynePhase, &p, &input, None, 100.0).unwrap();
    cases.push(CaseReport::gated(
        "critical-magnitude phase quadrature, full/published ratio",
        full.delta_omega_sq / asym.delta_omega_sq,
        1.0,
        0.1,
    ));
    cases
}

fn wick_cases() -> Vec<CaseReport> {
    let mut cases = Vec::new();
    for (l, t) in [(1.3, 2.0), (0.5, 5.0)] {
        let p = SystemParams::new(1.0, l, 0.6).unwrap();
        let bath = BathSpec::centered(&p, 800, 60.0).unwrap();
        let mode = mode_coeffs(&p, t).unwrap();
        let bc = bath_coeffs(&p, &bath, t).unwrap();
        let m = moments(&mode, &bc, &InputState::Vacuum).unwrap();
        let exact = photon_stats(&m);
        let dec = photon_stats_decoupling(&m);
        cases.push(CaseReport::gated(
            format!("zero-mean decoupling gap (lambda={l}, t={t})"),
            (exact.variance - dec.variance).abs(),
            0.0,
            0.0,
        ));

        let mc = moments(&mode, &bc, &InputState::coherent(4.0)).unwrap();
        let exact = photon_stats(&mc);
        let dec = photon_stats_decoupling(&mc);
        cases.push(CaseReport::informational(
            format!("coherent-input decoupling relative gap, raw-moment route (lambda={l}, t={t})"),
            (exact.variance - dec.variance).abs() / exact.variance,
        ));
    }
    cases
}
