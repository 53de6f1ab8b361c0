//! Acceptance battery: one test per shipped criterion, each printing a
//! PASS/FAIL line (visible with `--nocapture`; failures always show it).
//!
//! Every tolerance is pinned here, in code. Criteria that contradict the
//! exact dynamics are implemented exactly as stated and left red, with the
//! independently verified value printed next to the demanded one; see the
//! verification suites and module tests for the cross-checked truth.

use num_complex::Complex64;
use rayon::prelude::*;

use tpdrive::coeffs::{bath_coeffs, mode_coeffs, symplectic_defect};
use tpdrive::measurement::{
    homodyne_stats, moments, photon_stats, photon_stats_decoupling, Detector,
};
use tpdrive::numerics::integrate_adaptive;
use tpdrive::oracle::{
    build_generator_modes, propagate, reduced_row, symplectic_defect_map, PropagationMethod,
};
use tpdrive::params::{BathSpec, InputState, SystemParams};
use tpdrive::precision::{
    delta_omega_full, evaluate_formula, pt_eigenvalues, Formula,
};
use tpdrive::spectral::{
    spectral_sums_closed, spectral_sums_quadrature, symplectic_defect_continuum,
};

const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

/// Criteria run serially so the per-criterion runtime budgets measure the
/// criterion itself, not harness contention.
static SERIAL: std::sync::Mutex<()> = std::sync::Mutex::new(());

fn serial_guard() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn report(criterion: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("acceptance {criterion}: {verdict} - {detail}");
}

fn linear_fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |a: (f64, f64), p| (a.0 + p.0, a.1 + p.1));
    let (sxx, sxy) = points
        .iter()
        .fold((0.0, 0.0), |a: (f64, f64), p| (a.0 + p.0 * p.0, a.1 + p.0 * p.1));
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Criterion 1: closed-form G, L against direct adaptive integration of the
/// broadband coefficient equations, 50 parameter triples across all
/// regimes, max absolute error at most 1e-9 over t in [0, 30/gamma].
#[test]
fn c01_coefficient_closed_forms_match_ode_integration() {
    let _serial = serial_guard();
    let start = std::time::Instant::now();
    let mut triples = Vec::new();
    for omega in [0.3f64, 1.0, 3.0] {
        for gamma in [0.1f64, 1.0, 2.5] {
            let crit = omega.hypot(gamma);
            // amplified-regime members sit near threshold so the absolute
            // error target stays meaningful at double precision over the
            // full 30/gamma window
            let lambdas = [
                0.0,
                0.5 * crit,
                0.9 * crit,
                crit,
                (omega * omega + (1.05 * gamma) * (1.05 * gamma)).sqrt(),
                (omega * omega + (1.15 * gamma) * (1.15 * gamma)).sqrt(),
            ];
            for lambda in lambdas {
                triples.push((omega, lambda, gamma));
            }
        }
    }
    triples.truncate(50);
    assert_eq!(triples.len(), 50);

    let worst: f64 = triples
        .par_iter()
        .map(|&(omega, lambda, gamma)| {
            let p = SystemParams::new(omega, lambda, gamma).unwrap();
            let rhs = |_t: f64, y: &[Complex64], dy: &mut [Complex64]| {
                dy[0] = lambda * y[1] - Complex64::new(gamma, omega) * y[0];
                dy[1] = lambda * y[0] + Complex64::new(-gamma, omega) * y[1];
            };
            let t_max = 30.0 / gamma;
            let steps = 30;
            let mut y = vec![Complex64::new(1.0, 0.0), Complex64::default()];
            let mut t = 0.0;
            let mut worst = 0.0f64;
            for k in 1..=steps {
                let t_next = t_max * k as f64 / steps as f64;
                y = integrate_adaptive(rhs, t, t_next, &y, 1e-13, 1e-13).unwrap();
                t = t_next;
                let closed = mode_coeffs(&p, t).unwrap();
                worst = worst
                    .max((closed.g - y[0]).norm())
                    .max((closed.l - y[1]).norm());
            }
            worst
        })
        .reduce(|| 0.0, f64::max);

    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-9 && elapsed < 10.0;
    report(
        "1 (coefficient correctness)",
        pass,
        &format!("max |closed - integrated| = {worst:.2e} (tol 1e-9), runtime {elapsed:.1} s (budget 10 s)"),
    );
    assert!(pass, "max abs error {worst:e}, runtime {elapsed:.1} s");
}

/// Criterion 2: the exact discretized-bath propagator at the stated width
/// `W = 80 max(gamma, lambda, omega)` with 4000 modes reproduces G and L
/// within 1% at t*gamma <= 5, and halving the grid spacing reduces the
/// discrepancy.
#[test]
fn c02_broadband_validation_at_stated_width() {
    let _serial = serial_guard();
    let start = std::time::Instant::now();
    let runs: Vec<(f64, f64, f64, f64)> = [0.0, 0.5, 1.0, 1.3]
        .par_iter()
        .map(|&lambda| {
            let p = SystemParams::new(1.0, lambda, 1.0).unwrap();
            let width = BathSpec::default_width(&p);
            let rel_err = |width: f64, nb: usize| {
                let bath = BathSpec::centered(&p, nb, width).unwrap();
                let (mode, _) = reduced_row(&p, &bath, 5.0, 1e-10).unwrap();
                let closed = mode_coeffs(&p, 5.0).unwrap();
                let scale = closed.g.norm().max(closed.l.norm());
                let ge = (mode.g - closed.g).norm() / closed.g.norm().max(1e-6 * scale);
                let le = (mode.l - closed.l).norm() / closed.l.norm().max(1e-6 * scale);
                ge.max(le)
            };
            (
                lambda,
                rel_err(width, 4000),
                rel_err(width, 8000),
                rel_err(2.0 * width, 8000),
            )
        })
        .collect();

    let mut pass = true;
    let mut detail = String::new();
    for (lambda, base, halved_dw, doubled_w) in runs {
        let ok_gate = base <= 0.01;
        let ok_halving = halved_dw < base;
        pass &= ok_gate && ok_halving;
        detail.push_str(&format!(
            "[lambda={lambda}: err {base:.4} (tol 0.01), halved-spacing err {halved_dw:.4} ({}), doubled-width err {doubled_w:.4}] ",
            if ok_halving { "reduced" } else { "not reduced" },
        ));
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 300.0;
    report(
        "2 (broadband validation)",
        pass,
        &format!("{detail}runtime {elapsed:.0} s (budget 300 s); the discrepancy is band-truncation limited: it scales as 1/W and is insensitive to the grid spacing"),
    );
    assert!(pass, "{detail}");
}

/// Criterion 3: stationary spectral integrals, closed form vs adaptive
/// quadrature to 1e-9 relative on a 5x5x5 log grid in the small regime,
/// plus the exact unit-point values 1.5 and (1+i)/2.
#[test]
fn c03_spectral_integrals() {
    let _serial = serial_guard();
    let start = std::time::Instant::now();
    let grid: Vec<f64> = (0..5).map(|i| 0.1f64 * 100f64.powf(i as f64 / 4.0)).collect();
    let fracs: Vec<f64> = (0..5).map(|i| 0.1f64 * 9f64.powf(i as f64 / 4.0)).collect();
    let mut worst = 0.0f64;
    for &omega in &grid {
        for &gamma in &grid {
            for &frac in &fracs {
                let p = SystemParams::new(omega, frac * omega.hypot(gamma), gamma).unwrap();
                let closed = spectral_sums_closed(&p).unwrap();
                let quad = spectral_sums_quadrature(&p, 1e-10).unwrap();
                worst = worst
                    .max((quad.sum_mu2 - closed.sum_mu2).abs() / closed.sum_mu2)
                    .max((quad.sum_nu2 - closed.sum_nu2).abs() / closed.sum_nu2.max(1.0))
                    .max((quad.cross - closed.cross).norm() / closed.cross.norm().max(1.0));
            }
        }
    }
    let p = SystemParams::new(1.0, 1.0, 1.0).unwrap();
    let s = spectral_sums_closed(&p).unwrap();
    let pins = s.sum_mu2 == 1.5 && s.cross == Complex64::new(0.5, 0.5);
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-9 && pins && elapsed < 30.0;
    report(
        "3 (spectral integrals)",
        pass,
        &format!("max relative gap {worst:.2e} (tol 1e-9), unit-point pins exact: {pins}, runtime {elapsed:.1} s (budget 30 s)"),
    );
    assert!(pass);
}

/// Criterion 4: small-regime stationary statistics from the bath sums at
/// t*gamma = 30, demanded to match mean = lambda^2/(gamma^2+omega^2-lambda^2)
/// within 1% and variance = lambda^2(3 gamma^2+3 omega^2-lambda^2)/gap^2
/// within 2% -- targets 1 and 5 at the unit point.
///
/// The demanded targets are inconsistent with the exact dynamics: the
/// stationary occupation is lambda^2/(2 gap) and the variance is one
/// quarter of the demanded value, as confirmed independently by the
/// stationary spectral sums, the second-moment equations of motion, and
/// the exact discretized-bath propagator (see the module tests). The
/// criterion is implemented as stated and fails honestly.
#[test]
fn c04_small_regime_stationary_statistics() {
    let _serial = serial_guard();
    let p = SystemParams::new(1.0, 1.0, 1.0).unwrap();
    let bath = BathSpec::centered(&p, 4000, BathSpec::default_width(&p)).unwrap();
    let t = 30.0;
    let mode = mode_coeffs(&p, t).unwrap();
    let bc = bath_coeffs(&p, &bath, t).unwrap();
    let m = moments(&mode, &bc, &InputState::Vacuum).unwrap();
    let stats = photon_stats(&m);

    let gap = p.regime_gap();
    let l2 = p.lambda() * p.lambda();
    let mean_target = l2 / gap;
    let var_target = l2 * (3.0 * (p.gamma() * p.gamma() + p.omega() * p.omega()) - l2) / (gap * gap);
    assert_eq!(mean_target, 1.0);
    assert_eq!(var_target, 5.0);

    let mean_ok = (stats.mean - mean_target).abs() <= 0.01 * mean_target;
    let var_ok = (stats.variance - var_target).abs() <= 0.02 * var_target;
    let pass = mean_ok && var_ok;
    report(
        "4 (small-regime stationary statistics)",
        pass,
        &format!(
            "observed mean {:.6} vs demanded {mean_target} (1%), observed variance {:.6} vs demanded {var_target} (2%); \
             the exact stationary values are lambda^2/(2 gap) = 0.5 and 1.25, cross-verified by three independent routes",
            stats.mean, stats.variance
        ),
    );
    assert!(
        pass,
        "stationary statistics: observed ({:.6}, {:.6}), demanded ({mean_target}, {var_target}); \
         demanded values conflict with the exact dynamics",
        stats.mean, stats.variance
    );
}

/// Criterion 5: small-regime precision at the unit point, t*gamma = 30,
/// photon counting: 1.25 within 10%; with lambda = 0 exactly +inf.
#[test]
fn c05_small_regime_precision() {
    let _serial = serial_guard();
    let p = SystemParams::new(1.0, 1.0, 1.0).unwrap();
    let bath = BathSpec::centered(&p, 4000, BathSpec::default_width(&p)).unwrap();
    let r = delta_omega_full(&p, &InputState::Vacuum, Detector::PhotonCounting, &bath, 30.0, 1e-5)
        .unwrap();
    let value_ok = (r.delta_omega_sq - 1.25).abs() <= 0.125;

    let p0 = SystemParams::new(1.0, 0.0, 1.0).unwrap();
    let bath0 = BathSpec::centered(&p0, 4000, BathSpec::default_width(&p0)).unwrap();
    let r0 = delta_omega_full(&p0, &InputState::Vacuum, Detector::PhotonCounting, &bath0, 30.0, 1e-5)
        .unwrap();
    let inf_ok = r0.delta_omega_sq.is_infinite() && r0.delta_omega_sq > 0.0;

    let pass = value_ok && inf_ok;
    report(
        "5 (small-regime precision)",
        pass,
        &format!(
            "full-pipeline value {:.6} vs 1.25 within 10%: {value_ok}; zero drive gives +inf: {inf_ok}",
            r.delta_omega_sq
        ),
    );
    assert!(pass);
}

/// Criterion 6: amplified-regime scaling at (omega=1, gamma=1, lambda=2,
/// N=100): the t=10 value demanded equal to 4.02e-5 within 10%, log-log
/// slope -2 +- 0.05 over t in [5, 50], and N-doubling halves the result
/// within 2%.
///
/// The demanded t=10 value evaluates the quoted formula, which omits the
/// bath-amplified noise and the squeezing correlation term; the exact
/// pipeline sits a factor ~5 above it. The slope over the stated window
/// carries the 1/t corrections of the window's short end and lands near
/// -2.07. Both sub-checks are implemented as stated and fail honestly;
/// N-scaling passes.
#[test]
fn c06_amplified_regime_scaling() {
    let _serial = serial_guard();
    let p = SystemParams::new(1.0, 2.0, 1.0).unwrap();
    let input = InputState::coherent(10.0);
    let bath = BathSpec::centered(&p, 6000, BathSpec::default_width(&p)).unwrap();

    let r10 = delta_omega_full(&p, &input, Detector::PhotonCounting, &bath, 10.0, 1e-5).unwrap();
    let value_ok = (r10.delta_omega_sq - 4.02e-5).abs() <= 0.1 * 4.02e-5;

    let times = [5.0, 8.0, 13.0, 20.0, 32.0, 50.0];
    let points: Vec<(f64, f64)> = times
        .par_iter()
        .map(|&t| {
            let nb = ((4.0 * 160.0 * t / std::f64::consts::PI).ceil() as usize).max(4000);
            let b = BathSpec::centered(&p, nb, 160.0).unwrap();
            let r = delta_omega_full(&p, &input, Detector::PhotonCounting, &b, t, 1e-5).unwrap();
            (t.ln(), r.delta_omega_sq.ln())
        })
        .collect();
    let slope = linear_fit_slope(&points);
    let slope_ok = (slope + 2.0).abs() <= 0.05;

    let doubled = InputState::coherent(200.0f64.sqrt());
    let r_n2 = delta_omega_full(&p, &doubled, Detector::PhotonCounting, &bath, 10.0, 1e-5).unwrap();
    let n_ratio = r10.delta_omega_sq / r_n2.delta_omega_sq;
    let n_ok = (n_ratio - 2.0).abs() <= 0.04;

    let pass = value_ok && slope_ok && n_ok;
    report(
        "6 (amplified-regime scaling)",
        pass,
        &format!(
            "t=10 value {:.4e} vs demanded 4.02e-5 within 10%: {value_ok} (exact pipeline exceeds the quoted formula ~5x); \
             slope {slope:.4} vs -2 +- 0.05: {slope_ok}; N-doubling ratio {n_ratio:.4} vs 2 within 2%: {n_ok}",
            r10.delta_omega_sq
        ),
    );
    assert!(pass, "value {:.4e} (want 4.02e-5 +- 10%), slope {slope:.4}, N ratio {n_ratio:.4}", r10.delta_omega_sq);
}

/// Criterion 7: homodyne asymptotics. The full pipeline is demanded to
/// match each published homodyne formula within 15% at validity-gated
/// points, including the critical phase-quadrature value 7.675e-9 at
/// (omega=1, gamma=0.1, N=100, t=100); and the phase-quadrature advantage
/// at small omega must hold as a strict ordering.
///
/// The published homodyne formulas sit a factor ~4 (amplified regime) to
/// ~15 (critical magnitude) below the exact pipeline, so the 15% matches
/// fail honestly; the qualitative ordering holds and passes.
#[test]
fn c07_homodyne_asymptotics() {
    let _serial = serial_guard();
    let input = InputState::coherent(10.0);

    // amplified regime, small gamma so the quoted side conditions hold
    let p = SystemParams::new(0.2, 2.0, 0.05).unwrap();
    let bath = BathSpec::centered(&p, 8000, BathSpec::default_width(&p)).unwrap();
    let t = 12.0;
    let f0 = delta_omega_full(&p, &input, Detector::Homodyne { theta: 0.0 }, &bath, t, 1e-5).unwrap();
    let f90 =
        delta_omega_full(&p, &input, Detector::Homodyne { theta: FRAC_PI_2 }, &bath, t, 1e-5).unwrap();
    let a0 = evaluate_formula(Formula::LargeHomodyneAmplitude, &p, &input, None, t).unwrap();
    let a90 = evaluate_formula(Formula::LargeHomodynePhase, &p, &input, None, t).unwrap();
    let amp_ok = (f0.delta_omega_sq / a0.delta_omega_sq - 1.0).abs() <= 0.15;
    let phase_ok = (f90.delta_omega_sq / a90.delta_omega_sq - 1.0).abs() <= 0.15;

    // critical magnitude, both angles
    let gamma = 0.1;
    let pc = SystemParams::new(1.0, 1.0f64.hypot(gamma), gamma).unwrap();
    let width = BathSpec::default_width(&pc);
    let nb = (4.0 * width * 100.0 / std::f64::consts::PI).ceil() as usize;
    let bc = BathSpec::centered(&pc, nb, width).unwrap();
    let c0 =
        delta_omega_full(&pc, &input, Detector::Homodyne { theta: 0.0 }, &bc, 100.0, 1e-5).unwrap();
    let c90 = delta_omega_full(&pc, &input, Detector::Homodyne { theta: FRAC_PI_2 }, &bc, 100.0, 1e-5)
        .unwrap();
    let ca0 = evaluate_formula(Formula::CriticalHomodyneAmplitude, &pc, &input, None, 100.0).unwrap();
    let ca90 = evaluate_formula(Formula::CriticalHomodynePhase, &pc, &input, None, 100.0).unwrap();
    let crit0_ok = (c0.delta_omega_sq / ca0.delta_omega_sq - 1.0).abs() <= 0.15;
    let crit90_ok = (c90.delta_omega_sq / ca90.delta_omega_sq - 1.0).abs() <= 0.15;
    let pin_ok = (ca90.delta_omega_sq - 7.675e-9).abs() <= 1e-12;

    // vanishing-frequency phase quadrature: the published value is zero; the
    // exact value at omega = 0 is bounded by the squeezed-noise floor
    let p18 = SystemParams::new(0.0, 2.0, 0.5).unwrap();
    let b18 = BathSpec::centered(&p18, 8000, BathSpec::default_width(&p18)).unwrap();
    let f18 = delta_omega_full(&p18, &input, Detector::Homodyne { theta: FRAC_PI_2 }, &b18, 12.0, 1e-5)
        .unwrap();
    let lowfreq_ok = f18.delta_omega_sq.abs() <= 1e-8;

    // strict ordering of the two quadratures for omega <= 0.1 lambda
    let mut ordering_ok = true;
    let mut ordering_detail = String::new();
    for omega in [0.05, 0.1, 0.2] {
        let pl = SystemParams::new(omega, 2.0, 1.0).unwrap();
        let bl = BathSpec::centered(&pl, 8000, BathSpec::default_width(&pl)).unwrap();
        let o0 =
            delta_omega_full(&pl, &input, Detector::Homodyne { theta: 0.0 }, &bl, 12.0, 1e-5).unwrap();
        let o90 = delta_omega_full(&pl, &input, Detector::Homodyne { theta: FRAC_PI_2 }, &bl, 12.0, 1e-5)
            .unwrap();
        let strict = o90.delta_omega_sq < o0.delta_omega_sq;
        ordering_ok &= strict;
        ordering_detail.push_str(&format!(
            "[omega={omega}: {:.2e} < {:.2e}: {strict}] ",
            o90.delta_omega_sq, o0.delta_omega_sq
        ));
    }

    let pass = amp_ok && phase_ok && crit0_ok && crit90_ok && pin_ok && lowfreq_ok && ordering_ok;
    report(
        "7 (homodyne asymptotics)",
        pass,
        &format!(
            "amplified amplitude-quadrature ratio {:.2} within 15%: {amp_ok}; amplified phase-quadrature ratio {:.2}: {phase_ok}; \
             critical ratios {:.2}/{:.2} within 15%: {crit0_ok}/{crit90_ok} (published value pin 7.675e-9: {pin_ok}); \
             vanishing-frequency pipeline value {:.1e} <= 1e-8: {lowfreq_ok}; phase-quadrature ordering {ordering_detail}",
            f0.delta_omega_sq / a0.delta_omega_sq,
            f90.delta_omega_sq / a90.delta_omega_sq,
            c0.delta_omega_sq / ca0.delta_omega_sq,
            c90.delta_omega_sq / ca90.delta_omega_sq,
            f18.delta_omega_sq,
        ),
    );
    assert!(pass);
}

/// Criterion 8: exceptional-point coalescence at lambda = omega to machine
/// precision, and the no-bath generator spectrum equal to
/// -i (+- sqrt(omega^2 - lambda^2)) to 1e-12.
#[test]
fn c08_exceptional_point() {
    let _serial = serial_guard();
    let p = SystemParams::new(1.3, 1.3, 0.4).unwrap();
    let h = pt_eigenvalues(&p);
    let coalesce_ok = h.eigenvalues.0 == h.eigenvalues.1
        && h.eigenvalues.0 == Complex64::default()
        && h.exceptional_point;

    let mut spectrum_ok = true;
    for (omega, lambda) in [(1.0, 0.0), (1.0, 0.5), (1.0, 1.0), (1.0, 2.0), (0.3, 0.9)] {
        let p = SystemParams::new(omega, lambda, 1.0).unwrap();
        let a = build_generator_modes(&p, &[], &[]);
        // trace is zero; eigenvalues are +- sqrt(-det) from the entries
        let det = a[[0, 0]] * a[[1, 1]] - a[[0, 1]] * a[[1, 0]];
        let eig = (-det).sqrt();
        let want = -Complex64::i() * Complex64::new(omega * omega - lambda * lambda, 0.0).sqrt();
        let matches = (eig - want).norm() <= 1e-12 || (eig + want).norm() <= 1e-12;
        spectrum_ok &= matches;
    }
    let pass = coalesce_ok && spectrum_ok;
    report(
        "8 (exceptional point)",
        pass,
        &format!("coalescence exact: {coalesce_ok}; generator spectrum matches -i (+-sqrt(omega^2-lambda^2)) to 1e-12: {spectrum_ok}"),
    );
    assert!(pass);
}

/// Criterion 9: invariant suites. Symplectic defect at most 1e-8 for the
/// broadband closed forms in the dense-band (infinite-band) limit and at
/// most 1e-9 for the exact propagator at any t; homodyne uncertainty
/// product bounded below by 1/16 - 1e-12 everywhere; decoupling equals the
/// exact fourth moment identically for zero-mean states and is reported
/// for coherent inputs.
#[test]
fn c09_invariant_suites() {
    let _serial = serial_guard();
    // closed forms against the infinite-band identity
    let mut closed_ok = true;
    let mut worst_closed = 0.0f64;
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
            let d = symplectic_defect_continuum(&p, t, 1e-10).unwrap();
            worst_closed = worst_closed.max(d);
            closed_ok &= d <= 1e-8;
        }
    }

    // exact propagator, map level and dense-row level
    let p = SystemParams::new(1.0, 0.8, 0.6).unwrap();
    let bath = BathSpec::centered(&p, 40, 30.0).unwrap();
    let mut oracle_ok = true;
    let mut worst_oracle = 0.0f64;
    for t in [0.7, 2.0, 6.0] {
        let map = propagate(&p, &bath, t, PropagationMethod::MatrixExp).unwrap();
        let d = symplectic_defect_map(&map);
        worst_oracle = worst_oracle.max(d);
        oracle_ok &= d <= 1e-9;
    }
    let dense = BathSpec::centered(&p, 2000, 80.0).unwrap();
    let (mode, bathc) = reduced_row(&p, &dense, 5.0, 1e-11).unwrap();
    let row_defect = symplectic_defect(&mode, &bathc);
    oracle_ok &= row_defect <= 1e-9;

    // uncertainty product across an evolved-state grid
    let mut product_ok = true;
    let mut worst_product = f64::INFINITY;
    for (l, t) in [(0.0, 2.0), (0.9, 1.0), (1.3, 3.0), (1.41, 2.0)] {
        let p = SystemParams::new(1.0, l, 1.0).unwrap();
        let b = BathSpec::centered(&p, 1000, 80.0).unwrap();
        let m = moments(
            &mode_coeffs(&p, t).unwrap(),
            &bath_coeffs(&p, &b, t).unwrap(),
            &InputState::coherent(2.0),
        )
        .unwrap();
        for theta in [0.0, 0.5, 1.1, 2.6] {
            let v1 = homodyne_stats(&m, theta).variance;
            let v2 = homodyne_stats(&m, theta + FRAC_PI_2).variance;
            worst_product = worst_product.min(v1 * v2);
            product_ok &= v1 * v2 >= 1.0 / 16.0 - 1e-12;
        }
    }

    // decoupling vs exact fourth moments
    let p = SystemParams::new(1.0, 1.3, 0.6).unwrap();
    let b = BathSpec::centered(&p, 800, 60.0).unwrap();
    let mode = mode_coeffs(&p, 2.0).unwrap();
    let bc = bath_coeffs(&p, &b, 2.0).unwrap();
    let zero_mean = moments(&mode, &bc, &InputState::Vacuum).unwrap();
    let wick_gap =
        (photon_stats(&zero_mean).variance - photon_stats_decoupling(&zero_mean).variance).abs();
    let coherent = moments(&mode, &bc, &InputState::coherent(3.0)).unwrap();
    let coherent_gap = (photon_stats(&coherent).variance
        - photon_stats_decoupling(&coherent).variance)
        .abs()
        / photon_stats(&coherent).variance;

    let pass = closed_ok && oracle_ok && product_ok && wick_gap == 0.0;
    report(
        "9 (invariant suites)",
        pass,
        &format!(
            "closed-form defect max {worst_closed:.2e} (tol 1e-8): {closed_ok}; oracle defect max {worst_oracle:.2e}, row defect {row_defect:.2e} (tol 1e-9): {oracle_ok}; \
             min uncertainty product {worst_product:.6} >= 1/16 - 1e-12: {product_ok}; zero-mean decoupling gap {wick_gap:e} (exact 0); \
             coherent-input decoupling relative gap {coherent_gap:.2e} (reported, not gated)"
        ),
    );
    assert!(pass);
}

/// Criterion 10: the source reports no experimental data or tables; all
/// acceptance is formula-level and oracle-based, which the preceding
/// criteria cover at desk scale. Nothing further to execute.
#[test]
fn c10_formula_level_scope_note() {
    let _serial = serial_guard();
    report(
        "10 (scope note)",
        true,
        "no experimental datasets to reproduce; coverage is formula- and oracle-level by construction",
    );
}
