//! Exact brute-force propagator for the full system-plus-discretized-bath
//! linear dynamics, with no broadband approximation. This is the ground
//! truth against which the closed forms in [`crate::coeffs`],
//! [`crate::spectral`], and [`crate::measurement`] are validated.
//!
//! Operator ordering is pairwise interleaved:
//! `(a, adag, b_1, bdag_1, ..., b_N, bdag_N)`, so the bosonic metric is
//! `Omega = diag(1, -1, 1, -1, ...)`.

use ndarray::Array2;
use num_complex::Complex64;
use thiserror::Error;

use crate::coeffs::{BathCoefficients, ModeCoefficients};
use crate::numerics::{expm, integrate_adaptive, NumericsError};
use crate::params::{BathSpec, SystemParams};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("propagation failed: {0}")]
    Integration(#[from] NumericsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagationMethod {
    /// Dense scaling-and-squaring matrix exponential of the (time
    /// independent) generator. Exact up to linear-algebra rounding.
    MatrixExp,
    /// Column-wise adaptive Dormand-Prince integration at relative
    /// tolerance 1e-10, as an independent cross-check.
    AdaptiveRk,
}

/// Relative tolerance of the adaptive cross-check integrator.
pub const RK_RTOL: f64 = 1e-10;

/// Bogoliubov map of dimension `2 (N_b + 1)` taking initial operators to
/// time-`t` operators.
#[derive(Debug, Clone)]
pub struct BogoliubovMap {
    pub matrix: Array2<Complex64>,
    pub t: f64,
    pub params: SystemParams,
    pub bath: BathSpec,
}

/// Linear generator `A` with `d v/dt = A v` for the interleaved operator
/// coefficient vector, on an explicit mode list.
pub fn build_generator_modes(p: &SystemParams, freqs: &[f64], couplings: &[f64]) -> Array2<Complex64> {
    assert_eq!(freqs.len(), couplings.len());
    let n = 2 * (freqs.len() + 1);
    let mut a = Array2::zeros((n, n));
    let i = Complex64::i();
    a[[0, 0]] = -i * p.omega();
    a[[0, 1]] = p.lambda().into();
    a[[1, 0]] = p.lambda().into();
    a[[1, 1]] = i * p.omega();
    for (k, (&wk, &g)) in freqs.iter().zip(couplings).enumerate() {
        let (bk, bdk) = (2 * k + 2, 2 * k + 3);
        a[[0, bk]] = -i * g;
        a[[1, bdk]] = i * g;
        a[[bk, 0]] = -i * g;
        a[[bdk, 1]] = i * g;
        a[[bk, bk]] = -i * wk;
        a[[bdk, bdk]] = i * wk;
    }
    a
}

/// Generator for a flat-band bath discretization.
pub fn build_generator(p: &SystemParams, bath: &BathSpec) -> Array2<Complex64> {
    build_generator_modes(p, &bath.frequencies(), &bath.couplings())
}

/// Sparse action `dy = A y` of the generator, avoiding the dense matrix.
/// The generator is complex symmetric, so this is also the transposed
/// (row-propagating) action.
fn generator_apply(
    p: &SystemParams,
    freqs: &[f64],
    couplings: &[f64],
    y: &[Complex64],
    dy: &mut [Complex64],
) {
    let i = Complex64::i();
    let mut acc_a = -i * p.omega() * y[0] + p.lambda() * y[1];
    let mut acc_ad = p.lambda() * y[0] + i * p.omega() * y[1];
    for (k, (&wk, &g)) in freqs.iter().zip(couplings).enumerate() {
        let (bk, bdk) = (2 * k + 2, 2 * k + 3);
        acc_a -= i * g * y[bk];
        acc_ad += i * g * y[bdk];
        dy[bk] = -i * g * y[0] - i * wk * y[bk];
        dy[bdk] = i * g * y[1] + i * wk * y[bdk];
    }
    dy[0] = acc_a;
    dy[1] = acc_ad;
}

/// Exact Bogoliubov map at time `t`. `MatrixExp` is the primary method; the
/// adaptive integrator is the independent cross-check. Both are intended
/// for moderate mode counts (the map is dense); for dense-bath validation
/// of the mode row use [`reduced_row`].
pub fn propagate(
    p: &SystemParams,
    bath: &BathSpec,
    t: f64,
    method: PropagationMethod,
) -> Result<BogoliubovMap, OracleError> {
    assert!(t >= 0.0, "propagation requires t >= 0");
    let freqs = bath.frequencies();
    let couplings = bath.couplings();
    let n = 2 * (freqs.len() + 1);
    let matrix = match method {
        PropagationMethod::MatrixExp => {
            let a = build_generator_modes(p, &freqs, &couplings);
            expm(&(a * Complex64::new(t, 0.0)))
        }
        PropagationMethod::AdaptiveRk => {
            let mut m = Array2::zeros((n, n));
            let rhs = |_t: f64, y: &[Complex64], dy: &mut [Complex64]| {
                generator_apply(p, &freqs, &couplings, y, dy);
            };
            for col in 0..n {
                let mut y0 = vec![Complex64::default(); n];
                y0[col] = Complex64::new(1.0, 0.0);
                let y = integrate_adaptive(rhs, 0.0, t, &y0, RK_RTOL, 1e-14)?;
                for row in 0..n {
                    m[[row, col]] = y[row];
                }
            }
            m
        }
    };
    Ok(BogoliubovMap { matrix, t, params: *p, bath: bath.clone() })
}

/// Read the mode row of the map off into the expansion coefficients
/// `(G, L, mu_k, nu_k)`, matching the convention that the `adag(0)` and
/// `bdag_k(0)` coefficients are stored conjugated.
pub fn extract_reduced(map: &BogoliubovMap) -> (ModeCoefficients, BathCoefficients) {
    let row = map.matrix.row(0);
    let n_modes = map.bath.mode_count();
    let mode = ModeCoefficients {
        g: row[0],
        l: row[1].conj(),
        t: map.t,
    };
    let mut mu = Vec::with_capacity(n_modes);
    let mut nu = Vec::with_capacity(n_modes);
    for k in 0..n_modes {
        mu.push(row[2 * k + 2]);
        nu.push(row[2 * k + 3].conj());
    }
    (mode, BathCoefficients { mu, nu, t: map.t, bath: map.bath.clone() })
}

/// Mode-row coefficients without forming the dense map: integrates the row
/// of `e^{A t}` through the sparse generator action. The workhorse for
/// dense-bath (thousands of modes) validation runs.
pub fn reduced_row(
    p: &SystemParams,
    bath: &BathSpec,
    t: f64,
    rtol: f64,
) -> Result<(ModeCoefficients, BathCoefficients), OracleError> {
    assert!(t >= 0.0, "propagation requires t >= 0");
    let freqs = bath.frequencies();
    let couplings = bath.couplings();
    let n = 2 * (freqs.len() + 1);
    let mut y0 = vec![Complex64::default(); n];
    y0[0] = Complex64::new(1.0, 0.0);
    let rhs = |_t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        generator_apply(p, &freqs, &couplings, y, dy);
    };
    let y = integrate_adaptive(rhs, 0.0, t, &y0, rtol, 1e-14)?;
    let mode = ModeCoefficients { g: y[0], l: y[1].conj(), t };
    let mut mu = Vec::with_capacity(freqs.len());
    let mut nu = Vec::with_capacity(freqs.len());
    for k in 0..freqs.len() {
        mu.push(y[2 * k + 2]);
        nu.push(y[2 * k + 3].conj());
    }
    Ok((mode, BathCoefficients { mu, nu, t, bath: bath.clone() }))
}

/// Maximum absolute entry of `S^dag Omega S - Omega`: the full-map
/// symplectic defect. Exact dynamics keeps this at integrator tolerance.
pub fn symplectic_defect_map(map: &BogoliubovMap) -> f64 {
    let s = &map.matrix;
    let n = s.nrows();
    let metric = |j: usize| if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::default();
            for m in 0..n {
                acc += s[[m, i]].conj() * metric(m) * s[[m, j]];
            }
            let want = if i == j { metric(i) } else { 0.0 };
            worst = worst.max((acc - want).norm());
        }
    }
    worst
}

/// Eigenvalues of the 2x2 (no-bath) generator block, in closed form.
pub fn mode_generator_eigenvalues(p: &SystemParams) -> (Complex64, Complex64) {
    // [[-i w, l], [l, i w]]: trace 0, det = w^2 - l^2
    let disc = Complex64::new(p.lambda() * p.lambda() - p.omega() * p.omega(), 0.0).sqrt();
    (disc, -disc)
}
