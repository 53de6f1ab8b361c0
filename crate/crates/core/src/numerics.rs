//! Shared numerical kernels: dense matrix exponential, adaptive Runge-Kutta
//! integration of complex linear systems, and adaptive Gauss-Kronrod
//! quadrature (finite and infinite intervals).

use ndarray::{s, Array2};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("adaptive integrator step size underflowed at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("quadrature did not converge: estimated error {err:e} above budget {budget:e}")]
    QuadratureNonConvergence { err: f64, budget: f64 },
}

// ---------------------------------------------------------------------------
// Matrix exponential
// ---------------------------------------------------------------------------

/// Matrix 1-norm (maximum absolute column sum).
fn one_norm(a: &Array2<Complex64>) -> f64 {
    let mut max = 0.0f64;
    for j in 0..a.ncols() {
        let sum: f64 = (0..a.nrows()).map(|i| a[[i, j]].norm()).sum();
        max = max.max(sum);
    }
    max
}

/// Solve A X = B by Gaussian elimination with partial pivoting.
fn solve(a: Array2<Complex64>, b: Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    let m = b.ncols();
    let mut aug = Array2::zeros((n, n + m));
    aug.slice_mut(s![.., ..n]).assign(&a);
    aug.slice_mut(s![.., n..]).assign(&b);

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = aug[[col, col]].norm();
        for row in (col + 1)..n {
            let mag = aug[[row, col]].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_row != col {
            for j in col..(n + m) {
                aug.swap([col, j], [pivot_row, j]);
            }
        }
        let pivot = aug[[col, col]];
        assert!(pivot.norm() > 0.0, "singular matrix in expm solve");
        for row in (col + 1)..n {
            let factor = aug[[row, col]] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in col..(n + m) {
                let v = aug[[col, j]];
                aug[[row, j]] -= factor * v;
            }
        }
    }

    let mut x = Array2::<Complex64>::zeros((n, m));
    for col in (0..n).rev() {
        let pivot = aug[[col, col]];
        for j in 0..m {
            let mut sum = aug[[col, n + j]];
            for k in (col + 1)..n {
                sum -= aug[[col, k]] * x[[k, j]];
            }
            x[[col, j]] = sum / pivot;
        }
    }
    x
}

/// Padé(13) coefficients for the scaling-and-squaring matrix exponential
/// (Higham 2005).
const PADE13: [f64; 14] = [
    1.0,
    0.5,
    0.12,
    1.833_333_333_333_333_4e-2,
    1.992_753_623_188_405_8e-3,
    1.630_434_782_608_696e-4,
    1.035_196_687_370_600_4e-5,
    5.175_983_436_853_002e-7,
    2.043_151_356_652_500_6e-8,
    6.306_022_705_717_595e-10,
    1.483_770_048_404_140_3e-11,
    2.529_153_491_597_966e-13,
    2.810_170_546_219_962_4e-15,
    1.544_049_750_670_309e-17,
];

/// Dense matrix exponential by scaling-and-squaring with a Padé(13)
/// approximant. Exact up to linear-algebra rounding for the matrix sizes
/// used here (a few hundred).
pub fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return Array2::zeros((0, 0));
    }

    let theta13 = 5.371_920_351_148_152;
    let norm = one_norm(a);
    let squarings = if norm > theta13 {
        (norm / theta13).log2().ceil() as u32
    } else {
        0
    };
    let scale = Complex64::new((0.5f64).powi(squarings as i32), 0.0);
    let a1 = a * scale;

    let eye = Array2::from_diag_elem(n, Complex64::new(1.0, 0.0));
    let a2 = a1.dot(&a1);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);

    let c = |k: usize| Complex64::new(PADE13[k], 0.0);
    let w1 = &a6 * c(13) + &a4 * c(11) + &a2 * c(9);
    let w2 = w1.dot(&a6) + &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &eye * c(1);
    let u = a1.dot(&w2);
    let v1 = &a6 * c(12) + &a4 * c(10) + &a2 * c(8);
    let v = v1.dot(&a6) + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &eye * c(0);

    let mut r = solve(&v - &u, &v + &u);
    for _ in 0..squarings {
        r = r.dot(&r);
    }
    r
}

// ---------------------------------------------------------------------------
// Adaptive Runge-Kutta (Dormand-Prince 5(4)) for complex states
// ---------------------------------------------------------------------------

const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Difference between the 5th- and embedded 4th-order weights.
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate `dy/dt = f(t, y)` from `t0` to `t1` with an adaptive
/// Dormand-Prince 5(4) scheme. The state is a flat complex vector.
pub fn integrate_adaptive<F>(
    f: F,
    t0: f64,
    t1: f64,
    y0: &[Complex64],
    rtol: f64,
    atol: f64,
) -> Result<Vec<Complex64>, NumericsError>
where
    F: Fn(f64, &[Complex64], &mut [Complex64]),
{
    let n = y0.len();
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0.to_vec());
    }
    assert!(span > 0.0, "integration requires t1 >= t0");

    let mut y = y0.to_vec();
    let mut t = t0;
    let mut k = vec![vec![Complex64::default(); n]; 7];
    let mut ytmp = vec![Complex64::default(); n];
    let mut ynew = vec![Complex64::default(); n];

    f(t, &y, &mut k[0]);
    // initial step from the RHS magnitude
    let rhs_norm = k[0].iter().map(|v| v.norm()).fold(0.0f64, f64::max).max(1e-12);
    let mut h = (0.01 / rhs_norm).min(span);
    let h_min = span * 1e-14;

    loop {
        if t >= t1 {
            return Ok(y);
        }
        h = h.min(t1 - t);
        if h < h_min {
            return Err(NumericsError::StepUnderflow { t });
        }

        for stage in 1..7 {
            for i in 0..n {
                let mut acc = Complex64::default();
                for (j, kj) in k.iter().enumerate().take(stage) {
                    let a = DP_A[stage - 1][j];
                    if a != 0.0 {
                        acc += kj[i] * a;
                    }
                }
                ytmp[i] = y[i] + acc * h;
            }
            if stage == 6 {
                // stage 7 evaluates at the 5th-order candidate (FSAL)
                ynew.copy_from_slice(&ytmp);
            }
            f(t + DP_C[stage] * h, &ytmp, &mut k[stage]);
        }

        // embedded error estimate
        let mut err_sq = 0.0f64;
        for i in 0..n {
            let mut e = Complex64::default();
            for (j, kj) in k.iter().enumerate() {
                if DP_E[j] != 0.0 {
                    e += kj[i] * DP_E[j];
                }
            }
            let scale = atol + rtol * y[i].norm().max(ynew[i].norm());
            let r = (e * h).norm() / scale;
            err_sq += r * r;
        }
        let err = (err_sq / n as f64).sqrt();

        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&ynew);
            let (head, tail) = k.split_at_mut(6);
            head[0].copy_from_slice(&tail[0]);
        }
        // on rejection k[0] still holds f(t, y) and stays valid
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod quadrature
// ---------------------------------------------------------------------------

/// 15-point Kronrod abscissae on [-1, 1] (positive half).
#[allow(clippy::excessive_precision)]
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];
#[allow(clippy::excessive_precision)]
const WG7: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_97,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// One G7-K15 panel: returns (kronrod, |kronrod - gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK15[7];
    let mut gauss = fc * WG7[3];
    for j in 0..7 {
        let x = half * XGK15[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        kronrod += WGK15[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG7[j / 2] * (f1 + f2);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive quadrature of `f` over the finite interval `[a, b]`.
/// Converged when the error estimate drops below
/// `max(rtol * |integral|, atol)`; an absolute term is required for
/// integrals that are legitimately close to zero by cancellation.
pub fn quad_adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rtol: f64,
    atol: f64,
) -> Result<f64, NumericsError> {
    // interval priority list; refine the worst panel until the budget holds
    let (v0, e0) = gk15(f, a, b);
    let mut panels = vec![(a, b, v0, e0)];
    let budget_of = |panels: &[(f64, f64, f64, f64)]| {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        (total, err, (rtol * total.abs()).max(atol) + 1e-300)
    };
    for _ in 0..4000 {
        let (total, err, budget) = budget_of(&panels);
        if err <= budget {
            return Ok(total);
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty panel list");
        let (pa, pb, _, perr) = panels.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            return Err(NumericsError::QuadratureNonConvergence { err: perr, budget });
        }
        let (vl, el) = gk15(f, pa, mid);
        let (vr, er) = gk15(f, mid, pb);
        panels.push((pa, mid, vl, el));
        panels.push((mid, pb, vr, er));
    }
    let (total, err, budget) = budget_of(&panels);
    if err <= budget {
        Ok(total)
    } else {
        Err(NumericsError::QuadratureNonConvergence { err, budget })
    }
}

/// Adaptive quadrature of `f` over the whole real line via the rational
/// substitution `x = tan(u)`, `u` in `(-pi/2, pi/2)`, split at zero so the
/// origin is never a quadrature node. Suitable for integrands decaying at
/// least as `x^-2`.
pub fn quad_real_line<F: Fn(f64) -> f64>(f: &F, rtol: f64, atol: f64) -> Result<f64, NumericsError> {
    let g = |u: f64| {
        let c = u.cos();
        f(u.tan()) / (c * c)
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let left = quad_adaptive(&g, -half_pi, 0.0, rtol, 0.5 * atol)?;
    let right = quad_adaptive(&g, 0.0, half_pi, rtol, 0.5 * atol)?;
    Ok(left + right)
}
