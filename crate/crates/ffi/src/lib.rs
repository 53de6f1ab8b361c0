//! C ABI for the frequency-estimation toolkit: opaque parameter handles,
//! status codes, and flat `double` outputs so other languages can bind
//! without knowing anything about Rust.
//!
//! The companion header lives at `include/tpdrive.h` and is maintained in
//! lockstep with the exports here; the `ffi_surface` test exercises every
//! entry point through the C ABI.
//!
//! Conventions: every fallible call returns a [`TpdStatus`]; outputs are
//! written through caller-provided pointers only on `TPD_OK`; all pointers
//! must be non-null and properly aligned; a handle is freed exactly once.

use std::panic::{catch_unwind, AssertUnwindSafe};

use tpdrive::coeffs::mode_coeffs;
use tpdrive::measurement::Detector;
use tpdrive::params::{classify_regime, BathSpec, InputState, Regime, SystemParams};
use tpdrive::precision::{delta_omega_full, pt_eigenvalues, FD_STEP_DEFAULT};
use tpdrive::spectral::spectral_sums_closed;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TpdStatus {
    /// Success; outputs are valid.
    TpdOk = 0,
    /// A required pointer was null.
    TpdNullPointer = 1,
    /// Arguments violate a documented precondition.
    TpdInvalidArgument = 2,
    /// The evaluation failed (diverging integrals, resonant poles,
    /// ill-conditioned derivatives).
    TpdEvaluationFailed = 3,
}

/// Opaque handle around the validated parameter triple.
pub struct TpdParams {
    inner: SystemParams,
}

/// Detector selectors for `tpd_delta_omega_full`.
pub const TPD_DETECTOR_PHOTON: i32 = 0;
pub const TPD_DETECTOR_HOMODYNE: i32 = 1;

/// Create a parameter handle; `omega >= 0`, `lambda >= 0`, `gamma > 0`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn tpd_params_new(
    omega: f64,
    lambda: f64,
    gamma: f64,
    out: *mut *mut TpdParams,
) -> TpdStatus {
    if out.is_null() {
        return TpdStatus::TpdNullPointer;
    }
    match SystemParams::new(omega, lambda, gamma) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(TpdParams { inner }));
            TpdStatus::TpdOk
        }
        Err(_) => TpdStatus::TpdInvalidArgument,
    }
}

/// Release a handle created by [`tpd_params_new`]. Null is a no-op.
///
/// # Safety
/// `params` must be null or a pointer returned by `tpd_params_new` that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn tpd_params_free(params: *mut TpdParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

unsafe fn borrow<'a>(params: *const TpdParams) -> Option<&'a SystemParams> {
    params.as_ref().map(|p| &p.inner)
}

/// Drive-regime classification. `regime` receives 0 (small), 1 (critical)
/// or 2 (large); `exceptional` receives the `lambda = omega` flag.
///
/// # Safety
/// `params` must be a live handle; `regime` and `exceptional` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn tpd_classify_regime(
    params: *const TpdParams,
    eps_regime: f64,
    regime: *mut i32,
    exceptional: *mut bool,
) -> TpdStatus {
    let Some(p) = borrow(params) else {
        return TpdStatus::TpdNullPointer;
    };
    if regime.is_null() || exceptional.is_null() {
        return TpdStatus::TpdNullPointer;
    }
    if eps_regime.is_nan() || eps_regime < 0.0 {
        return TpdStatus::TpdInvalidArgument;
    }
    let r = classify_regime(p, eps_regime);
    *regime = match r.regime {
        Regime::Small => 0,
        Regime::Critical => 1,
        Regime::Large => 2,
    };
    *exceptional = r.exceptional_point;
    TpdStatus::TpdOk
}

/// Mode coefficients at time `t`; `out` receives
/// `[Re G, Im G, Re L, Im L]`.
///
/// # Safety
/// `params` must be a live handle; `out` must be valid for four writes.
#[no_mangle]
pub unsafe extern "C" fn tpd_mode_coefficients(
    params: *const TpdParams,
    t: f64,
    out: *mut f64,
) -> TpdStatus {
    let Some(p) = borrow(params) else {
        return TpdStatus::TpdNullPointer;
    };
    if out.is_null() {
        return TpdStatus::TpdNullPointer;
    }
    match mode_coeffs(p, t) {
        Ok(m) => {
            let slice = std::slice::from_raw_parts_mut(out, 4);
            slice[0] = m.g.re;
            slice[1] = m.g.im;
            slice[2] = m.l.re;
            slice[3] = m.l.im;
            TpdStatus::TpdOk
        }
        Err(_) => TpdStatus::TpdInvalidArgument,
    }
}

/// Stationary spectral sums of the small-magnitude regime; `out` receives
/// `[sum_mu2, sum_nu2, Re cross, Im cross]`. Fails outside the small
/// regime, where the sums diverge.
///
/// # Safety
/// `params` must be a live handle; `out` must be valid for four writes.
#[no_mangle]
pub unsafe extern "C" fn tpd_spectral_sums(params: *const TpdParams, out: *mut f64) -> TpdStatus {
    let Some(p) = borrow(params) else {
        return TpdStatus::TpdNullPointer;
    };
    if out.is_null() {
        return TpdStatus::TpdNullPointer;
    }
    match spectral_sums_closed(p) {
        Ok(s) => {
            let slice = std::slice::from_raw_parts_mut(out, 4);
            slice[0] = s.sum_mu2;
            slice[1] = s.sum_nu2;
            slice[2] = s.cross.re;
            slice[3] = s.cross.im;
            TpdStatus::TpdOk
        }
        Err(_) => TpdStatus::TpdEvaluationFailed,
    }
}

/// Eigenvalue pair of the effective PT-symmetric generator; `out` receives
/// `[Re e+, Im e+, Re e-, Im e-]`; `exceptional` the coalescence flag.
///
/// # Safety
/// `params` must be a live handle; `out` must be valid for four writes;
/// `exceptional` for one.
#[no_mangle]
pub unsafe extern "C" fn tpd_pt_eigenvalues(
    params: *const TpdParams,
    out: *mut f64,
    exceptional: *mut bool,
) -> TpdStatus {
    let Some(p) = borrow(params) else {
        return TpdStatus::TpdNullPointer;
    };
    if out.is_null() || exceptional.is_null() {
        return TpdStatus::TpdNullPointer;
    }
    let h = pt_eigenvalues(p);
    let slice = std::slice::from_raw_parts_mut(out, 4);
    slice[0] = h.eigenvalues.0.re;
    slice[1] = h.eigenvalues.0.im;
    slice[2] = h.eigenvalues.1.re;
    slice[3] = h.eigenvalues.1.im;
    *exceptional = h.exceptional_point;
    TpdStatus::TpdOk
}

/// Full-pipeline squared frequency uncertainty by error propagation.
///
/// `detector` is `TPD_DETECTOR_PHOTON` or `TPD_DETECTOR_HOMODYNE` (with
/// `theta` the local-oscillator angle); `alpha_sq` is the input photon
/// number (0 selects vacuum); `bath_modes` sizes the discretization;
/// `band_width <= 0` selects the default `80 max(gamma, lambda, omega)`;
/// `fd_step <= 0` selects the default relative step. The result may be
/// `+inf` when the signal carries no frequency information.
///
/// # Safety
/// `params` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tpd_delta_omega_full(
    params: *const TpdParams,
    alpha_sq: f64,
    detector: i32,
    theta: f64,
    t: f64,
    bath_modes: u32,
    band_width: f64,
    fd_step: f64,
    out: *mut f64,
) -> TpdStatus {
    let Some(p) = borrow(params) else {
        return TpdStatus::TpdNullPointer;
    };
    if out.is_null() {
        return TpdStatus::TpdNullPointer;
    }
    if alpha_sq.is_nan() || alpha_sq < 0.0 || t.is_nan() || t < 0.0 || bath_modes == 0 {
        return TpdStatus::TpdInvalidArgument;
    }
    let det = match detector {
        TPD_DETECTOR_PHOTON => Detector::PhotonCounting,
        TPD_DETECTOR_HOMODYNE => Detector::Homodyne { theta },
        _ => return TpdStatus::TpdInvalidArgument,
    };
    let input = if alpha_sq > 0.0 {
        InputState::coherent(alpha_sq.sqrt())
    } else {
        InputState::Vacuum
    };
    let width = if band_width > 0.0 { band_width } else { BathSpec::default_width(p) };
    let step = if fd_step > 0.0 { fd_step } else { FD_STEP_DEFAULT };

    let result = catch_unwind(AssertUnwindSafe(|| {
        let bath = BathSpec::centered(p, bath_modes as usize, width)?;
        delta_omega_full(p, &input, det, &bath, t, step).map(|r| r.delta_omega_sq)
    }));
    match result {
        Ok(Ok(value)) => {
            *out = value;
            TpdStatus::TpdOk
        }
        Ok(Err(_)) | Err(_) => TpdStatus::TpdEvaluationFailed,
    }
}

/// Version of the underlying toolkit as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tpd_version() -> *const std::os::raw::c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const std::os::raw::c_char
}
