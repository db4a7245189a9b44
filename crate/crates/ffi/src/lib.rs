//! C ABI for the shift evaluators: opaque configuration handles, plain
//! structs for results and integer status codes. Pointers must be valid
//! and aligned; every entry point checks for null and catches panics so
//! nothing unwinds across the boundary.

use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use mushift::quadrature::QuadratureConfig;
use mushift::shifts::{
    plasma_total, pm_shift, small_distance_asymptote, sp_only_shift, Geometry, Method,
    Orientation, ScaledShift, ShiftError,
};
use mushift::units::{relative_shift, LabInputs};
use mushift::SurfaceModel;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MushiftStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnsupportedModel = 3,
    NonConvergence = 4,
    InternalError = 5,
}

/// External magnetic-field direction relative to the surface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MushiftOrientation {
    Perpendicular = 0,
    Parallel = 1,
}

/// How a shift value was obtained.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MushiftMethod {
    ClosedForm = 0,
    Quadrature = 1,
    Asymptotic = 2,
}

/// A scaled shift `s = delta_mu / delta_mu_pm_perp(d)` with its error
/// estimate and the TE/TM/surface-mode decomposition where available
/// (the `has_*` flags mark which components are populated).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MushiftShift {
    pub s_hat: f64,
    pub est_err: f64,
    pub method: MushiftMethod,
    pub has_te: u8,
    pub has_tm: u8,
    pub has_sp: u8,
    pub te: f64,
    pub tm: f64,
    pub sp: f64,
}

/// Opaque quadrature configuration handle.
pub struct MushiftConfig {
    inner: QuadratureConfig,
}

fn orientation_from(o: MushiftOrientation) -> Orientation {
    match o {
        MushiftOrientation::Perpendicular => Orientation::Perpendicular,
        MushiftOrientation::Parallel => Orientation::Parallel,
    }
}

fn fill_out(out: &mut MushiftShift, s: &ScaledShift) {
    out.s_hat = s.s_hat;
    out.est_err = s.est_err;
    out.method = match s.method {
        Method::ClosedForm => MushiftMethod::ClosedForm,
        Method::Quadrature => MushiftMethod::Quadrature,
        Method::Asymptotic => MushiftMethod::Asymptotic,
    };
    let b = s.breakdown.unwrap_or_default();
    out.has_te = b.te.is_some() as u8;
    out.has_tm = b.tm.is_some() as u8;
    out.has_sp = b.sp.is_some() as u8;
    out.te = b.te.unwrap_or(0.0);
    out.tm = b.tm.unwrap_or(0.0);
    out.sp = b.sp.unwrap_or(0.0);
}

fn status_from(e: &ShiftError) -> MushiftStatus {
    match e {
        ShiftError::NonConvergence { .. } => MushiftStatus::NonConvergence,
        ShiftError::RoutedModel { .. } => MushiftStatus::UnsupportedModel,
        ShiftError::Model(_) | ShiftError::Domain { .. } | ShiftError::SpecFun(_) => {
            MushiftStatus::InvalidArgument
        }
        ShiftError::Quadrature(_) => MushiftStatus::InvalidArgument,
    }
}

/// # Safety
/// `cfg` must be null (defaults) or a live handle from `mushift_config_new`.
unsafe fn config_or_default(cfg: *const MushiftConfig) -> QuadratureConfig {
    if cfg.is_null() {
        QuadratureConfig::default()
    } else {
        (*cfg).inner
    }
}

fn guarded(f: impl FnOnce() -> MushiftStatus) -> MushiftStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => MushiftStatus::InternalError,
    }
}

/// Creates a quadrature configuration with the library defaults
/// (rel_tol 1e-9, abs_tol 1e-14, 2000 subdivisions, tail cut 46).
/// Free with `mushift_config_free`.
#[no_mangle]
pub extern "C" fn mushift_config_new() -> *mut MushiftConfig {
    Box::into_raw(Box::new(MushiftConfig { inner: QuadratureConfig::default() }))
}

/// Releases a configuration handle. Passing null is a no-op.
///
/// # Safety
/// `cfg` must have come from `mushift_config_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mushift_config_free(cfg: *mut MushiftConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

unsafe fn config_update(
    cfg: *mut MushiftConfig,
    apply: impl FnOnce(&mut QuadratureConfig),
) -> MushiftStatus {
    if cfg.is_null() {
        return MushiftStatus::NullPointer;
    }
    let mut candidate = (*cfg).inner;
    apply(&mut candidate);
    if candidate.validate().is_err() {
        return MushiftStatus::InvalidArgument;
    }
    (*cfg).inner = candidate;
    MushiftStatus::Ok
}

/// Sets the relative tolerance; rejects values that violate the
/// configuration invariants.
///
/// # Safety
/// `cfg` must be a live handle from `mushift_config_new`.
#[no_mangle]
pub unsafe extern "C" fn mushift_config_set_rel_tol(
    cfg: *mut MushiftConfig,
    value: f64,
) -> MushiftStatus {
    config_update(cfg, |c| c.rel_tol = value)
}

/// Sets the absolute tolerance floor.
///
/// # Safety
/// `cfg` must be a live handle from `mushift_config_new`.
#[no_mangle]
pub unsafe extern "C" fn mushift_config_set_abs_tol(
    cfg: *mut MushiftConfig,
    value: f64,
) -> MushiftStatus {
    config_update(cfg, |c| c.abs_tol = value)
}

/// Sets the panel-subdivision limit (at least 10).
///
/// # Safety
/// `cfg` must be a live handle from `mushift_config_new`.
#[no_mangle]
pub unsafe extern "C" fn mushift_config_set_max_subdivisions(
    cfg: *mut MushiftConfig,
    value: u32,
) -> MushiftStatus {
    config_update(cfg, |c| c.max_subdivisions = value)
}

/// Sets the exponential tail-truncation threshold (at least 30).
///
/// # Safety
/// `cfg` must be a live handle from `mushift_config_new`.
#[no_mangle]
pub unsafe extern "C" fn mushift_config_set_tail_cut(
    cfg: *mut MushiftConfig,
    value: f64,
) -> MushiftStatus {
    config_update(cfg, |c| c.tail_cut = value)
}

/// Perfect-reflector shift: exactly +1 (perpendicular) or -1 (parallel).
///
/// # Safety
/// `out` must point to writable memory for one `MushiftShift`.
#[no_mangle]
pub unsafe extern "C" fn mushift_pm_shift(
    orientation: MushiftOrientation,
    distance: f64,
    out: *mut MushiftShift,
) -> MushiftStatus {
    if out.is_null() {
        return MushiftStatus::NullPointer;
    }
    guarded(|| match Geometry::new(distance) {
        Ok(g) => {
            fill_out(&mut *out, &pm_shift(orientation_from(orientation), g));
            MushiftStatus::Ok
        }
        Err(_) => MushiftStatus::InvalidArgument,
    })
}

/// Exact nondispersive shift for refractive index `n >= 1` (distance
/// independent in scaled units).
///
/// # Safety
/// `out` must point to writable memory for one `MushiftShift`.
#[no_mangle]
pub unsafe extern "C" fn mushift_nondispersive_shift(
    n: f64,
    orientation: MushiftOrientation,
    distance: f64,
    out: *mut MushiftShift,
) -> MushiftStatus {
    if out.is_null() {
        return MushiftStatus::NullPointer;
    }
    guarded(|| {
        let g = match Geometry::new(distance) {
            Ok(g) => g,
            Err(_) => return MushiftStatus::InvalidArgument,
        };
        match mushift::shifts::nondisp_closed(n, orientation_from(orientation), g) {
            Ok(s) => {
                fill_out(&mut *out, &s);
                MushiftStatus::Ok
            }
            Err(e) => status_from(&e),
        }
    })
}

/// Full plasma shift (TE closed form plus TM quadrature) at plasma
/// frequency `omega_p` and distance `d`, both in natural units.
///
/// # Safety
/// `out` must be writable; `cfg` null (defaults) or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mushift_plasma_shift(
    omega_p: f64,
    orientation: MushiftOrientation,
    distance: f64,
    cfg: *const MushiftConfig,
    out: *mut MushiftShift,
) -> MushiftStatus {
    if out.is_null() {
        return MushiftStatus::NullPointer;
    }
    guarded(|| {
        let g = match Geometry::new(distance) {
            Ok(g) => g,
            Err(_) => return MushiftStatus::InvalidArgument,
        };
        match plasma_total(omega_p, orientation_from(orientation), g, &config_or_default(cfg)) {
            Ok(s) => {
                fill_out(&mut *out, &s);
                MushiftStatus::Ok
            }
            Err(e) => status_from(&e),
        }
    })
}

/// General dispersive-dielectric shift via the wedge quadrature.
///
/// # Safety
/// `out` must be writable; `cfg` null (defaults) or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mushift_dispersive_shift(
    omega_p: f64,
    omega_t: f64,
    orientation: MushiftOrientation,
    distance: f64,
    cfg: *const MushiftConfig,
    out: *mut MushiftShift,
) -> MushiftStatus {
    if out.is_null() {
        return MushiftStatus::NullPointer;
    }
    guarded(|| {
        let g = match Geometry::new(distance) {
            Ok(g) => g,
            Err(_) => return MushiftStatus::InvalidArgument,
        };
        let model = match SurfaceModel::dispersive(omega_p, omega_t) {
            Ok(m) => m,
            Err(_) => return MushiftStatus::InvalidArgument,
        };
        match mushift::shifts::general_shift(
            &model,
            orientation_from(orientation),
            g,
            &config_or_default(cfg),
        ) {
            Ok(s) => {
                fill_out(&mut *out, &s);
                MushiftStatus::Ok
            }
            Err(e) => status_from(&e),
        }
    })
}

/// Surface plasmon/polariton contribution alone. Pass `omega_t = 0` for
/// the plasma model.
///
/// # Safety
/// `out` must be writable; `cfg` null (defaults) or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mushift_sp_only_shift(
    omega_p: f64,
    omega_t: f64,
    orientation: MushiftOrientation,
    distance: f64,
    cfg: *const MushiftConfig,
    out: *mut MushiftShift,
) -> MushiftStatus {
    if out.is_null() {
        return MushiftStatus::NullPointer;
    }
    guarded(|| {
        let g = match Geometry::new(distance) {
            Ok(g) => g,
            Err(_) => return MushiftStatus::InvalidArgument,
        };
        let model = if omega_t == 0.0 {
            SurfaceModel::plasma(omega_p)
        } else {
            SurfaceModel::dispersive(omega_p, omega_t)
        };
        let model = match model {
            Ok(m) => m,
            Err(_) => return MushiftStatus::InvalidArgument,
        };
        match sp_only_shift(&model, orientation_from(orientation), g, &config_or_default(cfg)) {
            Ok(s) => {
                fill_out(&mut *out, &s);
                MushiftStatus::Ok
            }
            Err(e) => status_from(&e),
        }
    })
}

/// Leading short-distance asymptote (`omega_t = 0` selects the plasma).
///
/// # Safety
/// `out` must point to writable memory for one `MushiftShift`.
#[no_mangle]
pub unsafe extern "C" fn mushift_small_distance_shift(
    omega_p: f64,
    omega_t: f64,
    orientation: MushiftOrientation,
    distance: f64,
    out: *mut MushiftShift,
) -> MushiftStatus {
    if out.is_null() {
        return MushiftStatus::NullPointer;
    }
    guarded(|| {
        let g = match Geometry::new(distance) {
            Ok(g) => g,
            Err(_) => return MushiftStatus::InvalidArgument,
        };
        let model = if omega_t == 0.0 {
            SurfaceModel::plasma(omega_p)
        } else {
            SurfaceModel::dispersive(omega_p, omega_t)
        };
        let model = match model {
            Ok(m) => m,
            Err(_) => return MushiftStatus::InvalidArgument,
        };
        match small_distance_asymptote(&model, orientation_from(orientation), g) {
            Ok(s) => {
                fill_out(&mut *out, &s);
                MushiftStatus::Ok
            }
            Err(e) => status_from(&e),
        }
    })
}

/// Relative shift `delta_mu / mu` against the Dirac moment for a scaled
/// shift `s_hat` at distance `z_nm` nanometers. Returns NaN for invalid
/// distances.
#[no_mangle]
pub extern "C" fn mushift_relative_shift(s_hat: f64, z_nm: f64) -> f64 {
    let Ok(lab) = LabInputs::new(z_nm, None, None) else {
        return f64::NAN;
    };
    let shift = ScaledShift {
        s_hat,
        est_err: 0.0,
        method: Method::ClosedForm,
        breakdown: None,
        warning: None,
    };
    relative_shift(&shift, &lab)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mushift_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
