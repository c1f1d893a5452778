//! C ABI over the cycle numerics: an opaque system handle built from the
//! same JSON configuration the CLI accepts, plus flat structs of doubles
//! for the results. Every entry point returns a status code; on failure a
//! thread-local message is available through [`tricycle_last_error`].
//!
//! Ownership rules: values returned as pointers are owned by the library
//! and released with the matching `_free` function; strings returned by
//! `tricycle_last_error` and `tricycle_version` are borrowed and must not
//! be freed.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Mutex;

use tricycle::error::Error;
use tricycle::optimize;
use tricycle::run::RunConfig;
use tricycle::thermo::{self, CycleFunctionals};

/// Status of an FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TricycleStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// The configuration or an argument was rejected.
    InvalidInput = 2,
    /// The requested point has no solution (no positive root or an
    /// unreachable COP target).
    Infeasible = 3,
    /// The numerics failed internally.
    NumericalFailure = 4,
}

/// Cycle-level metrics at one grid point. Branch arrays are in cycle order
/// (cold, hot, auxiliary).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TricycleMetrics {
    pub eps: f64,
    pub eps_r: f64,
    pub cooling_rate: f64,
    pub tau: f64,
    pub d_s_en: f64,
    pub lbar2: f64,
    pub lh: f64,
    pub rh: f64,
    pub psi: f64,
    pub psi_r: f64,
    pub eta: f64,
    pub eta_c: f64,
    pub power: f64,
    pub work: f64,
    pub heats: [f64; 3],
    pub sigmas: [f64; 3],
    pub lengths: [f64; 3],
}

/// A fixed-COP time allocation.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TricycleAllocation {
    pub tau_c: f64,
    pub tau_h: f64,
    pub tau_p: f64,
    pub residual: f64,
}

/// Opaque handle holding the run configuration and a cache of the
/// duration-independent branch functionals per spectral exponent.
pub struct TricycleSystem {
    config: RunConfig,
    cache: Mutex<Vec<(u64, CycleFunctionals)>>,
}

impl TricycleSystem {
    fn functionals(&self, alpha: f64) -> Result<CycleFunctionals, Error> {
        let key = alpha.to_bits();
        if let Some((_, f)) = self.cache.lock().unwrap().iter().find(|(k, _)| *k == key) {
            return Ok(*f);
        }
        let base = self.config.cycle_config(alpha)?;
        let funcs = CycleFunctionals::compute(&base, self.config.quadrature()?)?;
        self.cache.lock().unwrap().push((key, funcs));
        Ok(funcs)
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(e: &Error) -> TricycleStatus {
    match e {
        Error::NoPositiveRoot { .. } | Error::InfeasibleCop { .. } => TricycleStatus::Infeasible,
        Error::Usage(_) | Error::Domain { .. } | Error::InvalidConfig { .. } => {
            TricycleStatus::InvalidInput
        }
        _ => TricycleStatus::NumericalFailure,
    }
}

fn guarded<F: FnOnce() -> TricycleStatus>(f: F) -> TricycleStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            TricycleStatus::NumericalFailure
        }
    }
}

/// Message describing the most recent failure on this thread. Borrowed;
/// overwritten by the next failing call.
#[no_mangle]
pub extern "C" fn tricycle_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn tricycle_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// New system with the built-in default parameter set.
#[no_mangle]
pub extern "C" fn tricycle_system_default() -> *mut TricycleSystem {
    Box::into_raw(Box::new(TricycleSystem {
        config: RunConfig::default(),
        cache: Mutex::new(Vec::new()),
    }))
}

/// New system from a JSON configuration document (same schema as the CLI
/// `--config` file). Returns null and sets the error message on failure.
///
/// # Safety
/// `json` must be a valid NUL-terminated C string, or null.
#[no_mangle]
pub unsafe extern "C" fn tricycle_system_from_json(json: *const c_char) -> *mut TricycleSystem {
    if json.is_null() {
        set_error("json pointer is null");
        return std::ptr::null_mut();
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("json is not valid UTF-8");
            return std::ptr::null_mut();
        }
    };
    match RunConfig::from_json(text) {
        Ok(config) => Box::into_raw(Box::new(TricycleSystem {
            config,
            cache: Mutex::new(Vec::new()),
        })),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Releases a system created by the constructors above. Null is ignored.
///
/// # Safety
/// `sys` must originate from `tricycle_system_default` or
/// `tricycle_system_from_json` and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tricycle_system_free(sys: *mut TricycleSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Quench closure: (ζ_p, δ_h, δ_p) from the temperatures, ζ_c, ζ_h and δ_c.
///
/// # Safety
/// The three output pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tricycle_close_parameters(
    t_c: f64,
    t_h: f64,
    t_p: f64,
    zeta_c: f64,
    zeta_h: f64,
    delta_c: f64,
    zeta_p_out: *mut f64,
    delta_h_out: *mut f64,
    delta_p_out: *mut f64,
) -> TricycleStatus {
    if zeta_p_out.is_null() || delta_h_out.is_null() || delta_p_out.is_null() {
        set_error("output pointer is null");
        return TricycleStatus::NullPointer;
    }
    guarded(
        || match tricycle::protocol::close_parameters(t_c, t_h, t_p, zeta_c, zeta_h, delta_c) {
            Ok((zeta_p, delta_h, delta_p)) => {
                *zeta_p_out = zeta_p;
                *delta_h_out = delta_h;
                *delta_p_out = delta_p;
                TricycleStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        },
    )
}

/// Solves the time-constraint equation for τ_h at (τ_c, τ_p).
///
/// # Safety
/// `sys` must be a live system handle and `tau_h_out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tricycle_solve_tau_h(
    sys: *const TricycleSystem,
    alpha: f64,
    tau_c: f64,
    tau_p: f64,
    tau_h_out: *mut f64,
) -> TricycleStatus {
    if sys.is_null() || tau_h_out.is_null() {
        set_error("pointer argument is null");
        return TricycleStatus::NullPointer;
    }
    let sys = &*sys;
    guarded(|| {
        let funcs = match sys.functionals(alpha) {
            Ok(f) => f,
            Err(e) => {
                set_error(&e.to_string());
                return status_of(&e);
            }
        };
        match optimize::solve_tau_h(&funcs.d_s_eq(), &funcs.sigma(), tau_c, tau_p) {
            Ok(tau_h) => {
                *tau_h_out = tau_h;
                TricycleStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Full cycle metrics at explicit durations.
///
/// # Safety
/// `sys` must be a live system handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tricycle_cycle_metrics(
    sys: *const TricycleSystem,
    alpha: f64,
    tau_c: f64,
    tau_h: f64,
    tau_p: f64,
    out: *mut TricycleMetrics,
) -> TricycleStatus {
    if sys.is_null() || out.is_null() {
        set_error("pointer argument is null");
        return TricycleStatus::NullPointer;
    }
    let sys = &*sys;
    guarded(|| {
        let result = sys.functionals(alpha).and_then(|funcs| {
            let base = sys.config.cycle_config(alpha)?;
            let closed = base.with_taus([tau_c, tau_h, tau_p]);
            thermo::cycle_metrics_from_functionals(&closed, &funcs)
        });
        match result {
            Ok(m) => {
                *out = TricycleMetrics {
                    eps: m.eps,
                    eps_r: m.eps_r,
                    cooling_rate: m.cooling_rate,
                    tau: m.tau,
                    d_s_en: m.d_s_en,
                    lbar2: m.lbar2,
                    lh: m.lh,
                    rh: m.rh,
                    psi: m.psi,
                    psi_r: m.psi_r,
                    eta: m.eta,
                    eta_c: m.eta_c,
                    power: m.power,
                    work: m.work,
                    heats: m.branches.map(|b| b.q),
                    sigmas: m.branches.map(|b| b.sigma),
                    lengths: m.branches.map(|b| b.length),
                };
                TricycleStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Fixed-COP allocation: τ_h from the COP relation, τ_p from the
/// constraint equation.
///
/// # Safety
/// `sys` must be a live system handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tricycle_optimize_fixed_cop(
    sys: *const TricycleSystem,
    alpha: f64,
    tau_c: f64,
    eps_target: f64,
    out: *mut TricycleAllocation,
) -> TricycleStatus {
    if sys.is_null() || out.is_null() {
        set_error("pointer argument is null");
        return TricycleStatus::NullPointer;
    }
    let sys = &*sys;
    guarded(|| {
        let result = sys.functionals(alpha).and_then(|funcs| {
            let base = sys.config.cycle_config(alpha)?;
            optimize::solve_fixed_cop(&base, &funcs, tau_c, eps_target)
        });
        match result {
            Ok(a) => {
                *out = TricycleAllocation {
                    tau_c: a.tau_c,
                    tau_h: a.tau_h,
                    tau_p: a.tau_p,
                    residual: a.residual,
                };
                TricycleStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}
