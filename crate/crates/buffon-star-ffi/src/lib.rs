//! C ABI over the buffon-star library. Conventions:
//!
//! - configurations are opaque handles created by [`bs_config_new`] and
//!   released by [`bs_config_free`];
//! - every fallible call returns a [`BsStatus`] and writes results through
//!   out-pointers; probability vectors and matrices land in caller-owned
//!   flat buffers (row-major for matrices);
//! - no call ever unwinds across the boundary.
//!
//! The matching header is generated into `include/buffon_star.h` at build
//! time.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use buffon_star::distributions::{limit_cdf, limit_marginal_cdf, Family, LimitParams};
use buffon_star::exact::{
    at_least_one_probability, expected_intersections, intersection_probabilities, joint_matrix_at,
};
use buffon_star::geometry::max_intersections;
use buffon_star::montecarlo::{simulate, SimConfig};
use buffon_star::{Error, LatticeSpec, StarSpec, ThrowConfig};

/// Call outcome. Anything other than `BS_STATUS_OK` leaves the output
/// buffers untouched.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsStatus {
    Ok = 0,
    /// A required pointer was null.
    NullPointer = 1,
    /// Arguments violate a documented precondition (bad spacing, angle
    /// range, inadmissible star/lattice pair, zero trials or workers).
    Validation = 2,
    /// Closed forms asked for an even needle count; simulate instead.
    UnsupportedN = 3,
    /// The quadrature oracle did not converge.
    Quadrature = 4,
    /// The output buffer is too small; nothing was written.
    BufferTooSmall = 5,
    /// An internal invariant failed; please report.
    Internal = 6,
}

fn status_of(err: &Error) -> BsStatus {
    match err {
        Error::QuadratureNonConvergence { .. } => BsStatus::Quadrature,
        Error::UnsupportedNeedleCount(_) => BsStatus::UnsupportedN,
        _ => BsStatus::Validation,
    }
}

/// Opaque star/lattice configuration.
pub struct BsConfig {
    config: ThrowConfig,
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn bs_status_message(status: BsStatus) -> *const c_char {
    let msg: &'static str = match status {
        BsStatus::Ok => "ok\0",
        BsStatus::NullPointer => "null pointer argument\0",
        BsStatus::Validation => "invalid or inadmissible arguments\0",
        BsStatus::UnsupportedN => "closed forms need odd n >= 3; use the simulator\0",
        BsStatus::Quadrature => "quadrature oracle failed to converge\0",
        BsStatus::BufferTooSmall => "output buffer too small\0",
        BsStatus::Internal => "internal error\0",
    };
    msg.as_ptr() as *const c_char
}

/// Maximum per-family intersection count for an `n`-needle star
/// (`n/2` rounded up for odd `n`); 0 when `n < 2`.
#[no_mangle]
pub extern "C" fn bs_max_intersections(n: u32) -> u32 {
    match StarSpec::new(n, 1.0) {
        Ok(star) => max_intersections(star),
        Err(_) => 0,
    }
}

/// Creates a validated configuration: `n` needles of length `ell` on a
/// lattice with spacings `a`, `b` and angle `alpha` in (0, pi/2].
///
/// # Safety
/// `out` must be a valid pointer. On success it receives a handle that
/// must be released with [`bs_config_free`].
#[no_mangle]
pub unsafe extern "C" fn bs_config_new(
    n: u32,
    ell: f64,
    a: f64,
    b: f64,
    alpha: f64,
    out: *mut *mut BsConfig,
) -> BsStatus {
    if out.is_null() {
        return BsStatus::NullPointer;
    }
    let star = match StarSpec::new(n, ell) {
        Ok(star) => star,
        Err(e) => return status_of(&e),
    };
    let lattice = match LatticeSpec::new(a, b, alpha) {
        Ok(lattice) => lattice,
        Err(e) => return status_of(&e),
    };
    match ThrowConfig::new(star, lattice) {
        Ok(config) => {
            unsafe { *out = Box::into_raw(Box::new(BsConfig { config })) };
            BsStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a handle from [`bs_config_new`]. Null is a no-op.
///
/// # Safety
/// `handle` must be null or a pointer previously returned by
/// [`bs_config_new`] that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn bs_config_free(handle: *mut BsConfig) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Expected total number of intersections; NaN for a null handle.
///
/// # Safety
/// `handle` must be a live pointer from [`bs_config_new`] (or null).
#[no_mangle]
pub unsafe extern "C" fn bs_expectation(handle: *const BsConfig) -> f64 {
    match unsafe { handle.as_ref() } {
        Some(h) => expected_intersections(&h.config),
        None => f64::NAN,
    }
}

unsafe fn write_slice(
    values: &[f64],
    out: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> BsStatus {
    if out.is_null() || written.is_null() {
        return BsStatus::NullPointer;
    }
    if capacity < values.len() {
        return BsStatus::BufferTooSmall;
    }
    unsafe {
        std::ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
        *written = values.len();
    }
    BsStatus::Ok
}

/// Exact probabilities of 0..=2M total intersections at lattice angle
/// `alpha` (any finite value; folded internally). Writes `2M+1` doubles.
///
/// # Safety
/// `handle` must be live; `out` must point to at least `capacity`
/// doubles; `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bs_probabilities(
    handle: *const BsConfig,
    alpha: f64,
    out: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> BsStatus {
    let Some(h) = (unsafe { handle.as_ref() }) else {
        return BsStatus::NullPointer;
    };
    match catch_unwind(AssertUnwindSafe(|| {
        intersection_probabilities(&h.config, alpha)
    })) {
        Ok(Ok(p)) => unsafe { write_slice(p.values(), out, capacity, written) },
        Ok(Err(e)) => status_of(&e),
        Err(_) => BsStatus::Internal,
    }
}

/// Probability of at least one intersection.
///
/// # Safety
/// `handle` must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bs_at_least_one(
    handle: *const BsConfig,
    alpha: f64,
    out: *mut f64,
) -> BsStatus {
    let Some(h) = (unsafe { handle.as_ref() }) else {
        return BsStatus::NullPointer;
    };
    if out.is_null() {
        return BsStatus::NullPointer;
    }
    match at_least_one_probability(&h.config, alpha) {
        Ok(v) => {
            unsafe { *out = v };
            BsStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Exact joint law P(k intersections with family A, m with family B) as a
/// row-major `(M+1) x (M+1)` matrix. `dim` receives `M+1`.
///
/// # Safety
/// `handle` must be live; `out` must hold `capacity` doubles; `dim` must
/// be valid.
#[no_mangle]
pub unsafe extern "C" fn bs_joint_matrix(
    handle: *const BsConfig,
    alpha: f64,
    out: *mut f64,
    capacity: usize,
    dim: *mut usize,
) -> BsStatus {
    let Some(h) = (unsafe { handle.as_ref() }) else {
        return BsStatus::NullPointer;
    };
    if dim.is_null() {
        return BsStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(|| joint_matrix_at(&h.config, alpha))) {
        Ok(Ok(jm)) => {
            let side = jm.m_max() as usize + 1;
            let mut written = 0usize;
            let status = unsafe { write_slice(jm.entries(), out, capacity, &mut written) };
            if status == BsStatus::Ok {
                unsafe { *dim = side };
            }
            status
        }
        Ok(Err(e)) => status_of(&e),
        Err(_) => BsStatus::Internal,
    }
}

/// Closed-form limit CDF of the relative intersection count; NaN when the
/// densities are out of range (`lambda > 0`, `mu >= 0`,
/// `2*max(lambda, mu) <= 1`).
#[no_mangle]
pub extern "C" fn bs_limit_cdf(lambda: f64, mu: f64, xi: f64) -> f64 {
    match LimitParams::new(lambda, mu) {
        Ok(params) => limit_cdf(params, xi),
        Err(_) => f64::NAN,
    }
}

/// Single-family limit CDF for density `lambda`; NaN out of range.
#[no_mangle]
pub extern "C" fn bs_limit_marginal_cdf(lambda: f64, xi: f64) -> f64 {
    match LimitParams::new(lambda, 0.0) {
        Ok(params) => limit_marginal_cdf(params, Family::A, xi),
        Err(_) => f64::NAN,
    }
}

/// Monte Carlo estimate of the total-count law: `2M+1` empirical
/// probabilities. Bit-identical results for a fixed seed regardless of
/// `workers`.
///
/// # Safety
/// `handle` must be live; `out` must hold `capacity` doubles; `written`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn bs_simulate(
    handle: *const BsConfig,
    trials: u64,
    seed: u64,
    workers: u32,
    out: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> BsStatus {
    let Some(h) = (unsafe { handle.as_ref() }) else {
        return BsStatus::NullPointer;
    };
    let sim = SimConfig::new(h.config, trials, seed, workers as usize);
    match catch_unwind(AssertUnwindSafe(|| simulate(&sim))) {
        Ok(Ok(result)) => unsafe { write_slice(result.p_hat.values(), out, capacity, written) },
        Ok(Err(e)) => status_of(&e),
        Err(_) => BsStatus::Internal,
    }
}
