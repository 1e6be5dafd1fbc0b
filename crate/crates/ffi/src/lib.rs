//! C interface to `qgpkp`.
//!
//! Conventions:
//!
//! - Every fallible function returns a [`QgpkpStatus`]; results go through out
//!   pointers. On failure the message is kept per thread and can be read with
//!   [`qgpkp_last_error_message`].
//! - A medium is an opaque [`QgpkpMedium`] handle created by [`qgpkp_medium_new`]
//!   and released with [`qgpkp_medium_free`].
//! - Array arguments are caller-owned buffers with an explicit length.
//! - Panics never cross the boundary; they are reported as `QGPKP_STATUS_PANIC`.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qgpkp::eos::{EosParameters, MediumCoefficients};
use qgpkp::kp_model::{build_wave_spec, WaveEquationKind};
use qgpkp::solitons::{
    existence_cart, existence_cyl, CkpSoliton, KpLineSoliton, KpSoliton, SolitonCart, SolitonCyl,
};
use qgpkp::solver::{kdv_integrate, Integrator, SolverConfig};
use qgpkp::{Error, ScalarField3D};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QgpkpStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Contract = 3,
    NonexistentSoliton = 4,
    Dispersionless = 5,
    UnsupportedDegeneracy = 6,
    NonMonotonic = 7,
    InsufficientHistory = 8,
    Diverged = 9,
    Unverified = 10,
    Config = 11,
    Usage = 12,
    Io = 13,
    BufferTooSmall = 14,
    Panic = 15,
}

impl From<&Error> for QgpkpStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => Self::Domain,
            Error::Contract(_) => Self::Contract,
            Error::NonexistentSoliton(_) => Self::NonexistentSoliton,
            Error::Dispersionless(_) => Self::Dispersionless,
            Error::UnsupportedDegeneracy(_) => Self::UnsupportedDegeneracy,
            Error::NonMonotonic { .. } => Self::NonMonotonic,
            Error::InsufficientHistory(_) => Self::InsufficientHistory,
            Error::Diverged { .. } => Self::Diverged,
            Error::Unverified(_) => Self::Unverified,
            Error::Config(_) => Self::Config,
            Error::Usage(_) => Self::Usage,
            Error::Io(_) | Error::Json(_) => Self::Io,
        }
    }
}

/// Wave equation selector, mirroring `WaveEquationKind`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QgpkpEquation {
    KpCart = 0,
    CkpCyl = 1,
    Kdv = 2,
    BreakingWaveMit = 3,
    BreakingWaveFull = 4,
    KpCartNr = 5,
    CkpCylNr = 6,
}

impl From<QgpkpEquation> for WaveEquationKind {
    fn from(k: QgpkpEquation) -> Self {
        match k {
            QgpkpEquation::KpCart => Self::KpCart,
            QgpkpEquation::CkpCyl => Self::CkpCyl,
            QgpkpEquation::Kdv => Self::Kdv,
            QgpkpEquation::BreakingWaveMit => Self::BreakingWaveMit,
            QgpkpEquation::BreakingWaveFull => Self::BreakingWaveFull,
            QgpkpEquation::KpCartNr => Self::KpCartNr,
            QgpkpEquation::CkpCylNr => Self::CkpCylNr,
        }
    }
}

/// Opaque handle to a background medium.
pub struct QgpkpMedium {
    params: EosParameters,
    coeffs: MediumCoefficients,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct QgpkpCoefficients {
    /// fm^-4
    pub a: f64,
    pub cs: f64,
    pub cs2: f64,
    pub alpha: f64,
    /// fm^2
    pub beta: f64,
    /// fm^-1
    pub m_eff: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct QgpkpWaveSpec {
    pub cs: f64,
    pub alpha: f64,
    pub beta: f64,
    pub transverse_coeff: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct QgpkpExistence {
    /// 1 when both conditions hold.
    pub admissible: i32,
    pub margin_speed: f64,
    pub amplitude: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> Result<(), (QgpkpStatus, String)>) -> QgpkpStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QgpkpStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            QgpkpStatus::Panic
        }
    }
}

fn lib(e: Error) -> (QgpkpStatus, String) {
    ((&e).into(), e.to_string())
}

fn null(what: &str) -> (QgpkpStatus, String) {
    (QgpkpStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn medium<'a>(h: *const QgpkpMedium) -> Result<&'a QgpkpMedium, (QgpkpStatus, String)> {
    h.as_ref().ok_or_else(|| null("medium handle"))
}

unsafe fn input<'a>(
    p: *const f64,
    n: usize,
    what: &str,
) -> Result<&'a [f64], (QgpkpStatus, String)> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn output<'a>(
    p: *mut f64,
    n: usize,
    what: &str,
) -> Result<&'a mut [f64], (QgpkpStatus, String)> {
    if n == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, n))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qgpkp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Length in bytes of the last error message of this thread, without the NUL;
/// 0 when the last call succeeded.
#[no_mangle]
pub extern "C" fn qgpkp_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |s| s.as_bytes().len()))
}

/// Copies the last error message (NUL-terminated, truncated to fit) into `buf`
/// and returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be NULL or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn qgpkp_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_ref().map_or(&[][..], |s| s.as_bytes());
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Creates a medium with `γ_Q = 6`. `m_g_mev` is in MeV, `bag` in fm⁻⁴ and
/// `rho0` in fm⁻³.
///
/// # Safety
/// `out` must be a valid pointer; on success it receives a handle to free with
/// [`qgpkp_medium_free`].
#[no_mangle]
pub unsafe extern "C" fn qgpkp_medium_new(
    g: f64,
    m_g_mev: f64,
    bag: f64,
    rho0: f64,
    out: *mut *mut QgpkpMedium,
) -> QgpkpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = EosParameters::new(g, m_g_mev, bag, rho0).map_err(lib)?;
        let coeffs = MediumCoefficients::from_params(&params).map_err(lib)?;
        *out = Box::into_raw(Box::new(QgpkpMedium { params, coeffs }));
        Ok(())
    })
}

/// Releases a handle; NULL is ignored.
///
/// # Safety
/// `h` must come from [`qgpkp_medium_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qgpkp_medium_free(h: *mut QgpkpMedium) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qgpkp_medium_coefficients(
    h: *const QgpkpMedium,
    out: *mut QgpkpCoefficients,
) -> QgpkpStatus {
    guard(|| {
        let m = medium(h)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let c = &m.coeffs;
        *out = QgpkpCoefficients {
            a: c.a,
            cs: c.cs,
            cs2: c.cs2,
            alpha: c.alpha,
            beta: c.beta,
            m_eff: c.m_eff,
        };
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qgpkp_wave_spec(
    h: *const QgpkpMedium,
    kind: QgpkpEquation,
    out: *mut QgpkpWaveSpec,
) -> QgpkpStatus {
    guard(|| {
        let m = medium(h)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = build_wave_spec(&m.params, kind.into()).map_err(lib)?;
        *out = QgpkpWaveSpec {
            cs: s.cs,
            alpha: s.alpha,
            beta: s.beta,
            transverse_coeff: s.transverse_coeff,
        };
        Ok(())
    })
}

/// Existence of the cylindrical soliton with direction constant `a` and speed `u`.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qgpkp_existence_cyl(
    h: *const QgpkpMedium,
    a: f64,
    u: f64,
    out: *mut QgpkpExistence,
) -> QgpkpStatus {
    guard(|| {
        let m = medium(h)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let e = existence_cyl(&m.coeffs, a, u).map_err(lib)?;
        *out = QgpkpExistence {
            admissible: e.admissible as i32,
            margin_speed: e.margin_speed,
            amplitude: e.amplitude,
        };
        Ok(())
    })
}

/// Existence of the cartesian soliton `(𝒜, 𝒞, U)`.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qgpkp_existence_cart(
    h: *const QgpkpMedium,
    a_dir: f64,
    c_dir: f64,
    u: f64,
    out: *mut QgpkpExistence,
) -> QgpkpStatus {
    guard(|| {
        let m = medium(h)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let e = existence_cart(&m.coeffs, a_dir, u, c_dir).map_err(lib)?;
        *out = QgpkpExistence {
            admissible: e.admissible as i32,
            margin_speed: e.margin_speed,
            amplitude: e.amplitude,
        };
        Ok(())
    })
}

/// Cylindrical soliton at the `n` points `(r[i], phi[i], z[i])` and time `t > 0`.
///
/// # Safety
/// `h` must be a live handle; `r`, `phi`, `z` and `out` must hold `n` values.
#[no_mangle]
pub unsafe extern "C" fn qgpkp_ckp_eval(
    h: *const QgpkpMedium,
    a: f64,
    u: f64,
    r: *const f64,
    phi: *const f64,
    z: *const f64,
    t: f64,
    n: usize,
    out: *mut f64,
) -> QgpkpStatus {
    guard(|| {
        let m = medium(h)?;
        let (r, phi, z) = (input(r, n, "r")?, input(phi, n, "phi")?, input(z, n, "z")?);
        let out = output(out, n, "out")?;
        if !(t > 0.0) {
            return Err((QgpkpStatus::Domain, format!("t must be > 0, got {t}")));
        }
        let spec = build_wave_spec(&m.params, WaveEquationKind::CkpCyl).map_err(lib)?;
        let s = CkpSoliton::new(&spec, &SolitonCyl::from_a(a, u).map_err(lib)?).map_err(lib)?;
        for i in 0..n {
            out[i] = s.eval(r[i], phi[i], z[i], t);
        }
        Ok(())
    })
}

/// Cartesian soliton at the `n` points `(x[i], y[i], z[i])` and time `t`; with
/// `consistent != 0` the exact line-soliton phase speed is used instead of `U`.
///
/// # Safety
/// `h` must be a live handle; `x`, `y`, `z` and `out` must hold `n` values.
#[no_mangle]
pub unsafe extern "C" fn qgpkp_kp_eval(
    h: *const QgpkpMedium,
    a_dir: f64,
    c_dir: f64,
    u: f64,
    consistent: i32,
    x: *const f64,
    y: *const f64,
    z: *const f64,
    t: f64,
    n: usize,
    out: *mut f64,
) -> QgpkpStatus {
    guard(|| {
        let m = medium(h)?;
        let (x, y, z) = (input(x, n, "x")?, input(y, n, "y")?, input(z, n, "z")?);
        let out = output(out, n, "out")?;
        let spec = build_wave_spec(&m.params, WaveEquationKind::KpCart).map_err(lib)?;
        let sol = SolitonCart::from_a_c(a_dir, c_dir, u).map_err(lib)?;
        let s = if consistent != 0 {
            KpLineSoliton::new(&spec, &sol).map_err(lib)?.0
        } else {
            KpSoliton::new(&spec, &sol).map_err(lib)?
        };
        for i in 0..n {
            out[i] = s.eval(x[i], y[i], z[i], t);
        }
        Ok(())
    })
}

/// Integrates the KdV equation of the medium for `t_end` fm with RK4 on a periodic
/// line of length `length`. `values` holds the `n` initial samples (n a power of
/// two) and receives the final state.
///
/// # Safety
/// `h` must be a live handle and `values` must hold `n` values.
#[no_mangle]
pub unsafe extern "C" fn qgpkp_kdv_evolve(
    h: *const QgpkpMedium,
    values: *mut f64,
    n: usize,
    length: f64,
    dt: f64,
    t_end: f64,
) -> QgpkpStatus {
    guard(|| {
        let m = medium(h)?;
        let buf = output(values, n, "values")?;
        if n < 2 {
            return Err((
                QgpkpStatus::BufferTooSmall,
                format!("need at least 2 samples, got {n}"),
            ));
        }
        if !(length > 0.0) {
            return Err((
                QgpkpStatus::Domain,
                format!("length must be > 0, got {length}"),
            ));
        }
        let spec = build_wave_spec(&m.params, WaveEquationKind::Kdv).map_err(lib)?;
        let field = ScalarField3D::periodic_1d(buf.to_vec(), length / n as f64).map_err(lib)?;
        let cfg = SolverConfig {
            dt,
            t_end,
            integrator: Integrator::Rk4,
            snapshot_stride: usize::MAX,
            ..SolverConfig::default()
        };
        cfg.validate().map_err(lib)?;
        let result = kdv_integrate(&spec, &field, &cfg).map_err(lib)?;
        buf.copy_from_slice(&result.last().field.values);
        Ok(())
    })
}

/// Name of a status code as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qgpkp_status_name(status: QgpkpStatus) -> *const c_char {
    let s: &'static CStr = match status {
        QgpkpStatus::Ok => c"ok",
        QgpkpStatus::NullPointer => c"null_pointer",
        QgpkpStatus::Domain => c"domain",
        QgpkpStatus::Contract => c"contract",
        QgpkpStatus::NonexistentSoliton => c"nonexistent_soliton",
        QgpkpStatus::Dispersionless => c"dispersionless",
        QgpkpStatus::UnsupportedDegeneracy => c"unsupported_degeneracy",
        QgpkpStatus::NonMonotonic => c"non_monotonic",
        QgpkpStatus::InsufficientHistory => c"insufficient_history",
        QgpkpStatus::Diverged => c"diverged",
        QgpkpStatus::Unverified => c"unverified",
        QgpkpStatus::Config => c"config",
        QgpkpStatus::Usage => c"usage",
        QgpkpStatus::Io => c"io",
        QgpkpStatus::BufferTooSmall => c"buffer_too_small",
        QgpkpStatus::Panic => c"panic",
    };
    s.as_ptr()
}
