//! C ABI for the chiral Casimir–Polder force library.
//!
//! Every fallible function returns a [`CcpStatus`] and writes results
//! through out-pointers, which are left untouched on failure. The message
//! of the most recent failure on the calling thread is available from
//! [`ccp_last_error_message`]. Molecules are opaque handles created by the
//! `ccp_molecule_*` constructors and released with [`ccp_molecule_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use chiral_cp::mirror::{self, GeometryTime, MirrorSpec, Regime};
use chiral_cp::molecule::{self, Transition};
use chiral_cp::oracle::{force_by_quadrature, perfect_chiral_plate, QuadConfig};
use chiral_cp::{specfun, Error};

/// Result codes of the C interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcpStatus {
    Ok = 0,
    Domain = 1,
    Validation = 2,
    LightCone = 3,
    Convergence = 4,
    Io = 5,
    Parse = 6,
    NullPointer = 7,
    Panic = 8,
}

/// Regime tag of a force value.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcpRegime {
    Static = 0,
    PreLightcone = 1,
    PostLightcone = 2,
    LimitNonretarded = 3,
    LimitRetarded = 4,
}

impl From<Regime> for CcpRegime {
    fn from(r: Regime) -> Self {
        match r {
            Regime::Static => CcpRegime::Static,
            Regime::PreLightcone => CcpRegime::PreLightcone,
            Regime::PostLightcone => CcpRegime::PostLightcone,
            Regime::LimitNonretarded => CcpRegime::LimitNonretarded,
            Regime::LimitRetarded => CcpRegime::LimitRetarded,
        }
    }
}

/// Opaque molecule handle.
pub struct CcpMolecule {
    inner: molecule::Molecule,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> CcpStatus {
    match e {
        Error::Domain { .. } => CcpStatus::Domain,
        Error::Validation { .. } => CcpStatus::Validation,
        Error::LightCone { .. } => CcpStatus::LightCone,
        Error::Convergence { .. } => CcpStatus::Convergence,
        Error::Io { .. } => CcpStatus::Io,
        Error::Parse { .. } => CcpStatus::Parse,
    }
}

struct Failure(CcpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CcpStatus::NullPointer, format!("{what} is null"))
}

/// Run `body`, translating errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), Failure>>(body: F) -> CcpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CcpStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CcpStatus::Panic
        }
    }
}

unsafe fn molecule_ref<'a>(m: *const CcpMolecule) -> Result<&'a molecule::Molecule, Failure> {
    m.as_ref().map(|h| &h.inner).ok_or_else(|| null("molecule"))
}

unsafe fn write<T>(out: *mut T, value: T) {
    if !out.is_null() {
        out.write(value);
    }
}

fn spec(chirality: c_int) -> Result<MirrorSpec, Failure> {
    Ok(MirrorSpec::from_sign(chirality)?)
}

fn boxed(m: molecule::Molecule) -> *mut CcpMolecule {
    Box::into_raw(Box::new(CcpMolecule { inner: m }))
}

/// Build a molecule from `n` parallel arrays of transition data (SI units).
/// `gamma` may be null for non-absorbing transitions.
///
/// # Safety
/// `label` must be a NUL-terminated string; each non-null array must hold
/// `n` doubles; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ccp_molecule_new(
    label: *const c_char,
    omega: *const f64,
    dipole_sq: *const f64,
    rotatory: *const f64,
    gamma: *const f64,
    n: usize,
    out: *mut *mut CcpMolecule,
) -> CcpStatus {
    guard(|| {
        if label.is_null() || omega.is_null() || dipole_sq.is_null() || rotatory.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        let label = CStr::from_ptr(label).to_string_lossy().into_owned();
        let (w, d2, r) = (
            slice::from_raw_parts(omega, n),
            slice::from_raw_parts(dipole_sq, n),
            slice::from_raw_parts(rotatory, n),
        );
        let g = (!gamma.is_null()).then(|| slice::from_raw_parts(gamma, n));
        let mut transitions = Vec::with_capacity(n);
        for i in 0..n {
            let mut t = Transition::new(w[i], d2[i], r[i])?;
            if let Some(g) = g {
                t = t.with_gamma(g[i])?;
            }
            transitions.push(t);
        }
        let m = molecule::Molecule::new(label, transitions)?;
        out.write(boxed(m));
        Ok(())
    })
}

/// The built-in dimethyl disulphide molecule.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ccp_molecule_dimethyl_disulphide(out: *mut *mut CcpMolecule) -> CcpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(boxed(molecule::dimethyl_disulphide()));
        Ok(())
    })
}

/// Load a molecule from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ccp_molecule_load(path: *const c_char, out: *mut *mut CcpMolecule) -> CcpStatus {
    guard(|| {
        if path.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        let path = CStr::from_ptr(path).to_string_lossy().into_owned();
        out.write(boxed(molecule::load_molecule(path)?));
        Ok(())
    })
}

/// A new handle holding the mirror image of `m`.
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ccp_molecule_enantiomer(m: *const CcpMolecule, out: *mut *mut CcpMolecule) -> CcpStatus {
    guard(|| {
        let m = molecule_ref(m)?;
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(boxed(m.enantiomer()));
        Ok(())
    })
}

/// Number of transitions, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ccp_molecule_len(m: *const CcpMolecule) -> usize {
    m.as_ref().map_or(0, |h| h.inner.len())
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `m` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ccp_molecule_free(m: *mut CcpMolecule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Static chiral force (N, positive = repulsive) at distance `d` (m).
/// `chirality` is +1 or -1. `regime` may be null.
///
/// # Safety
/// `m` must be a live handle; `value` and non-null `regime` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ccp_static_force(
    m: *const CcpMolecule,
    d: f64,
    chirality: c_int,
    value: *mut f64,
    regime: *mut CcpRegime,
) -> CcpStatus {
    guard(|| {
        let m = molecule_ref(m)?;
        if value.is_null() {
            return Err(null("value"));
        }
        let r = mirror::static_chiral_force(m, d, spec(chirality)?)?;
        value.write(r.value);
        write(regime, r.regime.into());
        Ok(())
    })
}

/// Dynamical chiral force at distance `d` (m) and time `t` (s) after
/// switch-on. Returns `CCP_STATUS_LIGHT_CONE` inside the guard band.
/// `regime` and `lightcone_distance` may be null.
///
/// # Safety
/// `m` must be a live handle; all non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ccp_dynamic_force(
    m: *const CcpMolecule,
    d: f64,
    t: f64,
    chirality: c_int,
    value: *mut f64,
    regime: *mut CcpRegime,
    lightcone_distance: *mut f64,
) -> CcpStatus {
    guard(|| {
        let m = molecule_ref(m)?;
        if value.is_null() {
            return Err(null("value"));
        }
        let geom = GeometryTime::new(d, t)?;
        let r = mirror::dynamic_chiral_force(m, &geom, spec(chirality)?)?;
        value.write(r.value);
        write(regime, r.regime.into());
        write(lightcone_distance, r.lightcone_distance.unwrap_or(f64::INFINITY));
        Ok(())
    })
}

/// Non-retarded (short-distance) limit of the static force.
///
/// # Safety
/// `m` must be a live handle; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ccp_nonretarded_limit(
    m: *const CcpMolecule,
    d: f64,
    chirality: c_int,
    value: *mut f64,
) -> CcpStatus {
    guard(|| {
        let m = molecule_ref(m)?;
        if value.is_null() {
            return Err(null("value"));
        }
        value.write(mirror::nonretarded_limit_force(m, d, spec(chirality)?)?.value);
        Ok(())
    })
}

/// Retarded (long-distance) limit of the static force.
///
/// # Safety
/// `m` must be a live handle; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ccp_retarded_limit(
    m: *const CcpMolecule,
    d: f64,
    chirality: c_int,
    value: *mut f64,
) -> CcpStatus {
    guard(|| {
        let m = molecule_ref(m)?;
        if value.is_null() {
            return Err(null("value"));
        }
        value.write(mirror::retarded_limit_force(m, d, spec(chirality)?)?.value);
        Ok(())
    })
}

/// Chiral dynamical force by frequency quadrature over the perfect-plate
/// trace, with default quadrature settings. `error` may be null.
///
/// # Safety
/// `m` must be a live handle; `value` and non-null `error` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ccp_quadrature_chiral_force(
    m: *const CcpMolecule,
    d: f64,
    t: f64,
    temperature: f64,
    chirality: c_int,
    value: *mut f64,
    error: *mut f64,
) -> CcpStatus {
    guard(|| {
        let m = molecule_ref(m)?;
        if value.is_null() {
            return Err(null("value"));
        }
        let s = spec(chirality)?;
        let f = force_by_quadrature(m, d, t, temperature, &perfect_chiral_plate(s), &QuadConfig::default())?;
        value.write(f.chiral.value);
        write(error, f.chiral.error);
        Ok(())
    })
}

/// Sine integral `Si(x)`.
///
/// # Safety
/// `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ccp_sin_integral(x: f64, value: *mut f64) -> CcpStatus {
    guard(|| {
        if value.is_null() {
            return Err(null("value"));
        }
        value.write(specfun::sin_integral(x, &specfun::EvalTolerance::default())?);
        Ok(())
    })
}

/// Cosine integral `Ci(x)`, `x > 0`.
///
/// # Safety
/// `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ccp_cos_integral(x: f64, value: *mut f64) -> CcpStatus {
    guard(|| {
        if value.is_null() {
            return Err(null("value"));
        }
        value.write(specfun::cos_integral(x, &specfun::EvalTolerance::default())?);
        Ok(())
    })
}

/// Message of the last failure on this thread as a newly allocated string
/// (release with [`ccp_string_free`]), or null if none occurred.
#[no_mangle]
pub extern "C" fn ccp_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_deref() {
        Some(msg) => CString::new(msg.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from [`ccp_last_error_message`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ccp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ccp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
