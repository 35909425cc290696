//! C interface to `asd-core`.
//!
//! Deployments are returned behind an opaque [`AsdDeployment`] handle that the
//! caller releases with [`asd_deployment_free`]. Every fallible call returns an
//! [`AsdStatus`]; on failure [`asd_last_error`] describes what went wrong.
//! Panics never cross the boundary.
//!
//! The header `include/asd.h` is regenerated on every build.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use asd_core::{deploy_auto, deploy_controlled, deploy_sector, load_plan};
use asd_core::{AutoConfig, Deployment, Error, RingSector};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidPlan = 3,
    Io = 4,
    OutOfRange = 5,
    Panic = 99,
}

/// Opaque deployment handle.
pub struct AsdDeployment(Deployment);

/// Sector coordinates of one point (0-based).
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AsdTag {
    pub layer: u32,
    pub sector: u32,
}

/// Geometry and extent of one contiguous block of generated points.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AsdSectorInfo {
    pub layer: u32,
    pub sector: u32,
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub angle_lo: f64,
    pub angle_hi: f64,
    pub area: f64,
    /// Index of the block's first point.
    pub start: usize,
    pub count: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: AsdStatus, msg: impl Into<String>) -> AsdStatus {
    set_error(msg);
    status
}

fn from_core(e: Error) -> AsdStatus {
    let status = match e {
        Error::InvalidPlan(_) | Error::PlanParse(_) => AsdStatus::InvalidPlan,
        Error::Io(_) => AsdStatus::Io,
        _ => AsdStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> AsdStatus) -> AsdStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(AsdStatus::Panic, format!("panic: {msg}"))
        }
    }
}

/// Moves `dep` behind a new handle in `*out`. `out` is checked by the caller.
unsafe fn emit(out: *mut *mut AsdDeployment, dep: Deployment) -> AsdStatus {
    *out = Box::into_raw(Box::new(AsdDeployment(dep)));
    AsdStatus::Ok
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, AsdStatus> {
    if p.is_null() {
        return Err(fail(AsdStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(AsdStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn count_arg(n: u64) -> Result<usize, AsdStatus> {
    usize::try_from(n).map_err(|_| fail(AsdStatus::OutOfRange, "count does not fit in size_t"))
}

macro_rules! check_out {
    ($out:ident) => {
        if $out.is_null() {
            return fail(
                AsdStatus::NullPointer,
                concat!(stringify!($out), " is null"),
            );
        }
    };
}

/// Message describing the most recent failure of a status-returning call on
/// this thread, or null if that call succeeded. The string stays valid until
/// the next status-returning call on the same thread.
#[no_mangle]
pub extern "C" fn asd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn asd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Area of the ring sector `l1 <= r <= l2`, `a1 <= theta <= a2`.
///
/// # Safety
/// `out` must be null or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn asd_sector_area(
    l1: f64,
    l2: f64,
    a1: f64,
    a2: f64,
    out: *mut f64,
) -> AsdStatus {
    guard(|| {
        check_out!(out);
        match RingSector::new(l1, l2, a1, a2) {
            Ok(s) => {
                *out = s.area();
                AsdStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Places `n` points uniformly in one ring sector.
///
/// # Safety
/// `out` must be null or point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn asd_sample_ring(
    l1: f64,
    l2: f64,
    a1: f64,
    a2: f64,
    n: u64,
    seed: u64,
    out: *mut *mut AsdDeployment,
) -> AsdStatus {
    guard(|| {
        check_out!(out);
        let n = match count_arg(n) {
            Ok(n) => n,
            Err(s) => return s,
        };
        match RingSector::new(l1, l2, a1, a2) {
            Ok(s) => emit(out, deploy_sector(&s, n, seed)),
            Err(e) => from_core(e),
        }
    })
}

/// Deploys the plan given as a JSON document.
///
/// # Safety
/// `plan_json` must be null or a NUL-terminated string. `out` must be null or
/// point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn asd_deploy_controlled_json(
    plan_json: *const c_char,
    seed: u64,
    out: *mut *mut AsdDeployment,
) -> AsdStatus {
    guard(|| {
        check_out!(out);
        let text = match str_arg(plan_json, "plan_json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match load_plan(text).and_then(|p| deploy_controlled(&p, seed)) {
            Ok(d) => emit(out, d),
            Err(e) => from_core(e),
        }
    })
}

/// Uncontrolled deployment with a random number of layers. When
/// `layer_count` is non-null it receives the number of layers drawn.
///
/// # Safety
/// `out` must be null or point to writable memory for one pointer;
/// `layer_count` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn asd_deploy_auto(
    cell_radius: f64,
    max_layers: u32,
    total_nodes: u64,
    seed: u64,
    out: *mut *mut AsdDeployment,
    layer_count: *mut u32,
) -> AsdStatus {
    guard(|| {
        check_out!(out);
        match AutoConfig::new(cell_radius, max_layers, total_nodes)
            .and_then(|c| deploy_auto(&c, seed))
        {
            Ok(r) => {
                if !layer_count.is_null() {
                    *layer_count = r.layer_count;
                }
                emit(out, r.deployment)
            }
            Err(e) => from_core(e),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `dep` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn asd_deployment_free(dep: *mut AsdDeployment) {
    if !dep.is_null() {
        drop(Box::from_raw(dep));
    }
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `dep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn asd_deployment_len(dep: *const AsdDeployment) -> usize {
    dep.as_ref().map_or(0, |d| d.0.len())
}

/// Seed the deployment was generated with, or 0 for a null handle.
///
/// # Safety
/// `dep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn asd_deployment_seed(dep: *const AsdDeployment) -> u64 {
    dep.as_ref().map_or(0, |d| d.0.seed)
}

/// Interleaved `x0, y0, x1, y1, ...` coordinates, `2 * len` doubles long and
/// owned by the handle. Null for a null or empty handle.
///
/// # Safety
/// `dep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn asd_deployment_coords(dep: *const AsdDeployment) -> *const f64 {
    match dep.as_ref() {
        Some(d) if !d.0.points.is_empty() => d.0.points.as_ptr().cast(),
        _ => ptr::null(),
    }
}

/// Copies up to `cap` point tags into `buf` and stores the number copied in
/// `*written`.
///
/// # Safety
/// `dep` must be null or a live handle; `buf` must hold `cap` tags;
/// `written` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn asd_deployment_copy_tags(
    dep: *const AsdDeployment,
    buf: *mut AsdTag,
    cap: usize,
    written: *mut usize,
) -> AsdStatus {
    guard(|| {
        let Some(d) = dep.as_ref() else {
            return fail(AsdStatus::NullPointer, "dep is null");
        };
        if buf.is_null() && cap > 0 {
            return fail(AsdStatus::NullPointer, "buf is null");
        }
        let k = cap.min(d.0.tags.len());
        for (i, t) in d.0.tags[..k].iter().enumerate() {
            *buf.add(i) = AsdTag {
                layer: t.layer,
                sector: t.sector,
            };
        }
        if !written.is_null() {
            *written = k;
        }
        AsdStatus::Ok
    })
}

/// Number of sector blocks, or 0 for a null handle.
///
/// # Safety
/// `dep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn asd_deployment_sector_count(dep: *const AsdDeployment) -> usize {
    dep.as_ref().map_or(0, |d| d.0.runs.len())
}

/// Describes sector block `index`, in generation order.
///
/// # Safety
/// `dep` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn asd_deployment_sector(
    dep: *const AsdDeployment,
    index: usize,
    out: *mut AsdSectorInfo,
) -> AsdStatus {
    guard(|| {
        check_out!(out);
        let Some(d) = dep.as_ref() else {
            return fail(AsdStatus::NullPointer, "dep is null");
        };
        let Some(r) = d.0.runs.get(index) else {
            return fail(
                AsdStatus::OutOfRange,
                format!("sector {index} of {}", d.0.runs.len()),
            );
        };
        let g = &r.geometry;
        *out = AsdSectorInfo {
            layer: r.tag.layer,
            sector: r.tag.sector,
            inner_radius: g.inner_radius(),
            outer_radius: g.outer_radius(),
            angle_lo: g.angle_lo(),
            angle_hi: g.angle_hi(),
            area: g.area(),
            start: r.start,
            count: r.len,
        };
        AsdStatus::Ok
    })
}

/// Writes the points as CSV (`x,y,layer,sector`).
///
/// # Safety
/// `dep` must be null or a live handle; `path` must be null or a
/// NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn asd_deployment_write_csv(
    dep: *const AsdDeployment,
    path: *const c_char,
) -> AsdStatus {
    guard(|| {
        let Some(d) = dep.as_ref() else {
            return fail(AsdStatus::NullPointer, "dep is null");
        };
        let path = match str_arg(path, "path") {
            Ok(p) => Path::new(p),
            Err(s) => return s,
        };
        let file = match std::fs::File::create(path) {
            Ok(f) => f,
            Err(e) => return fail(AsdStatus::Io, format!("{}: {e}", path.display())),
        };
        match d.0.write_csv(std::io::BufWriter::new(file)) {
            Ok(()) => AsdStatus::Ok,
            Err(e) => from_core(e),
        }
    })
}
