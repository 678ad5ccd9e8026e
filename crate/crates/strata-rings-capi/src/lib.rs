//! C ABI for the strata-rings library. Presentations are opaque handles;
//! every fallible call returns a status code and writes results through out
//! pointers. Strings returned by this library must be released with
//! `strata_string_free`.

use libc::c_char;
use std::ffi::CString;
use strata_rings::{
    complex_betti, complex_ideal, real_betti, real_h1_closed_form, real_ideal,
    torsion_free_relation, Error, Family, IdealPresentation, RankContext,
};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StrataStatus {
    Ok = 0,
    InvalidArgument = 1,
    Overflow = 2,
    ResourceLimit = 3,
    NullPointer = 4,
    BufferTooSmall = 5,
    Internal = 6,
}

/// Which family of moduli spaces to work with.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StrataFamily {
    Complex = 0,
    Real = 1,
}

impl From<StrataFamily> for Family {
    fn from(f: StrataFamily) -> Family {
        match f {
            StrataFamily::Complex => Family::Complex,
            StrataFamily::Real => Family::Real,
        }
    }
}

fn status_of(e: &Error) -> StrataStatus {
    match e {
        Error::InvalidArgument(_) | Error::InvalidPartition(_) | Error::AlphabetMismatch(_)
        | Error::Inhomogeneous(_) => StrataStatus::InvalidArgument,
        Error::Overflow(_) => StrataStatus::Overflow,
        Error::ResourceLimit(_) => StrataStatus::ResourceLimit,
        _ => StrataStatus::Internal,
    }
}

/// An ideal presentation together with its rank-computation cache.
pub struct StrataPresentation {
    pres: IdealPresentation,
    ctx: RankContext,
}

/// Version string of the underlying library. The pointer is owned by the
/// library and must not be freed.
#[no_mangle]
pub extern "C" fn strata_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

fn write_dims(
    dims: &[u64],
    out_dims: *mut u64,
    capacity: usize,
    out_written: *mut usize,
) -> StrataStatus {
    if out_dims.is_null() || out_written.is_null() {
        return StrataStatus::NullPointer;
    }
    if capacity < dims.len() {
        unsafe { *out_written = dims.len() };
        return StrataStatus::BufferTooSmall;
    }
    unsafe {
        std::ptr::copy_nonoverlapping(dims.as_ptr(), out_dims, dims.len());
        *out_written = dims.len();
    }
    StrataStatus::Ok
}

/// Betti numbers by the closed recursion, in table-row form (the real family
/// lists every degree, the complex family its even degrees). Writes at most
/// `capacity` entries; `out_written` receives the required length.
///
/// # Safety
/// `out_dims` must point to at least `capacity` writable `uint64_t` slots and
/// `out_written` to a writable `size_t`.
#[no_mangle]
pub unsafe extern "C" fn strata_betti_recursion(
    family: StrataFamily,
    ell: u32,
    out_dims: *mut u64,
    capacity: usize,
    out_written: *mut usize,
) -> StrataStatus {
    let vector = match Family::from(family) {
        Family::Complex => complex_betti(ell),
        Family::Real => real_betti(ell),
    };
    match vector {
        Ok(v) => write_dims(&v.display_dims(), out_dims, capacity, out_written),
        Err(e) => status_of(&e),
    }
}

/// The closed form `2^(ell-1) - 1` for the first real Betti number.
///
/// # Safety
/// `out` must be a writable `uint64_t` pointer.
#[no_mangle]
pub unsafe extern "C" fn strata_h1_closed_form(ell: u32, out: *mut u64) -> StrataStatus {
    if out.is_null() {
        return StrataStatus::NullPointer;
    }
    match real_h1_closed_form(ell) {
        Ok(v) => {
            unsafe { *out = v };
            StrataStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Builds the boundary-class presentation at level `ell`. On success the
/// handle must be released with `strata_presentation_free`.
///
/// # Safety
/// `out` must be a writable handle pointer.
#[no_mangle]
pub unsafe extern "C" fn strata_presentation_new(
    family: StrataFamily,
    ell: u32,
    out: *mut *mut StrataPresentation,
) -> StrataStatus {
    if out.is_null() {
        return StrataStatus::NullPointer;
    }
    let pres = match Family::from(family) {
        Family::Complex => complex_ideal(ell),
        Family::Real => real_ideal(ell),
    };
    match pres {
        Ok(pres) => {
            let handle = Box::new(StrataPresentation {
                pres,
                ctx: RankContext::default(),
            });
            unsafe { *out = Box::into_raw(handle) };
            StrataStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a presentation handle. A null pointer is a no-op.
///
/// # Safety
/// `p` must be a pointer previously returned by `strata_presentation_new`
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn strata_presentation_free(p: *mut StrataPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of tagged ideal generators in the presentation.
///
/// # Safety
/// `p` must be a live handle from `strata_presentation_new`.
#[no_mangle]
pub unsafe extern "C" fn strata_presentation_generator_count(
    p: *const StrataPresentation,
    out: *mut usize,
) -> StrataStatus {
    if p.is_null() || out.is_null() {
        return StrataStatus::NullPointer;
    }
    *out = (*p).pres.generators().len();
    StrataStatus::Ok
}

/// The presentation as a JSON document; NULL on failure. Free the returned
/// string with `strata_string_free`.
///
/// # Safety
/// `p` must be a live handle from `strata_presentation_new`.
#[no_mangle]
pub unsafe extern "C" fn strata_presentation_json(p: *const StrataPresentation) -> *mut c_char {
    if p.is_null() {
        return std::ptr::null_mut();
    }
    let doc = (*p).pres.to_doc();
    let Ok(json) = serde_json::to_string_pretty(&doc) else {
        return std::ptr::null_mut();
    };
    CString::new(json).map_or(std::ptr::null_mut(), CString::into_raw)
}

/// Releases a string returned by this library. A null pointer is a no-op.
///
/// # Safety
/// `s` must be a pointer previously returned by `strata_presentation_json`
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn strata_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Graded dimensions of the quotient ring by exact rank, in table-row form.
/// `max_degree < 0` computes the whole vector; otherwise the computation is
/// truncated at that cohomological degree.
///
/// # Safety
/// `p` must be a live handle from `strata_presentation_new`.
#[no_mangle]
pub unsafe extern "C" fn strata_quotient_dims(
    p: *const StrataPresentation,
    max_degree: i64,
    out_dims: *mut u64,
    capacity: usize,
    out_written: *mut usize,
) -> StrataStatus {
    if p.is_null() {
        return StrataStatus::NullPointer;
    }
    let handle = &*p;
    let bound = if max_degree < 0 {
        None
    } else {
        Some(max_degree as u32)
    };
    match strata_rings::rank::quotient_dims_over(&handle.pres, bound, &handle.ctx) {
        Ok(out) => write_dims(&out.vector.display_dims(), out_dims, capacity, out_written),
        Err(e) => status_of(&e),
    }
}

/// Whether the signed degree-2 relation indexed by `(a, b, c)` lies in the
/// real ideal. Requires a real-family handle and `a != b`, `a != c`.
///
/// # Safety
/// `p` must be a live handle from `strata_presentation_new`.
#[no_mangle]
pub unsafe extern "C" fn strata_contains_torsion_relation(
    p: *const StrataPresentation,
    a: u32,
    b: u32,
    c: u32,
    out: *mut bool,
) -> StrataStatus {
    if p.is_null() || out.is_null() {
        return StrataStatus::NullPointer;
    }
    let handle = &*p;
    if handle.pres.family() != Family::Real {
        return StrataStatus::InvalidArgument;
    }
    let rel = match torsion_free_relation(handle.pres.alphabet(), a, b, c) {
        Ok(rel) => rel,
        Err(e) => return status_of(&e),
    };
    match strata_rings::ideal_contains(&handle.pres, &rel, &handle.ctx) {
        Ok(v) => {
            *out = v;
            StrataStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}
