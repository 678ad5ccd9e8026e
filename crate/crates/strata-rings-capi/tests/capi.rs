//! Exercises the C ABI the way a foreign caller would: status codes, out
//! pointers, opaque handles, and string ownership.

use std::ffi::CStr;
use strata_rings_capi::*;

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(strata_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn betti_recursion_through_the_abi() {
    unsafe {
    let mut dims = [0u64; 16];
    let mut written = 0usize;
    let status = strata_betti_recursion(
        StrataFamily::Real,
        4,
        dims.as_mut_ptr(),
        dims.len(),
        &mut written,
    );
    assert_eq!(status, StrataStatus::Ok);
    assert_eq!(&dims[..written], &[1, 7, 20, 20, 7, 1]);

    let status = strata_betti_recursion(
        StrataFamily::Complex,
        7,
        dims.as_mut_ptr(),
        dims.len(),
        &mut written,
    );
    assert_eq!(status, StrataStatus::Ok);
    assert_eq!(&dims[..written], &[1, 42, 127, 42, 1]);

    // Undersized buffer reports the required length.
    let mut two = [0u64; 2];
    let status = strata_betti_recursion(
        StrataFamily::Real,
        4,
        two.as_mut_ptr(),
        two.len(),
        &mut written,
    );
    assert_eq!(status, StrataStatus::BufferTooSmall);
    assert_eq!(written, 6);

    // Out-of-range level.
    let status = strata_betti_recursion(
        StrataFamily::Real,
        1,
        dims.as_mut_ptr(),
        dims.len(),
        &mut written,
    );
    assert_eq!(status, StrataStatus::InvalidArgument);

    let status =
        strata_betti_recursion(StrataFamily::Real, 4, std::ptr::null_mut(), 0, &mut written);
    assert_eq!(status, StrataStatus::NullPointer);
    }
}

#[test]
fn closed_form() {
    unsafe {
        let mut out = 0u64;
        assert_eq!(strata_h1_closed_form(6, &mut out), StrataStatus::Ok);
        assert_eq!(out, 31);
        assert_eq!(strata_h1_closed_form(1, &mut out), StrataStatus::InvalidArgument);
    }
}

#[test]
fn presentation_handle_lifecycle() {
    let mut handle: *mut StrataPresentation = std::ptr::null_mut();
    let status = unsafe { strata_presentation_new(StrataFamily::Real, 3, &mut handle) };
    assert_eq!(status, StrataStatus::Ok);
    assert!(!handle.is_null());

    unsafe {
        let mut count = 0usize;
        assert_eq!(
            strata_presentation_generator_count(handle, &mut count),
            StrataStatus::Ok
        );
        assert_eq!(count, 44);

        let json = strata_presentation_json(handle);
        assert!(!json.is_null());
        let text = CStr::from_ptr(json).to_str().unwrap().to_string();
        assert!(text.contains("\"family\": \"real\""));
        assert!(text.contains("E{1|23}"));
        strata_string_free(json);

        let mut dims = [0u64; 8];
        let mut written = 0usize;
        assert_eq!(
            strata_quotient_dims(handle, -1, dims.as_mut_ptr(), dims.len(), &mut written),
            StrataStatus::Ok
        );
        assert_eq!(&dims[..written], &[1, 3, 3, 1]);

        let mut contained = false;
        assert_eq!(
            strata_contains_torsion_relation(handle, 1, 2, 3, &mut contained),
            StrataStatus::Ok
        );
        assert!(contained);
        assert_eq!(
            strata_contains_torsion_relation(handle, 1, 1, 3, &mut contained),
            StrataStatus::InvalidArgument
        );

        strata_presentation_free(handle);
    }

    // Invalid level never hands back a handle.
    let mut bad: *mut StrataPresentation = std::ptr::null_mut();
    assert_eq!(
        unsafe { strata_presentation_new(StrataFamily::Complex, 2, &mut bad) },
        StrataStatus::InvalidArgument
    );
    assert!(bad.is_null());
}

#[test]
fn torsion_relation_requires_real_family() {
    let mut handle: *mut StrataPresentation = std::ptr::null_mut();
    assert_eq!(
        unsafe { strata_presentation_new(StrataFamily::Complex, 4, &mut handle) },
        StrataStatus::Ok
    );
    unsafe {
        let mut contained = false;
        assert_eq!(
            strata_contains_torsion_relation(handle, 1, 2, 3, &mut contained),
            StrataStatus::InvalidArgument
        );
        strata_presentation_free(handle);
    }
}

#[test]
fn generated_header_covers_the_surface() {
    let header = std::fs::read_to_string(
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/strata_rings.h"),
    )
    .expect("cbindgen header is generated at build time");
    for symbol in [
        "strata_version",
        "strata_betti_recursion",
        "strata_h1_closed_form",
        "strata_presentation_new",
        "strata_presentation_free",
        "strata_presentation_generator_count",
        "strata_presentation_json",
        "strata_string_free",
        "strata_quotient_dims",
        "strata_contains_torsion_relation",
        "StrataStatus",
        "StrataFamily",
        "typedef struct StrataPresentation StrataPresentation",
    ] {
        assert!(header.contains(symbol), "header is missing `{symbol}`");
    }
}
