//! C ABI for coset-spectra.
//!
//! Conventions: opaque handles created by `_new`/`_build` functions and
//! released by the matching `_free`; every fallible call returns a
//! `CspStatus`; strings are UTF-8, owned by the library, and released with
//! `csp_string_free`. Structured reports cross the boundary as JSON.
//! No call unwinds across the boundary.

use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use coset_spectra::cayley::{self, Family, Graph};
use coset_spectra::characters::Chars;
use coset_spectra::cli::{build_family_graph, Tower};
use coset_spectra::error::Error;
use coset_spectra::predicted::Predictor;
use coset_spectra::spectra::{self, SpectrumReport};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CspStatus {
    /// Success.
    CspOk = 0,
    /// A required pointer argument was null.
    CspNullPointer = 1,
    /// Arguments were invalid or unsupported (bad q, forbidden parameter).
    CspInvalidArgument = 2,
    /// A verified mathematical property failed to hold.
    CspPropertyViolation = 3,
    /// Internal failure.
    CspInternal = 4,
}

/// Graph families exposed through the C interface.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CspFamily {
    CspFamilyK = 0,
    CspFamilyU = 1,
    CspFamilyA = 2,
    CspFamilyCusp = 3,
}

impl From<CspFamily> for Family {
    fn from(f: CspFamily) -> Family {
        match f {
            CspFamily::CspFamilyK => Family::K,
            CspFamily::CspFamilyU => Family::U,
            CspFamily::CspFamilyA => Family::A,
            CspFamily::CspFamilyCusp => Family::Cusp,
        }
    }
}

/// Bound certification result for one spectrum.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct CspCertificate {
    /// 1 when every nontrivial eigenvalue fits under 2 sqrt(k-1).
    pub ramanujan: u8,
    /// 1 when every nontrivial eigenvalue fits under 2 sqrt(q).
    pub sqrt_q_bound_holds: u8,
    pub max_nontrivial_abs: f64,
    pub ramanujan_bound: f64,
    pub sqrt_q_bound: f64,
}

/// Field tower for one q (opaque).
pub struct CspTower {
    inner: Tower,
}

/// A built graph (opaque).
pub struct CspGraph {
    inner: Graph,
}

/// A computed spectrum with its certification data (opaque).
pub struct CspSpectrum {
    inner: SpectrumReport,
}

fn status_of(e: &Error) -> CspStatus {
    if e.is_usage() {
        CspStatus::CspInvalidArgument
    } else {
        CspStatus::CspPropertyViolation
    }
}

fn guard<F: FnOnce() -> CspStatus>(f: F) -> CspStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(CspStatus::CspInternal)
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn csp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn csp_status_message(status: CspStatus) -> *const c_char {
    let msg: &'static str = match status {
        CspStatus::CspOk => "ok\0",
        CspStatus::CspNullPointer => "null pointer argument\0",
        CspStatus::CspInvalidArgument => "invalid or unsupported argument\0",
        CspStatus::CspPropertyViolation => "verified property failed\0",
        CspStatus::CspInternal => "internal error\0",
    };
    msg.as_ptr() as *const c_char
}

/// Build the field tower for an odd prime power q.
///
/// # Safety
/// `out` must be a valid pointer; the result must be freed with
/// `csp_tower_free`.
#[no_mangle]
pub unsafe extern "C" fn csp_tower_new(q: u32, out: *mut *mut CspTower) -> CspStatus {
    if out.is_null() {
        return CspStatus::CspNullPointer;
    }
    guard(|| match Tower::new(q) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(CspTower { inner })) };
            CspStatus::CspOk
        }
        Err(e) => status_of(&e),
    })
}

/// # Safety
/// `tower` must come from `csp_tower_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn csp_tower_free(tower: *mut CspTower) {
    if !tower.is_null() {
        drop(unsafe { Box::from_raw(tower) });
    }
}

/// # Safety
/// `tower` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn csp_tower_q(tower: *const CspTower) -> u32 {
    unsafe { &*tower }.inner.field.q()
}

/// # Safety
/// `tower` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn csp_tower_p(tower: *const CspTower) -> u32 {
    unsafe { &*tower }.inner.field.p()
}

/// # Safety
/// `tower` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn csp_tower_delta(tower: *const CspTower) -> u32 {
    unsafe { &*tower }.inner.ext.delta()
}

/// Build the graph of `family` at `param` (ignored for cusp graphs).
///
/// # Safety
/// `tower` must be a live handle and `out` a valid pointer; the result must
/// be freed with `csp_graph_free`.
#[no_mangle]
pub unsafe extern "C" fn csp_graph_build(
    tower: *const CspTower,
    family: CspFamily,
    param: u32,
    out: *mut *mut CspGraph,
) -> CspStatus {
    if tower.is_null() || out.is_null() {
        return CspStatus::CspNullPointer;
    }
    let tower = unsafe { &*tower };
    guard(
        || match build_family_graph(&tower.inner, family.into(), param) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(CspGraph { inner })) };
                CspStatus::CspOk
            }
            Err(e) => status_of(&e),
        },
    )
}

/// # Safety
/// `graph` must come from `csp_graph_build` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn csp_graph_free(graph: *mut CspGraph) {
    if !graph.is_null() {
        drop(unsafe { Box::from_raw(graph) });
    }
}

/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn csp_graph_vertex_count(graph: *const CspGraph) -> u64 {
    unsafe { &*graph }.inner.n as u64
}

/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn csp_graph_degree(graph: *const CspGraph) -> u32 {
    unsafe { &*graph }.inner.k as u32
}

/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn csp_graph_edge_count(graph: *const CspGraph) -> u64 {
    let g = &unsafe { &*graph }.inner;
    (g.n * g.k / 2) as u64
}

/// Copy edges as (i, j) pairs into `buf` (2 entries per edge). Returns the
/// number of u32 values required; writes at most `cap` values.
///
/// # Safety
/// `graph` must be a live handle; `buf` must point to `cap` writable u32
/// slots (or be null when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn csp_graph_edges(
    graph: *const CspGraph,
    buf: *mut u32,
    cap: usize,
) -> usize {
    let g = &unsafe { &*graph }.inner;
    let edges = g.edges();
    let needed = edges.len() * 2;
    if !buf.is_null() {
        let n = needed.min(cap & !1);
        let slice = unsafe { std::slice::from_raw_parts_mut(buf, n) };
        for (idx, &(i, j)) in edges.iter().take(n / 2).enumerate() {
            slice[2 * idx] = i;
            slice[2 * idx + 1] = j;
        }
    }
    needed
}

/// The graph serialized as JSON; free with `csp_string_free`.
///
/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn csp_graph_to_json(graph: *const CspGraph) -> *mut c_char {
    let g = &unsafe { &*graph }.inner;
    match serde_json::to_string(&g.to_json()) {
        Ok(s) => CString::new(s)
            .map(CString::into_raw)
            .unwrap_or(ptr::null_mut()),
        Err(_) => ptr::null_mut(),
    }
}

/// Compute all adjacency eigenvalues of the graph.
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer; the result must
/// be freed with `csp_spectrum_free`.
#[no_mangle]
pub unsafe extern "C" fn csp_spectrum_compute(
    graph: *const CspGraph,
    out: *mut *mut CspSpectrum,
) -> CspStatus {
    if graph.is_null() || out.is_null() {
        return CspStatus::CspNullPointer;
    }
    let g = &unsafe { &*graph }.inner;
    guard(|| match SpectrumReport::from_graph(g) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(CspSpectrum { inner })) };
            CspStatus::CspOk
        }
        Err(e) => status_of(&e),
    })
}

/// # Safety
/// `spectrum` must come from `csp_spectrum_compute` and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn csp_spectrum_free(spectrum: *mut CspSpectrum) {
    if !spectrum.is_null() {
        drop(unsafe { Box::from_raw(spectrum) });
    }
}

/// # Safety
/// `spectrum` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn csp_spectrum_len(spectrum: *const CspSpectrum) -> usize {
    unsafe { &*spectrum }.inner.eigenvalues.len()
}

/// Copy eigenvalues (descending) into `buf`; returns the count required.
///
/// # Safety
/// `spectrum` must be a live handle; `buf` must point to `cap` writable f64
/// slots (or be null when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn csp_spectrum_values(
    spectrum: *const CspSpectrum,
    buf: *mut f64,
    cap: usize,
) -> usize {
    let eigs = &unsafe { &*spectrum }.inner.eigenvalues;
    if !buf.is_null() {
        let n = eigs.len().min(cap);
        unsafe { std::slice::from_raw_parts_mut(buf, n) }.copy_from_slice(&eigs[..n]);
    }
    eigs.len()
}

/// Certify the eigenvalue bounds of a computed spectrum.
///
/// # Safety
/// `spectrum` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn csp_spectrum_certify(
    spectrum: *const CspSpectrum,
    out: *mut CspCertificate,
) -> CspStatus {
    if spectrum.is_null() || out.is_null() {
        return CspStatus::CspNullPointer;
    }
    let report = &unsafe { &*spectrum }.inner;
    let cert = spectra::certify(report);
    unsafe {
        *out = CspCertificate {
            ramanujan: cert.ramanujan as u8,
            sqrt_q_bound_holds: cert.sqrt_q_bound_holds as u8,
            max_nontrivial_abs: report.max_nontrivial_abs,
            ramanujan_bound: report.ramanujan_bound,
            sqrt_q_bound: report.sqrt_q_bound,
        };
    }
    CspStatus::CspOk
}

/// Structural analysis (components, bipartiteness) as JSON; free with
/// `csp_string_free`.
///
/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn csp_graph_analyze_json(graph: *const CspGraph) -> *mut c_char {
    let g = &unsafe { &*graph }.inner;
    let report = cayley::analyze(g);
    match serde_json::to_string(&report) {
        Ok(s) => CString::new(s)
            .map(CString::into_raw)
            .unwrap_or(ptr::null_mut()),
        Err(_) => ptr::null_mut(),
    }
}

/// The predicted spectrum of a family at one parameter as JSON; free with
/// `csp_string_free`. Not available for cusp graphs.
///
/// # Safety
/// `tower` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn csp_predict_json(
    tower: *const CspTower,
    family: CspFamily,
    param: u32,
    out: *mut *mut c_char,
) -> CspStatus {
    if tower.is_null() || out.is_null() {
        return CspStatus::CspNullPointer;
    }
    let tower = unsafe { &*tower };
    guard(|| {
        let chars = Chars::new(&tower.inner.field, &tower.inner.ext);
        let predictor = Predictor::new(&chars);
        match predictor.assemble(family.into(), param) {
            Ok(pred) => match serde_json::to_string(&pred) {
                Ok(s) => {
                    let c = CString::new(s)
                        .map(CString::into_raw)
                        .unwrap_or(ptr::null_mut());
                    if c.is_null() {
                        return CspStatus::CspInternal;
                    }
                    unsafe { *out = c };
                    CspStatus::CspOk
                }
                Err(_) => CspStatus::CspInternal,
            },
            Err(e) => status_of(&e),
        }
    })
}

/// Build, solve, predict, and compare one graph. Returns `CspOk` when the
/// computed and predicted spectra agree within `tol` and the family's
/// eigenvalue bound holds; `CspPropertyViolation` otherwise. The worst
/// matching distance lands in `max_distance` when non-null.
///
/// # Safety
/// `tower` must be a live handle; `max_distance` may be null.
#[no_mangle]
pub unsafe extern "C" fn csp_crosscheck(
    tower: *const CspTower,
    family: CspFamily,
    param: u32,
    tol: f64,
    max_distance: *mut f64,
) -> CspStatus {
    if tower.is_null() {
        return CspStatus::CspNullPointer;
    }
    let tower = unsafe { &*tower };
    guard(|| {
        match coset_spectra::cli::run_pipeline(&tower.inner, family.into(), param, tol, false) {
            Ok(report) => {
                if !max_distance.is_null() {
                    unsafe {
                        *max_distance = report.matched.map_or(0.0, |m| m.max_distance);
                    }
                }
                if report.passed() {
                    CspStatus::CspOk
                } else {
                    CspStatus::CspPropertyViolation
                }
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn csp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
