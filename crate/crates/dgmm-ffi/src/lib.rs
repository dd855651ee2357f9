//! C ABI for the maturity assessment engine.
//!
//! Models and response sets are opaque handles created and destroyed by this
//! library; reports come back as heap-allocated UTF-8 strings released with
//! [`dgmm_string_free`]. Every fallible call returns a [`DgmmStatus`]; on
//! failure [`dgmm_last_error_message`] holds a description until the next
//! call on the same thread.

use dgmm_core::agreement::agreement_by_level;
use dgmm_core::analytics::{activity_profile, dimension_profile};
use dgmm_core::error::{Error, ErrorCategory};
use dgmm_core::model::MaturityModel;
use dgmm_core::rating::determine_maturity;
use dgmm_core::report;
use dgmm_core::svg::RadarChart;
use dgmm_core::{AggregationPolicy, ResponseSet};
use libc::c_char;
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::ptr;

/// Status code of a C API call.
#[repr(C)]
#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub enum DgmmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ValidationError = 4,
    ComputationError = 5,
}

/// Aggregation policy for panel ratings.
#[repr(C)]
#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub enum DgmmAggregation {
    MedianLow = 0,
    Mean = 1,
}

impl From<DgmmAggregation> for AggregationPolicy {
    fn from(a: DgmmAggregation) -> AggregationPolicy {
        match a {
            DgmmAggregation::MedianLow => AggregationPolicy::MedianLow,
            DgmmAggregation::Mean => AggregationPolicy::Mean,
        }
    }
}

/// Opaque handle to a validated maturity model.
pub struct DgmmModel {
    inner: MaturityModel,
}

/// Opaque handle to a coverage-checked response set.
pub struct DgmmResponses {
    inner: ResponseSet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let cstring = CString::new(message)
        .unwrap_or_else(|_| CString::new("error message contained NUL").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(error: &Error) -> DgmmStatus {
    match error.category() {
        ErrorCategory::Parse => DgmmStatus::ParseError,
        ErrorCategory::Validation => DgmmStatus::ValidationError,
        ErrorCategory::Computation => DgmmStatus::ComputationError,
    }
}

fn fail(error: Error) -> DgmmStatus {
    let status = status_of(&error);
    set_error(error.to_string());
    status
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn utf8_arg<'a>(ptr: *const c_char) -> Result<&'a str, DgmmStatus> {
    if ptr.is_null() {
        set_error("null argument".to_string());
        return Err(DgmmStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".to_string());
        DgmmStatus::InvalidUtf8
    })
}

fn return_string(text: String, out: *mut *mut c_char) -> DgmmStatus {
    let cstring = match CString::new(text) {
        Ok(s) => s,
        Err(_) => {
            set_error("output contained NUL".to_string());
            return DgmmStatus::ComputationError;
        }
    };
    unsafe { *out = cstring.into_raw() };
    DgmmStatus::Ok
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn dgmm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread, or null. The pointer
/// is valid until the next API call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn dgmm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(ptr::null())
    })
}

/// Creates a handle to the bundled model.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dgmm_model_builtin(out: *mut *mut DgmmModel) -> DgmmStatus {
    if out.is_null() {
        set_error("null argument".to_string());
        return DgmmStatus::NullArgument;
    }
    clear_error();
    let model = MaturityModel::builtin().clone();
    *out = Box::into_raw(Box::new(DgmmModel { inner: model }));
    DgmmStatus::Ok
}

/// Parses and validates a model document.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dgmm_model_from_json(
    json: *const c_char,
    out: *mut *mut DgmmModel,
) -> DgmmStatus {
    if out.is_null() {
        set_error("null argument".to_string());
        return DgmmStatus::NullArgument;
    }
    let data = match utf8_arg(json) {
        Ok(s) => s,
        Err(status) => return status,
    };
    match MaturityModel::from_json_str(data) {
        Ok(model) => {
            clear_error();
            *out = Box::into_raw(Box::new(DgmmModel { inner: model }));
            DgmmStatus::Ok
        }
        Err(e) => fail(e.into()),
    }
}

/// Serializes the model; release the string with [`dgmm_string_free`].
///
/// # Safety
/// `model` must be a live handle from this library; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dgmm_model_to_json(
    model: *const DgmmModel,
    out: *mut *mut c_char,
) -> DgmmStatus {
    if model.is_null() || out.is_null() {
        set_error("null argument".to_string());
        return DgmmStatus::NullArgument;
    }
    clear_error();
    return_string((*model).inner.to_json(), out)
}

/// Number of statements in the model; 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dgmm_model_statement_count(model: *const DgmmModel) -> u32 {
    if model.is_null() {
        return 0;
    }
    (*model).inner.statements.len() as u32
}

/// Number of maturity levels in the model; 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dgmm_model_level_count(model: *const DgmmModel) -> u32 {
    if model.is_null() {
        return 0;
    }
    (*model).inner.levels.len() as u32
}

/// Releases a model handle. Null is a no-op.
///
/// # Safety
/// `model` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dgmm_model_free(model: *mut DgmmModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Parses tabular CSV responses (`respondent,statement_id,rating[,percent]`).
/// `max_level` 0 means all levels of the model.
///
/// # Safety
/// `model` must be a live handle; `csv` and `organization` valid
/// NUL-terminated strings; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dgmm_responses_from_csv(
    model: *const DgmmModel,
    csv: *const c_char,
    organization: *const c_char,
    max_level: u8,
    out: *mut *mut DgmmResponses,
) -> DgmmStatus {
    if model.is_null() || out.is_null() {
        set_error("null argument".to_string());
        return DgmmStatus::NullArgument;
    }
    let data = match utf8_arg(csv) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let organization = match utf8_arg(organization) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let bound = if max_level == 0 { None } else { Some(max_level) };
    match ResponseSet::parse_csv(data, &(*model).inner, organization, bound) {
        Ok(set) => {
            clear_error();
            *out = Box::into_raw(Box::new(DgmmResponses { inner: set }));
            DgmmStatus::Ok
        }
        Err(e) => fail(e.into()),
    }
}

/// Parses structured JSON responses.
///
/// # Safety
/// `model` must be a live handle; `json` a valid NUL-terminated string;
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dgmm_responses_from_json(
    model: *const DgmmModel,
    json: *const c_char,
    out: *mut *mut DgmmResponses,
) -> DgmmStatus {
    if model.is_null() || out.is_null() {
        set_error("null argument".to_string());
        return DgmmStatus::NullArgument;
    }
    let data = match utf8_arg(json) {
        Ok(s) => s,
        Err(status) => return status,
    };
    match ResponseSet::parse_json(data, &(*model).inner) {
        Ok(set) => {
            clear_error();
            *out = Box::into_raw(Box::new(DgmmResponses { inner: set }));
            DgmmStatus::Ok
        }
        Err(e) => fail(e.into()),
    }
}

/// Number of respondents; 0 for a null handle.
///
/// # Safety
/// `responses` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dgmm_responses_respondent_count(
    responses: *const DgmmResponses,
) -> u32 {
    if responses.is_null() {
        return 0;
    }
    (*responses).inner.respondents().len() as u32
}

/// Releases a response-set handle. Null is a no-op.
///
/// # Safety
/// `responses` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dgmm_responses_free(responses: *mut DgmmResponses) {
    if !responses.is_null() {
        drop(Box::from_raw(responses));
    }
}

/// Determines the achieved maturity level (0 when no level passed).
///
/// # Safety
/// `model` and `responses` must be live handles; `out_level` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dgmm_maturity_level(
    model: *const DgmmModel,
    responses: *const DgmmResponses,
    aggregation: DgmmAggregation,
    out_level: *mut u8,
) -> DgmmStatus {
    if model.is_null() || responses.is_null() || out_level.is_null() {
        set_error("null argument".to_string());
        return DgmmStatus::NullArgument;
    }
    match determine_maturity(&(*responses).inner, &(*model).inner, aggregation.into()) {
        Ok(result) => {
            clear_error();
            *out_level = result.gml;
            DgmmStatus::Ok
        }
        Err(e) => fail(e.into()),
    }
}

/// Runs the full assessment and returns the report bundle as JSON; release
/// with [`dgmm_string_free`].
///
/// # Safety
/// `model` and `responses` must be live handles; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dgmm_assess_json(
    model: *const DgmmModel,
    responses: *const DgmmResponses,
    aggregation: DgmmAggregation,
    out: *mut *mut c_char,
) -> DgmmStatus {
    if model.is_null() || responses.is_null() || out.is_null() {
        set_error("null argument".to_string());
        return DgmmStatus::NullArgument;
    }
    match report::assemble(&(*responses).inner, &(*model).inner, aggregation.into()) {
        Ok(bundle) => {
            clear_error();
            return_string(report::render_json(&bundle), out)
        }
        Err(e) => fail(e),
    }
}

/// Runs the full assessment and returns the human-readable markdown report;
/// release with [`dgmm_string_free`].
///
/// # Safety
/// `model` and `responses` must be live handles; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dgmm_assess_markdown(
    model: *const DgmmModel,
    responses: *const DgmmResponses,
    aggregation: DgmmAggregation,
    out: *mut *mut c_char,
) -> DgmmStatus {
    if model.is_null() || responses.is_null() || out.is_null() {
        set_error("null argument".to_string());
        return DgmmStatus::NullArgument;
    }
    match report::assemble(&(*responses).inner, &(*model).inner, aggregation.into()) {
        Ok(bundle) => {
            clear_error();
            return_string(report::render_markdown(&bundle), out)
        }
        Err(e) => fail(e),
    }
}

/// Per-level inter-rater agreement as JSON; needs at least two respondents.
/// Release with [`dgmm_string_free`].
///
/// # Safety
/// `model` and `responses` must be live handles; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dgmm_agreement_json(
    model: *const DgmmModel,
    responses: *const DgmmResponses,
    out: *mut *mut c_char,
) -> DgmmStatus {
    if model.is_null() || responses.is_null() || out.is_null() {
        set_error("null argument".to_string());
        return DgmmStatus::NullArgument;
    }
    match agreement_by_level(&(*responses).inner, &(*model).inner) {
        Ok(reports) => {
            clear_error();
            return_string(report::render_agreement_json(&reports), out)
        }
        Err(e) => fail(Error::from(e)),
    }
}

/// Radar-chart SVG of the dimension profile at `level`; release with
/// [`dgmm_string_free`].
///
/// # Safety
/// `model` and `responses` must be live handles; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dgmm_dimension_chart_svg(
    model: *const DgmmModel,
    responses: *const DgmmResponses,
    level: u8,
    out: *mut *mut c_char,
) -> DgmmStatus {
    if model.is_null() || responses.is_null() || out.is_null() {
        set_error("null argument".to_string());
        return DgmmStatus::NullArgument;
    }
    match dimension_profile(
        level,
        &(*responses).inner,
        &(*model).inner,
        AggregationPolicy::Mean,
    ) {
        Ok(profile) => {
            clear_error();
            return_string(RadarChart::from_dimension_profile(&profile).render(), out)
        }
        Err(e) => fail(e.into()),
    }
}

/// Radar-chart SVG of one dimension's activities across all assessed
/// levels; release with [`dgmm_string_free`].
///
/// # Safety
/// `model` and `responses` must be live handles; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dgmm_activity_chart_svg(
    model: *const DgmmModel,
    responses: *const DgmmResponses,
    dimension_id: u8,
    out: *mut *mut c_char,
) -> DgmmStatus {
    if model.is_null() || responses.is_null() || out.is_null() {
        set_error("null argument".to_string());
        return DgmmStatus::NullArgument;
    }
    match activity_profile(
        dimension_id,
        &(*responses).inner,
        &(*model).inner,
        AggregationPolicy::Mean,
    ) {
        Ok(profile) => {
            clear_error();
            return_string(RadarChart::from_activity_profile(&profile).render(), out)
        }
        Err(e) => fail(e.into()),
    }
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a string pointer returned by this library, not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn dgmm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
