//! Exercises the C ABI through the exported symbols: handle lifecycle,
//! status codes, error messages, and report output.

use dgmm_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn last_error() -> String {
    let ptr = dgmm_last_error_message();
    assert!(!ptr.is_null(), "expected an error message");
    CStr::from_ptr(ptr).to_string_lossy().into_owned()
}

unsafe fn take_string(ptr: *mut libc::c_char) -> String {
    assert!(!ptr.is_null());
    let text = CStr::from_ptr(ptr).to_string_lossy().into_owned();
    dgmm_string_free(ptr);
    text
}

fn full_csv(value: u8, respondents: &[&str]) -> CString {
    let model = dgmm_core::model::MaturityModel::builtin();
    let mut out = String::from("respondent,statement_id,rating\n");
    for statement in &model.statements {
        for respondent in respondents {
            out.push_str(&format!(
                "{respondent},S.{}.{}.{},{value}\n",
                statement.level, statement.aid, statement.ordinal
            ));
        }
    }
    cstr(&out)
}

#[test]
fn version_is_exposed() {
    let ptr = dgmm_version();
    let version = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn builtin_model_lifecycle() {
    unsafe {
        let mut model = ptr::null_mut();
        assert_eq!(dgmm_model_builtin(&mut model), DgmmStatus::Ok);
        assert!(!model.is_null());
        assert_eq!(dgmm_model_statement_count(model), 243);
        assert_eq!(dgmm_model_level_count(model), 5);

        let mut json = ptr::null_mut();
        assert_eq!(dgmm_model_to_json(model, &mut json), DgmmStatus::Ok);
        let text = take_string(json);
        assert!(text.contains("\"Digital Game Maturity Model\""));

        // serialized model loads back
        let json_arg = cstr(&text);
        let mut reloaded = ptr::null_mut();
        assert_eq!(
            dgmm_model_from_json(json_arg.as_ptr(), &mut reloaded),
            DgmmStatus::Ok
        );
        assert_eq!(dgmm_model_statement_count(reloaded), 243);
        dgmm_model_free(reloaded);
        dgmm_model_free(model);
    }
}

#[test]
fn invalid_model_reports_violations() {
    unsafe {
        let bad = cstr(r#"{"name":"x","levels":[],"dimensions":[],"activities":[],"statements":[]}"#);
        let mut model = ptr::null_mut();
        assert_eq!(
            dgmm_model_from_json(bad.as_ptr(), &mut model),
            DgmmStatus::ValidationError
        );
        assert!(last_error().contains("no levels"));

        let garbage = cstr("not json");
        assert_eq!(
            dgmm_model_from_json(garbage.as_ptr(), &mut model),
            DgmmStatus::ParseError
        );
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        assert_eq!(
            dgmm_model_builtin(ptr::null_mut()),
            DgmmStatus::NullArgument
        );
        let mut model = ptr::null_mut();
        assert_eq!(
            dgmm_model_from_json(ptr::null(), &mut model),
            DgmmStatus::NullArgument
        );
        assert_eq!(dgmm_model_statement_count(ptr::null()), 0);
        dgmm_model_free(ptr::null_mut());
        dgmm_responses_free(ptr::null_mut());
        dgmm_string_free(ptr::null_mut());
    }
}

#[test]
fn assess_over_the_c_surface() {
    unsafe {
        let mut model = ptr::null_mut();
        assert_eq!(dgmm_model_builtin(&mut model), DgmmStatus::Ok);

        let csv = full_csv(4, &["a", "b"]);
        let organization = cstr("C Org");
        let mut responses = ptr::null_mut();
        assert_eq!(
            dgmm_responses_from_csv(model, csv.as_ptr(), organization.as_ptr(), 0, &mut responses),
            DgmmStatus::Ok
        );
        assert_eq!(dgmm_responses_respondent_count(responses), 2);

        let mut level = 0u8;
        assert_eq!(
            dgmm_maturity_level(model, responses, DgmmAggregation::MedianLow, &mut level),
            DgmmStatus::Ok
        );
        assert_eq!(level, 5);

        let mut out = ptr::null_mut();
        assert_eq!(
            dgmm_assess_json(model, responses, DgmmAggregation::MedianLow, &mut out),
            DgmmStatus::Ok
        );
        let json = take_string(out);
        assert!(json.contains("\"gml\": 5"));
        assert!(json.contains("\"organization\": \"C Org\""));

        let mut md = ptr::null_mut();
        assert_eq!(
            dgmm_assess_markdown(model, responses, DgmmAggregation::MedianLow, &mut md),
            DgmmStatus::Ok
        );
        assert!(take_string(md).contains("Maturity level: 5 (Optimized)"));

        let mut agreement = ptr::null_mut();
        assert_eq!(
            dgmm_agreement_json(model, responses, &mut agreement),
            DgmmStatus::Ok
        );
        assert!(take_string(agreement).contains("\"fleiss_kappa\""));

        let mut svg = ptr::null_mut();
        assert_eq!(
            dgmm_dimension_chart_svg(model, responses, 5, &mut svg),
            DgmmStatus::Ok
        );
        assert!(take_string(svg).starts_with("<?xml"));

        let mut activity_svg = ptr::null_mut();
        assert_eq!(
            dgmm_activity_chart_svg(model, responses, 1, &mut activity_svg),
            DgmmStatus::Ok
        );
        assert!(take_string(activity_svg).contains("Risk_Mgmt"));

        dgmm_responses_free(responses);
        dgmm_model_free(model);
    }
}

#[test]
fn csv_errors_surface_with_status_and_message() {
    unsafe {
        let mut model = ptr::null_mut();
        assert_eq!(dgmm_model_builtin(&mut model), DgmmStatus::Ok);

        let bad = cstr("respondent,statement_id,rating\nr1,S.1.1.1,9\n");
        let organization = cstr("x");
        let mut responses = ptr::null_mut();
        assert_eq!(
            dgmm_responses_from_csv(model, bad.as_ptr(), organization.as_ptr(), 0, &mut responses),
            DgmmStatus::ValidationError
        );
        assert!(last_error().contains("rating out of range"));

        let garbage = cstr("not,a,table");
        assert_eq!(
            dgmm_responses_from_csv(
                model,
                garbage.as_ptr(),
                organization.as_ptr(),
                0,
                &mut responses
            ),
            DgmmStatus::ParseError
        );

        dgmm_model_free(model);
    }
}

#[test]
fn agreement_requires_two_raters() {
    unsafe {
        let mut model = ptr::null_mut();
        assert_eq!(dgmm_model_builtin(&mut model), DgmmStatus::Ok);
        let csv = full_csv(3, &["solo"]);
        let organization = cstr("x");
        let mut responses = ptr::null_mut();
        assert_eq!(
            dgmm_responses_from_csv(model, csv.as_ptr(), organization.as_ptr(), 0, &mut responses),
            DgmmStatus::Ok
        );
        let mut out = ptr::null_mut();
        assert_eq!(
            dgmm_agreement_json(model, responses, &mut out),
            DgmmStatus::ComputationError
        );
        assert!(last_error().contains("agreement undefined"));
        dgmm_responses_free(responses);
        dgmm_model_free(model);
    }
}

#[test]
fn json_responses_over_the_c_surface() {
    unsafe {
        let mut model = ptr::null_mut();
        assert_eq!(dgmm_model_builtin(&mut model), DgmmStatus::Ok);

        // level-1-only structured file
        let core_model = dgmm_core::model::MaturityModel::builtin();
        let mut responses_obj = String::new();
        for (i, statement) in core_model.statements_at(1).iter().enumerate() {
            if i > 0 {
                responses_obj.push(',');
            }
            responses_obj.push_str(&format!(
                "\"S.1.{}.{}\":3",
                statement.aid, statement.ordinal
            ));
        }
        let json = cstr(&format!(
            r#"{{"organization":"J Org","model_name":"Digital Game Maturity Model","max_level":1,"responses":{{"r1":{{{responses_obj}}},"r2":{{{responses_obj}}}}}}}"#
        ));
        let mut responses = ptr::null_mut();
        assert_eq!(
            dgmm_responses_from_json(model, json.as_ptr(), &mut responses),
            DgmmStatus::Ok
        );
        let mut level = 0u8;
        assert_eq!(
            dgmm_maturity_level(model, responses, DgmmAggregation::Mean, &mut level),
            DgmmStatus::Ok
        );
        assert_eq!(level, 1);
        dgmm_responses_free(responses);
        dgmm_model_free(model);
    }
}
