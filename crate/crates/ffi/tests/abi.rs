use std::ffi::{CStr, CString};
use std::ptr;

use matchlab_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(matchlab_last_error()) }.to_str().unwrap().to_string()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    matchlab_string_free(s);
    out
}

unsafe fn motivating() -> (*mut MatchlabBundle, *mut MatchlabEconomy) {
    let mut bundle = ptr::null_mut();
    assert_eq!(matchlab_bundle_motivating(&mut bundle), MatchlabStatus::Ok);
    let mut economy = ptr::null_mut();
    assert_eq!(matchlab_bundle_economy(bundle, &mut economy), MatchlabStatus::Ok);
    (bundle, economy)
}

#[test]
fn economy_round_trips_through_json() {
    unsafe {
        let (bundle, economy) = motivating();
        let mut json = ptr::null_mut();
        assert_eq!(matchlab_economy_to_json(economy, &mut json), MatchlabStatus::Ok);
        let text = take(json);
        let c = CString::new(text.clone()).unwrap();
        let mut again = ptr::null_mut();
        assert_eq!(matchlab_economy_from_json(c.as_ptr(), &mut again), MatchlabStatus::Ok);
        let mut json2 = ptr::null_mut();
        assert_eq!(matchlab_economy_to_json(again, &mut json2), MatchlabStatus::Ok);
        assert_eq!(take(json2), text);

        let (mut m, mut n, mut s) = (0, 0, 0);
        assert_eq!(matchlab_economy_dimensions(again, &mut m, &mut n, &mut s), MatchlabStatus::Ok);
        assert_eq!((m, n, s), (3, 3, 2));
        matchlab_economy_free(again);
        matchlab_economy_free(economy);
        matchlab_bundle_free(bundle);
    }
}

#[test]
fn play_and_expected_utility_for_lambda1() {
    unsafe {
        let (bundle, economy) = motivating();
        let name = CString::new("lambda1").unwrap();
        let mut profile = ptr::null_mut();
        assert_eq!(matchlab_bundle_profile(bundle, name.as_ptr(), &mut profile), MatchlabStatus::Ok);

        let mut partners = [0usize; 6];
        assert_eq!(matchlab_play(economy, profile, partners.as_mut_ptr(), 6), MatchlabStatus::Ok);
        for p in partners {
            assert!(p < 3 || p == MATCHLAB_UNMATCHED);
        }
        assert_eq!(matchlab_play(economy, profile, partners.as_mut_ptr(), 5), MatchlabStatus::BufferTooSmall);

        let (mut num, mut den) = (0i64, 0i64);
        assert_eq!(matchlab_expected_utility(economy, profile, 0, &mut num, &mut den), MatchlabStatus::Ok);
        assert!(den > 0);
        assert_eq!(matchlab_expected_utility(economy, profile, 9, &mut num, &mut den), MatchlabStatus::Invalid);
        assert!(last_error().contains("out of range"));

        let mut bne = false;
        assert_eq!(matchlab_is_bne(economy, profile, MatchlabClass::Full, &mut bne), MatchlabStatus::Ok);
        assert!(bne);

        let mut json = ptr::null_mut();
        assert_eq!(matchlab_profile_to_json(economy, profile, &mut json), MatchlabStatus::Ok);
        let text = CString::new(take(json)).unwrap();
        let mut again = ptr::null_mut();
        assert_eq!(matchlab_profile_from_json(economy, text.as_ptr(), &mut again), MatchlabStatus::Ok);
        let mut again_parts = [0usize; 6];
        matchlab_play(economy, again, again_parts.as_mut_ptr(), 6);
        assert_eq!(again_parts, partners);

        matchlab_profile_free(again);
        matchlab_profile_free(profile);
        matchlab_economy_free(economy);
        matchlab_bundle_free(bundle);
    }
}

#[test]
fn enumeration_finds_four_outcomes() {
    unsafe {
        let (bundle, economy) = motivating();
        let mut groups = 0usize;
        let mut json = ptr::null_mut();
        assert_eq!(
            matchlab_enumerate_bne(economy, MatchlabClass::Full, true, 0, &mut groups, &mut json),
            MatchlabStatus::Ok
        );
        assert_eq!(groups, 4);
        assert!(take(json).contains("\"profiles_swept\": \"125\""));

        let mut json = ptr::null_mut();
        assert_eq!(
            matchlab_enumerate_bne(economy, MatchlabClass::Full, false, 10, ptr::null_mut(), &mut json),
            MatchlabStatus::BudgetExceeded
        );
        assert!(json.is_null());
        assert!(!last_error().is_empty());
        matchlab_economy_free(economy);
        matchlab_bundle_free(bundle);
    }
}

#[test]
fn constructions_and_checks() {
    unsafe {
        let mut bundle = ptr::null_mut();
        assert_eq!(matchlab_bundle_example2(2, &mut bundle), MatchlabStatus::Invalid);
        assert!(bundle.is_null());
        assert_eq!(matchlab_bundle_prop4(4, 3, &mut bundle), MatchlabStatus::Invalid);

        assert_eq!(matchlab_bundle_prop4(4, 1, &mut bundle), MatchlabStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(matchlab_bundle_manifest(bundle, &mut json), MatchlabStatus::Ok);
        let manifest = take(json);
        assert!(manifest.contains("\"original\": \"original.json\""));
        assert!(manifest.contains("profile-candidate.json"));
        matchlab_bundle_free(bundle);

        let (bundle, economy) = motivating();
        let mut holds = true;
        assert_eq!(matchlab_check_spc_star(economy, &mut holds), MatchlabStatus::Ok);
        let mut truthful = ptr::null_mut();
        assert_eq!(matchlab_profile_truthful(economy, &mut truthful), MatchlabStatus::Ok);
        let mut bne = false;
        assert_eq!(matchlab_is_bne(economy, truthful, MatchlabClass::Truthful, &mut bne), MatchlabStatus::Ok);
        assert!(bne);
        matchlab_profile_free(truthful);
        matchlab_economy_free(economy);
        matchlab_bundle_free(bundle);
    }
}

#[test]
fn bad_inputs_report_status_and_message() {
    unsafe {
        let mut economy = ptr::null_mut();
        assert_eq!(matchlab_economy_from_json(ptr::null(), &mut economy), MatchlabStatus::NullArgument);
        assert!(last_error().contains("json"));

        let bad = CString::new("{\"format_version\": 1}").unwrap();
        assert_eq!(matchlab_economy_from_json(bad.as_ptr(), &mut economy), MatchlabStatus::Invalid);
        assert!(economy.is_null());
        assert!(!last_error().is_empty());

        let invalid_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(
            matchlab_economy_from_json(invalid_utf8.as_ptr().cast(), &mut economy),
            MatchlabStatus::InvalidUtf8
        );

        assert_eq!(matchlab_economy_to_json(ptr::null(), ptr::null_mut()), MatchlabStatus::NullArgument);

        let (bundle, e) = motivating();
        assert_eq!(matchlab_economy_to_json(e, &mut ptr::null_mut()), MatchlabStatus::Ok);
        assert!(last_error().is_empty());
        let missing = CString::new("nope").unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(matchlab_bundle_profile(bundle, missing.as_ptr(), &mut p), MatchlabStatus::Invalid);

        matchlab_economy_free(ptr::null_mut());
        matchlab_profile_free(ptr::null_mut());
        matchlab_bundle_free(ptr::null_mut());
        matchlab_string_free(ptr::null_mut());
        matchlab_economy_free(e);
        matchlab_bundle_free(bundle);
    }
}

#[test]
fn profile_from_another_economy_is_rejected() {
    unsafe {
        let (bundle, small) = motivating();
        let mut big_bundle = ptr::null_mut();
        assert_eq!(matchlab_bundle_example2(4, &mut big_bundle), MatchlabStatus::Ok);
        let mut big = ptr::null_mut();
        matchlab_bundle_economy(big_bundle, &mut big);
        let mut profile = ptr::null_mut();
        matchlab_profile_truthful(big, &mut profile);
        let mut bne = false;
        assert_eq!(matchlab_is_bne(small, profile, MatchlabClass::Full, &mut bne), MatchlabStatus::Invalid);
        matchlab_profile_free(profile);
        matchlab_economy_free(big);
        matchlab_economy_free(small);
        matchlab_bundle_free(big_bundle);
        matchlab_bundle_free(bundle);
    }
}

#[test]
fn header_declares_every_function() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/matchlab.h")).unwrap();
    for f in [
        "matchlab_last_error",
        "matchlab_economy_from_json",
        "matchlab_play",
        "matchlab_enumerate_bne",
        "matchlab_bundle_prop4",
        "MATCHLAB_UNMATCHED",
        "MATCHLAB_STATUS_BUDGET_EXCEEDED",
    ] {
        assert!(header.contains(f), "{f} missing from header");
    }
}
