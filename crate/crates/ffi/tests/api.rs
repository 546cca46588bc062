use std::ffi::{CStr, CString};
use std::ptr;

use counterheads_ffi::*;

const ANBN: &str = include_str!("../../core/machines/anbn_1counter.json");
const HALVES: &str = include_str!("../../core/machines/register_halves.json");

fn load(json: &str) -> *mut ChMachine {
    let json = CString::new(json).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ch_machine_load(json.as_ptr(), &mut m) }, ChStatus::Ok);
    assert!(!m.is_null());
    m
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ch_last_error()) }.to_str().unwrap().to_string()
}

fn run(m: *const ChMachine, input: &str, limit: u64) -> (ChStatus, ChRunSummary) {
    let input = CString::new(input).unwrap();
    let mut out = ChRunSummary { verdict: ChVerdict::Fault, steps: 0, max_counter: 0 };
    let status = unsafe { ch_run(m, input.as_ptr(), limit, &mut out) };
    (status, out)
}

#[test]
fn load_run_free() {
    let m = load(ANBN);
    let (s, r) = run(m, "aabb", 1000);
    assert_eq!((s, r.verdict, r.max_counter), (ChStatus::Ok, ChVerdict::Accept, 2));
    assert_eq!(run(m, "aab", 1000).1.verdict, ChVerdict::Reject);
    assert_eq!(run(m, "aabb", 1).1.verdict, ChVerdict::Timeout);
    let (s, _) = run(m, "abc", 1000);
    assert_eq!(s, ChStatus::BadInput);
    assert!(last_error().contains("alphabet"));
    unsafe { ch_machine_free(m) };
}

#[test]
fn register_machines_take_numbers() {
    let m = load(HALVES);
    assert_eq!(run(m, "12", 1000).1.verdict, ChVerdict::Accept);
    assert_eq!(run(m, "x", 1000).0, ChStatus::InvalidArgument);
    unsafe { ch_machine_free(m) };
}

#[test]
fn bad_machines_are_parse_errors() {
    let mut m = ptr::null_mut();
    let json = CString::new(r#"{"kind":"counter","states":["s"],"start":"q","counters":0}"#).unwrap();
    assert_eq!(unsafe { ch_machine_load(json.as_ptr(), &mut m) }, ChStatus::Parse);
    assert!(m.is_null());
    assert!(last_error().contains("start"));
    assert_eq!(unsafe { ch_machine_load(ptr::null(), &mut m) }, ChStatus::NullPointer);
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { ch_machine_load(bad.as_ptr().cast(), &mut m) }, ChStatus::InvalidUtf8);
    unsafe { ch_machine_free(ptr::null_mut()) };
}

#[test]
fn json_outputs_are_owned_strings() {
    let m = load(ANBN);
    let input = CString::new("ab").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ch_run_json(m, input.as_ptr(), 100, &mut s) }, ChStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    assert_eq!(v["verdict"], "accept");
    unsafe { ch_string_free(s) };
    unsafe { ch_machine_free(m) };

    let bound = CString::new("ab,c").unwrap();
    let input = CString::new("ababc").unwrap();
    assert_eq!(unsafe { ch_encode_json(bound.as_ptr(), input.as_ptr(), &mut s) }, ChStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    assert_eq!(v["items"][0]["run"]["count"], 2);
    unsafe { ch_string_free(s) };
    let input = CString::new("cab").unwrap();
    assert_eq!(unsafe { ch_encode_json(bound.as_ptr(), input.as_ptr(), &mut s) }, ChStatus::BadInput);
    assert!(s.is_null());
}
