//! C interface over `xcsp3-core`.
//!
//! Instances are opaque handles. Every fallible call returns an
//! `Xcsp3Error`; the message of the last failure on the calling thread is
//! available from `xcsp3_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use xcsp3_core::constraints::{check_solution, CheckMode, Verdict};
use xcsp3_core::parser::{
    parse_instance_with, parse_solution, write_canonical, write_instantiation, ParseOptions,
    SolutionKind,
};
use xcsp3_core::solver::{self, SearchConfig, Status};
use xcsp3_core::Instance;

/// Result codes shared by all functions.
#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Xcsp3Error {
    XCSP3_OK = 0,
    XCSP3_ERR_NULL = 1,
    XCSP3_ERR_UTF8 = 2,
    XCSP3_ERR_PARSE = 3,
    XCSP3_ERR_SOLUTION = 4,
    XCSP3_ERR_SOLVE = 5,
    XCSP3_ERR_PANIC = 6,
}

/// Outcome of a solution check.
#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Xcsp3Verdict {
    XCSP3_SATISFIED = 0,
    XCSP3_VIOLATED = 1,
    XCSP3_INCOMPLETE = 2,
    XCSP3_COST_MISMATCH = 3,
}

/// Outcome of a search.
#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Xcsp3Status {
    XCSP3_SAT = 0,
    XCSP3_UNSAT = 1,
    XCSP3_OPTIMUM = 2,
    XCSP3_LIMIT = 3,
}

/// A parsed, normalized instance.
pub struct Xcsp3Instance {
    inner: Instance,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl ToString) {
    let c = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> Result<(), Xcsp3Error>) -> Xcsp3Error {
    clear_error();
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(Ok(())) => Xcsp3Error::XCSP3_OK,
        Ok(Err(e)) => e,
        Err(_) => {
            set_error("internal panic");
            Xcsp3Error::XCSP3_ERR_PANIC
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Xcsp3Error> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(Xcsp3Error::XCSP3_ERR_NULL);
    }
    CStr::from_ptr(p).to_str().map_err(|e| {
        set_error(e);
        Xcsp3Error::XCSP3_ERR_UTF8
    })
}

unsafe fn instance<'a>(p: *const Xcsp3Instance) -> Result<&'a Instance, Xcsp3Error> {
    match p.as_ref() {
        Some(h) => Ok(&h.inner),
        None => {
            set_error("null instance handle");
            Err(Xcsp3Error::XCSP3_ERR_NULL)
        }
    }
}

fn out_ptr<T>(p: *mut T) -> Result<(), Xcsp3Error> {
    if p.is_null() {
        set_error("null output pointer");
        return Err(Xcsp3Error::XCSP3_ERR_NULL);
    }
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Parses an XML document. `strict` != 0 rejects unknown elements.
/// On success `*out` receives a handle to release with `xcsp3_instance_free`.
///
/// # Safety
/// `xml` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn xcsp3_instance_parse(
    xml: *const c_char,
    strict: i32,
    out: *mut *mut Xcsp3Instance,
) -> Xcsp3Error {
    guard(|| {
        out_ptr(out)?;
        let xml = text(xml)?;
        let opts = ParseOptions { strict: strict != 0 };
        let parsed = parse_instance_with(xml, opts).map_err(|d| {
            set_error(d);
            Xcsp3Error::XCSP3_ERR_PARSE
        })?;
        *out = Box::into_raw(Box::new(Xcsp3Instance {
            inner: parsed.instance,
        }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `inst` must come from `xcsp3_instance_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn xcsp3_instance_free(inst: *mut Xcsp3Instance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of declared variables, array cells included.
///
/// # Safety
/// `inst` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn xcsp3_instance_variable_count(inst: *const Xcsp3Instance) -> usize {
    inst.as_ref().map_or(0, |h| h.inner.variables.len())
}

/// Number of constraints after group and slide expansion.
///
/// # Safety
/// `inst` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn xcsp3_instance_constraint_count(inst: *const Xcsp3Instance) -> usize {
    inst.as_ref().map_or(0, |h| h.inner.constraints.len())
}

/// Writes the canonical flat XML of the instance into `*out`.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer. The string is
/// released with `xcsp3_string_free`.
#[no_mangle]
pub unsafe extern "C" fn xcsp3_instance_canonical(
    inst: *const Xcsp3Instance,
    out: *mut *mut c_char,
) -> Xcsp3Error {
    guard(|| {
        out_ptr(out)?;
        let inst = instance(inst)?;
        *out = into_c_string(write_canonical(inst));
        Ok(())
    })
}

/// Checks an `instantiation` document against the instance.
///
/// # Safety
/// `inst` must be a live handle, `solution_xml` a NUL-terminated string and
/// `verdict` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn xcsp3_check_solution(
    inst: *const Xcsp3Instance,
    solution_xml: *const c_char,
    verdict: *mut Xcsp3Verdict,
) -> Xcsp3Error {
    guard(|| {
        out_ptr(verdict)?;
        let inst = instance(inst)?;
        let doc = parse_solution(text(solution_xml)?, inst).map_err(|d| {
            set_error(d);
            Xcsp3Error::XCSP3_ERR_PARSE
        })?;
        let v = match check_solution(inst, &doc.assignment, CheckMode::PartialAllowed, doc.cost) {
            Ok(Verdict::Satisfied { .. }) => Xcsp3Verdict::XCSP3_SATISFIED,
            Ok(Verdict::Violated(ids)) => {
                set_error(format!("violated: {}", ids.join(" ")));
                Xcsp3Verdict::XCSP3_VIOLATED
            }
            Ok(Verdict::Incomplete(ids)) => {
                set_error(format!("missing: {}", ids.join(" ")));
                Xcsp3Verdict::XCSP3_INCOMPLETE
            }
            Err(e @ xcsp3_core::constraints::SolutionError::CostMismatch { .. }) => {
                set_error(e);
                Xcsp3Verdict::XCSP3_COST_MISMATCH
            }
            Err(e) => {
                set_error(e);
                return Err(Xcsp3Error::XCSP3_ERR_SOLUTION);
            }
        };
        *verdict = v;
        Ok(())
    })
}

fn config(node_limit: u64) -> SearchConfig {
    SearchConfig {
        node_limit: (node_limit > 0).then_some(node_limit),
        ..Default::default()
    }
}

fn status(s: Status) -> Xcsp3Status {
    match s {
        Status::Sat => Xcsp3Status::XCSP3_SAT,
        Status::Unsat => Xcsp3Status::XCSP3_UNSAT,
        Status::Optimum => Xcsp3Status::XCSP3_OPTIMUM,
        Status::Limit => Xcsp3Status::XCSP3_LIMIT,
    }
}

/// Counts solutions. A `node_limit` of 0 means unlimited; when the limit is
/// hit `*status` is `XCSP3_LIMIT` and `*count` is a lower bound.
///
/// # Safety
/// `inst` must be a live handle; `count` and `status` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn xcsp3_count_solutions(
    inst: *const Xcsp3Instance,
    node_limit: u64,
    count: *mut u64,
    status: *mut Xcsp3Status,
) -> Xcsp3Error {
    guard(|| {
        out_ptr(count)?;
        out_ptr(status)?;
        let inst = instance(inst)?;
        let r = solver::count(inst, &config(node_limit)).map_err(|e| {
            set_error(e);
            Xcsp3Error::XCSP3_ERR_SOLVE
        })?;
        *count = r.count;
        *status = self::status(r.status);
        Ok(())
    })
}

/// Finds one solution, or an optimum for COP instances. When one exists,
/// `*solution_xml` receives its `instantiation` element, otherwise null.
///
/// # Safety
/// `inst` must be a live handle; `status` and `solution_xml` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn xcsp3_solve(
    inst: *const Xcsp3Instance,
    node_limit: u64,
    status: *mut Xcsp3Status,
    solution_xml: *mut *mut c_char,
) -> Xcsp3Error {
    guard(|| {
        out_ptr(status)?;
        out_ptr(solution_xml)?;
        let inst = instance(inst)?;
        let cfg = config(node_limit);
        let r = if inst.objective.is_some() {
            solver::optimize(inst, &cfg)
        } else {
            solver::solve(inst, &cfg)
        }
        .map_err(|e| {
            set_error(e);
            Xcsp3Error::XCSP3_ERR_SOLVE
        })?;
        *status = self::status(r.status);
        *solution_xml = match r.solutions.last() {
            Some(s) => {
                let kind = if r.status == Status::Optimum {
                    SolutionKind::Optimum
                } else {
                    SolutionKind::Solution
                };
                into_c_string(write_instantiation(s, kind, r.best_cost.as_ref()))
            }
            None => ptr::null_mut(),
        };
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn xcsp3_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn xcsp3_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = r#"<instance format="XCSP3" type="CSP">
  <variables> <array id="x" size="[3]"> 0..2 </array> </variables>
  <constraints> <allDifferent> x[] </allDifferent> </constraints>
</instance>"#;

    fn parse(xml: &str) -> *mut Xcsp3Instance {
        let c = CString::new(xml).unwrap();
        let mut h = ptr::null_mut();
        let rc = unsafe { xcsp3_instance_parse(c.as_ptr(), 1, &mut h) };
        assert_eq!(rc, Xcsp3Error::XCSP3_OK);
        h
    }

    #[test]
    fn parse_count_and_free() {
        let h = parse(TOY);
        unsafe {
            assert_eq!(xcsp3_instance_variable_count(h), 3);
            assert_eq!(xcsp3_instance_constraint_count(h), 1);
            let mut n = 0;
            let mut st = Xcsp3Status::XCSP3_LIMIT;
            assert_eq!(xcsp3_count_solutions(h, 0, &mut n, &mut st), Xcsp3Error::XCSP3_OK);
            assert_eq!((n, st), (6, Xcsp3Status::XCSP3_SAT));
            xcsp3_instance_free(h);
        }
    }

    #[test]
    fn parse_error_sets_message() {
        let c = CString::new("<instance format=\"XCSP3\" type=\"CSP\"><variables><var id=\"x\"> 0..10 10 </var></variables></instance>").unwrap();
        let mut h = ptr::null_mut();
        let rc = unsafe { xcsp3_instance_parse(c.as_ptr(), 1, &mut h) };
        assert_eq!(rc, Xcsp3Error::XCSP3_ERR_PARSE);
        assert!(h.is_null());
        let msg = unsafe { CStr::from_ptr(xcsp3_last_error()) }.to_str().unwrap();
        assert!(msg.starts_with("error[domain-order]"), "{msg}");
    }

    #[test]
    fn null_arguments_are_rejected() {
        let mut h = ptr::null_mut();
        assert_eq!(
            unsafe { xcsp3_instance_parse(ptr::null(), 1, &mut h) },
            Xcsp3Error::XCSP3_ERR_NULL
        );
        let mut v = Xcsp3Verdict::XCSP3_SATISFIED;
        let sol = CString::new("<instantiation/>").unwrap();
        assert_eq!(
            unsafe { xcsp3_check_solution(ptr::null(), sol.as_ptr(), &mut v) },
            Xcsp3Error::XCSP3_ERR_NULL
        );
        unsafe { xcsp3_instance_free(ptr::null_mut()) };
        unsafe { xcsp3_string_free(ptr::null_mut()) };
    }

    #[test]
    fn solve_then_check_round_trip() {
        let h = parse(TOY);
        unsafe {
            let mut st = Xcsp3Status::XCSP3_UNSAT;
            let mut xml = ptr::null_mut();
            assert_eq!(xcsp3_solve(h, 0, &mut st, &mut xml), Xcsp3Error::XCSP3_OK);
            assert_eq!(st, Xcsp3Status::XCSP3_SAT);
            assert!(!xml.is_null());
            let mut v = Xcsp3Verdict::XCSP3_VIOLATED;
            assert_eq!(xcsp3_check_solution(h, xml, &mut v), Xcsp3Error::XCSP3_OK);
            assert_eq!(v, Xcsp3Verdict::XCSP3_SATISFIED);
            xcsp3_string_free(xml);

            let bad = CString::new(
                "<instantiation type=\"solution\"><list> x[] </list><values> 0 0 1 </values></instantiation>",
            )
            .unwrap();
            assert_eq!(xcsp3_check_solution(h, bad.as_ptr(), &mut v), Xcsp3Error::XCSP3_OK);
            assert_eq!(v, Xcsp3Verdict::XCSP3_VIOLATED);

            let mut out = ptr::null_mut();
            assert_eq!(xcsp3_instance_canonical(h, &mut out), Xcsp3Error::XCSP3_OK);
            let flat = CStr::from_ptr(out).to_str().unwrap().to_owned();
            xcsp3_string_free(out);
            assert!(flat.contains("<allDifferent>"));
            xcsp3_instance_free(h);
        }
    }
}
