//! C interface to `submatroid`.
//!
//! Instances live behind an opaque [`SmInstance`] handle. Every call returns
//! an [`SmStatus`]; on failure a description is available from
//! [`sm_last_error_message`] on the same thread. Strings handed out by the
//! library are NUL-terminated JSON and must be released with
//! [`sm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use submatroid::error::Error;
use submatroid::exact::{enumeration_cap, PermutationMode, VerifyOptions};
use submatroid::format::{emit_instance, parse_instance};
use submatroid::greedy::{Algorithm, GreedyConfig, TiePolicy};
use submatroid::instance::Instance;
use submatroid::instances::{
    gen_random, gen_tight_general, gen_tight_partition, MatroidShape, RandomShape, TightGeneralParams,
    TightPartitionParams,
};
use submatroid::report::{solve_report, verify_report, ValidationOutput};
use submatroid::tolerance::Tolerance;
use submatroid::validate::{validate_oracles, ValidationConfig};

/// Result of every call. Values 1 to 3 match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmStatus {
    Ok = 0,
    /// Verification ran and a bound was violated; the report is still returned.
    BoundViolated = 1,
    InvalidArgument = 2,
    CapExceeded = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    ParseError = 6,
    /// An oracle broke an axiom.
    ValidationFailed = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmAlgorithm {
    Greedy = 0,
    GreedyM = 1,
    GreedyOn = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmMatroidShape {
    Uniform = 0,
    Partition = 1,
    Explicit = 2,
}

/// Options for [`sm_solve`] and [`sm_verify`]. Start from
/// [`sm_options_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SmOptions {
    pub algorithm: SmAlgorithm,
    /// `lowest`, `highest` or `prefer:...`; null means `lowest`.
    pub tie_policy: *const c_char,
    /// Relative comparison tolerance.
    pub tolerance: f64,
    /// Arrival order for the online algorithm; null for the identity.
    pub arrival: *const usize,
    pub arrival_len: usize,
    /// Number of sampled arrival orders for online verification; 0 sweeps all.
    pub sample: usize,
    pub seed: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SmInstanceSummary {
    pub elements: usize,
    pub rank: usize,
    /// Zero unless the instance is a welfare (user × resource) instance.
    pub users: usize,
    pub resources: usize,
}

/// Opaque instance handle.
pub struct SmInstance {
    inner: Instance,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(SmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::CapExceeded { .. } => SmStatus::CapExceeded,
            Error::Parse { .. } => SmStatus::ParseError,
            Error::Validation(_) | Error::MatroidAxiom(_) => SmStatus::ValidationFailed,
            Error::RankInconsistency { .. } | Error::Io { .. } => SmStatus::Internal,
            _ => SmStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: SmStatus, msg: &str) -> Failure {
    Failure(status, msg.to_string())
}

/// Runs `f`, turning errors and panics into a status and the thread's last
/// error message.
fn guard(f: impl FnOnce() -> Result<SmStatus, Failure>) -> SmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SmStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(SmStatus::NullPointer, &format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(SmStatus::InvalidUtf8, &format!("{what} is not valid UTF-8")))
}

unsafe fn instance_arg<'a>(p: *const SmInstance) -> Result<&'a Instance, Failure> {
    p.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| fail(SmStatus::NullPointer, "instance is null"))
}

unsafe fn put_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    let s = CString::new(text).map_err(|_| fail(SmStatus::Internal, "output contains NUL"))?;
    *out = s.into_raw();
    Ok(())
}

unsafe fn put_instance(out: *mut *mut SmInstance, make: impl FnOnce() -> Result<Instance, Error>) -> SmStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(SmStatus::NullPointer, "out is null"));
        }
        *out = ptr::null_mut();
        let inner = make()?;
        *out = Box::into_raw(Box::new(SmInstance { inner }));
        Ok(SmStatus::Ok)
    })
}

fn algorithm(a: SmAlgorithm) -> Algorithm {
    match a {
        SmAlgorithm::Greedy => Algorithm::Greedy,
        SmAlgorithm::GreedyM => Algorithm::GreedyM,
        SmAlgorithm::GreedyOn => Algorithm::GreedyOn,
    }
}

unsafe fn greedy_config(opts: &SmOptions, instance: &Instance) -> Result<GreedyConfig, Failure> {
    let tie_policy = if opts.tie_policy.is_null() {
        TiePolicy::default()
    } else {
        TiePolicy::parse(str_arg(opts.tie_policy, "tie_policy")?, instance.ground())?
    };
    if !opts.tolerance.is_finite() || opts.tolerance < 0.0 {
        return Err(fail(
            SmStatus::InvalidArgument,
            "tolerance must be finite and non-negative",
        ));
    }
    Ok(GreedyConfig {
        tie_policy,
        tolerance: Tolerance::new(opts.tolerance),
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failed call on this thread, or null. The
/// pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn sm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn sm_options_default() -> SmOptions {
    SmOptions {
        algorithm: SmAlgorithm::Greedy,
        tie_policy: ptr::null(),
        tolerance: Tolerance::default().relative,
        arrival: ptr::null(),
        arrival_len: 0,
        sample: 0,
        seed: 0,
    }
}

/// Parses instance JSON. With `strict`, explicit matroid families must
/// satisfy the axioms.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_instance_from_json(
    json: *const c_char,
    strict: bool,
    out: *mut *mut SmInstance,
) -> SmStatus {
    let text = match str_arg(json, "json") {
        Ok(t) => t,
        Err(Failure(status, msg)) => {
            set_error(msg);
            return status;
        }
    };
    put_instance(out, || parse_instance(text, "<json>", strict))
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_instance_tight_partition(
    c: f64,
    d: f64,
    epsilon: f64,
    resources: usize,
    out: *mut *mut SmInstance,
) -> SmStatus {
    put_instance(out, || {
        gen_tight_partition(&TightPartitionParams {
            c,
            d,
            epsilon,
            resources,
        })
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_instance_tight_general(c: f64, d: f64, rank: usize, out: *mut *mut SmInstance) -> SmStatus {
    put_instance(out, || gen_tight_general(&TightGeneralParams { c, d, rank }))
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_instance_random(
    seed: u64,
    elements: usize,
    matroid: SmMatroidShape,
    out: *mut *mut SmInstance,
) -> SmStatus {
    let matroid = match matroid {
        SmMatroidShape::Uniform => MatroidShape::Uniform,
        SmMatroidShape::Partition => MatroidShape::Partition,
        SmMatroidShape::Explicit => MatroidShape::Explicit,
    };
    put_instance(out, || gen_random(seed, &RandomShape::Tabular { elements, matroid }))
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_instance_random_partition(
    seed: u64,
    users: usize,
    resources: usize,
    out: *mut *mut SmInstance,
) -> SmStatus {
    put_instance(out, || gen_random(seed, &RandomShape::Partition { users, resources }))
}

/// Releases an instance. Null is ignored.
///
/// # Safety
/// `instance` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sm_instance_free(instance: *mut SmInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// # Safety
/// `instance` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sm_instance_summary(instance: *const SmInstance, out: *mut SmInstanceSummary) -> SmStatus {
    guard(|| {
        let inst = instance_arg(instance)?;
        let out = out.as_mut().ok_or_else(|| fail(SmStatus::NullPointer, "out is null"))?;
        let view = inst.partition_view();
        *out = SmInstanceSummary {
            elements: inst.ground().size(),
            rank: inst.rank(),
            users: view.map_or(0, |v| v.users),
            resources: view.map_or(0, |v| v.resources),
        };
        Ok(SmStatus::Ok)
    })
}

/// Serialises the instance in the file format.
///
/// # Safety
/// `instance` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sm_instance_to_json(instance: *const SmInstance, out: *mut *mut c_char) -> SmStatus {
    guard(|| {
        let inst = instance_arg(instance)?;
        if out.is_null() {
            return Err(fail(SmStatus::NullPointer, "out is null"));
        }
        put_string(out, emit_instance(inst))?;
        Ok(SmStatus::Ok)
    })
}

/// Runs an algorithm and writes the JSON run report to `out`.
///
/// # Safety
/// `instance`, `options` and `out` must be valid pointers; `options.arrival`
/// must point to `arrival_len` elements when non-null.
#[no_mangle]
pub unsafe extern "C" fn sm_solve(
    instance: *const SmInstance,
    options: *const SmOptions,
    out: *mut *mut c_char,
) -> SmStatus {
    guard(|| {
        let inst = instance_arg(instance)?;
        let opts = options
            .as_ref()
            .ok_or_else(|| fail(SmStatus::NullPointer, "options is null"))?;
        if out.is_null() {
            return Err(fail(SmStatus::NullPointer, "out is null"));
        }
        let cfg = greedy_config(opts, inst)?;
        let arrival = (!opts.arrival.is_null()).then(|| std::slice::from_raw_parts(opts.arrival, opts.arrival_len));
        let report = solve_report(inst, algorithm(opts.algorithm), arrival, &cfg)?;
        put_string(out, submatroid::format::to_json(&report))?;
        Ok(SmStatus::Ok)
    })
}

/// Verifies an algorithm against the exact optimum and writes the JSON
/// report to `out`. Returns [`SmStatus::BoundViolated`] with the report when
/// a bound fails.
///
/// # Safety
/// `instance`, `options` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sm_verify(
    instance: *const SmInstance,
    options: *const SmOptions,
    out: *mut *mut c_char,
) -> SmStatus {
    guard(|| {
        let inst = instance_arg(instance)?;
        let opts = options
            .as_ref()
            .ok_or_else(|| fail(SmStatus::NullPointer, "options is null"))?;
        if out.is_null() {
            return Err(fail(SmStatus::NullPointer, "out is null"));
        }
        let permutations = match opts.sample {
            0 => PermutationMode::All,
            count => PermutationMode::Sampled { count, seed: opts.seed },
        };
        let verify = VerifyOptions {
            greedy: greedy_config(opts, inst)?,
            permutations,
            cap: enumeration_cap(),
        };
        let report = verify_report(inst, algorithm(opts.algorithm), &verify)?;
        let passed = report.passed();
        put_string(out, submatroid::format::to_json(&report))?;
        Ok(if passed { SmStatus::Ok } else { SmStatus::BoundViolated })
    })
}

/// Checks the oracles against the axioms and writes the JSON report to
/// `out`. Returns [`SmStatus::ValidationFailed`] with the report when any
/// axiom fails.
///
/// # Safety
/// `instance` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sm_validate(instance: *const SmInstance, out: *mut *mut c_char) -> SmStatus {
    guard(|| {
        let inst = instance_arg(instance)?;
        if out.is_null() {
            return Err(fail(SmStatus::NullPointer, "out is null"));
        }
        let report = validate_oracles(inst.valuation(), inst.matroid(), &ValidationConfig::default());
        let output = ValidationOutput::from(report);
        let passed = output.passed;
        put_string(out, submatroid::format::to_json(&output))?;
        Ok(if passed {
            SmStatus::Ok
        } else {
            SmStatus::ValidationFailed
        })
    })
}
