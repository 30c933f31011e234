//! C ABI over `dawk`.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Every fallible call returns a [`DawkStatus`]; on failure the message is
//! available from [`dawk_last_error`] on the same thread. Strings handed
//! out by the library are NUL-terminated UTF-8 and must be released with
//! [`dawk_string_free`]. Structured results are JSON (the `dawk-report/1`
//! schema for reports).

use dawk::error::Error;
use dawk::presentations::{presentation_of, verify_canonical, Kind, Presentation};
use dawk::report::{Check, Report, Status};
use dawk::rewriting::{self, Budget, LemmaLibrary, Outcome};
use dawk::root_system::load_catalog_gated;
use dawk::suite::{self, Samples};
use dawk::weyl::{DAWElement, DoubleAffineWeyl};
use dawk::word::Word;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DawkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    UnknownType = 3,
    UnknownGenerator = 4,
    ParseError = 5,
    NotInGroup = 6,
    MismatchedType = 7,
    Unsupported = 8,
    BadDerivation = 9,
    /// Any other library error.
    Failed = 10,
    /// A panic was caught at the boundary.
    Internal = 11,
}

/// A double affine Weyl group of one affine type.
pub struct DawkGroup {
    group: DoubleAffineWeyl,
}

/// An element in normal form, tied to the rank of the group that made it.
pub struct DawkElement {
    element: DAWElement,
}

/// A group presentation.
pub struct DawkPresentation {
    presentation: Presentation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> DawkStatus {
    match e {
        Error::UnknownType(_) | Error::ExcludedType { .. } => DawkStatus::UnknownType,
        Error::UnknownGenerator(_) => DawkStatus::UnknownGenerator,
        Error::Parse(_) => DawkStatus::ParseError,
        Error::NotInGroup(_)
        | Error::NotInLattice
        | Error::NotAffine
        | Error::NotARoot
        | Error::IsotropicRoot => DawkStatus::NotInGroup,
        Error::MismatchedType => DawkStatus::MismatchedType,
        Error::UnsupportedKind { .. } => DawkStatus::Unsupported,
        Error::BadStep { .. } => DawkStatus::BadDerivation,
        Error::Io(_) => DawkStatus::Failed,
    }
}

struct Fail(DawkStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> DawkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            DawkStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            DawkStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(DawkStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(DawkStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(DawkStatus::NullPointer, format!("{name} is null")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(
            DawkStatus::NullPointer,
            "output pointer is null".into(),
        ));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(
            DawkStatus::NullPointer,
            "output pointer is null".into(),
        ));
    }
    let c =
        CString::new(s).map_err(|_| Fail(DawkStatus::Internal, "string contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put_report(
    out_json: *mut *mut c_char,
    out_passed: *mut bool,
    rep: &Report,
) -> Result<(), Fail> {
    if !out_passed.is_null() {
        *out_passed = rep.passed();
    }
    put_string(out_json, rep.to_json())
}

fn same_rank(g: &DawkGroup, e: &DawkElement) -> Result<(), Fail> {
    if e.element.rank() != g.group.rank() {
        return Err(Fail(
            DawkStatus::MismatchedType,
            "element belongs to a group of another rank".into(),
        ));
    }
    Ok(())
}

/// Library version, as a static string (do not free).
#[no_mangle]
pub extern "C" fn dawk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last failed call on this thread, or null. Free with
/// [`dawk_string_free`].
#[no_mangle]
pub extern "C" fn dawk_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(m) => CString::new(m.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dawk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates the group of a catalog type such as `"A2~1"`.
///
/// # Safety
/// `type_id` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dawk_group_new(
    type_id: *const c_char,
    out: *mut *mut DawkGroup,
) -> DawkStatus {
    guard(|| {
        let t = str_arg(type_id, "type_id")?;
        put(
            out,
            DawkGroup {
                group: DoubleAffineWeyl::new(load_catalog_gated(t)?),
            },
        )
    })
}

/// # Safety
/// `g` must come from [`dawk_group_new`] (or be null).
#[no_mangle]
pub unsafe extern "C" fn dawk_group_free(g: *mut DawkGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Rank of the finite part, or 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn dawk_group_rank(g: *const DawkGroup) -> usize {
    g.as_ref().map_or(0, |g| g.group.rank())
}

/// Evaluates a word such as `"s01 s02 s03 s1 s2 s1"` (`tau` and inverses allowed).
///
/// # Safety
/// Pointers must be valid; `word` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn dawk_element_from_word(
    g: *const DawkGroup,
    word: *const c_char,
    out: *mut *mut DawkElement,
) -> DawkStatus {
    guard(|| {
        let g = ref_arg(g, "group")?;
        let w = Word::parse(str_arg(word, "word")?)?;
        put(
            out,
            DawkElement {
                element: g.group.word_eval(&w)?,
            },
        )
    })
}

/// `out = a * b`.
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dawk_element_multiply(
    g: *const DawkGroup,
    a: *const DawkElement,
    b: *const DawkElement,
    out: *mut *mut DawkElement,
) -> DawkStatus {
    guard(|| {
        let (g, a, b) = (ref_arg(g, "group")?, ref_arg(a, "a")?, ref_arg(b, "b")?);
        same_rank(g, a)?;
        same_rank(g, b)?;
        put(
            out,
            DawkElement {
                element: g.group.multiply(&a.element, &b.element)?,
            },
        )
    })
}

/// `out = a^-1`.
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dawk_element_inverse(
    g: *const DawkGroup,
    a: *const DawkElement,
    out: *mut *mut DawkElement,
) -> DawkStatus {
    guard(|| {
        let (g, a) = (ref_arg(g, "group")?, ref_arg(a, "a")?);
        same_rank(g, a)?;
        put(
            out,
            DawkElement {
                element: g.group.inverse(&a.element),
            },
        )
    })
}

/// 1 if the element is the identity, 0 if not, -1 for a null handle.
///
/// # Safety
/// `e` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn dawk_element_is_identity(e: *const DawkElement) -> i32 {
    e.as_ref().map_or(-1, |e| e.element.is_identity() as i32)
}

/// 1 if equal, 0 if not, -1 if either handle is null.
///
/// # Safety
/// Handles must be live or null.
#[no_mangle]
pub unsafe extern "C" fn dawk_element_equal(a: *const DawkElement, b: *const DawkElement) -> i32 {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => (a.element == b.element) as i32,
        _ => -1,
    }
}

/// Normal form as JSON `{"w", "mu", "beta", "c"}`.
///
/// # Safety
/// `e` must be live; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn dawk_element_to_json(
    e: *const DawkElement,
    out_json: *mut *mut c_char,
) -> DawkStatus {
    guard(|| {
        let e = ref_arg(e, "element")?;
        put_string(
            out_json,
            serde_json::to_string(&e.element)
                .map_err(|x| Fail(DawkStatus::Internal, x.to_string()))?,
        )
    })
}

/// The matrix `rho(e)` on `V` as JSON rows of rational strings.
///
/// # Safety
/// Handles must be live; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn dawk_element_rho_json(
    g: *const DawkGroup,
    e: *const DawkElement,
    out_json: *mut *mut c_char,
) -> DawkStatus {
    guard(|| {
        let (g, e) = (ref_arg(g, "group")?, ref_arg(e, "element")?);
        same_rank(g, e)?;
        let rows = g.group.rho(&e.element).matrix().to_string_rows();
        put_string(
            out_json,
            serde_json::to_string(&rows).map_err(|x| Fail(DawkStatus::Internal, x.to_string()))?,
        )
    })
}

/// # Safety
/// `e` must come from this library (or be null).
#[no_mangle]
pub unsafe extern "C" fn dawk_element_free(e: *mut DawkElement) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Builds a presentation of the named kind (`"daw"`, `"triple"`, ...).
///
/// # Safety
/// Pointers must be valid; `kind` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn dawk_presentation_new(
    g: *const DawkGroup,
    kind: *const c_char,
    k_bound: u32,
    out: *mut *mut DawkPresentation,
) -> DawkStatus {
    guard(|| {
        let g = ref_arg(g, "group")?;
        let k: Kind = str_arg(kind, "kind")?.parse()?;
        put(
            out,
            DawkPresentation {
                presentation: presentation_of(k, &g.group.data, k_bound)?,
            },
        )
    })
}

/// Parses the text format.
///
/// # Safety
/// `text` must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dawk_presentation_from_text(
    text: *const c_char,
    out: *mut *mut DawkPresentation,
) -> DawkStatus {
    guard(|| {
        put(
            out,
            DawkPresentation {
                presentation: Presentation::from_text(str_arg(text, "text")?)?,
            },
        )
    })
}

/// Renders the text format.
///
/// # Safety
/// `p` must be live; `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn dawk_presentation_to_text(
    p: *const DawkPresentation,
    out_text: *mut *mut c_char,
) -> DawkStatus {
    guard(|| put_string(out_text, ref_arg(p, "presentation")?.presentation.to_text()))
}

/// # Safety
/// `p` must come from this library (or be null).
#[no_mangle]
pub unsafe extern "C" fn dawk_presentation_free(p: *mut DawkPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Checks every relation under the canonical assignment; writes the report
/// and (if `out_passed` is non-null) whether all checks passed.
///
/// # Safety
/// Handles must be live; `out_json` writable; `out_passed` writable or null.
#[no_mangle]
pub unsafe extern "C" fn dawk_verify(
    g: *const DawkGroup,
    p: *const DawkPresentation,
    jobs: usize,
    out_json: *mut *mut c_char,
    out_passed: *mut bool,
) -> DawkStatus {
    guard(|| {
        let (g, p) = (ref_arg(g, "group")?, ref_arg(p, "presentation")?);
        let rep = verify_canonical(&g.group, &p.presentation, jobs.max(1))?;
        put_report(out_json, out_passed, &rep)
    })
}

/// Searches for a derivation of `lhs = rhs`; `max_nodes == 0` keeps the
/// default budget. The report's single check is pass (proved) or unknown.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn dawk_prove(
    p: *const DawkPresentation,
    lhs: *const c_char,
    rhs: *const c_char,
    max_nodes: usize,
    out_json: *mut *mut c_char,
    out_passed: *mut bool,
) -> DawkStatus {
    guard(|| {
        let p = &ref_arg(p, "presentation")?.presentation;
        let (l, r) = (
            p.parse_word(str_arg(lhs, "lhs")?)?,
            p.parse_word(str_arg(rhs, "rhs")?)?,
        );
        let mut budget = Budget::default_for(&l, &r);
        if max_nodes > 0 {
            budget.max_nodes = max_nodes;
        }
        let mut rep = Report::new("prove");
        rep.type_id = p.type_id.clone();
        let anchor = format!("{l} = {r}");
        match rewriting::equal_modulo(p, &LemmaLibrary::new(), &l, &r, budget)? {
            Outcome::Proved { trace, .. } => {
                rep.push(Check::pass("equal", anchor).with_witness(serde_json::json!(trace.steps)))
            }
            Outcome::Unknown { stats } => rep.push(
                Check::new("equal", anchor, Status::Unknown)
                    .with_detail(format!("budget exhausted after {} nodes", stats.nodes)),
            ),
        }
        put_report(out_json, out_passed, &rep)
    })
}

/// Runs every property and fixture for one type.
///
/// # Safety
/// `type_id` NUL-terminated; `out_json` writable; `out_passed` writable or null.
#[no_mangle]
pub unsafe extern "C" fn dawk_paper_suite(
    type_id: *const c_char,
    seed: u64,
    jobs: usize,
    out_json: *mut *mut c_char,
    out_passed: *mut bool,
) -> DawkStatus {
    guard(|| {
        let t = str_arg(type_id, "type_id")?;
        let rep = suite::paper_suite(t, seed, jobs.max(1), Samples::default())?;
        put_report(out_json, out_passed, &rep)
    })
}
