//! C ABI for `treeaut`.
//!
//! Automata and elements cross the boundary as opaque handles owned by the
//! caller and released with the matching `*_free` function. Every fallible
//! call returns a [`TaStatus`]; on failure the message is available from
//! [`ta_last_error`] on the same thread. Strings returned through `out`
//! parameters are owned by the caller and released with [`ta_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use treeaut::automaton::{fixtures, Automaton, ParseError};
use treeaut::congruence::{congruence_distance, in_rist, in_stab, TopologyError};
use treeaut::element::{Element, GroupError};
use treeaut::expr::{parse_element, ExprError};
use treeaut::tree::{TreeError, Vertex};
use treeaut::verify::{self, AxiomConfig};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    Validation = 4,
    UnknownFixture = 5,
    Expression = 6,
    Group = 7,
    Vertex = 8,
    CapExceeded = 9,
    Topology = 10,
    UnknownSuite = 11,
    /// A verification suite ran and at least one check failed.
    CheckFailed = 12,
    Panic = 13,
}

/// Opaque automaton handle.
pub struct TaAutomaton(Arc<Automaton>);

/// Opaque element handle.
pub struct TaElement(Element);

struct Failure(TaStatus, String);

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        let status = match e {
            ParseError::Syntax { .. } => TaStatus::Syntax,
            ParseError::Validation(_) => TaStatus::Validation,
        };
        Failure(status, e.to_string())
    }
}

impl From<ExprError> for Failure {
    fn from(e: ExprError) -> Self {
        Failure(TaStatus::Expression, e.to_string())
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        Failure(TaStatus::Group, e.to_string())
    }
}

impl From<TreeError> for Failure {
    fn from(e: TreeError) -> Self {
        Failure(TaStatus::Vertex, e.to_string())
    }
}

impl From<TopologyError> for Failure {
    fn from(e: TopologyError) -> Self {
        let status = match e {
            TopologyError::CapExceeded { .. } => TaStatus::CapExceeded,
            TopologyError::Group(_) => TaStatus::Group,
            _ => TaStatus::Topology,
        };
        Failure(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TaStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TaStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            TaStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(TaStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(TaStatus::InvalidUtf8, "argument is not valid UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(TaStatus::NullPointer, "null handle".into()))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(TaStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(TaStatus::Panic, "interior nul in output".into()))?;
    put(out, c.into_raw())
}

unsafe fn put_element(out: *mut *mut TaElement, g: Element) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(TaElement(g))))
}

/// Message of the last failed call on this thread, or null. Caller frees it
/// with `ta_string_free`.
#[no_mangle]
pub extern "C" fn ta_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ta_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates an automaton in the text format.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ta_automaton_parse(text: *const c_char, out: *mut *mut TaAutomaton) -> TaStatus {
    guard(|| {
        let aut = Automaton::parse(str_arg(text)?)?;
        put(out, Box::into_raw(Box::new(TaAutomaton(aut.into_shared()))))
    })
}

/// Loads a shipped fixture: `rootswap`, `odometer` or `grigorchuk`.
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ta_automaton_fixture(name: *const c_char, out: *mut *mut TaAutomaton) -> TaStatus {
    guard(|| {
        let name = str_arg(name)?;
        let aut = fixtures::load(name)
            .ok_or_else(|| Failure(TaStatus::UnknownFixture, format!("unknown fixture {name:?}")))?;
        put(out, Box::into_raw(Box::new(TaAutomaton(aut))))
    })
}

/// # Safety
/// `aut` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ta_automaton_free(aut: *mut TaAutomaton) {
    if !aut.is_null() {
        drop(Box::from_raw(aut));
    }
}

/// Alphabet size, or 0 for a null handle.
///
/// # Safety
/// `aut` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ta_automaton_alphabet_size(aut: *const TaAutomaton) -> usize {
    aut.as_ref().map_or(0, |a| a.0.alphabet().size())
}

/// Parses an expression such as `a*b^-1` over the automaton's state names.
///
/// # Safety
/// `aut` must be a live handle, `expr` a nul-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ta_element_parse(
    aut: *const TaAutomaton,
    expr: *const c_char,
    out: *mut *mut TaElement,
) -> TaStatus {
    guard(|| {
        let g = parse_element(&handle(aut)?.0, str_arg(expr)?)?;
        put_element(out, g)
    })
}

/// # Safety
/// `g` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ta_element_free(g: *mut TaElement) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// `g*h`, acting as `h` first.
///
/// # Safety
/// `g`, `h` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ta_element_compose(
    g: *const TaElement,
    h: *const TaElement,
    out: *mut *mut TaElement,
) -> TaStatus {
    guard(|| {
        let gh = handle(g)?.0.compose(&handle(h)?.0)?;
        put_element(out, gh)
    })
}

/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ta_element_inverse(g: *const TaElement, out: *mut *mut TaElement) -> TaStatus {
    guard(|| put_element(out, handle(g)?.0.inverse()))
}

/// Word form of an element, e.g. `a*b^-1`.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ta_element_to_string(g: *const TaElement, out: *mut *mut c_char) -> TaStatus {
    guard(|| put_string(out, handle(g)?.0.to_string()))
}

/// Image of a vertex given as a digit string (`""` or `ε` for the root).
///
/// # Safety
/// `g` must be a live handle, `vertex` a nul-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ta_element_apply(
    g: *const TaElement,
    vertex: *const c_char,
    out: *mut *mut c_char,
) -> TaStatus {
    guard(|| {
        let g = &handle(g)?.0;
        let v: Vertex = str_arg(vertex)?.parse()?;
        g.alphabet().check(&v)?;
        let image = g.apply(&v);
        let text = if image.is_root() { String::new() } else { image.to_string() };
        put_string(out, text)
    })
}

/// Exact equality of the actions on the whole tree.
///
/// # Safety
/// `g`, `h` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ta_element_equals(g: *const TaElement, h: *const TaElement, out: *mut bool) -> TaStatus {
    guard(|| {
        let eq = handle(g)?.0.equals(&handle(h)?.0)?;
        put(out, eq)
    })
}

/// Membership in the level-`level` stabilizer.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ta_element_in_stab(g: *const TaElement, level: usize, out: *mut bool) -> TaStatus {
    guard(|| put(out, in_stab(&handle(g)?.0, level)))
}

/// Membership in the rigid stabilizer of `vertex`.
///
/// # Safety
/// `g` must be a live handle, `vertex` a nul-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ta_element_in_rist(
    g: *const TaElement,
    vertex: *const c_char,
    depth: usize,
    out: *mut bool,
) -> TaStatus {
    guard(|| {
        let g = &handle(g)?.0;
        let v: Vertex = str_arg(vertex)?.parse()?;
        g.alphabet().check(&v)?;
        put(out, in_rist(g, &v, depth)?.holds)
    })
}

/// Congruence distance `2^-k`; `TA_STATUS_CAP_EXCEEDED` when the elements
/// agree through level `cap` without being equal.
///
/// # Safety
/// `g`, `h` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ta_distance(g: *const TaElement, h: *const TaElement, cap: usize, out: *mut f64) -> TaStatus {
    guard(|| {
        let d = congruence_distance(&handle(g)?.0, &handle(h)?.0, cap)?;
        put(out, d)
    })
}

/// Runs a verification suite (`axioms`, `smooth-curves`, `d-topology`,
/// `discreteness`) with its default instances and writes the report, one
/// tab-separated record per check. `aut` selects the automaton for `axioms`;
/// null means all fixtures. Returns `TA_STATUS_CHECK_FAILED` if any check
/// fails; the report is written in either case.
///
/// # Safety
/// `suite` must be a nul-terminated string, `aut` null or a live handle,
/// `report` writable.
#[no_mangle]
pub unsafe extern "C" fn ta_verify(
    suite: *const c_char,
    aut: *const TaAutomaton,
    report: *mut *mut c_char,
) -> TaStatus {
    guard(|| {
        let checks = match str_arg(suite)? {
            "axioms" => {
                let targets = match aut.as_ref() {
                    Some(a) => vec![Arc::clone(&a.0)],
                    None => fixtures::NAMES.iter().map(|n| fixtures::load(n).expect("fixture")).collect(),
                };
                targets
                    .iter()
                    .flat_map(|a| {
                        let exp = verify::identify_fixture(a).map(verify::fixture_expectations).unwrap_or_default();
                        verify::axioms_suite(a, &exp, &AxiomConfig::default())
                    })
                    .collect()
            }
            "smooth-curves" => verify::smooth_curves_suite(2, 2, 3),
            "d-topology" => verify::d_topology_suite(&verify::DEFAULT_D_TOPOLOGY, 1000, verify::DEFAULT_SEED),
            "discreteness" => {
                verify::discreteness_suite(&verify::DEFAULT_FUNCTIONAL_PLOTS, &verify::DEFAULT_VERTEX_MAPS)
            }
            other => return Err(Failure(TaStatus::UnknownSuite, format!("unknown suite {other:?}"))),
        };
        let text: String = checks.iter().map(|c| c.tsv() + "\n").collect();
        put_string(report, text)?;
        if verify::all_passed(&checks) {
            Ok(())
        } else {
            let failed = checks.iter().filter(|c| !c.passed).count();
            Err(Failure(TaStatus::CheckFailed, format!("{failed} checks failed")))
        }
    })
}
