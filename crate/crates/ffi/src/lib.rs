//! C ABI over the `fmaca` crate.
//!
//! Objects cross the boundary as opaque handles created by `*_new` / `*_load`
//! and released by the matching `*_free`. Every fallible call returns an
//! [`FmacaStatus`]; on failure [`fmaca_last_error`] describes the problem for
//! the calling thread. Panics never unwind into C: they become
//! `FMACA_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fmaca::ca::{default_max_steps, run_to_attractor, CaError, FmacaDescriptor, FuzzyConfiguration, DEFAULT_QUANTUM};
use fmaca::io::{load_model, IoError, ModelFile};
use fmaca::sequences::Label;
use fmaca::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FmacaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnsupportedRule = 3,
    InvalidState = 4,
    DimensionMismatch = 5,
    NonConvergent = 6,
    Io = 7,
    InvalidModel = 8,
    InvalidSequence = 9,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FmacaLabel {
    Noncoding = 0,
    Coding = 1,
}

/// Summary of the cycle a trajectory settles into.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FmacaAttractor {
    pub transient_length: usize,
    pub period: usize,
    /// Phase-independent identity of the cycle.
    pub attractor_id: u64,
}

/// A fuzzy cellular automaton (opaque).
pub struct FmacaAutomaton {
    desc: FmacaDescriptor,
}

/// A trained classifier loaded from a model file (opaque).
pub struct FmacaModel {
    file: ModelFile,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(FmacaStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Ca(c) | Error::Learn(fmaca::learn::LearnError::Ca(c)) => ca_status(c),
            Error::Learn(_) => FmacaStatus::InvalidArgument,
            Error::Sequence(_) | Error::Baseline(_) => FmacaStatus::InvalidSequence,
            Error::Io(IoError::Io(_)) => FmacaStatus::Io,
            Error::Io(IoError::WindowLength { .. }) => FmacaStatus::DimensionMismatch,
            Error::Io(IoError::Sequence(_)) => FmacaStatus::InvalidSequence,
            Error::Io(_) => FmacaStatus::InvalidModel,
        };
        Failure(status, e.to_string())
    }
}

impl From<CaError> for Failure {
    fn from(e: CaError) -> Self {
        Failure(ca_status(&e), e.to_string())
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Error::from(e).into()
    }
}

fn ca_status(e: &CaError) -> FmacaStatus {
    match e {
        CaError::UnsupportedRule(_) => FmacaStatus::UnsupportedRule,
        CaError::InvalidState(_) => FmacaStatus::InvalidState,
        CaError::DimensionMismatch { .. } => FmacaStatus::DimensionMismatch,
        CaError::NonConvergent { .. } => FmacaStatus::NonConvergent,
        _ => FmacaStatus::InvalidArgument,
    }
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FmacaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FmacaStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            FmacaStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(FmacaStatus::NullPointer, format!("{what} is NULL"))
}

/// View `len` elements at `data`; an empty slice for `len == 0`.
unsafe fn slice<'a, T>(data: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fmaca_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fmaca_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Build an automaton from one rule code per cell.
///
/// # Safety
/// `rules` must point to `n_cells` readable values and `out` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn fmaca_automaton_new(
    rules: *const u32,
    n_cells: usize,
    out: *mut *mut FmacaAutomaton,
) -> FmacaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let codes = slice(rules, n_cells, "rules")?;
        let desc = FmacaDescriptor::from_codes(codes)?;
        *out = Box::into_raw(Box::new(FmacaAutomaton { desc }));
        Ok(())
    })
}

/// Release an automaton. NULL is ignored.
///
/// # Safety
/// `automaton` must come from [`fmaca_automaton_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn fmaca_automaton_free(automaton: *mut FmacaAutomaton) {
    if !automaton.is_null() {
        drop(Box::from_raw(automaton));
    }
}

/// Number of cells, or 0 for NULL.
///
/// # Safety
/// `automaton` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fmaca_automaton_cells(automaton: *const FmacaAutomaton) -> usize {
    automaton.as_ref().map_or(0, |a| a.desc.n())
}

/// Write the rule code of every cell into `codes` (length `n_cells`).
///
/// # Safety
/// `automaton` must be a live handle and `codes` must point to `n_cells`
/// writable values.
#[no_mangle]
pub unsafe extern "C" fn fmaca_automaton_rules(
    automaton: *const FmacaAutomaton,
    codes: *mut u32,
    n_cells: usize,
) -> FmacaStatus {
    guard(|| {
        let a = automaton.as_ref().ok_or_else(|| null("automaton"))?;
        let rules = a.desc.rule_codes();
        if rules.len() != n_cells {
            return Err(CaError::DimensionMismatch { expected: rules.len(), found: n_cells }.into());
        }
        if codes.is_null() && n_cells > 0 {
            return Err(null("codes"));
        }
        for (i, r) in rules.into_iter().enumerate() {
            *codes.add(i) = r;
        }
        Ok(())
    })
}

unsafe fn configuration(state: *const f64, n_cells: usize) -> Result<FuzzyConfiguration, Failure> {
    Ok(FuzzyConfiguration::new(slice(state, n_cells, "state")?.to_vec())?)
}

/// One synchronous update of `state` into `next` (both `n_cells` long; they
/// may alias).
///
/// # Safety
/// `automaton` must be a live handle; `state` readable and `next` writable
/// for `n_cells` values.
#[no_mangle]
pub unsafe extern "C" fn fmaca_automaton_step(
    automaton: *const FmacaAutomaton,
    state: *const f64,
    next: *mut f64,
    n_cells: usize,
) -> FmacaStatus {
    guard(|| {
        let a = automaton.as_ref().ok_or_else(|| null("automaton"))?;
        let p = a.desc.step(&configuration(state, n_cells)?)?;
        if next.is_null() && n_cells > 0 {
            return Err(null("next"));
        }
        ptr::copy_nonoverlapping(p.cells().as_ptr(), next, n_cells);
        Ok(())
    })
}

/// Iterate from `state` until the trajectory revisits a state.
/// `max_steps == 0` selects the default budget for the configuration.
///
/// # Safety
/// `automaton` must be a live handle, `state` readable for `n_cells` values,
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fmaca_automaton_run(
    automaton: *const FmacaAutomaton,
    state: *const f64,
    n_cells: usize,
    max_steps: usize,
    out: *mut FmacaAttractor,
) -> FmacaStatus {
    guard(|| {
        let a = automaton.as_ref().ok_or_else(|| null("automaton"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let p0 = configuration(state, n_cells)?;
        let budget = if max_steps == 0 { default_max_steps(p0.len(), &p0) } else { max_steps };
        let r = run_to_attractor(&a.desc, &p0, budget, DEFAULT_QUANTUM)?;
        *out = FmacaAttractor {
            transient_length: r.transient_length,
            period: r.period,
            attractor_id: r.attractor_id.0,
        };
        Ok(())
    })
}

/// Load a model file written by `fmaca train`.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fmaca_model_load(path: *const c_char, out: *mut *mut FmacaModel) -> FmacaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Failure(FmacaStatus::InvalidArgument, "path is not UTF-8".into()))?;
        let file = load_model(path)?;
        *out = Box::into_raw(Box::new(FmacaModel { file }));
        Ok(())
    })
}

/// Release a model. NULL is ignored.
///
/// # Safety
/// `model` must come from [`fmaca_model_load`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn fmaca_model_free(model: *mut FmacaModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Window length in bases the model expects, or 0 for NULL.
///
/// # Safety
/// `model` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fmaca_model_window_length(model: *const FmacaModel) -> usize {
    model.as_ref().map_or(0, |m| m.file.metadata.length)
}

/// Classify `len` bases (not necessarily NUL-terminated).
///
/// # Safety
/// `model` must be a live handle, `bases` readable for `len` bytes, and
/// `label` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fmaca_model_classify(
    model: *const FmacaModel,
    bases: *const c_char,
    len: usize,
    label: *mut FmacaLabel,
) -> FmacaStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let label = label.as_mut().ok_or_else(|| null("label"))?;
        let bytes = slice(bases.cast::<u8>(), len, "bases")?;
        let text = std::str::from_utf8(bytes)
            .map_err(|_| Failure(FmacaStatus::InvalidSequence, "bases are not ASCII".into()))?;
        *label = match m.file.classify(text)? {
            Label::Coding => FmacaLabel::Coding,
            Label::Noncoding => FmacaLabel::Noncoding,
        };
        Ok(())
    })
}
