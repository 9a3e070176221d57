//! C ABI for the `arnn` workbench.
//!
//! Every fallible function returns an [`ArnnStatus`] and writes its result
//! through an out-pointer. On failure the message is available from
//! [`arnn_last_error_message`] until the next call on the same thread.
//! Networks are opaque [`ArnnNetwork`] handles released with
//! [`arnn_network_free`]; strings returned by the library are released with
//! [`arnn_string_free`].

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::sync::Arc;

use arnn::codec::{characteristic_bits, index_of_string, string_of_index, Alphabet, CodecError, Language, OracleTable};
use arnn::compile::{dfa_to_net, oracle_net, two_stack_to_net, CompileError, Dfa, OracleNetSpec, TwoStackMachine};
use arnn::degrees::{classify_network, DegreeError, DegreeLabel, DegreeOrder};
use arnn::format::{bits_to_string, ParseError};
use arnn::network::{run_with, Network, NetworkError, Verdict};
use arnn::numerics::{ExactScalar, NumericError, OnExhaustion, Packing, PrecisionBudget};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArnnStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    Construction = 5,
    Timeout = 6,
    HorizonExceeded = 7,
    UnknownSign = 8,
    LabelMissing = 9,
    Panic = 10,
}

/// Outcome of a run that produced a verdict.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArnnVerdict {
    Reject = 0,
    Accept = 1,
}

/// A compiled or loaded network.
pub struct ArnnNetwork {
    inner: Network,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(ArnnStatus, String);

impl Failure {
    fn new(status: ArnnStatus, msg: impl ToString) -> Self {
        Failure(status, msg.to_string())
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::new(ArnnStatus::Parse, e)
    }
}

impl From<CodecError> for Failure {
    fn from(e: CodecError) -> Self {
        let status = match e {
            CodecError::HorizonExceeded { .. } => ArnnStatus::HorizonExceeded,
            _ => ArnnStatus::InvalidArgument,
        };
        Failure::new(status, e)
    }
}

impl From<NumericError> for Failure {
    fn from(e: NumericError) -> Self {
        let status = match e {
            NumericError::HorizonExceeded { .. } => ArnnStatus::HorizonExceeded,
            _ => ArnnStatus::InvalidArgument,
        };
        Failure::new(status, e)
    }
}

impl From<NetworkError> for Failure {
    fn from(e: NetworkError) -> Self {
        let status = match e {
            NetworkError::UnknownSign { .. } => ArnnStatus::UnknownSign,
            NetworkError::HorizonExceeded { .. } | NetworkError::Flagged => ArnnStatus::HorizonExceeded,
            NetworkError::Codec(CodecError::HorizonExceeded { .. }) => ArnnStatus::HorizonExceeded,
            _ => ArnnStatus::InvalidArgument,
        };
        Failure::new(status, e)
    }
}

impl From<CompileError> for Failure {
    fn from(e: CompileError) -> Self {
        match e {
            CompileError::Network(n) => n.into(),
            CompileError::HorizonExceeded { .. } => Failure::new(ArnnStatus::HorizonExceeded, e),
            CompileError::Timeout => Failure::new(ArnnStatus::Timeout, e),
            _ => Failure::new(ArnnStatus::Construction, e),
        }
    }
}

impl From<DegreeError> for Failure {
    fn from(e: DegreeError) -> Self {
        let status = match e {
            DegreeError::LabelMissing => ArnnStatus::LabelMissing,
            _ => ArnnStatus::InvalidArgument,
        };
        Failure::new(status, e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> ArnnStatus {
    let (status, msg) = match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => (ArnnStatus::Ok, None),
        Ok(Err(Failure(status, msg))) => (status, Some(msg)),
        Err(_) => (ArnnStatus::Panic, Some("internal panic".to_string())),
    };
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = msg.map(|m| CString::new(m.replace('\0', " ")).expect("no interior nul"));
    });
    status
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(ArnnStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(ArnnStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::new(ArnnStatus::NullArgument, format!("{what} is null")))
}

unsafe fn network<'a>(p: *const ArnnNetwork) -> Result<&'a Network, Failure> {
    p.as_ref()
        .map(|n| &n.inner)
        .ok_or_else(|| Failure::new(ArnnStatus::NullArgument, "network is null"))
}

fn new_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure::new(ArnnStatus::InvalidArgument, "result contains a nul byte"))
}

fn boxed(net: Network) -> *mut ArnnNetwork {
    Box::into_raw(Box::new(ArnnNetwork { inner: net }))
}

/// Message for the last failed call on this thread, or null. Owned by the
/// library and valid until the next call.
#[no_mangle]
pub extern "C" fn arnn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, static.
#[no_mangle]
pub extern "C" fn arnn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn arnn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a network handle. Null is ignored.
///
/// # Safety
/// `net` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn arnn_network_free(net: *mut ArnnNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Loads a network file. Oracle tables resolve against the file's directory.
///
/// # Safety
/// `path` must be a nul-terminated string; `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn arnn_network_load(path: *const c_char, out_net: *mut *mut ArnnNetwork) -> ArnnStatus {
    guard(|| {
        let path = text(path, "path")?;
        let slot = out(out_net, "out_net")?;
        *slot = boxed(Network::load(Path::new(path))?);
        Ok(())
    })
}

/// Parses network text; `base_dir` (nullable) resolves oracle table paths.
///
/// # Safety
/// String arguments must be nul-terminated; `out_net` writable.
#[no_mangle]
pub unsafe extern "C" fn arnn_network_parse(
    source: *const c_char,
    base_dir: *const c_char,
    out_net: *mut *mut ArnnNetwork,
) -> ArnnStatus {
    guard(|| {
        let source = text(source, "source")?;
        let dir = if base_dir.is_null() { "." } else { text(base_dir, "base_dir")? };
        let slot = out(out_net, "out_net")?;
        *slot = boxed(Network::parse(source, Path::new(dir))?);
        Ok(())
    })
}

/// Network text in the file format. Free the result with
/// [`arnn_string_free`].
///
/// # Safety
/// `net` must be a live handle; `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn arnn_network_to_text(net: *const ArnnNetwork, out_text: *mut *mut c_char) -> ArnnStatus {
    guard(|| {
        let net = network(net)?;
        let slot = out(out_text, "out_text")?;
        *slot = new_string(net.to_text()?)?;
        Ok(())
    })
}

/// Number of neurons, or 0 for a null handle.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn arnn_network_neuron_count(net: *const ArnnNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.inner.n_neurons())
}

/// Runs `word` for at most `budget` ticks with sign decisions limited to
/// `precision` digits. A missing verdict is [`ArnnStatus::Timeout`]; a
/// raised flag line is [`ArnnStatus::HorizonExceeded`].
///
/// # Safety
/// `net` must be a live handle, `word` nul-terminated, `out_verdict`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn arnn_network_run(
    net: *const ArnnNetwork,
    word: *const c_char,
    budget: usize,
    precision: u32,
    out_verdict: *mut ArnnVerdict,
) -> ArnnStatus {
    guard(|| {
        let net = network(net)?;
        let word = text(word, "word")?;
        let slot = out(out_verdict, "out_verdict")?;
        let precision = PrecisionBudget::new(precision, OnExhaustion::ReportUnknown)?;
        let outcome = run_with(net, word, budget, &precision)?;
        if outcome.flagged {
            return Err(Failure::new(ArnnStatus::HorizonExceeded, "the network raised its flag line"));
        }
        *slot = match outcome.verdict {
            Verdict::Accept => ArnnVerdict::Accept,
            Verdict::Reject => ArnnVerdict::Reject,
            Verdict::Timeout => {
                return Err(Failure::new(ArnnStatus::Timeout, format!("no verdict within {budget} ticks")))
            }
        };
        Ok(())
    })
}

/// Hierarchy row of a network under the built-in degree order, as text
/// (`bounded-automata`, `turing` or `oracle <labels>`). `timing_labels` is
/// an array of `n_timing` strings and may be null when `n_timing` is 0.
///
/// # Safety
/// `net` must be a live handle; `timing_labels` must point to `n_timing`
/// nul-terminated strings; `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn arnn_network_classify(
    net: *const ArnnNetwork,
    timing_labels: *const *const c_char,
    n_timing: usize,
    out_text: *mut *mut c_char,
) -> ArnnStatus {
    guard(|| {
        let net = network(net)?;
        let slot = out(out_text, "out_text")?;
        let mut timing = BTreeSet::new();
        if n_timing > 0 {
            if timing_labels.is_null() {
                return Err(Failure::new(ArnnStatus::NullArgument, "timing_labels is null"));
            }
            for &p in std::slice::from_raw_parts(timing_labels, n_timing) {
                timing.insert(DegreeLabel::new(text(p, "timing label")?));
            }
        }
        let class = classify_network(net, &timing, &DegreeOrder::builtin())?;
        *slot = new_string(class.to_string())?;
        Ok(())
    })
}

/// Compiles DFA text into a network.
///
/// # Safety
/// `source` nul-terminated; `out_net` writable.
#[no_mangle]
pub unsafe extern "C" fn arnn_compile_dfa(source: *const c_char, out_net: *mut *mut ArnnNetwork) -> ArnnStatus {
    guard(|| {
        let dfa = Dfa::parse(text(source, "source")?)?;
        let slot = out(out_net, "out_net")?;
        *slot = boxed(dfa_to_net(&dfa)?);
        Ok(())
    })
}

/// Compiles two-stack machine text into a network.
///
/// # Safety
/// `source` nul-terminated; `out_net` writable.
#[no_mangle]
pub unsafe extern "C" fn arnn_compile_two_stack(source: *const c_char, out_net: *mut *mut ArnnNetwork) -> ArnnStatus {
    guard(|| {
        let machine = TwoStackMachine::parse(text(source, "source")?)?;
        let slot = out(out_net, "out_net")?;
        *slot = boxed(two_stack_to_net(&machine)?);
        Ok(())
    })
}

/// Builds the oracle-consulting network for the table `bits[0..n_bits]`
/// (nonzero is 1) over `alphabet`. `label` may be null.
///
/// # Safety
/// `bits` must point to `n_bits` bytes; strings nul-terminated; `out_net`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn arnn_build_oracle_net(
    bits: *const u8,
    n_bits: usize,
    alphabet: *const c_char,
    label: *const c_char,
    out_net: *mut *mut ArnnNetwork,
) -> ArnnStatus {
    guard(|| {
        if bits.is_null() && n_bits > 0 {
            return Err(Failure::new(ArnnStatus::NullArgument, "bits is null"));
        }
        let table: Vec<bool> =
            if n_bits == 0 { Vec::new() } else { std::slice::from_raw_parts(bits, n_bits).iter().map(|&b| b != 0).collect() };
        let alphabet = Alphabet::parse(text(alphabet, "alphabet")?)?;
        let mut weight = ExactScalar::oracle(Arc::new(OracleTable::from_bits(table)), Packing::Cantor4);
        if !label.is_null() {
            let name = text(label, "label")?;
            if !DegreeLabel::is_valid_name(name) {
                return Err(Failure::new(ArnnStatus::InvalidArgument, format!("invalid degree label `{name}`")));
            }
            weight = weight.with_label(DegreeLabel::new(name))?;
        }
        let slot = out(out_net, "out_net")?;
        *slot = boxed(oracle_net(&OracleNetSpec::new(weight, alphabet))?.into_net());
        Ok(())
    })
}

/// Length-lex index of `s` over `alphabet`; the empty string is 1.
///
/// # Safety
/// Strings nul-terminated; `out_index` writable.
#[no_mangle]
pub unsafe extern "C" fn arnn_index_of_string(
    alphabet: *const c_char,
    s: *const c_char,
    out_index: *mut u64,
) -> ArnnStatus {
    guard(|| {
        let alphabet = Alphabet::parse(text(alphabet, "alphabet")?)?;
        let slot = out(out_index, "out_index")?;
        *slot = index_of_string(text(s, "string")?, &alphabet)?;
        Ok(())
    })
}

/// String at a length-lex index. Free the result with [`arnn_string_free`].
///
/// # Safety
/// `alphabet` nul-terminated; `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn arnn_string_of_index(
    alphabet: *const c_char,
    index: u64,
    out_text: *mut *mut c_char,
) -> ArnnStatus {
    guard(|| {
        let alphabet = Alphabet::parse(text(alphabet, "alphabet")?)?;
        let slot = out(out_text, "out_text")?;
        *slot = new_string(string_of_index(index, &alphabet)?)?;
        Ok(())
    })
}

/// First `n` binary digits of a language's characteristic real, as a
/// string of `0` and `1`. `language` is the text of a language file.
///
/// # Safety
/// `language` nul-terminated; `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn arnn_encode_language(
    language: *const c_char,
    n: u64,
    out_text: *mut *mut c_char,
) -> ArnnStatus {
    guard(|| {
        let lang = Language::parse(text(language, "language")?)?;
        let slot = out(out_text, "out_text")?;
        *slot = new_string(bits_to_string(&characteristic_bits(&lang, n)?))?;
        Ok(())
    })
}
