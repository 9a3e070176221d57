//! The `arnn` command line.
//!
//! Exit codes: 0 on success, 2 on usage errors (bad flags, unreadable or
//! malformed files, words outside the alphabet), 3 on domain errors
//! (timeout, horizon exceeded, unknown sign, missing degree labels). Output
//! files are written to a temporary sibling and renamed into place, so a
//! failing command leaves none behind.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::codec::{
    characteristic_bits, decode_membership, encode_language, index_of_string, string_of_index, Alphabet, CodecError,
    Language, OracleTable,
};
use crate::compile::{dfa_to_net, oracle_net, two_stack_to_net, CompileError, Dfa, OracleNetSpec, TwoStackMachine};
use crate::degrees::{classify_network, DegreeError, DegreeLabel, DegreeOrder};
use crate::format::{bits_to_string, parse_bits, ParseError};
use crate::network::{run_with, Network, NetworkError, Verdict};
use crate::numerics::{ExactScalar, NumericError, OnExhaustion, Packing, PrecisionBudget, Rational, UnitReal};
use crate::spike::{timing_decode, timing_encode, SpikeError, SpikeSchedule};

#[derive(Parser, Debug)]
#[command(name = "arnn", version, about = "Exact-arithmetic analog recurrent network workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Length-lex index of a string, or the string at an index.
    Index(IndexArgs),
    /// First digits of a language's characteristic real.
    Encode(EncodeArgs),
    /// Membership bit of a string read off a characteristic real.
    Decode(DecodeArgs),
    /// Compile a DFA file into an integer-weight network.
    CompileDfa(CompileDfaArgs),
    /// Compile a two-stack machine file into a rational-weight network.
    CompileTwoStack(CompileTwoStackArgs),
    /// Build the oracle-consulting network for an oracle table.
    BuildOracleNet(BuildOracleNetArgs),
    /// Run a network on a word.
    Run(RunArgs),
    /// Place a network in the weight-class hierarchy.
    Classify(ClassifyArgs),
    /// Spike schedule of a binary expansion.
    SpikeEncode(SpikeEncodeArgs),
    /// Binary digits recorded by a spike schedule.
    SpikeDecode(SpikeDecodeArgs),
}

#[derive(Args, Debug)]
pub struct IndexArgs {
    #[arg(long)]
    pub alphabet: String,
    #[arg(long, conflicts_with = "index", required_unless_present = "index")]
    pub string: Option<String>,
    #[arg(long)]
    pub index: Option<u64>,
}

#[derive(Args, Debug)]
pub struct EncodeArgs {
    #[arg(long)]
    pub language: PathBuf,
    #[arg(long)]
    pub digits: u64,
    /// Also write the digits as an oracle table file.
    #[arg(long)]
    pub table_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    /// The real's binary digits, e.g. `0100100`.
    #[arg(long, conflicts_with = "oracle", required_unless_present = "oracle")]
    pub digits: Option<String>,
    /// An oracle table file standing for the real.
    #[arg(long)]
    pub oracle: Option<PathBuf>,
    #[arg(long)]
    pub alphabet: String,
    #[arg(long)]
    pub string: String,
}

#[derive(Args, Debug)]
pub struct CompileDfaArgs {
    #[arg(long)]
    pub dfa: PathBuf,
    /// Network file to write; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompileTwoStackArgs {
    #[arg(long)]
    pub machine: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BuildOracleNetArgs {
    /// Oracle table file; packed Cantor-4 into the weight.
    #[arg(long)]
    pub oracle: PathBuf,
    #[arg(long)]
    pub alphabet: String,
    /// Degree label declared for the oracle weight.
    #[arg(long)]
    pub label: Option<String>,
    /// Largest index the counter addresses (default: the table horizon).
    #[arg(long)]
    pub capacity: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long)]
    pub net: PathBuf,
    #[arg(long, default_value = "")]
    pub word: String,
    /// Maximum ticks, input phase included.
    #[arg(long)]
    pub budget: usize,
    /// Digit budget for sign decisions on lazy weights.
    #[arg(long, default_value_t = 256)]
    pub precision: u32,
    /// Print line activity for every tick.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub net: PathBuf,
    /// Lattice file extending `0 < 0' < 0''`.
    #[arg(long)]
    pub lattice: Option<PathBuf>,
    /// Spike schedule files whose labels join the weight labels.
    #[arg(long)]
    pub timing: Vec<PathBuf>,
    /// Timing labels given directly.
    #[arg(long)]
    pub timing_label: Vec<String>,
}

#[derive(Args, Debug)]
pub struct SpikeEncodeArgs {
    #[arg(long, group = "source")]
    pub digits: Option<String>,
    /// A rational `p/q` in `[0, 1)`.
    #[arg(long, group = "source")]
    pub rational: Option<String>,
    /// Oracle table read as binary digits.
    #[arg(long, group = "source")]
    pub oracle: Option<PathBuf>,
    /// Language file; its characteristic real.
    #[arg(long, group = "source")]
    pub language: Option<PathBuf>,
    #[arg(long)]
    pub window: u64,
    #[arg(long)]
    pub label: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpikeDecodeArgs {
    #[arg(long)]
    pub schedule: PathBuf,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<CodecError> for CliError {
    fn from(e: CodecError) -> Self {
        match e {
            CodecError::HorizonExceeded { .. } | CodecError::MembershipUndecided(_) | CodecError::Numeric(_) => {
                CliError::Domain(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<NetworkError> for CliError {
    fn from(e: NetworkError) -> Self {
        match e {
            NetworkError::Config(_) | NetworkError::Shape(_) => CliError::Usage(e.to_string()),
            NetworkError::Codec(c) => c.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<CompileError> for CliError {
    fn from(e: CompileError) -> Self {
        match e {
            CompileError::Network(n) => n.into(),
            CompileError::Codec(c) => c.into(),
            CompileError::HorizonExceeded { .. } | CompileError::Timeout => CliError::Domain(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<DegreeError> for CliError {
    fn from(e: DegreeError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<SpikeError> for CliError {
    fn from(e: SpikeError) -> Self {
        match e {
            SpikeError::Numeric(n) => n.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code. Results go to `out`, diagnostics to `err`.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command) {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                2
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn alphabet(s: &str) -> Result<Alphabet, CliError> {
    Ok(Alphabet::parse(s)?)
}

fn label(s: &str) -> Result<DegreeLabel, CliError> {
    if DegreeLabel::is_valid_name(s) {
        Ok(DegreeLabel::new(s))
    } else {
        Err(CliError::Usage(format!("invalid degree label `{s}`")))
    }
}

fn execute(command: Command) -> Result<String, CliError> {
    match command {
        Command::Index(a) => {
            let alpha = alphabet(&a.alphabet)?;
            match (a.string, a.index) {
                (Some(s), _) => Ok(format!("{}\n", index_of_string(&s, &alpha)?)),
                (None, Some(i)) => Ok(format!("{}\n", string_of_index(i, &alpha)?)),
                (None, None) => Err(CliError::Usage("give --string or --index".into())),
            }
        }
        Command::Encode(a) => {
            let lang = Language::load(&a.language)?;
            let bits = characteristic_bits(&lang, a.digits)?;
            if let Some(path) = &a.table_out {
                write_atomic(path, &OracleTable::from_bits(bits.clone()).to_text())?;
            }
            Ok(format!("{}\n", bits_to_string(&bits)))
        }
        Command::Decode(a) => {
            let alpha = alphabet(&a.alphabet)?;
            let real = match (&a.digits, &a.oracle) {
                (Some(d), _) => {
                    let bits = parse_bits(d).ok_or_else(|| CliError::Usage(format!("`{d}` is not a binary digit string")))?;
                    let table = OracleTable::from_bits(bits);
                    UnitReal::from_oracle(Arc::new(table), Packing::Binary)
                }
                (None, Some(p)) => UnitReal::from_oracle(Arc::new(OracleTable::load(p)?), Packing::Binary),
                (None, None) => return Err(CliError::Usage("give --digits or --oracle".into())),
            };
            let bit = decode_membership(&real, &a.string, &alpha)?;
            Ok(format!("{}\n", u8::from(bit)))
        }
        Command::CompileDfa(a) => {
            let net = dfa_to_net(&Dfa::load(&a.dfa)?)?;
            emit(&net.to_text()?, a.out.as_deref())
        }
        Command::CompileTwoStack(a) => {
            let net = two_stack_to_net(&TwoStackMachine::load(&a.machine)?)?;
            emit(&net.to_text()?, a.out.as_deref())
        }
        Command::BuildOracleNet(a) => {
            let alpha = alphabet(&a.alphabet)?;
            let reference = table_reference(&a.oracle, a.out.as_deref())?;
            let table = OracleTable::load(&a.oracle)?.with_source(reference);
            let mut oracle = ExactScalar::oracle(Arc::new(table), Packing::Cantor4);
            if let Some(l) = &a.label {
                oracle = oracle.with_label(label(l)?)?;
            }
            let spec = OracleNetSpec { oracle, alphabet: alpha, capacity: a.capacity };
            let net = oracle_net(&spec)?;
            emit(&net.net().to_text()?, a.out.as_deref())
        }
        Command::Run(a) => run_command(a),
        Command::Classify(a) => {
            let net = Network::load(&a.net)?;
            let order = match &a.lattice {
                Some(p) => DegreeOrder::load(p)?,
                None => DegreeOrder::builtin(),
            };
            let mut timing = BTreeSet::new();
            for p in &a.timing {
                let s = SpikeSchedule::load(p)?;
                timing.insert(s.label().cloned().unwrap_or_else(DegreeLabel::bottom));
            }
            for l in &a.timing_label {
                timing.insert(label(l)?);
            }
            Ok(format!("{}\n", classify_network(&net, &timing, &order)?))
        }
        Command::SpikeEncode(a) => {
            let mut real = if let Some(d) = &a.digits {
                let bits = parse_bits(d).ok_or_else(|| CliError::Usage(format!("`{d}` is not a binary digit string")))?;
                UnitReal::from_bits(&bits)
            } else if let Some(q) = &a.rational {
                let q: Rational = q.parse().map_err(|e| CliError::Usage(format!("bad rational `{q}`: {e}")))?;
                UnitReal::from_rational(&q, 2)?
            } else if let Some(p) = &a.oracle {
                UnitReal::from_oracle(Arc::new(OracleTable::load(p)?), Packing::Binary)
            } else if let Some(p) = &a.language {
                encode_language(&Language::load(p)?, a.window)?
            } else {
                return Err(CliError::Usage("give one of --digits, --rational, --oracle, --language".into()));
            };
            if let Some(l) = &a.label {
                real = real.with_label(label(l)?);
            }
            let schedule = timing_encode(&real, a.window)?;
            emit(&schedule.to_text(), a.out.as_deref())
        }
        Command::SpikeDecode(a) => {
            let s = SpikeSchedule::load(&a.schedule)?;
            let digits = timing_decode(&s).prefix(s.window())?;
            Ok(format!("{}\n", digits.iter().map(|d| char::from(b'0' + d)).collect::<String>()))
        }
    }
}

fn run_command(a: RunArgs) -> Result<String, CliError> {
    let net = Network::load(&a.net)?;
    let precision = PrecisionBudget::new(a.precision, OnExhaustion::ReportUnknown)?;
    let outcome = run_with(&net, &a.word, a.budget, &precision)?;
    let mut text = String::new();
    if a.trace {
        let bits = |bs: &[bool]| bits_to_string(bs);
        for (t, tick) in outcome.trace.iter().enumerate() {
            text.push_str(&format!(
                "tick {t} in {} valid {} -> out {} valid {}{}\n",
                bits(&tick.data),
                u8::from(tick.validation),
                u8::from(tick.out_data),
                u8::from(tick.out_validation),
                if tick.out_flag { " flag" } else { "" }
            ));
        }
    }
    if outcome.flagged {
        return Err(CliError::Domain("horizon exceeded: the network raised its flag line".into()));
    }
    match outcome.verdict {
        Verdict::Timeout => Err(CliError::Domain(format!("timeout: no verdict within {} ticks", a.budget))),
        v => {
            text.push_str(&format!("{v}\n"));
            Ok(text)
        }
    }
}

/// How the network file at `out` should name `table`: relative when the
/// table sits under the output directory, absolute otherwise.
fn table_reference(table: &Path, out: Option<&Path>) -> Result<String, CliError> {
    let abs = std::fs::canonicalize(table).map_err(|e| CliError::Usage(format!("{}: {e}", table.display())))?;
    let dir = match out {
        Some(o) => o.parent().map(Path::to_path_buf).unwrap_or_default(),
        None => PathBuf::from("."),
    };
    let dir = if dir.as_os_str().is_empty() { PathBuf::from(".") } else { dir };
    if let Ok(dir) = std::fs::canonicalize(&dir) {
        if let Ok(rel) = abs.strip_prefix(&dir) {
            return Ok(rel.display().to_string());
        }
    }
    Ok(abs.display().to_string())
}

fn emit(text: &str, out: Option<&Path>) -> Result<String, CliError> {
    match out {
        Some(path) => {
            write_atomic(path, text)?;
            Ok(String::new())
        }
        None => Ok(text.to_string()),
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Usage(format!("{}: {e}", path.display()));
    let name = path.file_name().ok_or_else(|| CliError::Usage(format!("{}: not a file path", path.display())))?;
    let mut tmp_name = OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = std::fs::write(&tmp, text).and_then(|()| std::fs::rename(&tmp, path));
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(io)
}
