//! Network text format.
//!
//! ```text
//! neurons 3 inputs 2
//! alphabet ab
//! a 0 1 rat:1/4
//! b 0 2 int:1          # column M is the validation line
//! c 2 oracle:table.txt:cantor4@0'
//! activation 1 sig
//! out_data 1
//! out_valid 2
//! ```
//!
//! Optional records beyond the core set: `alphabet`, `out_flag i`,
//! `name i <text>`, and `stream:p/q[:base][@label]` scalars. Oracle table
//! paths are resolved against the network file's directory.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::builder::NeuronSpec;
use super::{Activation, Network, NetworkError, Source};
use crate::codec::{Alphabet, OracleTable};
use crate::degrees::DegreeLabel;
use crate::format::{self, ParseError};
use crate::numerics::{ExactScalar, Packing, Rational, ScalarKind, UnitReal};

/// Loaded oracle tables, keyed by resolved path, so that repeated
/// references share one table.
#[derive(Default)]
pub struct TableCache {
    tables: HashMap<PathBuf, Arc<OracleTable>>,
}

impl TableCache {
    fn get(&mut self, written: &str, base_dir: &Path) -> Result<Arc<OracleTable>, String> {
        let resolved = base_dir.join(written);
        if let Some(t) = self.tables.get(&resolved) {
            return Ok(t.clone());
        }
        let table = OracleTable::load(&resolved).map_err(|e| format!("oracle table {}: {e}", resolved.display()))?;
        let table = Arc::new(table.with_source(written));
        self.tables.insert(resolved, table.clone());
        Ok(table)
    }
}

/// Parses a scalar token: `int:k`, `rat:p/q`, `oracle:<file>:<binary|cantor4>`
/// or `stream:p/q[:base]`, the lazy forms optionally suffixed `@label`.
pub fn parse_scalar(token: &str, base_dir: &Path, cache: &mut TableCache) -> Result<ExactScalar, String> {
    let (body, label) = match token.rsplit_once('@') {
        Some((b, l)) if token.starts_with("oracle:") || token.starts_with("stream:") => {
            if !DegreeLabel::is_valid_name(l) {
                return Err(format!("invalid degree label `{l}`"));
            }
            (b, Some(DegreeLabel::new(l)))
        }
        _ => (token, None),
    };
    let scalar = if let Some(k) = body.strip_prefix("int:") {
        let n: num_bigint::BigInt = k.parse().map_err(|_| format!("bad integer `{k}`"))?;
        ExactScalar::integer(n)
    } else if let Some(q) = body.strip_prefix("rat:") {
        let q: Rational = q.parse().map_err(|e| format!("bad rational `{q}`: {e}"))?;
        ExactScalar::rational(q)
    } else if let Some(rest) = body.strip_prefix("oracle:") {
        let (path, enc) = rest.rsplit_once(':').ok_or_else(|| format!("oracle scalar `{token}` needs `:<encoding>`"))?;
        let packing = Packing::from_name(enc).ok_or_else(|| format!("unknown oracle encoding `{enc}`"))?;
        ExactScalar::oracle(cache.get(path, base_dir)?, packing)
    } else if let Some(rest) = body.strip_prefix("stream:") {
        let (q, base) = match rest.split_once(':') {
            Some((q, b)) => (q, b.parse::<u32>().map_err(|_| format!("bad stream base `{b}`"))?),
            None => (rest, 2),
        };
        let q: Rational = q.parse().map_err(|e| format!("bad rational `{q}`: {e}"))?;
        ExactScalar::stream(UnitReal::from_rational(&q, base).map_err(|e| e.to_string())?)
    } else {
        return Err(format!("unrecognized scalar `{token}`"));
    };
    match label {
        Some(l) => scalar.with_label(l).map_err(|e| e.to_string()),
        None => Ok(scalar),
    }
}

fn scalar_text(s: &ExactScalar) -> Result<String, NetworkError> {
    match s.kind() {
        ScalarKind::Oracle { table, .. } if table.source().is_none() => {
            Err(NetworkError::Config("oracle table has no file to reference".into()))
        }
        ScalarKind::Stream(r) if r.as_fraction().is_none() => {
            Err(NetworkError::Config("generated stream cannot be written to a network file".into()))
        }
        _ => Ok(s.to_string()),
    }
}

fn default_alphabet(m: usize) -> Option<Alphabet> {
    if (1..=26).contains(&m) {
        Alphabet::new((b'a'..b'a' + m as u8).map(char::from)).ok()
    } else {
        None
    }
}

impl Network {
    /// Parses a network; oracle table paths are resolved against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Network, ParseError> {
        let mut cache = TableCache::default();
        let mut lines = format::records(text);
        let (n, m) = match lines.next() {
            Some((line_no, header)) => match header.split_whitespace().collect::<Vec<_>>().as_slice() {
                ["neurons", n, "inputs", m] => (format::parse_usize(n, line_no)?, format::parse_usize(m, line_no)?),
                _ => return Err(ParseError::at(line_no, "expected header `neurons N inputs M`")),
            },
            None => return Err(ParseError::at(1, "empty network file")),
        };
        let mut neurons: Vec<NeuronSpec> = (0..n)
            .map(|_| NeuronSpec {
                activation: Activation::SaturatedLinear,
                bias: ExactScalar::zero(),
                inputs: BTreeMap::new(),
                name: None,
            })
            .collect();
        let mut alphabet = None;
        let (mut out_data, mut out_valid, mut out_flag) = (None, None, None);
        let neuron = |s: &str, line_no: usize| -> Result<usize, ParseError> {
            let i = format::parse_usize(s, line_no)?;
            if i >= n {
                return Err(ParseError::at(line_no, format!("neuron {i} out of range for {n} neurons")));
            }
            Ok(i)
        };
        for (line_no, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let scalar = |tok: &str, cache: &mut TableCache| {
                parse_scalar(tok, base_dir, cache).map_err(|e| ParseError::at(line_no, e))
            };
            match fields.as_slice() {
                ["a", i, j, s] => {
                    let (i, j) = (neuron(i, line_no)?, neuron(j, line_no)?);
                    neurons[i].inputs.insert(Source::Neuron(j), scalar(s, &mut cache)?);
                }
                ["b", i, j, s] => {
                    let i = neuron(i, line_no)?;
                    let j = format::parse_usize(j, line_no)?;
                    let src = match j.cmp(&m) {
                        std::cmp::Ordering::Less => Source::Input(j),
                        std::cmp::Ordering::Equal => Source::Validation,
                        std::cmp::Ordering::Greater => {
                            return Err(ParseError::at(line_no, format!("input line {j} out of range for {m} data lines")))
                        }
                    };
                    neurons[i].inputs.insert(src, scalar(s, &mut cache)?);
                }
                ["c", i, s] => {
                    let i = neuron(i, line_no)?;
                    neurons[i].bias = scalar(s, &mut cache)?;
                }
                ["activation", i, act] => {
                    let i = neuron(i, line_no)?;
                    neurons[i].activation = match *act {
                        "sat" => Activation::SaturatedLinear,
                        "sig" => Activation::Signal,
                        _ => return Err(ParseError::at(line_no, format!("unknown activation `{act}`"))),
                    };
                }
                ["out_data", i] => out_data = Some(neuron(i, line_no)?),
                ["out_valid", i] => out_valid = Some(neuron(i, line_no)?),
                ["out_flag", i] => out_flag = Some(neuron(i, line_no)?),
                ["alphabet", syms] => {
                    alphabet = Some(Alphabet::parse(syms).map_err(|e| ParseError::at(line_no, e.to_string()))?)
                }
                ["name", i, rest @ ..] if !rest.is_empty() => {
                    let i = neuron(i, line_no)?;
                    neurons[i].name = Some(rest.join(" "));
                }
                _ => return Err(ParseError::at(line_no, format!("unrecognized record `{line}`"))),
            }
        }
        let out_data = out_data.ok_or_else(|| ParseError::at(0, "missing `out_data`"))?;
        let out_valid = out_valid.ok_or_else(|| ParseError::at(0, "missing `out_valid`"))?;
        let alphabet = alphabet.or_else(|| default_alphabet(m));
        Network::from_specs(m, alphabet, neurons, out_data, out_valid, out_flag).map_err(|e| ParseError::at(0, e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Network, ParseError> {
        let text = std::fs::read_to_string(path).map_err(|e| ParseError::io(path, e))?;
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, dir)
    }

    /// Serializes in the text format. Fails on scalars that have no textual
    /// form (generated streams, oracle tables not backed by a file).
    pub fn to_text(&self) -> Result<String, NetworkError> {
        let mut out = String::new();
        let m = self.n_inputs();
        writeln!(out, "neurons {} inputs {m}", self.n_neurons()).unwrap();
        if let Some(a) = self.alphabet().filter(|a| Some(*a) != default_alphabet(m).as_ref()) {
            writeln!(out, "alphabet {a}").unwrap();
        }
        for (i, spec) in self.neurons.iter().enumerate() {
            if let Some(name) = &spec.name {
                writeln!(out, "name {i} {name}").unwrap();
            }
            if spec.activation == Activation::Signal {
                writeln!(out, "activation {i} sig").unwrap();
            }
            if !spec.bias.is_zero() {
                writeln!(out, "c {i} {}", scalar_text(&spec.bias)?).unwrap();
            }
            for (src, w) in &spec.inputs {
                if w.is_zero() {
                    continue;
                }
                let w = scalar_text(w)?;
                match src {
                    Source::Neuron(j) => writeln!(out, "a {i} {j} {w}").unwrap(),
                    Source::Input(j) => writeln!(out, "b {i} {j} {w}").unwrap(),
                    Source::Validation => writeln!(out, "b {i} {m} {w}").unwrap(),
                }
            }
        }
        writeln!(out, "out_data {}", self.output_data()).unwrap();
        writeln!(out, "out_valid {}", self.output_validation()).unwrap();
        if let Some(f) = self.output_flag() {
            writeln!(out, "out_flag {f}").unwrap();
        }
        Ok(out)
    }
}
