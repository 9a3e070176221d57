use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::CompileError;
use crate::codec::Alphabet;
use crate::format::{self, ParseError};
use crate::network::{Network, NetworkBuilder, NeuronId, Source};

/// Deterministic finite automaton with a total transition function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    names: Vec<String>,
    alphabet: Alphabet,
    /// `delta[q][rank]`
    delta: Vec<Vec<usize>>,
    start: usize,
    accepting: Vec<bool>,
}

impl Dfa {
    pub fn new(
        names: Vec<String>,
        alphabet: Alphabet,
        delta: Vec<Vec<usize>>,
        start: usize,
        accepting: Vec<bool>,
    ) -> Result<Self, CompileError> {
        let n = names.len();
        if n == 0 {
            return Err(CompileError::Construction("automaton has no states".into()));
        }
        if start >= n || accepting.len() != n || delta.len() != n {
            return Err(CompileError::Construction("state tables disagree in size".into()));
        }
        for (q, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(CompileError::Construction(format!("state `{}` has a partial transition row", names[q])));
            }
            if let Some(bad) = row.iter().find(|&&p| p >= n) {
                return Err(CompileError::Construction(format!("transition to unknown state {bad}")));
            }
        }
        Ok(Dfa { names, alphabet, delta, start, accepting })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n_states(&self) -> usize {
        self.names.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn next(&self, q: usize, rank: usize) -> usize {
        self.delta[q][rank]
    }

    pub fn accepts(&self, word: &str) -> Result<bool, CompileError> {
        let ranks = self.alphabet.ranks(word)?;
        let end = ranks.iter().fold(self.start, |q, &r| self.delta[q][r]);
        Ok(self.accepting[end])
    }

    /// Parses `state <name> [accept] [start]` and `trans <from> <symbol> <to>`
    /// lines. An `alphabet <symbols>` line fixes the symbol order; without
    /// one the alphabet is the sorted set of symbols used by transitions.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut names = Vec::new();
        let mut ids = HashMap::new();
        let mut accepting = Vec::new();
        let mut start = None;
        let mut alphabet = None;
        let mut trans = Vec::new();
        for (line_no, line) in format::records(text) {
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["state", name, flags @ ..] => {
                    if ids.insert(name.to_string(), names.len()).is_some() {
                        return Err(ParseError::at(line_no, format!("state `{name}` declared twice")));
                    }
                    let mut acc = false;
                    for f in flags {
                        match *f {
                            "accept" => acc = true,
                            "start" if start.is_none() => start = Some(names.len()),
                            "start" => return Err(ParseError::at(line_no, "second start state")),
                            _ => return Err(ParseError::at(line_no, format!("unknown state flag `{f}`"))),
                        }
                    }
                    names.push(name.to_string());
                    accepting.push(acc);
                }
                ["trans", from, sym, to] => {
                    let mut chars = sym.chars();
                    let c = match (chars.next(), chars.next()) {
                        (Some(c), None) => c,
                        _ => return Err(ParseError::at(line_no, format!("symbol `{sym}` is not one character"))),
                    };
                    trans.push((line_no, from.to_string(), c, to.to_string()));
                }
                ["alphabet", syms] => {
                    alphabet = Some(Alphabet::parse(syms).map_err(|e| ParseError::at(line_no, e.to_string()))?)
                }
                _ => return Err(ParseError::at(line_no, format!("unrecognized record `{line}`"))),
            }
        }
        let alphabet = match alphabet {
            Some(a) => a,
            None => {
                let mut syms: Vec<char> = trans.iter().map(|t| t.2).collect();
                syms.sort_unstable();
                syms.dedup();
                Alphabet::new(syms).map_err(|e| ParseError::at(0, e.to_string()))?
            }
        };
        let mut delta = vec![vec![None; alphabet.len()]; names.len()];
        for (line_no, from, c, to) in trans {
            let lookup = |n: &str| ids.get(n).copied().ok_or_else(|| ParseError::at(line_no, format!("unknown state `{n}`")));
            let (p, q) = (lookup(&from)?, lookup(&to)?);
            let r = alphabet
                .rank(c)
                .ok_or_else(|| ParseError::at(line_no, format!("symbol `{c}` not in alphabet `{alphabet}`")))?;
            if delta[p][r].replace(q).is_some() {
                return Err(ParseError::at(line_no, format!("second transition from `{from}` on `{c}`")));
            }
        }
        let delta = delta
            .into_iter()
            .enumerate()
            .map(|(p, row)| {
                row.into_iter()
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| ParseError::at(0, format!("state `{}` is missing transitions", names[p])))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let start = start.ok_or_else(|| ParseError::at(0, "no start state"))?;
        Dfa::new(names, alphabet, delta, start, accepting).map_err(|e| ParseError::at(0, e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ParseError> {
        let text = std::fs::read_to_string(path).map_err(|e| ParseError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "alphabet {}", self.alphabet).unwrap();
        for (q, name) in self.names.iter().enumerate() {
            write!(out, "state {name}").unwrap();
            if self.accepting[q] {
                out.push_str(" accept");
            }
            if q == self.start {
                out.push_str(" start");
            }
            out.push('\n');
        }
        for (q, row) in self.delta.iter().enumerate() {
            for (r, &p) in row.iter().enumerate() {
                let c = self.alphabet.symbol(r).unwrap();
                writeln!(out, "trans {} {c} {}", self.names[q], self.names[p]).unwrap();
            }
        }
        out
    }
}

/// Compiles a DFA into an integer-weight network of Signal neurons.
///
/// One conjunction neuron `g[q,s]` per state and symbol holds "the
/// automaton was in `q` and read `s`". The current state is the sum of the
/// conjunctions entering it, plus the start state while the `alive` neuron
/// is still 0:
///
/// ```text
/// S_q(t)       = [q = start]·(1 − alive(t)) + Σ_{δ(p,s') = q} g[p,s'](t)
/// g[q,s](t+1)  = signal(S_q(t) + u_s(t) − 1)
/// valid(t+1)   = signal(Σ_q S_q(t) − v(t))
/// data(t+1)    = signal(Σ_{q ∈ F} S_q(t) − v(t))
/// ```
///
/// The verdict appears on the tick after the last symbol.
pub fn dfa_to_net(d: &Dfa) -> Result<Network, CompileError> {
    let k = d.alphabet.len();
    let mut b = NetworkBuilder::for_alphabet(d.alphabet.clone());
    let alive = b.sig("alive");
    b.bias_int(alive, 1);
    let g: Vec<Vec<NeuronId>> = (0..d.n_states())
        .map(|q| (0..k).map(|s| b.sig(&format!("g[{},{}]", d.names[q], d.alphabet.symbols()[s]))).collect())
        .collect();
    let valid = b.sig("valid");
    let data = b.sig("data");

    // Adds S_q(t)·w to `target`.
    let add_state = |b: &mut NetworkBuilder, target: NeuronId, q: usize, w: i64| {
        if q == d.start {
            b.bias_int(target, w).connect_int(target, alive, -w);
        }
        for (row, gates) in d.delta.iter().zip(&g) {
            for (&to, &gate) in row.iter().zip(gates) {
                if to == q {
                    b.connect_int(target, gate, w);
                }
            }
        }
    };
    for (q, gates) in g.iter().enumerate() {
        for (s, &n) in gates.iter().enumerate() {
            add_state(&mut b, n, q, 1);
            b.connect_int(n, Source::Input(s), 1).bias_int(n, -1);
        }
        add_state(&mut b, valid, q, 1);
        if d.accepting[q] {
            add_state(&mut b, data, q, 1);
        }
    }
    b.connect_int(valid, Source::Validation, -1);
    b.connect_int(data, Source::Validation, -1);
    b.set_outputs(data, valid);
    Ok(b.build()?)
}
