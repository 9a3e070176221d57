//! The oracle-consulting network `M = N ∘ O`.
//!
//! `N` reads the word and leaves `ε·(index − 1)` in a counter neuron
//! (`ε = 1/(C + 1)` for capacity `C`), then drains the counter one `ε` at a
//! time, emitting one pulse on its data line per unit, every four ticks.
//! Its validation line stays up for the whole drain.
//!
//! `O` loads the oracle weight `o` into a register on the rising edge of
//! its validation line, pops one Cantor-4 digit per pulse, and on the
//! falling edge reports the top digit of what is left: digit `index` of
//! `o`. If nothing is left the flag line rises with the answer.

use super::compose::{compose_nets, Line};
use super::CompileError;
use crate::codec::{index_of_string, Alphabet};
use crate::network::{run, Network, NetworkBuilder, NeuronId, Source, Verdict};
use crate::numerics::{ExactScalar, Packing, Rational, ScalarKind};

#[derive(Clone, Debug)]
pub struct OracleNetSpec {
    /// A Cantor-4 oracle table, or a base-4 stream whose digits are 1 or 3.
    pub oracle: ExactScalar,
    pub alphabet: Alphabet,
    /// Largest string index the net is built to address. Defaults to the
    /// oracle's horizon.
    pub capacity: Option<u64>,
}

impl OracleNetSpec {
    pub fn new(oracle: ExactScalar, alphabet: Alphabet) -> Self {
        OracleNetSpec { oracle, alphabet, capacity: None }
    }

    fn validate(&self) -> Result<(u64, Option<u64>), CompileError> {
        let real = match self.oracle.kind() {
            ScalarKind::Oracle { packing: Packing::Binary, .. } => {
                return Err(CompileError::Construction(
                    "binary packing puts the digit test on its threshold; use cantor4".into(),
                ))
            }
            ScalarKind::Oracle { real, .. } | ScalarKind::Stream(real) => real,
            _ => return Err(CompileError::Construction("oracle weight must be an oracle table or a stream".into())),
        };
        if real.base() != 4 {
            return Err(CompileError::Construction(format!("oracle stream must be base 4, not base {}", real.base())));
        }
        let horizon = real.horizon();
        let capacity = self
            .capacity
            .or(horizon)
            .ok_or_else(|| CompileError::Construction("stream without horizon needs an explicit capacity".into()))?;
        if capacity == 0 {
            return Err(CompileError::Construction("capacity must be at least 1".into()));
        }
        Ok((capacity, horizon))
    }
}

fn eps(capacity: u64) -> Result<Rational, CompileError> {
    let c = i64::try_from(capacity).map_err(|_| CompileError::Construction("capacity too large".into()))?;
    Ok(Rational::new(1, c + 1).expect("positive denominator"))
}

/// Emits `N` into `b`, reading `b`'s own data and validation lines.
/// Returns the pulse and drain-active neurons.
fn emit_indexer(b: &mut NetworkBuilder, alphabet: &Alphabet, capacity: u64) -> Result<(NeuronId, NeuronId), CompileError> {
    let k = alphabet.len() as i64;
    let e = eps(capacity)?;
    let acc = b.sat("index_acc");
    b.connect_int(acc, acc, k).bias_int(acc, -k).connect_int(acc, Source::Validation, k);
    for r in 0..alphabet.len() {
        let w = &Rational::from_integer(r as i64 + 1) * &e;
        b.connect(acc, Source::Input(r), ExactScalar::rational(w));
    }
    let capture = b.sat("index_capture");
    b.connect_int(capture, acc, 1).connect_int(capture, Source::Validation, -1);
    let done = b.sig("input_done");
    b.connect_int(done, done, 1).bias_int(done, 1).connect_int(done, Source::Validation, -1);
    let edge = b.sig("input_fall");
    b.bias_int(edge, 1).connect_int(edge, Source::Validation, -1).connect_int(edge, done, -1);
    let mut delay = edge;
    for i in 1..=3 {
        let d = b.sig(&format!("delay{i}"));
        b.connect_int(d, delay, 1);
        delay = d;
    }
    let counter = b.sat("counter");
    let nonzero = b.sig("counter_nonzero");
    let ring: Vec<NeuronId> = (0..4).map(|i| b.sig(&format!("drain_phase{i}"))).collect();
    let pulse = b.sig("pulse");
    let finish = b.sig("drain_done");
    let active = b.sig("drain_active");
    b.connect_int(counter, counter, 1)
        .connect_int(counter, capture, 1)
        .connect(counter, pulse, ExactScalar::rational(-e));
    b.connect_int(nonzero, counter, 1);
    b.connect_int(ring[0], delay, 1).connect_int(ring[0], ring[3], 1);
    for i in 1..4 {
        b.connect_int(ring[i], ring[i - 1], 1);
    }
    b.connect_int(pulse, ring[0], 1).connect_int(pulse, nonzero, 1).bias_int(pulse, -1);
    b.connect_int(finish, ring[0], 1).connect_int(finish, nonzero, -1);
    b.connect_int(active, edge, 1).connect_int(active, active, 1).connect_int(active, finish, -1);
    Ok((pulse, active))
}

/// Emits `O` into `b`, with pulses arriving from `pulse` and validation
/// from `valid`. Returns (data, validation, flag) output neurons.
fn emit_extractor(b: &mut NetworkBuilder, oracle: &ExactScalar, pulse: Source, valid: Source) -> (NeuronId, NeuronId, NeuronId) {
    let prev = b.sig("valid_prev");
    b.connect_int(prev, valid, 1);
    let rise = b.sig("valid_rise");
    b.connect_int(rise, valid, 1).connect_int(rise, prev, -1);
    let fall = b.sig("valid_fall");
    b.connect_int(fall, prev, 1).connect_int(fall, valid, -1);
    let x = b.sat("oracle_register");
    let top = b.sig("oracle_top");
    b.connect_int(top, x, 4).bias_int(top, -2);
    let ne = b.sig("oracle_nonempty");
    b.connect_int(ne, x, 1);
    let cand = b.sat("oracle_popped");
    b.connect_int(cand, x, 4).connect_int(cand, top, -2).bias_int(cand, -1);
    let sel = b.sat("oracle_select");
    b.connect_int(sel, cand, 1).connect_int(sel, pulse, 1).bias_int(sel, -1);
    let clear = b.sat("oracle_clear");
    b.connect_int(clear, x, 1).connect_int(clear, pulse, 1).bias_int(clear, -1);
    b.connect_int(x, x, 1)
        .connect(x, rise, oracle.clone())
        .connect_int(x, clear, -1)
        .connect_int(x, sel, 1);
    let data = b.sig("answer");
    b.connect_int(data, fall, 1).connect_int(data, top, 1).bias_int(data, -1);
    let out_valid = b.sig("answer_valid");
    b.connect_int(out_valid, fall, 1);
    let flag = b.sig("past_horizon");
    b.connect_int(flag, fall, 1).connect_int(flag, ne, -1);
    (data, out_valid, flag)
}

/// The indexer `N` alone: data line pulses `index − 1` times, validation
/// covers the drain.
pub fn index_net(alphabet: &Alphabet, capacity: u64) -> Result<Network, CompileError> {
    let mut b = NetworkBuilder::for_alphabet(alphabet.clone());
    let (pulse, active) = emit_indexer(&mut b, alphabet, capacity)?;
    b.set_outputs(pulse, active);
    Ok(b.build()?)
}

/// The extractor `O` alone, with one data line (symbol `1`) carrying the
/// pop pulses.
pub fn extractor_net(oracle: &ExactScalar) -> Result<Network, CompileError> {
    OracleNetSpec::new(oracle.clone(), Alphabet::parse("1").expect("valid alphabet")).validate()?;
    let mut b = NetworkBuilder::for_alphabet(Alphabet::parse("1").expect("valid alphabet"));
    let (data, valid, flag) = emit_extractor(&mut b, oracle, Source::Input(0), Source::Validation);
    b.set_outputs(data, valid).set_flag(flag);
    Ok(b.build()?)
}

/// `compose_nets(index_net, extractor_net)`, wired pulse → data line.
pub fn composed_oracle_net(spec: &OracleNetSpec) -> Result<Network, CompileError> {
    let (capacity, _) = spec.validate()?;
    compose_nets(&index_net(&spec.alphabet, capacity)?, &extractor_net(&spec.oracle)?, &[Line::Data])
}

/// A compiled oracle net together with what is needed to drive it.
#[derive(Clone, Debug)]
pub struct OracleNet {
    net: Network,
    alphabet: Alphabet,
    capacity: u64,
    horizon: Option<u64>,
}

/// Builds `M = N ∘ O` in one network.
pub fn oracle_net(spec: &OracleNetSpec) -> Result<OracleNet, CompileError> {
    let (capacity, horizon) = spec.validate()?;
    let mut b = NetworkBuilder::for_alphabet(spec.alphabet.clone());
    let (pulse, active) = emit_indexer(&mut b, &spec.alphabet, capacity)?;
    let (data, valid, flag) = emit_extractor(&mut b, &spec.oracle, pulse.into(), active.into());
    b.set_outputs(data, valid).set_flag(flag);
    Ok(OracleNet { net: b.build()?, alphabet: spec.alphabet.clone(), capacity, horizon })
}

impl OracleNet {
    pub fn net(&self) -> &Network {
        &self.net
    }

    pub fn into_net(self) -> Network {
        self.net
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn horizon(&self) -> Option<u64> {
        self.horizon
    }

    /// Ticks until the answer for a word of length `len` and index `index`.
    pub fn ticks_for(&self, len: usize, index: u64) -> usize {
        let pops = (index - 1).min(self.capacity + 1) as usize;
        len + 9 + 4 * pops
    }

    /// A budget that suffices for every word of length `len`.
    pub fn budget_for_len(&self, len: usize) -> usize {
        len + 9 + 4 * (self.capacity as usize + 1)
    }

    /// Runs the network on `word`. Indices past the horizon are refused
    /// before running; a raised flag line is reported the same way.
    pub fn decide(&self, word: &str) -> Result<bool, CompileError> {
        let index = index_of_string(word, &self.alphabet)?;
        let limit = self.horizon.unwrap_or(self.capacity).min(self.capacity);
        if index > limit {
            return Err(CompileError::HorizonExceeded { index, horizon: limit });
        }
        let out = run(&self.net, word, self.ticks_for(word.chars().count(), index))?;
        if out.flagged {
            return Err(CompileError::HorizonExceeded { index, horizon: limit });
        }
        match out.verdict {
            Verdict::Accept => Ok(true),
            Verdict::Reject => Ok(false),
            Verdict::Timeout => Err(CompileError::Timeout),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::codec::{cantor_encode, characteristic_bits, Language, OracleTable, Rule};
    use crate::numerics::UnitReal;

    fn lr_oracle() -> (ExactScalar, Alphabet) {
        let ab = Alphabet::parse("ab").unwrap();
        let lang = Language::rule(ab.clone(), Rule::regex("ab*").unwrap());
        let bits = characteristic_bits(&lang, 25).unwrap();
        (ExactScalar::oracle(Arc::new(OracleTable::from_bits(bits)), Packing::Cantor4), ab)
    }

    #[test]
    fn decides_l() {
        let (o, ab) = lr_oracle();
        let m = oracle_net(&OracleNetSpec::new(o, ab)).unwrap();
        assert!(m.decide("ab").unwrap());
        assert!(!m.decide("b").unwrap());
        assert!(!m.decide("").unwrap());
        assert!(m.decide("a").unwrap());
        assert!(m.decide("abbb").unwrap());
        assert!(matches!(m.decide("abbbb"), Err(CompileError::HorizonExceeded { .. })));
    }

    #[test]
    fn flag_rises_past_horizon() {
        let (o, ab) = lr_oracle();
        let m = oracle_net(&OracleNetSpec { oracle: o, alphabet: ab, capacity: Some(40) }).unwrap();
        // index 26 is inside the counter's capacity but past the table.
        let w = crate::codec::string_of_index(26, &m.alphabet).unwrap();
        let out = run(m.net(), &w, m.budget_for_len(w.len())).unwrap();
        assert!(out.flagged);
        assert_eq!(out.verdict, Verdict::Reject);
    }

    #[test]
    fn binary_packing_refused() {
        let t = Arc::new(OracleTable::from_bits(vec![true]));
        let spec = OracleNetSpec::new(ExactScalar::oracle(t, Packing::Binary), Alphabet::parse("ab").unwrap());
        assert!(matches!(oracle_net(&spec), Err(CompileError::Construction(_))));
    }

    #[test]
    fn finite_stream_oracle() {
        let bits = [false, true, true];
        let digits = bits.iter().map(|&b| 2 * u8::from(b) + 1).collect();
        let real = UnitReal::from_digits(digits, 4).unwrap();
        assert_eq!(real.enclosure(3).unwrap().lo, cantor_encode(&bits));
        let m = oracle_net(&OracleNetSpec::new(ExactScalar::stream(real), Alphabet::parse("ab").unwrap())).unwrap();
        assert_eq!([m.decide("").unwrap(), m.decide("a").unwrap(), m.decide("b").unwrap()], bits);
    }

    #[test]
    fn composition_matches_monolith() {
        let (o, ab) = lr_oracle();
        let spec = OracleNetSpec::new(o, ab.clone());
        let mono = oracle_net(&spec).unwrap();
        let comp = composed_oracle_net(&spec).unwrap();
        assert_eq!(comp.n_neurons(), mono.net().n_neurons());
        for w in ["", "a", "ab", "ba", "abb"] {
            let budget = mono.budget_for_len(w.len());
            assert_eq!(run(&comp, w, budget).unwrap(), run(mono.net(), w, budget).unwrap());
        }
    }
}
