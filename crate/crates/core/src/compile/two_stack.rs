use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::path::Path;

use super::CompileError;
use crate::codec::Alphabet;
use crate::format::{self, ParseError};
use crate::network::{Network, NetworkBuilder, NeuronId, Source};

/// What a rule requires of the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Read {
    /// Consume this symbol (by rank).
    Symbol(usize),
    /// The input is exhausted; consumes nothing.
    End,
    /// No condition; consumes nothing.
    Any,
}

/// What a rule requires of a stack top. `Zero` and `One` pop the bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pop {
    Zero,
    One,
    Empty,
    Any,
}

impl Pop {
    fn overlaps(self, other: Pop) -> bool {
        self == Pop::Any || other == Pop::Any || self == other
    }

    fn pops(self) -> bool {
        matches!(self, Pop::Zero | Pop::One)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Push {
    Zero,
    One,
    Nothing,
}

impl Push {
    fn bit(self) -> Option<bool> {
        match self {
            Push::Zero => Some(false),
            Push::One => Some(true),
            Push::Nothing => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub from: usize,
    pub read: Read,
    pub pop: [Pop; 2],
    pub to: usize,
    pub push: [Push; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MachineOutcome {
    Accept,
    Reject,
    Timeout,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MachineRun {
    pub outcome: MachineOutcome,
    /// Rules applied before halting (or before giving up).
    pub steps: usize,
}

/// Finite control, a read-only input tape and two binary stacks.
///
/// Accepting states halt and accept. A non-accepting configuration with no
/// applicable rule halts and rejects. Pops happen before pushes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoStackMachine {
    names: Vec<String>,
    alphabet: Alphabet,
    start: usize,
    accepting: Vec<bool>,
    rules: Vec<Rule>,
}

impl TwoStackMachine {
    /// Rejects nondeterministic rule sets: two rules from one state whose
    /// conditions can hold together.
    pub fn new(
        names: Vec<String>,
        alphabet: Alphabet,
        start: usize,
        accepting: Vec<bool>,
        rules: Vec<Rule>,
    ) -> Result<Self, CompileError> {
        let n = names.len();
        if start >= n || accepting.len() != n {
            return Err(CompileError::Construction("state tables disagree in size".into()));
        }
        for r in &rules {
            if r.from >= n || r.to >= n {
                return Err(CompileError::Construction("rule refers to an unknown state".into()));
            }
            if let Read::Symbol(s) = r.read {
                if s >= alphabet.len() {
                    return Err(CompileError::Construction(format!("rule reads unknown symbol rank {s}")));
                }
            }
        }
        for (i, a) in rules.iter().enumerate() {
            for b in &rules[i + 1..] {
                let read_overlap = a.read == Read::Any || b.read == Read::Any || a.read == b.read;
                if a.from == b.from && read_overlap && a.pop[0].overlaps(b.pop[0]) && a.pop[1].overlaps(b.pop[1]) {
                    return Err(CompileError::Construction(format!(
                        "nondeterministic rules from state `{}`: `{}` and `{}`",
                        names[a.from],
                        RuleText(a, &names, &alphabet),
                        RuleText(b, &names, &alphabet)
                    )));
                }
            }
        }
        Ok(TwoStackMachine { names, alphabet, start, accepting, rules })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn n_states(&self) -> usize {
        self.names.len()
    }

    /// Direct simulation for at most `max_steps` rule applications.
    pub fn simulate(&self, word: &str, max_steps: usize) -> Result<MachineRun, CompileError> {
        let input = self.alphabet.ranks(word)?;
        let mut pos = 0;
        let mut stacks: [Vec<bool>; 2] = [Vec::new(), Vec::new()];
        let mut q = self.start;
        let mut steps = 0;
        loop {
            if self.accepting[q] {
                return Ok(MachineRun { outcome: MachineOutcome::Accept, steps });
            }
            let next = input.get(pos).copied();
            let rule = self.rules.iter().find(|r| {
                r.from == q
                    && match r.read {
                        Read::Symbol(s) => next == Some(s),
                        Read::End => next.is_none(),
                        Read::Any => true,
                    }
                    && (0..2).all(|i| match r.pop[i] {
                        Pop::Zero => stacks[i].last() == Some(&false),
                        Pop::One => stacks[i].last() == Some(&true),
                        Pop::Empty => stacks[i].is_empty(),
                        Pop::Any => true,
                    })
            });
            let Some(rule) = rule else {
                return Ok(MachineRun { outcome: MachineOutcome::Reject, steps });
            };
            if steps == max_steps {
                return Ok(MachineRun { outcome: MachineOutcome::Timeout, steps });
            }
            if matches!(rule.read, Read::Symbol(_)) {
                pos += 1;
            }
            for (i, stack) in stacks.iter_mut().enumerate() {
                if rule.pop[i].pops() {
                    stack.pop();
                }
                if let Some(b) = rule.push[i].bit() {
                    stack.push(b);
                }
            }
            q = rule.to;
            steps += 1;
        }
    }

    /// Parses `alphabet <symbols>`, `state <name> [accept] [start]` and
    /// `rule <q> <read> <pop1> <pop2> -> <q'> <push1> <push2>` lines, where
    /// read is a symbol, `$` (end of input) or `-`; pops are `0`, `1`, `e`
    /// (empty) or `-`; pushes are `0`, `1` or `-`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut names = Vec::new();
        let mut ids = HashMap::new();
        let mut accepting = Vec::new();
        let mut start = None;
        let mut alphabet = None;
        let mut raw_rules = Vec::new();
        for (line_no, line) in format::records(text) {
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["alphabet", syms] => {
                    alphabet = Some(Alphabet::parse(syms).map_err(|e| ParseError::at(line_no, e.to_string()))?)
                }
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
                ["rule", from, read, p1, p2, "->", to, u1, u2] => {
                    raw_rules.push((line_no, [*from, *read, *p1, *p2, *to, *u1, *u2].map(str::to_string)))
                }
                _ => return Err(ParseError::at(line_no, format!("unrecognized record `{line}`"))),
            }
        }
        let alphabet = alphabet.ok_or_else(|| ParseError::at(0, "missing `alphabet` line"))?;
        let mut rules = Vec::new();
        for (line_no, [from, read, p1, p2, to, u1, u2]) in raw_rules {
            let state = |n: &str| ids.get(n).copied().ok_or_else(|| ParseError::at(line_no, format!("unknown state `{n}`")));
            let read = match read.as_str() {
                "$" => Read::End,
                "-" => Read::Any,
                s => {
                    let mut cs = s.chars();
                    match (cs.next(), cs.next()) {
                        (Some(c), None) => Read::Symbol(alphabet.rank(c).ok_or_else(|| {
                            ParseError::at(line_no, format!("symbol `{c}` not in alphabet `{alphabet}`"))
                        })?),
                        _ => return Err(ParseError::at(line_no, format!("bad read condition `{s}`"))),
                    }
                }
            };
            let pop = |s: &str| match s {
                "0" => Ok(Pop::Zero),
                "1" => Ok(Pop::One),
                "e" => Ok(Pop::Empty),
                "-" => Ok(Pop::Any),
                _ => Err(ParseError::at(line_no, format!("bad pop condition `{s}`"))),
            };
            let push = |s: &str| match s {
                "0" => Ok(Push::Zero),
                "1" => Ok(Push::One),
                "-" => Ok(Push::Nothing),
                _ => Err(ParseError::at(line_no, format!("bad push `{s}`"))),
            };
            rules.push(Rule {
                from: state(&from)?,
                read,
                pop: [pop(&p1)?, pop(&p2)?],
                to: state(&to)?,
                push: [push(&u1)?, push(&u2)?],
            });
        }
        let start = start.ok_or_else(|| ParseError::at(0, "no start state"))?;
        TwoStackMachine::new(names, alphabet, start, accepting, rules).map_err(|e| ParseError::at(0, e.to_string()))
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
        for r in &self.rules {
            writeln!(out, "rule {}", RuleText(r, &self.names, &self.alphabet)).unwrap();
        }
        out
    }
}

struct RuleText<'a>(&'a Rule, &'a [String], &'a Alphabet);

impl fmt::Display for RuleText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let RuleText(r, names, alphabet) = self;
        let read = match r.read {
            Read::Symbol(s) => alphabet.symbol(s).unwrap().to_string(),
            Read::End => "$".into(),
            Read::Any => "-".into(),
        };
        let pop = |p: Pop| match p {
            Pop::Zero => "0",
            Pop::One => "1",
            Pop::Empty => "e",
            Pop::Any => "-",
        };
        let push = |p: Push| match p {
            Push::Zero => "0",
            Push::One => "1",
            Push::Nothing => "-",
        };
        write!(
            f,
            "{} {read} {} {} -> {} {} {}",
            names[r.from],
            pop(r.pop[0]),
            pop(r.pop[1]),
            names[r.to],
            push(r.push[0]),
            push(r.push[1])
        )
    }
}

/// Ticks the compiled network needs to answer on a word of length
/// `word_len` that the machine decides in `steps` rule applications.
pub fn two_stack_ticks(word_len: usize, steps: usize) -> usize {
    word_len + 5 + 4 * steps
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Write {
    Push(bool),
    Pop,
    PopPush(bool),
}

struct Register {
    value: NeuronId,
    /// Write kind, candidate neuron, rules performing it.
    writes: Vec<(Write, NeuronId, Vec<usize>)>,
}

/// Compiles a deterministic two-stack machine into a network with integer
/// and rational weights.
///
/// The word is first copied into an input buffer neuron in base `β = 2k`
/// (symbol of rank `j` is digit `2j + 1`, first symbol on top). Each stack
/// is one neuron holding a Cantor-4 packing. A ring of four phase neurons
/// then runs one machine step per four ticks: on phase 0 every rule neuron
/// tests its state, input and stack-top literals; the winner selects
/// precomputed candidate values for the registers it writes; the registers
/// swap two ticks later. The output lines rise on phase 1 of the first
/// cycle in which no rule fires.
pub fn two_stack_to_net(m: &TwoStackMachine) -> Result<Network, CompileError> {
    let k = m.alphabet.len();
    let beta = 2 * k.max(2) as i64;
    let mut b = NetworkBuilder::for_alphabet(m.alphabet.clone());

    // Load phase.
    let alive = b.sig("alive");
    b.bias_int(alive, 1);
    let scale = b.sat("scale");
    b.connect_ratio(scale, scale, 1, beta)
        .connect_ratio(scale, alive, -1, beta)
        .bias_ratio(scale, 1 - beta, beta)
        .connect_int(scale, Source::Validation, 1);
    let mut gated = Vec::new();
    for j in 0..k {
        let sym = m.alphabet.symbols()[j];
        let held = b.sig(&format!("in[{sym}]"));
        b.connect_int(held, Source::Input(j), 1);
        let g = b.sat(&format!("gated[{sym}]"));
        b.connect_int(g, scale, 2 * j as i64 + 1).connect_int(g, held, 1).bias_int(g, -1);
        gated.push(g);
    }
    let ended = b.sig("ended");
    b.connect_int(ended, ended, 1).bias_int(ended, 1).connect_int(ended, Source::Validation, -1);
    let ended_prev = b.sig("ended_prev");
    b.connect_int(ended_prev, ended, 1);
    let pulse = b.sig("pulse");
    b.connect_int(pulse, ended, 1).connect_int(pulse, ended_prev, -1);
    let phase: Vec<NeuronId> = (0..4).map(|i| b.sig(&format!("phase{i}"))).collect();
    b.connect_int(phase[0], pulse, 1).connect_int(phase[0], phase[3], 1);
    for i in 1..4 {
        b.connect_int(phase[i], phase[i - 1], 1);
    }

    // Registers and their derived bits.
    let buffer = b.sat("buffer");
    let stacks = [b.sat("stack1"), b.sat("stack2")];
    let nonempty_buf = b.sig("buffer_nonempty");
    b.connect_int(nonempty_buf, buffer, 1);
    // th[i] = 1 iff top buffer digit ≥ 2i + 1; th[0] is "nonempty".
    let mut th = vec![nonempty_buf];
    for i in 1..k {
        let t = b.sig(&format!("buffer_top>={i}"));
        b.connect_int(t, buffer, beta).bias_int(t, -2 * i as i64);
        th.push(t);
    }
    let mut ne = Vec::new();
    let mut top = Vec::new();
    for (i, &s) in stacks.iter().enumerate() {
        let n = b.sig(&format!("stack{}_nonempty", i + 1));
        b.connect_int(n, s, 1);
        let t = b.sig(&format!("stack{}_top", i + 1));
        b.connect_int(t, s, 4).bias_int(t, -2);
        ne.push(n);
        top.push(t);
    }

    // Control.
    let control: Vec<NeuronId> = m.names.iter().map(|n| b.sig(&format!("state[{n}]"))).collect();
    for (q, &c) in control.iter().enumerate() {
        b.connect_int(c, c, 1);
        if q == m.start {
            b.connect_int(c, pulse, 1);
        }
    }
    let live_rules: Vec<usize> = (0..m.rules.len()).filter(|&r| !m.accepting[m.rules[r].from]).collect();
    let mut fire = HashMap::new();
    for &r in &live_rules {
        let rule = &m.rules[r];
        let f = b.sig(&format!("rule{r}"));
        b.connect_int(f, phase[0], 1).connect_int(f, control[rule.from], 1);
        let mut lits = 0;
        match rule.read {
            Read::Symbol(j) => {
                b.connect_int(f, th[j], 1);
                if j + 1 < k {
                    b.connect_int(f, th[j + 1], -1);
                }
                lits += 1;
            }
            Read::End => {
                b.bias_int(f, 1).connect_int(f, nonempty_buf, -1);
                lits += 1;
            }
            Read::Any => {}
        }
        for i in 0..2 {
            match rule.pop[i] {
                Pop::Zero => {
                    b.connect_int(f, ne[i], 1).connect_int(f, top[i], -1);
                }
                Pop::One => {
                    b.connect_int(f, top[i], 1);
                }
                Pop::Empty => {
                    b.bias_int(f, 1).connect_int(f, ne[i], -1);
                }
                Pop::Any => continue,
            }
            lits += 1;
        }
        b.bias_int(f, -(lits + 1));
        b.connect_int(control[rule.to], f, 1).connect_int(control[rule.from], f, -1);
        fire.insert(r, f);
    }

    // Candidate values and write selection.
    let mut regs = [
        Register { value: stacks[0], writes: Vec::new() },
        Register { value: stacks[1], writes: Vec::new() },
        Register { value: buffer, writes: Vec::new() },
    ];
    for &r in &live_rules {
        let rule = &m.rules[r];
        let mut kinds: Vec<(usize, Write)> = Vec::new();
        for i in 0..2 {
            let kind = match (rule.pop[i].pops(), rule.push[i].bit()) {
                (true, None) => Some(Write::Pop),
                (true, Some(bit)) => Some(Write::PopPush(bit)),
                (false, Some(bit)) => Some(Write::Push(bit)),
                (false, None) => None,
            };
            if let Some(kind) = kind {
                kinds.push((i, kind));
            }
        }
        if matches!(rule.read, Read::Symbol(_)) {
            kinds.push((2, Write::Pop));
        }
        for (ri, kind) in kinds {
            let reg = &mut regs[ri];
            match reg.writes.iter_mut().find(|w| w.0 == kind) {
                Some(w) => w.2.push(r),
                None => {
                    let name = b.name_of(reg.value);
                    let cand = b.sat(&format!("{name}_candidate{}", regs_kind_suffix(kind)));
                    reg.writes.push((kind, cand, vec![r]));
                }
            }
        }
    }
    for (ri, reg) in regs.iter().enumerate() {
        let v = reg.value;
        let name = b.name_of(v);
        let clear = b.sat(&format!("{name}_clear"));
        b.connect_int(clear, v, 1).bias_int(clear, -1);
        b.connect_int(v, v, 1).connect_int(v, clear, -1);
        for (kind, cand, rules) in &reg.writes {
            let cand = *cand;
            match (ri, *kind) {
                (2, _) => {
                    b.connect_int(cand, v, beta).bias_int(cand, -1);
                    for &t in &th[1..] {
                        b.connect_int(cand, t, -2);
                    }
                }
                (_, Write::Push(bit)) => {
                    b.connect_ratio(cand, v, 1, 4).bias_ratio(cand, 2 * i64::from(bit) + 1, 4);
                }
                (i, Write::Pop) => {
                    b.connect_int(cand, v, 4).connect_int(cand, top[i], -2).bias_int(cand, -1);
                }
                (i, Write::PopPush(bit)) => {
                    b.connect_int(cand, v, 1).connect_ratio(cand, top[i], -1, 2);
                    if bit {
                        b.bias_ratio(cand, 1, 2);
                    }
                }
            }
            let sel = b.sat(&format!("{name}_select{}", regs_kind_suffix(*kind)));
            b.connect_int(sel, cand, 1).bias_int(sel, -1);
            for r in rules {
                b.connect_int(sel, fire[r], 1);
                b.connect_int(clear, fire[r], 1);
            }
            b.connect_int(v, sel, 1);
        }
    }
    for &g in &gated {
        b.connect_int(buffer, g, 1);
    }

    // Outputs.
    let halt = b.sig("halt");
    b.connect_int(halt, phase[1], 1).bias_int(halt, -1);
    for &c in &control {
        b.connect_int(halt, c, 1);
    }
    for f in fire.values() {
        b.connect_int(halt, *f, -1);
    }
    let accept = b.sig("accept");
    b.connect_int(accept, phase[1], 1).bias_int(accept, -1);
    for (q, &c) in control.iter().enumerate() {
        if m.accepting[q] {
            b.connect_int(accept, c, 1);
        }
    }
    b.set_outputs(accept, halt);
    Ok(b.build()?)
}

fn regs_kind_suffix(kind: Write) -> &'static str {
    match kind {
        Write::Push(false) => "[push0]",
        Write::Push(true) => "[push1]",
        Write::Pop => "[pop]",
        Write::PopPush(false) => "[pop,push0]",
        Write::PopPush(true) => "[pop,push1]",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{run, InputFrame, Verdict};
    use crate::numerics::{PrecisionBudget, Rational};

    pub(crate) const ANBN: &str = "\
alphabet ab
state q0 start
state q1
state acc accept
rule q0 a - - -> q0 1 -
rule q0 b 1 - -> q1 - -
rule q0 $ e - -> acc - -
rule q1 b 1 - -> q1 - -
rule q1 $ e - -> acc - -
";

    #[test]
    fn simulate_anbn() {
        let m = TwoStackMachine::parse(ANBN).unwrap();
        let acc = |w: &str| m.simulate(w, 100).unwrap().outcome;
        assert_eq!(acc(""), MachineOutcome::Accept);
        assert_eq!(acc("aabb"), MachineOutcome::Accept);
        assert_eq!(acc("aab"), MachineOutcome::Reject);
        assert_eq!(acc("ba"), MachineOutcome::Reject);
        assert_eq!(m.simulate("aabb", 2).unwrap().outcome, MachineOutcome::Timeout);
        assert_eq!(TwoStackMachine::parse(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn nondeterminism_rejected() {
        let text = "alphabet a\nstate q start\nrule q a - - -> q - -\nrule q - 1 - -> q - -\n";
        assert!(TwoStackMachine::parse(text).is_err());
        let ok = "alphabet a\nstate q start\nrule q a 0 - -> q - -\nrule q a 1 - -> q - -\n";
        assert!(TwoStackMachine::parse(ok).is_ok());
    }

    #[test]
    fn anbn_net() {
        let m = TwoStackMachine::parse(ANBN).unwrap();
        let net = two_stack_to_net(&m).unwrap();
        assert!(net.scalars().all(|s| s.is_exact()));
        for (w, v) in [("ab", Verdict::Accept), ("aab", Verdict::Reject), ("aabb", Verdict::Accept), ("", Verdict::Accept)] {
            let steps = m.simulate(w, 1000).unwrap().steps;
            let out = run(&net, w, 200).unwrap();
            assert_eq!(out.verdict, v, "{w:?}");
            assert_eq!(out.decided_at.unwrap() + 1, two_stack_ticks(w.len(), steps), "{w:?}");
        }
    }

    #[test]
    fn push_one_onto_empty_stack() {
        let m = TwoStackMachine::parse("alphabet a\nstate q start\nstate h accept\nrule q - - - -> h 1 -\n").unwrap();
        let net = two_stack_to_net(&m).unwrap();
        let s1 = net.find_neuron("stack1").unwrap();
        let budget = PrecisionBudget::default();
        let mut state = net.initial_state();
        let silent = InputFrame::silent(1);
        let mut seen = Vec::new();
        for _ in 0..12 {
            state = net.step(&state, &silent, &budget).unwrap();
            seen.push(state.get(s1).as_exact().unwrap().clone());
        }
        assert_eq!(seen.first(), Some(&Rational::zero()));
        assert_eq!(seen.last(), Some(&Rational::new(3, 4).unwrap()));
    }
}
