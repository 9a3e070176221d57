use super::{InputFrame, Network, NetworkError};
use crate::numerics::PrecisionBudget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
    Timeout,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
            Verdict::Timeout => "timeout",
        })
    }
}

/// Line activity during one tick. Inputs are those presented at tick `t`;
/// outputs are read from the state they produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IoTick {
    pub data: Vec<bool>,
    pub validation: bool,
    pub out_data: bool,
    pub out_validation: bool,
    pub out_flag: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub verdict: Verdict,
    /// Ticks executed, up to and including the deciding one.
    pub trace: Vec<IoTick>,
    /// Tick (0-based) on which the output validation line first rose.
    pub decided_at: Option<usize>,
    /// The network raised its flag line with the verdict: the query fell
    /// outside what the network can answer. The verdict is then `Reject`.
    pub flagged: bool,
}

/// Runs `word` through `net` from the zero state for at most `budget` ticks.
pub fn run(net: &Network, word: &str, budget: usize) -> Result<RunOutcome, NetworkError> {
    run_with(net, word, budget, &PrecisionBudget::default())
}

/// [`run`] with an explicit precision budget for lazy weights.
pub fn run_with(net: &Network, word: &str, budget: usize, precision: &PrecisionBudget) -> Result<RunOutcome, NetworkError> {
    let frames = word.chars().map(|c| net.frame_for(c)).collect::<Result<Vec<_>, _>>()?;
    if budget < frames.len() + 1 {
        return Err(NetworkError::Config(format!(
            "budget {budget} is shorter than the {} ticks needed to present the word",
            frames.len() + 1
        )));
    }
    let silent = InputFrame::silent(net.n_inputs());
    let mut state = net.initial_state();
    let mut trace = Vec::new();
    for t in 0..budget {
        let frame = frames.get(t).unwrap_or(&silent);
        state = net.step(&state, frame, precision)?;
        let out_validation = net.output_bit(&state, net.output_validation(), precision)?;
        let (out_data, out_flag) = if out_validation {
            let flag = match net.output_flag() {
                Some(f) => net.output_bit(&state, f, precision)?,
                None => false,
            };
            (net.output_bit(&state, net.output_data(), precision)?, flag)
        } else {
            (false, false)
        };
        trace.push(IoTick {
            data: frame.data.clone(),
            validation: frame.validation,
            out_data,
            out_validation,
            out_flag,
        });
        if out_validation {
            let verdict = if out_data && !out_flag { Verdict::Accept } else { Verdict::Reject };
            return Ok(RunOutcome { verdict, trace, decided_at: Some(t), flagged: out_flag });
        }
    }
    Ok(RunOutcome { verdict: Verdict::Timeout, trace, decided_at: None, flagged: false })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecognitionReport {
    pub total: usize,
    pub agree: usize,
    pub disagree: Vec<String>,
    pub timeouts: Vec<String>,
    /// Runs that raised an error or the flag line.
    pub errors: Vec<(String, NetworkError)>,
}

impl RecognitionReport {
    pub fn all_agree(&self) -> bool {
        self.agree == self.total
    }
}

/// Runs every sample word and tallies agreement with its expected bit.
/// Words that do not fit in `budget` count as timeouts.
pub fn recognizes<S: AsRef<str>>(net: &Network, sample: &[(S, bool)], budget: usize) -> RecognitionReport {
    let mut report = RecognitionReport { total: sample.len(), ..Default::default() };
    for (word, expected) in sample {
        let word = word.as_ref();
        if budget < word.chars().count() + 1 {
            report.timeouts.push(word.to_string());
            continue;
        }
        match run(net, word, budget) {
            Ok(out) if out.flagged => report.errors.push((word.to_string(), NetworkError::Flagged)),
            Ok(out) => match out.verdict {
                Verdict::Timeout => report.timeouts.push(word.to_string()),
                v => {
                    if (v == Verdict::Accept) == *expected {
                        report.agree += 1;
                    } else {
                        report.disagree.push(word.to_string());
                    }
                }
            },
            Err(e) => report.errors.push((word.to_string(), e)),
        }
    }
    report
}
