//! Spike-timing codes: a unit real's binary digits as spike times.
//!
//! Digit `i` of the expansion becomes a spike at tick `i`. The degree label
//! travels with the schedule, so a timing code carries the same label a
//! weight would.

use std::fmt::Write as _;
use std::path::Path;

use crate::degrees::DegreeLabel;
use crate::format::{self, ParseError};
use crate::numerics::{NumericError, UnitReal};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpikeError {
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("timing codes need a binary expansion, not base {0}")]
    Base(u32),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Spike ticks within `1..=window`, strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpikeSchedule {
    ticks: Vec<u64>,
    window: u64,
    label: Option<DegreeLabel>,
}

impl SpikeSchedule {
    pub fn new(ticks: Vec<u64>, window: u64, label: Option<DegreeLabel>) -> Result<Self, SpikeError> {
        if let Some(w) = ticks.windows(2).find(|w| w[0] >= w[1]) {
            return Err(SpikeError::Schedule(format!("ticks {} and {} out of order", w[0], w[1])));
        }
        if let Some(&t) = ticks.iter().find(|&&t| t == 0 || t > window) {
            return Err(SpikeError::Schedule(format!("tick {t} outside 1..={window}")));
        }
        Ok(SpikeSchedule { ticks, window, label })
    }

    pub fn ticks(&self) -> &[u64] {
        &self.ticks
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    pub fn label(&self) -> Option<&DegreeLabel> {
        self.label.as_ref()
    }

    /// Digit `i` is 1 iff there is a spike at tick `i`.
    pub fn bits(&self) -> Vec<bool> {
        let mut bits = vec![false; self.window as usize];
        for &t in &self.ticks {
            bits[t as usize - 1] = true;
        }
        bits
    }

    /// Parses `window <n>`, `spike <tick>` and an optional `label <name>`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut window = None;
        let mut ticks = Vec::new();
        let mut label = None;
        for (line_no, line) in format::records(text) {
            match line.split_whitespace().collect::<Vec<_>>().as_slice() {
                ["window", n] => window = Some(format::parse_u64(n, line_no)?),
                ["spike", t] => ticks.push(format::parse_u64(t, line_no)?),
                ["label", l] if DegreeLabel::is_valid_name(l) => label = Some(DegreeLabel::new(l)),
                _ => return Err(ParseError::at(line_no, format!("unrecognized record `{line}`"))),
            }
        }
        let window = window.ok_or_else(|| ParseError::at(0, "missing `window` line"))?;
        Self::new(ticks, window, label).map_err(|e| ParseError::at(0, e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ParseError> {
        let text = std::fs::read_to_string(path).map_err(|e| ParseError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("window {}\n", self.window);
        if let Some(l) = &self.label {
            writeln!(out, "label {l}").unwrap();
        }
        for t in &self.ticks {
            writeln!(out, "spike {t}").unwrap();
        }
        out
    }
}

/// Spikes at the positions of the 1 digits among the first `n`.
pub fn timing_encode(r: &UnitReal, n: u64) -> Result<SpikeSchedule, SpikeError> {
    if r.base() != 2 {
        return Err(SpikeError::Base(r.base()));
    }
    let mut ticks = Vec::new();
    for i in 1..=n {
        if r.digit_at(i)? == 1 {
            ticks.push(i);
        }
    }
    SpikeSchedule::new(ticks, n, r.label().cloned())
}

/// The finite binary expansion the schedule records, horizon `window`.
pub fn timing_decode(s: &SpikeSchedule) -> UnitReal {
    let r = UnitReal::from_bits(&s.bits());
    match &s.label {
        Some(l) => r.with_label(l.clone()),
        None => r,
    }
}
