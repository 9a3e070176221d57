//! Degree labels, the partial order among them, and the classification of
//! networks by what their weights (and spike timings) can carry.
//!
//! Classification is syntactic. A network whose scalars are all integers
//! can do no more than a finite automaton; rationals (and streams declared
//! computable) reach Turing machines; a lazily known real declared at a
//! higher degree lifts the network to an oracle machine for the maximal
//! declared degrees.

mod label;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

pub use label::DegreeLabel;

use crate::format::{self, ParseError};
use crate::network::Network;
use crate::numerics::{ExactScalar, ScalarKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DegreeError {
    #[error("lattice error: {0}")]
    Lattice(String),
    #[error("lazy scalar without a degree label")]
    LabelMissing,
}

/// A finite partial order on degree labels, stored with its transitive
/// closure. `0` is below every other label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeOrder {
    labels: BTreeSet<DegreeLabel>,
    below: BTreeSet<(DegreeLabel, DegreeLabel)>,
}

impl DegreeOrder {
    /// Only `0`.
    pub fn trivial() -> Self {
        DegreeOrder { labels: BTreeSet::from([DegreeLabel::bottom()]), below: BTreeSet::new() }
    }

    /// `0 < 0' < 0''`.
    pub fn builtin() -> Self {
        let mut o = Self::trivial();
        o.add_label(DegreeLabel::jump());
        o.add_label(DegreeLabel::double_jump());
        o.declare_below(&DegreeLabel::jump(), &DegreeLabel::double_jump())
            .expect("builtin chain is acyclic");
        o
    }

    pub fn labels(&self) -> &BTreeSet<DegreeLabel> {
        &self.labels
    }

    pub fn contains(&self, l: &DegreeLabel) -> bool {
        self.labels.contains(l)
    }

    /// Adds a label, incomparable to everything except `0`.
    pub fn add_label(&mut self, l: DegreeLabel) {
        if self.labels.insert(l.clone()) && !l.is_bottom() {
            self.below.insert((DegreeLabel::bottom(), l));
        }
    }

    /// Declares `a < b` and re-closes the order. Rejects unknown labels and
    /// anything that would create a cycle.
    pub fn declare_below(&mut self, a: &DegreeLabel, b: &DegreeLabel) -> Result<(), DegreeError> {
        for l in [a, b] {
            if !self.contains(l) {
                return Err(DegreeError::Lattice(format!("unknown label `{l}`")));
            }
        }
        if a == b || self.is_below(b, a) {
            return Err(DegreeError::Lattice(format!("`{a} < {b}` would make the order cyclic")));
        }
        if b.is_bottom() {
            return Err(DegreeError::Lattice(format!("nothing is below `0` (declared `{a} < 0`)")));
        }
        let downs: Vec<DegreeLabel> = self
            .labels
            .iter()
            .filter(|x| *x == a || self.is_below(x, a))
            .cloned()
            .collect();
        let ups: Vec<DegreeLabel> = self
            .labels
            .iter()
            .filter(|y| *y == b || self.is_below(b, y))
            .cloned()
            .collect();
        for x in &downs {
            for y in &ups {
                self.below.insert((x.clone(), y.clone()));
            }
        }
        Ok(())
    }

    /// Strictly below.
    pub fn is_below(&self, a: &DegreeLabel, b: &DegreeLabel) -> bool {
        self.below.contains(&(a.clone(), b.clone()))
    }

    /// Parses `label <name>` and `below <a> <b>` lines on top of the
    /// built-in chain.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut order = Self::builtin();
        for (line_no, line) in format::records(text) {
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["label", name] => {
                    if !DegreeLabel::is_valid_name(name) {
                        return Err(ParseError::at(line_no, format!("invalid label `{name}`")));
                    }
                    order.add_label(DegreeLabel::new(name));
                }
                ["below", a, b] => order
                    .declare_below(&DegreeLabel::new(a), &DegreeLabel::new(b))
                    .map_err(|e| ParseError::at(line_no, e.to_string()))?,
                _ => return Err(ParseError::at(line_no, format!("unrecognized record `{line}`"))),
            }
        }
        Ok(order)
    }

    pub fn load(path: &Path) -> Result<Self, ParseError> {
        let text = std::fs::read_to_string(path).map_err(|e| ParseError::io(path, e))?;
        Self::parse(&text)
    }
}

impl Default for DegreeOrder {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Members of `labels` with nothing in `labels` strictly above them.
pub fn maximals(labels: &BTreeSet<DegreeLabel>, order: &DegreeOrder) -> Result<BTreeSet<DegreeLabel>, DegreeError> {
    if let Some(unknown) = labels.iter().find(|l| !order.contains(l)) {
        return Err(DegreeError::Lattice(format!("unknown label `{unknown}`")));
    }
    Ok(labels
        .iter()
        .filter(|r| !labels.iter().any(|a| order.is_below(r, a)))
        .cloned()
        .collect())
}

/// Row of the power hierarchy a network falls into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PowerClass {
    AtMostBoundedAutomata,
    AtMostTuring,
    OracleDegrees(BTreeSet<DegreeLabel>),
}

impl PowerClass {
    /// Bounded < Turing < Oracle.
    pub fn rank(&self) -> u8 {
        match self {
            PowerClass::AtMostBoundedAutomata => 0,
            PowerClass::AtMostTuring => 1,
            PowerClass::OracleDegrees(_) => 2,
        }
    }
}

impl fmt::Display for PowerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PowerClass::AtMostBoundedAutomata => f.write_str("bounded-automata"),
            PowerClass::AtMostTuring => f.write_str("turing"),
            PowerClass::OracleDegrees(ls) => {
                f.write_str("oracle")?;
                ls.iter().try_for_each(|l| write!(f, " {l}"))
            }
        }
    }
}

/// Degree carried by a single scalar: `0` for integers, rationals and
/// unlabeled streams; the declared label otherwise.
pub fn scalar_degree(x: &ExactScalar) -> DegreeLabel {
    match x.kind() {
        ScalarKind::Integer(_) | ScalarKind::Rational(_) => DegreeLabel::bottom(),
        ScalarKind::Stream(_) | ScalarKind::Oracle { .. } => {
            x.label().cloned().unwrap_or_else(DegreeLabel::bottom)
        }
    }
}

/// Classifies a network by its scalars together with the degrees of any
/// spike-timing codes it uses.
pub fn classify_network(
    net: &Network,
    timing_labels: &BTreeSet<DegreeLabel>,
    order: &DegreeOrder,
) -> Result<PowerClass, DegreeError> {
    classify_scalars(net.scalars(), timing_labels, order)
}

pub(crate) fn classify_scalars<'a>(
    scalars: impl Iterator<Item = &'a ExactScalar>,
    timing_labels: &BTreeSet<DegreeLabel>,
    order: &DegreeOrder,
) -> Result<PowerClass, DegreeError> {
    let mut beyond_integers = false;
    let mut labels = timing_labels.clone();
    for s in scalars {
        match s.kind() {
            ScalarKind::Integer(_) => {}
            ScalarKind::Rational(_) => beyond_integers = true,
            ScalarKind::Stream(_) | ScalarKind::Oracle { .. } => {
                beyond_integers = true;
                labels.insert(s.label().cloned().ok_or(DegreeError::LabelMissing)?);
            }
        }
    }
    if let Some(unknown) = labels.iter().find(|l| !order.contains(l)) {
        return Err(DegreeError::Lattice(format!("unknown label `{unknown}`")));
    }
    let above_bottom: BTreeSet<DegreeLabel> = labels.iter().filter(|l| !l.is_bottom()).cloned().collect();
    if above_bottom.is_empty() {
        return Ok(if beyond_integers || !labels.is_empty() {
            PowerClass::AtMostTuring
        } else {
            PowerClass::AtMostBoundedAutomata
        });
    }
    Ok(PowerClass::OracleDegrees(maximals(&above_bottom, order)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(names: &[&str]) -> BTreeSet<DegreeLabel> {
        names.iter().map(DegreeLabel::new).collect()
    }

    #[test]
    fn maximal_examples() {
        let order = DegreeOrder::builtin();
        assert_eq!(maximals(&set(&["0"]), &order).unwrap(), set(&["0"]));
        assert_eq!(maximals(&set(&["0", "0'"]), &order).unwrap(), set(&["0'"]));
        let mut o = DegreeOrder::builtin();
        o.add_label(DegreeLabel::new("a"));
        o.add_label(DegreeLabel::new("b"));
        assert_eq!(maximals(&set(&["a", "b"]), &o).unwrap(), set(&["a", "b"]));
        assert!(maximals(&set(&["zz"]), &o).is_err());
        assert!(maximals(&BTreeSet::new(), &o).unwrap().is_empty());
    }

    #[test]
    fn closure_and_cycles() {
        let mut o = DegreeOrder::builtin();
        assert!(o.is_below(&DegreeLabel::bottom(), &DegreeLabel::double_jump()));
        o.add_label(DegreeLabel::new("x"));
        o.declare_below(&DegreeLabel::double_jump(), &DegreeLabel::new("x")).unwrap();
        assert!(o.is_below(&DegreeLabel::jump(), &DegreeLabel::new("x")));
        assert!(o.declare_below(&DegreeLabel::new("x"), &DegreeLabel::jump()).is_err());
        assert!(o.declare_below(&DegreeLabel::jump(), &DegreeLabel::jump()).is_err());
        assert!(o.declare_below(&DegreeLabel::jump(), &DegreeLabel::bottom()).is_err());
    }

    #[test]
    fn lattice_file() {
        let o = DegreeOrder::parse("label a\nlabel b\nbelow 0' a\n").unwrap();
        assert!(o.is_below(&DegreeLabel::bottom(), &DegreeLabel::new("a")));
        assert!(o.is_below(&DegreeLabel::jump(), &DegreeLabel::new("a")));
        assert!(!o.is_below(&DegreeLabel::new("b"), &DegreeLabel::new("a")));
        assert!(DegreeOrder::parse("below a 0'\n").is_err());
        assert!(DegreeOrder::parse("label a\nbelow a a\n").is_err());
    }

    #[test]
    fn power_class_display() {
        assert_eq!(PowerClass::AtMostTuring.to_string(), "turing");
        assert_eq!(PowerClass::OracleDegrees(set(&["0'", "a"])).to_string(), "oracle 0' a");
    }
}
