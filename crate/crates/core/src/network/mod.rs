//! Analog recurrent networks with exact synchronous dynamics
//!
//! ```text
//! xᵢ(t+1) = actᵢ( Σⱼ aᵢⱼ·xⱼ(t) + Σⱼ bᵢⱼ·uⱼ(t) + cᵢ )
//! ```
//!
//! and the two-line I/O protocol: each data line is paired with a
//! validation line that is 1 while a symbol is being presented, and the
//! network answers on an output data line qualified by an output
//! validation line.

mod builder;
mod file;
mod run;

use std::collections::BTreeMap;

pub use builder::{NetworkBuilder, NeuronId};
pub use file::{parse_scalar, TableCache};
pub use run::{recognizes, run, run_with, IoTick, RecognitionReport, RunOutcome, Verdict};

use crate::codec::{Alphabet, CodecError};
use crate::numerics::{saturated_sigma, signal, ExactScalar, NumericError, PrecisionBudget, Rational, UnitReal, Value};
pub(crate) use builder::NeuronSpec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unknown sign at neuron {neuron}")]
    UnknownSign { neuron: usize },
    #[error("horizon exceeded at neuron {neuron}: index {index} is past the table horizon {horizon}")]
    HorizonExceeded { neuron: usize, index: u64, horizon: u64 },
    #[error("numeric error at neuron {neuron}: {source}")]
    Numeric { neuron: usize, source: NumericError },
    #[error("network raised its flag line: query outside what it can answer")]
    Flagged,
    #[error(transparent)]
    Codec(#[from] CodecError),
}

impl NetworkError {
    fn at(neuron: usize, e: NumericError) -> Self {
        match e {
            NumericError::UnknownSign => NetworkError::UnknownSign { neuron },
            NumericError::HorizonExceeded { index, horizon } => NetworkError::HorizonExceeded { neuron, index, horizon },
            source => NetworkError::Numeric { neuron, source },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Activation {
    SaturatedLinear,
    Signal,
}

/// Where a neuron's incoming weight reads from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Neuron(usize),
    /// Data line `j`.
    Input(usize),
    /// The input validation line.
    Validation,
}

#[derive(Clone, Debug)]
enum Coef {
    Exact(Rational),
    Lazy(UnitReal),
}

impl Coef {
    fn of(s: &ExactScalar) -> Coef {
        match s.as_rational() {
            Some(q) => Coef::Exact(q),
            None => Coef::Lazy(s.as_real().expect("lazy scalar").clone()),
        }
    }
}

#[derive(Clone, Debug)]
struct Row {
    bias: Coef,
    terms: Vec<(Source, Coef)>,
}

/// A finite ARNN: `N` neurons, `M` data lines plus a validation line,
/// exact weights, per-neuron activation and designated output neurons.
///
/// Weights are stored sparsely; an absent weight is zero.
#[derive(Clone, Debug)]
pub struct Network {
    n_inputs: usize,
    alphabet: Option<Alphabet>,
    neurons: Vec<NeuronSpec>,
    output_data: usize,
    output_validation: usize,
    output_flag: Option<usize>,
    rows: Vec<Row>,
}

/// One tick of input: a bit per data line and the validation bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputFrame {
    pub data: Vec<bool>,
    pub validation: bool,
}

impl InputFrame {
    pub fn new(data: Vec<bool>, validation: bool) -> Self {
        InputFrame { data, validation }
    }

    pub fn silent(m: usize) -> Self {
        InputFrame { data: vec![false; m], validation: false }
    }
}

/// The activation vector `x(t)`.
#[derive(Clone, Debug)]
pub struct NetworkState {
    values: Vec<Value>,
}

impl NetworkState {
    pub fn zeros(n: usize) -> Self {
        NetworkState { values: vec![Value::zero(); n] }
    }

    pub fn from_values(values: Vec<Value>) -> Self {
        NetworkState { values }
    }

    pub fn from_rationals(values: Vec<Rational>) -> Self {
        NetworkState { values: values.into_iter().map(Value::exact).collect() }
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> &Value {
        &self.values[i]
    }

    /// Exact rational components, if no component is lazy.
    pub fn as_rationals(&self) -> Option<Vec<Rational>> {
        self.values.iter().map(|v| v.as_exact().cloned()).collect()
    }
}

impl Network {
    pub(crate) fn from_specs(
        n_inputs: usize,
        alphabet: Option<Alphabet>,
        neurons: Vec<NeuronSpec>,
        output_data: usize,
        output_validation: usize,
        output_flag: Option<usize>,
    ) -> Result<Self, NetworkError> {
        let n = neurons.len();
        if let Some(a) = &alphabet {
            if a.len() != n_inputs {
                return Err(NetworkError::Shape(format!(
                    "alphabet `{a}` has {} symbols but the network has {n_inputs} data lines",
                    a.len()
                )));
            }
        }
        for (name, idx) in [("out_data", Some(output_data)), ("out_valid", Some(output_validation)), ("out_flag", output_flag)] {
            if let Some(i) = idx {
                if i >= n {
                    return Err(NetworkError::Shape(format!("{name} neuron {i} out of range for {n} neurons")));
                }
            }
        }
        let mut rows = Vec::with_capacity(n);
        for (i, spec) in neurons.iter().enumerate() {
            let mut terms = Vec::new();
            for (src, w) in &spec.inputs {
                match *src {
                    Source::Neuron(j) if j >= n => {
                        return Err(NetworkError::Shape(format!("neuron {i} reads neuron {j} of {n}")))
                    }
                    Source::Input(j) if j >= n_inputs => {
                        return Err(NetworkError::Shape(format!("neuron {i} reads data line {j} of {n_inputs}")))
                    }
                    _ => {}
                }
                if !w.is_zero() {
                    terms.push((*src, Coef::of(w)));
                }
            }
            rows.push(Row { bias: Coef::of(&spec.bias), terms });
        }
        Ok(Network { n_inputs, alphabet, neurons, output_data, output_validation, output_flag, rows })
    }

    pub(crate) fn specs(&self) -> &[NeuronSpec] {
        &self.neurons
    }

    pub fn n_neurons(&self) -> usize {
        self.neurons.len()
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn alphabet(&self) -> Option<&Alphabet> {
        self.alphabet.as_ref()
    }

    pub fn output_data(&self) -> usize {
        self.output_data
    }

    pub fn output_validation(&self) -> usize {
        self.output_validation
    }

    pub fn output_flag(&self) -> Option<usize> {
        self.output_flag
    }

    pub fn activation(&self, i: usize) -> Activation {
        self.neurons[i].activation
    }

    pub fn neuron_name(&self, i: usize) -> Option<&str> {
        self.neurons[i].name.as_deref()
    }

    /// First neuron with the given name.
    pub fn find_neuron(&self, name: &str) -> Option<usize> {
        self.neurons.iter().position(|s| s.name.as_deref() == Some(name))
    }

    /// `aᵢⱼ`.
    pub fn state_weight(&self, i: usize, j: usize) -> ExactScalar {
        self.weight(i, Source::Neuron(j))
    }

    /// `bᵢⱼ`; `j == n_inputs()` is the validation line.
    pub fn input_weight(&self, i: usize, j: usize) -> ExactScalar {
        let src = if j == self.n_inputs { Source::Validation } else { Source::Input(j) };
        self.weight(i, src)
    }

    pub fn weight(&self, i: usize, src: Source) -> ExactScalar {
        self.neurons[i].inputs.get(&src).cloned().unwrap_or_else(ExactScalar::zero)
    }

    /// `cᵢ`.
    pub fn bias(&self, i: usize) -> &ExactScalar {
        &self.neurons[i].bias
    }

    /// Nonzero incoming weights of neuron `i`.
    pub fn incoming(&self, i: usize) -> impl Iterator<Item = (Source, &ExactScalar)> {
        self.neurons[i].inputs.iter().filter(|(_, w)| !w.is_zero()).map(|(s, w)| (*s, w))
    }

    /// Every bias and every nonzero weight.
    pub fn scalars(&self) -> impl Iterator<Item = &ExactScalar> {
        self.neurons
            .iter()
            .flat_map(|s| std::iter::once(&s.bias).chain(s.inputs.values().filter(|w| !w.is_zero())))
    }

    /// Same network with the given scalar substitution applied to every
    /// bias and weight.
    pub fn map_scalars(&self, mut f: impl FnMut(&ExactScalar) -> ExactScalar) -> Result<Network, NetworkError> {
        let neurons = self
            .neurons
            .iter()
            .map(|s| NeuronSpec {
                activation: s.activation,
                bias: f(&s.bias),
                inputs: s.inputs.iter().map(|(src, w)| (*src, f(w))).collect::<BTreeMap<_, _>>(),
                name: s.name.clone(),
            })
            .collect();
        Network::from_specs(
            self.n_inputs,
            self.alphabet.clone(),
            neurons,
            self.output_data,
            self.output_validation,
            self.output_flag,
        )
    }

    pub fn initial_state(&self) -> NetworkState {
        NetworkState::zeros(self.n_neurons())
    }

    /// One synchronous update. Every neuron reads `x(t)`; none sees a value
    /// written during the same tick.
    pub fn step(&self, state: &NetworkState, input: &InputFrame, budget: &PrecisionBudget) -> Result<NetworkState, NetworkError> {
        self.step_ordered(state, input, budget, 0..self.n_neurons())
    }

    /// [`Network::step`] evaluating neurons in a caller-chosen order. The
    /// result does not depend on the order.
    pub fn step_ordered(
        &self,
        state: &NetworkState,
        input: &InputFrame,
        budget: &PrecisionBudget,
        order: impl IntoIterator<Item = usize>,
    ) -> Result<NetworkState, NetworkError> {
        let n = self.n_neurons();
        if state.len() != n {
            return Err(NetworkError::Shape(format!("state has {} components, network has {n} neurons", state.len())));
        }
        if input.data.len() != self.n_inputs {
            return Err(NetworkError::Shape(format!(
                "input has {} data lines, network has {}",
                input.data.len(),
                self.n_inputs
            )));
        }
        let mut next: Vec<Option<Value>> = vec![None; n];
        for i in order {
            if next[i].is_some() {
                continue;
            }
            next[i] = Some(self.evaluate(i, state, input, budget)?);
        }
        let values = next
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| NetworkError::Config(format!("neuron {i} missing from evaluation order"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NetworkState { values })
    }

    fn evaluate(&self, i: usize, state: &NetworkState, input: &InputFrame, budget: &PrecisionBudget) -> Result<Value, NetworkError> {
        let row = &self.rows[i];
        let mut acc = Value::zero();
        add_coef(&mut acc, &row.bias, &Value::one()).map_err(|e| NetworkError::at(i, e))?;
        for (src, coef) in &row.terms {
            let bit = match *src {
                Source::Neuron(j) => {
                    add_coef(&mut acc, coef, &state.values[j]).map_err(|e| NetworkError::at(i, e))?;
                    continue;
                }
                Source::Input(j) => input.data[j],
                Source::Validation => input.validation,
            };
            if bit {
                add_coef(&mut acc, coef, &Value::one()).map_err(|e| NetworkError::at(i, e))?;
            }
        }
        let out = match self.neurons[i].activation {
            Activation::SaturatedLinear => saturated_sigma(&acc, Some(budget)),
            Activation::Signal => signal(&acc, Some(budget)).map(|b| if b { Value::one() } else { Value::zero() }),
        };
        out.map_err(|e| NetworkError::at(i, e))
    }

    /// Reads a neuron as an output bit (`signal` of its value).
    pub fn output_bit(&self, state: &NetworkState, neuron: usize, budget: &PrecisionBudget) -> Result<bool, NetworkError> {
        signal(state.get(neuron), Some(budget)).map_err(|e| NetworkError::at(neuron, e))
    }

    /// One-hot input frame for `symbol`, validation raised.
    pub fn frame_for(&self, symbol: char) -> Result<InputFrame, NetworkError> {
        let alphabet = self
            .alphabet
            .as_ref()
            .ok_or_else(|| NetworkError::Config("network has no input alphabet".into()))?;
        let r = alphabet
            .rank(symbol)
            .ok_or_else(|| CodecError::Alphabet { symbol, alphabet: alphabet.to_string() })?;
        let mut data = vec![false; self.n_inputs];
        data[r] = true;
        Ok(InputFrame { data, validation: true })
    }
}

fn add_coef(acc: &mut Value, coef: &Coef, x: &Value) -> Result<(), NumericError> {
    match coef {
        Coef::Exact(q) => acc.add_scaled(q, x),
        Coef::Lazy(r) => {
            let c = x.as_exact().ok_or(NumericError::NonlinearLazy)?;
            acc.add_real(c, r);
        }
    }
    Ok(())
}
