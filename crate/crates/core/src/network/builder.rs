use std::collections::BTreeMap;

use super::{Activation, Network, NetworkError, Source};
use crate::codec::Alphabet;
use crate::numerics::{ExactScalar, Rational};

/// Index of a neuron inside a [`NetworkBuilder`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeuronId(pub usize);

impl From<NeuronId> for Source {
    fn from(id: NeuronId) -> Self {
        Source::Neuron(id.0)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct NeuronSpec {
    pub activation: Activation,
    pub bias: ExactScalar,
    pub inputs: BTreeMap<Source, ExactScalar>,
    pub name: Option<String>,
}

/// Incremental construction of a network, one neuron at a time.
///
/// Weights added twice on the same connection are summed when both are
/// exact.
#[derive(Clone, Debug)]
pub struct NetworkBuilder {
    n_inputs: usize,
    alphabet: Option<Alphabet>,
    neurons: Vec<NeuronSpec>,
    output_data: Option<usize>,
    output_validation: Option<usize>,
    output_flag: Option<usize>,
}

impl NetworkBuilder {
    pub fn new(n_inputs: usize) -> Self {
        NetworkBuilder {
            n_inputs,
            alphabet: None,
            neurons: Vec::new(),
            output_data: None,
            output_validation: None,
            output_flag: None,
        }
    }

    /// One data line per symbol of `alphabet`.
    pub fn for_alphabet(alphabet: Alphabet) -> Self {
        let mut b = Self::new(alphabet.len());
        b.alphabet = Some(alphabet);
        b
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn len(&self) -> usize {
        self.neurons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neurons.is_empty()
    }

    pub fn neuron(&mut self, activation: Activation, name: &str) -> NeuronId {
        self.neurons.push(NeuronSpec {
            activation,
            bias: ExactScalar::zero(),
            inputs: BTreeMap::new(),
            name: Some(name.to_string()),
        });
        NeuronId(self.neurons.len() - 1)
    }

    pub fn name_of(&self, id: NeuronId) -> String {
        self.neurons[id.0].name.clone().unwrap_or_else(|| format!("n{}", id.0))
    }

    pub fn sat(&mut self, name: &str) -> NeuronId {
        self.neuron(Activation::SaturatedLinear, name)
    }

    pub fn sig(&mut self, name: &str) -> NeuronId {
        self.neuron(Activation::Signal, name)
    }

    pub fn bias(&mut self, id: NeuronId, value: ExactScalar) -> &mut Self {
        let spec = &mut self.neurons[id.0];
        spec.bias = add_scalars(&spec.bias, value);
        self
    }

    pub fn bias_int(&mut self, id: NeuronId, value: i64) -> &mut Self {
        self.bias(id, ExactScalar::integer(value))
    }

    pub fn bias_ratio(&mut self, id: NeuronId, num: i64, den: i64) -> &mut Self {
        self.bias(id, exact_ratio(num, den))
    }

    pub fn connect(&mut self, id: NeuronId, src: impl Into<Source>, weight: ExactScalar) -> &mut Self {
        Self::merge_weight(&mut self.neurons[id.0].inputs, src.into(), weight);
        self
    }

    pub(crate) fn merge_weight(inputs: &mut BTreeMap<Source, ExactScalar>, src: Source, weight: ExactScalar) {
        match inputs.entry(src) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(weight);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let merged = add_scalars(o.get(), weight);
                o.insert(merged);
            }
        }
    }

    pub fn connect_int(&mut self, id: NeuronId, src: impl Into<Source>, weight: i64) -> &mut Self {
        self.connect(id, src, ExactScalar::integer(weight))
    }

    pub fn connect_ratio(&mut self, id: NeuronId, src: impl Into<Source>, num: i64, den: i64) -> &mut Self {
        self.connect(id, src, exact_ratio(num, den))
    }

    pub fn set_outputs(&mut self, data: NeuronId, validation: NeuronId) -> &mut Self {
        self.output_data = Some(data.0);
        self.output_validation = Some(validation.0);
        self
    }

    pub fn set_flag(&mut self, flag: NeuronId) -> &mut Self {
        self.output_flag = Some(flag.0);
        self
    }

    pub fn build(self) -> Result<Network, NetworkError> {
        let data = self.output_data.ok_or_else(|| NetworkError::Config("output lines not set".into()))?;
        let valid = self.output_validation.ok_or_else(|| NetworkError::Config("output lines not set".into()))?;
        Network::from_specs(self.n_inputs, self.alphabet, self.neurons, data, valid, self.output_flag)
    }
}

/// Integer when the ratio is integral, rational otherwise.
fn exact_ratio(num: i64, den: i64) -> ExactScalar {
    let q = Rational::new(num, den).expect("nonzero denominator");
    if q.is_integer() {
        ExactScalar::integer(q.numer())
    } else {
        ExactScalar::rational(q)
    }
}

fn add_scalars(a: &ExactScalar, b: ExactScalar) -> ExactScalar {
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a.clone();
    }
    match (a.as_rational(), b.as_rational()) {
        (Some(x), Some(y)) => {
            let sum = &x + &y;
            if a.is_integer() && b.is_integer() {
                ExactScalar::integer(sum.numer())
            } else {
                ExactScalar::rational(sum)
            }
        }
        _ => panic!("cannot merge lazy weights on the same connection"),
    }
}
