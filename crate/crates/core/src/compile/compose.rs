use std::collections::BTreeMap;

use super::CompileError;
use crate::codec::Alphabet;
use crate::network::{Activation, Network, NetworkBuilder, Source};

/// An output line of the first network in a composition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Line {
    Data,
    Validation,
    Flag,
}

/// Wires `first`'s output lines into `second`'s data lines.
///
/// `handoff[j]` names the output of `first` that drives data line `j` of
/// `second`; `second`'s validation line is driven by `first`'s output
/// validation. Neurons of `first` keep their indices and `second`'s follow.
/// The composite reads `first`'s inputs and answers on `second`'s outputs.
/// Every output of `first` that is wired must be a Signal neuron, so that
/// the wire carries the same bit the line protocol would.
pub fn compose_nets(first: &Network, second: &Network, handoff: &[Line]) -> Result<Network, CompileError> {
    if handoff.len() != second.n_inputs() {
        return Err(CompileError::Shape(format!(
            "handoff maps {} lines but the second network has {} data lines",
            handoff.len(),
            second.n_inputs()
        )));
    }
    let line_neuron = |l: Line| -> Result<usize, CompileError> {
        let i = match l {
            Line::Data => first.output_data(),
            Line::Validation => first.output_validation(),
            Line::Flag => first
                .output_flag()
                .ok_or_else(|| CompileError::Shape("first network has no flag line".into()))?,
        };
        if first.activation(i) != Activation::Signal {
            return Err(CompileError::Shape(format!("output neuron {i} of the first network is not binary")));
        }
        Ok(i)
    };
    let valid = line_neuron(Line::Validation)?;
    let wires: Vec<usize> = handoff.iter().map(|&l| line_neuron(l)).collect::<Result<_, _>>()?;

    let n1 = first.n_neurons();
    let mut specs = first.specs().to_vec();
    for spec in second.specs() {
        let mut spec = spec.clone();
        let mut inputs = BTreeMap::new();
        for (src, w) in std::mem::take(&mut spec.inputs) {
            let mapped = match src {
                Source::Neuron(j) => Source::Neuron(j + n1),
                Source::Input(j) => Source::Neuron(wires[j]),
                Source::Validation => Source::Neuron(valid),
            };
            NetworkBuilder::merge_weight(&mut inputs, mapped, w);
        }
        spec.inputs = inputs;
        specs.push(spec);
    }
    Ok(Network::from_specs(
        first.n_inputs(),
        first.alphabet().cloned(),
        specs,
        second.output_data() + n1,
        second.output_validation() + n1,
        second.output_flag().map(|f| f + n1),
    )?)
}

/// One data line, echoed with a one-tick delay: `data(t+1) = signal(u(t))`,
/// `valid(t+1) = signal(v(t))`. The alphabet is the single symbol `1`.
pub fn relay_net() -> Network {
    let mut b = NetworkBuilder::for_alphabet(Alphabet::parse("1").expect("valid alphabet"));
    let data = b.sig("data");
    b.connect_int(data, Source::Input(0), 1);
    let valid = b.sig("valid");
    b.connect_int(valid, Source::Validation, 1);
    b.set_outputs(data, valid);
    b.build().expect("relay wiring is consistent")
}
