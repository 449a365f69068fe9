//! The periodic layer template and its expansion into gate programs.
//!
//! One layer applies RX then RY to every qubit (qubit 0 first), followed by
//! a CNOT staircase entangling each qubit with its lower neighbor
//! (control i, target i+1, no wraparound). A circuit is `layer_depth`
//! repetitions of that layer, so it carries 2 · num_qubits · layer_depth
//! rotation parameters.

use rand::distributions::{Distribution, Uniform};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::state::{GateOp, Statevector};

/// A fully expanded gate program for one quantum node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitSpec {
    num_qubits: usize,
    layer_depth: usize,
    gates: Vec<GateOp>,
}

impl CircuitSpec {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn layer_depth(&self) -> usize {
        self.layer_depth
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn num_params(&self) -> usize {
        2 * self.num_qubits * self.layer_depth
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Apply every gate in order with its bound angle.
    pub fn bind_and_run(&self, params: &[f64], input: &Statevector) -> Result<Statevector> {
        if params.len() != self.num_params() {
            return Err(Error::ParamLengthMismatch {
                expected: self.num_params(),
                actual: params.len(),
            });
        }
        if input.num_qubits() != self.num_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.num_qubits,
                actual: input.num_qubits(),
            });
        }
        let mut state = input.clone();
        self.run_mut(params, &mut state)?;
        Ok(state)
    }

    /// In-place variant used by hot paths that own their working state.
    pub(crate) fn run_mut(&self, params: &[f64], state: &mut Statevector) -> Result<()> {
        for gate in &self.gates {
            let angle = gate.param_index.map(|i| params[i]);
            state.apply_gate_mut(gate, angle)?;
        }
        Ok(())
    }
}

/// Expand the layer template into a circuit.
pub fn build_circuit(num_qubits: usize, layer_depth: usize) -> Result<CircuitSpec> {
    if num_qubits < 2 {
        return Err(Error::TooFewQubits { num_qubits });
    }
    if layer_depth < 1 {
        return Err(Error::ZeroLayerDepth);
    }
    let mut gates = Vec::with_capacity(layer_depth * (3 * num_qubits - 1));
    let mut param = 0;
    for _ in 0..layer_depth {
        for q in 0..num_qubits {
            gates.push(GateOp::rx(q, param));
            param += 1;
            gates.push(GateOp::ry(q, param));
            param += 1;
        }
        for q in 0..num_qubits - 1 {
            gates.push(GateOp::cnot(q, q + 1).expect("distinct neighbor indices"));
        }
    }
    Ok(CircuitSpec {
        num_qubits,
        layer_depth,
        gates,
    })
}

/// Total effective depth of a circuit of `layer_depth` layers:
/// 4 · D_L + k with k = num_qubits − 3, defined from 5 qubits upward.
pub fn effective_depth_total(layer_depth: usize, num_qubits: usize) -> Result<usize> {
    if num_qubits < 5 {
        return Err(Error::EffectiveDepthUndefined { num_qubits });
    }
    Ok(4 * layer_depth + (num_qubits - 3))
}

/// Effective depth contributed by a single node. Same formula as
/// [`effective_depth_total`]; a split network's total is the sum over nodes,
/// which exceeds the unsplit value whenever more than one node holds layers.
pub fn effective_depth_per_node(layer_depth_per_node: usize, num_qubits: usize) -> Result<usize> {
    effective_depth_total(layer_depth_per_node, num_qubits)
}

/// Independent uniform draws from [0, π], the initialization used by every
/// experiment.
pub fn random_params<R: Rng>(num_params: usize, rng: &mut R) -> Vec<f64> {
    let dist = Uniform::new(0.0, PI);
    (0..num_params).map(|_| dist.sample(rng)).collect()
}
