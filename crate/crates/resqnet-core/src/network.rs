//! Cascades of quantum nodes with optional residual connections.
//!
//! A network walks its nodes in order, each node running its circuit on the
//! current segment input. At a residual point the segment input is added to
//! the node output and the sum is renormalized before feeding the next node;
//! without one, the node output passes through unchanged. A plain cascade is
//! therefore exactly the composition of its node circuits, while residual
//! points splice the earlier state back in.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::circuit::{build_circuit, CircuitSpec};
use crate::error::{Error, Result};
use crate::state::Statevector;

/// One circuit plus the offset of its first angle in the global parameter
/// vector. Offsets are contiguous across a network's nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumNode {
    pub circuit: CircuitSpec,
    pub param_offset: usize,
}

/// How residual sums are folded back into the state stream.
/// The summed vector is always renormalized; `tolerance` is the norm below
/// which a sum counts as a degenerate cancellation and becomes an error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualAdditionPolicy {
    pub tolerance: f64,
}

impl Default for ResidualAdditionPolicy {
    fn default() -> Self {
        ResidualAdditionPolicy { tolerance: 1e-12 }
    }
}

/// Derived architecture label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NetworkKind {
    /// Single node, no residual connection: the conventional architecture.
    SimplePlain,
    /// Two or more nodes chained without residual connections.
    Plain,
    /// At least one residual point.
    ResQNet,
}

/// Ordered quantum nodes plus the set of node indices after which a residual
/// addition happens.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkTopology {
    nodes: Vec<QuantumNode>,
    residual_points: BTreeSet<usize>,
    num_qubits: usize,
    #[serde(default)]
    policy: ResidualAdditionPolicy,
}

impl NetworkTopology {
    pub fn nodes(&self) -> &[QuantumNode] {
        &self.nodes
    }

    pub fn residual_points(&self) -> &BTreeSet<usize> {
        &self.residual_points
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_params(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.circuit.num_params())
            .sum()
    }

    pub fn kind(&self) -> NetworkKind {
        if !self.residual_points.is_empty() {
            NetworkKind::ResQNet
        } else if self.nodes.len() == 1 {
            NetworkKind::SimplePlain
        } else {
            NetworkKind::Plain
        }
    }

    pub fn with_policy(mut self, policy: ResidualAdditionPolicy) -> Self {
        self.policy = policy;
        self
    }

    /// Index of the node owning a global parameter index.
    pub fn node_of_param(&self, param_index: usize) -> usize {
        debug_assert!(param_index < self.num_params());
        self.nodes
            .iter()
            .rposition(|n| n.param_offset <= param_index)
            .expect("offsets start at 0")
    }

    fn node_params<'p>(&self, node: usize, params: &'p [f64]) -> &'p [f64] {
        let n = &self.nodes[node];
        &params[n.param_offset..n.param_offset + n.circuit.num_params()]
    }

    fn check_binding(&self, params: &[f64], input: &Statevector) -> Result<()> {
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
        Ok(())
    }

    /// Run the whole network on `input`.
    pub fn forward(&self, params: &[f64], input: &Statevector) -> Result<Statevector> {
        self.check_binding(params, input)?;
        self.forward_from(0, input.clone(), params)
    }

    /// Run nodes `first..` given the state entering node `first`. The state
    /// entering a node depends only on parameters of earlier nodes, so
    /// gradient code caches these entry states and resumes mid-network.
    pub(crate) fn forward_from(
        &self,
        first: usize,
        mut state: Statevector,
        params: &[f64],
    ) -> Result<Statevector> {
        for (i, node) in self.nodes.iter().enumerate().skip(first) {
            let slice = self.node_params(i, params);
            if self.residual_points.contains(&i) {
                let intermediate = node.circuit.bind_and_run(slice, &state)?;
                state = add_and_normalize(&state, &intermediate, self.policy, i)?;
            } else {
                node.circuit.run_mut(slice, &mut state)?;
            }
        }
        Ok(state)
    }

    /// The state entering each node, in node order. Element 0 is the network
    /// input itself.
    pub(crate) fn node_entry_states(
        &self,
        params: &[f64],
        input: &Statevector,
    ) -> Result<Vec<Statevector>> {
        self.check_binding(params, input)?;
        let mut entries = Vec::with_capacity(self.nodes.len());
        let mut state = input.clone();
        for (i, node) in self.nodes.iter().enumerate() {
            entries.push(state.clone());
            let slice = self.node_params(i, params);
            if self.residual_points.contains(&i) {
                let intermediate = node.circuit.bind_and_run(slice, &state)?;
                state = add_and_normalize(&state, &intermediate, self.policy, i)?;
            } else {
                node.circuit.run_mut(slice, &mut state)?;
            }
        }
        Ok(entries)
    }
}

fn add_and_normalize(
    segment_input: &Statevector,
    intermediate: &Statevector,
    policy: ResidualAdditionPolicy,
    node: usize,
) -> Result<Statevector> {
    let sum: Vec<Complex64> = segment_input
        .amplitudes()
        .iter()
        .zip(intermediate.amplitudes())
        .map(|(a, b)| a + b)
        .collect();
    let norm = sum.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < policy.tolerance {
        return Err(Error::DegenerateResidualSum { node, norm });
    }
    let scaled = sum.into_iter().map(|a| a / norm).collect();
    Statevector::from_amplitudes(segment_input.num_qubits(), scaled)
}

/// Build a network with one node per depth entry and the given residual
/// points.
pub fn make_topology(
    num_qubits: usize,
    depth_split: &[usize],
    residual_points: &[usize],
) -> Result<NetworkTopology> {
    if depth_split.is_empty() {
        return Err(Error::EmptyDepthSplit);
    }
    for &point in residual_points {
        if point >= depth_split.len() {
            return Err(Error::InvalidResidualPoint {
                index: point,
                num_nodes: depth_split.len(),
            });
        }
    }
    let mut nodes = Vec::with_capacity(depth_split.len());
    let mut offset = 0;
    for &depth in depth_split {
        let circuit = build_circuit(num_qubits, depth)?;
        let params = circuit.num_params();
        nodes.push(QuantumNode {
            circuit,
            param_offset: offset,
        });
        offset += params;
    }
    Ok(NetworkTopology {
        nodes,
        residual_points: residual_points.iter().copied().collect(),
        num_qubits,
        policy: ResidualAdditionPolicy::default(),
    })
}

/// The residual placements studied for small cascades: every node a residual
/// block, then a single residual point after node k for k from last-but-one
/// down to 0. For three nodes that is [{0,1}, {1}, {0}]; for two, [{0}].
pub fn enumerate_residual_configs(num_nodes: usize) -> Result<Vec<BTreeSet<usize>>> {
    if num_nodes < 2 {
        return Err(Error::UnsupportedNodeCount { num_nodes });
    }
    let mut configs: Vec<BTreeSet<usize>> = Vec::new();
    configs.push((0..num_nodes - 1).collect());
    for k in (0..num_nodes - 1).rev() {
        let single: BTreeSet<usize> = [k].into_iter().collect();
        if !configs.contains(&single) {
            configs.push(single);
        }
    }
    Ok(configs)
}
