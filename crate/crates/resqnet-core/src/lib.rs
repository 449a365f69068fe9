//! Classical simulation and training of residual quantum neural networks.
//!
//! A network is a cascade of quantum nodes, each a parameterized circuit of
//! repeated RX/RY + CNOT-chain layers. Residual connections add a segment's
//! input state back onto its output (renormalized) before the next node.
//! Training minimizes one minus the all-zeros measurement probability with
//! Adam, using parameter-shift gradients checked against finite differences
//! wherever the shift rule's exactness argument does not apply.
//!
//! Parallel work (gradient shift evaluations, landscape grid cells, variance
//! samples) runs on the ambient rayon pool; install a sized pool to bound
//! worker count.

pub mod analysis;
pub mod circuit;
mod error;
pub mod gradient;
pub mod network;
pub mod objective;
pub mod optimizer;
pub mod state;

pub use error::{Error, Result};

pub use analysis::{
    flatness, sample_variance, scan_landscape, variance_sweep, FlatnessReport, LandscapeGrid,
    ParamIndex, VarianceSweep, DEFAULT_FLATNESS_THRESHOLD, MIN_VARIANCE_SAMPLES,
};
pub use circuit::{
    build_circuit, effective_depth_per_node, effective_depth_total, random_params, CircuitSpec,
};
pub use gradient::{
    gradient_finite_difference, gradient_parameter_shift, gradient_with_fallback, l2_norm,
    partial_with_fallback, FallbackEvent, GradientOptions, DEFAULT_FD_STEP,
};
pub use network::{
    enumerate_residual_configs, make_topology, NetworkKind, NetworkTopology, QuantumNode,
    ResidualAdditionPolicy,
};
pub use objective::cost;
pub use optimizer::{
    train, AdamHyper, AdamState, TrainAbort, TraceFallback, TrainOptions, TrainingTrace,
};
pub use state::{GateKind, GateOp, Statevector, DEFAULT_MAX_QUBITS};
