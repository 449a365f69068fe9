use thiserror::Error;

/// Errors produced by the simulator and training stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {requested} outside supported range 1..={max}")]
    QubitCountOutOfRange { requested: usize, max: usize },

    #[error("qubit index {index} out of range for {num_qubits}-qubit state")]
    QubitIndexOutOfRange { index: usize, num_qubits: usize },

    #[error("rotation gate requires an angle")]
    MissingAngle,

    #[error("non-parameterized gate given an angle")]
    UnexpectedAngle,

    #[error("CNOT control and target must differ (both {index})")]
    ControlEqualsTarget { index: usize },

    #[error("circuit needs at least 2 qubits for the neighbor CNOT chain, got {num_qubits}")]
    TooFewQubits { num_qubits: usize },

    #[error("layer depth must be at least 1")]
    ZeroLayerDepth,

    #[error("effective depth is defined from 5 qubits upward, got {num_qubits}")]
    EffectiveDepthUndefined { num_qubits: usize },

    #[error("parameter vector length {actual} does not match expected {expected}")]
    ParamLengthMismatch { expected: usize, actual: usize },

    #[error("state has {actual} qubits, circuit expects {expected}")]
    QubitCountMismatch { expected: usize, actual: usize },

    #[error("depth split must be non-empty")]
    EmptyDepthSplit,

    #[error("residual point {index} out of range for {num_nodes} nodes")]
    InvalidResidualPoint { index: usize, num_nodes: usize },

    #[error("residual sum after node {node} is numerically zero (norm {norm:.3e}); states cancelled")]
    DegenerateResidualSum { node: usize, norm: f64 },

    #[error("finite-difference step {step} outside (0, 1e-2]")]
    InvalidFdStep { step: f64 },

    #[error("gradient evaluation failed at parameter {param_index}: {source}")]
    GradientEvaluation {
        param_index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("training requires at least 1 step")]
    ZeroSteps,

    #[error("landscape axis parameters must be distinct and < {num_params}, got ({first}, {second})")]
    InvalidAxisParams {
        first: usize,
        second: usize,
        num_params: usize,
    },

    #[error("grid resolution {resolution} too small; need at least {min}")]
    ResolutionTooSmall { resolution: usize, min: usize },

    #[error("variance sweep needs at least {min} samples, got {samples}")]
    TooFewSamples { samples: usize, min: usize },

    #[error("parameter index {index} out of range for {num_params} parameters")]
    ParamIndexOutOfRange { index: usize, num_params: usize },

    #[error("residual configurations are enumerated for 2 or 3 nodes, got {num_nodes}")]
    UnsupportedNodeCount { num_nodes: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
