//! Adam optimizer and the fixed-budget training loop.

use serde::{Deserialize, Serialize};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::gradient::{gradient_with_fallback, l2_norm, FallbackEvent, GradientOptions};
use crate::network::NetworkTopology;
use crate::objective::cost;

/// Adam hyperparameters. The stepsize default is 0.1, the value used by all
/// training experiments; the moment decays and epsilon are the usual ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamHyper {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamHyper {
    fn default() -> Self {
        AdamHyper {
            alpha: 0.1,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Per-parameter first/second moment accumulators and the step counter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    hyper: AdamHyper,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl AdamState {
    pub fn new(num_params: usize, hyper: AdamHyper) -> Self {
        AdamState {
            hyper,
            m: vec![0.0; num_params],
            v: vec![0.0; num_params],
            t: 0,
        }
    }

    pub fn with_defaults(num_params: usize) -> Self {
        Self::new(num_params, AdamHyper::default())
    }

    pub fn step_count(&self) -> u64 {
        self.t
    }

    /// One update: exponentially decaying first/second moments, bias
    /// correction with the incremented step count, then the parameter move
    /// θ ← θ − α·m̂/(√v̂ + ε).
    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) -> Result<()> {
        if params.len() != self.m.len() || grad.len() != self.m.len() {
            return Err(Error::ParamLengthMismatch {
                expected: self.m.len(),
                actual: if params.len() != self.m.len() {
                    params.len()
                } else {
                    grad.len()
                },
            });
        }
        self.t += 1;
        let h = self.hyper;
        let bc1 = 1.0 - h.beta1.powi(self.t as i32);
        let bc2 = 1.0 - h.beta2.powi(self.t as i32);
        for i in 0..params.len() {
            self.m[i] = h.beta1 * self.m[i] + (1.0 - h.beta1) * grad[i];
            self.v[i] = h.beta2 * self.v[i] + (1.0 - h.beta2) * grad[i] * grad[i];
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            params[i] -= h.alpha * m_hat / (v_hat.sqrt() + h.epsilon);
        }
        Ok(())
    }
}

/// Options for [`train`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainOptions {
    pub steps: usize,
    pub adam: AdamHyper,
    pub gradient: GradientOptions,
}

impl TrainOptions {
    pub fn with_steps(steps: usize) -> Self {
        TrainOptions {
            steps,
            adam: AdamHyper::default(),
            gradient: GradientOptions::default(),
        }
    }
}

/// A fallback event tagged with the iteration it occurred in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceFallback {
    pub iteration: usize,
    #[serde(flatten)]
    pub event: FallbackEvent,
}

/// Why a run stopped before its step budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainAbort {
    pub iteration: usize,
    pub message: String,
}

/// Everything recorded over one training run. `costs[i]` and `grad_norms[i]`
/// describe the parameters after `i` optimizer steps, so a completed run has
/// `steps + 1` entries in each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingTrace {
    pub costs: Vec<f64>,
    pub grad_norms: Vec<f64>,
    pub fallback_events: Vec<TraceFallback>,
    pub step_seconds: Vec<f64>,
    pub abort: Option<TrainAbort>,
}

impl TrainingTrace {
    pub fn final_cost(&self) -> Option<f64> {
        self.costs.last().copied()
    }

    pub fn iterations_recorded(&self) -> usize {
        self.costs.len()
    }
}

fn is_degenerate(err: &Error) -> bool {
    match err {
        Error::DegenerateResidualSum { .. } => true,
        Error::GradientEvaluation { source, .. } => is_degenerate(source),
        _ => false,
    }
}

/// Run `steps` Adam updates from `init_params`, recording cost and gradient
/// norm at the initial point and after every step. A degenerate residual sum
/// ends the run early with the partial trace preserved in the result.
pub fn train(
    topology: &NetworkTopology,
    init_params: &[f64],
    options: &TrainOptions,
) -> Result<TrainingTrace> {
    if options.steps == 0 {
        return Err(Error::ZeroSteps);
    }
    let mut params = init_params.to_vec();
    let mut adam = AdamState::new(topology.num_params(), options.adam);
    let mut trace = TrainingTrace {
        costs: Vec::with_capacity(options.steps + 1),
        grad_norms: Vec::with_capacity(options.steps + 1),
        fallback_events: Vec::new(),
        step_seconds: Vec::with_capacity(options.steps),
        abort: None,
    };

    let evaluate = |params: &[f64],
                        iteration: usize,
                        trace: &mut TrainingTrace|
     -> Result<Option<Vec<f64>>> {
        let c = match cost(topology, params) {
            Ok(c) => c,
            Err(e) if is_degenerate(&e) => {
                trace.abort = Some(TrainAbort {
                    iteration,
                    message: e.to_string(),
                });
                return Ok(None);
            }
            Err(e) => return Err(e),
        };
        let (grad, events) = match gradient_with_fallback(topology, params, &options.gradient) {
            Ok(r) => r,
            Err(e) if is_degenerate(&e) => {
                trace.abort = Some(TrainAbort {
                    iteration,
                    message: e.to_string(),
                });
                return Ok(None);
            }
            Err(e) => return Err(e),
        };
        trace.costs.push(c);
        trace.grad_norms.push(l2_norm(&grad));
        trace
            .fallback_events
            .extend(events.into_iter().map(|event| TraceFallback { iteration, event }));
        Ok(Some(grad))
    };

    let mut grad = match evaluate(&params, 0, &mut trace)? {
        Some(g) => g,
        None => return Ok(trace),
    };
    for iteration in 1..=options.steps {
        let started = Instant::now();
        adam.step(&mut params, &grad)?;
        match evaluate(&params, iteration, &mut trace)? {
            Some(g) => grad = g,
            None => return Ok(trace),
        }
        trace.step_seconds.push(started.elapsed().as_secs_f64());
    }
    Ok(trace)
}
