//! Gradients of the cost with respect to the rotation angles.
//!
//! Two routes are provided. The ±π/2 two-point shift rule is exact when the
//! cost is a trigonometric polynomial of the shifted angle, which holds for
//! plain cascades but not upstream of a residual renormalization. Central
//! finite differences work everywhere and double as the verification oracle.
//! The training default is [`gradient_with_fallback`]: the shift rule checked
//! component-wise against finite differences on residual topologies, with the
//! finite-difference value taking over wherever the two disagree.
//!
//! The shifted evaluations per gradient are independent and run on the
//! current rayon pool; callers bound the worker count by installing a pool.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::network::NetworkTopology;
use crate::objective::{cost, cost_of_state};
use crate::state::Statevector;

/// Default central-difference step in radians.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Tolerances and step for the fallback comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientOptions {
    pub fd_step: f64,
    /// Absolute floor of the disagreement tolerance.
    pub abs_tol: f64,
    /// Relative part, scaled by |finite-difference value|.
    pub rel_tol: f64,
}

impl Default for GradientOptions {
    fn default() -> Self {
        GradientOptions {
            fd_step: DEFAULT_FD_STEP,
            abs_tol: 1e-6,
            rel_tol: 1e-4,
        }
    }
}

impl GradientOptions {
    fn tolerance(&self, fd_value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * fd_value.abs())
    }
}

/// One component where the shift rule was rejected in favor of the
/// finite-difference value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FallbackEvent {
    pub param_index: usize,
    pub shift_value: f64,
    pub fd_value: f64,
}

/// Evaluation context reused across the shifted cost evaluations of one
/// gradient: the state entering each node at the unshifted parameters.
struct ShiftContext<'t> {
    topology: &'t NetworkTopology,
    entries: Vec<Statevector>,
}

impl<'t> ShiftContext<'t> {
    fn new(topology: &'t NetworkTopology, params: &[f64]) -> Result<Self> {
        let input = Statevector::zero(topology.num_qubits())?;
        let entries = topology.node_entry_states(params, &input)?;
        Ok(ShiftContext { topology, entries })
    }

    /// Cost with parameter `j` set to `value`, resuming from the node that
    /// owns `j`. Earlier nodes do not see `j`, so their cached entry states
    /// are exact.
    fn cost_with(&self, params: &[f64], j: usize, value: f64) -> Result<f64> {
        let node = self.topology.node_of_param(j);
        let mut shifted = params.to_vec();
        shifted[j] = value;
        let out = self
            .topology
            .forward_from(node, self.entries[node].clone(), &shifted)?;
        Ok(cost_of_state(&out))
    }

    fn shift_component(&self, params: &[f64], j: usize) -> Result<f64> {
        let plus = self.cost_with(params, j, params[j] + FRAC_PI_2)?;
        let minus = self.cost_with(params, j, params[j] - FRAC_PI_2)?;
        Ok((plus - minus) / 2.0)
    }

    fn fd_component(&self, params: &[f64], j: usize, step: f64) -> Result<f64> {
        let plus = self.cost_with(params, j, params[j] + step)?;
        let minus = self.cost_with(params, j, params[j] - step)?;
        Ok((plus - minus) / (2.0 * step))
    }
}

fn at_param(param_index: usize, err: Error) -> Error {
    Error::GradientEvaluation {
        param_index,
        source: Box::new(err),
    }
}

/// Analytic ±π/2 shift-rule gradient of the cost.
pub fn gradient_parameter_shift(topology: &NetworkTopology, params: &[f64]) -> Result<Vec<f64>> {
    let ctx = ShiftContext::new(topology, params)?;
    (0..params.len())
        .into_par_iter()
        .map(|j| ctx.shift_component(params, j).map_err(|e| at_param(j, e)))
        .collect()
}

/// Central finite differences (C(θ+h·e_j) − C(θ−h·e_j)) / 2h.
///
/// Deliberately evaluated through full forward passes with no shared state,
/// so it stays an independent cross-check of the shift-rule path.
pub fn gradient_finite_difference(
    topology: &NetworkTopology,
    params: &[f64],
    step: f64,
) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1e-2) {
        return Err(Error::InvalidFdStep { step });
    }
    (0..params.len())
        .into_par_iter()
        .map(|j| -> Result<f64> {
            let mut shifted = params.to_vec();
            shifted[j] = params[j] + step;
            let plus = cost(topology, &shifted)?;
            shifted[j] = params[j] - step;
            let minus = cost(topology, &shifted)?;
            Ok((plus - minus) / (2.0 * step))
        })
        .collect()
}

/// Training gradient: shift rule on plain topologies; on residual topologies
/// every component is compared against finite differences and replaced by
/// the finite-difference value where the two disagree beyond tolerance.
pub fn gradient_with_fallback(
    topology: &NetworkTopology,
    params: &[f64],
    options: &GradientOptions,
) -> Result<(Vec<f64>, Vec<FallbackEvent>)> {
    let ctx = ShiftContext::new(topology, params)?;
    if topology.residual_points().is_empty() {
        let grad: Vec<f64> = (0..params.len())
            .into_par_iter()
            .map(|j| ctx.shift_component(params, j).map_err(|e| at_param(j, e)))
            .collect::<Result<_>>()?;
        return Ok((grad, Vec::new()));
    }
    let per_component: Vec<(f64, Option<FallbackEvent>)> = (0..params.len())
        .into_par_iter()
        .map(|j| -> Result<(f64, Option<FallbackEvent>)> {
            let shift = ctx.shift_component(params, j).map_err(|e| at_param(j, e))?;
            let fd = ctx
                .fd_component(params, j, options.fd_step)
                .map_err(|e| at_param(j, e))?;
            if (shift - fd).abs() > options.tolerance(fd) {
                Ok((
                    fd,
                    Some(FallbackEvent {
                        param_index: j,
                        shift_value: shift,
                        fd_value: fd,
                    }),
                ))
            } else {
                Ok((shift, None))
            }
        })
        .collect::<Result<_>>()?;
    let mut grad = Vec::with_capacity(per_component.len());
    let mut events = Vec::new();
    for (value, event) in per_component {
        grad.push(value);
        events.extend(event);
    }
    Ok((grad, events))
}

/// Single-component variant of [`gradient_with_fallback`], used by the
/// gradient-variance diagnostics.
pub fn partial_with_fallback(
    topology: &NetworkTopology,
    params: &[f64],
    param_index: usize,
    options: &GradientOptions,
) -> Result<f64> {
    let ctx = ShiftContext::new(topology, params)?;
    let shift = ctx
        .shift_component(params, param_index)
        .map_err(|e| at_param(param_index, e))?;
    if topology.residual_points().is_empty() {
        return Ok(shift);
    }
    let fd = ctx
        .fd_component(params, param_index, options.fd_step)
        .map_err(|e| at_param(param_index, e))?;
    if (shift - fd).abs() > options.tolerance(fd) {
        Ok(fd)
    } else {
        Ok(shift)
    }
}

pub fn l2_norm(values: &[f64]) -> f64 {
    values.iter().map(|v| v * v).sum::<f64>().sqrt()
}
