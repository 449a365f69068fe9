//! Cost-landscape scans and gradient-variance diagnostics.
//!
//! A landscape scan fixes all but two angles and evaluates the cost on a
//! Cartesian grid over those two. The flatness report turns a grid into a
//! single number: the fraction of interior cells whose per-step central
//! difference gradient magnitude falls below a threshold. The variance sweep
//! measures how the sample variance of one gradient component decays as the
//! qubit count grows, which is the practical signature of a barren plateau.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{self, Write};

use crate::circuit::random_params;
use crate::error::{Error, Result};
use crate::gradient::{partial_with_fallback, GradientOptions};
use crate::network::NetworkTopology;
use crate::objective::cost;

/// Minimum sample count for a reportable variance estimate.
pub const MIN_VARIANCE_SAMPLES: usize = 30;

/// Default flatness threshold: gradient magnitude per unit grid step.
pub const DEFAULT_FLATNESS_THRESHOLD: f64 = 1e-3;

/// Cost values over a 2-D slice of parameter space, row-major:
/// `values[i * resolution + j]` is the cost at axis-0 index `i`,
/// axis-1 index `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeGrid {
    pub axis_param_indices: (usize, usize),
    pub axis_ranges: [(f64, f64); 2],
    pub resolution: usize,
    pub fixed_params: Vec<f64>,
    pub values: Vec<f64>,
}

impl LandscapeGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.resolution + j]
    }

    /// Angle of grid index `index` along `axis` (0 or 1).
    pub fn axis_coordinate(&self, axis: usize, index: usize) -> f64 {
        let (lo, hi) = self.axis_ranges[axis];
        lo + (hi - lo) * index as f64 / (self.resolution - 1) as f64
    }

    /// Rows of `i,j,theta_i,theta_j,cost` in row-major order.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "i,j,theta_i,theta_j,cost")?;
        for i in 0..self.resolution {
            let theta_i = self.axis_coordinate(0, i);
            for j in 0..self.resolution {
                let theta_j = self.axis_coordinate(1, j);
                writeln!(out, "{i},{j},{theta_i},{theta_j},{}", self.value(i, j))?;
            }
        }
        Ok(())
    }
}

/// Flat-region summary of one grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub grad_threshold: f64,
    /// Fraction of interior cells with gradient magnitude below threshold.
    pub flat_fraction: f64,
    pub min_value: f64,
    pub min_location: (usize, usize),
}

/// Which gradient component a variance sweep tracks. The selector is fixed
/// across the sweep; `FromEnd` resolves against each topology's parameter
/// count, pinning a position in the circuit structure (the last parameters
/// sit in the final layer of the final node, where a residual connection's
/// effect on gradient magnitude is most direct).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamIndex {
    Absolute(usize),
    FromEnd { from_end: usize },
}

impl ParamIndex {
    pub fn resolve(&self, num_params: usize) -> Result<usize> {
        let index = match *self {
            ParamIndex::Absolute(j) => j,
            ParamIndex::FromEnd { from_end } => {
                if from_end >= num_params {
                    return Err(Error::ParamIndexOutOfRange {
                        index: from_end,
                        num_params,
                    });
                }
                num_params - 1 - from_end
            }
        };
        if index >= num_params {
            return Err(Error::ParamIndexOutOfRange { index, num_params });
        }
        Ok(index)
    }
}

/// Gradient-variance decay over a family of topologies indexed by qubit
/// count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceSweep {
    pub qubit_counts: Vec<usize>,
    pub samples_per_point: usize,
    pub variances: Vec<f64>,
}

impl VarianceSweep {
    /// Rows of `num_qubits,variance,samples`, one per qubit count.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "num_qubits,variance,samples")?;
        for (n, v) in self.qubit_counts.iter().zip(&self.variances) {
            writeln!(out, "{n},{v},{}", self.samples_per_point)?;
        }
        Ok(())
    }
}

/// Evaluate the cost over a `resolution`×`resolution` grid spanning
/// `ranges` on two parameter axes, all other angles held at `fixed_params`.
pub fn scan_landscape(
    topology: &NetworkTopology,
    axis_params: (usize, usize),
    resolution: usize,
    ranges: [(f64, f64); 2],
    fixed_params: &[f64],
) -> Result<LandscapeGrid> {
    let num_params = topology.num_params();
    let (a, b) = axis_params;
    if a == b || a >= num_params || b >= num_params {
        return Err(Error::InvalidAxisParams {
            first: a,
            second: b,
            num_params,
        });
    }
    if resolution < 2 {
        return Err(Error::ResolutionTooSmall {
            resolution,
            min: 2,
        });
    }
    if fixed_params.len() != num_params {
        return Err(Error::ParamLengthMismatch {
            expected: num_params,
            actual: fixed_params.len(),
        });
    }
    let coordinate = |axis: usize, index: usize| {
        let (lo, hi) = ranges[axis];
        lo + (hi - lo) * index as f64 / (resolution - 1) as f64
    };
    let values: Vec<f64> = (0..resolution * resolution)
        .into_par_iter()
        .map(|flat| -> Result<f64> {
            let (i, j) = (flat / resolution, flat % resolution);
            let mut params = fixed_params.to_vec();
            params[a] = coordinate(0, i);
            params[b] = coordinate(1, j);
            cost(topology, &params)
        })
        .collect::<Result<_>>()?;
    Ok(LandscapeGrid {
        axis_param_indices: axis_params,
        axis_ranges: ranges,
        resolution,
        fixed_params: fixed_params.to_vec(),
        values,
    })
}

/// Central-difference gradient magnitude per interior cell, thresholded.
pub fn flatness(grid: &LandscapeGrid, grad_threshold: f64) -> Result<FlatnessReport> {
    let r = grid.resolution;
    if r < 3 {
        return Err(Error::ResolutionTooSmall {
            resolution: r,
            min: 3,
        });
    }
    let mut flat = 0usize;
    let interior = (r - 2) * (r - 2);
    for i in 1..r - 1 {
        for j in 1..r - 1 {
            let gx = (grid.value(i + 1, j) - grid.value(i - 1, j)) / 2.0;
            let gy = (grid.value(i, j + 1) - grid.value(i, j - 1)) / 2.0;
            if gx.hypot(gy) < grad_threshold {
                flat += 1;
            }
        }
    }
    let mut min_value = f64::INFINITY;
    let mut min_location = (0, 0);
    for i in 0..r {
        for j in 0..r {
            let v = grid.value(i, j);
            if v < min_value {
                min_value = v;
                min_location = (i, j);
            }
        }
    }
    Ok(FlatnessReport {
        grad_threshold,
        flat_fraction: flat as f64 / interior as f64,
        min_value,
        min_location,
    })
}

/// Unbiased sample variance (n − 1 denominator).
pub fn sample_variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

/// For each qubit count, draw `samples` parameter vectors uniform in [0, π]
/// and report the sample variance of ∂C/∂θ at `param_index`.
///
/// Draws come from an independent ChaCha stream per qubit count (stream id =
/// qubit count, seed = `base_seed`), so extending the count list never
/// perturbs existing points.
pub fn variance_sweep<F>(
    build: F,
    qubit_counts: &[usize],
    param_index: ParamIndex,
    samples: usize,
    base_seed: u64,
) -> Result<VarianceSweep>
where
    F: Fn(usize) -> Result<NetworkTopology> + Sync,
{
    if samples < MIN_VARIANCE_SAMPLES {
        return Err(Error::TooFewSamples {
            samples,
            min: MIN_VARIANCE_SAMPLES,
        });
    }
    let options = GradientOptions::default();
    let mut variances = Vec::with_capacity(qubit_counts.len());
    for &n in qubit_counts {
        let topology = build(n)?;
        let j = param_index.resolve(topology.num_params())?;
        let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
        rng.set_stream(n as u64);
        let draws: Vec<Vec<f64>> = (0..samples)
            .map(|_| random_params(topology.num_params(), &mut rng))
            .collect();
        let partials: Vec<f64> = draws
            .par_iter()
            .map(|params| partial_with_fallback(&topology, params, j, &options))
            .collect::<Result<_>>()?;
        variances.push(sample_variance(&partials));
    }
    Ok(VarianceSweep {
        qubit_counts: qubit_counts.to_vec(),
        samples_per_point: samples,
        variances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::make_topology;
    use std::f64::consts::PI;

    #[test]
    fn resolution_two_corner_is_minimum() {
        let t = make_topology(2, &[1], &[]).unwrap();
        let grid = scan_landscape(
            &t,
            (0, 1),
            2,
            [(0.0, PI), (0.0, PI)],
            &vec![0.0; t.num_params()],
        )
        .unwrap();
        assert_eq!(grid.values.len(), 4);
        assert_eq!(grid.value(0, 0), 0.0);
    }

    #[test]
    fn scan_is_pure_and_matches_column_major_evaluation() {
        let t = make_topology(2, &[1, 1], &[0]).unwrap();
        let fixed = vec![0.7; t.num_params()];
        let ranges = [(0.0, 2.0 * PI), (0.0, 2.0 * PI)];
        let grid = scan_landscape(&t, (0, 1), 5, ranges, &fixed).unwrap();
        let again = scan_landscape(&t, (0, 1), 5, ranges, &fixed).unwrap();
        assert_eq!(grid.values, again.values);

        // Evaluate in column-major order by hand; values must agree cell
        // for cell because each cell is a pure function of its coordinates.
        for j in 0..5 {
            for i in 0..5 {
                let mut params = fixed.clone();
                params[0] = grid.axis_coordinate(0, i);
                params[1] = grid.axis_coordinate(1, j);
                let direct = cost(&t, &params).unwrap();
                assert_eq!(direct, grid.value(i, j));
            }
        }
    }

    #[test]
    fn scan_validation() {
        let t = make_topology(2, &[1], &[]).unwrap();
        let fixed = vec![0.0; t.num_params()];
        assert!(scan_landscape(&t, (0, 0), 5, [(0.0, 1.0); 2], &fixed).is_err());
        assert!(scan_landscape(&t, (0, 99), 5, [(0.0, 1.0); 2], &fixed).is_err());
        assert!(scan_landscape(&t, (0, 1), 1, [(0.0, 1.0); 2], &fixed).is_err());
        assert!(scan_landscape(&t, (0, 1), 5, [(0.0, 1.0); 2], &fixed[1..]).is_err());
    }

    fn constant_grid(resolution: usize, value: f64) -> LandscapeGrid {
        LandscapeGrid {
            axis_param_indices: (0, 1),
            axis_ranges: [(0.0, 1.0), (0.0, 1.0)],
            resolution,
            fixed_params: vec![],
            values: vec![value; resolution * resolution],
        }
    }

    #[test]
    fn flatness_of_constant_grid_is_one() {
        let report = flatness(&constant_grid(10, 0.5), 1e-3).unwrap();
        assert_eq!(report.flat_fraction, 1.0);
        assert_eq!(report.min_value, 0.5);
    }

    #[test]
    fn flatness_of_uniform_slope_is_zero() {
        // Plane rising by 1 per cell step along axis 0.
        let r = 8;
        let mut grid = constant_grid(r, 0.0);
        for i in 0..r {
            for j in 0..r {
                grid.values[i * r + j] = i as f64;
            }
        }
        let report = flatness(&grid, 0.5).unwrap();
        assert_eq!(report.flat_fraction, 0.0);
        assert_eq!(report.min_value, 0.0);
        assert_eq!(report.min_location, (0, 0));
    }

    #[test]
    fn flatness_monotone_in_threshold() {
        let t = make_topology(3, &[1, 1], &[0]).unwrap();
        let grid = scan_landscape(
            &t,
            (0, 1),
            12,
            [(0.0, 2.0 * PI), (0.0, 2.0 * PI)],
            &vec![0.9; t.num_params()],
        )
        .unwrap();
        let mut last = 0.0;
        for threshold in [1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0] {
            let f = flatness(&grid, threshold).unwrap().flat_fraction;
            assert!(f >= last);
            last = f;
        }
        assert_eq!(last, 1.0);
    }

    #[test]
    fn flatness_needs_interior_cells() {
        assert!(flatness(&constant_grid(2, 0.0), 1e-3).is_err());
    }

    #[test]
    fn sample_variance_of_constant_is_zero() {
        assert_eq!(sample_variance(&[0.3, 0.3, 0.3, 0.3]), 0.0);
        assert_eq!(sample_variance(&[1.0]), 0.0);
    }

    #[test]
    fn sample_variance_hand_case() {
        // Values 1, 2, 3: mean 2, squared deviations 1+0+1, n−1 = 2.
        assert!((sample_variance(&[1.0, 2.0, 3.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn param_index_resolution() {
        assert_eq!(ParamIndex::Absolute(3).resolve(10).unwrap(), 3);
        assert_eq!(ParamIndex::FromEnd { from_end: 0 }.resolve(10).unwrap(), 9);
        assert_eq!(ParamIndex::FromEnd { from_end: 2 }.resolve(10).unwrap(), 7);
        assert!(ParamIndex::Absolute(10).resolve(10).is_err());
        assert!(ParamIndex::FromEnd { from_end: 10 }.resolve(10).is_err());

        // Bare integers and {"from_end": k} both parse.
        let abs: ParamIndex = serde_json::from_str("4").unwrap();
        assert_eq!(abs, ParamIndex::Absolute(4));
        let rel: ParamIndex = serde_json::from_str("{\"from_end\":1}").unwrap();
        assert_eq!(rel, ParamIndex::FromEnd { from_end: 1 });
    }

    #[test]
    fn variance_sweep_rejects_small_samples() {
        let result = variance_sweep(
            |n| make_topology(n, &[1, 1], &[]),
            &[2, 3],
            ParamIndex::Absolute(0),
            5,
            42,
        );
        assert!(matches!(result, Err(Error::TooFewSamples { .. })));
    }

    #[test]
    fn variance_sweep_deterministic_and_stream_stable() {
        let build = |n: usize| make_topology(n, &[1, 1], &[]);
        let a = variance_sweep(build, &[2, 3, 4], ParamIndex::Absolute(0), 30, 7).unwrap();
        let b = variance_sweep(build, &[2, 3, 4], ParamIndex::Absolute(0), 30, 7).unwrap();
        assert_eq!(a.variances, b.variances);
        // Independent per-count streams: dropping a count leaves the others
        // untouched.
        let c = variance_sweep(build, &[2, 4], ParamIndex::Absolute(0), 30, 7).unwrap();
        assert_eq!(c.variances[0], a.variances[0]);
        assert_eq!(c.variances[1], a.variances[2]);
    }

    #[test]
    fn csv_formats() {
        let grid = constant_grid(2, 0.25);
        let mut buf = Vec::new();
        grid.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "i,j,theta_i,theta_j,cost");
        assert_eq!(lines.next().unwrap(), "0,0,0,0,0.25");
        assert_eq!(text.lines().count(), 5);

        let sweep = VarianceSweep {
            qubit_counts: vec![4, 5],
            samples_per_point: 30,
            variances: vec![0.5, 0.25],
        };
        let mut buf = Vec::new();
        sweep.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "num_qubits,variance,samples\n4,0.5,30\n5,0.25,30\n"
        );
    }
}
