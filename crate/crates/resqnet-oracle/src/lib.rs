//! Dense-matrix reference path for the test suites.
//!
//! Every gate becomes an explicit 2^n × 2^n unitary via Kronecker products,
//! circuits become matrix products, and residual connections become literal
//! vector addition followed by renormalization. Nothing here shares code
//! with the statevector simulator beyond the public circuit types, so
//! agreement between the two paths is a meaningful check.
//!
//! Conventions match the simulator: qubit 0 is the most significant bit of
//! the basis index and rotations use the half-angle convention.

use num_complex::Complex64;
use resqnet_core::{CircuitSpec, GateKind, GateOp, NetworkTopology};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    /// self · other
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim);
        let dim = self.dim;
        let mut out = Matrix::zeros(dim);
        for i in 0..dim {
            for k in 0..dim {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..dim {
                    out.data[i * dim + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.get(i, j) * v[j])
                    .sum::<Complex64>()
            })
            .collect()
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let dim = self.dim * other.dim;
        let mut out = Matrix::zeros(dim);
        for ar in 0..self.dim {
            for ac in 0..self.dim {
                let a = self.get(ar, ac);
                if a == ZERO {
                    continue;
                }
                for br in 0..other.dim {
                    for bc in 0..other.dim {
                        out.set(
                            ar * other.dim + br,
                            ac * other.dim + bc,
                            a * other.get(br, bc),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> Matrix {
        let mut out = Matrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn max_deviation_from_identity(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let expected = if i == j { ONE } else { ZERO };
                max = max.max((self.get(i, j) - expected).norm());
            }
        }
        max
    }
}

fn rotation_2x2(kind: GateKind, theta: f64) -> Matrix {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = (theta / 2.0).sin();
    let mut m = Matrix::zeros(2);
    match kind {
        GateKind::Rx => {
            let is = Complex64::new(0.0, -s);
            m.set(0, 0, c);
            m.set(0, 1, is);
            m.set(1, 0, is);
            m.set(1, 1, c);
        }
        GateKind::Ry => {
            let s = Complex64::new(s, 0.0);
            m.set(0, 0, c);
            m.set(0, 1, -s);
            m.set(1, 0, s);
            m.set(1, 1, c);
        }
        GateKind::Cnot => unreachable!("CNOT is not a rotation"),
    }
    m
}

/// Full 2^n × 2^n matrix of one gate.
pub fn gate_matrix(gate: &GateOp, angle: Option<f64>, num_qubits: usize) -> Matrix {
    let dim = 1 << num_qubits;
    match gate.kind {
        GateKind::Rx | GateKind::Ry => {
            let g = rotation_2x2(gate.kind, angle.expect("rotation angle"));
            let mut m = Matrix::identity(1);
            for q in 0..num_qubits {
                let factor = if q == gate.target {
                    g.clone()
                } else {
                    Matrix::identity(2)
                };
                m = m.kron(&factor);
            }
            m
        }
        GateKind::Cnot => {
            let control = gate.control.expect("CNOT control");
            let cmask = 1usize << (num_qubits - 1 - control);
            let tmask = 1usize << (num_qubits - 1 - gate.target);
            let mut m = Matrix::zeros(dim);
            for from in 0..dim {
                let to = if from & cmask != 0 { from ^ tmask } else { from };
                m.set(to, from, ONE);
            }
            m
        }
    }
}

/// Product of all gate matrices of a circuit, in application order
/// (last gate leftmost).
pub fn circuit_matrix(circuit: &CircuitSpec, params: &[f64]) -> Matrix {
    assert_eq!(params.len(), circuit.num_params());
    let mut total = Matrix::identity(1 << circuit.num_qubits());
    for gate in circuit.gates() {
        let angle = gate.param_index.map(|i| params[i]);
        let m = gate_matrix(gate, angle, circuit.num_qubits());
        total = m.matmul(&total);
    }
    total
}

pub fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Reference forward pass from |0…0⟩: per node a dense matvec, at residual
/// points explicit vector addition and renormalization.
///
/// Returns the final amplitudes. Panics on a vanishing residual sum, which
/// no reference case exercises.
pub fn forward_reference(topology: &NetworkTopology, params: &[f64]) -> Vec<Complex64> {
    let dim = 1usize << topology.num_qubits();
    let mut state = vec![ZERO; dim];
    state[0] = ONE;
    for (i, node) in topology.nodes().iter().enumerate() {
        let slice = &params[node.param_offset..node.param_offset + node.circuit.num_params()];
        let m = circuit_matrix(&node.circuit, slice);
        let intermediate = m.matvec(&state);
        if topology.residual_points().contains(&i) {
            let sum: Vec<Complex64> = state
                .iter()
                .zip(&intermediate)
                .map(|(a, b)| a + b)
                .collect();
            let norm = vector_norm(&sum);
            assert!(norm > 1e-12, "degenerate residual sum in reference path");
            state = sum.into_iter().map(|a| a / norm).collect();
        } else {
            state = intermediate;
        }
    }
    state
}

/// Max amplitude difference between two vectors.
pub fn max_amplitude_difference(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use resqnet_core::build_circuit;
    use std::f64::consts::PI;

    #[test]
    fn kron_dimensions() {
        let a = Matrix::identity(2);
        let b = Matrix::identity(4);
        assert_eq!(a.kron(&b).dim, 8);
    }

    #[test]
    fn rotation_matrices_are_unitary() {
        for kind in [GateKind::Rx, GateKind::Ry] {
            let m = rotation_2x2(kind, 1.234);
            let dev = m.dagger().matmul(&m).max_deviation_from_identity();
            assert!(dev < 1e-15);
        }
    }

    #[test]
    fn ry_pi_is_the_bit_flip_up_to_sign_structure() {
        let m = rotation_2x2(GateKind::Ry, PI);
        assert!((m.get(1, 0) - ONE).norm() < 1e-15);
        assert!((m.get(0, 1) + ONE).norm() < 1e-15);
    }

    #[test]
    fn cnot_matrix_msb_convention() {
        // 2 qubits, control 0 (MSB), target 1: permutation swapping
        // basis indices 2 and 3.
        let m = gate_matrix(&GateOp::cnot(0, 1).unwrap(), None, 2);
        assert_eq!(m.get(0, 0), ONE);
        assert_eq!(m.get(1, 1), ONE);
        assert_eq!(m.get(3, 2), ONE);
        assert_eq!(m.get(2, 3), ONE);
        assert_eq!(m.get(2, 2), ZERO);
    }

    #[test]
    fn circuit_matrix_is_unitary() {
        let c = build_circuit(3, 2).unwrap();
        let params: Vec<f64> = (0..c.num_params()).map(|i| 0.3 + 0.1 * i as f64).collect();
        let m = circuit_matrix(&c, &params);
        let dev = m.dagger().matmul(&m).max_deviation_from_identity();
        assert!(dev < 1e-10, "deviation {dev}");
    }
}
