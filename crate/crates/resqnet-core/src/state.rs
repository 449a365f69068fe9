//! Dense statevector over n qubits and the three gate kinds used by the
//! layer template: RX, RY and CNOT.
//!
//! Conventions, used consistently everywhere (including test oracles):
//! - qubit 0 is the most significant bit of the basis index;
//! - rotations follow the half-angle convention,
//!   RX(θ) = exp(−iθX/2), RY(θ) = exp(−iθY/2).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on simulated qubits unless a caller overrides it.
/// 2^24 amplitudes at 16 bytes each is ~256 MiB.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// A gate in a circuit. Rotation gates carry the index of their angle in the
/// parameter vector; CNOT carries a control qubit instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    Rx,
    Ry,
    Cnot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub target: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub control: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param_index: Option<usize>,
}

impl GateOp {
    pub fn rx(target: usize, param_index: usize) -> Self {
        GateOp {
            kind: GateKind::Rx,
            target,
            control: None,
            param_index: Some(param_index),
        }
    }

    pub fn ry(target: usize, param_index: usize) -> Self {
        GateOp {
            kind: GateKind::Ry,
            target,
            control: None,
            param_index: Some(param_index),
        }
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        if control == target {
            return Err(Error::ControlEqualsTarget { index: control });
        }
        Ok(GateOp {
            kind: GateKind::Cnot,
            target,
            control: Some(control),
            param_index: None,
        })
    }

    pub fn is_rotation(&self) -> bool {
        matches!(self.kind, GateKind::Rx | GateKind::Ry)
    }
}

/// Dense complex amplitude vector over `num_qubits` qubits, unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// |0…0⟩ on `num_qubits` qubits, guarded by [`DEFAULT_MAX_QUBITS`].
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::zero_with_max(num_qubits, DEFAULT_MAX_QUBITS)
    }

    /// |0…0⟩ with an explicit resource cap.
    pub fn zero_with_max(num_qubits: usize, max_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > max_qubits {
            return Err(Error::QubitCountOutOfRange {
                requested: num_qubits,
                max: max_qubits,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Statevector { num_qubits, amps })
    }

    /// Wrap raw amplitudes. Length must be a power of two matching `num_qubits`.
    pub fn from_amplitudes(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if num_qubits == 0 || amps.len() != 1 << num_qubits {
            return Err(Error::QubitCountOutOfRange {
                requested: num_qubits,
                max: DEFAULT_MAX_QUBITS,
            });
        }
        Ok(Statevector { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dimension(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// |⟨0…0|ψ⟩|², the probability of measuring every qubit in |0⟩.
    pub fn probability_of_all_zeros(&self) -> f64 {
        self.amps[0].norm_sqr()
    }

    /// Basis-index bit mask for a qubit (qubit 0 = most significant bit).
    fn mask(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - 1 - qubit)
    }

    fn check_qubit(&self, index: usize) -> Result<()> {
        if index >= self.num_qubits {
            return Err(Error::QubitIndexOutOfRange {
                index,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Apply one gate in place. `angle` must be present exactly for RX/RY.
    pub fn apply_gate_mut(&mut self, gate: &GateOp, angle: Option<f64>) -> Result<()> {
        self.check_qubit(gate.target)?;
        match gate.kind {
            GateKind::Rx => {
                let theta = angle.ok_or(Error::MissingAngle)?;
                self.rotate(gate.target, theta, RotationAxis::X);
            }
            GateKind::Ry => {
                let theta = angle.ok_or(Error::MissingAngle)?;
                self.rotate(gate.target, theta, RotationAxis::Y);
            }
            GateKind::Cnot => {
                if angle.is_some() {
                    return Err(Error::UnexpectedAngle);
                }
                let control = gate.control.ok_or(Error::MissingAngle)?;
                self.check_qubit(control)?;
                if control == gate.target {
                    return Err(Error::ControlEqualsTarget { index: control });
                }
                self.cnot(control, gate.target);
            }
        }
        Ok(())
    }

    /// Functional variant of [`apply_gate_mut`]; returns the transformed state.
    pub fn apply_gate(&self, gate: &GateOp, angle: Option<f64>) -> Result<Self> {
        let mut next = self.clone();
        next.apply_gate_mut(gate, angle)?;
        Ok(next)
    }

    fn rotate(&mut self, qubit: usize, theta: f64, axis: RotationAxis) {
        let c = (theta / 2.0).cos();
        let s = (theta / 2.0).sin();
        let mask = self.mask(qubit);
        let stride = mask << 1;
        let dim = self.amps.len();
        match axis {
            RotationAxis::X => {
                // [[c, -is], [-is, c]]
                let is = Complex64::new(0.0, -s);
                let mut base = 0;
                while base < dim {
                    for i0 in base..base + mask {
                        let i1 = i0 | mask;
                        let a = self.amps[i0];
                        let b = self.amps[i1];
                        self.amps[i0] = c * a + is * b;
                        self.amps[i1] = is * a + c * b;
                    }
                    base += stride;
                }
            }
            RotationAxis::Y => {
                // [[c, -s], [s, c]]
                let mut base = 0;
                while base < dim {
                    for i0 in base..base + mask {
                        let i1 = i0 | mask;
                        let a = self.amps[i0];
                        let b = self.amps[i1];
                        self.amps[i0] = c * a - s * b;
                        self.amps[i1] = s * a + c * b;
                    }
                    base += stride;
                }
            }
        }
    }

    fn cnot(&mut self, control: usize, target: usize) {
        let cmask = self.mask(control);
        let tmask = self.mask(target);
        for i in 0..self.amps.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amps.swap(i, i | tmask);
            }
        }
    }
}

enum RotationAxis {
    X,
    Y,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!(
            (a - b).norm() < tol,
            "expected {b}, got {a} (diff {})",
            (a - b).norm()
        );
    }

    #[test]
    fn zero_state_one_qubit() {
        let s = Statevector::zero(1).unwrap();
        assert_eq!(s.amplitudes(), &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    }

    #[test]
    fn zero_state_two_qubits() {
        let s = Statevector::zero(2).unwrap();
        assert_eq!(s.dimension(), 4);
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
        for a in &s.amplitudes()[1..] {
            assert_eq!(*a, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn zero_state_ten_qubits_norm() {
        let s = Statevector::zero(10).unwrap();
        assert_eq!(s.norm(), 1.0);
    }

    #[test]
    fn zero_state_rejects_out_of_range() {
        assert!(Statevector::zero(0).is_err());
        assert!(Statevector::zero(DEFAULT_MAX_QUBITS + 1).is_err());
        assert!(Statevector::zero_with_max(25, 25).is_ok());
    }

    #[test]
    fn rx_zero_angle_is_identity() {
        let s = Statevector::zero(1).unwrap();
        let out = s.apply_gate(&GateOp::rx(0, 0), Some(0.0)).unwrap();
        assert_eq!(out.amplitudes(), s.amplitudes());
    }

    #[test]
    fn ry_pi_flips_qubit() {
        let s = Statevector::zero(1).unwrap();
        let out = s.apply_gate(&GateOp::ry(0, 0), Some(PI)).unwrap();
        // RY(π)|0⟩ = |1⟩ exactly (no phase).
        assert_close(out.amplitudes()[0], Complex64::new(0.0, 0.0), 1e-12);
        assert_close(out.amplitudes()[1], Complex64::new(1.0, 0.0), 1e-12);
    }

    #[test]
    fn rx_pi_flips_qubit_with_phase() {
        let s = Statevector::zero(1).unwrap();
        let out = s.apply_gate(&GateOp::rx(0, 0), Some(PI)).unwrap();
        // RX(π)|0⟩ = −i|1⟩.
        assert_close(out.amplitudes()[0], Complex64::new(0.0, 0.0), 1e-12);
        assert_close(out.amplitudes()[1], Complex64::new(0.0, -1.0), 1e-12);
    }

    #[test]
    fn probability_of_all_zeros_basis_cases() {
        assert_eq!(Statevector::zero(5).unwrap().probability_of_all_zeros(), 1.0);

        let one = Statevector::from_amplitudes(
            1,
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        )
        .unwrap();
        assert_eq!(one.probability_of_all_zeros(), 0.0);

        let uniform = Statevector::from_amplitudes(
            2,
            vec![Complex64::new(0.5, 0.0); 4],
        )
        .unwrap();
        assert!((uniform.probability_of_all_zeros() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn cnot_msb_convention() {
        // Prepare |10⟩ (qubit 0 set). With qubit 0 as MSB this is index 2.
        let mut s = Statevector::zero(2).unwrap();
        s.apply_gate_mut(&GateOp::ry(0, 0), Some(PI)).unwrap();
        assert_close(s.amplitudes()[0b10], Complex64::new(1.0, 0.0), 1e-12);
        // CNOT(0→1) sends |10⟩ to |11⟩.
        s.apply_gate_mut(&GateOp::cnot(0, 1).unwrap(), None).unwrap();
        assert_close(s.amplitudes()[0b11], Complex64::new(1.0, 0.0), 1e-12);
    }

    #[test]
    fn cnot_fixes_all_zeros() {
        let mut s = Statevector::zero(3).unwrap();
        s.apply_gate_mut(&GateOp::cnot(0, 1).unwrap(), None).unwrap();
        s.apply_gate_mut(&GateOp::cnot(1, 2).unwrap(), None).unwrap();
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn gate_argument_errors() {
        let mut s = Statevector::zero(2).unwrap();
        assert!(matches!(
            s.apply_gate_mut(&GateOp::rx(0, 0), None),
            Err(Error::MissingAngle)
        ));
        assert!(matches!(
            s.apply_gate_mut(&GateOp::cnot(0, 1).unwrap(), Some(0.3)),
            Err(Error::UnexpectedAngle)
        ));
        assert!(matches!(
            s.apply_gate_mut(&GateOp::rx(2, 0), Some(0.3)),
            Err(Error::QubitIndexOutOfRange { .. })
        ));
        assert!(GateOp::cnot(1, 1).is_err());
    }

    #[test]
    fn rotations_preserve_norm() {
        let mut s = Statevector::zero(3).unwrap();
        for (q, theta) in [(0, 0.3), (1, 1.7), (2, 2.9), (0, 4.2)] {
            s.apply_gate_mut(&GateOp::rx(q, 0), Some(theta)).unwrap();
            s.apply_gate_mut(&GateOp::ry(q, 0), Some(theta * 0.7)).unwrap();
        }
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }
}
