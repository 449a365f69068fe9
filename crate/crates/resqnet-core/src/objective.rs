//! The global training objective: one minus the probability of measuring
//! every qubit in |0⟩ on the network output, with the network input fixed
//! to |0…0⟩.

use crate::error::Result;
use crate::network::NetworkTopology;
use crate::state::Statevector;

/// C(θ) = 1 − |⟨0…0|ψ_final(θ)⟩|², clamped into [0, 1] against float dust.
pub fn cost(topology: &NetworkTopology, params: &[f64]) -> Result<f64> {
    let input = Statevector::zero(topology.num_qubits())?;
    let output = topology.forward(params, &input)?;
    Ok(cost_of_state(&output))
}

pub(crate) fn cost_of_state(state: &Statevector) -> f64 {
    (1.0 - state.probability_of_all_zeros()).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::random_params;
    use crate::network::make_topology;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn zero_params_give_zero_cost() {
        for points in [vec![], vec![0]] {
            let t = make_topology(3, &[2, 1], &points).unwrap();
            let c = cost(&t, &vec![0.0; t.num_params()]).unwrap();
            assert_eq!(c, 0.0);
        }
    }

    #[test]
    fn flipped_qubits_give_unit_cost() {
        // Smallest allowed case: 2 qubits, one node of depth 1,
        // params [π,0,0,0] → output |11⟩ → cost 1.
        let t = make_topology(2, &[1], &[]).unwrap();
        let c = cost(&t, &[PI, 0.0, 0.0, 0.0]).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cost_bounded_in_unit_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let t = make_topology(4, &[3, 3], &[0]).unwrap();
        for _ in 0..50 {
            let params = random_params(t.num_params(), &mut rng);
            let c = cost(&t, &params).unwrap();
            assert!((0.0..=1.0).contains(&c));
        }
    }

    #[test]
    fn cost_periodic_with_period_four_pi() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let t = make_topology(3, &[2, 1], &[0]).unwrap();
        let params = random_params(t.num_params(), &mut rng);
        let base = cost(&t, &params).unwrap();
        for j in [0, 7, t.num_params() - 1] {
            let mut shifted = params.clone();
            shifted[j] += 4.0 * PI;
            let c = cost(&t, &shifted).unwrap();
            assert!(
                (c - base).abs() < 1e-9,
                "period-4π violated at parameter {j}: {c} vs {base}"
            );
        }
    }
}
