//! Occupation measures by direct evaluation of `⟨ψ| P_A ⊗ P_B |ψ⟩`.
//!
//! Nothing here uses the closed forms, so it serves as their oracle.

use num_complex::Complex64;

use super::{basis_slot, ActionAssignment, Agent, Outcome, PureTwoQubitState, QubitBasis, QubitStrategy};
use crate::instance::OccupationMeasure;

type Mat2 = [[Complex64; 2]; 2];

fn projector(basis: &QubitBasis, asg: &ActionAssignment, agent: Agent, obs: usize, action: usize) -> Mat2 {
    let mut p = [[Complex64::new(0.0, 0.0); 2]; 2];
    for outcome in Outcome::BOTH {
        if asg.action(agent, obs, outcome) != action {
            continue;
        }
        let v = basis.vector(outcome);
        for r in 0..2 {
            for c in 0..2 {
                p[r][c] += v[r] * v[c].conj();
            }
        }
    }
    p
}

#[allow(clippy::needless_range_loop)]
fn expectation(psi: &PureTwoQubitState, pa: &Mat2, pb: &Mat2) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..2 {
        for b in 0..2 {
            let bra = psi.amplitude(a, b).conj();
            for a2 in 0..2 {
                for b2 in 0..2 {
                    acc += bra * pa[a][a2] * pb[b][b2] * psi.amplitude(a2, b2);
                }
            }
        }
    }
    acc.re
}

/// Occupation measure of an arbitrary pure state measured in `bases = [a0, a1, b0, b1]`.
pub fn occupation_from_state(
    psi: &PureTwoQubitState,
    bases: &[QubitBasis; 4],
    assignment: &ActionAssignment,
) -> OccupationMeasure {
    let mut q = OccupationMeasure::zeros();
    for xa in 0..2 {
        for xb in 0..2 {
            let ba = &bases[basis_slot(Agent::A, xa)];
            let bb = &bases[basis_slot(Agent::B, xb)];
            for ua in 0..2 {
                let pa = projector(ba, assignment, Agent::A, xa, ua);
                for ub in 0..2 {
                    let pb = projector(bb, assignment, Agent::B, xb, ub);
                    q.set(ua, ub, xa, xb, expectation(psi, &pa, &pb));
                }
            }
        }
    }
    q
}

pub fn occupation_from_trace(s: &QubitStrategy) -> OccupationMeasure {
    let bases = [
        s.basis(Agent::A, 0),
        s.basis(Agent::A, 1),
        s.basis(Agent::B, 0),
        s.basis(Agent::B, 1),
    ];
    occupation_from_state(&PureTwoQubitState::phi_alpha(s.alpha), &bases, &s.assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::occupation_from_table;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn agrees_with_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let s = QubitStrategy::random(&mut rng);
            let d = occupation_from_table(&s).max_abs_diff(&occupation_from_trace(&s));
            assert!(d < 1e-12, "{d} for {s:?}");
        }
    }

    #[test]
    fn z_and_x_measurement_on_bell_state() {
        let s = QubitStrategy::new(
            PI / 2.0,
            [0.0; 4],
            [0.0, 0.0, PI / 2.0, PI / 2.0],
            ActionAssignment::optimal(),
        )
        .unwrap();
        let q = occupation_from_trace(&s);
        assert_abs_diff_eq!(q.get(0, 0, 0, 0), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn product_states_factorise() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let mut s = QubitStrategy::random(&mut rng);
            s.alpha = 0.0;
            let q = occupation_from_trace(&s);
            for xa in 0..2 {
                for xb in 0..2 {
                    for ua in 0..2 {
                        for ub in 0..2 {
                            let f = q.marginal_a(ua, xa, xb) * q.marginal_b(ub, xa, xb);
                            assert_abs_diff_eq!(q.get(ua, ub, xa, xb), f, epsilon = 1e-13);
                        }
                    }
                }
            }
        }
    }
}
