//! Reduction of an arbitrary pure two-qubit strategy to `|Φ^α⟩` form.
//!
//! With `|ψ⟩ = σ₁|u₁v₁⟩ + σ₂|u₂v₂⟩` and `U_A = [u₁ u₂]`, `U_B = [v₁ v₂]`,
//! measuring `|a⟩` on `|ψ⟩` is the same as measuring `U_A†|a⟩` on
//! `σ₁|00⟩ + σ₂|11⟩`, so only the local bases need rewriting.

use num_complex::Complex64;

use super::{inner, ActionAssignment, PureTwoQubitState, QubitBasis, QubitStrategy};
use crate::error::{Error, Result};

type Vec2 = [Complex64; 2];

const TINY: f64 = 1e-300;

fn perp(v: &Vec2) -> Vec2 {
    [-v[1].conj(), v[0].conj()]
}

fn normalized(v: Vec2) -> Option<Vec2> {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    (n > TINY).then(|| [v[0] / n, v[1] / n])
}

/// Leading eigenvector of `ρ_A = C C†`.
fn leading_vector(c: &[[Complex64; 2]; 2]) -> Vec2 {
    let rho = |r: usize, s: usize| c[r][0] * c[s][0].conj() + c[r][1] * c[s][1].conj();
    let (a, d, b) = (rho(0, 0).re, rho(1, 1).re, rho(0, 1));
    let half_gap = 0.5 * (a - d);
    let lambda = 0.5 * (a + d) + (half_gap * half_gap + b.norm_sqr()).sqrt();
    let first = [b, Complex64::new(lambda - a, 0.0)];
    let second = [Complex64::new(lambda - d, 0.0), b.conj()];
    let norm = |v: &Vec2| v[0].norm_sqr() + v[1].norm_sqr();
    let pick = if norm(&first) >= norm(&second) { first } else { second };
    normalized(pick).unwrap_or([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
}

/// `(θ, φ)` of the `(θ, φ)`-family basis whose `+` vector is `plus` up to phase.
pub(crate) fn angles_of(plus: &Vec2) -> (f64, f64) {
    let (x, y) = (plus[0], plus[1]);
    let phi = 2.0 * y.norm().atan2(x.norm());
    let theta = if x.norm() > 1e-150 && y.norm() > 1e-150 {
        (y.arg() - x.arg()).rem_euclid(std::f64::consts::TAU)
    } else {
        0.0
    };
    (theta, phi)
}

/// Rewrites `(ψ, bases, assignment)` as a canonical-state strategy with the
/// same occupation measure. `bases` are ordered `[a0, a1, b0, b1]`.
pub fn schmidt_reduce(
    psi: &PureTwoQubitState,
    bases: &[QubitBasis; 4],
    assignment: &ActionAssignment,
) -> Result<QubitStrategy> {
    let n: f64 = psi.amplitudes().iter().map(|c| c.norm_sqr()).sum();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitState(n));
    }
    let c = [
        [psi.amplitude(0, 0), psi.amplitude(0, 1)],
        [psi.amplitude(1, 0), psi.amplitude(1, 1)],
    ];
    let u1 = leading_vector(&c);
    let u2 = perp(&u1);
    let project = |u: &Vec2| -> Vec2 {
        [
            u[0].conj() * c[0][0] + u[1].conj() * c[1][0],
            u[0].conj() * c[0][1] + u[1].conj() * c[1][1],
        ]
    };
    let w1 = project(&u1);
    let w2 = project(&u2);
    let sigma1 = (w1[0].norm_sqr() + w1[1].norm_sqr()).sqrt();
    let v1 = normalized(w1).expect("a unit state has a nonzero leading Schmidt coefficient");
    let v2_dir = perp(&v1);
    let z = inner(&v2_dir, &w2);
    let sigma2 = z.norm();
    let phase = if sigma2 > TINY { z / sigma2 } else { Complex64::new(1.0, 0.0) };
    let v2 = [v2_dir[0] * phase, v2_dir[1] * phase];

    let scale = (sigma1 * sigma1 + sigma2 * sigma2).sqrt();
    let a = (sigma1 / scale).clamp(-1.0, 1.0);
    let alpha = 2.0 * a.acos();

    let mut theta = [0.0; 4];
    let mut phi = [0.0; 4];
    for (i, basis) in bases.iter().enumerate() {
        let (e1, e2) = if i < 2 { (&u1, &u2) } else { (&v1, &v2) };
        let rotated = [inner(e1, &basis.plus), inner(e2, &basis.plus)];
        (theta[i], phi[i]) = angles_of(&rotated);
    }
    QubitStrategy::new(alpha, theta, phi, *assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{measurement_basis, occupation_from_state, occupation_from_trace};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn z_bases() -> [QubitBasis; 4] {
        [measurement_basis(0.0, 0.0); 4]
    }

    #[test]
    fn canonical_state_is_unchanged() {
        let psi = PureTwoQubitState::phi_alpha(1.1);
        let s = schmidt_reduce(&psi, &z_bases(), &ActionAssignment::optimal()).unwrap();
        assert_abs_diff_eq!(s.alpha, 1.1, epsilon = 1e-12);
        for phi in s.phi {
            assert_abs_diff_eq!(phi, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn product_state_has_zero_alpha() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let psi = PureTwoQubitState::new([one, zero, zero, zero]).unwrap();
        let s = schmidt_reduce(&psi, &z_bases(), &ActionAssignment::optimal()).unwrap();
        assert_abs_diff_eq!(s.alpha, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn swapped_bell_state() {
        // (|01⟩ + |10⟩)/√2 is maximally entangled
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let psi = PureTwoQubitState::new([zero, h, h, zero]).unwrap();
        let s = schmidt_reduce(&psi, &z_bases(), &ActionAssignment::optimal()).unwrap();
        assert_abs_diff_eq!(s.alpha, PI / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn random_states_keep_their_occupation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let psi = PureTwoQubitState::random(&mut rng);
            let bases = [(); 4].map(|_| QubitBasis::random(&mut rng));
            let asg = ActionAssignment::from_index(rng.gen_range(0..256));
            let s = schmidt_reduce(&psi, &bases, &asg).unwrap();
            assert!((0.0..=PI / 2.0 + 1e-12).contains(&s.alpha));
            let d = occupation_from_state(&psi, &bases, &asg).max_abs_diff(&occupation_from_trace(&s));
            assert!(d < 1e-10, "{d}");
        }
    }
}
