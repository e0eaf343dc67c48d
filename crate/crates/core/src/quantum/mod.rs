//! Entangled-qubit strategies.
//!
//! The shared state is `|Φ^α⟩ = cos(α/2)|00⟩ + sin(α/2)|11⟩` and each agent
//! measures in a basis parametrised by `(θ, φ)`:
//!
//! ```text
//! |+⟩ = ( cos(φ/2),  e^{iθ} sin(φ/2))
//! |−⟩ = (−sin(φ/2),  e^{iθ} cos(φ/2))
//! ```
//!
//! An [`ActionAssignment`] maps each outcome `±` (per observation) to an action.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::OccupationMeasure;

mod schmidt;
mod trace;

pub use schmidt::schmidt_reduce;
pub use trace::{occupation_from_state, occupation_from_trace};

/// Agent identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Agent {
    A,
    B,
}

/// Measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];
}

/// `u_i^±(ξ_i)` for both agents, stored as
/// `[A+0, A−0, A+1, A−1, B+0, B−0, B+1, B−1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionAssignment([u8; 8]);

impl ActionAssignment {
    pub const COUNT: usize = 256;

    pub fn new(values: [u8; 8]) -> Result<Self> {
        Self::from_raw(&values.map(i64::from))
    }

    pub fn from_raw(values: &[i64; 8]) -> Result<Self> {
        let mut out = [0u8; 8];
        for (index, &value) in values.iter().enumerate() {
            match value {
                0 | 1 => out[index] = value as u8,
                _ => return Err(Error::AssignmentEntry { index, value }),
            }
        }
        Ok(Self(out))
    }

    /// Entry `i` is bit `7 − i` of `index`.
    pub fn from_index(index: usize) -> Self {
        assert!(index < Self::COUNT, "assignment index out of range: {index}");
        let mut out = [0u8; 8];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = ((index >> (7 - i)) & 1) as u8;
        }
        Self(out)
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (0..Self::COUNT).map(Self::from_index)
    }

    /// `v`: outcome `+` plays action 0 and `−` plays action 1 everywhere.
    pub fn optimal() -> Self {
        Self([0, 1, 0, 1, 0, 1, 0, 1])
    }

    pub fn values(&self) -> &[u8; 8] {
        &self.0
    }

    #[inline]
    fn slot(agent: Agent, obs: usize, outcome: Outcome) -> usize {
        let base = match agent {
            Agent::A => 0,
            Agent::B => 4,
        };
        base + 2 * obs + usize::from(outcome == Outcome::Minus)
    }

    #[inline]
    pub fn action(&self, agent: Agent, obs: usize, outcome: Outcome) -> usize {
        usize::from(self.0[Self::slot(agent, obs, outcome)])
    }

    /// Whether both outcomes map to the same action.
    #[inline]
    pub fn is_degenerate(&self, agent: Agent, obs: usize) -> bool {
        self.action(agent, obs, Outcome::Plus) == self.action(agent, obs, Outcome::Minus)
    }
}

impl fmt::Display for ActionAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = &self.0;
        write!(
            f,
            "A[{}{} {}{}] B[{}{} {}{}]",
            v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]
        )
    }
}

/// Orthonormal measurement basis on one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitBasis {
    pub plus: [Complex64; 2],
    pub minus: [Complex64; 2],
}

impl QubitBasis {
    /// Validates orthonormality to 1e-10.
    pub fn new(plus: [Complex64; 2], minus: [Complex64; 2]) -> Result<Self> {
        let basis = Self { plus, minus };
        let r = basis.orthonormality_residual();
        if r > 1e-10 {
            return Err(Error::NonOrthonormalBasis(r));
        }
        Ok(basis)
    }

    pub fn vector(&self, outcome: Outcome) -> &[Complex64; 2] {
        match outcome {
            Outcome::Plus => &self.plus,
            Outcome::Minus => &self.minus,
        }
    }

    pub fn orthonormality_residual(&self) -> f64 {
        let n_plus = (norm_sqr(&self.plus) - 1.0).abs();
        let n_minus = (norm_sqr(&self.minus) - 1.0).abs();
        n_plus.max(n_minus).max(inner(&self.plus, &self.minus).norm())
    }

    /// Haar-random basis.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut v = [Complex64::new(0.0, 0.0); 2];
        for c in v.iter_mut() {
            *c = Complex64::new(gaussian(rng), gaussian(rng));
        }
        let n = norm_sqr(&v).sqrt();
        let plus = [v[0] / n, v[1] / n];
        let minus = [-plus[1].conj(), plus[0].conj()];
        Self { plus, minus }
    }
}

pub(crate) fn inner(a: &[Complex64; 2], b: &[Complex64; 2]) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

pub(crate) fn norm_sqr(a: &[Complex64; 2]) -> f64 {
    a[0].norm_sqr() + a[1].norm_sqr()
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

pub fn measurement_basis(theta: f64, phi: f64) -> QubitBasis {
    let (s, c) = (phi / 2.0).sin_cos();
    let e = Complex64::from_polar(1.0, theta);
    QubitBasis {
        plus: [Complex64::new(c, 0.0), e * s],
        minus: [Complex64::new(-s, 0.0), e * c],
    }
}

/// Four complex amplitudes over `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureTwoQubitState([Complex64; 4]);

impl PureTwoQubitState {
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        let n: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::NonUnitState(n));
        }
        Ok(Self(amplitudes))
    }

    /// `|Φ^α⟩`.
    pub fn phi_alpha(alpha: f64) -> Self {
        let (s, c) = (alpha / 2.0).sin_cos();
        let z = Complex64::new(0.0, 0.0);
        Self([Complex64::new(c, 0.0), z, z, Complex64::new(s, 0.0)])
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut v = [Complex64::new(0.0, 0.0); 4];
        for c in v.iter_mut() {
            *c = Complex64::new(gaussian(rng), gaussian(rng));
        }
        let n: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        Self(v.map(|c| c / n))
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.0
    }

    /// Amplitude of `|a⟩ ⊗ |b⟩`.
    #[inline]
    pub fn amplitude(&self, a: usize, b: usize) -> Complex64 {
        self.0[2 * a + b]
    }
}

/// `(α, θ, φ, assignment)` with angle arrays ordered `[a0, a1, b0, b1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitStrategy {
    pub alpha: f64,
    pub theta: [f64; 4],
    pub phi: [f64; 4],
    pub assignment: ActionAssignment,
}

#[inline]
pub(crate) fn basis_slot(agent: Agent, obs: usize) -> usize {
    match agent {
        Agent::A => obs,
        Agent::B => 2 + obs,
    }
}

impl QubitStrategy {
    /// Accepts any finite angles; see [`QubitStrategy::canonicalize`].
    pub fn new(alpha: f64, theta: [f64; 4], phi: [f64; 4], assignment: ActionAssignment) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::NonFiniteAngle("alpha"));
        }
        if !theta.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteAngle("theta"));
        }
        if !phi.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteAngle("phi"));
        }
        Ok(Self {
            alpha,
            theta,
            phi,
            assignment,
        })
    }

    /// Uniform angles over `[0, π] × [0, 2π]⁴ × [0, π]⁴` and a uniform assignment.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self {
            alpha: rng.gen_range(0.0..=PI),
            theta: [(); 4].map(|_| rng.gen_range(0.0..TAU)),
            phi: [(); 4].map(|_| rng.gen_range(0.0..=PI)),
            assignment: ActionAssignment::from_index(rng.gen_range(0..ActionAssignment::COUNT)),
        }
    }

    pub fn basis(&self, agent: Agent, obs: usize) -> QubitBasis {
        let i = basis_slot(agent, obs);
        measurement_basis(self.theta[i], self.phi[i])
    }

    /// Equivalent strategy with `α ∈ [0, π]`, `θ ∈ [0, 2π)`, `φ ∈ [0, π]`.
    pub fn canonicalize(&self) -> Self {
        let mut out = *self;
        let mut alpha = self.alpha.rem_euclid(TAU);
        if alpha > PI {
            // cos(α/2) flips sign; a π shift of A's phases restores the state
            alpha = TAU - alpha;
            out.theta[0] += PI;
            out.theta[1] += PI;
        }
        out.alpha = alpha;
        for i in 0..4 {
            let mut phi = out.phi[i].rem_euclid(TAU);
            if phi > PI {
                phi = TAU - phi;
                out.theta[i] += PI;
            }
            out.phi[i] = phi;
            out.theta[i] = out.theta[i].rem_euclid(TAU);
        }
        out
    }

    pub fn is_canonical(&self) -> bool {
        (0.0..=PI).contains(&self.alpha)
            && self.theta.iter().all(|t| (0.0..TAU).contains(t))
            && self.phi.iter().all(|p| (0.0..=PI).contains(p))
    }
}

/// `β = ¼ sin α cos(θ_a + θ_b) sin φ_a sin φ_b`.
#[inline]
pub fn beta_term(alpha: f64, theta_a: f64, theta_b: f64, phi_a: f64, phi_b: f64) -> f64 {
    0.25 * alpha.sin() * (theta_a + theta_b).cos() * phi_a.sin() * phi_b.sin()
}

/// Joint outcome probabilities `p[σ_A][σ_B]` (index 0 = `+`) for one observation pair.
pub fn outcome_table(s: &QubitStrategy, xa: usize, xb: usize) -> [[f64; 2]; 2] {
    let (ia, ib) = (basis_slot(Agent::A, xa), basis_slot(Agent::B, xb));
    let (sa, ca) = (s.phi[ia] / 2.0).sin_cos();
    let (sb, cb) = (s.phi[ib] / 2.0).sin_cos();
    let (sh, ch) = (s.alpha / 2.0).sin_cos();
    let (c2, s2) = (ch * ch, sh * sh);
    let beta = beta_term(s.alpha, s.theta[ia], s.theta[ib], s.phi[ia], s.phi[ib]);
    let (ca2, sa2, cb2, sb2) = (ca * ca, sa * sa, cb * cb, sb * sb);
    [
        [c2 * ca2 * cb2 + s2 * sa2 * sb2 + beta, c2 * ca2 * sb2 + s2 * sa2 * cb2 - beta],
        [c2 * sa2 * cb2 + s2 * ca2 * sb2 - beta, c2 * sa2 * sb2 + s2 * ca2 * cb2 + beta],
    ]
}

/// Probability that one agent's measurement at `phi` returns `+` (marginal of `|Φ^α⟩`).
#[inline]
pub fn plus_marginal(alpha: f64, phi: f64) -> f64 {
    let (sh, ch) = (alpha / 2.0).sin_cos();
    let (sp, cp) = (phi / 2.0).sin_cos();
    ch * ch * cp * cp + sh * sh * sp * sp
}

fn agent_marginal(s: &QubitStrategy, agent: Agent, obs: usize) -> [f64; 2] {
    let p = plus_marginal(s.alpha, s.phi[basis_slot(agent, obs)]);
    let mut out = [0.0; 2];
    out[s.assignment.action(agent, obs, Outcome::Plus)] += p;
    out[s.assignment.action(agent, obs, Outcome::Minus)] += 1.0 - p;
    out
}

/// Occupation measure from the closed forms, with degenerate assignments
/// handled by the identity-measurement cases.
pub fn occupation_from_table(s: &QubitStrategy) -> OccupationMeasure {
    occupation_with(s, outcome_table)
}

pub(crate) fn occupation_with(
    s: &QubitStrategy,
    table: impl Fn(&QubitStrategy, usize, usize) -> [[f64; 2]; 2],
) -> OccupationMeasure {
    let asg = &s.assignment;
    let mut q = OccupationMeasure::zeros();
    for xa in 0..2 {
        for xb in 0..2 {
            match (asg.is_degenerate(Agent::A, xa), asg.is_degenerate(Agent::B, xb)) {
                (true, true) => {
                    let ua = asg.action(Agent::A, xa, Outcome::Plus);
                    let ub = asg.action(Agent::B, xb, Outcome::Plus);
                    q.set(ua, ub, xa, xb, 1.0);
                }
                (true, false) => {
                    let ua = asg.action(Agent::A, xa, Outcome::Plus);
                    let m = agent_marginal(s, Agent::B, xb);
                    for (ub, &p) in m.iter().enumerate() {
                        q.set(ua, ub, xa, xb, p);
                    }
                }
                (false, true) => {
                    let ub = asg.action(Agent::B, xb, Outcome::Plus);
                    let m = agent_marginal(s, Agent::A, xa);
                    for (ua, &p) in m.iter().enumerate() {
                        q.set(ua, ub, xa, xb, p);
                    }
                }
                (false, false) => {
                    let t = table(s, xa, xb);
                    for (i, oa) in Outcome::BOTH.iter().enumerate() {
                        for (j, ob) in Outcome::BOTH.iter().enumerate() {
                            let ua = asg.action(Agent::A, xa, *oa);
                            let ub = asg.action(Agent::B, xb, *ob);
                            q.set(ua, ub, xa, xb, t[i][j]);
                        }
                    }
                }
            }
        }
    }
    q
}

/// Which case of the equal-action table applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualActionCase {
    /// Both agents' assignments are degenerate.
    I,
    /// Only agent A is degenerate.
    II,
    /// Only agent B is degenerate.
    III,
    /// `u_A^+ = u_B^+`.
    IV,
    /// `u_A^+ ≠ u_B^+`.
    V,
}

pub fn equal_action_case(asg: &ActionAssignment, xa: usize, xb: usize) -> EqualActionCase {
    match (asg.is_degenerate(Agent::A, xa), asg.is_degenerate(Agent::B, xb)) {
        (true, true) => EqualActionCase::I,
        (true, false) => EqualActionCase::II,
        (false, true) => EqualActionCase::III,
        (false, false) => {
            if asg.action(Agent::A, xa, Outcome::Plus) == asg.action(Agent::B, xb, Outcome::Plus) {
                EqualActionCase::IV
            } else {
                EqualActionCase::V
            }
        }
    }
}

/// `Q(u_A = u_B | ξ_A, ξ_B)` by the equal-action case table.
pub fn equal_action_probability(s: &QubitStrategy, xa: usize, xb: usize) -> f64 {
    let asg = &s.assignment;
    let (ia, ib) = (basis_slot(Agent::A, xa), basis_slot(Agent::B, xb));
    let ua_plus = asg.action(Agent::A, xa, Outcome::Plus);
    let ub_plus = asg.action(Agent::B, xb, Outcome::Plus);
    let case = equal_action_case(asg, xa, xb);
    let one_sided = |fixed: usize, agent: Agent, obs: usize, phi: f64| {
        if asg.action(agent, obs, Outcome::Plus) == fixed {
            plus_marginal(s.alpha, phi)
        } else {
            1.0 - plus_marginal(s.alpha, phi)
        }
    };
    match case {
        EqualActionCase::I => f64::from(u8::from(ua_plus == ub_plus)),
        EqualActionCase::II => one_sided(ua_plus, Agent::B, xb, s.phi[ib]),
        EqualActionCase::III => one_sided(ub_plus, Agent::A, xa, s.phi[ia]),
        EqualActionCase::IV | EqualActionCase::V => {
            let (sa, ca) = (s.phi[ia] / 2.0).sin_cos();
            let (sb, cb) = (s.phi[ib] / 2.0).sin_cos();
            let beta = beta_term(s.alpha, s.theta[ia], s.theta[ib], s.phi[ia], s.phi[ib]);
            if case == EqualActionCase::IV {
                ca * ca * cb * cb + sa * sa * sb * sb + 2.0 * beta
            } else {
                ca * ca * sb * sb + sa * sa * cb * cb - 2.0 * beta
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v() -> ActionAssignment {
        ActionAssignment::optimal()
    }

    #[test]
    fn assignment_indexing_round_trips() {
        let mut seen = std::collections::HashSet::new();
        for a in ActionAssignment::all() {
            assert_eq!(ActionAssignment::from_index(a.index()), a);
            seen.insert(a);
        }
        assert_eq!(seen.len(), 256);
        assert!(ActionAssignment::from_raw(&[0, 1, 0, 1, 0, 1, 0, 2]).is_err());
    }

    #[test]
    fn optimal_assignment_is_case_iv_everywhere() {
        for xa in 0..2 {
            for xb in 0..2 {
                assert_eq!(equal_action_case(&v(), xa, xb), EqualActionCase::IV);
            }
        }
    }

    #[test]
    fn bases() {
        let z = measurement_basis(0.0, 0.0);
        assert_abs_diff_eq!(z.plus[0].re, 1.0);
        assert_abs_diff_eq!(z.minus[1].re, 1.0);
        let x = measurement_basis(0.0, PI);
        assert_abs_diff_eq!(x.plus[1].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x.minus[0].re, -1.0, epsilon = 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let b = measurement_basis(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
            assert!(b.orthonormality_residual() < 1e-12);
            assert!(QubitBasis::random(&mut rng).orthonormality_residual() < 1e-12);
        }
    }

    #[test]
    fn product_state_z_measurements_are_deterministic() {
        let s = QubitStrategy::new(0.0, [0.0; 4], [0.0; 4], v()).unwrap();
        let q = occupation_from_table(&s);
        for xa in 0..2 {
            for xb in 0..2 {
                assert_eq!(q.get(0, 0, xa, xb), 1.0);
            }
        }
    }

    #[test]
    fn maximally_entangled_z_measurements() {
        let s = QubitStrategy::new(PI / 2.0, [0.0; 4], [0.0; 4], v()).unwrap();
        let q = occupation_from_table(&s);
        assert_abs_diff_eq!(q.get(0, 0, 1, 0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(q.get(1, 1, 1, 0), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn perfect_correlation_in_x() {
        let s = QubitStrategy::new(PI / 2.0, [0.0; 4], [PI / 2.0; 4], v()).unwrap();
        assert_abs_diff_eq!(equal_action_probability(&s, 0, 1), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn equal_action_matches_table_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let s = QubitStrategy::random(&mut rng);
            let q = occupation_from_table(&s);
            for xa in 0..2 {
                for xb in 0..2 {
                    assert_abs_diff_eq!(
                        equal_action_probability(&s, xa, xb),
                        q.equal_action(xa, xb),
                        epsilon = 1e-13
                    );
                }
            }
        }
    }

    #[test]
    fn table_entries_are_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let s = QubitStrategy::random(&mut rng);
            assert!(occupation_from_table(&s).stochastic_residual() < 1e-12);
            let b = beta_term(s.alpha, s.theta[0], s.theta[2], s.phi[0], s.phi[2]);
            assert!(b.abs() <= 0.25);
        }
    }

    #[test]
    fn canonicalization_preserves_occupation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let s = QubitStrategy::new(
                rng.gen_range(-20.0..20.0),
                [(); 4].map(|_| rng.gen_range(-20.0..20.0)),
                [(); 4].map(|_| rng.gen_range(-20.0..20.0)),
                ActionAssignment::from_index(rng.gen_range(0..256)),
            )
            .unwrap();
            let c = s.canonicalize();
            assert!(c.is_canonical(), "{c:?}");
            let d = occupation_from_table(&s).max_abs_diff(&occupation_from_table(&c));
            assert!(d < 1e-12, "{d}");
        }
    }

    #[test]
    fn rejects_non_finite_angles() {
        assert!(QubitStrategy::new(f64::NAN, [0.0; 4], [0.0; 4], v()).is_err());
        assert!(QubitStrategy::new(0.0, [0.0, f64::INFINITY, 0.0, 0.0], [0.0; 4], v()).is_err());
    }
}
