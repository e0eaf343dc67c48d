//! Quantum optima and the sym-CAC advantage thresholds.
//!
//! Two independent routes to `J*_Q`:
//!
//! * [`sym_quantum_optimum`] uses the closed-form angle structure for sym-CAC
//!   (`α = π/2`, the `v` assignment, two θ patterns) and searches the
//!   remaining three φ angles.
//! * [`full_quantum_optimum`] searches all nine angles for each of the 256
//!   action assignments and works for any instance.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classical::sym_classical_optimum;
use crate::error::{Error, Result};
use crate::instance::{SymPrior, TeamInstance};
use crate::quantum::{occupation_from_table, ActionAssignment, QubitStrategy};

mod local;
mod structure;

pub use structure::{
    f_bar, stationarity_check, vertex_minimum_check, StationarityReport, StationaryPoint, ThresholdSide,
    VertexMinimumReport,
};

/// `Δ*(χ)` below this counts as a strict advantage.
pub const ADVANTAGE_TOL: f64 = -1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub grid_points_per_angle: usize,
    pub multistart_count: usize,
    pub refine_tolerance: f64,
    pub max_refine_iterations: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            grid_points_per_angle: 16,
            multistart_count: 16,
            refine_tolerance: 1e-9,
            max_refine_iterations: 500,
            seed: 0x7ea3_2024,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points_per_angle < 8 {
            return Err(Error::InvalidConfig(format!(
                "grid_points_per_angle must be at least 8 (got {})",
                self.grid_points_per_angle
            )));
        }
        if self.multistart_count < 16 {
            return Err(Error::InvalidConfig(format!(
                "multistart_count must be at least 16 (got {})",
                self.multistart_count
            )));
        }
        if !(self.refine_tolerance > 0.0 && self.refine_tolerance.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "refine_tolerance must be positive (got {})",
                self.refine_tolerance
            )));
        }
        if self.max_refine_iterations == 0 {
            return Err(Error::InvalidConfig("max_refine_iterations must be positive".into()));
        }
        Ok(())
    }
}

/// No-signalling bounds and quantum thresholds of a symmetric prior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdReport {
    /// `k/s`
    pub chi_lower_ns: f64,
    /// `s/k`
    pub chi_upper_ns: f64,
    pub chi_th: f64,
    pub chi_up_th: f64,
    #[serde(rename = "A")]
    pub a: f64,
}

impl ThresholdReport {
    /// Whether entangled qubits strictly beat the classical optimum at `chi`.
    pub fn predicts_advantage(&self, chi: f64) -> bool {
        self.chi_th < chi && chi < self.chi_up_th && chi != 1.0
    }
}

pub fn thresholds(p: &SymPrior) -> Result<ThresholdReport> {
    thresholds_raw(p.s(), p.k(), p.t())
}

/// Same as [`thresholds`] without the normalisation requirement; the result
/// depends only on the ratios `s : k : t`.
pub fn thresholds_raw(s: f64, k: f64, t: f64) -> Result<ThresholdReport> {
    if ![s, k, t].iter().all(|v| v.is_finite() && *v >= 0.0) || s <= k {
        return Err(Error::InvalidSymPrior(format!(
            "need finite s > k >= 0 and t >= 0 (got s = {s}, k = {k}, t = {t})"
        )));
    }
    let a = (s * s + k * k + (k + s) * t) / (2.0 * k * s + (k + s) * t);
    if a.is_nan() || a < 1.0 {
        return Err(Error::DegenerateThreshold(a));
    }
    let chi_up_th = a + (a * a - 1.0).sqrt();
    Ok(ThresholdReport {
        chi_lower_ns: k / s,
        chi_upper_ns: s / k,
        chi_th: 1.0 / chi_up_th,
        chi_up_th,
        a,
    })
}

/// `(α*, θ*)` for sym-CAC with `φ_{a0} = θ_{a0} = 0`.
pub fn sym_optimal_angles(p: &SymPrior, chi: f64) -> Result<(f64, [f64; 4])> {
    if (chi - 1.0).abs() <= 1e-12 {
        return Err(Error::AmbiguousSign("chi - 1"));
    }
    let lead = p.s() * chi - p.k();
    if lead.abs() <= 1e-12 * p.k().max(p.s() * chi) {
        return Err(Error::AmbiguousSign("s*chi - k"));
    }
    let theta_b0 = if chi > 1.0 { 0.0 } else { PI };
    let theta_b1 = if lead > 0.0 { 0.0 } else { PI };
    Ok((PI / 2.0, [0.0, PI, theta_b0, theta_b1]))
}

fn sym_cost(p: &SymPrior, chi: f64, b0: f64, b1: f64, cross: f64, a1b1: f64) -> f64 {
    let (s, k, t) = (p.s(), p.k(), p.t());
    let eq = |c: f64| 0.5 * (1.0 + c);
    -chi * (s + k + 2.0 * t)
        + (chi * k - s) * eq(b0.cos())
        + (chi - 1.0) * t * (eq(b1.cos()) + eq(cross))
        + (chi * s - k) * eq(a1b1.cos())
}

/// `J̄(χ, φ_{a1}, φ_{b0}, φ_{b1})`: cost of θ = (0, π, 0, 0) at `α = π/2`.
pub fn j_bar(p: &SymPrior, chi: f64, phi_a1: f64, phi_b0: f64, phi_b1: f64) -> f64 {
    sym_cost(p, chi, phi_b0, phi_b1, (phi_a1 + phi_b0).cos(), phi_a1 + phi_b1)
}

/// `J̲(χ, φ_{a1}, φ_{b0}, φ_{b1})`: cost of θ = (0, π, π, 0) at `α = π/2`.
pub fn j_underbar(p: &SymPrior, chi: f64, phi_a1: f64, phi_b0: f64, phi_b1: f64) -> f64 {
    sym_cost(p, chi, phi_b0, phi_b1, (phi_a1 - phi_b0).cos(), phi_a1 + phi_b1)
}

/// Which of the two sym-CAC objectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SymBranch {
    Bar,
    Underbar,
}

impl SymBranch {
    pub fn theta(self) -> [f64; 4] {
        match self {
            SymBranch::Bar => [0.0, PI, 0.0, 0.0],
            SymBranch::Underbar => [0.0, PI, PI, 0.0],
        }
    }

    pub fn eval(self, p: &SymPrior, chi: f64, phi: &[f64; 3]) -> f64 {
        match self {
            SymBranch::Bar => j_bar(p, chi, phi[0], phi[1], phi[2]),
            SymBranch::Underbar => j_underbar(p, chi, phi[0], phi[1], phi[2]),
        }
    }
}

/// Strategy for `α = π/2`, the branch's θ, `φ = (0, φ_{a1}, φ_{b0}, φ_{b1})` and `v`.
pub fn sym_strategy(branch: SymBranch, phi: [f64; 3]) -> QubitStrategy {
    QubitStrategy {
        alpha: PI / 2.0,
        theta: branch.theta(),
        phi: [0.0, phi[0], phi[1], phi[2]],
        assignment: ActionAssignment::optimal(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumOptimum {
    pub strategy: QubitStrategy,
    pub cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymQuantumOptimum {
    pub strategy: QubitStrategy,
    pub cost: f64,
    pub branch: SymBranch,
    /// `(φ_{a1}, φ_{b0}, φ_{b1})`
    pub phi: [f64; 3],
}

/// Maps `u ∈ ℝ` onto `[0, π]`.
fn box_phi(u: f64) -> f64 {
    0.5 * PI * (1.0 - u.cos())
}

fn unbox_phi(phi: f64) -> f64 {
    (1.0 - 2.0 * phi / PI).clamp(-1.0, 1.0).acos()
}

fn linspace(n: usize) -> Vec<f64> {
    (0..n).map(|i| PI * i as f64 / (n - 1) as f64).collect()
}

fn minimise_branch(p: &SymPrior, chi: f64, branch: SymBranch, cfg: &OptimizerConfig) -> ([f64; 3], f64) {
    let axis = linspace(cfg.grid_points_per_angle);
    let mut grid: Vec<([f64; 3], f64)> = Vec::with_capacity(axis.len().pow(3));
    for &a in &axis {
        for &b in &axis {
            for &c in &axis {
                let phi = [a, b, c];
                grid.push((phi, branch.eval(p, chi, &phi)));
            }
        }
    }
    grid.sort_by(|x, y| x.1.total_cmp(&y.1).then_with(|| x.0.partial_cmp(&y.0).unwrap()));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ branch as u64);
    let mut seeds: Vec<[f64; 3]> = grid
        .iter()
        .take(cfg.multistart_count)
        .map(|(phi, _)| phi.map(unbox_phi))
        .collect();
    seeds.extend((0..cfg.multistart_count).map(|_| [(); 3].map(|_| rng.gen_range(0.0..PI))));

    let f = |u: &[f64; 3]| branch.eval(p, chi, &u.map(box_phi));
    let (u, value) = local::multistart(&f, &seeds, cfg.refine_tolerance, cfg.max_refine_iterations);
    let best_grid = grid[0];
    if best_grid.1 < value {
        best_grid
    } else {
        (u.map(box_phi), value)
    }
}

/// `min(inf J̄, inf J̲)` over `φ ∈ [0, π]³`.
pub fn sym_quantum_optimum(p: &SymPrior, chi: f64, cfg: &OptimizerConfig) -> Result<SymQuantumOptimum> {
    cfg.validate()?;
    if !(chi > 0.0 && chi.is_finite()) {
        return Err(Error::ChiNonpositive(chi));
    }
    let (bar_phi, bar) = minimise_branch(p, chi, SymBranch::Bar, cfg);
    let (under_phi, under) = minimise_branch(p, chi, SymBranch::Underbar, cfg);
    let (branch, phi, cost) = if under < bar - 1e-12 {
        (SymBranch::Underbar, under_phi, under)
    } else {
        (SymBranch::Bar, bar_phi, bar)
    };
    Ok(SymQuantumOptimum {
        strategy: sym_strategy(branch, phi),
        cost,
        branch,
        phi,
    })
}

fn unpack(x: &[f64; 9], assignment: ActionAssignment) -> QubitStrategy {
    QubitStrategy {
        alpha: x[0],
        theta: [x[1], x[2], x[3], x[4]],
        phi: [x[5], x[6], x[7], x[8]],
        assignment,
    }
}

fn full_seeds(assignment: ActionAssignment, cfg: &OptimizerConfig) -> Vec<[f64; 9]> {
    let mut seeds = Vec::with_capacity(16 + cfg.multistart_count);
    // product states measured along ±z cover every deterministic policy
    for corner in 0..16 {
        let mut x = [0.0; 9];
        for i in 0..4 {
            x[5 + i] = if corner >> i & 1 == 1 { PI } else { 0.0 };
        }
        seeds.push(x);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(assignment.index() as u64));
    for _ in 0..cfg.multistart_count {
        let mut x = [0.0; 9];
        x[0] = rng.gen_range(0.0..PI);
        for v in &mut x[1..5] {
            *v = rng.gen_range(0.0..TAU);
        }
        for v in &mut x[5..] {
            *v = rng.gen_range(0.0..PI);
        }
        seeds.push(x);
    }
    seeds
}

/// Nine-angle search for every action assignment.
pub fn full_quantum_optimum(instance: &TeamInstance, cfg: &OptimizerConfig) -> Result<QuantumOptimum> {
    let all: Vec<_> = ActionAssignment::all().collect();
    full_quantum_optimum_over(instance, &all, cfg)
}

/// Nine-angle search restricted to the given assignments.
pub fn full_quantum_optimum_over(
    instance: &TeamInstance,
    assignments: &[ActionAssignment],
    cfg: &OptimizerConfig,
) -> Result<QuantumOptimum> {
    cfg.validate()?;
    if assignments.is_empty() {
        return Err(Error::InvalidConfig("no action assignments to search".into()));
    }
    let results: Vec<([f64; 9], f64)> = assignments
        .par_iter()
        .map(|&asg| {
            let f = |x: &[f64; 9]| instance.expected_cost(&occupation_from_table(&unpack(x, asg)));
            local::multistart(&f, &full_seeds(asg, cfg), cfg.refine_tolerance, cfg.max_refine_iterations)
        })
        .collect();
    let mut best = 0;
    for i in 1..results.len() {
        if results[i].1 < results[best].1 {
            best = i;
        }
    }
    let (x, cost) = results[best];
    Ok(QuantumOptimum {
        strategy: unpack(&x, assignments[best]).canonicalize(),
        cost,
    })
}

/// `Δ*(χ) = J*_Q − J*_L` on sym-CAC.
pub fn advantage_gap(p: &SymPrior, chi: f64, cfg: &OptimizerConfig) -> Result<f64> {
    let q = sym_quantum_optimum(p, chi, cfg)?;
    Ok(q.cost - sym_classical_optimum(p, chi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Prior, TeamInstance};
    use crate::quantum::occupation_from_trace;
    use approx::assert_abs_diff_eq;

    fn lam8() -> SymPrior {
        SymPrior::from_lambda(0.8).unwrap()
    }

    #[test]
    fn lambda_08_thresholds() {
        let r = thresholds(&lam8()).unwrap();
        assert_abs_diff_eq!(r.a, 3.25, epsilon = 1e-14);
        assert_abs_diff_eq!(r.chi_th, 3.25 - 9.5625f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.chi_up_th, 3.25 + 9.5625f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.chi_lower_ns, 0.0625, epsilon = 1e-15);
        assert_abs_diff_eq!(r.chi_upper_ns, 16.0, epsilon = 1e-12);
        assert!(r.predicts_advantage(2.0) && !r.predicts_advantage(1.0) && !r.predicts_advantage(7.0));
    }

    #[test]
    fn thresholds_are_scale_invariant() {
        let r = thresholds(&lam8()).unwrap();
        let raw = thresholds_raw(3.2, 0.2, 0.8).unwrap();
        assert_abs_diff_eq!(r.chi_th, raw.chi_th, epsilon = 1e-14);
        assert!(thresholds_raw(0.1, 0.1, 0.1).is_err());
    }

    #[test]
    fn optimal_angles() {
        let p = lam8();
        assert_eq!(sym_optimal_angles(&p, 2.0).unwrap(), (PI / 2.0, [0.0, PI, 0.0, 0.0]));
        assert_eq!(sym_optimal_angles(&p, 0.5).unwrap(), (PI / 2.0, [0.0, PI, PI, 0.0]));
        assert!(matches!(sym_optimal_angles(&p, 1.0), Err(Error::AmbiguousSign(_))));
        assert!(matches!(sym_optimal_angles(&p, 0.0625), Err(Error::AmbiguousSign(_))));
    }

    #[test]
    fn closed_forms_match_strategy_costs() {
        let p = lam8();
        for &(chi, phi) in &[(2.0, [PI / 2.0; 3]), (0.5, [0.3, 1.9, 2.4]), (7.0, [1.0, 0.1, 3.0])] {
            let inst = TeamInstance::sym_cac(&p, chi).unwrap();
            for branch in [SymBranch::Bar, SymBranch::Underbar] {
                let s = sym_strategy(branch, phi);
                let direct = inst.expected_cost(&occupation_from_trace(&s));
                assert_abs_diff_eq!(branch.eval(&p, chi, &phi), direct, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_anchors() {
        let p = lam8();
        let (s, k, t) = (p.s(), p.k(), p.t());
        for chi in [0.3, 1.0, 2.5, 9.0] {
            assert_abs_diff_eq!(j_bar(&p, chi, PI, 0.0, 0.0), -(1.0 + chi) * (s + t), epsilon = 1e-14);
            assert_abs_diff_eq!(j_bar(&p, chi, 0.0, PI, PI), -chi * (s + k + 2.0 * t), epsilon = 1e-14);
            assert_abs_diff_eq!(j_underbar(&p, chi, 0.0, 0.0, 0.0), -(s + k + 2.0 * t), epsilon = 1e-14);
            assert_abs_diff_eq!(j_underbar(&p, chi, 1.2, 0.0, 0.7), j_bar(&p, chi, 1.2, 0.0, 0.7));
        }
    }

    #[test]
    fn sym_optimum_examples() {
        let p = lam8();
        let cfg = OptimizerConfig::default();
        assert_abs_diff_eq!(sym_quantum_optimum(&p, 1.0, &cfg).unwrap().cost, -0.8, epsilon = 1e-9);
        assert_abs_diff_eq!(sym_quantum_optimum(&p, 7.0, &cfg).unwrap().cost, -3.5, epsilon = 1e-9);
        assert!(advantage_gap(&p, 2.0, &cfg).unwrap() < -1e-4);
    }

    #[test]
    fn config_validation() {
        let cfg = OptimizerConfig {
            grid_points_per_angle: 4,
            ..OptimizerConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
        let cfg = OptimizerConfig {
            multistart_count: 3,
            ..OptimizerConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn zero_cost_full_optimum() {
        let inst = TeamInstance::new([[0, 0], [0, 0]], [[0, 0], [0, 0]], Prior::uniform(), 2.0).unwrap();
        let asg = [ActionAssignment::optimal()];
        let q = full_quantum_optimum_over(&inst, &asg, &OptimizerConfig::default()).unwrap();
        assert_eq!(q.cost, 0.0);
    }
}
