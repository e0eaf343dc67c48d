//! Cross-checks between closed forms and brute-force evaluation.
//!
//! Each check returns the worst residual it saw; [`VerifyLevel::Full`] uses
//! larger samples and grids.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classical::{classical_optimum, sym_classical_optimum};
use crate::instance::{OccupationMeasure, Prior, SymPrior, TeamInstance};
use crate::nosignalling::{ns_bounds_cac, ns_bounds_half_cac, ns_optimum};
use crate::optimizer::{
    advantage_gap, full_quantum_optimum, full_quantum_optimum_over, stationarity_check, sym_quantum_optimum,
    thresholds, vertex_minimum_check, OptimizerConfig, StationaryPoint, ThresholdSide, ADVANTAGE_TOL,
};
use crate::quantum::{
    occupation_from_state, occupation_from_table, occupation_from_trace, schmidt_reduce, ActionAssignment,
    PureTwoQubitState, QubitBasis, QubitStrategy,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum VerifyLevel {
    #[default]
    Fast,
    Full,
}

/// Closed-form occupation evaluator under test.
pub type TableFn = fn(&QubitStrategy) -> OccupationMeasure;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub level: VerifyLevel,
    pub table: TableFn,
    pub seed: u64,
    pub optimizer: OptimizerConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            level: VerifyLevel::Fast,
            table: occupation_from_table,
            seed: 20_240_601,
            optimizer: OptimizerConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub level: VerifyLevel,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Sizes {
    strategies: usize,
    sym_draws: usize,
    cac_priors: usize,
    schmidt: usize,
    stationary: usize,
    vertex_priors: usize,
    vertex_grid: usize,
    two_path: usize,
}

impl Sizes {
    fn of(level: VerifyLevel) -> Self {
        match level {
            VerifyLevel::Fast => Sizes {
                strategies: 1000,
                sym_draws: 1000,
                cac_priors: 100,
                schmidt: 100,
                stationary: 20,
                vertex_priors: 1,
                vertex_grid: 32,
                two_path: 2,
            },
            VerifyLevel::Full => Sizes {
                strategies: 10_000,
                sym_draws: 10_000,
                cac_priors: 1000,
                schmidt: 1000,
                stationary: 100,
                vertex_priors: 5,
                vertex_grid: 64,
                two_path: 10,
            },
        }
    }
}

fn check(name: &'static str, tol: f64, body: impl FnOnce() -> (f64, String)) -> CheckResult {
    let start = Instant::now();
    let (residual, detail) = body();
    CheckResult {
        name,
        passed: residual <= tol,
        residual,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_verification(opts: &VerifyOptions) -> VerifyReport {
    let n = Sizes::of(opts.level);
    let table = opts.table;
    let cfg = &opts.optimizer;
    let rng = |salt: u64| ChaCha8Rng::seed_from_u64(opts.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut checks = Vec::new();

    checks.push(check("table_trace_agreement", 1e-12, || {
        let mut r = rng(1);
        let worst = (0..n.strategies)
            .map(|_| {
                let s = QubitStrategy::random(&mut r);
                table(&s).max_abs_diff(&occupation_from_trace(&s))
            })
            .fold(0.0, f64::max);
        (worst, format!("{} random strategies", n.strategies))
    }));

    checks.push(check("quantum_no_signalling", 1e-12, || {
        let mut r = rng(2);
        let worst = (0..n.strategies)
            .map(|_| {
                let q = table(&QubitStrategy::random(&mut r));
                q.no_signalling_residual().max(q.stochastic_residual())
            })
            .fold(0.0, f64::max);
        (worst, format!("{} random strategies", n.strategies))
    }));

    checks.push(check("classical_closed_form", 1e-12, || {
        let mut r = rng(3);
        let mut worst: f64 = 0.0;
        for i in 0..n.sym_draws {
            let p = SymPrior::random(&mut r);
            let chi = match i % 4 {
                0 => (p.k() + p.t()) / (p.s() + p.t()),
                1 => (p.s() + p.t()) / (p.k() + p.t()),
                _ => (r.gen_range(-3.0f64..3.0)).exp(),
            };
            let inst = TeamInstance::sym_cac(&p, chi).expect("valid sym instance");
            worst = worst.max((classical_optimum(&inst).1 - sym_classical_optimum(&p, chi)).abs());
        }
        (worst, format!("{} draws including both breakpoints", n.sym_draws))
    }));

    checks.push(check("ns_exclusion", 1e-12, || {
        let mut r = rng(4);
        let mut worst: f64 = 0.0;
        for _ in 0..n.cac_priors {
            let prior = Prior::random(&mut r);
            let cac = ns_bounds_cac(&prior).expect("random priors are non-degenerate");
            let half = ns_bounds_half_cac(&prior).expect("random priors are non-degenerate");
            worst = worst.max((half.hi - cac.hi / 2.0).abs());
            worst = worst.max((cac.lo - half.lo).max(0.0));
            let probes = [
                (TeamInstance::cac(prior, cac.hi * 1.01), cac.hi.is_finite()),
                (TeamInstance::cac(prior, cac.lo * 0.99), true),
                (TeamInstance::half_cac(prior, half.hi * 1.01), half.hi.is_finite()),
                (TeamInstance::half_cac(prior, half.lo * 0.99), true),
            ];
            for (inst, applicable) in probes {
                if !applicable {
                    continue;
                }
                let inst = inst.expect("positive chi");
                worst = worst.max((ns_optimum(&inst).1 - classical_optimum(&inst).1).abs());
            }
        }
        (worst, format!("{} random priors, CAC and half-CAC", n.cac_priors))
    }));

    checks.push(check("threshold_chain", 1e-9, || {
        let mut r = rng(5);
        let mut worst: f64 = 0.0;
        let mut chain_failures = 0;
        for _ in 0..n.sym_draws.min(1000) {
            let p = SymPrior::random(&mut r);
            let rep = thresholds(&p).expect("s > k");
            let (s, k, t) = (p.s(), p.k(), p.t());
            worst = worst.max((rep.chi_th * rep.chi_up_th - 1.0).abs());
            let chain = k / s < rep.chi_th
                && rep.chi_th < (k + t) / (s + t)
                && (k + t) / (s + t) <= 1.0
                && 1.0 <= (s + t) / (k + t)
                && (s + t) / (k + t) < rep.chi_up_th
                && rep.chi_up_th < s / k;
            if !chain {
                chain_failures += 1;
            }
        }
        let residual = if chain_failures > 0 { f64::INFINITY } else { worst };
        (residual, format!("{chain_failures} ordering violations"))
    }));

    checks.push(check("stationarity", 0.0, || {
        let mut r = rng(6);
        let mut failures = 0;
        let mut worst: f64 = 0.0;
        for _ in 0..n.stationary {
            let p = SymPrior::random(&mut r);
            let (s, k, t) = (p.s(), p.k(), p.t());
            let ranges = [
                (StationaryPoint::PiZeroZero, (k + t) / (s + t), (s + t) / (k + t)),
                (StationaryPoint::ZeroPiPi, 1.0, s / k),
                (StationaryPoint::Origin, k / s, 1.0),
            ];
            for (point, lo, hi) in ranges {
                let chi = lo + (hi - lo) * r.gen_range(0.05..0.95);
                let rep = stationarity_check(&p, chi, point);
                worst = worst.max(rep.delta.abs()).max(rep.grad_norm);
                if !rep.passed {
                    failures += 1;
                }
            }
        }
        (
            f64::from(failures),
            format!("{} priors x 3 points, worst |delta| or gradient {worst:.2e}", n.stationary),
        )
    }));

    checks.push(check("vertex_minimum", 0.0, || {
        let mut r = rng(7);
        let mut failures = 0;
        for i in 0..n.vertex_priors {
            let p = if i == 0 {
                SymPrior::from_lambda(0.8).expect("valid lambda")
            } else {
                SymPrior::random(&mut r)
            };
            let expected = [
                (ThresholdSide::AtChiUpTh, [0.0, std::f64::consts::PI, std::f64::consts::PI]),
                (ThresholdSide::AtChiTh, [0.0, 0.0, 0.0]),
            ];
            for (side, vertex) in expected {
                let rep = vertex_minimum_check(&p, side, n.vertex_grid).expect("grid >= 32");
                if !rep.passed || rep.vertex != vertex {
                    failures += 1;
                }
            }
        }
        (
            f64::from(failures),
            format!("{} priors at grid {}^3", n.vertex_priors, n.vertex_grid),
        )
    }));

    checks.push(check("schmidt_reduction", 1e-10, || {
        let mut r = rng(8);
        let mut worst: f64 = 0.0;
        for _ in 0..n.schmidt {
            let psi = PureTwoQubitState::random(&mut r);
            let bases = [(); 4].map(|_| QubitBasis::random(&mut r));
            let asg = ActionAssignment::from_index(r.gen_range(0..ActionAssignment::COUNT));
            let reduced = schmidt_reduce(&psi, &bases, &asg).expect("unit state");
            let direct = occupation_from_state(&psi, &bases, &asg);
            worst = worst.max(direct.max_abs_diff(&table(&reduced)));
        }
        (worst, format!("{} random states and bases", n.schmidt))
    }));

    checks.push(check("advantage_characterisation", 0.0, || {
        let p = SymPrior::from_lambda(0.8).expect("valid lambda");
        let rep = thresholds(&p).expect("s > k");
        let probes = [
            rep.chi_th * 0.95,
            rep.chi_th * 1.05,
            0.5,
            1.0,
            2.0,
            rep.chi_up_th * 0.95,
            rep.chi_up_th * 1.05,
        ];
        let mut failures = 0;
        for chi in probes {
            let gap = advantage_gap(&p, chi, cfg).expect("valid config");
            if (gap < ADVANTAGE_TOL) != rep.predicts_advantage(chi) {
                failures += 1;
            }
        }
        (f64::from(failures), "lambda = 0.8 around both thresholds and at 1".into())
    }));

    checks.push(check("two_path_agreement", 1e-6, || {
        let mut r = rng(9);
        let mut worst: f64 = 0.0;
        let mut sandwich: f64 = 0.0;
        for i in 0..n.two_path {
            let p = if i == 0 {
                SymPrior::from_lambda(0.8).expect("valid lambda")
            } else {
                SymPrior::random(&mut r)
            };
            let rep = thresholds(&p).expect("s > k");
            let chi = (rep.chi_th.ln() + (rep.chi_up_th.ln() - rep.chi_th.ln()) * r.gen_range(0.1..0.9)).exp();
            let inst = TeamInstance::sym_cac(&p, chi).expect("valid instance");
            let restricted = sym_quantum_optimum(&p, chi, cfg).expect("valid config").cost;
            let full = if opts.level == VerifyLevel::Full {
                full_quantum_optimum(&inst, cfg)
            } else {
                let subset: Vec<_> = ActionAssignment::all().step_by(16).chain([ActionAssignment::optimal()]).collect();
                full_quantum_optimum_over(&inst, &subset, cfg)
            }
            .expect("valid config")
            .cost;
            worst = worst.max((restricted - full).abs());
            let local = classical_optimum(&inst).1;
            let ns = ns_optimum(&inst).1;
            sandwich = sandwich.max(ns - restricted).max(restricted - local);
        }
        let residual = if sandwich > 1e-9 { f64::INFINITY } else { worst };
        (residual, format!("{} instances, sandwich slack {sandwich:.2e}", n.two_path))
    }));

    VerifyReport {
        level: opts.level,
        checks,
    }
}

/// Closed forms with a deliberately wrong prefactor on the interference term.
#[doc(hidden)]
pub fn corrupted_table(s: &QubitStrategy) -> OccupationMeasure {
    crate::quantum::occupation_with(s, |s, xa, xb| {
        let mut t = crate::quantum::outcome_table(s, xa, xb);
        let beta = crate::quantum::beta_term(s.alpha, s.theta[xa], s.theta[2 + xb], s.phi[xa], s.phi[2 + xb]);
        // interference term scaled by 4/3
        let extra = beta / 3.0;
        t[0][0] += extra;
        t[1][1] += extra;
        t[0][1] -= extra;
        t[1][0] -= extra;
        t
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mutation_is_detected() {
        let opts = VerifyOptions {
            table: corrupted_table,
            ..VerifyOptions::default()
        };
        let report = run_verification(&opts);
        let failed: Vec<_> = report.failures().map(|c| c.name).collect();
        assert!(failed.contains(&"table_trace_agreement"), "{failed:?}");
    }
}
