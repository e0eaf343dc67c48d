//! Local deterministic policies and the classical optimum.

use std::fmt;

use crate::instance::{OccupationMeasure, SymPrior, TeamInstance};

/// Cost differences below this are treated as ties.
pub(crate) const TIE_TOL: f64 = 1e-12;

/// `π^{αγβδ}`: agent A plays `α·ξ_A ⊕ β`, agent B plays `γ·ξ_B ⊕ δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicPolicy {
    pub alpha: u8,
    pub gamma: u8,
    pub beta: u8,
    pub delta: u8,
}

impl DeterministicPolicy {
    /// Packs `(α, γ, β, δ)` as the binary number `αγβδ`.
    pub fn from_index(index: usize) -> Self {
        assert!(index < 16, "policy index out of range: {index}");
        Self {
            alpha: ((index >> 3) & 1) as u8,
            gamma: ((index >> 2) & 1) as u8,
            beta: ((index >> 1) & 1) as u8,
            delta: (index & 1) as u8,
        }
    }

    pub fn index(&self) -> usize {
        usize::from(self.alpha) << 3
            | usize::from(self.gamma) << 2
            | usize::from(self.beta) << 1
            | usize::from(self.delta)
    }

    /// All 16 policies in lexicographic order of `(α, γ, β, δ)`.
    pub fn all() -> impl Iterator<Item = Self> {
        (0..16).map(Self::from_index)
    }

    /// Parses the superscript form, e.g. `"1101"`.
    pub fn from_bits(bits: &str) -> Option<Self> {
        if bits.len() != 4 || !bits.bytes().all(|b| b == b'0' || b == b'1') {
            return None;
        }
        usize::from_str_radix(bits, 2).ok().map(Self::from_index)
    }

    #[inline]
    pub fn action_a(&self, xa: usize) -> usize {
        usize::from((self.alpha & xa as u8) ^ self.beta)
    }

    #[inline]
    pub fn action_b(&self, xb: usize) -> usize {
        usize::from((self.gamma & xb as u8) ^ self.delta)
    }
}

impl fmt::Display for DeterministicPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pi^{}{}{}{}", self.alpha, self.gamma, self.beta, self.delta)
    }
}

pub fn deterministic_occupation(p: DeterministicPolicy) -> OccupationMeasure {
    let mut q = OccupationMeasure::zeros();
    for xa in 0..2 {
        for xb in 0..2 {
            q.set(p.action_a(xa), p.action_b(xb), xa, xb, 1.0);
        }
    }
    q
}

/// Costs of all 16 deterministic policies, indexed by [`DeterministicPolicy::index`].
pub fn deterministic_costs(instance: &TeamInstance) -> [f64; 16] {
    let mut out = [0.0; 16];
    for p in DeterministicPolicy::all() {
        out[p.index()] = instance.expected_cost(&deterministic_occupation(p));
    }
    out
}

/// Best deterministic policy; near-ties go to the lexicographically smallest one.
pub fn classical_optimum(instance: &TeamInstance) -> (DeterministicPolicy, f64) {
    let costs = deterministic_costs(instance);
    let mut best = 0;
    for (i, &c) in costs.iter().enumerate().skip(1) {
        if c < costs[best] - TIE_TOL {
            best = i;
        }
    }
    (DeterministicPolicy::from_index(best), costs[best])
}

/// Closed-form classical optimum for sym-CAC.
pub fn sym_classical_optimum(p: &SymPrior, chi: f64) -> f64 {
    let (s, k, t) = (p.s(), p.k(), p.t());
    if chi <= (k + t) / (s + t) {
        -(s + k + 2.0 * t)
    } else if chi <= (s + t) / (k + t) {
        -(1.0 + chi) * (s + t)
    } else {
        -chi * (s + k + 2.0 * t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Prior, SymPrior};
    use approx::assert_abs_diff_eq;

    fn pol(bits: &str) -> DeterministicPolicy {
        DeterministicPolicy::from_bits(bits).unwrap()
    }

    #[test]
    fn sixteen_distinct_policies() {
        let occs: Vec<_> = DeterministicPolicy::all().map(deterministic_occupation).collect();
        for i in 0..16 {
            assert!(occs[i].is_valid());
            for j in i + 1..16 {
                assert!(occs[i].max_abs_diff(&occs[j]) > 0.5);
            }
        }
    }

    #[test]
    fn constant_and_mirror_policies() {
        let q = deterministic_occupation(pol("0000"));
        for xa in 0..2 {
            for xb in 0..2 {
                assert_eq!(q.get(0, 0, xa, xb), 1.0);
            }
        }
        let q = deterministic_occupation(pol("0001"));
        assert_eq!(q.get(0, 1, 1, 0), 1.0);
        let q = deterministic_occupation(pol("1100"));
        for xa in 0..2 {
            for xb in 0..2 {
                assert_eq!(q.get(xa, xb, xa, xb), 1.0);
            }
        }
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(pol("1101").to_string(), "pi^1101");
        assert!(DeterministicPolicy::from_bits("12").is_none());
        assert_eq!(pol("0110").index(), 6);
    }

    #[test]
    fn sym_examples() {
        let p = SymPrior::from_lambda(0.8).unwrap();
        assert_abs_diff_eq!(sym_classical_optimum(&p, 1.0), -0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(sym_classical_optimum(&p, 4.0), -2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sym_classical_optimum(&p, 0.25), -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(sym_classical_optimum(&p, 0.05), -0.5, epsilon = 1e-15);

        let inst = TeamInstance::sym_cac(&p, 8.0).unwrap();
        let (best, cost) = classical_optimum(&inst);
        assert_abs_diff_eq!(cost, -4.0, epsilon = 1e-12);
        assert_eq!(best, pol("0001"));
    }

    #[test]
    fn ties_prefer_smallest_index() {
        let inst = TeamInstance::cac(Prior::uniform(), 1.0).unwrap();
        let (best, _) = classical_optimum(&inst);
        assert_eq!(best.index(), 0);
    }
}
