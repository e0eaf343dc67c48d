//! No-signalling vertices, the no-signalling optimum and the χ-intervals
//! outside of which no-signalling correlations cannot beat local ones.

use std::fmt;

use serde::Serialize;

use crate::classical::{deterministic_costs, DeterministicPolicy, TIE_TOL};
use crate::error::{Error, Result};
use crate::instance::{InstanceClass, OccupationMeasure, Prior, TeamInstance};

/// Non-local vertex `Q^{αβδ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NsVertex {
    pub alpha: u8,
    pub beta: u8,
    pub delta: u8,
}

impl NsVertex {
    pub fn from_index(index: usize) -> Self {
        assert!(index < 8, "vertex index out of range: {index}");
        Self {
            alpha: ((index >> 2) & 1) as u8,
            beta: ((index >> 1) & 1) as u8,
            delta: (index & 1) as u8,
        }
    }

    pub fn index(&self) -> usize {
        usize::from(self.alpha) << 2 | usize::from(self.beta) << 1 | usize::from(self.delta)
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (0..8).map(Self::from_index)
    }

    /// `ξ_A ξ_B ⊕ α ξ_A ⊕ β ξ_B ⊕ δ`: the parity `i ⊕ j` this vertex enforces.
    #[inline]
    pub fn parity(&self, xa: usize, xb: usize) -> usize {
        let (xa, xb) = (xa as u8, xb as u8);
        usize::from((xa & xb) ^ (self.alpha & xa) ^ (self.beta & xb) ^ self.delta)
    }
}

impl fmt::Display for NsVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q^{}{}{}", self.alpha, self.beta, self.delta)
    }
}

pub fn ns_vertex_occupation(v: NsVertex) -> OccupationMeasure {
    let mut q = OccupationMeasure::zeros();
    for xa in 0..2 {
        for xb in 0..2 {
            let g = v.parity(xa, xb);
            for i in 0..2 {
                q.set(i, i ^ g, xa, xb, 0.5);
            }
        }
    }
    q
}

pub fn ns_vertex_cost(instance: &TeamInstance, v: NsVertex) -> f64 {
    instance.expected_cost(&ns_vertex_occupation(v))
}

/// A vertex of the no-signalling polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NsPoint {
    Local(DeterministicPolicy),
    NonLocal(NsVertex),
}

impl NsPoint {
    pub fn occupation(&self) -> OccupationMeasure {
        match self {
            NsPoint::Local(p) => crate::classical::deterministic_occupation(*p),
            NsPoint::NonLocal(v) => ns_vertex_occupation(*v),
        }
    }

    pub fn is_local(&self) -> bool {
        matches!(self, NsPoint::Local(_))
    }
}

impl fmt::Display for NsPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NsPoint::Local(p) => p.fmt(f),
            NsPoint::NonLocal(v) => v.fmt(f),
        }
    }
}

/// Minimum over all 24 vertices. Local vertices win near-ties.
pub fn ns_optimum(instance: &TeamInstance) -> (NsPoint, f64) {
    let local = deterministic_costs(instance);
    let mut best = (NsPoint::Local(DeterministicPolicy::from_index(0)), local[0]);
    for (i, &c) in local.iter().enumerate().skip(1) {
        if c < best.1 - TIE_TOL {
            best = (NsPoint::Local(DeterministicPolicy::from_index(i)), c);
        }
    }
    for v in NsVertex::all() {
        let c = ns_vertex_cost(instance, v);
        if c < best.1 - TIE_TOL {
            best = (NsPoint::NonLocal(v), c);
        }
    }
    best
}

/// Which closed form produced a [`ChiInterval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalFamily {
    Cac,
    HalfCac,
    /// Reciprocal of the half-CAC interval of the `E`-image.
    EOrbitReciprocal,
}

/// Open interval `(lo, hi)`; outside it no-signalling strategies give no advantage.
///
/// `hi` may be `+∞`. Half-CAC intervals can be empty (`lo ≥ hi`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiInterval {
    pub lo: f64,
    pub hi: f64,
    pub family: IntervalFamily,
}

impl ChiInterval {
    pub fn contains(&self, chi: f64) -> bool {
        self.lo < chi && chi < self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }
}

fn slices(prior: &Prior, v: &NsVertex) -> [(f64, f64, f64); 4] {
    let mut out = [(0.0, 0.0, 0.0); 4];
    for (n, slot) in out.iter_mut().enumerate() {
        let (xa, xb) = (n >> 1, n & 1);
        *slot = (
            prior.get(xa, xb, 0),
            prior.get(xa, xb, 1),
            v.parity(xa, xb) as f64,
        );
    }
    out
}

fn upper_bound(prior: &Prior) -> Option<f64> {
    let mut hi: Option<f64> = None;
    for v in NsVertex::all() {
        let (mut num, mut den) = (0.0, 0.0);
        for (p0, p1, g) in slices(prior, &v) {
            num += p0 * (1.0 - g);
            den += p1 * (1.0 - g);
        }
        let ratio = if den > 0.0 {
            num / den
        } else if num > 0.0 {
            f64::INFINITY
        } else {
            continue;
        };
        hi = Some(hi.map_or(ratio, |h| h.max(ratio)));
    }
    hi
}

/// `(χ̲, χ̄)` for CAC-form instances.
pub fn ns_bounds_cac(prior: &Prior) -> Result<ChiInterval> {
    let mut lo: Option<f64> = None;
    for v in NsVertex::all() {
        let (mut num, mut den) = (0.0, 0.0);
        for (p0, p1, g) in slices(prior, &v) {
            num += p0 * g;
            den += p1 * g;
        }
        if den > 0.0 {
            let r = num / den;
            lo = Some(lo.map_or(r, |l| l.min(r)));
        }
    }
    match (lo, upper_bound(prior)) {
        (Some(lo), Some(hi)) => Ok(ChiInterval {
            lo,
            hi,
            family: IntervalFamily::Cac,
        }),
        _ => Err(Error::DegeneratePrior),
    }
}

/// `(χ̲_½, χ̄_½)` for half-CAC-form instances.
pub fn ns_bounds_half_cac(prior: &Prior) -> Result<ChiInterval> {
    let mut lo: Option<f64> = None;
    for v in NsVertex::all() {
        let (mut num, mut den) = (0.0, 0.0);
        for (p0, p1, g) in slices(prior, &v) {
            num += p0 * (1.0 + g);
            den += 2.0 * p1 * g;
        }
        if den > 0.0 {
            let r = num / den;
            lo = Some(lo.map_or(r, |l| l.min(r)));
        }
    }
    match (lo, upper_bound(prior)) {
        (Some(lo), Some(hi)) => Ok(ChiInterval {
            lo,
            hi: hi / 2.0,
            family: IntervalFamily::HalfCac,
        }),
        _ => Err(Error::DegeneratePrior),
    }
}

/// Interval for any member of the CAC or half-CAC orbits.
pub fn ns_bounds(instance: &TeamInstance) -> Result<ChiInterval> {
    match instance.class() {
        InstanceClass::Cac | InstanceClass::CacOrbit => ns_bounds_cac(instance.prior()),
        InstanceClass::HalfCac(member) if member.is_exchanged() => {
            let inner = ns_bounds_half_cac(&instance.prior().swap_nature())?;
            Ok(ChiInterval {
                lo: 1.0 / inner.hi,
                hi: 1.0 / inner.lo,
                family: IntervalFamily::EOrbitReciprocal,
            })
        }
        InstanceClass::HalfCac(_) => ns_bounds_half_cac(instance.prior()),
        InstanceClass::General => Err(Error::UnsupportedInstance {
            required: "a CAC or half-CAC orbit instance",
            found: InstanceClass::General.to_string(),
        }),
    }
}

/// Generators of the orbits in the superstructure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitOp {
    /// Swap the rows of `M` and `N`, relabelling agent A's actions.
    RLeft,
    /// Swap the columns of `M` and `N`, relabelling agent B's actions.
    RRight,
    /// Exchange `M ↔ N` and the `ξ_W` slices of the prior, with `χ ↦ 1/χ`.
    E,
}

pub fn orbit_transform(instance: &TeamInstance, op: OrbitOp) -> TeamInstance {
    use crate::instance::{swap_cols, swap_rows};
    let (oa, ob) = instance.action_orders();
    let (m, n) = (instance.m(), instance.n());
    let rebuilt = match op {
        OrbitOp::RLeft => TeamInstance::new(swap_rows(m), swap_rows(n), *instance.prior(), instance.chi())
            .map(|d| d.with_action_orders(oa.flipped(), ob)),
        OrbitOp::RRight => TeamInstance::new(swap_cols(m), swap_cols(n), *instance.prior(), instance.chi())
            .map(|d| d.with_action_orders(oa, ob.flipped())),
        OrbitOp::E => TeamInstance::new(*n, *m, instance.prior().swap_nature(), 1.0 / instance.chi())
            .map(|d| d.with_action_orders(oa, ob)),
    };
    rebuilt.expect("orbit images of a valid instance are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{HalfCacMember, SymPrior, CAC_M, CAC_N};
    use approx::assert_abs_diff_eq;

    fn sym(chi: f64) -> TeamInstance {
        TeamInstance::sym_cac(&SymPrior::from_lambda(0.8).unwrap(), chi).unwrap()
    }

    #[test]
    fn vertices_are_no_signalling_and_distinct() {
        let all: Vec<_> = NsVertex::all().map(ns_vertex_occupation).collect();
        for (i, q) in all.iter().enumerate() {
            assert!(q.is_valid());
            assert!(q.no_signalling_residual() < 1e-15);
            for xa in 0..2 {
                for xb in 0..2 {
                    assert_eq!(q.marginal_a(0, xa, xb), 0.5);
                    assert_eq!(q.marginal_b(1, xa, xb), 0.5);
                }
            }
            for other in &all[i + 1..] {
                assert!(q.max_abs_diff(other) > 0.4);
            }
        }
    }

    #[test]
    fn pr_box_pattern() {
        let q = ns_vertex_occupation(NsVertex::from_index(0));
        assert_eq!(q.equal_action(0, 0), 1.0);
        assert_eq!(q.equal_action(0, 1), 1.0);
        assert_eq!(q.equal_action(1, 0), 1.0);
        assert_eq!(q.equal_action(1, 1), 0.0);
        let c = ns_vertex_occupation(NsVertex::from_index(1));
        for xa in 0..2 {
            for xb in 0..2 {
                assert_eq!(c.equal_action(xa, xb), 1.0 - q.equal_action(xa, xb));
            }
        }
    }

    #[test]
    fn vertex_costs() {
        let v0 = NsVertex::from_index(0);
        assert_abs_diff_eq!(ns_vertex_cost(&sym(1.0), v0), -0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(ns_vertex_cost(&sym(2.0), v0), -1.12, epsilon = 1e-12);
        let (_, best) = ns_optimum(&sym(1.0));
        assert_abs_diff_eq!(best, -0.8, epsilon = 1e-12);
    }

    #[test]
    fn sym_bounds() {
        let p = SymPrior::from_lambda(0.8).unwrap().to_prior();
        let b = ns_bounds_cac(&p).unwrap();
        assert_abs_diff_eq!(b.lo, 0.0625, epsilon = 1e-14);
        assert_abs_diff_eq!(b.hi, 16.0, epsilon = 1e-12);
        let h = ns_bounds_half_cac(&p).unwrap();
        assert_abs_diff_eq!(h.hi, 8.0, epsilon = 1e-12);
        assert!(h.lo >= b.lo);
    }

    #[test]
    fn degenerate_prior() {
        let mut v = [0.0; 8];
        for (i, slot) in v.iter_mut().enumerate() {
            if i % 2 == 0 {
                *slot = 0.25;
            }
        }
        let p = Prior::new(v).unwrap();
        assert!(matches!(ns_bounds_cac(&p), Err(Error::DegeneratePrior)));
        assert!(matches!(ns_bounds_half_cac(&p), Err(Error::DegeneratePrior)));
    }

    #[test]
    fn general_instances_have_no_bounds() {
        let inst =
            TeamInstance::new([[1, 1], [0, 0]], [[0, 0], [0, 0]], Prior::uniform(), 1.0).unwrap();
        assert!(matches!(ns_bounds(&inst), Err(Error::UnsupportedInstance { .. })));
    }

    #[test]
    fn r_left_reaches_second_cac_member() {
        let inst = TeamInstance::cac(Prior::uniform(), 2.0).unwrap();
        let r = orbit_transform(&inst, OrbitOp::RLeft);
        assert_eq!(r.class(), InstanceClass::CacOrbit);
        assert_eq!(r.effective_matrices(), (CAC_M, CAC_N));
        assert_eq!(orbit_transform(&r, OrbitOp::RLeft), inst);
    }

    #[test]
    fn e_is_an_involution() {
        let p = SymPrior::from_lambda(0.7).unwrap().to_prior();
        let inst = TeamInstance::half_cac(p, 4.0).unwrap();
        let e = orbit_transform(&inst, OrbitOp::E);
        assert_eq!(e.class(), InstanceClass::HalfCac(HalfCacMember::EV));
        let back = orbit_transform(&e, OrbitOp::E);
        assert_eq!(back.m(), inst.m());
        assert_eq!(back.n(), inst.n());
        assert_eq!(back.prior(), inst.prior());
        assert_abs_diff_eq!(back.chi(), inst.chi(), epsilon = 1e-15);
    }
}
