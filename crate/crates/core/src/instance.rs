//! Problem instances, priors and occupation measures.
//!
//! A binary static team has two agents `A` and `B`, each seeing one bit
//! `ξ_A`, `ξ_B` of the state of nature `(ξ_A, ξ_B, ξ_W)` and choosing one of
//! two actions. The cost is encoded by two 0/1 indicator matrices:
//!
//! ```text
//! ℓ(u_A^i, u_B^j, 0) = -M[i][j]
//! ℓ(u_A^i, u_B^j, 1) = -χ · N[i][j]
//! ```
//!
//! so every instance has expected cost in `[-max(1, χ), 0]`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used when validating probabilities.
pub const PROB_TOL: f64 = 1e-12;

/// 2×2 cost indicator matrix indexed `[row = A action][col = B action]`.
pub type IndicatorMatrix = [[u8; 2]; 2];

/// Coordinate form: reward matching action indices when `ξ_W = 0`.
pub const CAC_M: IndicatorMatrix = [[1, 0], [0, 1]];
/// Anticoordinate part of the CAC form, shared by the half-CAC form.
pub const CAC_N: IndicatorMatrix = [[0, 1], [1, 0]];
/// Half-CAC form: only the `(0, 0)` profile is rewarded when `ξ_W = 0`.
pub const HALF_CAC_M: IndicatorMatrix = [[1, 0], [0, 0]];
pub const HALF_CAC_N: IndicatorMatrix = CAC_N;

pub(crate) fn swap_rows(m: &IndicatorMatrix) -> IndicatorMatrix {
    [m[1], m[0]]
}

pub(crate) fn swap_cols(m: &IndicatorMatrix) -> IndicatorMatrix {
    [[m[0][1], m[0][0]], [m[1][1], m[1][0]]]
}

/// Prior over `(ξ_A, ξ_B, ξ_W) ∈ {0,1}³`, stored lexicographically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prior([f64; 8]);

impl Prior {
    /// Validates nonnegativity and normalisation (tolerance [`PROB_TOL`]).
    pub fn new(values: [f64; 8]) -> Result<Self> {
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinitePrior { index });
            }
            if value < 0.0 {
                return Err(Error::NegativePrior { index, value });
            }
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::PriorNotNormalized { sum, tol: PROB_TOL });
        }
        Ok(Self(values))
    }

    /// Uniform prior, mostly useful in tests.
    pub fn uniform() -> Self {
        Self([0.125; 8])
    }

    /// Flat Dirichlet draw with every entry at least `1e-3`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut v = [0.0; 8];
            for slot in v.iter_mut() {
                *slot = -(1.0 - rng.gen::<f64>()).ln();
            }
            let total: f64 = v.iter().sum();
            for slot in v.iter_mut() {
                *slot /= total;
            }
            if v.iter().all(|&x| x >= 1e-3) {
                let head: f64 = v[..7].iter().sum();
                v[7] = 1.0 - head;
                return Self(v);
            }
        }
    }

    #[inline]
    pub fn index(xa: usize, xb: usize, xw: usize) -> usize {
        debug_assert!(xa < 2 && xb < 2 && xw < 2);
        (xa << 2) | (xb << 1) | xw
    }

    #[inline]
    pub fn get(&self, xa: usize, xb: usize, xw: usize) -> f64 {
        self.0[Self::index(xa, xb, xw)]
    }

    pub fn values(&self) -> &[f64; 8] {
        &self.0
    }

    /// `ℙ(ξ_W = w)`.
    pub fn nature_marginal(&self, w: usize) -> f64 {
        (0..4).map(|obs| self.0[(obs << 1) | w]).sum()
    }

    /// Exchanges the `ξ_W = 0` and `ξ_W = 1` slices.
    pub fn swap_nature(&self) -> Self {
        let mut out = [0.0; 8];
        for (i, v) in self.0.iter().enumerate() {
            out[i ^ 1] = *v;
        }
        Self(out)
    }

    /// Recovers `(s, k, t)` when the table has the symmetric layout with `s > k`.
    pub fn as_sym(&self) -> Option<SymPrior> {
        let (s, k, t) = (self.get(0, 0, 0), self.get(0, 0, 1), self.get(0, 1, 0));
        let layout_ok = [
            (self.get(1, 1, 1), s),
            (self.get(1, 1, 0), k),
            (self.get(1, 0, 1), t),
            (self.get(1, 0, 0), t),
            (self.get(0, 1, 1), t),
        ]
        .iter()
        .all(|(a, b)| (a - b).abs() <= PROB_TOL);
        if layout_ok {
            SymPrior::new(s, k, t).ok()
        } else {
            None
        }
    }
}

/// Ordering of an agent's two action labels relative to the matrix rows/columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionOrder {
    /// `(u^0, u^1)`: matrix position `i` holds label `u^i`.
    #[default]
    Natural,
    /// `(u^1, u^0)`: matrix position `i` holds label `u^{1-i}`.
    Swapped,
}

impl ActionOrder {
    /// Matrix position of action label `label`.
    #[inline]
    pub fn position(self, label: usize) -> usize {
        match self {
            ActionOrder::Natural => label,
            ActionOrder::Swapped => 1 - label,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            ActionOrder::Natural => ActionOrder::Swapped,
            ActionOrder::Swapped => ActionOrder::Natural,
        }
    }
}

/// Member of the half-CAC orbit `(V, Ω)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfCacMember {
    V,
    RV,
    VR,
    RVR,
    EV,
    REV,
    EVR,
    REVR,
}

impl HalfCacMember {
    pub const ALL: [HalfCacMember; 8] = [
        HalfCacMember::V,
        HalfCacMember::RV,
        HalfCacMember::VR,
        HalfCacMember::RVR,
        HalfCacMember::EV,
        HalfCacMember::REV,
        HalfCacMember::EVR,
        HalfCacMember::REVR,
    ];

    /// The `(M, N)` pair of this orbit member.
    pub fn matrices(self) -> (IndicatorMatrix, IndicatorMatrix) {
        use HalfCacMember::*;
        let (m, n) = match self {
            V | RV | VR | RVR => (HALF_CAC_M, HALF_CAC_N),
            EV | REV | EVR | REVR => (HALF_CAC_N, HALF_CAC_M),
        };
        let (m, n) = match self {
            RV | REV | RVR | REVR => (swap_rows(&m), swap_rows(&n)),
            _ => (m, n),
        };
        match self {
            VR | EVR | RVR | REVR => (swap_cols(&m), swap_cols(&n)),
            _ => (m, n),
        }
    }

    /// Whether the member includes the `E` exchange.
    pub fn is_exchanged(self) -> bool {
        matches!(
            self,
            HalfCacMember::EV | HalfCacMember::REV | HalfCacMember::EVR | HalfCacMember::REVR
        )
    }
}

/// Classification of the `(M, N)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceClass {
    /// `(M_c, N_c)` itself.
    Cac,
    /// `(R M_c, R N_c)`, the other member of the CAC orbit.
    CacOrbit,
    /// A member of the half-CAC orbit.
    HalfCac(HalfCacMember),
    General,
}

impl InstanceClass {
    pub fn classify(m: &IndicatorMatrix, n: &IndicatorMatrix) -> Self {
        if (*m, *n) == (CAC_M, CAC_N) {
            return InstanceClass::Cac;
        }
        if (*m, *n) == (swap_rows(&CAC_M), swap_rows(&CAC_N)) {
            return InstanceClass::CacOrbit;
        }
        HalfCacMember::ALL
            .iter()
            .find(|member| member.matrices() == (*m, *n))
            .map(|&member| InstanceClass::HalfCac(member))
            .unwrap_or(InstanceClass::General)
    }

    pub fn is_cac_orbit(self) -> bool {
        matches!(self, InstanceClass::Cac | InstanceClass::CacOrbit)
    }

    pub fn is_half_cac_orbit(self) -> bool {
        matches!(self, InstanceClass::HalfCac(_))
    }
}

impl fmt::Display for InstanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceClass::Cac => write!(f, "CAC"),
            InstanceClass::CacOrbit => write!(f, "CAC orbit (R V_c)"),
            InstanceClass::HalfCac(HalfCacMember::V) => write!(f, "half-CAC"),
            InstanceClass::HalfCac(member) => write!(f, "half-CAC orbit ({member:?})"),
            InstanceClass::General => write!(f, "general"),
        }
    }
}

fn check_indicator(raw: &[[i64; 2]; 2], name: char) -> Result<IndicatorMatrix> {
    let mut out = [[0u8; 2]; 2];
    for (row, values) in raw.iter().enumerate() {
        for (col, &value) in values.iter().enumerate() {
            match value {
                0 | 1 => out[row][col] = value as u8,
                _ => {
                    return Err(Error::MatrixEntry {
                        matrix: name,
                        row,
                        col,
                        value,
                    })
                }
            }
        }
    }
    Ok(out)
}

/// A validated team decision problem `D = (M, N, ℙ, U_A, U_B, χ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TeamInstance {
    m: IndicatorMatrix,
    n: IndicatorMatrix,
    prior: Prior,
    chi: f64,
    order_a: ActionOrder,
    order_b: ActionOrder,
}

impl TeamInstance {
    pub fn new(m: IndicatorMatrix, n: IndicatorMatrix, prior: Prior, chi: f64) -> Result<Self> {
        Self::from_raw(
            &m.map(|r| r.map(i64::from)),
            &n.map(|r| r.map(i64::from)),
            prior,
            chi,
        )
    }

    /// Validates integer matrices that may hold entries outside `{0, 1}`.
    pub fn from_raw(m: &[[i64; 2]; 2], n: &[[i64; 2]; 2], prior: Prior, chi: f64) -> Result<Self> {
        if !chi.is_finite() || chi <= 0.0 {
            return Err(Error::ChiNonpositive(chi));
        }
        Ok(Self {
            m: check_indicator(m, 'M')?,
            n: check_indicator(n, 'N')?,
            prior,
            chi,
            order_a: ActionOrder::Natural,
            order_b: ActionOrder::Natural,
        })
    }

    /// A CAC-form instance.
    pub fn cac(prior: Prior, chi: f64) -> Result<Self> {
        Self::new(CAC_M, CAC_N, prior, chi)
    }

    /// A half-CAC-form instance.
    pub fn half_cac(prior: Prior, chi: f64) -> Result<Self> {
        Self::new(HALF_CAC_M, HALF_CAC_N, prior, chi)
    }

    /// A sym-CAC instance.
    pub fn sym_cac(p: &SymPrior, chi: f64) -> Result<Self> {
        Self::cac(p.to_prior(), chi)
    }

    pub fn with_action_orders(mut self, order_a: ActionOrder, order_b: ActionOrder) -> Self {
        self.order_a = order_a;
        self.order_b = order_b;
        self
    }

    /// Same problem with a different `χ`.
    pub fn with_chi(&self, chi: f64) -> Result<Self> {
        if !chi.is_finite() || chi <= 0.0 {
            return Err(Error::ChiNonpositive(chi));
        }
        Ok(Self { chi, ..self.clone() })
    }

    pub fn m(&self) -> &IndicatorMatrix {
        &self.m
    }

    pub fn n(&self) -> &IndicatorMatrix {
        &self.n
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn action_orders(&self) -> (ActionOrder, ActionOrder) {
        (self.order_a, self.order_b)
    }

    pub fn class(&self) -> InstanceClass {
        InstanceClass::classify(&self.m, &self.n)
    }

    /// Symmetric prior parameters when this is a sym-CAC instance.
    pub fn sym_prior(&self) -> Option<SymPrior> {
        if self.effective_class() == InstanceClass::Cac {
            self.prior.as_sym()
        } else {
            None
        }
    }

    /// `(M, N)` re-indexed by action label instead of matrix position.
    pub fn effective_matrices(&self) -> (IndicatorMatrix, IndicatorMatrix) {
        let mut m = [[0u8; 2]; 2];
        let mut n = [[0u8; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                let (i, j) = (self.order_a.position(a), self.order_b.position(b));
                m[a][b] = self.m[i][j];
                n[a][b] = self.n[i][j];
            }
        }
        (m, n)
    }

    /// Class of the label-indexed cost; an `R`-relabelled CAC instance is CAC here.
    pub fn effective_class(&self) -> InstanceClass {
        let (m, n) = self.effective_matrices();
        InstanceClass::classify(&m, &n)
    }

    /// `ℓ(u_A, u_B, ξ_W)` for action labels `u_A`, `u_B`.
    #[inline]
    pub fn loss(&self, ua: usize, ub: usize, xw: usize) -> f64 {
        let (i, j) = (self.order_a.position(ua), self.order_b.position(ub));
        if xw == 0 {
            -f64::from(self.m[i][j])
        } else {
            -self.chi * f64::from(self.n[i][j])
        }
    }

    /// `κ(ξ_A, ξ_B) = χ ℙ(ξ_A, ξ_B, 1) − ℙ(ξ_A, ξ_B, 0)`.
    pub fn kappa(&self, xa: usize, xb: usize) -> f64 {
        self.chi * self.prior.get(xa, xb, 1) - self.prior.get(xa, xb, 0)
    }

    /// `J(Q; D)` by direct summation over nature states and action profiles.
    pub fn expected_cost(&self, q: &OccupationMeasure) -> f64 {
        let mut total = 0.0;
        for xa in 0..2 {
            for xb in 0..2 {
                for xw in 0..2 {
                    let p = self.prior.get(xa, xb, xw);
                    if p == 0.0 {
                        continue;
                    }
                    let mut inner = 0.0;
                    for ua in 0..2 {
                        for ub in 0..2 {
                            inner += self.loss(ua, ub, xw) * q.get(ua, ub, xa, xb);
                        }
                    }
                    total += p * inner;
                }
            }
        }
        total
    }

    /// `J(Q; D) = −χ ℙ(ξ_W = 1) + Σ κ(ξ_A, ξ_B) Q(u_A = u_B | ξ_A, ξ_B)`.
    ///
    /// Only defined when the label-indexed cost is in CAC form.
    pub fn cac_form_cost(&self, q: &OccupationMeasure) -> Result<f64> {
        if self.effective_class() != InstanceClass::Cac {
            return Err(Error::UnsupportedInstance {
                required: "a CAC-form cost",
                found: self.class().to_string(),
            });
        }
        let mut total = -self.chi * self.prior.nature_marginal(1);
        for xa in 0..2 {
            for xb in 0..2 {
                total += self.kappa(xa, xb) * q.equal_action(xa, xb);
            }
        }
        Ok(total)
    }
}

/// Conditional distribution `Q(u_A, u_B | ξ_A, ξ_B)`, indexed `[u_A][u_B][ξ_A][ξ_B]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OccupationMeasure(pub [[[[f64; 2]; 2]; 2]; 2]);

impl OccupationMeasure {
    pub fn zeros() -> Self {
        Self::default()
    }

    #[inline]
    pub fn get(&self, ua: usize, ub: usize, xa: usize, xb: usize) -> f64 {
        self.0[ua][ub][xa][xb]
    }

    #[inline]
    pub fn set(&mut self, ua: usize, ub: usize, xa: usize, xb: usize, value: f64) {
        self.0[ua][ub][xa][xb] = value;
    }

    /// `Q(u_A = u_B | ξ_A, ξ_B)`.
    pub fn equal_action(&self, xa: usize, xb: usize) -> f64 {
        self.get(0, 0, xa, xb) + self.get(1, 1, xa, xb)
    }

    /// Mixture `w·self + (1−w)·other`.
    pub fn mix(&self, other: &Self, w: f64) -> Self {
        let mut out = Self::zeros();
        for (idx, slot) in out.entries_mut().enumerate() {
            *slot = w * self.flat(idx) + (1.0 - w) * other.flat(idx);
        }
        out
    }

    fn flat(&self, idx: usize) -> f64 {
        self.0[idx >> 3][(idx >> 2) & 1][(idx >> 1) & 1][idx & 1]
    }

    fn entries_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.0
            .iter_mut()
            .flat_map(|a| a.iter_mut())
            .flat_map(|b| b.iter_mut())
            .flat_map(|c| c.iter_mut())
    }

    pub fn entries(&self) -> impl Iterator<Item = f64> + '_ {
        self.0
            .iter()
            .flat_map(|a| a.iter())
            .flat_map(|b| b.iter())
            .flat_map(|c| c.iter().copied())
    }

    /// Largest deviation from the stochastic-table invariants (entries in `[0, 1]`, rows sum to one).
    pub fn stochastic_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for v in self.entries() {
            worst = worst.max(-v).max(v - 1.0);
        }
        for xa in 0..2 {
            for xb in 0..2 {
                let row: f64 = (0..4).map(|u| self.get(u >> 1, u & 1, xa, xb)).sum();
                worst = worst.max((row - 1.0).abs());
            }
        }
        worst
    }

    pub fn is_valid(&self) -> bool {
        self.stochastic_residual() <= PROB_TOL
    }

    /// `Σ_{u_B} Q(u_A, u_B | ξ_A, ξ_B)`.
    pub fn marginal_a(&self, ua: usize, xa: usize, xb: usize) -> f64 {
        self.get(ua, 0, xa, xb) + self.get(ua, 1, xa, xb)
    }

    /// `Σ_{u_A} Q(u_A, u_B | ξ_A, ξ_B)`.
    pub fn marginal_b(&self, ub: usize, xa: usize, xb: usize) -> f64 {
        self.get(0, ub, xa, xb) + self.get(1, ub, xa, xb)
    }

    /// Residuals of the no-signalling equalities `(A-side, B-side)`.
    ///
    /// The A-side residual measures how much A's marginal depends on `ξ_B`.
    pub fn no_signalling_residuals(&self) -> (f64, f64) {
        let mut ra: f64 = 0.0;
        let mut rb: f64 = 0.0;
        for u in 0..2 {
            for x in 0..2 {
                ra = ra.max((self.marginal_a(u, x, 0) - self.marginal_a(u, x, 1)).abs());
                rb = rb.max((self.marginal_b(u, 0, x) - self.marginal_b(u, 1, x)).abs());
            }
        }
        (ra, rb)
    }

    pub fn no_signalling_residual(&self) -> f64 {
        let (a, b) = self.no_signalling_residuals();
        a.max(b)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries()
            .zip(other.entries())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for OccupationMeasure {
    /// One row per observation pair, columns `(u_A, u_B)` = 00, 01, 10, 11.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "xi_A xi_B | u=00      u=01      u=10      u=11")?;
        for xa in 0..2 {
            for xb in 0..2 {
                write!(f, "  {xa}    {xb}  |")?;
                for u in 0..4 {
                    write!(f, " {:>9.6}", self.get(u >> 1, u & 1, xa, xb))?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Symmetric prior `(s, k, t)` with `2s + 2k + 4t = 1` and `s > k`.
///
/// Expands to `ℙ(ξ,ξ,ξ) = s`, `ℙ(ξ,ξ,∼ξ) = k` and `ℙ(ξ,∼ξ,ξ) = ℙ(∼ξ,ξ,ξ) = t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymPrior {
    s: f64,
    k: f64,
    t: f64,
}

impl SymPrior {
    pub fn new(s: f64, k: f64, t: f64) -> Result<Self> {
        if ![s, k, t].iter().all(|v| v.is_finite() && *v >= 0.0) {
            return Err(Error::InvalidSymPrior(format!(
                "s, k, t must be finite and nonnegative (got {s}, {k}, {t})"
            )));
        }
        let total = 2.0 * s + 2.0 * k + 4.0 * t;
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidSymPrior(format!(
                "2s + 2k + 4t = {total}, expected 1"
            )));
        }
        if s <= k {
            return Err(Error::InvalidSymPrior(format!("need s > k (got s = {s}, k = {k})")));
        }
        Ok(Self { s, k, t })
    }

    /// Independent observations with `ℙ(ξ_i = ξ_W | ξ_W) = λ` and uniform `ξ_W`.
    pub fn from_lambda(lambda: f64) -> Result<Self> {
        if !(lambda > 0.5 && lambda < 1.0) {
            return Err(Error::LambdaOutOfRange(lambda));
        }
        let mu = 1.0 - lambda;
        Self::new(0.5 * lambda * lambda, 0.5 * mu * mu, 0.5 * lambda * mu)
    }

    /// Random symmetric prior with `k/s ≥ 1e-3` and `t ≥ 1e-3`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let w: [f64; 3] = [(); 3].map(|_| -(1.0 - rng.gen::<f64>()).ln());
            let scale = 2.0 * w[0] + 2.0 * w[1] + 4.0 * w[2];
            let (a, b) = (w[0] / scale, w[1] / scale);
            let (s, k) = if a >= b { (a, b) } else { (b, a) };
            let t = (1.0 - 2.0 * s - 2.0 * k) / 4.0;
            if k >= 1e-3 * s && t >= 1e-3 {
                if let Ok(p) = Self::new(s, k, t) {
                    return p;
                }
            }
        }
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn to_prior(&self) -> Prior {
        let (s, k, t) = (self.s, self.k, self.t);
        let mut v = [0.0; 8];
        for x in 0..2 {
            v[Prior::index(x, x, x)] = s;
            v[Prior::index(x, x, 1 - x)] = k;
            v[Prior::index(x, 1 - x, x)] = t;
            v[Prior::index(1 - x, x, x)] = t;
        }
        Prior(v)
    }
}

/// `sym_prior_from_lambda`: the i.i.d. sub-family of symmetric priors.
pub fn sym_prior_from_lambda(lambda: f64) -> Result<SymPrior> {
    SymPrior::from_lambda(lambda)
}
