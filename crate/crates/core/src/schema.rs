//! JSON instance and strategy files.
//!
//! ```json
//! {
//!   "class": "cac",
//!   "prior": { "type": "iid-lambda", "lambda": 0.8 },
//!   "chi": 2.0
//! }
//! ```
//!
//! `M` and `N` may be omitted for `cac` and `half-cac`, in which case the
//! canonical forms are used. When present they must classify into the
//! declared orbit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{
    ActionOrder, InstanceClass, Prior, SymPrior, TeamInstance, CAC_M, CAC_N, HALF_CAC_M, HALF_CAC_N,
};
use crate::quantum::{ActionAssignment, QubitStrategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeclaredClass {
    Cac,
    HalfCac,
    General,
}

impl DeclaredClass {
    fn as_str(self) -> &'static str {
        match self {
            DeclaredClass::Cac => "cac",
            DeclaredClass::HalfCac => "half-cac",
            DeclaredClass::General => "general",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PriorSpec {
    Table { values: [f64; 8] },
    Sym { s: f64, k: f64, t: f64 },
    IidLambda { lambda: f64 },
}

impl PriorSpec {
    /// A `sym` spec with `s ≤ k` is still a valid table; commands that need
    /// the symmetric structure reject it later.
    pub fn to_prior(&self) -> Result<Prior> {
        match *self {
            PriorSpec::Table { values } => Prior::new(values),
            PriorSpec::Sym { s, k, t } => {
                let mut v = [0.0; 8];
                for x in 0..2 {
                    v[Prior::index(x, x, x)] = s;
                    v[Prior::index(x, x, 1 - x)] = k;
                    v[Prior::index(x, 1 - x, x)] = t;
                    v[Prior::index(1 - x, x, x)] = t;
                }
                Prior::new(v)
            }
            PriorSpec::IidLambda { lambda } => Ok(SymPrior::from_lambda(lambda)?.to_prior()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub class: DeclaredClass,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<[[i64; 2]; 2]>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<[[i64; 2]; 2]>,
    pub prior: PriorSpec,
    pub chi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action_order_a: Option<ActionOrder>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action_order_b: Option<ActionOrder>,
}

fn widen(m: &[[u8; 2]; 2]) -> [[i64; 2]; 2] {
    m.map(|row| row.map(i64::from))
}

impl InstanceFile {
    pub fn to_instance(&self) -> Result<TeamInstance> {
        let (default_m, default_n) = match self.class {
            DeclaredClass::Cac => (Some(CAC_M), Some(CAC_N)),
            DeclaredClass::HalfCac => (Some(HALF_CAC_M), Some(HALF_CAC_N)),
            DeclaredClass::General => (None, None),
        };
        let pick = |given: Option<[[i64; 2]; 2]>, default: Option<[[u8; 2]; 2]>, name: char| {
            given.or(default.as_ref().map(widen)).ok_or_else(|| {
                Error::Schema(format!("matrix `{name}` is required for class \"general\""))
            })
        };
        let m = pick(self.m, default_m, 'M')?;
        let n = pick(self.n, default_n, 'N')?;
        let prior = self.prior.to_prior()?;
        let instance = TeamInstance::from_raw(&m, &n, prior, self.chi)?.with_action_orders(
            self.action_order_a.unwrap_or_default(),
            self.action_order_b.unwrap_or_default(),
        );
        let found = instance.class();
        let consistent = match self.class {
            DeclaredClass::Cac => found.is_cac_orbit(),
            DeclaredClass::HalfCac => found.is_half_cac_orbit(),
            DeclaredClass::General => true,
        };
        if !consistent {
            return Err(Error::ClassMismatch {
                declared: self.class.as_str().to_string(),
                found: found.to_string(),
            });
        }
        Ok(instance)
    }

    /// Writes the prior as a full table.
    pub fn from_instance(instance: &TeamInstance) -> Self {
        let class = match instance.class() {
            InstanceClass::Cac | InstanceClass::CacOrbit => DeclaredClass::Cac,
            InstanceClass::HalfCac(_) => DeclaredClass::HalfCac,
            InstanceClass::General => DeclaredClass::General,
        };
        let (oa, ob) = instance.action_orders();
        let order = |o: ActionOrder| (o != ActionOrder::Natural).then_some(o);
        Self {
            class,
            m: Some(widen(instance.m())),
            n: Some(widen(instance.n())),
            prior: PriorSpec::Table {
                values: *instance.prior().values(),
            },
            chi: instance.chi(),
            action_order_a: order(oa),
            action_order_b: order(ob),
        }
    }
}

pub fn parse_instance(json: &str) -> Result<TeamInstance> {
    serde_json::from_str::<InstanceFile>(json)?.to_instance()
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<TeamInstance> {
    parse_instance(&fs::read_to_string(path)?)
}

pub fn instance_to_json(instance: &TeamInstance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(instance)).expect("instance files always serialise")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyFile {
    pub alpha: f64,
    pub theta: [f64; 4],
    pub phi: [f64; 4],
    /// `[A+0, A−0, A+1, A−1, B+0, B−0, B+1, B−1]`
    pub assignment: [i64; 8],
}

impl StrategyFile {
    pub fn to_strategy(&self) -> Result<QubitStrategy> {
        let assignment = ActionAssignment::from_raw(&self.assignment)?;
        QubitStrategy::new(self.alpha, self.theta, self.phi, assignment)
    }

    pub fn from_strategy(s: &QubitStrategy) -> Self {
        Self {
            alpha: s.alpha,
            theta: s.theta,
            phi: s.phi,
            assignment: s.assignment.values().map(i64::from),
        }
    }
}

pub fn parse_strategy(json: &str) -> Result<QubitStrategy> {
    serde_json::from_str::<StrategyFile>(json)?.to_strategy()
}

pub fn load_strategy(path: impl AsRef<Path>) -> Result<QubitStrategy> {
    parse_strategy(&fs::read_to_string(path)?)
}

pub fn strategy_to_json(s: &QubitStrategy) -> String {
    serde_json::to_string_pretty(&StrategyFile::from_strategy(s)).expect("strategy files always serialise")
}
