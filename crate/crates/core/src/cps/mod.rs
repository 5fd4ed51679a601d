//! The cherry-picking calculus: reduction steps, their side conditions,
//! enumeration of legal steps and replay of annotated traces.

mod engine;

pub use engine::{
    applicable_steps, apply_effect, apply_step, check_step, labels_of, replay, sequence_weight,
    validate_trace, Side, StepEffect,
};
pub(crate) use engine::enumerate;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::Label;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CpsError {
    #[error("the two forests have different label sets")]
    GroundSetMismatch,
    #[error("the forests are empty")]
    EmptyGroundSet,
    #[error("step not applicable: {0}")]
    InapplicableStep(String),
    #[error("step {index}: {reason}")]
    ReplayError { index: usize, reason: String },
    #[error("trace does not end in a common single leaf: {0}")]
    BadTerminal(String),
    #[error("input has more than one component")]
    NotATree,
}

/// Reduction rule tag. The derive order is the enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    C1,
    #[serde(rename = "C2a_i")]
    C2aI,
    #[serde(rename = "C2a_ii")]
    C2aII,
    #[serde(rename = "C2a_iii")]
    C2aIII,
    #[serde(rename = "C2b_i")]
    C2bI,
    #[serde(rename = "C2b_ii")]
    C2bII,
    C2c,
    C3,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::C1,
        Rule::C2aI,
        Rule::C2aII,
        Rule::C2aIII,
        Rule::C2bI,
        Rule::C2bII,
        Rule::C2c,
        Rule::C3,
    ];

    /// Contribution to the weight: one for every edge-cutting rule.
    pub fn cost(self) -> usize {
        match self {
            Rule::C1 | Rule::C3 => 0,
            _ => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Rule::C1 => "C1",
            Rule::C2aI => "C2a_i",
            Rule::C2aII => "C2a_ii",
            Rule::C2aIII => "C2a_iii",
            Rule::C2bI => "C2b_i",
            Rule::C2bII => "C2b_ii",
            Rule::C2c => "C2c",
            Rule::C3 => "C3",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which forest plays the first role. For edge-cutting rules that is the
/// forest holding the cherry `(x, partner)`; for `C3` the forest in which
/// `x` is isolated. `C1` is always `Forward`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Forward,
    Reversed,
}

/// Names the edge an edge-cutting step removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CutSelector {
    #[serde(rename = "e_x")]
    Ex,
    #[serde(rename = "e_y")]
    Ey,
    #[serde(rename = "e_p")]
    Ep,
    #[serde(rename = "e_q")]
    Eq,
    #[serde(rename = "e_pq")]
    Epq,
    #[serde(rename = "e_xyp")]
    Exyp,
    #[serde(rename = "c2b_edge")]
    C2bEdge,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partner: Option<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut: Option<CutSelector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionStep {
    pub label: Label,
    pub rule: Rule,
    pub orientation: Orientation,
    #[serde(default)]
    pub params: StepParams,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

impl ReductionTrace {
    pub fn weight(&self) -> usize {
        self.steps.iter().map(|s| s.rule.cost()).sum()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl ReductionStep {
    pub fn c1(x: Label, y: Label) -> Self {
        ReductionStep {
            label: x,
            rule: Rule::C1,
            orientation: Orientation::Forward,
            params: StepParams {
                partner: Some(y),
                ..StepParams::default()
            },
        }
    }

    pub fn c3(x: Label, orientation: Orientation) -> Self {
        ReductionStep {
            label: x,
            rule: Rule::C3,
            orientation,
            params: StepParams::default(),
        }
    }

    pub fn cut(
        rule: Rule,
        orientation: Orientation,
        x: Label,
        params: StepParams,
    ) -> Self {
        ReductionStep {
            label: x,
            rule,
            orientation,
            params,
        }
    }

    fn key(&self) -> impl Ord + '_ {
        let p = &self.params;
        (
            self.rule,
            &self.label,
            &p.partner,
            p.cut,
            self.orientation,
            &p.z,
            &p.p,
            &p.q,
        )
    }

    /// Checks which parameters are present for the rule. Semantic checks
    /// against forests happen in [`check_step`].
    pub fn check_schema(&self) -> Result<(), String> {
        use CutSelector::*;
        let p = &self.params;
        let need = |name: &str, v: &Option<Label>| -> Result<(), String> {
            match v {
                Some(_) => Ok(()),
                None => Err(format!("{} requires '{name}'", self.rule)),
            }
        };
        let forbid = |name: &str, present: bool| -> Result<(), String> {
            if present {
                Err(format!("{} does not take '{name}'", self.rule))
            } else {
                Ok(())
            }
        };
        let cut_in = |allowed: &[CutSelector]| -> Result<(), String> {
            match p.cut {
                Some(c) if allowed.contains(&c) => Ok(()),
                Some(c) => Err(format!("{} does not accept cut {c:?}", self.rule)),
                None => Err(format!("{} requires 'cut'", self.rule)),
            }
        };
        match self.rule {
            Rule::C1 => {
                need("partner", &p.partner)?;
                forbid("z", p.z.is_some())?;
                forbid("p", p.p.is_some())?;
                forbid("q", p.q.is_some())?;
                forbid("cut", p.cut.is_some())?;
                if self.orientation != Orientation::Forward {
                    return Err("C1 is symmetric and must be 'forward'".into());
                }
            }
            Rule::C2aI => {
                need("partner", &p.partner)?;
                need("z", &p.z)?;
                forbid("p", p.p.is_some())?;
                forbid("q", p.q.is_some())?;
                cut_in(&[Ex, Ey])?;
            }
            Rule::C2aII => {
                need("partner", &p.partner)?;
                need("z", &p.z)?;
                need("p", &p.p)?;
                forbid("q", p.q.is_some())?;
                cut_in(&[Ep, Exyp])?;
            }
            Rule::C2aIII => {
                need("partner", &p.partner)?;
                need("z", &p.z)?;
                need("p", &p.p)?;
                need("q", &p.q)?;
                cut_in(&[Ep, Eq, Epq])?;
            }
            Rule::C2bI | Rule::C2c => {
                need("partner", &p.partner)?;
                forbid("z", p.z.is_some())?;
                forbid("p", p.p.is_some())?;
                forbid("q", p.q.is_some())?;
                cut_in(&[Ex, Ey])?;
            }
            Rule::C2bII => {
                need("partner", &p.partner)?;
                forbid("z", p.z.is_some())?;
                forbid("p", p.p.is_some())?;
                forbid("q", p.q.is_some())?;
                cut_in(&[C2bEdge])?;
            }
            Rule::C3 => {
                forbid("partner", p.partner.is_some())?;
                forbid("z", p.z.is_some())?;
                forbid("p", p.p.is_some())?;
                forbid("q", p.q.is_some())?;
                forbid("cut", p.cut.is_some())?;
            }
        }
        Ok(())
    }
}

impl PartialOrd for ReductionStep {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic by rule, label, partner, cut, then the remaining fields.
impl Ord for ReductionStep {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}", self.rule, self.label)?;
        let p = &self.params;
        for (name, v) in [("y", &p.partner), ("z", &p.z), ("p", &p.p), ("q", &p.q)] {
            if let Some(v) = v {
                write!(f, ", {name}={v}")?;
            }
        }
        if let Some(c) = p.cut {
            write!(f, ", cut={}", serde_json::to_value(c).unwrap().as_str().unwrap())?;
        }
        if self.orientation == Orientation::Reversed {
            write!(f, ", reversed")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests;
