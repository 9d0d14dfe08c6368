//! JSON instance documents. Every number travels as an exact rational
//! string.

use linear_contracts::robust::{check_ambiguous, AmbiguousInstance};
use linear_contracts::{format_rational, parse_rational, Action, Instance, Rational};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDocument {
    pub probs: Vec<String>,
    pub cost: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub outcomes: Vec<String>,
    pub actions: Vec<ActionDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguousActionDocument {
    pub reward: String,
    pub cost: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguousDocument {
    pub outcomes: Vec<String>,
    pub ambiguous_actions: Vec<AmbiguousActionDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

fn parse_all(values: &[String]) -> Result<Vec<Rational>, CliError> {
    values.iter().map(|s| Ok(parse_rational(s)?)).collect()
}

fn exact_all(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

impl InstanceDocument {
    pub fn from_instance(instance: &Instance, metadata: Option<Metadata>) -> Self {
        Self {
            outcomes: exact_all(instance.outcomes()),
            actions: instance
                .actions()
                .iter()
                .map(|a| ActionDocument {
                    probs: exact_all(a.probs()),
                    cost: format_rational(a.cost()),
                })
                .collect(),
            metadata,
        }
    }

    pub fn to_instance(&self) -> Result<Instance, CliError> {
        let actions = self
            .actions
            .iter()
            .map(|a| Ok(Action::new(parse_all(&a.probs)?, parse_rational(&a.cost)?)?))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(Instance::new(parse_all(&self.outcomes)?, actions)?)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("instance document: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

impl AmbiguousDocument {
    pub fn from_ambiguous(amb: &AmbiguousInstance, metadata: Option<Metadata>) -> Self {
        Self {
            outcomes: exact_all(amb.outcomes()),
            ambiguous_actions: amb
                .rewards()
                .iter()
                .zip(amb.costs())
                .map(|(r, c)| AmbiguousActionDocument {
                    reward: format_rational(r),
                    cost: format_rational(c),
                })
                .collect(),
            metadata,
        }
    }

    /// Parses the numbers and validates the instance.
    pub fn to_ambiguous(&self) -> Result<AmbiguousInstance, CliError> {
        let actions = self
            .ambiguous_actions
            .iter()
            .map(|a| Ok((parse_rational(&a.reward)?, parse_rational(&a.cost)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(check_ambiguous(parse_all(&self.outcomes)?, actions)?)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("ambiguous instance document: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}
