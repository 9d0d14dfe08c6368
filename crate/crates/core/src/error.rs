use thiserror::Error;

use crate::model::Assumption;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("malformed instance: {0}")]
    MalformedInstance(String),
    #[error("negative payment {0} violates limited liability")]
    NegativePayment(Rational),
    #[error("parameter {name} = {value} out of range")]
    ParameterOutOfRange { name: &'static str, value: Rational },
}

impl ModelError {
    pub(crate) fn malformed(reason: impl Into<String>) -> Self {
        ModelError::MalformedInstance(reason.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("contract is not an optimal solution: {0}")]
    NotOptimalInput(String),
    #[error("internal solver error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreconditionKind {
    #[error("MLRP does not hold")]
    Mlrp,
    #[error("highest-cost action is not unique")]
    NotHighestCost,
    #[error("target action is not implementable")]
    NotImplementable,
    #[error("expected exactly two actions")]
    NotTwoActions,
    #[error("first action must have zero cost")]
    FirstActionCostly,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("assumption {0} violated")]
    AssumptionViolated(Assumption),
    #[error("no action is implementable")]
    NoImplementableAction,
    #[error("precondition failed: {0}")]
    PreconditionFailed(PreconditionKind),
    #[error("distribution lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Lp(#[from] LpError),
}

impl From<Assumption> for ContractError {
    fn from(a: Assumption) -> Self {
        ContractError::AssumptionViolated(a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmbiguityViolation {
    #[error("fewer than three outcomes")]
    TooFewOutcomes,
    #[error("lowest outcome is not zero")]
    LowestOutcomeNonzero,
    #[error("outcomes are not strictly increasing")]
    Unsorted,
    #[error("expected reward of action {0} lies outside [0, x_m]")]
    RewardOutOfRange(usize),
    #[error("cost of action {0} is negative")]
    NegativeCost(usize),
    #[error("no zero-cost action")]
    NoZeroCostAction,
    #[error("no actions")]
    NoActions,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RobustError {
    #[error("not an ambiguous instance: {0}")]
    NotAmbiguous(#[from] AmbiguityViolation),
    #[error("adversary would enumerate {count} combinations, above the cap of {cap}")]
    SizeLimit { count: u128, cap: u128 },
    #[error("contract has {got} payments for {expected} outcomes")]
    ContractLength { expected: usize, got: usize },
    #[error("construction check failed: {0}")]
    ConstructionFailed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("bad family parameters: {0}")]
    BadParams(String),
    #[error("unknown family or example {0:?}")]
    UnknownName(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
