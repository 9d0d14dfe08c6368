//! Exact solver and audit toolkit for hidden-action principal-agent
//! contracts: optimal, linear, monotone and debt contracts, LP duality
//! certificates, worst-case robustness over ambiguous distributions, and
//! generators for the tight approximation-ratio constructions.
//!
//! All computation is over [`Rational`]; floating point appears only when
//! rendering reports.

pub mod contracts;
pub mod error;
pub mod families;
pub mod lp;
pub mod model;
pub mod rational;
pub mod robust;

pub use error::{AmbiguityViolation, ContractError, FamilyError, LpError, ModelError, PreconditionKind, RobustError};
pub use model::{
    best_response_from_profile, build_instance, Action, AffineContract, Assumption, AssumptionFlags, BestResponse,
    Choice, Contract, Instance, LinearContract,
};
pub use rational::{format_rational, parse_rational, to_decimal, Rational};
