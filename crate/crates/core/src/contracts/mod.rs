//! Contract classes and their optimization: envelope geometry for linear
//! contracts, LP-based optimal and monotone contracts, debt contracts,
//! regularity checks and single-payment special cases.

pub mod envelope;
pub mod regularity;
pub mod search;
pub mod special;

pub use envelope::{best_linear_from_profile, upper_envelope, Envelope, LinearChoice, Segment};
pub use regularity::{cdfp_check, fosd_check, mlrp_check, regularity_report, CdfpViolation, RegularityReport};
pub use search::{
    best_debt, best_linear, best_monotone, implemented_action, optimal_contract, solve_all_actions, ContractChoice,
    DebtChoice,
};
pub use special::{single_payment_contract, top_payment_search, two_action_optimal};
