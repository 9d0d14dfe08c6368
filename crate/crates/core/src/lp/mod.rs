//! Exact linear programming and the per-action payment LPs.

pub mod implement;
pub mod simplex;

pub use implement::{
    is_implementable, min_payment_contract, min_payment_monotone, sparsify_to_basic, CertificateKind, DualCertificate,
    MinPayment, PaymentDuals, PaymentOutcome,
};
pub use simplex::{solve_lp, Constraint, LpProblem, LpSolution, LpStatus, Sense};
