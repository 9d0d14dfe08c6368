//! Instance generators and the approximation-ratio auditor.

pub mod audit;
pub mod generators;

pub use audit::{audit_ratio, doubling_buckets, AuditReport, BoundChecks};
pub use generators::{
    appendix_e_data, example11, example12, example_d5, gen_appendix_e, gen_appendix_f, gen_example,
    gen_random_spanning, gen_thm52, generate, spanning_instance, Family, FamilyParams,
};
