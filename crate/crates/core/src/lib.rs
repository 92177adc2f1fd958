pub mod dialogue;
pub mod encode;
pub mod machine;
pub mod oracle;
pub mod oracle_spec;
pub mod permred;
pub mod programs;
pub mod reducibility;
pub mod relmachine;

/// Naturals of unbounded size: register contents, program codes, oracle
/// queries and answers.
pub type Nat = num_bigint::BigUint;
