//! Rees-quotient monoids over free monoids, the identity system that bases
//! them, and a constructive derivation engine with independent checkers.

pub mod basis;
pub mod derivation;
pub mod identity;
pub mod matcher;
pub mod oracle;
pub mod rees;
pub mod sigma;
pub mod substitution;
pub mod suite;
pub mod word;
