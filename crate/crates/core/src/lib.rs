//! Exact computations on finitely generated Coxeter groups.

pub mod classify;
pub mod cli;
pub mod coxeter;
pub mod dsl;
pub mod recognize;
pub mod report;
pub mod repr;
pub mod scalar;
pub mod search;
pub mod tits;
