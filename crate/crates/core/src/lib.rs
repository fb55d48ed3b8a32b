//! Exact computations with double quasi-Poisson brackets on path algebras.

pub mod algebra;
pub mod brackets;
pub mod catalog;
pub mod fusion;
pub mod cli;
pub mod json;
pub mod representation;
pub mod suite;
