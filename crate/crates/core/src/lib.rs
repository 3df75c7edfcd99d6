//! Exact symbolic workbench for first-order integrals of motion of
//! Schrödinger–Pauli Hamiltonians with spin–orbit coupling.

pub mod coeffring;
pub mod diffop;
pub mod spinop;
pub mod catalog;
pub mod determining;
pub mod liealg;
pub mod cli;
