//! Problem files, commands and reports behind the `relk` binary.

// Negated comparisons also reject NaN defects.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod export;
pub mod problem;
