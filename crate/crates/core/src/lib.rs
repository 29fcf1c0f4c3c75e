#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(a < b)` deliberately rejects NaN

pub mod algebra;
pub mod cli;
pub mod gaussian;
pub mod grid;
pub mod solver;
