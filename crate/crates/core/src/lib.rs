//! Numerical tools for frames of exponentials `n^{-1/2} e^{-i t log n}` on bounded
//! intervals of the critical line, and the Hardy-space constructions built on them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carleson;
pub mod chebyshev;
pub mod dirichlet;
pub mod extremal;
pub mod frame_core;
pub mod matcher;
pub mod quadrature;
pub mod sampling;
pub mod special_functions;
