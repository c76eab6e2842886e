//! Fixtures shared by the benchmarks.

use dqg_core::builders::{build_function_algebra, build_group_algebra};
use dqg_core::magma::{cyclic, symmetric3};
use dqg_core::{FiniteMagma, QuantumGroupFile, Tolerances};

/// Named groups used by the benchmarks.
pub fn groups() -> Vec<(&'static str, FiniteMagma)> {
    vec![("z6", cyclic(6)), ("s3", symmetric3())]
}

pub fn function_algebra(g: &FiniteMagma) -> QuantumGroupFile {
    build_function_algebra(g).expect("group table")
}

pub fn group_algebra(g: &FiniteMagma) -> QuantumGroupFile {
    build_group_algebra(g, &Tolerances::default(), 0).expect("group table")
}
