//! Finite-dimensional discrete quantum groups.
//!
//! A quantum group is given by a multi-matrix algebra `A` and a comultiplication
//! `Delta: A -> A (x) A`. From that data alone the library derives the
//! distinguished projection `h`, the counit, the antipode, the Haar weight, the
//! GNS space and the fundamental unitary, and checks every identity they are
//! expected to satisfy as a relative residual.

// `!(r <= tol)` rejects NaN residuals
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod algebra;
pub mod axioms;
pub mod builders;
pub mod certificate;
pub mod error;
pub mod file;
pub mod gns;
pub mod haar;
pub mod linalg;
pub mod magma;
pub mod pipeline;
pub mod report;
pub mod structure;
pub mod tensor;
pub mod unitary;
pub mod wedderburn;

pub use algebra::{AlgebraElement, LinearFunctional, MatrixUnit, MultiMatrixAlgebra};
pub use axioms::Comultiplication;
pub use certificate::Certificate;
pub use error::{Error, Result};
pub use file::{Expected, QuantumGroupFile};
pub use gns::GnsSpace;
pub use haar::HaarWeight;
pub use linalg::{CMatrix, CVector, Tolerances, C64};
pub use magma::FiniteMagma;
pub use pipeline::{verify, VerifyOptions};
pub use report::Check;
pub use structure::QuantumGroupStructure;
pub use tensor::{TensorElement, TensorLayout};
pub use unitary::{DualAlgebra, FundamentalUnitary};
pub use wedderburn::{StructureConstants, Wedderburn};
