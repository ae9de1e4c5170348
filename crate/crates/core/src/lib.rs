//! Verification and construction toolkit for operator-valued positive definite
//! functions on finite groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`] finite groups as multiplication tables, subgroup closures and morphisms;
//! * [`linalg`] the dense complex kernel (Hermitian eigensolves, PSD certificates,
//!   square roots, defect operators, joint diagonalization);
//! * [`pdfun`] operator-valued functions `T: G -> M_d(C)`, their Gram blocks
//!   `[T(s_i^-1 s_j)]`, block Hadamard products and power maps;
//! * [`reps`] unitary representations and the commutative structure decomposition;
//! * [`dilation`] minimal Naimark dilations `T(s) = V* U(s) V`;
//! * [`criteria`] explicit positivity criteria for small groups and for finite
//!   truncations of `Z` and `Z + Z`;
//! * [`catalog`] the worked examples used throughout the test suite and CLI.
//!
//! All spaces are finite dimensional. Every operation is a pure function over
//! immutable inputs; randomness is injected through explicit seeds.

pub mod catalog;
pub mod criteria;
pub mod dilation;
mod error;
pub mod group;
pub mod linalg;
pub mod pdfun;
pub mod reps;
pub mod sampling;

pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupMorphism};
pub use linalg::{CMatrix, PsdReport, PsdVerdict, ToleranceConfig};
pub use pdfun::{BlockGram, BlockGrid, OperatorFunction};
pub use reps::{StructureDecomposition, UnitaryRep};
pub use dilation::NaimarkDilation;
