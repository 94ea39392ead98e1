//! Analysis of sets of Hermitian matrices for simultaneous stoquasticity.
//!
//! A Hermitian matrix is stoquastic in a basis when all of its off-diagonal
//! entries are real and non-positive. This crate asks whether one unitary
//! can make every member of a set stoquastic at once. It provides
//!
//! * dense complex linear algebra at small dimension ([`linalg`]),
//! * the generalized Gell-Mann basis of su(d) and its structure constants
//!   ([`su_basis`]),
//! * Bloch vectors, the star product and star closures ([`bloch`]),
//! * trace-word invariants and similarity tests ([`invariants`]),
//! * necessary-condition certificates ([`certificates`]),
//! * a multi-start numerical search for a curing unitary ([`curing`]),
//! * file formats and the command-line front end ([`io`], [`cli`]).

pub mod bloch;
pub mod certificates;
pub mod cli;
pub mod config;
pub mod curing;
pub mod error;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod su_basis;

pub use bloch::{BlochVector, StarClosure};
pub use certificates::{Certificate, CheckResult, Verdict, Witness};
pub use config::Tolerances;
pub use curing::{CuringConfig, CuringResult, PlantedInstance};
pub use error::{Error, Result};
pub use invariants::{BlockEncoding, Word, WordLengthBound};
pub use linalg::{ComplexMatrix, EigenSystem, HermitianMatrix, UnitaryMatrix};
pub use su_basis::{BasisLabel, GellMannBasis, IndexMap, StructureConstantTable};

pub use num_complex::Complex64;
