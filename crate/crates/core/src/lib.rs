//! Finite H4-free 3-hypertournaments.
//!
//! A 3-hypertournament orients every 3-subset of its points cyclically. This
//! crate stores one orientation bit per sorted triple, classifies 4-point
//! substructures, completes partial structures under signed `R`-literals with
//! a backtracking solver, builds strong amalgams and finite approximations of
//! generic structures, and compiles the explicit constructions behind the
//! dividing-line results (SOP3, TP2, NSOP4, IP2) and the `ht` independence
//! relation into checkable finite instances.

pub mod acceptance;
pub mod amalgam;
pub mod classify;
#[cfg(feature = "cli")]
pub mod cli;
pub mod error;
pub mod format;
pub mod indep;
pub mod iso;
pub mod qftype;
pub mod report;
pub mod solver;
pub mod structure;
pub mod witness;

pub use classify::{classify_4set, in_constrained_class, is_h4_free, ClassSet, FourClass};
pub use error::{Error, Result};
pub use qftype::{qf_type, QfType};
pub use report::WitnessReport;
pub use solver::{count_completions, solve, ConstraintSet, Literal, SolveOutcome, Solver, Term};
pub use structure::{
    decode, encode, Hypergraph3, Hypertournament, LinearOrder, Orientation, PartialHypertournament,
    PointId, TripleKey,
};
