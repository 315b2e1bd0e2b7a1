//! Recursive time-convolutionless (TCL) expansion of open quantum system
//! dynamics.
//!
//! The crate is layered:
//!
//! * [`terms`] generates the symbolic terms of the momenta, the inverse map
//!   and the generator orders (and their adjoints) with integer arithmetic;
//! * [`bath`] evaluates the ordered bath correlation functions that glue the
//!   slots of a cluster together;
//! * [`numerics`] turns symbolic terms into system superoperators by nested
//!   ordered quadrature and assembles the truncated generator;
//! * [`propagate`] integrates the truncated master equation for states and
//!   its adjoint for observables;
//! * [`oracle`] solves the full system plus bath problem exactly for
//!   verification.

pub mod bath;
pub mod error;
pub mod linalg;
pub mod numerics;
pub mod oracle;
pub mod propagate;
pub mod terms;

pub use error::{Result, TclError};
pub use linalg::CMat;
pub use terms::{ClusteredTerm, Clustering, Kind, Sign, SignPattern, TermPolynomial};
