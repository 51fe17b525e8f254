//! Exact persistence analysis for mass-action chemical reaction networks.
//!
//! The pipeline reads a network, enumerates its siphons (semi-locking
//! sets), and tries to exclude each boundary face they describe, either by
//! a conservation law or by a Farkas certificate of weak dynamical
//! non-emptiability. Every certificate is rational and re-verifiable.

pub mod exactla;
pub mod fixtures;
mod ser;
pub mod netmodel;
pub mod structure;
pub mod siphon;
pub mod wdne;
pub mod verdict;
pub mod sim;

pub use exactla::{Rational, RationalMatrix};
pub use netmodel::{parse_network, stoichiometric_matrix, Complex, Network, Reaction, StoichMatrix};
pub use siphon::{enumerate_siphons, SiphonRecord};
pub use structure::{FaceGeometry, StructureSummary};
pub use verdict::{analyze, AnalysisConfig, AnalysisReport, Boundedness, Verdict};
pub use wdne::{certify_siphon, check_wdne, OrderPair, SiphonStatus, WdneCertificate};
