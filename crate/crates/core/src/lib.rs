//! Benjamini–Schramm local statistics of bounded-degree graphs.
//!
//! The crate computes laws of finite graphs as exact atomic measures on
//! rooted isomorphism classes, evaluates them on radius-`r` ball classes,
//! measures the rooted-graph ultrametric, certifies or refutes
//! unimodularity through involution invariance of the edge measure, and
//! estimates the laws of graphings given by measure-preserving involutions
//! of the rational unit circle.
//!
//! Isomorphism classes of rooted and birooted balls are represented by
//! [`Code`]s: canonical byte strings, equal exactly when the balls are
//! isomorphic.

pub mod ball;
mod canon;
pub mod convergence;
pub mod error;
pub mod gen;
pub mod graph;
pub mod graphing;
pub mod io;
pub mod law;
pub mod oracle;
pub mod unimodular;

/// Exact rational arithmetic used for every mass and distance.
pub type Rational = num_rational::BigRational;

pub use ball::{
    canonical_code, decode, extract_ball, extract_birooted_ball, flip_birooted,
    ultrametric_distance, Ball, BirootedBall, Code, CodeKind, RootedBall,
};
pub use error::{Error, Result};
pub use graph::{Config, FiniteGraph};
pub use law::{
    check_refinement, law_of_graph, orbit_masses_bruteforce, profile_of_graph, truncate_measure,
    tv_distance, AtomicMeasure, BirootedProfile, ProfileFamily, RadiusProfile, Refinement,
};
pub use unimodular::{
    check_unimodular_exact, check_unimodular_profile, edge_measure, edge_profiles,
    iota_pushforward, transport_count, BirootedAtomicMeasure, DiscrepancyReport,
};
