//! Routings of low weighted congestion in a graph or its complement, and the
//! algebraic-connectivity bounds they certify.
//!
//! Every graph `G` on `n >= 2` vertices, or its complement, has a routing
//! (one simple path per vertex pair) in which each edge lies on paths of
//! total length at most `5n/2`. A routing of congestion `w` forces
//! `λ2 >= n / w`, so `max(λ2(G), λ2(Ḡ)) >= 2/5`. This crate builds such
//! routings constructively, checks them, and scans small graphs exhaustively.

pub mod constructor;
pub mod edgelist;
pub mod error;
pub mod generators;
pub mod graph;
pub mod graph6;
pub mod oracle;
pub mod routing;
pub mod scan;
pub mod spectral;

pub use constructor::{construct, construct_with, Certificate, ConstructOptions, Side};
pub use error::{ConstructError, GraphError, OracleError, RoutingError, ScanError, SpectralError};
pub use graph::{Diameter, DistanceTable, Graph};
pub use routing::{CongestionReport, Path, Routing};
