//! Multi-commodity flow where every unit of flow must also be processed at
//! some node on its route, under joint edge-bandwidth and node-processing
//! capacities.
//!
//! The crate offers an exact edge LP (with walk decomposition), a
//! multiplicative-weights approximation, a routing-first baseline, and
//! middlebox purchase planning.

pub mod compare;
pub mod decompose;
pub mod edge_lp;
pub mod error;
pub mod gen;
pub mod instance;
pub mod io;
pub mod lp;
pub mod maxflow;
pub mod model;
pub mod mwu;
pub mod naive;
pub mod purchase;
pub mod report;
pub mod solution;

pub use error::{Error, Result};
pub use model::{validate_instance, Arc, Demand, FlowNetwork, Link, Orientation, Tolerance};
pub use report::{ValidationReport, Violation, ViolationKind};
pub use solution::{verify_edge_solution, verify_walk_solution, EdgeFlowSolution, WalkEntry, WalkFlowSolution};
