//! Flow computation in temporal interaction networks.
//!
//! A temporal interaction network is a directed graph whose edges carry
//! time-sorted sequences of `(timestamp, quantity)` transfers. This crate
//! computes the greedy flow and the exact maximum flow from a source to a
//! sink through such networks, reduces instances before solving (greedy
//! solubility test, DAG preprocessing, source-chain simplification), and
//! enumerates flow-pattern instances together with their flows.

pub mod analysis;
pub mod error;
pub mod extract;
pub mod fixtures;
pub mod graph;
pub mod greedy;
pub mod instance;
pub mod maxflow;
pub mod parse;
pub mod patterns;
pub mod quantity;
pub mod synth;
pub mod witness;

pub use error::GraphError;
pub use graph::{EdgeSeries, Interaction, InteractionId, TemporalGraph, Timestamp, VertexId};
pub use instance::{normalize, FlowInstance};
pub use quantity::Quantity;
