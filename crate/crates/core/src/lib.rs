//! Local certification of P5-free graphs.
//!
//! A prover labels each vertex of a connected graph with a bitstring; each
//! vertex then decides from its own label and its neighbors' labels alone.
//! All vertices accept an honest labeling exactly when the graph has no
//! induced path on five vertices.

pub mod baselines;
pub mod codec;
pub mod framework;
pub mod graph;
pub mod harness;
pub mod p5;
pub mod treepart;

pub use codec::{BitString, CodecError, EncodedCertificate, NeighborhoodRow};
pub use framework::{run, CertificateAssignment, LocalView, ProverError, RunReport, Scheme, StepTag, Verdict};
pub use graph::{Graph, GraphError, Vertex, VertexSet};
pub use p5::P5Scheme;
pub use treepart::{build_tree_partition, validate_tree_partition, Bag, RootedTree, TreePartition};
