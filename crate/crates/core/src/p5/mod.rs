//! Certification of P5-free graphs with `O(n^{3/2})`-bit certificates.
//!
//! Each certificate has three parts: the vertex's neighbor row, a shared
//! encoding of a valid tree-partition, and "pieces": neighborhood rows of
//! other vertices. A vertex in a P3 bag or a clique bag of at most
//! `ceil(sqrt(n))` vertices carries the rows of its whole bag; a vertex in a
//! larger clique carries its own row plus a round-robin share of the rows of
//! its subtree.

pub mod knowledge;
pub mod prover;
pub mod verifier;

pub use knowledge::{find_known_induced_p5, Contradiction, KnowledgeMap, PairStatus, Source};
pub use prover::{ceil_sqrt, certificates_for_partition, is_big_clique, pack, pieces_for, prove, PiecesError};
pub use verifier::{knowledge_closure, verify, ClosureError};

use crate::framework::{CertificateAssignment, LocalView, ProverError, Scheme, Verdict};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, Default)]
pub struct P5Scheme;

impl Scheme for P5Scheme {
    fn name(&self) -> String {
        "p5".to_string()
    }

    fn prove(&self, g: &Graph) -> Result<CertificateAssignment, ProverError> {
        prove(g)
    }

    fn verify(&self, view: &LocalView<'_>) -> Verdict {
        verify(view)
    }
}
