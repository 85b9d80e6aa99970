use thiserror::Error;

use crate::codec::{encode_certificate, encode_partitioning, EncodedCertificate, NeighborhoodRow};
use crate::framework::{CertificateAssignment, ProverError};
use crate::graph::{Graph, Vertex};
use crate::treepart::{build_tree_partition, Bag, Node, PartitionError, TreePartition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PiecesError {
    #[error("vertex {0} is not a member of the bag")]
    NotAMember(Vertex),
    #[error("bag is not a clique larger than ceil(sqrt(n))")]
    ThresholdViolation,
}

/// Smallest `r` with `r * r >= n`.
pub fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Bags that split their subtree's rows among members: cliques with more
/// than `ceil(sqrt(n))` vertices. Every other bag shares all member rows.
pub fn is_big_clique(bag: &Bag, n: usize) -> bool {
    matches!(bag, Bag::Clique(m) if m.len() > ceil_sqrt(n))
}

/// Round-robin share of a big clique member: its own row first, then the
/// rows of the subtree vertices whose ascending rank `j` satisfies
/// `j mod |bag| == rank of member in the bag`.
pub fn pieces_for(g: &Graph, tp: &TreePartition, node: Node, member: Vertex) -> Result<Vec<NeighborhoodRow>, PiecesError> {
    let bag = tp.bag(node);
    let slot = bag
        .members()
        .iter()
        .position(|&m| m == member)
        .ok_or(PiecesError::NotAMember(member))?;
    if !is_big_clique(bag, g.n()) {
        return Err(PiecesError::ThresholdViolation);
    }
    let span = tp.subtree_vertices(node, g.n());
    let row = |v: Vertex| NeighborhoodRow {
        owner: v,
        row: g.neighbors(v).clone(),
    };
    let mut out = vec![row(member)];
    out.extend(
        span.iter()
            .enumerate()
            .filter(|&(j, v)| j % bag.len() == slot && v != member)
            .map(|(_, v)| row(v)),
    );
    Ok(out)
}

/// Certificate parts for `tp` with neighborhoods read from `g`. `tp` must
/// partition the vertices but is not required to be valid.
pub fn certificates_for_partition(g: &Graph, tp: &TreePartition) -> Vec<EncodedCertificate> {
    let n = g.n();
    let owner = tp.owner_map(n).expect("bags partition the vertex set");
    let partitioning = encode_partitioning(tp, n);
    let shared: Vec<Option<Vec<NeighborhoodRow>>> = tp
        .bags
        .iter()
        .map(|bag| {
            (!is_big_clique(bag, n)).then(|| {
                let mut members = bag.members().to_vec();
                members.sort_unstable();
                members
                    .into_iter()
                    .map(|v| NeighborhoodRow {
                        owner: v,
                        row: g.neighbors(v).clone(),
                    })
                    .collect()
            })
        })
        .collect();
    g.vertices()
        .map(|u| {
            let node = owner[u];
            let pieces = match &shared[node] {
                Some(rows) => rows.clone(),
                None => pieces_for(g, tp, node, u).expect("big clique member"),
            };
            EncodedCertificate {
                neighbors: g.neighbors(u).clone(),
                partitioning: partitioning.clone(),
                pieces,
            }
        })
        .collect()
}

pub fn pack(parts: &[EncodedCertificate], n: usize) -> CertificateAssignment {
    CertificateAssignment::new(parts.iter().map(|c| encode_certificate(c, n)).collect())
}

/// Honest prover: neighbor rows, the canonical tree-partition and the pieces
/// prescribed by each vertex's bag.
pub fn prove(g: &Graph) -> Result<CertificateAssignment, ProverError> {
    let tp = build_tree_partition(g).map_err(|e| match e {
        PartitionError::DisconnectedInput => ProverError::DisconnectedInput,
        PartitionError::NoDominatingStructure(c) => ProverError::NoDominatingStructure(format!("{c:?}")),
    })?;
    Ok(pack(&certificates_for_partition(g, &tp), g.n()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::decode_certificate;
    use crate::graph::VertexSet;
    use crate::treepart::RootedTree;

    #[test]
    fn ceil_sqrt_values() {
        let got: Vec<usize> = (0..=17).map(ceil_sqrt).collect();
        assert_eq!(got, vec![0, 1, 2, 2, 2, 3, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4, 4, 5]);
        assert_eq!(ceil_sqrt(1024), 32);
        assert_eq!(ceil_sqrt(1025), 33);
    }

    /// Clique on 1..=5 as the root bag of a 14-vertex subtree: the other 9
    /// vertices are pendants hanging off the clique.
    fn big_clique_instance() -> (Graph, TreePartition) {
        let mut edges: Vec<(usize, usize)> = (1..=5).flat_map(|u| (u + 1..=5).map(move |v| (u, v))).collect();
        edges.extend((6..=14).map(|v| ((v - 6) % 5 + 1, v)));
        let g = Graph::new(14, edges).unwrap();
        let mut parents = vec![None];
        parents.extend(std::iter::repeat_n(Some(0), 9));
        let mut bags = vec![Bag::clique(1..=5)];
        bags.extend((6..=14).map(|v| Bag::clique([v])));
        (g, TreePartition::new(RootedTree::from_parents(&parents).unwrap(), bags))
    }

    #[test]
    fn round_robin_shares() {
        let (g, tp) = big_clique_instance();
        assert!(is_big_clique(tp.bag(0), 14));
        let mut covered = VertexSet::new(14);
        for m in 1..=5 {
            let rows = pieces_for(&g, &tp, 0, m).unwrap();
            assert_eq!(rows[0].owner, m);
            assert!(rows.len() - 1 <= 3, "member {m} carries {} assigned rows", rows.len() - 1);
            for r in &rows {
                assert_eq!(&r.row, g.neighbors(r.owner));
                covered.insert(r.owner);
            }
        }
        assert_eq!(covered.len(), 14);
        assert_eq!(pieces_for(&g, &tp, 1, 6), Err(PiecesError::ThresholdViolation));
        assert_eq!(pieces_for(&g, &tp, 0, 6), Err(PiecesError::NotAMember(6)));
    }

    #[test]
    fn lowest_member_when_span_equals_bag() {
        // K5 as a single bag: n = 5, ceil_sqrt = 3, so the bag is big
        let g = Graph::complete(5);
        let tp = TreePartition::new(RootedTree::singleton(), vec![Bag::clique(1..=5)]);
        let rows = pieces_for(&g, &tp, 0, 1).unwrap();
        assert_eq!(rows.iter().map(|r| r.owner).collect::<Vec<_>>(), vec![1]);
        let rows = pieces_for(&g, &tp, 0, 3).unwrap();
        assert_eq!(rows.iter().map(|r| r.owner).collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn k3_certificates() {
        let g = Graph::complete(3);
        let certs = prove(&g).unwrap();
        // partition is the chain {1} -> {2} -> {3}; every bag is a singleton
        for (v, bits) in certs.iter() {
            let c = decode_certificate(bits, 3).unwrap();
            assert_eq!(&c.neighbors, g.neighbors(v));
            assert_eq!(c.pieces.len(), 1);
            assert_eq!(c.pieces[0].owner, v);
        }
        // 3 neighbor bits, length field (widened at n = 3), 4 tree bits +
        // terminator + 3 bags of 5 bits, count, one entry
        let part = 4 + 1 + 3 * 5;
        assert_eq!(crate::codec::partitioning_len_width(3), 5);
        assert_eq!(certs.get(1).unwrap().len(), 3 + 5 + part + 2 + (2 + 3));
    }

    #[test]
    fn prover_errors() {
        let g = Graph::new(4, [(1, 2), (3, 4)]).unwrap();
        assert_eq!(prove(&g), Err(ProverError::DisconnectedInput));
        assert!(prove(&Graph::path(5)).is_ok());
    }
}
