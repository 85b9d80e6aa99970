//! Local verifier. Checks run in a fixed order and the first failure is
//! reported: decoding, (i) own neighbor list, (ii) shared partition,
//! (iii) bag structure / domination / branch separation, (iv) pieces,
//! (v) knowledge closure and induced-P5 detection; otherwise accept.

use thiserror::Error;

use super::knowledge::{find_known_induced_p5, Contradiction, KnowledgeMap, Source};
use super::prover::is_big_clique;
use crate::codec::{decode_certificate, decode_partitioning, EncodedCertificate};
use crate::framework::{LocalView, StepTag, Verdict};
use crate::graph::{Vertex, VertexSet};
use crate::treepart::{Bag, Node, TreePartition};

type Check<T> = Result<T, Verdict>;

struct Decoded {
    n: usize,
    id: Vertex,
    adjacency: VertexSet,
    own: EncodedCertificate,
    /// Ascending by id.
    neighbors: Vec<(Vertex, EncodedCertificate)>,
}

impl Decoded {
    fn neighbor(&self, v: Vertex) -> Option<&EncodedCertificate> {
        self.neighbors
            .binary_search_by_key(&v, |(w, _)| *w)
            .ok()
            .map(|i| &self.neighbors[i].1)
    }
}

/// Decoded partition plus the per-node vertex sets the checks need.
struct PartitionIndex {
    tp: TreePartition,
    owner: Vec<Node>,
    /// Vertices of the subtree rooted at each node.
    span: Vec<VertexSet>,
    /// Vertices of bags on the same root path as each node (ancestors, self, descendants).
    comparable: Vec<VertexSet>,
}

impl PartitionIndex {
    fn new(tp: TreePartition, n: usize) -> Option<Self> {
        let owner = tp.owner_map(n)?;
        let t = tp.tree.len();
        let order = tp.tree.preorder();
        let bag_sets: Vec<VertexSet> = tp.bags.iter().map(|b| b.to_set(n)).collect();
        let mut span = bag_sets.clone();
        for &node in order.iter().rev() {
            if let Some(p) = tp.tree.parent(node) {
                let child = span[node].clone();
                span[p].union_with(&child);
            }
        }
        let mut above = vec![VertexSet::new(n); t];
        for &node in &order {
            if let Some(p) = tp.tree.parent(node) {
                let mut a = above[p].clone();
                a.union_with(&bag_sets[p]);
                above[node] = a;
            }
        }
        let comparable = (0..t).map(|node| &above[node] | &span[node]).collect();
        Some(PartitionIndex {
            tp,
            owner,
            span,
            comparable,
        })
    }
}

fn decode_view(view: &LocalView<'_>) -> Check<Decoded> {
    let n = view.n;
    let malformed = |w: String| Verdict::reject(StepTag::Malformed, w);
    if view.id == 0 || view.id > n {
        return Err(malformed(format!("own-id={}", view.id)));
    }
    let mut adjacency = VertexSet::new(n);
    let mut neighbors = Vec::with_capacity(view.neighbors.len());
    for &(v, bits) in &view.neighbors {
        if v == 0 || v > n || v == view.id || !adjacency.insert(v) {
            return Err(malformed(format!("neighbor-id={v}")));
        }
        let cert = decode_certificate(bits, n).map_err(|e| malformed(format!("vertex={v}:{e}")))?;
        neighbors.push((v, cert));
    }
    neighbors.sort_by_key(|(v, _)| *v);
    let own = decode_certificate(view.cert, n).map_err(|e| malformed(format!("vertex={}:{e}", view.id)))?;
    Ok(Decoded {
        n,
        id: view.id,
        adjacency,
        own,
        neighbors,
    })
}

fn step_i(d: &Decoded) -> Check<()> {
    if d.own.neighbors != d.adjacency {
        let diff = &(&d.own.neighbors - &d.adjacency) | &(&d.adjacency - &d.own.neighbors);
        return Err(Verdict::reject(StepTag::I, format!("neighbors-part-wrong-at={}", diff.first().unwrap())));
    }
    Ok(())
}

fn step_ii(d: &Decoded) -> Check<PartitionIndex> {
    if let Some((v, _)) = d.neighbors.iter().find(|(_, c)| c.partitioning != d.own.partitioning) {
        return Err(Verdict::reject(StepTag::Ii, format!("partitioning-differs-from={v}")));
    }
    let tp = decode_partitioning(&d.own.partitioning, d.n).map_err(|e| Verdict::reject(StepTag::Ii, e.to_string()))?;
    PartitionIndex::new(tp, d.n).ok_or_else(|| Verdict::reject(StepTag::Ii, "not-a-partition"))
}

fn step_iii(d: &Decoded, idx: &PartitionIndex) -> Check<()> {
    let reject = |w: String| Err(Verdict::reject(StepTag::Iii, w));
    let s = idx.owner[d.id];
    match idx.tp.bag(s) {
        Bag::Clique(members) => {
            if let Some(&m) = members.iter().find(|&&m| m != d.id && !d.adjacency.contains(m)) {
                return reject(format!("clique-member-not-adjacent={m}"));
            }
        }
        &Bag::P3([a, c, b]) => {
            if d.id == c {
                if !d.adjacency.contains(a) || !d.adjacency.contains(b) {
                    return reject("p3-center-misses-endpoint".into());
                }
            } else {
                let other = if d.id == a { b } else { a };
                if !d.adjacency.contains(c) {
                    return reject("p3-endpoint-misses-center".into());
                }
                if d.adjacency.contains(other) {
                    return reject("p3-endpoints-adjacent".into());
                }
            }
        }
    }
    for t in idx.tp.tree.ancestors(s) {
        if !idx.tp.bag(t).members().iter().any(|&m| d.adjacency.contains(m)) {
            return reject(format!("undominated-by-node={t}"));
        }
    }
    if let Some(v) = (&d.adjacency - &idx.comparable[s]).first() {
        return reject(format!("neighbor-in-other-branch={v}"));
    }
    Ok(())
}

fn step_iv(d: &Decoded, idx: &PartitionIndex) -> Check<()> {
    let reject = |w: String| Err(Verdict::reject(StepTag::Iv, w));
    let s = idx.owner[d.id];
    let bag = idx.tp.bag(s);
    let own_owners = VertexSet::from_vertices(d.n, d.own.pieces.iter().map(|p| p.owner));
    if d.own.piece(d.id) != Some(&d.own.neighbors) {
        return reject("own-row-missing-or-wrong".into());
    }
    if !is_big_clique(bag, d.n) {
        if own_owners != bag.to_set(d.n) {
            return reject("pieces-owners-differ-from-bag".into());
        }
        for &m in bag.members() {
            if m != d.id && d.adjacency.contains(m) && d.neighbor(m).unwrap().pieces != d.own.pieces {
                return reject(format!("pieces-differ-from={m}"));
            }
        }
        return Ok(());
    }
    let span = &idx.span[s];
    if let Some(v) = (&own_owners - span).first() {
        return reject(format!("pieces-owner-outside-subtree={v}"));
    }
    let holders = std::iter::once(&d.own).chain(
        bag.members()
            .iter()
            .filter(|&&m| m != d.id)
            .filter_map(|&m| d.neighbor(m)),
    );
    let mut covered = VertexSet::new(d.n);
    for holder in holders {
        for piece in &holder.pieces {
            covered.insert(piece.owner);
            let truth = if piece.owner == d.id {
                Some(&d.own.neighbors)
            } else {
                d.neighbor(piece.owner).map(|c| &c.neighbors)
            };
            if truth.is_some_and(|t| *t != piece.row) {
                return reject(format!("pieces-row-wrong-for={}", piece.owner));
            }
        }
    }
    if let Some(v) = (span - &covered).first() {
        return reject(format!("subtree-row-missing={v}"));
    }
    Ok(())
}

fn closure(d: &Decoded, idx: &PartitionIndex) -> Result<KnowledgeMap, Contradiction> {
    let mut km = KnowledgeMap::new(d.n);
    km.merge_row(d.id, &d.adjacency, Source::OwnAdjacency)?;
    for (v, c) in &d.neighbors {
        km.merge_row(*v, &c.neighbors, Source::NeighborRow)?;
    }
    for cert in std::iter::once(&d.own).chain(d.neighbors.iter().map(|(_, c)| c)) {
        for piece in &cert.pieces {
            km.merge_row(piece.owner, &piece.row, Source::PiecesRow)?;
        }
    }
    for bag in &idx.tp.bags {
        match *bag {
            Bag::Clique(ref m) => {
                for (i, &a) in m.iter().enumerate() {
                    for &b in &m[i + 1..] {
                        km.merge_pair(a, b, true, Source::IntraBag)?;
                    }
                }
            }
            Bag::P3([a, c, b]) => {
                km.merge_pair(a, c, true, Source::IntraBag)?;
                km.merge_pair(c, b, true, Source::IntraBag)?;
                km.merge_pair(a, b, false, Source::IntraBag)?;
            }
        }
    }
    for (node, bag) in idx.tp.bags.iter().enumerate() {
        let elsewhere = idx.comparable[node].complement();
        for &x in bag.members() {
            km.merge_non_edges(x, &elsewhere, Source::CrossBranch)?;
        }
    }
    Ok(km)
}

fn step_v(d: &Decoded, idx: &PartitionIndex) -> Check<()> {
    let km = closure(d, idx).map_err(|c| Verdict::reject(StepTag::V, c.to_string()))?;
    if let Some(p) = find_known_induced_p5(&km) {
        return Err(Verdict::reject(
            StepTag::V,
            format!("p5={}-{}-{}-{}-{}", p[0], p[1], p[2], p[3], p[4]),
        ));
    }
    Ok(())
}

/// Runs the local checks on one view.
pub fn verify(view: &LocalView<'_>) -> Verdict {
    let checks = || -> Check<()> {
        let d = decode_view(view)?;
        step_i(&d)?;
        let idx = step_ii(&d)?;
        step_iii(&d, &idx)?;
        step_iv(&d, &idx)?;
        step_v(&d, &idx)
    };
    match checks() {
        Ok(()) => Verdict::Accept,
        Err(v) => v,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("view cannot be decoded: {0}")]
    Malformed(String),
    #[error("{0}")]
    Contradiction(Contradiction),
}

/// Everything the vertex of `view` knows about adjacency: its own row,
/// its neighbors' rows, every pieces row in view, the declared bag shapes,
/// and the non-edges between different branches of the partition tree.
pub fn knowledge_closure(view: &LocalView<'_>) -> Result<KnowledgeMap, ClosureError> {
    let as_malformed = |v: Verdict| match v {
        Verdict::Reject { witness, .. } => ClosureError::Malformed(witness),
        Verdict::Accept => unreachable!(),
    };
    let d = decode_view(view).map_err(as_malformed)?;
    let tp = decode_partitioning(&d.own.partitioning, d.n).map_err(|e| ClosureError::Malformed(e.to_string()))?;
    let idx = PartitionIndex::new(tp, d.n).ok_or_else(|| ClosureError::Malformed("not-a-partition".into()))?;
    closure(&d, &idx).map_err(ClosureError::Contradiction)
}
