use std::fmt;

use crate::graph::{Vertex, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairStatus {
    Edge,
    NonEdge,
    Unknown,
}

/// Where a pair status was learned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    OwnAdjacency,
    NeighborRow,
    PiecesRow,
    IntraBag,
    CrossBranch,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::OwnAdjacency => "own-adjacency",
            Source::NeighborRow => "neighbor-row",
            Source::PiecesRow => "pieces-row",
            Source::IntraBag => "intra-bag",
            Source::CrossBranch => "cross-branch",
        })
    }
}

/// Two sources disagree on a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Contradiction {
    pub pair: (Vertex, Vertex),
    pub known: Source,
    pub incoming: Source,
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "contradiction={}-{}:{}/{}", self.pair.0, self.pair.1, self.known, self.incoming)
    }
}

/// Tri-state adjacency knowledge over unordered pairs of `1..=n`, with the
/// first source that settled each pair.
#[derive(Clone, PartialEq, Eq)]
pub struct KnowledgeMap {
    n: usize,
    edges: Vec<VertexSet>,
    non_edges: Vec<VertexSet>,
    provenance: Vec<Option<Source>>,
}

impl KnowledgeMap {
    pub fn new(n: usize) -> Self {
        KnowledgeMap {
            n,
            edges: vec![VertexSet::new(n); n],
            non_edges: vec![VertexSet::new(n); n],
            provenance: vec![None; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn status(&self, u: Vertex, v: Vertex) -> PairStatus {
        if self.edges[u - 1].contains(v) {
            PairStatus::Edge
        } else if self.non_edges[u - 1].contains(v) {
            PairStatus::NonEdge
        } else {
            PairStatus::Unknown
        }
    }

    pub fn provenance(&self, u: Vertex, v: Vertex) -> Option<Source> {
        self.provenance[(u - 1) * self.n + v - 1]
    }

    pub fn known_edges(&self, u: Vertex) -> &VertexSet {
        &self.edges[u - 1]
    }

    pub fn known_non_edges(&self, u: Vertex) -> &VertexSet {
        &self.non_edges[u - 1]
    }

    /// Number of unordered pairs whose status is known.
    pub fn known_pairs(&self) -> usize {
        self.edges
            .iter()
            .zip(&self.non_edges)
            .map(|(e, ne)| e.len() + ne.len())
            .sum::<usize>()
            / 2
    }

    fn record(&mut self, u: Vertex, v: Vertex, edge: bool, source: Source) {
        let sets = if edge { &mut self.edges } else { &mut self.non_edges };
        sets[u - 1].insert(v);
        sets[v - 1].insert(u);
        self.provenance[(u - 1) * self.n + v - 1] = Some(source);
        self.provenance[(v - 1) * self.n + u - 1] = Some(source);
    }

    fn conflict(&self, u: Vertex, v: Vertex, incoming: Source) -> Contradiction {
        Contradiction {
            pair: (u.min(v), u.max(v)),
            known: self.provenance(u, v).expect("known pair"),
            incoming,
        }
    }

    pub fn merge_pair(&mut self, u: Vertex, v: Vertex, edge: bool, source: Source) -> Result<(), Contradiction> {
        match (self.status(u, v), edge) {
            (PairStatus::Unknown, _) => {
                self.record(u, v, edge, source);
                Ok(())
            }
            (PairStatus::Edge, true) | (PairStatus::NonEdge, false) => Ok(()),
            _ => Err(self.conflict(u, v, source)),
        }
    }

    /// Merges `row` as the complete neighborhood of `owner`.
    pub fn merge_row(&mut self, owner: Vertex, row: &VertexSet, source: Source) -> Result<(), Contradiction> {
        let mut claimed_edges = row.clone();
        claimed_edges.remove(owner);
        let mut claimed_non = row.complement();
        claimed_non.remove(owner);
        if let Some(v) = claimed_edges
            .first_common(&self.non_edges[owner - 1])
            .or_else(|| claimed_non.first_common(&self.edges[owner - 1]))
        {
            return Err(self.conflict(owner, v, source));
        }
        let fresh_edges = &claimed_edges - &self.edges[owner - 1];
        let fresh_non = &claimed_non - &self.non_edges[owner - 1];
        for v in &fresh_edges {
            self.record(owner, v, true, source);
        }
        for v in &fresh_non {
            self.record(owner, v, false, source);
        }
        Ok(())
    }

    /// Marks every pair `{x, v}` with `v ∈ others` as a non-edge.
    pub fn merge_non_edges(&mut self, x: Vertex, others: &VertexSet, source: Source) -> Result<(), Contradiction> {
        if let Some(v) = others.first_common(&self.edges[x - 1]) {
            return Err(self.conflict(x, v, source));
        }
        let fresh = &(others - &self.non_edges[x - 1]) - &VertexSet::from_vertices(self.n, [x]);
        for v in &fresh {
            self.record(x, v, false, source);
        }
        Ok(())
    }
}

impl fmt::Debug for KnowledgeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for u in 1..=self.n {
            for v in u + 1..=self.n {
                let s = self.status(u, v);
                if s != PairStatus::Unknown {
                    m.entry(&(u, v), &s);
                }
            }
        }
        m.finish()
    }
}

/// First `v1..v5` (ascending depth-first order) whose ten pairs are all
/// known, with exactly the consecutive pairs being edges.
pub fn find_known_induced_p5(km: &KnowledgeMap) -> Option<[Vertex; 5]> {
    for v1 in 1..=km.n {
        for v2 in km.known_edges(v1) {
            let c3 = km.known_edges(v2) & km.known_non_edges(v1);
            for v3 in &c3 {
                let mut c4 = km.known_edges(v3) & km.known_non_edges(v1);
                c4.intersect_with(km.known_non_edges(v2));
                for v4 in &c4 {
                    let mut c5 = km.known_edges(v4) & km.known_non_edges(v1);
                    c5.intersect_with(km.known_non_edges(v2));
                    c5.intersect_with(km.known_non_edges(v3));
                    if let Some(v5) = c5.first() {
                        return Some([v1, v2, v3, v4, v5]);
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn full_knowledge(g: &Graph) -> KnowledgeMap {
        let mut km = KnowledgeMap::new(g.n());
        for v in g.vertices() {
            km.merge_row(v, g.neighbors(v), Source::NeighborRow).unwrap();
        }
        km
    }

    #[test]
    fn detection_on_fully_known_maps() {
        assert_eq!(find_known_induced_p5(&full_knowledge(&Graph::path(5))), Some([1, 2, 3, 4, 5]));
        assert_eq!(find_known_induced_p5(&full_knowledge(&Graph::cycle(5))), None);
        assert_eq!(find_known_induced_p5(&full_knowledge(&Graph::cycle(6))), Some([1, 2, 3, 4, 5]));
    }

    #[test]
    fn one_unknown_pair_hides_the_path() {
        let g = Graph::path(5);
        let mut km = KnowledgeMap::new(5);
        for v in [2, 3, 4] {
            km.merge_row(v, g.neighbors(v), Source::NeighborRow).unwrap();
        }
        // everything but {1,5} is known
        assert_eq!(km.status(1, 5), PairStatus::Unknown);
        assert_eq!(km.known_pairs(), 9);
        assert_eq!(find_known_induced_p5(&km), None);
        km.merge_pair(1, 5, false, Source::CrossBranch).unwrap();
        assert_eq!(find_known_induced_p5(&km), Some([1, 2, 3, 4, 5]));
        assert_eq!(km.provenance(5, 1), Some(Source::CrossBranch));
    }

    #[test]
    fn conflicting_sources() {
        let g = Graph::path(5);
        let mut km = KnowledgeMap::new(5);
        km.merge_row(2, g.neighbors(2), Source::NeighborRow).unwrap();
        let lie = VertexSet::from_vertices(5, [1]);
        let err = km.merge_row(3, &lie, Source::PiecesRow).unwrap_err();
        assert_eq!(err, Contradiction { pair: (2, 3), known: Source::NeighborRow, incoming: Source::PiecesRow });
        assert!(km.merge_non_edges(1, &VertexSet::from_vertices(5, [2]), Source::CrossBranch).is_err());
        assert!(km.merge_pair(1, 2, true, Source::IntraBag).is_ok());
    }
}
