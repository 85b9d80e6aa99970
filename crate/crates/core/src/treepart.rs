//! Valid tree-partitions: rooted trees whose nodes carry bags (cliques or
//! induced P3s) that partition the vertex set, each bag dominating the
//! subgraph spanned by its subtree, with child subtrees matching the
//! connected components left after removing the bag.

use std::fmt;

use thiserror::Error;

use crate::graph::{induced_p3_order, Graph, Vertex, VertexSet};

/// Index of a node in a [`RootedTree`].
pub type Node = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree has no nodes")]
    Empty,
    #[error("node {0} referenced but tree has fewer nodes")]
    UnknownNode(Node),
    #[error("node {0} is not reachable from the root exactly once")]
    NotATree(Node),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("input graph is disconnected")]
    DisconnectedInput,
    #[error("no dominating clique or induced P3 in component {0:?}")]
    NoDominatingStructure(VertexSet),
}

/// Rooted tree with ordered children. Ancestor queries are answered from
/// preorder intervals computed at construction.
#[derive(Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: Node,
    parent: Vec<Option<Node>>,
    children: Vec<Vec<Node>>,
    tin: Vec<usize>,
    size: Vec<usize>,
}

impl RootedTree {
    pub fn singleton() -> RootedTree {
        RootedTree::from_children(vec![Vec::new()], 0).expect("one node")
    }

    pub fn from_children(children: Vec<Vec<Node>>, root: Node) -> Result<RootedTree, TreeError> {
        let t = children.len();
        if t == 0 {
            return Err(TreeError::Empty);
        }
        if root >= t {
            return Err(TreeError::UnknownNode(root));
        }
        let mut parent = vec![None; t];
        let mut seen = vec![false; t];
        let mut tin = vec![0; t];
        let mut size = vec![1; t];
        let mut order = Vec::with_capacity(t);
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(node) = stack.pop() {
            tin[node] = order.len();
            order.push(node);
            for &c in children[node].iter().rev() {
                if c >= t {
                    return Err(TreeError::UnknownNode(c));
                }
                if seen[c] {
                    return Err(TreeError::NotATree(c));
                }
                seen[c] = true;
                parent[c] = Some(node);
                stack.push(c);
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(TreeError::NotATree(missing));
        }
        for &node in order.iter().rev() {
            if let Some(p) = parent[node] {
                size[p] += size[node];
            }
        }
        Ok(RootedTree {
            root,
            parent,
            children,
            tin,
            size,
        })
    }

    /// Builds a tree from a parent array; children are ordered by node index.
    pub fn from_parents(parents: &[Option<Node>]) -> Result<RootedTree, TreeError> {
        let t = parents.len();
        let mut children = vec![Vec::new(); t];
        let mut root = None;
        for (node, p) in parents.iter().enumerate() {
            match *p {
                None if root.is_none() => root = Some(node),
                None => return Err(TreeError::NotATree(node)),
                Some(p) if p >= t => return Err(TreeError::UnknownNode(p)),
                Some(p) => children[p].push(node),
            }
        }
        RootedTree::from_children(children, root.ok_or(TreeError::Empty)?)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> Node {
        self.root
    }

    pub fn parent(&self, node: Node) -> Option<Node> {
        self.parent[node]
    }

    pub fn children(&self, node: Node) -> &[Node] {
        &self.children[node]
    }

    /// Nodes in depth-first preorder, children visited in stored order.
    pub fn preorder(&self) -> Vec<Node> {
        let mut order = vec![0; self.len()];
        for (node, &t) in self.tin.iter().enumerate() {
            order[t] = node;
        }
        order
    }

    /// True iff `a` lies on the root path of `b` (including `a == b`).
    pub fn is_ancestor_or_self(&self, a: Node, b: Node) -> bool {
        self.tin[a] <= self.tin[b] && self.tin[b] < self.tin[a] + self.size[a]
    }

    pub fn comparable(&self, a: Node, b: Node) -> bool {
        self.is_ancestor_or_self(a, b) || self.is_ancestor_or_self(b, a)
    }

    /// Strict ancestors of `node`, nearest first.
    pub fn ancestors(&self, node: Node) -> impl Iterator<Item = Node> + '_ {
        std::iter::successors(self.parent[node], move |&p| self.parent[p])
    }

    /// `node` and all its descendants, in preorder.
    pub fn subtree(&self, node: Node) -> Vec<Node> {
        let order = self.preorder();
        order[self.tin[node]..self.tin[node] + self.size[node]].to_vec()
    }

    /// The same tree relabelled so that node indices follow preorder.
    pub fn to_preorder(&self) -> RootedTree {
        let order = self.preorder();
        let children = order
            .iter()
            .map(|&node| self.children[node].iter().map(|&c| self.tin[c]).collect())
            .collect();
        RootedTree::from_children(children, 0).expect("relabelled tree")
    }
}

impl fmt::Debug for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootedTree")
            .field("root", &self.root)
            .field("children", &self.children)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BagKind {
    Clique,
    P3,
}

/// Vertex set attached to a tree node. Clique members are kept ascending;
/// a P3 is stored in path order with the lower-id endpoint first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bag {
    Clique(Vec<Vertex>),
    P3([Vertex; 3]),
}

impl Bag {
    pub fn clique<I: IntoIterator<Item = Vertex>>(members: I) -> Bag {
        let mut m: Vec<Vertex> = members.into_iter().collect();
        m.sort_unstable();
        m.dedup();
        Bag::Clique(m)
    }

    pub fn p3(end: Vertex, center: Vertex, other_end: Vertex) -> Bag {
        if end < other_end {
            Bag::P3([end, center, other_end])
        } else {
            Bag::P3([other_end, center, end])
        }
    }

    pub fn kind(&self) -> BagKind {
        match self {
            Bag::Clique(_) => BagKind::Clique,
            Bag::P3(_) => BagKind::P3,
        }
    }

    /// Members in canonical order (ascending for cliques, path order for P3s).
    pub fn members(&self) -> &[Vertex] {
        match self {
            Bag::Clique(m) => m,
            Bag::P3(order) => order,
        }
    }

    pub fn len(&self) -> usize {
        self.members().len()
    }

    pub fn is_empty(&self) -> bool {
        self.members().is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members().contains(&v)
    }

    pub fn to_set(&self, n: usize) -> VertexSet {
        VertexSet::from_vertices(n, self.members().iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePartition {
    pub tree: RootedTree,
    pub bags: Vec<Bag>,
}

impl TreePartition {
    pub fn new(tree: RootedTree, bags: Vec<Bag>) -> TreePartition {
        assert_eq!(tree.len(), bags.len(), "one bag per tree node");
        TreePartition { tree, bags }
    }

    pub fn bag(&self, node: Node) -> &Bag {
        &self.bags[node]
    }

    /// Maps each vertex of `1..=n` to the node holding it, or `None` when
    /// the bags do not partition `1..=n`.
    pub fn owner_map(&self, n: usize) -> Option<Vec<Node>> {
        let mut owner = vec![usize::MAX; n + 1];
        for (node, bag) in self.bags.iter().enumerate() {
            if bag.is_empty() {
                return None;
            }
            for &v in bag.members() {
                if v == 0 || v > n || owner[v] != usize::MAX {
                    return None;
                }
                owner[v] = node;
            }
        }
        owner[1..].iter().all(|&o| o != usize::MAX).then_some(owner)
    }

    /// Vertices of the bags in the subtree rooted at `node`.
    pub fn subtree_vertices(&self, node: Node, n: usize) -> VertexSet {
        let mut s = VertexSet::new(n);
        for t in self.tree.subtree(node) {
            for &v in self.bags[t].members() {
                s.insert(v);
            }
        }
        s
    }

    /// Same partition with tree nodes renumbered in preorder.
    pub fn to_preorder(&self) -> TreePartition {
        let order = self.tree.preorder();
        TreePartition {
            tree: self.tree.to_preorder(),
            bags: order.iter().map(|&node| self.bags[node].clone()).collect(),
        }
    }

    /// One line per node in preorder:
    /// `node <i>: parent=<j|-> kind=<clique|p3> members=<ids>[ order=<a-b-c>]`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for node in self.tree.preorder() {
            let bag = &self.bags[node];
            let parent = self.tree.parent(node).map_or("-".to_string(), |p| p.to_string());
            let mut members: Vec<Vertex> = bag.members().to_vec();
            members.sort_unstable();
            let ids = members.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
            match bag {
                Bag::Clique(_) => {
                    out.push_str(&format!("node {node}: parent={parent} kind=clique members={ids}\n"))
                }
                Bag::P3([a, c, b]) => out.push_str(&format!(
                    "node {node}: parent={parent} kind=p3 members={ids} order={a}-{c}-{b}\n"
                )),
            }
        }
        out
    }
}

/// A dominating clique or induced P3 of a connected graph, chosen by a
/// fixed staged search: singletons, edges, triangles, induced P3s, then
/// maximal cliques.
pub fn find_dominating_structure(g: &Graph) -> Result<Option<Bag>, PartitionError> {
    if !g.is_connected() {
        return Err(PartitionError::DisconnectedInput);
    }
    Ok(dominating_structure_within(g, &g.all_vertices()))
}

/// Staged search restricted to the subgraph induced by `within`.
pub fn dominating_structure_within(g: &Graph, within: &VertexSet) -> Option<Bag> {
    let n = g.n();
    let closed: Vec<VertexSet> = (0..=n)
        .map(|v| {
            if within.contains(v) {
                let mut s = g.neighbors(v) & within;
                s.insert(v);
                s
            } else {
                VertexSet::new(n)
            }
        })
        .collect();
    let undominated = |members: &[Vertex]| {
        let mut left = within.clone();
        for &m in members {
            left.difference_with(&closed[m]);
        }
        left
    };

    for v in within {
        if within.is_subset(&closed[v]) {
            return Some(Bag::clique([v]));
        }
    }
    for a in within {
        for b in closed[a].iter().filter(|&b| b > a) {
            if undominated(&[a, b]).is_empty() {
                return Some(Bag::clique([a, b]));
            }
        }
    }
    // Triangles: the third vertex must cover the first undominated vertex.
    for a in within {
        for b in closed[a].iter().filter(|&b| b > a) {
            let missing = undominated(&[a, b]);
            let Some(x) = missing.first() else { continue };
            let mut cand = &closed[a] & &closed[b];
            cand.intersect_with(&closed[x]);
            for c in cand.iter().filter(|&c| c > b) {
                if missing.is_subset(&closed[c]) {
                    return Some(Bag::clique([a, b, c]));
                }
            }
        }
    }
    for a in within {
        for b in within.iter().filter(|&b| b > a) {
            let missing = undominated(&[a, b]);
            let cand = match missing.first() {
                Some(x) => closed[x].clone(),
                None => within.clone(),
            };
            for c in cand.iter().filter(|&c| c > b) {
                if let Some([e1, center, e2]) = induced_p3_order(g, a, b, c) {
                    if missing.is_subset(&closed[c]) {
                        return Some(Bag::p3(e1, center, e2));
                    }
                }
            }
        }
    }
    let mut found = None;
    let mut clique = Vec::new();
    bron_kerbosch(g, &mut clique, within.clone(), VertexSet::new(n), &mut |c| {
        if undominated(c).is_empty() {
            found = Some(Bag::clique(c.iter().copied()));
            true
        } else {
            false
        }
    });
    found
}

/// Maximal clique enumeration with pivoting; `visit` returns true to stop.
fn bron_kerbosch<F>(g: &Graph, clique: &mut Vec<Vertex>, mut p: VertexSet, mut x: VertexSet, visit: &mut F) -> bool
where
    F: FnMut(&[Vertex]) -> bool,
{
    if p.is_empty() {
        return x.is_empty() && visit(clique);
    }
    let pivot = (&p | &x)
        .iter()
        .max_by_key(|&u| (( &p & g.neighbors(u)).len(), std::cmp::Reverse(u)))
        .expect("p is nonempty");
    for v in &(&p - g.neighbors(pivot)) {
        clique.push(v);
        let stop = bron_kerbosch(g, clique, &p & g.neighbors(v), &x & g.neighbors(v), visit);
        clique.pop();
        if stop {
            return true;
        }
        p.remove(v);
        x.insert(v);
    }
    false
}

/// Recursive construction: a dominating structure as the root bag, then one
/// subtree per connected component of the rest, ordered by minimum id.
/// Success does not imply the input is P5-free.
pub fn build_tree_partition(g: &Graph) -> Result<TreePartition, PartitionError> {
    if !g.is_connected() {
        return Err(PartitionError::DisconnectedInput);
    }
    let mut children = Vec::new();
    let mut bags = Vec::new();
    build_component(g, &g.all_vertices(), &mut children, &mut bags, &mut |_, within| {
        Err(PartitionError::NoDominatingStructure(within.clone()))
    })?;
    let tree = RootedTree::from_children(children, 0).expect("constructed tree");
    Ok(TreePartition { tree, bags })
}

/// Like [`build_tree_partition`] but total: disconnected graphs get the later
/// components hung under the first root, and components without a dominating
/// structure fall back to their minimum vertex. The result partitions the
/// vertices but need not be valid; adversaries use it as a plausible lie.
pub fn best_effort_partition(g: &Graph) -> TreePartition {
    let mut children: Vec<Vec<Node>> = Vec::new();
    let mut bags = Vec::new();
    let mut fallback =
        |_: &Graph, within: &VertexSet| -> Result<Bag, PartitionError> { Ok(Bag::clique([within.first().unwrap()])) };
    let comps = g.connected_components();
    let root = build_component(g, &comps[0], &mut children, &mut bags, &mut fallback).expect("total");
    for comp in &comps[1..] {
        let child = build_component(g, comp, &mut children, &mut bags, &mut fallback).expect("total");
        children[root].push(child);
    }
    let tree = RootedTree::from_children(children, root).expect("constructed tree");
    TreePartition { tree, bags }.to_preorder()
}

fn build_component<F>(
    g: &Graph,
    within: &VertexSet,
    children: &mut Vec<Vec<Node>>,
    bags: &mut Vec<Bag>,
    on_missing: &mut F,
) -> Result<Node, PartitionError>
where
    F: FnMut(&Graph, &VertexSet) -> Result<Bag, PartitionError>,
{
    let bag = match dominating_structure_within(g, within) {
        Some(bag) => bag,
        None => on_missing(g, within)?,
    };
    let node = bags.len();
    let rest = within - &bag.to_set(g.n());
    bags.push(bag);
    children.push(Vec::new());
    for comp in g.components_within(&rest) {
        let child = build_component(g, &comp, children, bags, on_missing)?;
        children[node].push(child);
    }
    Ok(node)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionFault {
    BagCountMismatch,
    EmptyBag(Node),
    OutOfRange(Vertex),
    Duplicate(Vertex),
    Missing(Vertex),
}

/// First failed condition found by [`validate_tree_partition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Partition(PartitionFault),
    /// Condition (1): the bag is neither a clique nor the declared induced P3.
    BagShape { node: Node },
    /// Condition (2): `vertex` of the subtree has no neighbor in the bag.
    NotDominating { node: Node, vertex: Vertex },
    /// Condition (3): `vertex` lies in a component of the remainder that is
    /// not exactly one child subtree.
    Components { node: Node, vertex: Vertex },
    /// The edge joins two bags that are not ancestor-comparable.
    AncestorEdge { edge: (Vertex, Vertex) },
}

impl Violation {
    pub fn condition(&self) -> &'static str {
        match self {
            Violation::Partition(_) => "partition",
            Violation::BagShape { .. } => "1",
            Violation::NotDominating { .. } => "2",
            Violation::Components { .. } => "3",
            Violation::AncestorEdge { .. } => "ancestor-edge",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Partition(fault) => write!(f, "condition partition: {fault:?}"),
            Violation::BagShape { node } => write!(f, "condition 1 at node {node}"),
            Violation::NotDominating { node, vertex } => {
                write!(f, "condition 2 at node {node}: vertex {vertex} undominated")
            }
            Violation::Components { node, vertex } => {
                write!(f, "condition 3 at node {node}: component of vertex {vertex}")
            }
            Violation::AncestorEdge { edge } => {
                write!(f, "condition ancestor-edge: edge {}-{}", edge.0, edge.1)
            }
        }
    }
}

/// Checks the partition property, then conditions (1), (2), (3) per node in
/// preorder, then that every edge joins ancestor-comparable bags.
pub fn validate_tree_partition(g: &Graph, tp: &TreePartition) -> Result<(), Violation> {
    let n = g.n();
    let owner = partition_owner(tp, n).map_err(Violation::Partition)?;
    for node in tp.tree.preorder() {
        let bag = tp.bag(node);
        let bag_set = bag.to_set(n);
        let shape_ok = match bag {
            Bag::Clique(_) => g.is_clique(&bag_set) == Ok(true),
            Bag::P3(order) => g.as_induced_p3(&bag_set) == Some(*order),
        };
        if !shape_ok {
            return Err(Violation::BagShape { node });
        }
        let span = tp.subtree_vertices(node, n);
        let mut covered = bag_set.clone();
        for &v in bag.members() {
            covered.union_with(g.neighbors(v));
        }
        if let Some(vertex) = (&span - &covered).first() {
            return Err(Violation::NotDominating { node, vertex });
        }
        let rest = &span - &bag_set;
        let child_sets: Vec<VertexSet> =
            tp.tree.children(node).iter().map(|&c| tp.subtree_vertices(c, n)).collect();
        let comps = g.components_within(&rest);
        let stray = comps
            .iter()
            .find(|c| !child_sets.contains(c))
            .or_else(|| child_sets.iter().find(|c| !comps.contains(c)));
        if let Some(set) = stray {
            return Err(Violation::Components {
                node,
                vertex: set.first().unwrap_or(bag.members()[0]),
            });
        }
    }
    for (u, v) in g.edges() {
        if !tp.tree.comparable(owner[u], owner[v]) {
            return Err(Violation::AncestorEdge { edge: (u, v) });
        }
    }
    Ok(())
}

fn partition_owner(tp: &TreePartition, n: usize) -> Result<Vec<Node>, PartitionFault> {
    if tp.bags.len() != tp.tree.len() {
        return Err(PartitionFault::BagCountMismatch);
    }
    let mut owner = vec![usize::MAX; n + 1];
    for (node, bag) in tp.bags.iter().enumerate() {
        if bag.is_empty() {
            return Err(PartitionFault::EmptyBag(node));
        }
        for &v in bag.members() {
            if v == 0 || v > n {
                return Err(PartitionFault::OutOfRange(v));
            }
            if owner[v] != usize::MAX {
                return Err(PartitionFault::Duplicate(v));
            }
            owner[v] = node;
        }
    }
    match (1..=n).find(|&v| owner[v] == usize::MAX) {
        Some(v) => Err(PartitionFault::Missing(v)),
        None => Ok(owner),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Graph {
        Graph::new(leaves + 1, (2..=leaves + 1).map(|v| (1, v))).unwrap()
    }

    /// Independent brute force: the lexicographically smallest dominating
    /// set of the given size that is a clique (or an induced P3).
    fn brute_first(g: &Graph, size: usize, want_p3: bool) -> Option<Vec<Vertex>> {
        let n = g.n();
        let all = g.all_vertices();
        let mut combo: Vec<usize> = (1..=size).collect();
        if size > n {
            return None;
        }
        loop {
            let s = VertexSet::from_vertices(n, combo.iter().copied());
            let shape = if want_p3 {
                g.as_induced_p3(&s).is_some()
            } else {
                g.is_clique(&s) == Ok(true)
            };
            if shape && g.is_dominating(&s, &all) == Ok(true) {
                return Some(combo);
            }
            let mut i = size;
            while i > 0 && combo[i - 1] == n - size + i {
                i -= 1;
            }
            if i == 0 {
                return None;
            }
            combo[i - 1] += 1;
            for j in i..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }

    #[test]
    fn dominating_structure_examples() {
        assert_eq!(find_dominating_structure(&star(4)), Ok(Some(Bag::clique([1]))));

        let c4 = Graph::cycle(4);
        assert_eq!(brute_first(&c4, 1, false), None);
        assert_eq!(brute_first(&c4, 2, false), Some(vec![1, 2]));
        assert_eq!(find_dominating_structure(&c4), Ok(Some(Bag::clique([1, 2]))));

        let p5 = Graph::path(5);
        for size in 1..=3 {
            assert_eq!(brute_first(&p5, size, false), None);
        }
        assert_eq!(brute_first(&p5, 3, true), Some(vec![2, 3, 4]));
        assert_eq!(find_dominating_structure(&p5), Ok(Some(Bag::p3(2, 3, 4))));

        let two = Graph::new(4, [(1, 2), (3, 4)]).unwrap();
        assert_eq!(find_dominating_structure(&two), Err(PartitionError::DisconnectedInput));
    }

    #[test]
    fn staged_search_matches_brute_force_on_small_graphs() {
        // every connected graph on 5 labeled vertices
        let pairs: Vec<(usize, usize)> = (1..=5).flat_map(|u| (u + 1..=5).map(move |v| (u, v))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let g = Graph::new(5, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e)).unwrap();
            if !g.is_connected() {
                continue;
            }
            let expected = brute_first(&g, 1, false)
                .or_else(|| brute_first(&g, 2, false))
                .or_else(|| brute_first(&g, 3, false))
                .map(Bag::clique)
                .or_else(|| {
                    brute_first(&g, 3, true).map(|m| {
                        let [a, c, b] = g.as_induced_p3(&VertexSet::from_vertices(5, m)).unwrap();
                        Bag::p3(a, c, b)
                    })
                });
            let got = find_dominating_structure(&g).unwrap();
            match expected {
                Some(bag) => assert_eq!(got, Some(bag), "{g:?}"),
                None => {
                    // only larger cliques remain; whatever is found must dominate
                    if let Some(bag) = got {
                        let s = bag.to_set(5);
                        assert!(bag.len() >= 4);
                        assert_eq!(g.is_clique(&s), Ok(true));
                        assert_eq!(g.is_dominating(&s, &g.all_vertices()), Ok(true));
                    }
                }
            }
        }
    }

    #[test]
    fn maximal_clique_stage_finds_large_dominating_clique() {
        // K5 on 1..=5 plus pendant vertices 6..=10, vertex 5+i attached to i
        let mut edges: Vec<(usize, usize)> = (1..=5).flat_map(|u| (u + 1..=5).map(move |v| (u, v))).collect();
        edges.extend((1..=5).map(|i| (i, i + 5)));
        let g = Graph::new(10, edges).unwrap();
        assert_eq!(find_dominating_structure(&g), Ok(Some(Bag::clique(1..=5))));
    }

    #[test]
    fn build_examples() {
        let k5 = build_tree_partition(&Graph::complete(5)).unwrap();
        assert_eq!(k5.bags, (1..=5).map(|v| Bag::clique([v])).collect::<Vec<_>>());
        for node in 0..4 {
            assert_eq!(k5.tree.children(node), &[node + 1]);
        }

        let st = build_tree_partition(&star(4)).unwrap();
        assert_eq!(st.bags[0], Bag::clique([1]));
        assert_eq!(st.tree.children(0), &[1, 2, 3, 4]);
        assert_eq!(&st.bags[1..], &[Bag::clique([2]), Bag::clique([3]), Bag::clique([4]), Bag::clique([5])]);

        let p5 = build_tree_partition(&Graph::path(5)).unwrap();
        assert_eq!(p5.bags, vec![Bag::p3(2, 3, 4), Bag::clique([1]), Bag::clique([5])]);
        assert_eq!(p5.tree.children(0), &[1, 2]);
        assert_eq!(validate_tree_partition(&Graph::path(5), &p5), Ok(()));
    }

    #[test]
    fn validator_examples() {
        let p5 = Graph::path(5);
        let whole = TreePartition::new(RootedTree::singleton(), vec![Bag::clique(1..=5)]);
        assert_eq!(validate_tree_partition(&p5, &whole), Err(Violation::BagShape { node: 0 }));

        // 3-4 is an edge of the cycle 1-2-3-4-1, so this partition is valid
        let c4 = Graph::cycle(4);
        let tp = TreePartition::new(
            RootedTree::from_parents(&[None, Some(0)]).unwrap(),
            vec![Bag::clique([1, 2]), Bag::clique([3, 4])],
        );
        assert_eq!(validate_tree_partition(&c4, &tp), Ok(()));

        // universal vertex 1 over the 4-cycle 2-3-4-5-2; child bag {2,4} is a non-edge
        let g = Graph::new(5, [(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (3, 4), (4, 5), (5, 2)]).unwrap();
        let tp = TreePartition::new(
            RootedTree::from_parents(&[None, Some(0), Some(1), Some(1)]).unwrap(),
            vec![Bag::clique([1]), Bag::clique([2, 4]), Bag::clique([3]), Bag::clique([5])],
        );
        assert_eq!(validate_tree_partition(&g, &tp), Err(Violation::BagShape { node: 1 }));
        assert_eq!(validate_tree_partition(&g, &tp).unwrap_err().condition(), "1");
    }

    #[test]
    fn validator_catches_each_condition() {
        let p5 = Graph::path(5);
        let missing = TreePartition::new(RootedTree::singleton(), vec![Bag::clique([1])]);
        assert_eq!(
            validate_tree_partition(&p5, &missing),
            Err(Violation::Partition(PartitionFault::Missing(2)))
        );
        let dup = TreePartition::new(
            RootedTree::from_parents(&[None, Some(0)]).unwrap(),
            vec![Bag::clique([1, 2]), Bag::clique([2, 3])],
        );
        assert_eq!(
            validate_tree_partition(&Graph::path(3), &dup),
            Err(Violation::Partition(PartitionFault::Duplicate(2)))
        );
        // root {3} does not dominate 1 and 5
        let tp = TreePartition::new(
            RootedTree::from_parents(&[None, Some(0), Some(0), Some(0), Some(0)]).unwrap(),
            vec![Bag::clique([3]), Bag::clique([1]), Bag::clique([2]), Bag::clique([4]), Bag::clique([5])],
        );
        assert_eq!(validate_tree_partition(&p5, &tp), Err(Violation::NotDominating { node: 0, vertex: 1 }));
        // P3 root, but {1} and {5} merged into one leaf which is not a component
        let g = Graph::path(5);
        let bad = TreePartition::new(
            RootedTree::from_parents(&[None, Some(0)]).unwrap(),
            vec![Bag::p3(2, 3, 4), Bag::clique([1, 5])],
        );
        assert_eq!(validate_tree_partition(&g, &bad), Err(Violation::Components { node: 0, vertex: 1 }));
    }

    #[test]
    fn ancestor_queries() {
        let t = RootedTree::from_parents(&[None, Some(0), Some(1), Some(0)]).unwrap();
        assert!(t.is_ancestor_or_self(0, 2));
        assert!(t.is_ancestor_or_self(1, 2));
        assert!(!t.comparable(2, 3));
        assert_eq!(t.ancestors(2).collect::<Vec<_>>(), vec![1, 0]);
        assert_eq!(t.subtree(1), vec![1, 2]);
        assert!(RootedTree::from_parents(&[None, None]).is_err());
        assert!(RootedTree::from_children(vec![vec![1], vec![0]], 0).is_err());
    }

    #[test]
    fn dump_format() {
        let p5 = build_tree_partition(&Graph::path(5)).unwrap();
        assert_eq!(
            p5.dump(),
            "node 0: parent=- kind=p3 members=2,3,4 order=2-3-4\n\
             node 1: parent=0 kind=clique members=1\n\
             node 2: parent=0 kind=clique members=5\n"
        );
    }
}
