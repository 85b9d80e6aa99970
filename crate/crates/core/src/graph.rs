//! Immutable simple undirected graphs over vertices `1..=n`, stored as
//! adjacency bit rows, together with the brute-force structural oracles
//! (induced paths, cliques, induced P3s, domination, components) that the
//! prover, the validators and the test harness rely on.

use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};
use std::str::FromStr;

use thiserror::Error;

/// Vertex identifier. Identifiers and indices coincide and start at 1.
pub type Vertex = usize;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("vertex {vertex} out of range 1..={n}")]
    OutOfRangeVertex { vertex: Vertex, n: usize },
    #[error("loop edge at vertex {0}")]
    LoopEdge(Vertex),
    #[error("adjacency rows are not symmetric at ({0}, {1})")]
    Asymmetric(Vertex, Vertex),
    #[error("vertex set is empty")]
    EmptySet,
    #[error("dominating candidate is not a subset of the target set")]
    SubsetViolation,
    #[error("graph file line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A subset of `1..=n` packed into 64-bit words; bit `v - 1` stands for `v`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet {
            n,
            words: vec![0; n.div_ceil(WORD)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = VertexSet {
            n,
            words: vec![u64::MAX; n.div_ceil(WORD)],
        };
        s.clear_tail();
        s
    }

    pub fn from_vertices<I: IntoIterator<Item = Vertex>>(n: usize, vertices: I) -> Self {
        let mut s = VertexSet::new(n);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    fn clear_tail(&mut self) {
        let rem = self.n % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Size of the universe `1..=n`.
    pub fn universe(&self) -> usize {
        self.n
    }

    /// Inserts `v`; panics when `v` is outside `1..=n`.
    pub fn insert(&mut self, v: Vertex) -> bool {
        assert!(v >= 1 && v <= self.n, "vertex {v} outside 1..={}", self.n);
        let (w, b) = ((v - 1) / WORD, (v - 1) % WORD);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        if !self.contains(v) {
            return false;
        }
        let (w, b) = ((v - 1) / WORD, (v - 1) % WORD);
        self.words[w] &= !(1 << b);
        true
    }

    pub fn set(&mut self, v: Vertex, value: bool) {
        if value {
            self.insert(v);
        } else {
            self.remove(v);
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        if v == 0 || v > self.n {
            return false;
        }
        self.words[(v - 1) / WORD] & (1 << ((v - 1) % WORD)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn first(&self) -> Option<Vertex> {
        self.iter().next()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn complement(&self) -> VertexSet {
        let mut s = VertexSet {
            n: self.n,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.clear_tail();
        s
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Smallest member of `self ∩ other`.
    pub fn first_common(&self, other: &VertexSet) -> Option<Vertex> {
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .find_map(|(i, (a, b))| {
                let w = a & b;
                (w != 0).then(|| i * WORD + w.trailing_zeros() as usize + 1)
            })
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl<'a> BitOr for &'a VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: &'a VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(rhs);
        s
    }
}

impl<'a> BitAnd for &'a VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: &'a VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(rhs);
        s
    }
}

impl<'a> Sub for &'a VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: &'a VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(rhs);
        s
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = Vertex;

    fn next(&mut self) -> Option<Vertex> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit + 1);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = Vertex;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// Simple undirected graph on `1..=n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: Vec<VertexSet>,
}

impl Graph {
    /// Builds a graph from an edge list; duplicate pairs collapse.
    pub fn new<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut rows = vec![VertexSet::new(n); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x == 0 || x > n {
                    return Err(GraphError::OutOfRangeVertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            rows[u - 1].insert(v);
            rows[v - 1].insert(u);
        }
        Ok(Graph { n, rows })
    }

    /// Builds a graph from adjacency rows, checking symmetry and the absence of loops.
    pub fn from_rows(rows: Vec<VertexSet>) -> Result<Graph, GraphError> {
        let n = rows.len();
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        for (i, row) in rows.iter().enumerate() {
            let u = i + 1;
            if row.universe() != n {
                return Err(GraphError::OutOfRangeVertex { vertex: row.universe(), n });
            }
            if row.contains(u) {
                return Err(GraphError::LoopEdge(u));
            }
            if let Some(v) = row.iter().find(|&v| !rows[v - 1].contains(u)) {
                return Err(GraphError::Asymmetric(u, v));
            }
        }
        Ok(Graph { n, rows })
    }

    pub fn complete(n: usize) -> Graph {
        let rows = (1..=n)
            .map(|v| {
                let mut r = VertexSet::full(n);
                r.remove(v);
                r
            })
            .collect();
        Graph { n, rows }
    }

    /// Path `1 - 2 - ... - n`.
    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i, i + 1))).expect("valid path")
    }

    /// Cycle `1 - 2 - ... - n - 1`, for `n >= 3`.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        Graph::new(n, (1..n).map(|i| (i, i + 1)).chain([(n, 1)])).expect("valid cycle")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<Vertex> {
        1..=self.n
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn neighbors(&self, v: Vertex) -> &VertexSet {
        &self.rows[v - 1]
    }

    pub fn closed_neighborhood(&self, v: Vertex) -> VertexSet {
        let mut s = self.rows[v - 1].clone();
        s.insert(v);
        s
    }

    pub fn rows(&self) -> &[VertexSet] {
        &self.rows
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u >= 1 && u <= self.n && self.rows[u - 1].contains(v)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rows[v - 1].len()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices()
            .flat_map(move |u| self.rows[u - 1].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Copy of the graph with the adjacency of `{u, v}` flipped.
    pub fn with_pair_toggled(&self, u: Vertex, v: Vertex) -> Graph {
        assert_ne!(u, v);
        let mut g = self.clone();
        let present = g.has_edge(u, v);
        g.rows[u - 1].set(v, !present);
        g.rows[v - 1].set(u, !present);
        g
    }

    /// Connected components of the subgraph induced by `within`, ordered by minimum member.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut left = within.clone();
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let mut comp = VertexSet::new(self.n);
            comp.insert(start);
            let mut frontier = comp.clone();
            left.remove(start);
            while !frontier.is_empty() {
                let mut next = VertexSet::new(self.n);
                for v in &frontier {
                    next.union_with(&self.rows[v - 1]);
                }
                next.intersect_with(&left);
                left.difference_with(&next);
                comp.union_with(&next);
                frontier = next;
            }
            out.push(comp);
        }
        out
    }

    pub fn connected_components(&self) -> Vec<VertexSet> {
        self.components_within(&self.all_vertices())
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// True iff every pair of `s` is adjacent; singletons are cliques.
    pub fn is_clique(&self, s: &VertexSet) -> Result<bool, GraphError> {
        if s.is_empty() {
            return Err(GraphError::EmptySet);
        }
        Ok(s.iter().all(|v| {
            let mut others = s.clone();
            others.remove(v);
            others.is_subset(&self.rows[v - 1])
        }))
    }

    /// The path order `(endpoint, center, endpoint)` if `s` induces a P3,
    /// lower-id endpoint first.
    pub fn as_induced_p3(&self, s: &VertexSet) -> Option<[Vertex; 3]> {
        if s.len() != 3 {
            return None;
        }
        let m: Vec<Vertex> = s.iter().collect();
        induced_p3_order(self, m[0], m[1], m[2])
    }

    /// True iff every vertex of `within` is in `s` or adjacent to it.
    pub fn is_dominating(&self, s: &VertexSet, within: &VertexSet) -> Result<bool, GraphError> {
        if !s.is_subset(within) {
            return Err(GraphError::SubsetViolation);
        }
        let mut covered = s.clone();
        for v in s {
            covered.union_with(&self.rows[v - 1]);
        }
        Ok(within.is_subset(&covered))
    }

    /// First induced path on `k` vertices found by depth-first extension in
    /// ascending id order, or `None` if the graph is `P_k`-free.
    pub fn find_induced_path(&self, k: usize) -> Option<Vec<Vertex>> {
        assert!(k >= 1);
        if k > self.n || (k == 5 && !self.has_induced_p5()) {
            return None;
        }
        let mut path = Vec::with_capacity(k);
        for start in self.vertices() {
            path.clear();
            path.push(start);
            if self.extend_induced_path(&mut path, &VertexSet::new(self.n), k) {
                return Some(path);
            }
        }
        None
    }

    /// Whether some induced `v1-v2-v3-v4-v5` exists. Anchors the centre `v3`
    /// and pairs non-adjacent neighbors `v2 < v4` that both reach outside
    /// `N[v3]`; the remaining ends are then found with bitset differences.
    pub fn has_induced_p5(&self) -> bool {
        for v3 in self.vertices() {
            let closed = self.closed_neighborhood(v3);
            let reach: Vec<(Vertex, VertexSet)> = self.rows[v3 - 1]
                .iter()
                .map(|a| (a, &self.rows[a - 1] - &closed))
                .filter(|(_, out)| !out.is_empty())
                .collect();
            for (i, (v2, out2)) in reach.iter().enumerate() {
                for (v4, out4) in &reach[i + 1..] {
                    if self.has_edge(*v2, *v4) || out2.is_subset(&self.rows[v4 - 1]) {
                        continue;
                    }
                    let ends5 = out4 - &self.rows[v2 - 1];
                    if ends5.is_empty() {
                        continue;
                    }
                    let ends1 = out2 - &self.rows[v4 - 1];
                    if ends1.iter().any(|v1| !ends5.is_subset(&self.rows[v1 - 1])) {
                        return true;
                    }
                }
            }
        }
        false
    }

    // `forbidden` is the union of closed neighborhoods of all path vertices but the tip.
    fn extend_induced_path(&self, path: &mut Vec<Vertex>, forbidden: &VertexSet, k: usize) -> bool {
        if path.len() == k {
            return true;
        }
        let tip = *path.last().unwrap();
        let candidates = &self.rows[tip - 1] - forbidden;
        let mut next_forbidden = forbidden | &self.rows[tip - 1];
        next_forbidden.insert(tip);
        for w in &candidates {
            path.push(w);
            if self.extend_induced_path(path, &next_forbidden, k) {
                return true;
            }
            path.pop();
        }
        false
    }

    /// Renders the graph text format: `p <n> <m>` then one `e <u> <v>` per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("p {} {}\n", self.n, self.edge_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("e {u} {v}\n"));
        }
        out
    }
}

pub(crate) fn induced_p3_order(g: &Graph, a: Vertex, b: Vertex, c: Vertex) -> Option<[Vertex; 3]> {
    let (ab, bc, ac) = (g.has_edge(a, b), g.has_edge(b, c), g.has_edge(a, c));
    let order = match (ab, bc, ac) {
        (true, true, false) => [a, b, c],
        (true, false, true) => [b, a, c],
        (false, true, true) => [a, c, b],
        _ => return None,
    };
    Some(if order[0] < order[2] {
        order
    } else {
        [order[2], order[1], order[0]]
    })
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

impl FromStr for Graph {
    type Err = GraphError;

    /// Strict parser: comment lines start with `c`, the first other line is
    /// `p <n> <m>`, followed by exactly `m` distinct `e <u> <v>` lines with `u < v`.
    fn from_str(text: &str) -> Result<Graph, GraphError> {
        let err = |line: usize, reason: &str| GraphError::Parse {
            line,
            reason: reason.to_string(),
        };
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let mut fields = line.split_ascii_whitespace();
            let tag = fields.next().unwrap();
            let nums: Result<Vec<usize>, _> = fields.map(str::parse::<usize>).collect();
            let nums = nums.map_err(|_| err(line_no, "expected unsigned integers"))?;
            match (tag, header) {
                ("p", None) => {
                    if nums.len() != 2 {
                        return Err(err(line_no, "expected `p <n> <m>`"));
                    }
                    if nums[0] == 0 {
                        return Err(err(line_no, "n must be positive"));
                    }
                    header = Some((nums[0], nums[1]));
                }
                ("p", Some(_)) => return Err(err(line_no, "duplicate header")),
                ("e", Some((n, _))) => {
                    if nums.len() != 2 {
                        return Err(err(line_no, "expected `e <u> <v>`"));
                    }
                    let (u, v) = (nums[0], nums[1]);
                    if u == 0 || v == 0 || u > n || v > n {
                        return Err(err(line_no, "endpoint out of range"));
                    }
                    if u >= v {
                        return Err(err(line_no, "edge must satisfy u < v"));
                    }
                    if !seen.insert((u, v)) {
                        return Err(err(line_no, "duplicate edge"));
                    }
                    edges.push((u, v));
                }
                ("e", None) => return Err(err(line_no, "edge before header")),
                _ => return Err(err(line_no, "unknown line type")),
            }
        }
        let (n, m) = header.ok_or_else(|| err(0, "missing `p` header"))?;
        if edges.len() != m {
            return Err(err(0, &format!("header declares {m} edges, found {}", edges.len())));
        }
        Graph::new(n, edges)
    }
}
