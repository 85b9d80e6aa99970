//! Reference schemes: the universal `n^2`-bit scheme, an `O(log n)`
//! spanning-tree certification of the vertex count, and `O(n)` clique
//! freeness. They share the [`Scheme`] interface with the P5 scheme so runs
//! and certificate sizes can be compared directly.
//!
//! Rejection steps are reused as generic stages: `malformed` for undecodable
//! certificates, `i` for the vertex's own data, `ii`/`iii` for consistency
//! with neighbors and `iv`/`v` for the final property check.

use crate::codec::{id_width, BitString};
use crate::framework::{CertificateAssignment, LocalView, ProverError, Scheme, StepTag, Verdict};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::p5::P5Scheme;

fn row_bits(row: &VertexSet, n: usize) -> impl Iterator<Item = bool> + '_ {
    (1..=n).map(move |v| row.contains(v))
}

fn read_row(bits: &BitString, offset: usize, n: usize) -> VertexSet {
    VertexSet::from_vertices(n, (1..=n).filter(|&v| bits.get(offset + v - 1) == Some(true)))
}

/// Every vertex holds the full adjacency matrix (row-major, `n^2` bits) and
/// evaluates `oracle` on it.
pub struct UniversalScheme<F> {
    name: String,
    oracle: F,
}

impl<F: Fn(&Graph) -> bool + Send + Sync> UniversalScheme<F> {
    pub fn new(name: impl Into<String>, oracle: F) -> Self {
        UniversalScheme {
            name: name.into(),
            oracle,
        }
    }
}

pub fn universal_scheme<F: Fn(&Graph) -> bool + Send + Sync>(oracle: F) -> UniversalScheme<F> {
    UniversalScheme::new("universal", oracle)
}

/// Universal scheme with the induced-P5 oracle.
pub fn universal_p5() -> UniversalScheme<fn(&Graph) -> bool> {
    UniversalScheme::new("universal-p5", |g: &Graph| g.find_induced_path(5).is_none())
}

pub fn encode_matrix(g: &Graph) -> BitString {
    let mut b = BitString::new();
    for v in g.vertices() {
        for bit in row_bits(g.neighbors(v), g.n()) {
            b.push(bit);
        }
    }
    b
}

impl<F: Fn(&Graph) -> bool + Send + Sync> Scheme for UniversalScheme<F> {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn prove(&self, g: &Graph) -> Result<CertificateAssignment, ProverError> {
        let m = encode_matrix(g);
        Ok(CertificateAssignment::new(vec![m; g.n()]))
    }

    fn verify(&self, view: &LocalView<'_>) -> Verdict {
        let n = view.n;
        if let Some((v, _)) = std::iter::once((view.id, view.cert))
            .chain(view.neighbors.iter().copied())
            .find(|(_, c)| c.len() != n * n)
        {
            return Verdict::reject(StepTag::Malformed, format!("matrix-length-at={v}"));
        }
        let actual = VertexSet::from_vertices(n, view.neighbors.iter().map(|&(v, _)| v));
        if read_row(view.cert, (view.id - 1) * n, n) != actual {
            return Verdict::reject(StepTag::I, "own-row-wrong");
        }
        if let Some((v, _)) = view.neighbors.iter().find(|(_, c)| *c != view.cert) {
            return Verdict::reject(StepTag::Ii, format!("matrix-differs-from={v}"));
        }
        let rows: Vec<VertexSet> = (0..n).map(|i| read_row(view.cert, i * n, n)).collect();
        let g = match Graph::from_rows(rows) {
            Ok(g) => g,
            Err(e) => return Verdict::reject(StepTag::Iii, format!("matrix-invalid:{e}")),
        };
        if !(self.oracle)(&g) {
            return Verdict::reject(StepTag::V, "oracle-false");
        }
        Verdict::Accept
    }
}

/// Label of the spanning-tree size scheme. `parent == None` marks the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpanningTreeLabel {
    pub claimed_n: u64,
    pub root_id: u64,
    pub parent: Option<u64>,
    pub dist: u64,
    pub subtree_size: u64,
}

impl SpanningTreeLabel {
    /// Five fields of a common width `W`, so `W` is a fifth of the length; a
    /// parent of 0 means none.
    pub fn encode(&self) -> BitString {
        let fields = [
            self.claimed_n,
            self.root_id,
            self.parent.unwrap_or(0),
            self.dist,
            self.subtree_size,
        ];
        let w = fields.iter().map(|&f| id_width(f as usize)).max().unwrap().max(1);
        let mut b = BitString::new();
        for f in fields {
            b.push_uint(f, w);
        }
        b
    }

    pub fn decode(b: &BitString) -> Option<SpanningTreeLabel> {
        if b.is_empty() || !b.len().is_multiple_of(5) || b.len() > 5 * 64 {
            return None;
        }
        let w = b.len() / 5;
        let mut r = b.reader();
        let mut f = [0u64; 5];
        for x in &mut f {
            *x = r.read_uint(w)?;
        }
        Some(SpanningTreeLabel {
            claimed_n: f[0],
            root_id: f[1],
            parent: (f[2] != 0).then_some(f[2]),
            dist: f[3],
            subtree_size: f[4],
        })
    }
}

/// Breadth-first tree from vertex 1 with smallest-id parents.
pub fn bfs_labels(g: &Graph) -> Vec<SpanningTreeLabel> {
    let n = g.n();
    let mut parent: Vec<Option<Vertex>> = vec![None; n + 1];
    let mut dist = vec![usize::MAX; n + 1];
    let mut order = vec![1];
    dist[1] = 0;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                parent[w] = Some(u);
                order.push(w);
            }
        }
    }
    let mut size = vec![1u64; n + 1];
    for &u in order.iter().rev() {
        if let Some(p) = parent[u] {
            size[p] += size[u];
        }
    }
    (1..=n)
        .map(|v| SpanningTreeLabel {
            claimed_n: n as u64,
            root_id: 1,
            parent: parent[v].map(|p| p as u64),
            dist: dist[v] as u64,
            subtree_size: size[v],
        })
        .collect()
}

/// Certifies the number of vertices with a spanning tree.
#[derive(Debug, Clone, Copy, Default)]
pub struct SpanningTreeSizeScheme;

impl Scheme for SpanningTreeSizeScheme {
    fn name(&self) -> String {
        "stree-n".to_string()
    }

    fn prove(&self, g: &Graph) -> Result<CertificateAssignment, ProverError> {
        if !g.is_connected() {
            return Err(ProverError::DisconnectedInput);
        }
        Ok(CertificateAssignment::new(bfs_labels(g).iter().map(SpanningTreeLabel::encode).collect()))
    }

    fn verify(&self, view: &LocalView<'_>) -> Verdict {
        let Some(me) = SpanningTreeLabel::decode(view.cert) else {
            return Verdict::reject(StepTag::Malformed, format!("label-at={}", view.id));
        };
        let mut others = Vec::with_capacity(view.neighbors.len());
        for &(v, c) in &view.neighbors {
            match SpanningTreeLabel::decode(c) {
                Some(l) => others.push((v as u64, l)),
                None => return Verdict::reject(StepTag::Malformed, format!("label-at={v}")),
            }
        }
        let id = view.id as u64;
        if let Some((v, _)) = others
            .iter()
            .find(|(_, l)| l.claimed_n != me.claimed_n || l.root_id != me.root_id)
        {
            return Verdict::reject(StepTag::I, format!("n-or-root-differs-from={v}"));
        }
        match me.parent {
            None if me.root_id != id || me.dist != 0 => {
                return Verdict::reject(StepTag::Ii, "parentless-non-root");
            }
            Some(_) if me.root_id == id => return Verdict::reject(StepTag::Ii, "root-with-parent"),
            Some(p) => match others.iter().find(|(v, _)| *v == p) {
                None => return Verdict::reject(StepTag::Ii, format!("parent-not-neighbor={p}")),
                Some((_, l)) if l.dist.checked_add(1) != Some(me.dist) => {
                    return Verdict::reject(StepTag::Ii, format!("dist-mismatch-with={p}"));
                }
                _ => {}
            },
            None => {}
        }
        let below: u64 = others
            .iter()
            .filter(|(_, l)| l.parent == Some(id))
            .map(|(_, l)| l.subtree_size)
            .fold(0u64, |a, b| a.saturating_add(b));
        if me.subtree_size != below.saturating_add(1) {
            return Verdict::reject(StepTag::Iii, "subtree-size-mismatch");
        }
        if me.parent.is_none() && me.subtree_size != me.claimed_n {
            return Verdict::reject(StepTag::Iv, format!("count={} claimed={}", me.subtree_size, me.claimed_n));
        }
        Verdict::Accept
    }
}

/// `K_k`-freeness with neighbor rows as certificates.
#[derive(Debug, Clone, Copy)]
pub struct CliqueFreenessScheme {
    k: usize,
}

impl CliqueFreenessScheme {
    /// # Panics
    /// If `k < 3`.
    pub fn new(k: usize) -> Self {
        assert!(k >= 3, "clique size must be at least 3");
        CliqueFreenessScheme { k }
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

// Extends `clique` by `need` more vertices drawn from `candidates`.
fn extend_clique(rows: &[(Vertex, VertexSet)], clique: &mut Vec<Vertex>, candidates: &VertexSet, need: usize) -> bool {
    if need == 0 {
        return true;
    }
    if candidates.len() < need {
        return false;
    }
    for v in candidates {
        let row = &rows[rows.binary_search_by_key(&v, |(w, _)| *w).unwrap()].1;
        let mut next = candidates & row;
        // only larger ids, so each clique is tried once
        for w in candidates.iter().take_while(|&w| w <= v) {
            next.remove(w);
        }
        clique.push(v);
        if extend_clique(rows, clique, &next, need - 1) {
            return true;
        }
        clique.pop();
    }
    false
}

impl Scheme for CliqueFreenessScheme {
    fn name(&self) -> String {
        format!("kk:{}", self.k)
    }

    fn prove(&self, g: &Graph) -> Result<CertificateAssignment, ProverError> {
        Ok(CertificateAssignment::new(
            g.vertices()
                .map(|v| {
                    let mut b = BitString::new();
                    for bit in row_bits(g.neighbors(v), g.n()) {
                        b.push(bit);
                    }
                    b
                })
                .collect(),
        ))
    }

    fn verify(&self, view: &LocalView<'_>) -> Verdict {
        let n = view.n;
        if let Some((v, _)) = std::iter::once((view.id, view.cert))
            .chain(view.neighbors.iter().copied())
            .find(|(_, c)| c.len() != n)
        {
            return Verdict::reject(StepTag::Malformed, format!("row-length-at={v}"));
        }
        let actual = VertexSet::from_vertices(n, view.neighbors.iter().map(|&(v, _)| v));
        if read_row(view.cert, 0, n) != actual {
            return Verdict::reject(StepTag::I, "own-row-wrong");
        }
        let rows: Vec<(Vertex, VertexSet)> = view.neighbors.iter().map(|&(v, c)| (v, read_row(c, 0, n))).collect();
        let mut clique = vec![view.id];
        if extend_clique(&rows, &mut clique, &actual, self.k - 1) {
            clique.sort_unstable();
            let w: Vec<String> = clique.iter().map(|v| v.to_string()).collect();
            return Verdict::reject(StepTag::V, format!("clique={}", w.join("-")));
        }
        Verdict::Accept
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown scheme '{0}' (expected p5, universal-p5, stree-n or kk:<k> with k >= 3)")]
pub struct UnknownScheme(pub String);

/// Resolves the names `p5`, `universal-p5`, `stree-n` and `kk:<k>`.
pub fn scheme_from_name(name: &str) -> Result<Box<dyn Scheme>, UnknownScheme> {
    match name {
        "p5" => Ok(Box::new(P5Scheme)),
        "universal-p5" => Ok(Box::new(universal_p5())),
        "stree-n" => Ok(Box::new(SpanningTreeSizeScheme)),
        _ => match name.strip_prefix("kk:").and_then(|k| k.parse::<usize>().ok()) {
            Some(k) if k >= 3 => Ok(Box::new(CliqueFreenessScheme::new(k))),
            _ => Err(UnknownScheme(name.to_string())),
        },
    }
}
