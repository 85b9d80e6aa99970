use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};

/// Resampling attempts before a generator gives up.
pub const GENERATION_BUDGET: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Cograph,
    Split,
    P5freeRepair,
    WithP5,
    Gnp,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Cograph,
        Family::Split,
        Family::P5freeRepair,
        Family::WithP5,
        Family::Gnp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Cograph => "cograph",
            Family::Split => "split",
            Family::P5freeRepair => "p5free-repair",
            Family::WithP5 => "with-p5",
            Family::Gnp => "gnp",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| GenerateError::InvalidSpec(format!("unknown family '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    /// Edge probability; for cographs the probability that an inner cotree
    /// node is a join.
    pub p: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedGraph {
    pub graph: Graph,
    /// Oracle verdict on the emitted graph.
    pub p5free: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("GenerationBudgetExceeded: no {family} graph on {n} vertices after {attempts} attempts")]
    GenerationBudgetExceeded { family: Family, n: usize, attempts: usize },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

/// Deterministic in `spec`. Every output is connected and tagged by the
/// induced-P5 oracle.
pub fn generate(spec: &GeneratorSpec) -> Result<GeneratedGraph, GenerateError> {
    if spec.n == 0 {
        return Err(GenerateError::InvalidSpec("n must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&spec.p) {
        return Err(GenerateError::InvalidSpec(format!("p = {} is outside [0, 1]", spec.p)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (n, p) = (spec.n, spec.p);
    let budget = || GenerateError::GenerationBudgetExceeded {
        family: spec.family,
        n,
        attempts: GENERATION_BUDGET,
    };
    let graph = match spec.family {
        Family::Cograph => cograph(n, p, &mut rng),
        Family::Split => split(n, p, &mut rng),
        Family::Gnp => connected_gnp(n, p, &mut rng),
        Family::WithP5 => (0..GENERATION_BUDGET)
            .map(|_| connected_gnp(n, p, &mut rng))
            .find(Graph::has_induced_p5)
            .ok_or_else(budget)?,
        Family::P5freeRepair => (0..GENERATION_BUDGET)
            .find_map(|_| repair(connected_gnp(n, p, &mut rng)))
            .ok_or_else(budget)?,
    };
    debug_assert!(graph.is_connected());
    let p5free = graph.find_induced_path(5).is_none();
    Ok(GeneratedGraph { graph, p5free })
}

fn shuffled_labels(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vertex> {
    let mut labels: Vec<Vertex> = (1..=n).collect();
    labels.shuffle(rng);
    labels
}

fn join(rows: &mut [VertexSet], a: &VertexSet, b: &VertexSet) {
    for u in a {
        rows[u - 1].union_with(b);
    }
    for v in b {
        rows[v - 1].union_with(a);
    }
}

/// Random cotree over shuffled labels: each inner node splits its leaves in
/// two at a uniform point. The root is a join so the result is connected.
fn cograph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let labels = shuffled_labels(n, rng);
    let mut rows = vec![VertexSet::new(n); n];
    // (leaves, is_join)
    let mut stack = vec![(labels, true)];
    while let Some((leaves, is_join)) = stack.pop() {
        if leaves.len() < 2 {
            continue;
        }
        let cut = rng.gen_range(1..leaves.len());
        let (a, b) = leaves.split_at(cut);
        if is_join {
            join(
                &mut rows,
                &VertexSet::from_vertices(n, a.iter().copied()),
                &VertexSet::from_vertices(n, b.iter().copied()),
            );
        }
        for part in [a, b] {
            stack.push((part.to_vec(), rng.gen_bool(p)));
        }
    }
    Graph::from_rows(rows).expect("cotree rows are symmetric")
}

/// Clique on a uniform share of `[n/4, 3n/4]` of the labels, the rest
/// independent; cross edges with probability `p`, and every independent
/// vertex keeps at least one clique neighbor.
fn split(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let labels = shuffled_labels(n, rng);
    let k = rng.gen_range((n / 4).max(1)..=(3 * n / 4).max(1));
    let (clique, independent) = labels.split_at(k);
    let mut edges = Vec::new();
    for (i, &u) in clique.iter().enumerate() {
        edges.extend(clique[i + 1..].iter().map(|&v| (u, v)));
    }
    for &x in independent {
        let mut any = false;
        for &c in clique {
            if rng.gen_bool(p) {
                edges.push((x, c));
                any = true;
            }
        }
        if !any {
            edges.push((x, *clique.choose(rng).unwrap()));
        }
    }
    Graph::new(n, edges).expect("split edges are in range")
}

fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("gnp edges are in range")
}

/// `G(n, p)` with consecutive components (by minimum vertex) linked through
/// their minimum vertices.
fn connected_gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let g = gnp(n, p, rng);
    let comps = g.connected_components();
    let links: Vec<(Vertex, Vertex)> = comps
        .windows(2)
        .map(|w| (w[0].first().unwrap(), w[1].first().unwrap()))
        .collect();
    links.into_iter().fold(g, |g, (u, v)| g.with_pair_toggled(u, v))
}

/// Destroys induced P5s one at a time by deleting a middle edge (2-3, then
/// 3-4) that keeps the graph connected; if both are bridges, or once `m`
/// deletions have been made, the chord 2-4 is added instead. Chord-only
/// rounds only add edges, so the loop ends; the budget is a safety net.
pub(crate) fn repair(mut g: Graph) -> Option<Graph> {
    let mut deletions_left = g.edge_count();
    let limit = deletions_left + g.n() * g.n();
    for _ in 0..=limit {
        let Some(p) = g.find_induced_path(5) else {
            return Some(g);
        };
        let deleted = [(p[1], p[2]), (p[2], p[3])]
            .into_iter()
            .filter(|_| deletions_left > 0)
            .map(|(u, v)| g.with_pair_toggled(u, v))
            .find(Graph::is_connected);
        g = match deleted {
            Some(h) => {
                deletions_left -= 1;
                h
            }
            None => g.with_pair_toggled(p[1], p[3]),
        };
    }
    None
}
