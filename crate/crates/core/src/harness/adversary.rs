//! Dishonest certificate assignments for soundness campaigns. Every stream
//! is a deterministic function of the graph and the strategy (kind, trial
//! count, seed).

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::generators::repair;
use crate::codec::{EncodedCertificate, NeighborhoodRow};
use crate::framework::{run, CertificateAssignment};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::p5::{ceil_sqrt, certificates_for_partition, pack, P5Scheme};
use crate::treepart::{best_effort_partition, build_tree_partition, Bag, RootedTree, TreePartition};

pub const DEFAULT_MAX_FLIPS: usize = 4;
pub const DEFAULT_GREEDY_STEPS: usize = 8;
pub const DEFAULT_GREEDY_CANDIDATES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdversaryKind {
    /// Honest-best-effort certificates with `1..=max_flips` random bit flips.
    Bitflip { max_flips: usize },
    /// Honest certificates of a graph that differs from the input on one or
    /// two vertex pairs, at least one inside an induced P5.
    WrongGraph,
    /// Certificates built from the true rows for a false tree-partition.
    LyingPartition,
    /// Honest certificates with altered, dropped or invented pieces rows.
    LyingPieces,
    /// Hill climbing over bit flips that minimises the rejecting vertices.
    GreedySearch { steps: usize, candidates: usize },
}

impl AdversaryKind {
    pub const NAMES: [&'static str; 5] = ["bitflip", "wrong-graph", "lying-partition", "lying-pieces", "greedy-search"];

    pub fn all() -> [AdversaryKind; 5] {
        [
            AdversaryKind::Bitflip {
                max_flips: DEFAULT_MAX_FLIPS,
            },
            AdversaryKind::WrongGraph,
            AdversaryKind::LyingPartition,
            AdversaryKind::LyingPieces,
            AdversaryKind::GreedySearch {
                steps: DEFAULT_GREEDY_STEPS,
                candidates: DEFAULT_GREEDY_CANDIDATES,
            },
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            AdversaryKind::Bitflip { .. } => Self::NAMES[0],
            AdversaryKind::WrongGraph => Self::NAMES[1],
            AdversaryKind::LyingPartition => Self::NAMES[2],
            AdversaryKind::LyingPieces => Self::NAMES[3],
            AdversaryKind::GreedySearch { .. } => Self::NAMES[4],
        }
    }
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AdversaryKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::all()
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown strategy '{s}' (expected one of {})", Self::NAMES.join(", ")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdversaryStrategy {
    pub kind: AdversaryKind,
    pub trials: usize,
    pub seed: u64,
}

/// Starting point for perturbations: honest certificates when the prover
/// succeeds; otherwise honest certificates of a repaired P5-free version of
/// `g` placed on the same vertex ids; otherwise certificates for the
/// best-effort partition of `g`.
pub fn honest_best_effort(g: &Graph) -> Vec<EncodedCertificate> {
    if let Ok(tp) = build_tree_partition(g) {
        return certificates_for_partition(g, &tp);
    }
    if let Some(h) = repair(g.clone()) {
        if let Ok(tp) = build_tree_partition(&h) {
            return certificates_for_partition(&h, &tp);
        }
    }
    certificates_for_partition(g, &best_effort_partition(g))
}

/// Honest certificates of `shown` (possibly disconnected), to be presented
/// on a different graph with the same vertex ids.
pub fn wrong_graph_certificates(shown: &Graph) -> CertificateAssignment {
    let tp = build_tree_partition(shown).unwrap_or_else(|_| best_effort_partition(shown));
    pack(&certificates_for_partition(shown, &tp), shown.n())
}

pub fn adversarial_certificates<'g>(
    g: &'g Graph,
    strategy: AdversaryStrategy,
) -> impl Iterator<Item = CertificateAssignment> + 'g {
    let mut adv = Adversary::new(g, strategy.seed);
    (0..strategy.trials).map(move |_| adv.trial(strategy.kind))
}

struct Adversary<'g> {
    g: &'g Graph,
    n: usize,
    rng: ChaCha8Rng,
    honest: Vec<EncodedCertificate>,
    witness: Option<Vec<Vertex>>,
}

impl<'g> Adversary<'g> {
    fn new(g: &'g Graph, seed: u64) -> Self {
        Adversary {
            g,
            n: g.n(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            honest: honest_best_effort(g),
            witness: g.find_induced_path(5),
        }
    }

    fn trial(&mut self, kind: AdversaryKind) -> CertificateAssignment {
        match kind {
            AdversaryKind::Bitflip { max_flips } => {
                let mut certs = pack(&self.honest, self.n);
                let flips = if max_flips == 0 { 0 } else { self.rng.gen_range(1..=max_flips) };
                for _ in 0..flips {
                    self.flip_random_bit(&mut certs);
                }
                certs
            }
            AdversaryKind::WrongGraph => self.wrong_graph(),
            AdversaryKind::LyingPartition => self.lying_partition(),
            AdversaryKind::LyingPieces => self.lying_pieces(),
            AdversaryKind::GreedySearch { steps, candidates } => self.greedy(steps, candidates),
        }
    }

    fn random_pair(&mut self) -> Option<(Vertex, Vertex)> {
        if self.n < 2 {
            return None;
        }
        let u = self.rng.gen_range(1..=self.n);
        let v = (u + self.rng.gen_range(1..self.n) - 1) % self.n + 1;
        Some((u, v))
    }

    fn flip_random_bit(&mut self, certs: &mut CertificateAssignment) {
        let total = certs.total_bits();
        if total == 0 {
            return;
        }
        let mut i = self.rng.gen_range(0..total);
        for v in 1..=self.n {
            let len = certs.get(v).unwrap().len();
            if i < len {
                certs.get_mut(v).unwrap().flip(i);
                return;
            }
            i -= len;
        }
    }

    /// Flips bit `i` in every certificate long enough to have it. Certificate
    /// layouts share a prefix structure, so this edits a common field in
    /// lockstep.
    fn flip_common_bit(&mut self, certs: &mut CertificateAssignment) {
        let shortest = (1..=self.n).map(|v| certs.get(v).unwrap().len()).min().unwrap_or(0);
        if shortest == 0 {
            return;
        }
        let i = self.rng.gen_range(0..shortest);
        for v in 1..=self.n {
            certs.get_mut(v).unwrap().flip(i);
        }
    }

    fn wrong_graph(&mut self) -> CertificateAssignment {
        let first = match &self.witness {
            Some(p) => {
                let i = self.rng.gen_range(0..5);
                let j = (i + self.rng.gen_range(1..5)) % 5;
                Some((p[i], p[j]))
            }
            None => self.random_pair(),
        };
        let Some((u, v)) = first else {
            return pack(&self.honest, self.n);
        };
        let mut shown = self.g.with_pair_toggled(u, v);
        if self.rng.gen_bool(0.5) {
            if let Some((a, b)) = self.random_pair() {
                shown = shown.with_pair_toggled(a, b);
            }
        }
        wrong_graph_certificates(&shown)
    }

    fn lying_partition(&mut self) -> CertificateAssignment {
        let tp = match self.rng.gen_range(0..3) {
            0 => self.random_partition(),
            1 => self.star_partition(),
            _ => self.perturbed_partition(),
        };
        pack(&certificates_for_partition(self.g, &tp), self.n)
    }

    fn random_bag(&mut self, members: &[Vertex]) -> Bag {
        if members.len() == 3 && self.rng.gen_bool(0.5) {
            let c = self.rng.gen_range(0..3);
            let ends: Vec<Vertex> = (0..3).filter(|&i| i != c).map(|i| members[i]).collect();
            Bag::p3(ends[0], members[c], ends[1])
        } else {
            Bag::clique(members.iter().copied())
        }
    }

    fn random_chunks(&mut self) -> Vec<Vec<Vertex>> {
        let mut vs: Vec<Vertex> = (1..=self.n).collect();
        vs.shuffle(&mut self.rng);
        let max_bag = (ceil_sqrt(self.n) + 1).max(3);
        let mut chunks = Vec::new();
        let mut rest = &vs[..];
        while !rest.is_empty() {
            let k = self.rng.gen_range(1..=max_bag.min(rest.len()));
            chunks.push(rest[..k].to_vec());
            rest = &rest[k..];
        }
        chunks
    }

    fn random_partition(&mut self) -> TreePartition {
        let chunks = self.random_chunks();
        let parents: Vec<Option<usize>> = (0..chunks.len())
            .map(|i| (i > 0).then(|| self.rng.gen_range(0..i)))
            .collect();
        let bags = chunks.iter().map(|c| self.random_bag(c)).collect();
        TreePartition::new(RootedTree::from_parents(&parents).expect("parents precede children"), bags).to_preorder()
    }

    /// A root bag with every remaining vertex as a singleton leaf.
    fn star_partition(&mut self) -> TreePartition {
        let honest_root = self.honest_partition().bags[0].clone();
        let root = if self.rng.gen_bool(0.5) {
            honest_root
        } else {
            let chunks = self.random_chunks();
            self.random_bag(&chunks[0])
        };
        let rest: Vec<Vertex> = (1..=self.n).filter(|&v| !root.contains(v)).collect();
        let mut parents = vec![None];
        parents.extend(rest.iter().map(|_| Some(0)));
        let mut bags = vec![root];
        bags.extend(rest.iter().map(|&v| Bag::clique([v])));
        TreePartition::new(RootedTree::from_parents(&parents).unwrap(), bags)
    }

    fn honest_partition(&self) -> TreePartition {
        build_tree_partition(self.g).unwrap_or_else(|_| best_effort_partition(self.g))
    }

    /// The honest (or best-effort) partition after one local edit: swapping
    /// two vertices between bags, moving a vertex to another bag, or hanging a
    /// subtree under a different node.
    fn perturbed_partition(&mut self) -> TreePartition {
        let tp = self.honest_partition();
        let t = tp.tree.len();
        let mut roles: Vec<Vec<Vertex>> = tp.bags.iter().map(|b| b.members().to_vec()).collect();
        let mut is_p3: Vec<bool> = tp.bags.iter().map(|b| matches!(b, Bag::P3(_))).collect();
        let mut parents: Vec<Option<usize>> = (0..t).map(|s| tp.tree.parent(s)).collect();
        match self.rng.gen_range(0..3) {
            0 if t > 1 => {
                let a = self.rng.gen_range(0..t);
                let b = (a + self.rng.gen_range(1..t)) % t;
                let (i, j) = (self.rng.gen_range(0..roles[a].len()), self.rng.gen_range(0..roles[b].len()));
                let x = roles[a][i];
                roles[a][i] = roles[b][j];
                roles[b][j] = x;
            }
            1 if t > 1 => {
                let from = self.rng.gen_range(0..t);
                if roles[from].len() > 1 {
                    let to = (from + self.rng.gen_range(1..t)) % t;
                    let i = self.rng.gen_range(0..roles[from].len());
                    let v = roles[from].remove(i);
                    roles[to].push(v);
                    is_p3[from] = false;
                    is_p3[to] = false;
                }
            }
            _ if t > 1 => {
                let x = self.rng.gen_range(1..t);
                let below = tp.tree.subtree(x);
                let options: Vec<usize> = (0..t).filter(|y| !below.contains(y)).collect();
                parents[x] = Some(*options.choose(&mut self.rng).unwrap());
            }
            _ => {}
        }
        let bags = roles
            .iter()
            .zip(&is_p3)
            .map(|(m, &p3)| if p3 { Bag::p3(m[0], m[1], m[2]) } else { Bag::clique(m.iter().copied()) })
            .collect();
        TreePartition::new(RootedTree::from_parents(&parents).expect("edits keep a tree"), bags).to_preorder()
    }

    fn lying_pieces(&mut self) -> CertificateAssignment {
        let mut parts = self.honest.clone();
        let edits = self.rng.gen_range(1..=2);
        for _ in 0..edits {
            self.edit_pieces(&mut parts);
        }
        pack(&parts, self.n)
    }

    fn altered_row(&mut self, owner: Vertex, row: &VertexSet) -> VertexSet {
        let mut row = row.clone();
        if self.n < 2 {
            return row;
        }
        for _ in 0..self.rng.gen_range(1..=2) {
            let v = (owner + self.rng.gen_range(1..self.n) - 1) % self.n + 1;
            let has = row.contains(v);
            row.set(v, !has);
        }
        row
    }

    fn edit_pieces(&mut self, parts: &mut [EncodedCertificate]) {
        let holder = self.rng.gen_range(0..parts.len());
        match self.rng.gen_range(0..4) {
            // the same false row in every certificate carrying that owner
            0 | 1 => {
                let Some(piece) = parts[holder].pieces.choose(&mut self.rng) else {
                    return;
                };
                let owner = piece.owner;
                let lie = self.altered_row(owner, &piece.row.clone());
                let everywhere = self.rng.gen_bool(0.5);
                for (i, c) in parts.iter_mut().enumerate() {
                    if everywhere || i == holder {
                        for p in c.pieces.iter_mut().filter(|p| p.owner == owner) {
                            p.row = lie.clone();
                        }
                    }
                }
            }
            2 => {
                let pieces = &mut parts[holder].pieces;
                if pieces.len() > 1 {
                    let i = self.rng.gen_range(0..pieces.len());
                    pieces.remove(i);
                }
            }
            _ => {
                let owner = self.rng.gen_range(1..=self.n);
                if parts[holder].piece(owner).is_some() {
                    return;
                }
                let truth = self.g.neighbors(owner).clone();
                let row = if self.rng.gen_bool(0.5) { truth } else { self.altered_row(owner, &truth) };
                let pieces = &mut parts[holder].pieces;
                let at = pieces.partition_point(|p| p.owner < owner);
                pieces.insert(at, NeighborhoodRow { owner, row });
            }
        }
    }

    fn rejections(&self, certs: &CertificateAssignment) -> usize {
        run(self.g, &P5Scheme, Some(certs)).map_or(self.n, |r| r.rejections())
    }

    /// Starts from a random other strategy's assignment and takes the best
    /// of `candidates` single-bit or lockstep flips per step, ties included.
    fn greedy(&mut self, steps: usize, candidates: usize) -> CertificateAssignment {
        let start = match self.rng.gen_range(0..4) {
            0 => AdversaryKind::Bitflip { max_flips: 1 },
            1 => AdversaryKind::WrongGraph,
            2 => AdversaryKind::LyingPartition,
            _ => AdversaryKind::LyingPieces,
        };
        let mut best = self.trial(start);
        let mut score = self.rejections(&best);
        for _ in 0..steps {
            if score == 0 {
                break;
            }
            let mut round: Option<(usize, CertificateAssignment)> = None;
            for _ in 0..candidates.max(1) {
                let mut c = best.clone();
                if self.rng.gen_bool(0.3) {
                    self.flip_common_bit(&mut c);
                } else {
                    self.flip_random_bit(&mut c);
                }
                let s = self.rejections(&c);
                if round.as_ref().is_none_or(|(r, _)| s < *r) {
                    round = Some((s, c));
                }
            }
            let (s, c) = round.unwrap();
            if s <= score {
                score = s;
                best = c;
            }
        }
        best
    }
}
