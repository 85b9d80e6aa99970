use std::collections::BTreeSet;

use proptest::prelude::*;

use p5cert::codec::{decode_certificate, decode_tree, encode_tree};
use p5cert::framework::run;
use p5cert::harness::{generate, Family, GeneratorSpec};
use p5cert::p5::{
    ceil_sqrt, certificates_for_partition, find_known_induced_p5, is_big_clique, pack, pieces_for, prove, KnowledgeMap,
    PairStatus, Source,
};
use p5cert::{
    build_tree_partition, validate_tree_partition, Bag, Graph, P5Scheme, RootedTree, TreePartition, Vertex, VertexSet,
};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v)));
            Graph::new(n, pairs.zip(bits).filter(|&(_, b)| b).map(|(e, _)| e)).unwrap()
        })
    })
}

fn tree_strategy() -> impl Strategy<Value = RootedTree> {
    proptest::collection::vec(any::<prop::sample::Index>(), 0..40).prop_map(|picks| {
        let mut parents = vec![None];
        for (i, p) in picks.iter().enumerate() {
            parents.push(Some(p.index(i + 1)));
        }
        RootedTree::from_parents(&parents).unwrap()
    })
}

fn p5free_strategy() -> impl Strategy<Value = Graph> {
    (
        prop::sample::select(vec![Family::Cograph, Family::Split, Family::P5freeRepair]),
        1usize..40,
        0.1f64..0.9,
        any::<u64>(),
    )
        .prop_map(|(family, n, p, seed)| generate(&GeneratorSpec { family, n, p, seed }).unwrap().graph)
}

fn naive_known_p5(km: &KnowledgeMap) -> bool {
    let n = km.n();
    let known_path = |p: &[Vertex]| {
        (0..5).all(|i| {
            (i + 1..5).all(|j| {
                let want = if j == i + 1 { PairStatus::Edge } else { PairStatus::NonEdge };
                km.status(p[i], p[j]) == want
            })
        })
    };
    let mut p = [0; 5];
    fn rec(depth: usize, n: usize, p: &mut [Vertex; 5], ok: &dyn Fn(&[Vertex]) -> bool) -> bool {
        if depth == 5 {
            return ok(p);
        }
        for v in 1..=n {
            if !p[..depth].contains(&v) {
                p[depth] = v;
                if rec(depth + 1, n, p, ok) {
                    return true;
                }
            }
        }
        false
    }
    rec(0, n, &mut p, &known_path)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn vertex_set_matches_a_btree_model(
        n in 1usize..130,
        a in proptest::collection::vec(any::<prop::sample::Index>(), 0..60),
        b in proptest::collection::vec(any::<prop::sample::Index>(), 0..60),
    ) {
        let ma: BTreeSet<Vertex> = a.iter().map(|i| i.index(n) + 1).collect();
        let mb: BTreeSet<Vertex> = b.iter().map(|i| i.index(n) + 1).collect();
        let sa = VertexSet::from_vertices(n, ma.iter().copied());
        let sb = VertexSet::from_vertices(n, mb.iter().copied());
        prop_assert_eq!(sa.iter().collect::<Vec<_>>(), ma.iter().copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.len(), ma.len());

        let mut u = sa.clone();
        u.union_with(&sb);
        prop_assert_eq!(u.iter().collect::<BTreeSet<_>>(), &ma | &mb);
        let mut i = sa.clone();
        i.intersect_with(&sb);
        prop_assert_eq!(i.iter().collect::<BTreeSet<_>>(), &ma & &mb);
        let mut d = sa.clone();
        d.difference_with(&sb);
        prop_assert_eq!(d.iter().collect::<BTreeSet<_>>(), &ma - &mb);
        prop_assert_eq!(sa.complement().len(), n - ma.len());
        prop_assert_eq!(sa.is_subset(&sb), ma.is_subset(&mb));
        prop_assert_eq!(sa.intersects(&sb), !ma.is_disjoint(&mb));
    }

    #[test]
    fn graph_text_round_trips(g in graph_strategy(12)) {
        prop_assert_eq!(g.to_text().parse::<Graph>().unwrap(), g);
    }

    #[test]
    fn tree_code_round_trips(t in tree_strategy()) {
        let code = encode_tree(&t);
        prop_assert_eq!(code.len(), 2 * (t.len() - 1));
        prop_assert_eq!(decode_tree(&code).unwrap(), t.to_preorder());
    }

    #[test]
    fn honest_certificates_decode_to_their_parts(g in p5free_strategy()) {
        let tp = build_tree_partition(&g).unwrap();
        let parts = certificates_for_partition(&g, &tp);
        let certs = prove(&g).unwrap();
        for (v, bits) in certs.iter() {
            prop_assert_eq!(&decode_certificate(bits, g.n()).unwrap(), &parts[v - 1]);
        }
        prop_assert!(run(&g, &P5Scheme, Some(&certs)).unwrap().all_accept);
    }

    #[test]
    fn a_single_flipped_bit_is_noticed(g in p5free_strategy(), v in any::<prop::sample::Index>(), i in any::<prop::sample::Index>()) {
        prop_assume!(g.n() >= 2);
        let mut certs = prove(&g).unwrap();
        let v = v.index(g.n()) + 1;
        let cert = certs.get_mut(v).unwrap();
        cert.flip(i.index(cert.len()));
        prop_assert!(!run(&g, &P5Scheme, Some(&certs)).unwrap().all_accept);
    }

    #[test]
    fn known_p5_search_matches_brute_force(g in graph_strategy(8), known in proptest::collection::vec(any::<bool>(), 28)) {
        let mut km = KnowledgeMap::new(g.n());
        let mut k = known.iter().cycle();
        for u in g.vertices() {
            for v in u + 1..=g.n() {
                if *k.next().unwrap() {
                    km.merge_pair(u, v, g.has_edge(u, v), Source::NeighborRow).unwrap();
                }
            }
        }
        let found = find_known_induced_p5(&km);
        prop_assert_eq!(found.is_some(), naive_known_p5(&km));
        if let Some(p) = found {
            for i in 0..5 {
                for j in i + 1..5 {
                    prop_assert_eq!(g.has_edge(p[i], p[j]), j == i + 1);
                }
            }
        }
    }
}

/// A split graph on `n` vertices whose first `k` vertices form a clique, with
/// each later vertex attached to a non-empty subset of the clique, partitioned
/// as the clique over singleton leaves.
fn big_clique_instance(n: usize, k: usize, attach: &[Vec<bool>]) -> (Graph, TreePartition) {
    let mut edges: Vec<(Vertex, Vertex)> = (1..=k).flat_map(|u| (u + 1..=k).map(move |v| (u, v))).collect();
    for (x, mask) in (k + 1..=n).zip(attach) {
        let mut any = false;
        for (c, &b) in (1..=k).zip(mask) {
            if b {
                edges.push((c, x));
                any = true;
            }
        }
        if !any {
            edges.push((1, x));
        }
    }
    let g = Graph::new(n, edges).unwrap();
    let parents: Vec<Option<usize>> = std::iter::once(None).chain((k + 1..=n).map(|_| Some(0))).collect();
    let bags = std::iter::once(Bag::clique(1..=k)).chain((k + 1..=n).map(|x| Bag::clique([x]))).collect();
    (g, TreePartition::new(RootedTree::from_parents(&parents).unwrap(), bags))
}

fn big_clique_strategy() -> impl Strategy<Value = (Graph, TreePartition)> {
    (4usize..60)
        .prop_flat_map(|n| (Just(n), ceil_sqrt(n) + 1..=n))
        .prop_flat_map(|(n, k)| {
            let attach = proptest::collection::vec(proptest::collection::vec(any::<bool>(), k), n - k);
            (Just(n), Just(k), attach)
        })
        .prop_map(|(n, k, attach)| big_clique_instance(n, k, &attach))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Members of a big clique hold their own row plus a round-robin share, so
    /// every other row of the subtree is held exactly once.
    #[test]
    fn big_clique_pieces_cover_the_subtree((g, tp) in big_clique_strategy()) {
        let n = g.n();
        prop_assert!(validate_tree_partition(&g, &tp).is_ok());
        let bag = tp.bag(0);
        prop_assert!(is_big_clique(bag, n));
        let mut held = vec![0usize; n + 1];
        let mut shares = Vec::new();
        for &m in bag.members() {
            let rows = pieces_for(&g, &tp, 0, m).unwrap();
            prop_assert_eq!(rows[0].owner, m);
            shares.push(rows.len() - 1);
            for r in &rows {
                prop_assert_eq!(&r.row, g.neighbors(r.owner));
                held[r.owner] += 1;
            }
        }
        for v in g.vertices() {
            let limit = if bag.contains(v) { 2 } else { 1 };
            prop_assert!((1..=limit).contains(&held[v]), "vertex {} held {} times", v, held[v]);
        }
        let (lo, hi) = (shares.iter().min().unwrap(), shares.iter().max().unwrap());
        prop_assert!(hi - lo <= 2, "shares {:?}", shares);

        let certs = pack(&certificates_for_partition(&g, &tp), n);
        prop_assert!(run(&g, &P5Scheme, Some(&certs)).unwrap().all_accept);
    }
}
