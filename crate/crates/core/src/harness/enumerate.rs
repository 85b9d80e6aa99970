use thiserror::Error;

use crate::graph::{Graph, Vertex};

pub const MAX_ENUMERATION_N: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("TooLarge: exhaustive enumeration supports n <= {MAX_ENUMERATION_N}, got {0}")]
pub struct TooLarge(pub usize);

/// Every connected labeled graph on `1..=n`. Graph number `mask` has pair
/// `i` (pairs in lexicographic order) as an edge iff bit `i` of `mask` is set;
/// graphs come in increasing `mask` order.
pub fn enumerate_connected_graphs(n: usize) -> Result<impl Iterator<Item = Graph>, TooLarge> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return Err(TooLarge(n));
    }
    let pairs: Vec<(Vertex, Vertex)> = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
    let total = 1u32 << pairs.len();
    Ok((0..total).filter_map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        let g = Graph::new(n, edges).expect("pairs are in range");
        g.is_connected().then_some(g)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }

    /// Counts masks whose union-find sweep leaves a single class.
    fn union_find_count(n: usize) -> usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        (0u32..1 << pairs.len())
            .filter(|mask| {
                let mut parent: Vec<usize> = (0..n).collect();
                let mut classes = n;
                for (i, &(u, v)) in pairs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                        if a != b {
                            parent[a] = b;
                            classes -= 1;
                        }
                    }
                }
                classes == 1
            })
            .count()
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_connected_graphs(1).unwrap().count(), 1);
        assert_eq!(enumerate_connected_graphs(2).unwrap().count(), 1);
        let three: Vec<Graph> = enumerate_connected_graphs(3).unwrap().collect();
        assert_eq!(three.len(), 4);
        assert_eq!(three.iter().filter(|g| g.edge_count() == 2).count(), 3);
        for n in 4..=5 {
            assert_eq!(enumerate_connected_graphs(n).unwrap().count(), union_find_count(n));
        }
        assert_eq!(union_find_count(5), 728);
    }

    #[test]
    fn too_large() {
        assert_eq!(enumerate_connected_graphs(7).err(), Some(TooLarge(7)));
        assert!(enumerate_connected_graphs(0).is_err());
    }

    #[test]
    fn deterministic_order() {
        let a: Vec<Graph> = enumerate_connected_graphs(4).unwrap().collect();
        let b: Vec<Graph> = enumerate_connected_graphs(4).unwrap().collect();
        assert_eq!(a, b);
        assert_eq!(a[0], Graph::new(4, [(1, 2), (1, 3), (1, 4)]).unwrap());
        assert_eq!(a.last().unwrap(), &Graph::complete(4));
    }
}
