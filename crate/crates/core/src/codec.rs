//! Bit-exact certificate encoding.
//!
//! All integers are packed most-significant-bit first on fixed widths derived
//! from `n`. With `w = id_width(n) = ceil(log2(n + 1))`:
//!
//! * tree: depth-first walk from the root, `0` per downward edge and `1` per
//!   upward edge (`2(t - 1)` bits for `t` nodes);
//! * partitioning block: tree bits, a terminating `1`, then per node in
//!   preorder a kind bit (`0` clique, `1` P3), the member count on `w` bits
//!   and the member ids on `w` bits each (cliques ascending, P3s in path
//!   order with the lower-id endpoint first);
//! * certificate: `n` neighbor bits, the partitioning length on
//!   [`partitioning_len_width`] bits, the partitioning block, the pieces
//!   count on `w` bits, then per entry the owner id on `w` bits and its
//!   `n`-bit neighborhood row.

use std::fmt;

use bitvec::prelude::*;
use thiserror::Error;

use crate::graph::{Vertex, VertexSet};
use crate::treepart::{Bag, Node, RootedTree, TreePartition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("MalformedTreeEncoding: {0}")]
    MalformedTreeEncoding(String),
    #[error("MalformedPartitioning: {0}")]
    MalformedPartitioning(String),
    #[error("MalformedCertificate: {0}")]
    MalformedCertificate(String),
}

/// Sequence of bits, appended left to right.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString(BitVec<u8, Msb0>);

impl BitString {
    pub fn new() -> Self {
        BitString(BitVec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_uint(&mut self, value: u64, width: usize) {
        debug_assert!(width == 64 || value < 1u64 << width, "{value} does not fit in {width} bits");
        for i in (0..width).rev() {
            self.0.push(value >> i & 1 == 1);
        }
    }

    pub fn append(&mut self, other: &BitString) {
        self.0.extend_from_bitslice(&other.0);
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).map(|b| *b)
    }

    pub fn flip(&mut self, i: usize) {
        let bit = self.0[i];
        self.0.set(i, !bit);
    }

    pub fn truncate(&mut self, len: usize) {
        self.0.truncate(len);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().by_vals()
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader { bits: &self.0, pos: 0 }
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_bits_str(s: &str) -> Option<BitString> {
        let mut b = BitString::new();
        for c in s.chars() {
            match c {
                '0' => b.push(false),
                '1' => b.push(true),
                _ => return None,
            }
        }
        Some(b)
    }

    /// Lowercase hex of the bits padded with zeros to a byte boundary.
    pub fn to_hex(&self) -> String {
        let mut v = self.0.clone();
        v.set_uninitialized(false);
        v.as_raw_slice().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Inverse of [`BitString::to_hex`]; the padding bits must be zero.
    pub fn from_hex(hex: &str, bit_len: usize) -> Option<BitString> {
        if hex.len() != bit_len.div_ceil(8) * 2 {
            return None;
        }
        let bytes = (0..hex.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(hex.get(i..i + 2)?, 16).ok())
            .collect::<Option<Vec<u8>>>()?;
        let mut bits = BitVec::<u8, Msb0>::from_vec(bytes);
        if bits[bit_len..].any() {
            return None;
        }
        bits.truncate(bit_len);
        Some(BitString(bits))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

pub struct BitReader<'a> {
    bits: &'a BitSlice<u8, Msb0>,
    pos: usize,
}

impl BitReader<'_> {
    pub fn read_bit(&mut self) -> Option<bool> {
        let bit = self.bits.get(self.pos).map(|b| *b)?;
        self.pos += 1;
        Some(bit)
    }

    pub fn read_uint(&mut self, width: usize) -> Option<u64> {
        if self.remaining() < width {
            return None;
        }
        let mut value = 0u64;
        for _ in 0..width {
            value = value << 1 | self.read_bit()? as u64;
        }
        Some(value)
    }

    pub fn read_bits(&mut self, len: usize) -> Option<BitString> {
        if self.remaining() < len {
            return None;
        }
        let out = BitString(self.bits[self.pos..self.pos + len].to_bitvec());
        self.pos += len;
        Some(out)
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }
}

/// `ceil(log2(n + 1))`: bits needed to write any id in `0..=n`.
pub fn id_width(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

/// Longest possible partitioning block for `n` vertices (at most `n` nodes).
pub fn max_partitioning_len(n: usize) -> usize {
    let w = id_width(n);
    2 * n.saturating_sub(1) + 1 + n * (1 + w) + n * w
}

/// Width of the partitioning length field: `2 * id_width(n)`, widened for
/// the few small `n` where that cannot hold [`max_partitioning_len`].
pub fn partitioning_len_width(n: usize) -> usize {
    (2 * id_width(n)).max(id_width(max_partitioning_len(n)))
}

pub fn encode_tree(t: &RootedTree) -> BitString {
    let mut out = BitString::new();
    // explicit stack of (node, next child index)
    let mut stack: Vec<(Node, usize)> = vec![(t.root(), 0)];
    while let Some((node, i)) = stack.last_mut() {
        let children = t.children(*node);
        if *i < children.len() {
            let child = children[*i];
            *i += 1;
            out.push(false);
            stack.push((child, 0));
        } else {
            stack.pop();
            if !stack.is_empty() {
                out.push(true);
            }
        }
    }
    out
}

/// Strict inverse of [`encode_tree`]; the result is numbered in preorder.
pub fn decode_tree(b: &BitString) -> Result<RootedTree, CodecError> {
    let mut reader = b.reader();
    let tree = read_tree(&mut reader, false)?;
    Ok(tree)
}

// With `terminated`, a `1` read at the root ends the tree; otherwise the
// input must be exhausted exactly at the root.
fn read_tree(reader: &mut BitReader<'_>, terminated: bool) -> Result<RootedTree, CodecError> {
    let malformed = |m: &str| CodecError::MalformedTreeEncoding(m.to_string());
    let mut children: Vec<Vec<Node>> = vec![Vec::new()];
    let mut path = vec![0];
    loop {
        let bit = if terminated {
            reader.read_bit().ok_or_else(|| malformed("missing tree terminator"))?
        } else {
            match reader.read_bit() {
                Some(bit) => bit,
                None if path.len() == 1 => break,
                None => return Err(malformed("more downward than upward edges")),
            }
        };
        if bit {
            if path.len() == 1 {
                if terminated {
                    break;
                }
                return Err(malformed("upward edge above the root"));
            }
            path.pop();
        } else {
            let node = children.len();
            children.push(Vec::new());
            children[*path.last().unwrap()].push(node);
            path.push(node);
        }
    }
    RootedTree::from_children(children, 0).map_err(|e| malformed(&e.to_string()))
}

pub fn encode_partitioning(tp: &TreePartition, n: usize) -> BitString {
    let w = id_width(n);
    let mut out = encode_tree(&tp.tree);
    out.push(true);
    for node in tp.tree.preorder() {
        let bag = tp.bag(node);
        out.push(matches!(bag, Bag::P3(_)));
        out.push_uint(bag.len() as u64, w);
        for &v in bag.members() {
            out.push_uint(v as u64, w);
        }
    }
    out
}

/// Structural inverse of [`encode_partitioning`]: checks well-formedness and
/// that the bags partition `1..=n`, not validity against any graph.
pub fn decode_partitioning(b: &BitString, n: usize) -> Result<TreePartition, CodecError> {
    let malformed = |m: String| CodecError::MalformedPartitioning(m);
    let w = id_width(n);
    let mut reader = b.reader();
    let tree = read_tree(&mut reader, true).map_err(|e| malformed(e.to_string()))?;
    if tree.len() > n {
        return Err(malformed(format!("{} tree nodes for {n} vertices", tree.len())));
    }
    let mut seen = VertexSet::new(n);
    let mut bags = Vec::with_capacity(tree.len());
    for node in 0..tree.len() {
        let short = || malformed(format!("short read in bag of node {node}"));
        let is_p3 = reader.read_bit().ok_or_else(short)?;
        let count = reader.read_uint(w).ok_or_else(short)? as usize;
        if count == 0 {
            return Err(malformed(format!("empty bag at node {node}")));
        }
        if is_p3 && count != 3 {
            return Err(malformed(format!("P3 bag of size {count} at node {node}")));
        }
        let mut members = Vec::with_capacity(count);
        for _ in 0..count {
            let v = reader.read_uint(w).ok_or_else(short)? as usize;
            if v == 0 || v > n {
                return Err(malformed(format!("vertex id {v} out of range")));
            }
            if !seen.insert(v) {
                return Err(malformed(format!("vertex {v} in two bags")));
            }
            members.push(v);
        }
        let bag = if is_p3 {
            if members[0] > members[2] {
                return Err(malformed(format!("P3 endpoints out of order at node {node}")));
            }
            Bag::P3([members[0], members[1], members[2]])
        } else {
            if members.windows(2).any(|p| p[0] >= p[1]) {
                return Err(malformed(format!("clique members not ascending at node {node}")));
            }
            Bag::Clique(members)
        };
        bags.push(bag);
    }
    if reader.remaining() != 0 {
        return Err(malformed(format!("{} trailing bits", reader.remaining())));
    }
    if seen.len() != n {
        return Err(malformed(format!("vertex {} in no bag", seen.complement().first().unwrap())));
    }
    Ok(TreePartition::new(tree, bags))
}

/// Claimed neighborhood of `owner` as an `n`-bit row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NeighborhoodRow {
    pub owner: Vertex,
    pub row: VertexSet,
}

/// The three certificate parts before bit packing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedCertificate {
    pub neighbors: VertexSet,
    pub partitioning: BitString,
    pub pieces: Vec<NeighborhoodRow>,
}

impl EncodedCertificate {
    pub fn piece(&self, owner: Vertex) -> Option<&VertexSet> {
        self.pieces.iter().find(|p| p.owner == owner).map(|p| &p.row)
    }

    /// Bit length of the packed certificate.
    pub fn encoded_len(&self, n: usize) -> usize {
        let w = id_width(n);
        n + partitioning_len_width(n) + self.partitioning.len() + w + self.pieces.len() * (w + n)
    }
}

fn push_row(out: &mut BitString, row: &VertexSet, n: usize) {
    for v in 1..=n {
        out.push(row.contains(v));
    }
}

fn read_row(reader: &mut BitReader<'_>, n: usize) -> Option<VertexSet> {
    let mut row = VertexSet::new(n);
    for v in 1..=n {
        if reader.read_bit()? {
            row.insert(v);
        }
    }
    Some(row)
}

pub fn encode_certificate(c: &EncodedCertificate, n: usize) -> BitString {
    let w = id_width(n);
    let mut out = BitString::new();
    push_row(&mut out, &c.neighbors, n);
    out.push_uint(c.partitioning.len() as u64, partitioning_len_width(n));
    out.append(&c.partitioning);
    out.push_uint(c.pieces.len() as u64, w);
    for piece in &c.pieces {
        out.push_uint(piece.owner as u64, w);
        push_row(&mut out, &piece.row, n);
    }
    out
}

/// Strict inverse of [`encode_certificate`]. Pieces owners must be distinct
/// ids in `1..=n` whose rows do not contain the owner itself.
pub fn decode_certificate(b: &BitString, n: usize) -> Result<EncodedCertificate, CodecError> {
    let malformed = |m: &str| CodecError::MalformedCertificate(m.to_string());
    let w = id_width(n);
    let mut reader = b.reader();
    let neighbors = read_row(&mut reader, n).ok_or_else(|| malformed("short neighbors part"))?;
    let part_len = reader
        .read_uint(partitioning_len_width(n))
        .ok_or_else(|| malformed("short partitioning length"))? as usize;
    let partitioning = reader
        .read_bits(part_len)
        .ok_or_else(|| malformed("short partitioning part"))?;
    let count = reader.read_uint(w).ok_or_else(|| malformed("short pieces count"))? as usize;
    let mut owners = VertexSet::new(n);
    let mut pieces = Vec::with_capacity(count);
    for _ in 0..count {
        let owner = reader.read_uint(w).ok_or_else(|| malformed("short pieces owner"))? as usize;
        if owner == 0 || owner > n {
            return Err(malformed(&format!("pieces owner {owner} out of range")));
        }
        if !owners.insert(owner) {
            return Err(malformed(&format!("pieces owner {owner} repeated")));
        }
        let row = read_row(&mut reader, n).ok_or_else(|| malformed("short pieces row"))?;
        if row.contains(owner) {
            return Err(malformed(&format!("pieces row of {owner} has a loop")));
        }
        pieces.push(NeighborhoodRow { owner, row });
    }
    if reader.remaining() != 0 {
        return Err(malformed(&format!("{} trailing bits", reader.remaining())));
    }
    Ok(EncodedCertificate {
        neighbors,
        partitioning,
        pieces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::treepart::build_tree_partition;

    fn bits(s: &str) -> BitString {
        BitString::from_bits_str(s).unwrap()
    }

    /// Root with children A, B, C; A has one child; C has children C1, C2
    /// and C1 has two children.
    pub(crate) fn figure_tree() -> RootedTree {
        RootedTree::from_parents(&[None, Some(0), Some(1), Some(0), Some(0), Some(4), Some(5), Some(5), Some(4)])
            .unwrap()
    }

    #[test]
    fn figure_tree_encoding() {
        let t = figure_tree();
        assert_eq!(encode_tree(&t).to_string(), "0011010001011011");
        let decoded = decode_tree(&bits("0011010001011011")).unwrap();
        assert_eq!(decoded.len(), 9);
        assert_eq!(decoded.children(decoded.root()).len(), 3);
        assert_eq!(decoded, t);
    }

    #[test]
    fn small_trees() {
        assert!(encode_tree(&RootedTree::singleton()).is_empty());
        assert_eq!(decode_tree(&BitString::new()).unwrap(), RootedTree::singleton());
        let chain = RootedTree::from_parents(&[None, Some(0), Some(1)]).unwrap();
        assert_eq!(encode_tree(&chain).to_string(), "0011");
        for bad in ["011", "1", "0", "0110", "10"] {
            assert!(matches!(decode_tree(&bits(bad)), Err(CodecError::MalformedTreeEncoding(_))), "{bad}");
        }
    }

    #[test]
    fn widths() {
        assert_eq!(id_width(1), 1);
        assert_eq!(id_width(3), 2);
        assert_eq!(id_width(4), 3);
        assert_eq!(id_width(5), 3);
        assert_eq!(id_width(1024), 11);
        for n in 1..5000 {
            assert!(max_partitioning_len(n) < 1 << partitioning_len_width(n));
        }
        let widened: Vec<usize> = (1..5000).filter(|&n| partitioning_len_width(n) != 2 * id_width(n)).collect();
        assert_eq!(widened, vec![1, 3]);
    }

    #[test]
    fn root_only_partitioning() {
        let tp = TreePartition::new(RootedTree::singleton(), vec![Bag::clique([1])]);
        let b = encode_partitioning(&tp, 1);
        // terminator, kind 0, count 1, id 1
        assert_eq!(b.to_string(), "1011");
        assert_eq!(decode_partitioning(&b, 1).unwrap(), tp);
    }

    #[test]
    fn p5_partitioning_golden() {
        let tp = build_tree_partition(&Graph::path(5)).unwrap();
        // tree 0101, terminator 1, P3 bag 1|011|010 011 100, {1}: 0|001|001, {5}: 0|001|101
        let golden = "0101".to_string() + "1" + "1011010011100" + "0001001" + "0001101";
        assert_eq!(encode_partitioning(&tp, 5).to_string(), golden);
        assert_eq!(decode_partitioning(&bits(&golden), 5).unwrap(), tp);
    }

    fn cat(parts: &[&str]) -> BitString {
        bits(&parts.concat())
    }

    #[test]
    fn malformed_partitionings() {
        let is_malformed = |b: BitString, n| matches!(decode_partitioning(&b, n), Err(CodecError::MalformedPartitioning(_)));
        // zero count
        assert!(is_malformed(cat(&["1", "0", "0"]), 1));
        // n=3, w=2: two bags both containing 3
        let dup = decode_partitioning(&cat(&["01", "1", "0", "01", "11", "0", "01", "11"]), 3);
        assert!(matches!(dup, Err(CodecError::MalformedPartitioning(m)) if m.contains("two bags")));
        // trailing bit
        assert!(is_malformed(cat(&["1", "0", "1", "1", "0"]), 1));
        // n=2, w=2: id 3 out of range
        assert!(is_malformed(cat(&["1", "0", "01", "11"]), 2));
        // vertex 2 in no bag
        assert!(is_malformed(cat(&["1", "0", "01", "01"]), 2));
        // P3 flag on a two-member bag
        assert!(is_malformed(cat(&["1", "1", "10", "01", "10"]), 2));
        // clique listed descending
        assert!(is_malformed(cat(&["1", "0", "10", "10", "01"]), 2));
        // missing terminator
        assert!(is_malformed(cat(&["01"]), 2));
    }

    #[test]
    fn n1_certificate_golden() {
        let tp = TreePartition::new(RootedTree::singleton(), vec![Bag::clique([1])]);
        let cert = EncodedCertificate {
            neighbors: VertexSet::new(1),
            partitioning: encode_partitioning(&tp, 1),
            pieces: vec![NeighborhoodRow {
                owner: 1,
                row: VertexSet::new(1),
            }],
        };
        // neighbors 0 | length 4 on 3 bits | 1011 | count 1 | owner 1, row 0
        let b = encode_certificate(&cert, 1);
        assert_eq!(b, cat(&["0", "100", "1011", "1", "1", "0"]));
        assert_eq!(b.len(), cert.encoded_len(1));
        assert_eq!(decode_certificate(&b, 1).unwrap(), cert);
        let mut cut = b.clone();
        cut.truncate(b.len() - 1);
        assert!(matches!(decode_certificate(&cut, 1), Err(CodecError::MalformedCertificate(_))));
    }

    #[test]
    fn certificate_rejects_bad_pieces() {
        let n = 3;
        let base = EncodedCertificate {
            neighbors: VertexSet::from_vertices(n, [2]),
            partitioning: bits("01"),
            pieces: vec![
                NeighborhoodRow { owner: 1, row: VertexSet::from_vertices(n, [2]) },
                NeighborhoodRow { owner: 1, row: VertexSet::from_vertices(n, [2]) },
            ],
        };
        assert!(decode_certificate(&encode_certificate(&base, n), n).is_err());
        let looped = EncodedCertificate {
            pieces: vec![NeighborhoodRow { owner: 2, row: VertexSet::from_vertices(n, [2]) }],
            ..base.clone()
        };
        assert!(decode_certificate(&encode_certificate(&looped, n), n).is_err());
        let mut trailing = encode_certificate(&EncodedCertificate { pieces: vec![], ..base }, n);
        trailing.push(false);
        assert!(decode_certificate(&trailing, n).is_err());
    }

    #[test]
    fn hex_round_trip() {
        let b = bits("0100101111");
        assert_eq!(b.to_hex(), "4bc0");
        assert_eq!(BitString::from_hex("4bc0", 10), Some(b));
        assert_eq!(BitString::from_hex("4bc1", 10), None);
        assert_eq!(BitString::from_hex("4b", 10), None);
        assert_eq!(BitString::from_hex("", 0), Some(BitString::new()));
    }
}
