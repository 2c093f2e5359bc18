//! Block decompositions of quivers and their assembly into triangulations.
//!
//! A decomposition places copies of the six blocks on the vertices so that the signed
//! sum of their arrows is the exchange matrix. Outlet slots may be shared by two
//! blocks; every other slot owns its vertex.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quiver::Quiver;
use crate::triangulation::{ArcId, Side, Triangle, Triangulation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    I,
    II,
    IIIa,
    IIIb,
    IV,
    V,
}

impl BlockKind {
    pub const ALL: [BlockKind; 6] = [BlockKind::II, BlockKind::I, BlockKind::IIIa, BlockKind::IIIb, BlockKind::IV, BlockKind::V];
    pub const BASIC: [BlockKind; 2] = [BlockKind::II, BlockKind::I];

    pub fn arity(self) -> usize {
        self.outlets().len()
    }

    /// Outlet flag per slot.
    pub fn outlets(self) -> &'static [bool] {
        match self {
            BlockKind::I => &[true, true],
            BlockKind::II => &[true, true, true],
            BlockKind::IIIa | BlockKind::IIIb => &[true, false, false],
            BlockKind::IV => &[true, true, false, false],
            BlockKind::V => &[true, false, false, false, false],
        }
    }

    /// Arrows between slots.
    pub fn arrows(self) -> &'static [(usize, usize)] {
        match self {
            BlockKind::I => &[(0, 1)],
            BlockKind::II => &[(0, 1), (1, 2), (2, 0)],
            // slots: x, u1, u2
            BlockKind::IIIa => &[(1, 0), (2, 0)],
            BlockKind::IIIb => &[(0, 1), (0, 2)],
            // slots: L, R, D, U
            BlockKind::IV => &[(0, 2), (2, 1), (1, 0), (0, 3), (3, 1)],
            // slots: X, A, D, B, C
            BlockKind::V => &[(1, 3), (1, 4), (2, 3), (2, 4), (0, 1), (0, 2), (3, 0), (4, 0)],
        }
    }

    /// Slot assignment in a standard form under the block's symmetries.
    fn normal_form(self, v: &[usize]) -> Vec<usize> {
        let mut v = v.to_vec();
        match self {
            BlockKind::II => {
                let r = (0..3).min_by_key(|&r| v[r]).unwrap();
                v.rotate_left(r);
            }
            BlockKind::IIIa | BlockKind::IIIb => v[1..3].sort_unstable(),
            BlockKind::IV => v[2..4].sort_unstable(),
            BlockKind::V => {
                v[1..3].sort_unstable();
                v[3..5].sort_unstable();
            }
            BlockKind::I => {}
        }
        v
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BlockKind::I => "I",
            BlockKind::II => "II",
            BlockKind::IIIa => "IIIa",
            BlockKind::IIIb => "IIIb",
            BlockKind::IV => "IV",
            BlockKind::V => "V",
        };
        f.write_str(s)
    }
}

impl FromStr for BlockKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s.trim() {
            "I" => BlockKind::I,
            "II" => BlockKind::II,
            "IIIa" => BlockKind::IIIa,
            "IIIb" => BlockKind::IIIb,
            "IV" => BlockKind::IV,
            "V" => BlockKind::V,
            other => return Err(format!("unknown block kind `{other}`")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Block {
    pub kind: BlockKind,
    /// Quiver vertex of each slot.
    pub vertices: Vec<usize>,
}

impl Block {
    pub fn new(kind: BlockKind, vertices: Vec<usize>) -> Self {
        assert_eq!(vertices.len(), kind.arity());
        let vertices = kind.normal_form(&vertices);
        Block { kind, vertices }
    }

    pub fn outlet_vertices(&self) -> Vec<usize> {
        self.kind.outlets().iter().zip(&self.vertices).filter(|(o, _)| **o).map(|(_, &v)| v).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockDecomposition {
    /// Sorted, so equal decompositions compare equal.
    pub blocks: Vec<Block>,
}

impl BlockDecomposition {
    pub fn new(mut blocks: Vec<Block>) -> Self {
        blocks.sort();
        BlockDecomposition { blocks }
    }

    pub fn kinds(&self) -> Vec<BlockKind> {
        self.blocks.iter().map(|b| b.kind).collect()
    }

    /// Outlets glued together: `(block, block, vertex)` with the first block index smaller.
    pub fn matching(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.blocks.len() {
            for j in i + 1..self.blocks.len() {
                let oj = self.blocks[j].outlet_vertices();
                for v in self.blocks[i].outlet_vertices() {
                    if oj.contains(&v) {
                        out.push((i, j, v));
                    }
                }
            }
        }
        out
    }

    /// Signed sum of all block arrows on `n` vertices.
    pub fn superposition(&self, n: usize) -> Vec<i64> {
        let mut b = vec![0i64; n * n];
        for blk in &self.blocks {
            for &(s, t) in blk.kind.arrows() {
                let (v, w) = (blk.vertices[s], blk.vertices[t]);
                b[v * n + w] += 1;
                b[w * n + v] -= 1;
            }
        }
        b
    }

    /// Checks slot capacities and that the superposition is the exchange matrix of `q`.
    pub fn reproduces(&self, q: &Quiver) -> bool {
        let n = q.n();
        let mut outlet = vec![0usize; n];
        let mut owned = vec![false; n];
        for blk in &self.blocks {
            let distinct: BTreeSet<_> = blk.vertices.iter().collect();
            if distinct.len() != blk.vertices.len() || blk.vertices.iter().any(|&v| v >= n) {
                return false;
            }
            for (&o, &v) in blk.kind.outlets().iter().zip(&blk.vertices) {
                if o {
                    outlet[v] += 1;
                } else {
                    if owned[v] {
                        return false;
                    }
                    owned[v] = true;
                }
            }
        }
        if (0..n).any(|v| outlet[v] > 2 || (owned[v] && outlet[v] > 0)) {
            return false;
        }
        if n > 1 && (0..n).any(|v| outlet[v] == 0 && !owned[v]) {
            return false;
        }
        self.superposition(n) == q.signed_matrix()
    }

    /// Puzzle pieces for the blocks, caps on outlets used once. Arc ids are vertex indices.
    pub fn to_triangulation(&self, n: usize) -> Triangulation {
        let mut tris = Vec::new();
        let mut seg: u32 = 0;
        let mut fresh = || {
            seg += 1;
            Side::Bdry(seg - 1)
        };
        let a = |v: usize| Side::Arc(v as ArcId);
        let mut uses = vec![0usize; n];
        for blk in &self.blocks {
            let v = &blk.vertices;
            for (&x, &o) in v.iter().zip(blk.kind.outlets()) {
                uses[x] += if o { 1 } else { 2 };
            }
            match blk.kind {
                BlockKind::I => tris.push(Triangle::plain(a(v[0]), a(v[1]), fresh())),
                BlockKind::II => tris.push(Triangle::plain(a(v[0]), a(v[1]), a(v[2]))),
                BlockKind::IIIa => {
                    tris.push(Triangle::self_folded(v[1] as ArcId, v[2] as ArcId));
                    tris.push(Triangle::plain(a(v[1]), a(v[0]), fresh()));
                }
                BlockKind::IIIb => {
                    tris.push(Triangle::self_folded(v[1] as ArcId, v[2] as ArcId));
                    tris.push(Triangle::plain(a(v[0]), a(v[1]), fresh()));
                }
                BlockKind::IV => {
                    tris.push(Triangle::plain(a(v[2]), a(v[1]), a(v[0])));
                    tris.push(Triangle::self_folded(v[2] as ArcId, v[3] as ArcId));
                }
                BlockKind::V => {
                    tris.push(Triangle::plain(a(v[1]), a(v[3]), a(v[0])));
                    tris.push(Triangle::self_folded(v[1] as ArcId, v[2] as ArcId));
                    tris.push(Triangle::self_folded(v[3] as ArcId, v[4] as ArcId));
                }
            }
        }
        for (v, &u) in uses.iter().enumerate() {
            for _ in u..2 {
                tris.push(Triangle::plain(a(v), fresh(), fresh()));
            }
        }
        Triangulation::from_triangles(tris)
    }
}

impl fmt::Display for BlockDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let vs: Vec<String> = b.vertices.iter().map(|v| v.to_string()).collect();
                format!("{}({})", b.kind, vs.join(","))
            })
            .collect();
        if parts.is_empty() {
            f.write_str("(no blocks)")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockError {
    #[error("quiver is not connected")]
    NotConnected,
    #[error("search budget of {0} nodes exhausted")]
    Budget(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_results: usize,
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_results: usize::MAX, max_nodes: 5_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub decompositions: Vec<BlockDecomposition>,
    pub truncated: bool,
    pub nodes: u64,
}

struct Search<'a> {
    n: usize,
    kinds: &'a [BlockKind],
    limits: SearchLimits,
    residual: Vec<i64>,
    outlet_uses: Vec<u8>,
    owned: Vec<bool>,
    placed: Vec<Block>,
    found: BTreeSet<BlockDecomposition>,
    nodes: u64,
    stopped: bool,
}

impl Search<'_> {
    fn r(&self, v: usize, w: usize) -> i64 {
        self.residual[v * self.n + w]
    }

    fn row_zero(&self, v: usize) -> bool {
        (0..self.n).all(|w| self.r(v, w) == 0)
    }

    fn run(&mut self) {
        if self.stopped {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            self.stopped = true;
            return;
        }
        let n = self.n;
        let mut anchor = None;
        let mut best = 0;
        for v in 0..n {
            for w in 0..n {
                let x = self.r(v, w);
                if x > best {
                    best = x;
                    anchor = Some((v, w));
                }
            }
        }
        let Some((i, j)) = anchor else {
            self.found.insert(BlockDecomposition::new(self.placed.clone()));
            if self.found.len() >= self.limits.max_results {
                self.stopped = true;
            }
            return;
        };
        for &kind in self.kinds {
            for &(s, t) in kind.arrows() {
                let mut assign = vec![usize::MAX; kind.arity()];
                assign[s] = i;
                assign[t] = j;
                if !self.slot_fits(kind, s, i) || !self.slot_fits(kind, t, j) {
                    continue;
                }
                self.extend(kind, &mut assign);
                if self.stopped {
                    return;
                }
            }
        }
    }

    fn slot_fits(&self, kind: BlockKind, slot: usize, v: usize) -> bool {
        if self.owned[v] {
            return false;
        }
        if kind.outlets()[slot] {
            self.outlet_uses[v] < 2
        } else {
            self.outlet_uses[v] == 0
        }
    }

    fn extend(&mut self, kind: BlockKind, assign: &mut Vec<usize>) {
        let next = kind.arrows().iter().find_map(|&(s, t)| match (assign[s] != usize::MAX, assign[t] != usize::MAX) {
            (true, false) => Some((t, assign[s], true)),
            (false, true) => Some((s, assign[t], false)),
            _ => None,
        });
        let Some((slot, anchor_v, from_anchor)) = next else {
            self.place(kind, assign);
            return;
        };
        for w in 0..self.n {
            let positive = if from_anchor { self.r(anchor_v, w) > 0 } else { self.r(w, anchor_v) > 0 };
            if !positive || assign.contains(&w) || !self.slot_fits(kind, slot, w) {
                continue;
            }
            assign[slot] = w;
            self.extend(kind, assign);
            assign[slot] = usize::MAX;
            if self.stopped {
                return;
            }
        }
    }

    fn place(&mut self, kind: BlockKind, assign: &[usize]) {
        let n = self.n;
        let outlets = kind.outlets();
        for &(s, t) in kind.arrows() {
            let (v, w) = (assign[s], assign[t]);
            if self.r(v, w) <= 0 {
                let fresh = outlets[s] && outlets[t] && self.outlet_uses[v] == 0 && self.outlet_uses[w] == 0;
                if !fresh {
                    return;
                }
            }
        }
        let saved = self.residual.clone();
        for &(s, t) in kind.arrows() {
            let (v, w) = (assign[s], assign[t]);
            self.residual[v * n + w] -= 1;
            self.residual[w * n + v] += 1;
        }
        for (slot, &v) in assign.iter().enumerate() {
            if outlets[slot] {
                self.outlet_uses[v] += 1;
            } else {
                self.owned[v] = true;
            }
        }
        let ok = assign
            .iter()
            .all(|&v| !(self.owned[v] || self.outlet_uses[v] == 2) || self.row_zero(v));
        if ok {
            self.placed.push(Block::new(kind, assign.to_vec()));
            self.run();
            self.placed.pop();
        }
        for (slot, &v) in assign.iter().enumerate() {
            if outlets[slot] {
                self.outlet_uses[v] -= 1;
            } else {
                self.owned[v] = false;
            }
        }
        self.residual = saved;
    }
}

/// Every block decomposition of `q` using the given kinds, up to `limits`.
pub fn enumerate_decompositions(q: &Quiver, kinds: &[BlockKind], limits: SearchLimits) -> Result<Enumeration, BlockError> {
    if !q.is_connected() {
        return Err(BlockError::NotConnected);
    }
    if q.n() == 1 {
        return Ok(Enumeration { decompositions: vec![BlockDecomposition::new(vec![])], truncated: false, nodes: 1 });
    }
    let mut order: Vec<BlockKind> = BlockKind::ALL.iter().copied().filter(|k| kinds.contains(k)).collect();
    order.dedup();
    let mut s = Search {
        n: q.n(),
        kinds: &order,
        limits,
        residual: q.signed_matrix(),
        outlet_uses: vec![0; q.n()],
        owned: vec![false; q.n()],
        placed: vec![],
        found: BTreeSet::new(),
        nodes: 0,
        stopped: false,
    };
    s.run();
    let truncated = s.stopped;
    let decompositions: Vec<_> = s.found.into_iter().collect();
    debug_assert!(decompositions.iter().all(|d| d.reproduces(q)));
    Ok(Enumeration { decompositions, truncated, nodes: s.nodes })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Uniqueness {
    Unique(BlockDecomposition),
    Multiple(Vec<BlockDecomposition>),
    None,
}

/// Uniqueness over all six kinds.
pub fn is_unique(q: &Quiver, max_nodes: u64) -> Result<Uniqueness, BlockError> {
    let e = enumerate_decompositions(q, &BlockKind::ALL, SearchLimits { max_results: usize::MAX, max_nodes })?;
    if e.truncated {
        return Err(BlockError::Budget(max_nodes));
    }
    let mut d = e.decompositions;
    Ok(match d.len() {
        0 => Uniqueness::None,
        1 => Uniqueness::Unique(d.pop().unwrap()),
        _ => Uniqueness::Multiple(d),
    })
}

/// The 4-vertex quiver with a double arrow `1 => 0` and paths `0 -> 2 -> 1`, `0 -> 3 -> 1`.
pub fn annulus_22_quiver() -> Quiver {
    Quiver::from_arrows(4, &[(1, 0, 2), (0, 2, 1), (0, 3, 1), (2, 1, 1), (3, 1, 1)])
        .unwrap()
        .with_labels(vec!["alpha".into(), "beta".into(), "gamma".into(), "delta".into()])
        .unwrap()
}

/// The 12-arrow quiver shared by all maximal triangulations of the 4-punctured sphere.
pub fn four_punctured_sphere_quiver() -> Quiver {
    // A B C D E F
    let arrows = [
        (0, 3),
        (0, 2),
        (1, 0),
        (1, 4),
        (2, 1),
        (2, 5),
        (3, 1),
        (3, 5),
        (4, 3),
        (4, 2),
        (5, 4),
        (5, 0),
    ];
    let arrows: Vec<_> = arrows.iter().map(|&(i, j)| (i, j, 1)).collect();
    Quiver::from_arrows(6, &arrows)
        .unwrap()
        .with_labels(["A", "B", "C", "D", "E", "F"].iter().map(|s| s.to_string()).collect())
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::SurfaceSig;

    /// All injective slot assignments for every kind on `n` vertices.
    fn all_placements(n: usize) -> Vec<Block> {
        let mut out = Vec::new();
        for kind in BlockKind::ALL {
            let k = kind.arity();
            let mut stack = vec![vec![]];
            while let Some(p) = stack.pop() {
                if p.len() == k {
                    out.push(Block::new(kind, p));
                    continue;
                }
                for v in 0..n {
                    if !p.contains(&v) {
                        let mut q = p.clone();
                        q.push(v);
                        stack.push(q);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Exhaustive oracle: every multiset of placements within vertex capacity that reproduces `q`.
    fn brute_force(q: &Quiver) -> BTreeSet<BlockDecomposition> {
        let n = q.n();
        let placements = all_placements(n);
        let mut out = BTreeSet::new();
        // an outlet uses one of a vertex's two places, any other slot uses both
        fn usage(b: &Block) -> Vec<(usize, u8)> {
            b.vertices.iter().zip(b.kind.outlets()).map(|(&v, &o)| (v, if o { 1 } else { 2 })).collect()
        }
        fn go(q: &Quiver, pl: &[Block], start: usize, used: &mut Vec<u8>, cur: &mut Vec<Block>, out: &mut BTreeSet<BlockDecomposition>) {
            let d = BlockDecomposition::new(cur.clone());
            if !cur.is_empty() && d.reproduces(q) {
                out.insert(d);
            }
            for i in start..pl.len() {
                let u = usage(&pl[i]);
                if u.iter().any(|&(v, c)| used[v] + c > 2) {
                    continue;
                }
                u.iter().for_each(|&(v, c)| used[v] += c);
                cur.push(pl[i].clone());
                go(q, pl, i, used, cur, out);
                cur.pop();
                u.iter().for_each(|&(v, c)| used[v] -= c);
            }
        }
        go(q, &placements, 0, &mut vec![0; n], &mut Vec::new(), &mut out);
        out
    }

    fn search_all(q: &Quiver) -> BTreeSet<BlockDecomposition> {
        enumerate_decompositions(q, &BlockKind::ALL, SearchLimits::default())
            .unwrap()
            .decompositions
            .into_iter()
            .collect()
    }

    #[test]
    fn path_decompositions() {
        // besides two type I blocks, a triangle plus a type I block cancelling one arrow
        let q = Quiver::path(3);
        let found = search_all(&q);
        assert_eq!(found, brute_force(&q));
        let kinds: BTreeSet<Vec<BlockKind>> = found.iter().map(|d| d.kinds()).collect();
        assert_eq!(kinds, BTreeSet::from([vec![BlockKind::I, BlockKind::I], vec![BlockKind::I, BlockKind::II]]));
        for d in &found {
            let t = d.to_triangulation(3);
            assert_eq!(t.exchange_quiver().unwrap().signed_matrix(), q.signed_matrix());
        }
    }

    #[test]
    fn markov_is_two_triangles() {
        let q = Quiver::markov();
        let found = search_all(&q);
        assert_eq!(found, brute_force(&q));
        assert_eq!(found.len(), 1);
        let d = found.iter().next().unwrap();
        assert_eq!(d.kinds(), vec![BlockKind::II, BlockKind::II]);
        assert_eq!(d.matching().len(), 3);
        let t = d.to_triangulation(3);
        assert_eq!(t.surface_signature().unwrap(), SurfaceSig::closed(1, 1));
    }

    #[test]
    fn annulus_22_has_two() {
        let q = annulus_22_quiver();
        let found = search_all(&q);
        assert_eq!(found, brute_force(&q));
        let kinds: BTreeSet<Vec<BlockKind>> = found.iter().map(|d| d.kinds()).collect();
        assert_eq!(kinds, BTreeSet::from([vec![BlockKind::II, BlockKind::II], vec![BlockKind::I, BlockKind::IV]]));
        let sigs: BTreeSet<SurfaceSig> = found.iter().map(|d| d.to_triangulation(4).surface_signature().unwrap()).collect();
        assert_eq!(sigs, BTreeSet::from([SurfaceSig::annulus(2, 2, 0), SurfaceSig::disk(1, 2)]));
    }

    #[test]
    fn high_degree_vertex_has_none() {
        // a vertex with five neighbours cannot be covered
        let arrows: Vec<_> = (1..6).map(|i| (0, i, 1)).collect();
        let q = Quiver::from_arrows(6, &arrows).unwrap();
        assert_eq!(is_unique(&q, 1_000_000).unwrap(), Uniqueness::None);
    }

    #[test]
    fn four_punctured_sphere_is_not_unique() {
        let q = four_punctured_sphere_quiver();
        assert_eq!(q.edge_count(), 12);
        match is_unique(&q, 5_000_000).unwrap() {
            Uniqueness::Multiple(ds) => {
                assert!(ds.len() >= 2);
                for d in ds {
                    assert!(d.reproduces(&q));
                }
            }
            other => panic!("expected several decompositions, got {other:?}"),
        }
    }

    #[test]
    fn assembly_reproduces_quiver() {
        for q in [Quiver::path(3), Quiver::markov(), annulus_22_quiver(), Quiver::path(4), Quiver::cycle(3)] {
            for d in search_all(&q) {
                let t = d.to_triangulation(q.n());
                t.validate().unwrap_or_else(|e| panic!("{d}: {e}"));
                let got = t.exchange_quiver().unwrap();
                assert_eq!(got.signed_matrix(), q.signed_matrix(), "{d}");
            }
        }
    }

    #[test]
    fn single_vertex_is_the_square() {
        let q = Quiver::empty(1);
        let e = enumerate_decompositions(&q, &BlockKind::ALL, SearchLimits::default()).unwrap();
        assert_eq!(e.decompositions.len(), 1);
        let t = e.decompositions[0].to_triangulation(1);
        assert_eq!(t.surface_signature().unwrap(), SurfaceSig::polygon(4));
    }

    #[test]
    fn search_matches_brute_force_on_all_small_quivers() {
        let vals = [-1i64, 0, 1, 2];
        let mut count = 0;
        for &x in &vals {
            for &y in &vals {
                for &z in &vals {
                    for &u in &[-1i64, 0, 1] {
                        for &v in &[-1i64, 0, 1] {
                            for &w in &[-1i64, 0, 1] {
                                let b = vec![0, x, y, u, -x, 0, z, v, -y, -z, 0, w, -u, -v, -w, 0];
                                let q = Quiver::from_signed(4, &b).unwrap();
                                if !q.is_connected() {
                                    continue;
                                }
                                assert_eq!(search_all(&q), brute_force(&q), "{:?}", q.arrows());
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
        assert!(count > 500);
    }

    #[test]
    fn truncation_flag() {
        let e = enumerate_decompositions(&annulus_22_quiver(), &BlockKind::ALL, SearchLimits { max_results: 1, max_nodes: 1000 }).unwrap();
        assert!(e.truncated);
        assert_eq!(e.decompositions.len(), 1);
        assert_eq!(enumerate_decompositions(&Quiver::empty(2), &BlockKind::ALL, SearchLimits::default()), Err(BlockError::NotConnected));
    }
}
