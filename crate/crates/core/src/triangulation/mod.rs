//! Ideal triangulations as glued clockwise triangles.
//!
//! Each triangle has three side slots. Slot `i` runs from corner `i` to corner `i+1`.
//! A self-folded triangle is stored as `(loop, radius, radius)`. Every arc fills two
//! slots, every boundary segment one; gluing is orientation-reversing, which fixes
//! the identification of corners.

mod canon;
mod flip;
mod json;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::quiver::Quiver;
use crate::surface::SurfaceSig;

pub use canon::CanonicalCode;
pub use json::{SideDoc, TriangleDoc, TriangulationDoc};

pub type ArcId = u32;
pub type SegId = u32;

/// `(triangle index, side index)`.
pub type Slot = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Arc(ArcId),
    Bdry(SegId),
}

impl Side {
    pub fn arc(self) -> Option<ArcId> {
        match self {
            Side::Arc(a) => Some(a),
            Side::Bdry(_) => None,
        }
    }

    pub fn is_boundary(self) -> bool {
        matches!(self, Side::Bdry(_))
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Arc(a) => write!(f, "a:{a}"),
            Side::Bdry(b) => write!(f, "b:{b}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Triangle {
    /// Sides in clockwise order.
    Plain([Side; 3]),
    SelfFolded { loop_arc: ArcId, radius: ArcId },
}

impl Triangle {
    pub fn plain(a: Side, b: Side, c: Side) -> Self {
        Triangle::Plain([a, b, c])
    }

    /// Three arcs, clockwise.
    pub fn face(a: ArcId, b: ArcId, c: ArcId) -> Self {
        Triangle::Plain([Side::Arc(a), Side::Arc(b), Side::Arc(c)])
    }

    pub fn self_folded(loop_arc: ArcId, radius: ArcId) -> Self {
        Triangle::SelfFolded { loop_arc, radius }
    }

    pub fn sides(&self) -> [Side; 3] {
        match *self {
            Triangle::Plain(s) => s,
            Triangle::SelfFolded { loop_arc, radius } => [Side::Arc(loop_arc), Side::Arc(radius), Side::Arc(radius)],
        }
    }

    pub fn is_self_folded(&self) -> bool {
        matches!(self, Triangle::SelfFolded { .. })
    }

    pub fn boundary_count(&self) -> usize {
        self.sides().iter().filter(|s| s.is_boundary()).count()
    }

    /// Builds a triangle from three clockwise sides, turning a repeated arc into a
    /// self-folded triangle.
    pub fn from_sides(s: [Side; 3]) -> Self {
        for r in 0..3 {
            let (x, y, z) = (s[r], s[(r + 1) % 3], s[(r + 2) % 3]);
            if y == z && !y.is_boundary() {
                if let (Some(l), Some(rad)) = (x.arc(), y.arc()) {
                    return Triangle::SelfFolded { loop_arc: l, radius: rad };
                }
            }
        }
        Triangle::Plain(s)
    }

    /// Plain triangles rotated so the smallest side comes first.
    pub fn normalized(&self) -> Triangle {
        match *self {
            Triangle::Plain(s) => {
                let r = (0..3).min_by_key(|&r| s[r]).unwrap();
                Triangle::Plain([s[r], s[(r + 1) % 3], s[(r + 2) % 3]])
            }
            sf => sf,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriangleKind {
    Face,
    Wedge,
    Cap,
    SelfFolded,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangError {
    #[error("triangulation has no triangles")]
    Empty,
    #[error("triangle {triangle} refers to unknown {side}")]
    UnknownSide { triangle: usize, side: Side },
    #[error("arc {arc} fills {count} side slots, expected 2")]
    ArcSlots { arc: ArcId, count: usize },
    #[error("boundary segment {seg} fills {count} side slots, expected 1")]
    BoundarySlots { seg: SegId, count: usize },
    #[error("triangle {0} repeats a side; store repeated arcs as a self-folded triangle")]
    RepeatedSide(usize),
    #[error("self-folded triangle {0} has equal loop and radius")]
    DegenerateSelfFolded(usize),
    #[error("boundary at marked point {0} is not a single path")]
    BadBoundary(usize),
    #[error("glued complex is disconnected")]
    Disconnected,
    #[error("Euler characteristic {chi} with {b} boundary components gives no orientable genus")]
    BadEuler { chi: i64, b: usize },
    #[error("assembled surface {0} is not a valid marked surface")]
    InvalidSurface(SurfaceSig),
    #[error("declared signature {declared} but the gluing gives {computed}")]
    SigMismatch { declared: SurfaceSig, computed: SurfaceSig },
    #[error("{0} is not an arc of this triangulation")]
    NoSuchArc(ArcId),
    #[error("arc {0} is the radius of a self-folded triangle and cannot be flipped")]
    RadiusFlip(ArcId),
    #[error("the edge formula does not apply: {0}")]
    Excluded(&'static str),
    #[error("format error: {0}")]
    Format(String),
}

/// Result of gluing the triangles together.
#[derive(Clone, Debug)]
pub struct Assembly {
    /// Marked point at corner `t*3 + i`.
    pub corner_vertex: Vec<usize>,
    pub vertex_count: usize,
    pub on_boundary: Vec<bool>,
    /// Boundary segment cycles, each starting at its smallest id.
    pub boundary_cycles: Vec<Vec<SegId>>,
    pub sig: SurfaceSig,
    slots: BTreeMap<ArcId, [Slot; 2]>,
}

impl Assembly {
    pub fn vertex(&self, t: usize, i: usize) -> usize {
        self.corner_vertex[t * 3 + i % 3]
    }

    /// Marked points in the interior.
    pub fn punctures(&self) -> Vec<usize> {
        (0..self.vertex_count).filter(|&v| !self.on_boundary[v]).collect()
    }

    pub fn slots(&self, arc: ArcId) -> [Slot; 2] {
        self.slots[&arc]
    }

    /// Endpoints of an arc, oriented along its first slot.
    pub fn arc_ends(&self, arc: ArcId) -> [usize; 2] {
        let (t, i) = self.slots[&arc][0];
        [self.vertex(t, i), self.vertex(t, i + 1)]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Triangulation {
    pub arcs: BTreeSet<ArcId>,
    pub boundary_segs: BTreeSet<SegId>,
    pub triangles: Vec<Triangle>,
    pub declared_sig: Option<SurfaceSig>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TriangStats {
    pub f: u32,
    pub w: u32,
    pub c: u32,
    pub d_neg: u32,
    pub d_pos: u32,
    pub s_f: u32,
    pub s_w: u32,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Triangulation {
    /// Arc and boundary id sets are collected from the triangles.
    pub fn from_triangles(triangles: Vec<Triangle>) -> Self {
        let mut arcs = BTreeSet::new();
        let mut boundary_segs = BTreeSet::new();
        for tri in &triangles {
            for s in tri.sides() {
                match s {
                    Side::Arc(a) => arcs.insert(a),
                    Side::Bdry(b) => boundary_segs.insert(b),
                };
            }
        }
        Triangulation { arcs, boundary_segs, triangles, declared_sig: None }
    }

    pub fn with_declared_sig(mut self, sig: SurfaceSig) -> Self {
        self.declared_sig = Some(sig);
        self
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn next_arc_id(&self) -> ArcId {
        self.arcs.iter().next_back().map_or(0, |a| a + 1)
    }

    pub fn next_seg_id(&self) -> SegId {
        self.boundary_segs.iter().next_back().map_or(0, |a| a + 1)
    }

    /// Slots filled by each arc, in increasing order.
    pub fn arc_slots(&self) -> BTreeMap<ArcId, Vec<Slot>> {
        let mut out: BTreeMap<ArcId, Vec<Slot>> = self.arcs.iter().map(|&a| (a, Vec::new())).collect();
        for (t, tri) in self.triangles.iter().enumerate() {
            for (i, s) in tri.sides().iter().enumerate() {
                if let Side::Arc(a) = s {
                    out.entry(*a).or_default().push((t, i));
                }
            }
        }
        out
    }

    fn seg_slots(&self) -> BTreeMap<SegId, Vec<Slot>> {
        let mut out: BTreeMap<SegId, Vec<Slot>> = self.boundary_segs.iter().map(|&a| (a, Vec::new())).collect();
        for (t, tri) in self.triangles.iter().enumerate() {
            for (i, s) in tri.sides().iter().enumerate() {
                if let Side::Bdry(b) = s {
                    out.entry(*b).or_default().push((t, i));
                }
            }
        }
        out
    }

    /// Slot on the other side of `(t, i)`, if that side is an arc.
    pub fn opposite_slot(&self, slots: &BTreeMap<ArcId, Vec<Slot>>, t: usize, i: usize) -> Option<Slot> {
        let a = self.triangles[t].sides()[i].arc()?;
        let s = &slots[&a];
        Some(if s[0] == (t, i) { s[1] } else { s[0] })
    }

    pub fn validate(&self) -> Result<Assembly, TriangError> {
        if self.triangles.is_empty() {
            return Err(TriangError::Empty);
        }
        for (t, tri) in self.triangles.iter().enumerate() {
            match *tri {
                Triangle::Plain(s) => {
                    for side in s {
                        let known = match side {
                            Side::Arc(a) => self.arcs.contains(&a),
                            Side::Bdry(b) => self.boundary_segs.contains(&b),
                        };
                        if !known {
                            return Err(TriangError::UnknownSide { triangle: t, side });
                        }
                    }
                    if s[0] == s[1] || s[1] == s[2] || s[0] == s[2] {
                        return Err(TriangError::RepeatedSide(t));
                    }
                }
                Triangle::SelfFolded { loop_arc, radius } => {
                    if loop_arc == radius {
                        return Err(TriangError::DegenerateSelfFolded(t));
                    }
                    for a in [loop_arc, radius] {
                        if !self.arcs.contains(&a) {
                            return Err(TriangError::UnknownSide { triangle: t, side: Side::Arc(a) });
                        }
                    }
                }
            }
        }
        let arc_slots = self.arc_slots();
        let mut slots = BTreeMap::new();
        for (&a, s) in &arc_slots {
            if s.len() != 2 {
                return Err(TriangError::ArcSlots { arc: a, count: s.len() });
            }
            slots.insert(a, [s[0], s[1]]);
        }
        let seg_slots = self.seg_slots();
        for (&b, s) in &seg_slots {
            if s.len() != 1 {
                return Err(TriangError::BoundarySlots { seg: b, count: s.len() });
            }
        }

        let nt = self.triangles.len();
        let mut corners = UnionFind::new(3 * nt);
        let mut pieces = UnionFind::new(nt);
        for s in slots.values() {
            let [(t, i), (u, j)] = *s;
            corners.union(t * 3 + i, u * 3 + (j + 1) % 3);
            corners.union(t * 3 + (i + 1) % 3, u * 3 + j);
            pieces.union(t, u);
        }
        if (0..nt).any(|t| pieces.find(t) != pieces.find(0)) {
            return Err(TriangError::Disconnected);
        }
        let mut ids = BTreeMap::new();
        let mut corner_vertex = vec![0; 3 * nt];
        for c in 0..3 * nt {
            let r = corners.find(c);
            let next = ids.len();
            corner_vertex[c] = *ids.entry(r).or_insert(next);
        }
        let vertex_count = ids.len();

        let mut on_boundary = vec![false; vertex_count];
        let mut start_of: BTreeMap<usize, SegId> = BTreeMap::new();
        let mut end_of: BTreeMap<SegId, usize> = BTreeMap::new();
        for (&b, s) in &seg_slots {
            let (t, i) = s[0];
            let (v0, v1) = (corner_vertex[t * 3 + i], corner_vertex[t * 3 + (i + 1) % 3]);
            on_boundary[v0] = true;
            on_boundary[v1] = true;
            if start_of.insert(v0, b).is_some() {
                return Err(TriangError::BadBoundary(v0));
            }
            end_of.insert(b, v1);
        }
        let mut boundary_cycles = Vec::new();
        let mut used = BTreeSet::new();
        for &b in self.boundary_segs.iter() {
            if used.contains(&b) {
                continue;
            }
            let mut cycle = vec![];
            let mut cur = b;
            loop {
                used.insert(cur);
                cycle.push(cur);
                let v = end_of[&cur];
                cur = *start_of.get(&v).ok_or(TriangError::BadBoundary(v))?;
                if cur == b {
                    break;
                }
                if used.contains(&cur) {
                    return Err(TriangError::BadBoundary(v));
                }
            }
            boundary_cycles.push(cycle);
        }

        let b = boundary_cycles.len();
        let chi = vertex_count as i64 - (self.arcs.len() + self.boundary_segs.len()) as i64 + nt as i64;
        let twice_g = 2 - b as i64 - chi;
        if twice_g < 0 || twice_g % 2 != 0 {
            return Err(TriangError::BadEuler { chi, b });
        }
        let p = on_boundary.iter().filter(|&&x| !x).count() as u32;
        let sig = SurfaceSig::new((twice_g / 2) as u32, p, boundary_cycles.iter().map(|c| c.len() as u32).collect());
        if !sig.is_valid() {
            return Err(TriangError::InvalidSurface(sig));
        }
        if let Some(d) = &self.declared_sig {
            if *d != sig {
                return Err(TriangError::SigMismatch { declared: d.clone(), computed: sig });
            }
        }
        Ok(Assembly { corner_vertex, vertex_count, on_boundary, boundary_cycles, sig, slots })
    }

    pub fn surface_signature(&self) -> Result<SurfaceSig, TriangError> {
        Ok(self.validate()?.sig)
    }

    pub fn triangle_kind(&self, t: usize) -> TriangleKind {
        let tri = &self.triangles[t];
        if tri.is_self_folded() {
            return TriangleKind::SelfFolded;
        }
        match tri.boundary_count() {
            0 => TriangleKind::Face,
            1 => TriangleKind::Wedge,
            _ => TriangleKind::Cap,
        }
    }

    /// Loop of the self-folded triangle with radius `r`, if any.
    pub fn loop_of_radius(&self) -> BTreeMap<ArcId, ArcId> {
        self.triangles
            .iter()
            .filter_map(|t| match *t {
                Triangle::SelfFolded { loop_arc, radius } => Some((radius, loop_arc)),
                _ => None,
            })
            .collect()
    }

    pub fn loops(&self) -> BTreeSet<ArcId> {
        self.loop_of_radius().values().copied().collect()
    }

    pub fn radii(&self) -> BTreeSet<ArcId> {
        self.loop_of_radius().keys().copied().collect()
    }

    pub fn stats(&self) -> Result<TriangStats, TriangError> {
        self.validate()?;
        Ok(self.stats_unchecked())
    }

    fn stats_unchecked(&self) -> TriangStats {
        let mut st = TriangStats::default();
        let loops = self.loops();
        for (t, tri) in self.triangles.iter().enumerate() {
            let has_loop = !tri.is_self_folded() && tri.sides().iter().any(|s| s.arc().is_some_and(|a| loops.contains(&a)));
            match self.triangle_kind(t) {
                TriangleKind::Face => {
                    st.f += 1;
                    st.s_f += u32::from(has_loop);
                }
                TriangleKind::SelfFolded => st.f += 1,
                TriangleKind::Wedge => {
                    st.w += 1;
                    st.s_w += u32::from(has_loop);
                }
                TriangleKind::Cap => st.c += 1,
            }
        }
        for t in 0..self.triangles.len() {
            for u in t + 1..self.triangles.len() {
                if let Some(neg) = self.double_glue_sign(t, u) {
                    if neg {
                        st.d_neg += 1;
                    } else {
                        st.d_pos += 1;
                    }
                }
            }
        }
        st
    }

    /// For two triangles sharing exactly two arcs: `Some(true)` when the shared arcs
    /// appear in opposite clockwise order.
    pub fn double_glue_sign(&self, t: usize, u: usize) -> Option<bool> {
        let st = self.triangles[t].sides();
        let su = self.triangles[u].sides();
        let at: BTreeSet<ArcId> = st.iter().filter_map(|s| s.arc()).collect();
        let au: BTreeSet<ArcId> = su.iter().filter_map(|s| s.arc()).collect();
        let shared: Vec<ArcId> = at.intersection(&au).copied().collect();
        if shared.len() != 2 || self.triangles[t].is_self_folded() || self.triangles[u].is_self_folded() {
            return None;
        }
        let follows = |s: &[Side; 3], x: ArcId, y: ArcId| {
            let px = s.iter().position(|&z| z == Side::Arc(x)).unwrap();
            s[(px + 1) % 3] == Side::Arc(y)
        };
        let (x, y) = (shared[0], shared[1]);
        Some(follows(&st, x, y) != follows(&su, x, y))
    }

    /// Exchange quiver with vertices in increasing arc order, labelled by arc id.
    pub fn exchange_quiver(&self) -> Result<Quiver, TriangError> {
        self.validate()?;
        Ok(self.exchange_quiver_unchecked())
    }

    pub(crate) fn exchange_quiver_unchecked(&self) -> Quiver {
        let arcs: Vec<ArcId> = self.arcs.iter().copied().collect();
        let idx: BTreeMap<ArcId, usize> = arcs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut preimage: BTreeMap<ArcId, Vec<ArcId>> = arcs.iter().map(|&a| (a, vec![a])).collect();
        for (r, l) in self.loop_of_radius() {
            preimage.get_mut(&l).unwrap().push(r);
        }
        let n = arcs.len();
        let mut b = vec![0i64; n * n];
        for tri in &self.triangles {
            if let Triangle::Plain(s) = tri {
                for i in 0..3 {
                    let (Some(x), Some(y)) = (s[i].arc(), s[(i + 1) % 3].arc()) else { continue };
                    for &alpha in &preimage[&x] {
                        for &beta in &preimage[&y] {
                            b[idx[&alpha] * n + idx[&beta]] += 1;
                            b[idx[&beta] * n + idx[&alpha]] -= 1;
                        }
                    }
                }
            }
        }
        Quiver::from_signed(n, &b)
            .expect("exchange matrix is skew-symmetric")
            .with_labels(arcs.iter().map(|a| a.to_string()).collect())
            .unwrap()
    }

    /// Which of the three configurations outside the edge formula `t` contains, if any.
    pub fn edge_formula_exclusion(&self) -> Option<&'static str> {
        let loops = self.loops();
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.is_self_folded() {
                continue;
            }
            let nloops = tri.sides().iter().filter(|s| s.arc().is_some_and(|a| loops.contains(&a))).count();
            match (self.triangle_kind(t), nloops) {
                (TriangleKind::Cap, n) if n >= 1 => return Some("once-punctured digon with a self-folded triangle"),
                (TriangleKind::Wedge, 2) => return Some("twice-punctured monogon with two self-folded triangles"),
                (TriangleKind::Face, 3) => return Some("4-punctured sphere with three self-folded triangles"),
                _ => {}
            }
        }
        None
    }

    /// `3f + w - 2 d_neg - s_f - 2 s_w`.
    pub fn predicted_edges(&self) -> Result<u64, TriangError> {
        let st = self.stats()?;
        if let Some(why) = self.edge_formula_exclusion() {
            return Err(TriangError::Excluded(why));
        }
        Ok((3 * st.f + st.w - 2 * st.d_neg - st.s_f - 2 * st.s_w) as u64)
    }

    pub fn is_maximal(&self) -> Result<Maximality, TriangError> {
        let asm = self.validate()?;
        let st = self.stats_unchecked();
        let self_folded = self.triangles.iter().filter(|t| t.is_self_folded()).count();
        Ok(if self_folded > 0 {
            Maximality::No(format!("{self_folded} self-folded triangle(s)"))
        } else if st.d_neg > 0 {
            Maximality::No(format!("{} negatively double-glued pair(s)", st.d_neg))
        } else if st.c != asm.sig.cap_capacity() {
            Maximality::No(format!("{} caps, capacity {}", st.c, asm.sig.cap_capacity()))
        } else {
            Maximality::Yes
        })
    }

    pub fn maximal(&self) -> bool {
        matches!(self.is_maximal(), Ok(Maximality::Yes))
    }

    /// Indices of the triangles with no boundary sides that are not self-folded.
    pub fn faces(&self) -> Vec<usize> {
        (0..self.triangles.len()).filter(|&t| self.triangle_kind(t) == TriangleKind::Face).collect()
    }

    /// Maximal, at least two faces, and faces connected through shared arcs.
    pub fn is_connected_max_2faces(&self) -> bool {
        if !self.maximal() {
            return false;
        }
        let faces = self.faces();
        if faces.len() < 2 {
            return false;
        }
        let slots = self.arc_slots();
        let is_face: BTreeSet<usize> = faces.iter().copied().collect();
        let mut seen = BTreeSet::from([faces[0]]);
        let mut stack = vec![faces[0]];
        while let Some(t) = stack.pop() {
            for i in 0..3 {
                if let Some((u, _)) = self.opposite_slot(&slots, t, i) {
                    if is_face.contains(&u) && seen.insert(u) {
                        stack.push(u);
                    }
                }
            }
        }
        seen.len() == faces.len()
    }

    /// Triangles rotated to a standard position and sorted.
    pub fn normalized(&self) -> Triangulation {
        let mut tris: Vec<Triangle> = self.triangles.iter().map(Triangle::normalized).collect();
        tris.sort();
        Triangulation { triangles: tris, ..self.clone() }
    }

    /// Renames arcs; ids missing from `map` stay.
    pub fn rename_arcs(&self, map: &BTreeMap<ArcId, ArcId>) -> Triangulation {
        let f = |a: ArcId| *map.get(&a).unwrap_or(&a);
        let triangles = self
            .triangles
            .iter()
            .map(|t| match *t {
                Triangle::Plain(s) => Triangle::Plain(s.map(|x| match x {
                    Side::Arc(a) => Side::Arc(f(a)),
                    b => b,
                })),
                Triangle::SelfFolded { loop_arc, radius } => Triangle::SelfFolded { loop_arc: f(loop_arc), radius: f(radius) },
            })
            .collect();
        Triangulation {
            arcs: self.arcs.iter().map(|&a| f(a)).collect(),
            boundary_segs: self.boundary_segs.clone(),
            triangles,
            declared_sig: self.declared_sig.clone(),
        }
    }

    /// Arcs renumbered `0..n` in increasing order, segments likewise.
    pub fn compacted(&self) -> Triangulation {
        let amap: BTreeMap<ArcId, ArcId> = self.arcs.iter().enumerate().map(|(i, &a)| (a, i as ArcId)).collect();
        let bmap: BTreeMap<SegId, SegId> = self.boundary_segs.iter().enumerate().map(|(i, &b)| (b, i as SegId)).collect();
        let t = self.rename_arcs(&amap);
        let triangles = t
            .triangles
            .iter()
            .map(|tri| match *tri {
                Triangle::Plain(s) => Triangle::Plain(s.map(|x| match x {
                    Side::Bdry(b) => Side::Bdry(bmap[&b]),
                    a => a,
                })),
                sf => sf,
            })
            .collect();
        Triangulation { boundary_segs: bmap.values().copied().collect(), triangles, ..t }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Maximality {
    Yes,
    No(String),
}


#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;

    #[test]
    fn square_assembles_to_a_disk() {
        let t = square();
        let asm = t.validate().unwrap();
        assert_eq!(asm.sig, SurfaceSig::polygon(4));
        assert_eq!(asm.vertex_count, 4);
        let q = t.exchange_quiver().unwrap();
        assert_eq!((q.n(), q.edge_count()), (1, 0));
    }

    #[test]
    fn torus_assembles() {
        let t = torus();
        assert_eq!(t.surface_signature().unwrap(), SurfaceSig::closed(1, 1));
        let st = t.stats().unwrap();
        assert_eq!((st.f, st.w, st.c, st.d_neg), (2, 0, 0, 0));
        let q = t.exchange_quiver().unwrap();
        assert_eq!(q.edge_count(), 6);
        assert!(q.find_isomorphism(&Quiver::markov()).is_some());
        assert!(t.maximal());
        assert!(t.is_connected_max_2faces());
    }

    #[test]
    fn slot_violations() {
        let mut t = square();
        t.triangles[1] = Triangle::plain(a(0), a(0), b(3));
        assert_eq!(t.validate().unwrap_err(), TriangError::RepeatedSide(1));
        let t = Triangulation::from_triangles(vec![
            Triangle::plain(a(0), b(0), b(1)),
            Triangle::plain(a(0), b(2), b(3)),
            Triangle::plain(a(0), b(4), b(5)),
        ]);
        assert_eq!(t.validate().unwrap_err(), TriangError::ArcSlots { arc: 0, count: 3 });
    }

    #[test]
    fn declared_signature_is_checked() {
        let t = square().with_declared_sig(SurfaceSig::polygon(5));
        assert!(matches!(t.validate(), Err(TriangError::SigMismatch { .. })));
    }

    #[test]
    fn kinds() {
        let t = punctured_triangle_self_folded();
        assert_eq!(t.triangle_kind(0), TriangleKind::SelfFolded);
        assert_eq!(t.triangle_kind(1), TriangleKind::Wedge);
        assert_eq!(t.triangle_kind(2), TriangleKind::Cap);
        assert_eq!(torus().triangle_kind(0), TriangleKind::Face);
    }

    #[test]
    fn punctured_triangle_counts() {
        let t = punctured_triangle_self_folded();
        assert_eq!(t.surface_signature().unwrap(), SurfaceSig::disk(3, 1));
        let st = t.stats().unwrap();
        assert_eq!((st.f, st.w, st.c, st.s_w, st.s_f, st.d_neg), (1, 1, 1, 1, 0, 0));
        assert_eq!(t.predicted_edges().unwrap(), 2);
        assert_eq!(t.exchange_quiver().unwrap().edge_count(), 2);
        assert!(!t.maximal());
    }

    #[test]
    fn fans_are_polygons() {
        for m in 4..10 {
            let t = polygon_fan(m);
            assert_eq!(t.surface_signature().unwrap(), SurfaceSig::polygon(m));
            assert_eq!(t.arc_count() as u32, m - 3);
            let st = t.stats().unwrap();
            assert_eq!(3 * st.f + 2 * st.w + st.c, 2 * (m - 3));
            assert_eq!(st.w + 2 * st.c, m);
        }
    }

    #[test]
    fn octagon_maximal() {
        // caps cut off vertices 1,3,5,7; arcs 0..3 join 0-2,2-4,4-6,6-0; arc 4 joins 0-4
        let t = Triangulation::from_triangles(vec![
            Triangle::plain(a(0), b(0), b(1)),
            Triangle::plain(a(1), b(2), b(3)),
            Triangle::plain(a(2), b(4), b(5)),
            Triangle::plain(a(3), b(6), b(7)),
            Triangle::face(4, 1, 0),
            Triangle::face(4, 3, 2),
        ]);
        assert_eq!(t.surface_signature().unwrap(), SurfaceSig::polygon(8));
        let st = t.stats().unwrap();
        assert_eq!((st.f, st.w, st.c, st.d_neg, st.s_f, st.s_w), (2, 0, 4, 0, 0, 0));
        assert_eq!(t.predicted_edges().unwrap(), 6);
        assert_eq!(t.exchange_quiver().unwrap().edge_count(), 6);
        assert!(t.maximal());
        assert!(t.is_connected_max_2faces());
        assert!(!square().is_connected_max_2faces());
    }

    #[test]
    fn excluded_configurations() {
        let digon = Triangulation::from_triangles(vec![Triangle::self_folded(0, 1), Triangle::plain(a(0), b(0), b(1))]);
        assert_eq!(digon.surface_signature().unwrap(), SurfaceSig::disk(2, 1));
        assert!(matches!(digon.predicted_edges(), Err(TriangError::Excluded(_))));
        let st = digon.stats().unwrap();
        assert_ne!(3 * st.f + st.w - 2 * st.d_neg - st.s_f - 2 * st.s_w, digon.exchange_quiver().unwrap().edge_count() as u32);
    }
}
