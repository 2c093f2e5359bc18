//! Recovering a surface from an exchange quiver, and turning quiver isomorphisms between
//! maximal triangulations into correspondences of triangles.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::blocks::{enumerate_decompositions, BlockDecomposition, BlockError, BlockKind, SearchLimits};
use crate::quiver::Quiver;
use crate::surface::{no_maximal, reconstruction_exceptions, SurfaceSig};
use crate::triangulation::{ArcId, SegId, Side, TriangError, TriangleKind, Triangulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReconstructError {
    #[error(transparent)]
    Blocks(#[from] BlockError),
    #[error(transparent)]
    Triangulation(#[from] TriangError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("match failure in {stage} stage at triangle {triangle}: {detail}")]
    MatchFailure { stage: &'static str, triangle: usize, detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub decomposition: BlockDecomposition,
    pub triangulation: Triangulation,
    pub sig: SurfaceSig,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recovery {
    Recovered(Candidate),
    Ambiguous(Vec<Candidate>),
    NotInClass,
}

impl Recovery {
    pub fn candidates(&self) -> &[Candidate] {
        match self {
            Recovery::Recovered(c) => std::slice::from_ref(c),
            Recovery::Ambiguous(cs) => cs,
            Recovery::NotInClass => &[],
        }
    }
}

pub const DEFAULT_MAX_NODES: u64 = 20_000_000;

/// Assembles every block decomposition of `q`. Arc `i` of each candidate is vertex `i`.
pub fn recover(q: &Quiver, max_nodes: u64) -> Result<Recovery, ReconstructError> {
    let e = enumerate_decompositions(q, &BlockKind::ALL, SearchLimits { max_results: usize::MAX, max_nodes })?;
    if e.truncated {
        return Err(BlockError::Budget(max_nodes).into());
    }
    let mut out = Vec::new();
    for d in e.decompositions {
        let t = d.to_triangulation(q.n());
        // decompositions whose pieces do not close up into a marked surface are dropped
        if let Ok(sig) = t.surface_signature() {
            out.push(Candidate { triangulation: t.with_declared_sig(sig.clone()), decomposition: d, sig });
        }
    }
    Ok(match out.len() {
        0 => Recovery::NotInClass,
        1 => Recovery::Recovered(out.pop().unwrap()),
        _ => Recovery::Ambiguous(out),
    })
}

/// Triangle, arc and boundary-segment bijections from `t1` to `t2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleCorrespondence {
    pub triangles: Vec<usize>,
    pub arcs: BTreeMap<ArcId, ArcId>,
    pub segments: BTreeMap<SegId, SegId>,
    pub sig: SurfaceSig,
}

/// Arc map induced by a vertex bijection of the exchange quivers.
fn arc_map(t1: &Triangulation, phi: &[usize], t2: &Triangulation) -> BTreeMap<ArcId, ArcId> {
    let a2: Vec<ArcId> = t2.arcs.iter().copied().collect();
    t1.arcs.iter().zip(phi).map(|(&a, &j)| (a, a2[j])).collect()
}

fn check_iso(t1: &Triangulation, phi: &[usize], t2: &Triangulation) -> Result<(), ReconstructError> {
    let (q1, q2) = (t1.exchange_quiver()?, t2.exchange_quiver()?);
    if phi.len() != q1.n() || !q1.is_isomorphism(&q2, phi) {
        return Err(ReconstructError::Precondition("phi is not a quiver isomorphism".into()));
    }
    Ok(())
}

fn rotate_to(sides: [Side; 3], first: usize) -> [Side; 3] {
    [sides[first], sides[(first + 1) % 3], sides[(first + 2) % 3]]
}

/// Rotation of a wedge or cap that puts its arcs first.
fn arcs_first(sides: [Side; 3]) -> [Side; 3] {
    (0..3)
        .map(|r| rotate_to(sides, r))
        .find(|s| s.windows(2).all(|w| w[0].is_boundary() <= w[1].is_boundary()))
        .expect("a wedge or cap has consecutive boundary sides")
}

struct Matcher<'a> {
    t1: &'a Triangulation,
    t2: &'a Triangulation,
    arcs: BTreeMap<ArcId, ArcId>,
    tri: Vec<Option<usize>>,
    used: Vec<bool>,
    segs: BTreeMap<SegId, SegId>,
}

impl Matcher<'_> {
    fn image(&self, s: Side) -> Option<Side> {
        match s {
            Side::Arc(a) => Some(Side::Arc(self.arcs[&a])),
            Side::Bdry(b) => self.segs.get(&b).map(|&c| Side::Bdry(c)),
        }
    }

    /// Finds an unused triangle of `t2` of the given kind whose sides, up to rotation, match
    /// `want`, where `None` stands for a boundary segment not yet assigned.
    fn find(&self, kind: TriangleKind, want: [Option<Side>; 3]) -> Option<(usize, [Side; 3])> {
        (0..self.t2.triangles.len())
            .filter(|&u| !self.used[u] && self.t2.triangle_kind(u) == kind)
            .find_map(|u| {
                let s = self.t2.triangles[u].sides();
                (0..3).map(|r| rotate_to(s, r)).find(|rs| {
                    rs.iter().zip(&want).all(|(x, w)| match w {
                        Some(w) => x == w,
                        None => x.is_boundary() && !self.segs.values().any(|&c| Side::Bdry(c) == *x),
                    })
                })
                .map(|rs| (u, rs))
            })
    }

    fn assign(&mut self, t: usize, u: usize, from: [Side; 3], to: [Side; 3]) {
        self.tri[t] = Some(u);
        self.used[u] = true;
        for (x, y) in from.iter().zip(&to) {
            if let (Side::Bdry(b), Side::Bdry(c)) = (x, y) {
                self.segs.insert(*b, *c);
            }
        }
    }

    /// Triangles of `kind` in `t1` ordered so each one shares an arc with an earlier
    /// matched triangle or an earlier one of the list.
    fn grow_order(&self, kind: TriangleKind) -> Vec<usize> {
        let slots = self.t1.arc_slots();
        let todo: BTreeSet<usize> =
            (0..self.t1.triangles.len()).filter(|&t| self.t1.triangle_kind(t) == kind).collect();
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut order = Vec::new();
        let mut queue: VecDeque<usize> = (0..self.t1.triangles.len()).filter(|&t| self.tri[t].is_some()).collect();
        if queue.is_empty() {
            queue.extend(todo.iter().next());
            seen.extend(todo.iter().next());
            order.extend(todo.iter().next());
        }
        while let Some(t) = queue.pop_front() {
            for i in 0..3 {
                if let Some((u, _)) = self.t1.opposite_slot(&slots, t, i) {
                    if todo.contains(&u) && seen.insert(u) {
                        order.push(u);
                        queue.push_back(u);
                    }
                }
            }
        }
        order
    }

    fn stage(&mut self, kind: TriangleKind, name: &'static str) -> Result<(), ReconstructError> {
        let order = self.grow_order(kind);
        let total = (0..self.t1.triangles.len()).filter(|&t| self.t1.triangle_kind(t) == kind).count();
        if order.len() != total {
            return Err(ReconstructError::Precondition(format!("the {name}s of the first triangulation are not connected")));
        }
        for t in order {
            let sides = match kind {
                TriangleKind::Face => self.t1.triangles[t].sides(),
                _ => arcs_first(self.t1.triangles[t].sides()),
            };
            let want = sides.map(|s| self.image(s));
            let (u, to) = self.find(kind, want).ok_or_else(|| ReconstructError::MatchFailure {
                stage: name,
                triangle: t,
                detail: format!(
                    "no unused {name} of the second triangulation has clockwise sides {}",
                    want.iter().map(|w| w.map_or("b:?".to_string(), |s| s.to_string())).collect::<Vec<_>>().join(" ")
                ),
            })?;
            self.assign(t, u, sides, to);
        }
        let left = (0..self.t2.triangles.len()).filter(|&u| !self.used[u] && self.t2.triangle_kind(u) == kind).count();
        if left > 0 {
            return Err(ReconstructError::MatchFailure {
                stage: name,
                triangle: self.t2.triangles.len(),
                detail: format!("{left} {name}(s) of the second triangulation left unmatched"),
            });
        }
        Ok(())
    }
}

fn transport_excluded(sig: &SurfaceSig) -> bool {
    reconstruction_exceptions().contains(sig)
}

/// Matches faces, then wedges, then caps of `t1` with those of `t2` along the arc map
/// induced by `phi`, a bijection of quiver vertices in sorted arc order.
pub fn transport(t1: &Triangulation, phi: &[usize], t2: &Triangulation) -> Result<TriangleCorrespondence, ReconstructError> {
    if !t1.is_connected_max_2faces() {
        return Err(ReconstructError::Precondition("the first triangulation is not connected maximal with two faces".into()));
    }
    let sig1 = t1.surface_signature()?;
    let sig2 = t2.surface_signature()?;
    for s in [&sig1, &sig2] {
        if transport_excluded(s) {
            return Err(ReconstructError::Precondition(format!("{s} is excluded")));
        }
    }
    check_iso(t1, phi, t2)?;
    let mut m = Matcher {
        t1,
        t2,
        arcs: arc_map(t1, phi, t2),
        tri: vec![None; t1.triangles.len()],
        used: vec![false; t2.triangles.len()],
        segs: BTreeMap::new(),
    };
    m.stage(TriangleKind::Face, "face")?;
    m.stage(TriangleKind::Wedge, "wedge")?;
    m.stage(TriangleKind::Cap, "cap")?;
    if m.used.iter().any(|u| !u) || m.tri.iter().any(Option::is_none) {
        return Err(ReconstructError::MatchFailure {
            stage: "cap",
            triangle: m.tri.iter().position(Option::is_none).unwrap_or(t1.triangles.len()),
            detail: "triangle counts differ".into(),
        });
    }
    if !t2.maximal() {
        return Err(ReconstructError::MatchFailure { stage: "cap", triangle: 0, detail: "the second triangulation is not maximal".into() });
    }
    if sig1 != sig2 {
        return Err(ReconstructError::MatchFailure { stage: "cap", triangle: 0, detail: format!("signatures {sig1} and {sig2} differ") });
    }
    Ok(TriangleCorrespondence { triangles: m.tri.into_iter().map(Option::unwrap).collect(), arcs: m.arcs, segments: m.segs, sig: sig1 })
}

pub(crate) fn match1_excluded(sig: &SurfaceSig) -> bool {
    *sig == SurfaceSig::closed(0, 4) || *sig == SurfaceSig::disk(1, 2) || no_maximal().contains(sig)
}

/// Whether `t2` is maximal, for a maximal `t1` with an isomorphic quiver.
pub fn check_match1(t1: &Triangulation, t2: &Triangulation, phi: &[usize]) -> Result<bool, ReconstructError> {
    if !t1.maximal() {
        return Err(ReconstructError::Precondition("the first triangulation is not maximal".into()));
    }
    for s in [t1.surface_signature()?, t2.surface_signature()?] {
        if match1_excluded(&s) {
            return Err(ReconstructError::Precondition(format!("{s} is excluded")));
        }
    }
    check_iso(t1, phi, t2)?;
    Ok(t2.maximal())
}
