//! Connected maximal triangulations with at least two faces, built from a small base
//! library by adding punctures, boundary components and boundary marked points.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surface::{ExceptionFlag, SurfaceError, SurfaceSig};
use crate::triangulation::{ArcId, SegId, Side, TriangError, Triangle, TriangleKind, Triangulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("EXCEPTION_SURFACE: {sig} has no connected maximal triangulation with two faces (exception item {item})")]
    ExceptionSurface { sig: SurfaceSig, item: u8 },
    #[error("triangle {0} is not a face")]
    NotAFace(usize),
    #[error("no boundary component contains segment {0}")]
    NoComponent(SegId),
    #[error("component of segment {seg} has no {what}")]
    MissingPiece { seg: SegId, what: &'static str },
    #[error(transparent)]
    Triangulation(#[from] TriangError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum BuildStep {
    AddPuncture { face: usize },
    AddBoundaryPuncturedComponent { face: usize },
    AddBoundaryMarkedPoint { component: SegId },
}

impl fmt::Display for BuildStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildStep::AddPuncture { face } => write!(f, "add puncture in face {face}"),
            BuildStep::AddBoundaryPuncturedComponent { face } => write!(f, "add boundary component in face {face}"),
            BuildStep::AddBoundaryMarkedPoint { component } => write!(f, "add marked point on component of segment {component}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildPlan {
    pub base: String,
    pub steps: Vec<BuildStep>,
}

/// Triangles given by side names; names starting with `#` are boundary segments.
/// Ids are assigned in order of first appearance.
fn named(tris: &[[&str; 3]]) -> Triangulation {
    let mut arcs: BTreeMap<&str, ArcId> = BTreeMap::new();
    let mut segs: BTreeMap<&str, SegId> = BTreeMap::new();
    let mut out = Vec::new();
    for t in tris {
        let sides = t.map(|name| {
            if name.starts_with('#') {
                let next = segs.len() as SegId;
                Side::Bdry(*segs.entry(name).or_insert(next))
            } else {
                let next = arcs.len() as ArcId;
                Side::Arc(*arcs.entry(name).or_insert(next))
            }
        });
        out.push(Triangle::from_sides(sides));
    }
    Triangulation::from_triangles(out)
}

/// Cuts arc `e` open and fills the gap with a wedge whose boundary segment sits at the
/// start of the slot `which` (0 or 1) of `e`. Returns the new segment id.
pub fn insert_wedge(t: &mut Triangulation, e: ArcId, which: usize) -> SegId {
    let slots = t.arc_slots();
    let s = slots[&e].clone();
    let (tb, ib) = s[1 - which];
    let y = t.next_arc_id();
    let eta = t.next_seg_id();
    replace_side(&mut t.triangles[tb], ib, Side::Arc(y));
    t.arcs.insert(y);
    t.boundary_segs.insert(eta);
    t.triangles.push(Triangle::plain(Side::Arc(e), Side::Bdry(eta), Side::Arc(y)));
    eta
}

fn replace_side(tri: &mut Triangle, i: usize, s: Side) {
    let mut sides = tri.sides();
    sides[i] = s;
    *tri = Triangle::Plain(sides);
}

fn rotated(tri: &Triangle, r: usize) -> [Side; 3] {
    let s = tri.sides();
    [s[r % 3], s[(r + 1) % 3], s[(r + 2) % 3]]
}

/// Barycentric subdivision of a plain triangle by a new puncture. Returns the ids of
/// the three new arcs, in the order of the corners they end at.
fn subdivide(t: &mut Triangulation, idx: usize) -> [ArcId; 3] {
    let [s0, s1, s2] = t.triangles[idx].sides();
    let e0 = t.next_arc_id();
    let (e1, e2) = (e0 + 1, e0 + 2);
    t.arcs.extend([e0, e1, e2]);
    let a = Side::Arc;
    t.triangles[idx] = Triangle::plain(s0, a(e1), a(e0));
    t.triangles.push(Triangle::plain(s1, a(e2), a(e1)));
    t.triangles.push(Triangle::plain(s2, a(e0), a(e2)));
    [e0, e1, e2]
}

pub fn add_puncture(t: &Triangulation, face: usize) -> Result<Triangulation, BuildError> {
    if face >= t.triangles.len() || t.triangle_kind(face) != TriangleKind::Face {
        return Err(BuildError::NotAFace(face));
    }
    let mut out = t.clone();
    out.declared_sig = None;
    subdivide(&mut out, face);
    Ok(out)
}

pub fn add_boundary_punctured_component(t: &Triangulation, face: usize) -> Result<Triangulation, BuildError> {
    if face >= t.triangles.len() || t.triangle_kind(face) != TriangleKind::Face {
        return Err(BuildError::NotAFace(face));
    }
    let mut out = t.clone();
    out.declared_sig = None;
    let [e0, _, _] = subdivide(&mut out, face);
    // slot of e0 in the first new triangle runs from the new point to corner 0
    let which = out.arc_slots()[&e0].iter().position(|&(tt, _)| tt == face).unwrap();
    insert_wedge(&mut out, e0, which);
    Ok(out)
}

/// Boundary segments of the component containing `seg`.
fn component_of(t: &Triangulation, seg: SegId) -> Result<Vec<SegId>, BuildError> {
    let asm = t.validate()?;
    asm.boundary_cycles.into_iter().find(|c| c.contains(&seg)).ok_or(BuildError::NoComponent(seg))
}

pub fn add_boundary_marked_point(t: &Triangulation, component: SegId) -> Result<Triangulation, BuildError> {
    let comp = component_of(t, component)?;
    let on_comp = |s: Side| matches!(s, Side::Bdry(b) if comp.contains(&b));
    let mut out = t.clone();
    out.declared_sig = None;
    let new_seg = t.next_seg_id();
    let x = t.next_arc_id();
    if comp.len() % 2 == 0 {
        let (idx, r) = (0..t.triangles.len())
            .filter(|&i| t.triangle_kind(i) == TriangleKind::Cap)
            .flat_map(|i| (0..3).map(move |r| (i, r)))
            .find(|&(i, r)| {
                let s = rotated(&t.triangles[i], r);
                on_comp(s[0]) && on_comp(s[1]) && !s[2].is_boundary()
            })
            .ok_or(BuildError::MissingPiece { seg: component, what: "cap" })?;
        let [s1, s2, a] = rotated(&t.triangles[idx], r);
        // s1 keeps its id for the half at the cap's first corner
        out.triangles[idx] = Triangle::plain(Side::Bdry(new_seg), s2, Side::Arc(x));
        out.triangles.push(Triangle::plain(s1, Side::Arc(x), a));
    } else {
        let found: Vec<(usize, usize)> = (0..t.triangles.len())
            .filter(|&i| t.triangle_kind(i) == TriangleKind::Wedge)
            .flat_map(|i| (0..3).map(move |r| (i, r)))
            .filter(|&(i, r)| on_comp(rotated(&t.triangles[i], r)[0]))
            .collect();
        let &(idx, r) = found.first().ok_or(BuildError::MissingPiece { seg: component, what: "wedge" })?;
        debug_assert_eq!(found.len(), 1, "odd component has a unique wedge");
        let [eta, alpha, beta] = rotated(&t.triangles[idx], r);
        out.triangles[idx] = Triangle::plain(Side::Arc(x), alpha, beta);
        out.triangles.push(Triangle::plain(eta, Side::Bdry(new_seg), Side::Arc(x)));
    }
    out.arcs.insert(x);
    out.boundary_segs.insert(new_seg);
    Ok(out)
}

/// Applies one plan step.
pub fn apply_step(t: &Triangulation, step: &BuildStep) -> Result<Triangulation, BuildError> {
    match *step {
        BuildStep::AddPuncture { face } => add_puncture(t, face),
        BuildStep::AddBoundaryPuncturedComponent { face } => add_boundary_punctured_component(t, face),
        BuildStep::AddBoundaryMarkedPoint { component } => add_boundary_marked_point(t, component),
    }
}

/// 4g-gon with sides `a1 b1 a1' b1' ...` glued, triangulated by the first diagonal
/// pattern that gives a maximal triangulation.
pub fn once_punctured_closed(g: u32) -> Triangulation {
    assert!(g >= 1);
    let m = 4 * g as usize;
    let side = |k: usize| -> ArcId {
        let j = (k / 4) as ArcId;
        match k % 4 {
            0 | 2 => 2 * j,
            _ => 2 * j + 1,
        }
    };
    let first_diag = 2 * g;
    let mut candidates: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    for apex in 0..m {
        candidates.push((0..m - 2).map(|k| (apex, (apex + k + 1) % m, (apex + k + 2) % m)).collect());
    }
    for start in 0..m {
        let (mut lo, mut hi) = (start, (start + 1) % m);
        let mut tris = Vec::new();
        let mut left = true;
        while tris.len() < m - 2 {
            if left {
                let nlo = (lo + m - 1) % m;
                tris.push((nlo, lo, hi));
                lo = nlo;
            } else {
                let nhi = (hi + 1) % m;
                tris.push((lo, hi, nhi));
                hi = nhi;
            }
            left = !left;
        }
        candidates.push(tris);
    }
    for tris in candidates {
        let mut diag: BTreeMap<(usize, usize), ArcId> = BTreeMap::new();
        let mut edge = |u: usize, v: usize| -> Side {
            if (u + 1) % m == v {
                return Side::Arc(side(u));
            }
            if (v + 1) % m == u {
                return Side::Arc(side(v));
            }
            let key = (u.min(v), u.max(v));
            let next = first_diag + diag.len() as ArcId;
            Side::Arc(*diag.entry(key).or_insert(next))
        };
        let triangles: Vec<Triangle> = tris
            .iter()
            .map(|&(u, v, w)| {
                let s = [edge(u, v), edge(v, w), edge(w, u)];
                Triangle::Plain(s)
            })
            .collect();
        let t = Triangulation::from_triangles(triangles);
        if t.surface_signature().ok() == Some(SurfaceSig::closed(g, 1)) && t.is_connected_max_2faces() {
            return t;
        }
    }
    unreachable!("no diagonal pattern gives a maximal triangulation for genus {g}")
}

/// Genus `g` with one boundary component carrying one marked point.
pub fn one_boundary_closed(g: u32) -> Triangulation {
    let base = once_punctured_closed(g);
    for which in 0..2 {
        let mut t = base.clone();
        insert_wedge(&mut t, 0, which);
        if t.surface_signature().ok() == Some(SurfaceSig::new(g, 0, vec![1])) && t.is_connected_max_2faces() {
            return t;
        }
    }
    unreachable!("wedge insertion failed for genus {g}")
}

fn pants() -> Triangulation {
    // sphere with three marked points from two triangles; each marked point then
    // becomes a boundary component, keeping arc 2 shared between the two faces
    let pillow = Triangulation::from_triangles(vec![Triangle::face(0, 1, 2), Triangle::face(0, 2, 1)]);
    let target = SurfaceSig::new(0, 0, vec![1, 1, 1]);
    for w0 in 0..2 {
        for w1 in 0..2 {
            for (e2, w2) in [(1, 0), (1, 1), (3, 0), (3, 1), (4, 0), (4, 1)] {
                let mut u = pillow.clone();
                insert_wedge(&mut u, 0, w0);
                insert_wedge(&mut u, 1, w1);
                insert_wedge(&mut u, e2, w2);
                if u.surface_signature().ok().as_ref() == Some(&target) && u.is_connected_max_2faces() {
                    return u;
                }
            }
        }
    }
    unreachable!("no wedge placement gives a pants base")
}

/// The literal bases of genus zero, keyed by signature.
pub fn genus_zero_bases() -> Vec<(&'static str, SurfaceSig, Triangulation)> {
    vec![
        (
            "unpunctured octagon",
            SurfaceSig::polygon(8),
            named(&[
                ["#0", "#1", "A"],
                ["#2", "#3", "B"],
                ["#4", "#5", "C"],
                ["#6", "#7", "D"],
                ["A", "B", "E"],
                ["C", "D", "E"],
            ]),
        ),
        (
            "once-punctured pentagon",
            SurfaceSig::disk(5, 1),
            named(&[["#0", "#1", "A"], ["#2", "#3", "B"], ["A", "X2", "X0"], ["B", "X4", "X2"], ["#4", "X0", "X4"]]),
        ),
        (
            "twice-punctured triangle",
            SurfaceSig::disk(3, 2),
            named(&[["#0", "#1", "A"], ["A", "X", "Y"], ["Y", "Z", "W"], ["X", "V", "Z"], ["#2", "W", "V"]]),
        ),
        (
            "thrice-punctured monogon",
            SurfaceSig::disk(1, 3),
            named(&[["#0", "x", "y"], ["y", "U", "V"], ["x", "W", "Z"], ["V", "S", "W"], ["U", "Z", "S"]]),
        ),
        (
            "4-punctured sphere",
            SurfaceSig::closed(0, 4),
            named(&[["e01", "e12", "e02"], ["e01", "e03", "e13"], ["e02", "e23", "e03"], ["e12", "e13", "e23"]]),
        ),
        (
            "5-punctured sphere",
            SurfaceSig::closed(0, 5),
            named(&[
                ["e01", "n1", "n0"],
                ["e12", "n2", "n1"],
                ["e20", "n0", "n2"],
                ["e01", "s0", "s1"],
                ["e12", "s1", "s2"],
                ["e20", "s2", "s0"],
            ]),
        ),
        (
            "annulus (4,1)",
            SurfaceSig::annulus(4, 1, 0),
            named(&[["#0", "#1", "a"], ["#2", "#3", "c"], ["a", "r", "p"], ["c", "q", "r"], ["#i", "q", "p"]]),
        ),
        (
            "annulus (2,2)",
            SurfaceSig::annulus(2, 2, 0),
            named(&[["#o0", "#o1", "gamma"], ["#i0", "#i1", "delta"], ["alpha", "gamma", "beta"], ["beta", "alpha", "delta"]]),
        ),
        (
            "once-punctured annulus (1,1)",
            SurfaceSig::annulus(1, 1, 1),
            named(&[["a", "b", "c"], ["c", "b2", "a2"], ["a2", "a", "#1"], ["b2", "b", "#2"]]),
        ),
        ("pair of pants (1,1,1)", SurfaceSig::new(0, 0, vec![1, 1, 1]), pants()),
    ]
}

/// Base name and triangulation for a genus-`g` family member.
fn genus_base(g: u32, with_boundary: bool) -> (String, Triangulation) {
    if with_boundary {
        (format!("genus {g} with one boundary point"), one_boundary_closed(g))
    } else {
        (format!("once-punctured closed genus {g}"), once_punctured_closed(g))
    }
}

/// All bases with their signatures; the genus families are listed up to `max_genus`.
pub fn base_library(max_genus: u32) -> Vec<(String, SurfaceSig, Triangulation)> {
    let mut out: Vec<_> = genus_zero_bases().into_iter().map(|(n, s, t)| (n.to_string(), s, t)).collect();
    for g in 1..=max_genus {
        for wb in [false, true] {
            let (name, t) = genus_base(g, wb);
            let sig = t.surface_signature().expect("genus base is valid");
            out.push((name, sig, t));
        }
    }
    out
}

fn plan_for(sig: &SurfaceSig) -> Result<(String, SurfaceSig, Triangulation), BuildError> {
    let flags = sig.exceptions()?;
    if let Some(item) = flags.iter().find_map(|f| match f {
        ExceptionFlag::NoConnectedMax2Faces { item } => Some(*item),
        _ => None,
    }) {
        return Err(BuildError::ExceptionSurface { sig: sig.clone(), item });
    }
    let (g, p, h) = (sig.g, sig.p, sig.h());
    let pick = |name: &str| -> (String, SurfaceSig, Triangulation) {
        let (n, s, t) = genus_zero_bases().into_iter().find(|(n, _, _)| *n == name).unwrap();
        (n.to_string(), s, t)
    };
    if g >= 1 {
        let (name, t) = genus_base(g, p == 0);
        let s = t.surface_signature()?;
        return Ok((name, s, t));
    }
    Ok(match (h.len(), p) {
        (0, 4) => pick("4-punctured sphere"),
        (0, _) => pick("5-punctured sphere"),
        (1, 0) => pick("unpunctured octagon"),
        (1, 1) => pick("once-punctured pentagon"),
        (1, 2) => pick("twice-punctured triangle"),
        (1, _) => pick("thrice-punctured monogon"),
        (2, 0) if h[1] == 1 => pick("annulus (4,1)"),
        (2, 0) => pick("annulus (2,2)"),
        (_, 0) => pick("pair of pants (1,1,1)"),
        _ => pick("once-punctured annulus (1,1)"),
    })
}

fn first_face(t: &Triangulation) -> usize {
    (0..t.triangles.len()).find(|&i| t.triangle_kind(i) == TriangleKind::Face).expect("a face exists")
}

/// A connected maximal triangulation with at least two faces and its construction plan.
pub fn build_max_connected(sig: &SurfaceSig) -> Result<(Triangulation, BuildPlan), BuildError> {
    if !sig.is_valid() {
        return Err(SurfaceError::Invalid(sig.clone()).into());
    }
    let (base, base_sig, mut t) = plan_for(sig)?;
    let mut steps = Vec::new();
    let mut run = |t: &mut Triangulation, step: BuildStep| -> Result<(), BuildError> {
        *t = apply_step(t, &step)?;
        steps.push(step);
        Ok(())
    };
    for _ in base_sig.b()..sig.b() {
        let face = first_face(&t);
        run(&mut t, BuildStep::AddBoundaryPuncturedComponent { face })?;
    }
    for _ in base_sig.p..sig.p {
        let face = first_face(&t);
        run(&mut t, BuildStep::AddPuncture { face })?;
    }
    // match current components to targets, both sorted by size
    let asm = t.validate()?;
    let mut comps: Vec<(u32, SegId)> = asm.boundary_cycles.iter().map(|c| (c.len() as u32, c[0])).collect();
    comps.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for (&(have, seg), &want) in comps.iter().zip(sig.h()) {
        debug_assert!(have <= want);
        for _ in have..want {
            run(&mut t, BuildStep::AddBoundaryMarkedPoint { component: seg })?;
        }
    }
    let t = t.with_declared_sig(sig.clone());
    t.validate()?;
    Ok((t, BuildPlan { base, steps }))
}

/// Marked points `0..m` on the boundary of a disk joined to one puncture.
fn punctured_star(m: u32) -> Triangulation {
    let tris: Vec<Triangle> = (0..m)
        .map(|i| Triangle::plain(Side::Bdry(i), Side::Arc((i + 1) % m), Side::Arc(i)))
        .collect();
    Triangulation::from_triangles(tris)
}

/// Any triangulation of `sig`, including the exceptional surfaces.
pub fn seed_triangulation(sig: &SurfaceSig) -> Result<Triangulation, BuildError> {
    if !sig.is_valid() {
        return Err(SurfaceError::Invalid(sig.clone()).into());
    }
    let t = match build_max_connected(sig) {
        Ok((t, _)) => return Ok(t),
        Err(BuildError::ExceptionSurface { .. }) => match (sig.p, sig.h()) {
            (0, [m]) => fan(*m),
            (1, [m]) => punctured_star(*m),
            (2, [1]) => named(&[["#0", "x", "y"], ["y", "U", "V"], ["x", "V", "U"]]),
            (2, [2]) => {
                let mut t = punctured_star(2);
                subdivide(&mut t, 0);
                t
            }
            (0, [m, 1]) => {
                if *m == 1 {
                    named(&[["#o", "p", "q"], ["#i", "p", "q"]])
                } else {
                    let mut best = None;
                    for which in 0..2 {
                        let mut t = punctured_star(*m);
                        insert_wedge(&mut t, 0, which);
                        if t.surface_signature().ok().as_ref() == Some(sig) {
                            best = Some(t);
                        }
                    }
                    best.expect("annulus seed")
                }
            }
            _ => unreachable!("every exception surface has a seed"),
        },
        Err(e) => return Err(e),
    };
    Ok(t.with_declared_sig(sig.clone()))
}

/// Fan triangulation of an unpunctured `m`-gon from vertex 0.
pub fn fan(m: u32) -> Triangulation {
    let mut tris = Vec::new();
    for k in 0..m - 2 {
        let left = if k == 0 { Side::Bdry(0) } else { Side::Arc(k - 1) };
        let right = if k == m - 3 { Side::Bdry(m - 1) } else { Side::Arc(k) };
        tris.push(Triangle::plain(left, Side::Bdry(k + 1), right));
    }
    Triangulation::from_triangles(tris)
}
