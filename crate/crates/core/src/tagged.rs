//! Tagged triangulations stored as an ordinary base plus a set of notched arc ends.
//!
//! Arc ends are numbered by the orientation of the arc's first side slot. The loop
//! of a self-folded triangle stands for the tagged arc that runs along the radius,
//! so its two ends are the radius's ends: `0` at the base point, `1` at the puncture.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quiver::Quiver;
use crate::triangulation::{ArcId, Assembly, TriangError, Triangle, Triangulation, TriangulationDoc};

/// `(arc, end)` with `end` in `{0, 1}`.
pub type ArcEnd = (ArcId, u8);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TaggedError {
    #[error(transparent)]
    Base(#[from] TriangError),
    #[error("arc end {0:?} does not exist")]
    NoSuchEnd(ArcEnd),
    #[error("arc end {0:?} lies on the boundary and must be plain")]
    BoundaryNotch(ArcEnd),
    #[error("tags disagree at puncture {0}")]
    MixedPuncture(usize),
    #[error("self-folded pair ({loop_arc}, {radius}) does not give two distinct compatible tagged arcs")]
    BadPair { loop_arc: ArcId, radius: ArcId },
    #[error("once-punctured closed surfaces carry plain tags only")]
    ClosedOncePunctured,
    #[error("marked point {0} is not a puncture")]
    NotAPuncture(usize),
    #[error("format error: {0}")]
    Format(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedTriangulation {
    pub base: Triangulation,
    pub notched: BTreeSet<ArcEnd>,
}

impl TaggedTriangulation {
    pub fn all_plain(base: Triangulation) -> Self {
        TaggedTriangulation { base, notched: BTreeSet::new() }
    }

    /// Marked points at the two ends of every tagged arc.
    fn ends(&self, asm: &Assembly) -> BTreeMap<ArcId, [usize; 2]> {
        let radius_of: BTreeMap<ArcId, ArcId> = self.base.loop_of_radius().into_iter().map(|(r, l)| (l, r)).collect();
        self.base
            .arcs
            .iter()
            .map(|&a| (a, asm.arc_ends(*radius_of.get(&a).unwrap_or(&a))))
            .collect()
    }

    fn ends_at(&self, asm: &Assembly, y: usize) -> Vec<ArcEnd> {
        let mut out = Vec::new();
        for (a, e) in self.ends(asm) {
            for k in 0..2u8 {
                if e[k as usize] == y {
                    out.push((a, k));
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<Assembly, TaggedError> {
        let asm = self.base.validate()?;
        let ends = self.ends(&asm);
        for &(a, k) in &self.notched {
            let e = ends.get(&a).ok_or(TaggedError::NoSuchEnd((a, k)))?;
            if k > 1 {
                return Err(TaggedError::NoSuchEnd((a, k)));
            }
            if asm.on_boundary[e[k as usize]] {
                return Err(TaggedError::BoundaryNotch((a, k)));
            }
        }
        if asm.sig.h().is_empty() && asm.sig.p == 1 && !self.notched.is_empty() {
            return Err(TaggedError::ClosedOncePunctured);
        }
        let pairs = self.base.loop_of_radius();
        for (&radius, &loop_arc) in &pairs {
            let n = |x: ArcEnd| self.notched.contains(&x);
            if n((loop_arc, 1)) == n((radius, 1)) || n((loop_arc, 0)) != n((radius, 0)) {
                return Err(TaggedError::BadPair { loop_arc, radius });
            }
        }
        let enclosed: BTreeSet<usize> = pairs.keys().map(|&r| asm.arc_ends(r)[1]).collect();
        for y in asm.punctures() {
            if enclosed.contains(&y) {
                continue;
            }
            let tags: BTreeSet<bool> = self.ends_at(&asm, y).into_iter().map(|e| self.notched.contains(&e)).collect();
            if tags.len() > 1 {
                return Err(TaggedError::MixedPuncture(y));
            }
        }
        Ok(asm)
    }

    /// `+1` when every end at `y` is plain, `-1` when every end is notched, `0` otherwise.
    pub fn delta_signature(&self, y: usize) -> Result<i8, TaggedError> {
        let asm = self.validate()?;
        if y >= asm.vertex_count || asm.on_boundary[y] {
            return Err(TaggedError::NotAPuncture(y));
        }
        Ok(self.delta_unchecked(&asm, y))
    }

    fn delta_unchecked(&self, asm: &Assembly, y: usize) -> i8 {
        let ends = self.ends_at(asm, y);
        let notched = ends.iter().filter(|e| self.notched.contains(e)).count();
        if notched == 0 {
            1
        } else if notched == ends.len() {
            -1
        } else {
            0
        }
    }

    /// The ordinary triangulation: uniformly notched punctures become plain and each
    /// doubled pair is drawn with the notched copy as the loop.
    pub fn to_ordinary(&self) -> Result<Triangulation, TaggedError> {
        self.validate()?;
        let mut swap = BTreeMap::new();
        for (r, l) in self.base.loop_of_radius() {
            if self.notched.contains(&(r, 1)) {
                swap.insert(r, l);
                swap.insert(l, r);
            }
        }
        Ok(self.base.rename_arcs(&swap))
    }

    /// Flips the tags at every end lying at a puncture in `punctures`.
    pub fn retag(&self, punctures: &BTreeSet<usize>) -> Result<TaggedTriangulation, TaggedError> {
        let asm = self.validate()?;
        for &y in punctures {
            if y >= asm.vertex_count || asm.on_boundary[y] {
                return Err(TaggedError::NotAPuncture(y));
            }
        }
        if asm.sig.h().is_empty() && asm.sig.p == 1 {
            return Ok(self.clone());
        }
        let mut notched = self.notched.clone();
        for (a, e) in self.ends(&asm) {
            for k in 0..2u8 {
                if punctures.contains(&e[k as usize]) && !notched.remove(&(a, k)) {
                    notched.insert((a, k));
                }
            }
        }
        Ok(TaggedTriangulation { base: self.base.clone(), notched })
    }

    pub fn exchange_quiver(&self) -> Result<Quiver, TaggedError> {
        Ok(self.to_ordinary()?.exchange_quiver()?)
    }

    pub fn punctures(&self) -> Result<Vec<usize>, TaggedError> {
        Ok(self.validate()?.punctures())
    }

    pub fn to_doc(&self) -> TaggedDoc {
        TaggedDoc {
            triangulation: self.base.to_doc(),
            tags: self.notched.iter().map(|&(a, k)| (a, k, "notched".to_string())).collect(),
        }
    }

    pub fn from_doc(doc: &TaggedDoc) -> Result<Self, TaggedError> {
        let base = Triangulation::from_doc(&doc.triangulation)?;
        let mut notched = BTreeSet::new();
        for (a, k, tag) in &doc.tags {
            match tag.as_str() {
                "notched" => {
                    notched.insert((*a, *k));
                }
                "plain" => {}
                other => return Err(TaggedError::Format(format!("unknown tag `{other}`"))),
            }
        }
        Ok(TaggedTriangulation { base, notched })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("tagged triangulation serialises")
    }

    pub fn from_json(s: &str) -> Result<Self, TaggedError> {
        let doc: TaggedDoc = serde_json::from_str(s).map_err(|e| TaggedError::Format(e.to_string()))?;
        Self::from_doc(&doc)
    }
}

/// Each self-folded pair becomes a plain radius and a copy notched at the enclosed puncture.
pub fn tau(u: &Triangulation) -> Result<TaggedTriangulation, TaggedError> {
    u.validate()?;
    let notched = u
        .triangles
        .iter()
        .filter_map(|t| match *t {
            Triangle::SelfFolded { loop_arc, .. } => Some((loop_arc, 1)),
            _ => None,
        })
        .collect();
    Ok(TaggedTriangulation { base: u.clone(), notched })
}

/// Triangulation JSON with an extra `"tags": [[arc, end, "notched"], ...]` list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedDoc {
    #[serde(flatten)]
    pub triangulation: TriangulationDoc,
    #[serde(default)]
    pub tags: Vec<(ArcId, u8, String)>,
}
