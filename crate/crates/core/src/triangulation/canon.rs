use std::collections::{BTreeMap, VecDeque};

use super::{ArcId, Side, Slot, Triangle, Triangulation};

/// Isomorphism-invariant code of a triangulation with labelled boundary segments
/// and anonymous arcs.
pub type CanonicalCode = Vec<u64>;

const PLAIN: u64 = 0;
const FOLDED: u64 = 1;

impl Triangulation {
    /// Two triangulations get the same code exactly when an orientation-preserving
    /// gluing isomorphism fixing every boundary segment maps one onto the other.
    pub fn canonical_code(&self) -> CanonicalCode {
        let slots = self.arc_slots();
        let starts: Vec<Slot> = match self.first_boundary_slot() {
            Some(s) => vec![s],
            None => (0..self.triangles.len())
                .flat_map(|t| {
                    let rots = if self.triangles[t].is_self_folded() { 1 } else { 3 };
                    (0..rots).map(move |r| (t, r))
                })
                .collect(),
        };
        starts.into_iter().map(|s| self.code_from(&slots, s)).min().unwrap_or_default()
    }

    fn first_boundary_slot(&self) -> Option<Slot> {
        let mut best: Option<(u32, Slot)> = None;
        for (t, tri) in self.triangles.iter().enumerate() {
            for (i, s) in tri.sides().iter().enumerate() {
                if let Side::Bdry(b) = s {
                    if best.is_none_or(|(x, _)| *b < x) {
                        best = Some((*b, (t, i)));
                    }
                }
            }
        }
        best.map(|(_, s)| s)
    }

    fn code_from(&self, slots: &BTreeMap<ArcId, Vec<Slot>>, start: Slot) -> CanonicalCode {
        let nt = self.triangles.len();
        let mut rotation = vec![usize::MAX; nt];
        let mut arc_num: BTreeMap<ArcId, u64> = BTreeMap::new();
        let mut code = Vec::with_capacity(4 * nt);
        let mut queue = VecDeque::new();
        let entry_rot = |t: usize, i: usize| if self.triangles[t].is_self_folded() { 0 } else { i };
        rotation[start.0] = entry_rot(start.0, start.1);
        queue.push_back(start.0);
        while let Some(t) = queue.pop_front() {
            let r = rotation[t];
            let sides = self.triangles[t].sides();
            code.push(if matches!(self.triangles[t], Triangle::SelfFolded { .. }) { FOLDED } else { PLAIN });
            for k in 0..3 {
                let i = (r + k) % 3;
                match sides[i] {
                    Side::Bdry(b) => code.push(2 * b as u64 + 1),
                    Side::Arc(a) => {
                        let next = arc_num.len() as u64;
                        let num = *arc_num.entry(a).or_insert(next);
                        code.push(2 * num);
                    }
                }
            }
            for k in 0..3 {
                let i = (r + k) % 3;
                if let Some((u, j)) = self.opposite_slot(slots, t, i) {
                    if rotation[u] == usize::MAX {
                        rotation[u] = entry_rot(u, j);
                        queue.push_back(u);
                    }
                }
            }
        }
        code
    }
}
