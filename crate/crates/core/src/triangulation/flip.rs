use super::{ArcId, Side, TriangError, Triangle, Triangulation};

impl Triangulation {
    /// Whether `a` can be flipped: any arc that is not a radius.
    pub fn is_flippable(&self, a: ArcId) -> bool {
        self.arcs.contains(&a) && !self.radii().contains(&a)
    }

    /// Replaces `a` by the other diagonal of its quadrilateral. The new arc keeps the id `a`.
    pub fn flip(&self, a: ArcId) -> Result<Triangulation, TriangError> {
        if !self.arcs.contains(&a) {
            return Err(TriangError::NoSuchArc(a));
        }
        if self.radii().contains(&a) {
            return Err(TriangError::RadiusFlip(a));
        }
        let slots = self.arc_slots();
        let s = &slots[&a];
        if s.len() != 2 {
            return Err(TriangError::ArcSlots { arc: a, count: s.len() });
        }
        let (mut t1, mut i1) = s[0];
        let (mut t2, mut i2) = s[1];
        if t1 == t2 {
            return Err(TriangError::RepeatedSide(t1));
        }
        // a self-folded triangle on the loop side plays the role of the second triangle
        if self.triangles[t1].is_self_folded() {
            std::mem::swap(&mut t1, &mut t2);
            std::mem::swap(&mut i1, &mut i2);
        }
        let rot = |t: usize, i: usize| {
            let sd = self.triangles[t].sides();
            [sd[i], sd[(i + 1) % 3], sd[(i + 2) % 3]]
        };
        let [_, x1, y1] = rot(t1, i1);
        let [_, x2, y2] = rot(t2, i2);
        let na = Side::Arc(a);
        let mut out = self.clone();
        out.triangles[t1] = Triangle::from_sides([y1, x2, na]);
        out.triangles[t2] = Triangle::from_sides([y2, x1, na]);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::samples::*;
    use super::*;
    use crate::surface::SurfaceSig;

    #[test]
    fn pentagon_fan_flip() {
        let t = polygon_fan(5);
        let f = t.flip(0).unwrap();
        assert_eq!(f.surface_signature().unwrap(), SurfaceSig::polygon(5));
        assert_ne!(f.normalized(), t.normalized());
        assert_eq!(f.flip(0).unwrap().normalized(), t.normalized());
    }

    #[test]
    fn torus_flip_stays_markov_type() {
        let t = torus();
        for a in 0..3 {
            let f = t.flip(a).unwrap();
            assert_eq!(f.surface_signature().unwrap(), SurfaceSig::closed(1, 1));
            let q = f.exchange_quiver().unwrap();
            assert_eq!(q, t.exchange_quiver().unwrap().mutate(a as usize).unwrap());
            assert_eq!(q.edge_count(), 6);
        }
    }

    #[test]
    fn radius_is_rejected() {
        let t = punctured_triangle_self_folded();
        assert_eq!(t.flip(1), Err(TriangError::RadiusFlip(1)));
        assert_eq!(t.flip(9), Err(TriangError::NoSuchArc(9)));
    }

    #[test]
    fn loop_flip_removes_self_folded_and_back() {
        let t = punctured_triangle_self_folded();
        let f = t.flip(0).unwrap();
        assert!(f.triangles.iter().all(|x| !x.is_self_folded()));
        assert_eq!(f.surface_signature().unwrap(), SurfaceSig::disk(3, 1));
        assert_eq!(f.exchange_quiver().unwrap(), t.exchange_quiver().unwrap().mutate(0).unwrap());
        let back = f.flip(0).unwrap();
        assert_eq!(back.normalized(), t.normalized());
    }
}
