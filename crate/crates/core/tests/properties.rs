use std::collections::BTreeSet;

use proptest::prelude::*;
use surface_quivers::builder::seed_triangulation;
use surface_quivers::explore::flip_neighbors;
use surface_quivers::tagged::tau;
use surface_quivers::{Quiver, SurfaceSig, Triangulation};

fn quiver(max_n: usize, max_mult: i64) -> impl Strategy<Value = Quiver> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(-max_mult..=max_mult, n * (n - 1) / 2).prop_map(move |upper| {
            let mut b = vec![0i64; n * n];
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    b[i * n + j] = upper[k];
                    b[j * n + i] = -upper[k];
                    k += 1;
                }
            }
            Quiver::from_signed(n, &b).unwrap()
        })
    })
}

fn quiver_and_perm() -> impl Strategy<Value = (Quiver, Vec<usize>)> {
    quiver(7, 2).prop_flat_map(|q| {
        let n = q.n();
        (Just(q), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

const SIGS: &[&str] = &["g=0,p=0,h=(7)", "g=1,p=1,h=()", "g=0,p=1,h=(4)", "g=0,p=2,h=(2)", "g=0,p=0,h=(3,2)", "g=1,p=0,h=(2)", "g=0,p=4,h=()"];

/// A seed triangulation moved by a random flip sequence.
fn triangulation() -> impl Strategy<Value = Triangulation> {
    (0..SIGS.len(), proptest::collection::vec(any::<prop::sample::Index>(), 0..12)).prop_map(|(s, steps)| {
        let sig: SurfaceSig = SIGS[s].parse().unwrap();
        let mut t = seed_triangulation(&sig).unwrap();
        for ix in steps {
            let nb = flip_neighbors(&t);
            t = nb[ix.index(nb.len())].1.clone();
        }
        t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mutation_is_an_involution(q in quiver(7, 3), k in any::<prop::sample::Index>()) {
        let k = k.index(q.n());
        prop_assert_eq!(q.mutate(k).unwrap().mutate(k).unwrap(), q);
    }

    #[test]
    fn mutation_keeps_skew_symmetry(q in quiver(7, 3), k in any::<prop::sample::Index>()) {
        let m = q.mutate(k.index(q.n())).unwrap();
        let n = m.n();
        let b = m.signed_matrix();
        for i in 0..n {
            prop_assert_eq!(b[i * n + i], 0);
            for j in 0..n {
                prop_assert_eq!(b[i * n + j], -b[j * n + i]);
            }
        }
    }

    #[test]
    fn mutation_commutes_with_relabeling((q, p) in quiver_and_perm(), k in any::<prop::sample::Index>()) {
        let k = k.index(q.n());
        prop_assert_eq!(q.mutate(k).unwrap().permuted(&p), q.permuted(&p).mutate(p[k]).unwrap());
    }

    #[test]
    fn canonical_form_ignores_relabeling((q, p) in quiver_and_perm()) {
        let r = q.permuted(&p);
        prop_assert_eq!(q.canonical_form().certificate, r.canonical_form().certificate);
        prop_assert_eq!(q.canonical_quiver(), r.canonical_quiver());
    }

    #[test]
    fn isomorphisms_go_both_ways((q, p) in quiver_and_perm()) {
        let r = q.permuted(&p);
        let f = q.find_isomorphism(&r).unwrap();
        prop_assert!(q.is_isomorphism(&r, &f));
        let g = r.find_isomorphism(&q).unwrap();
        prop_assert!(r.is_isomorphism(&q, &g));
        prop_assert!(q.is_isomorphism(&r, &p));
    }

    #[test]
    fn canonical_form_separates_non_isomorphic(a in quiver(5, 2), b in quiver(5, 2)) {
        let same = a.canonical_form().certificate == b.canonical_form().certificate;
        prop_assert_eq!(same, a.find_isomorphism(&b).is_some());
    }

    #[test]
    fn text_and_json_round_trip(q in quiver(7, 3)) {
        prop_assert_eq!(Quiver::parse(&q.to_json()).unwrap(), q.clone());
        prop_assert_eq!(Quiver::parse(&q.to_text()).unwrap().signed_matrix(), q.signed_matrix());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flipping_twice_returns(t in triangulation()) {
        let code = t.canonical_code();
        for (a, f) in flip_neighbors(&t) {
            prop_assert_eq!(f.flip(a).unwrap().canonical_code(), code.clone());
        }
    }

    #[test]
    fn flips_realise_mutations(t in triangulation()) {
        let q = t.exchange_quiver().unwrap();
        let arcs: Vec<_> = t.arcs.iter().copied().collect();
        for (a, f) in flip_neighbors(&t) {
            let k = arcs.iter().position(|&x| x == a).unwrap();
            prop_assert_eq!(f.exchange_quiver().unwrap(), q.mutate(k).unwrap());
        }
    }

    #[test]
    fn flips_keep_the_surface(t in triangulation()) {
        let sig = t.surface_signature().unwrap();
        prop_assert_eq!(t.arc_count() as u32, sig.rank().unwrap());
        for (_, f) in flip_neighbors(&t) {
            prop_assert_eq!(f.surface_signature().unwrap(), sig.clone());
        }
    }

    #[test]
    fn triangulation_json_round_trip(t in triangulation()) {
        prop_assert_eq!(Triangulation::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn retagging_is_a_group_action(t in triangulation(), x in any::<u64>(), y in any::<u64>()) {
        let tt = tau(&t).unwrap();
        let ps = tt.punctures().unwrap();
        let pick = |bits: u64| -> BTreeSet<usize> { ps.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &p)| p).collect() };
        let (a, b) = (pick(x), pick(y));
        let both: BTreeSet<usize> = a.symmetric_difference(&b).copied().collect();
        prop_assert_eq!(tt.retag(&a).unwrap().retag(&b).unwrap(), tt.retag(&both).unwrap());
        prop_assert_eq!(tt.retag(&a).unwrap().exchange_quiver().unwrap().edge_count(), t.exchange_quiver().unwrap().edge_count());
    }

    #[test]
    fn untagging_inverts_tau(t in triangulation()) {
        let tt = tau(&t).unwrap();
        prop_assert_eq!(tt.to_ordinary().unwrap(), t.clone());
        prop_assert_eq!(tt.exchange_quiver().unwrap(), t.exchange_quiver().unwrap());
    }
}
