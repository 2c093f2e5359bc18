//! Recovering a surface from an exchange quiver, then transporting
//! triangles between two triangulations with isomorphic quivers.
use surface_quivers::builder::build_max_connected;
use surface_quivers::reconstruct::{recover, transport, Recovery, DEFAULT_MAX_NODES};
use surface_quivers::SurfaceSig;

fn main() {
    let sig: SurfaceSig = "g=1,p=1,h=(2)".parse().unwrap();
    let (t1, _) = build_max_connected(&sig).unwrap();
    let q = t1.exchange_quiver().unwrap();
    println!("{sig}: quiver with {} vertices and {} arrows", q.n(), q.edge_count());

    // forget the surface and recover it from a relabeled quiver
    let perm: Vec<usize> = (0..q.n()).rev().collect();
    let shuffled = q.permuted(&perm);
    let t2 = match recover(&shuffled, DEFAULT_MAX_NODES).unwrap() {
        Recovery::Recovered(c) => {
            println!("recovered {} from {}", c.sig, c.decomposition);
            c.triangulation
        }
        Recovery::Ambiguous(cs) => panic!("{} candidates", cs.len()),
        Recovery::NotInClass => panic!("not a surface quiver"),
    };

    let phi = q.find_isomorphism(&t2.exchange_quiver().unwrap()).unwrap();
    let c = transport(&t1, &phi, &t2).unwrap();
    println!("triangle map: {:?}", c.triangles);
    println!("segment map: {:?}", c.segments);

    for s in ["g=0,p=4,h=()", "g=0,p=0,h=(2,2)"] {
        let (t, _) = build_max_connected(&s.parse().unwrap()).unwrap();
        let r = recover(&t.exchange_quiver().unwrap(), DEFAULT_MAX_NODES).unwrap();
        let sigs: Vec<String> = r.candidates().iter().map(|c| c.sig.to_string()).collect();
        println!("{s}: candidates {sigs:?}");
    }
}
