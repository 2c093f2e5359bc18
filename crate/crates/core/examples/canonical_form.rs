use surface_quivers::Quiver;

fn main() {
    let q = Quiver::from_arrows(4, &[(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 0, 1)]).unwrap();
    let r = q.permuted(&[2, 0, 3, 1]);

    let (cq, cr) = (q.canonical_form(), r.canonical_form());
    println!("certificate q: {}", cq.certificate);
    println!("certificate r: {}", cr.certificate);
    assert_eq!(cq.certificate, cr.certificate);

    let f = q.find_isomorphism(&r).unwrap();
    println!("isomorphism q -> r: {f:?}");
    println!("automorphisms of the 5-cycle: {}", Quiver::cycle(5).automorphism_count(1000).unwrap());
}
