//! Mutating a quiver by vertex index or label.
use surface_quivers::Quiver;

fn main() {
    let q = Quiver::path(4);
    println!("A4 path:\n{}", q.to_text());

    let m = q.mutate(1).unwrap();
    println!("after mutating at 1:\n{}", m.to_text());
    assert_eq!(m.mutate(1).unwrap(), q);

    let labelled = Quiver::markov().with_labels(vec!["x".into(), "y".into(), "z".into()]).unwrap();
    let back = labelled.mutate_label("y").unwrap();
    // the Markov quiver is fixed by every mutation up to relabeling
    println!("markov after y isomorphic to markov: {}", back.find_isomorphism(&labelled).is_some());
    println!("{}", back.to_json());
}
