use surface_quivers::blocks::{annulus_22_quiver, enumerate_decompositions, is_unique, BlockKind, SearchLimits, Uniqueness};
use surface_quivers::Quiver;

fn show(name: &str, q: &Quiver) {
    let e = enumerate_decompositions(q, &BlockKind::ALL, SearchLimits::default()).unwrap();
    println!("{name}: {} decompositions ({} search nodes)", e.decompositions.len(), e.nodes);
    for d in &e.decompositions {
        let t = d.to_triangulation(q.n());
        println!("    {d}  ->  {}", t.surface_signature().unwrap());
    }
    let verdict = match is_unique(q, 1_000_000).unwrap() {
        Uniqueness::Unique(_) => "unique".to_string(),
        Uniqueness::Multiple(ds) => format!("{} distinct", ds.len()),
        Uniqueness::None => "none".to_string(),
    };
    println!("    {verdict}");
}

fn main() {
    show("markov", &Quiver::markov());
    show("A3", &Quiver::path(3));
    show("annulus (2,2)", &annulus_22_quiver());
    show("oriented 4-cycle", &Quiver::cycle(4));
}
