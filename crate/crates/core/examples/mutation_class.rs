use surface_quivers::builder::seed_triangulation;
use surface_quivers::explore::mutation_class;
use surface_quivers::Quiver;

fn main() {
    for n in 2..=6 {
        let c = mutation_class(&Quiver::path(n), 10_000).unwrap();
        println!("A{n}: {} quivers", c.quivers.len());
    }

    let q = seed_triangulation(&"g=0,p=1,h=(4)".parse().unwrap()).unwrap().exchange_quiver().unwrap();
    let c = mutation_class(&q, 10_000).unwrap();
    println!("once-punctured square (D4): {} quivers, contains the 4-cycle: {}", c.quivers.len(), c.contains(&Quiver::cycle(4)));

    let c = mutation_class(&Quiver::from_arrows(2, &[(0, 1, 3)]).unwrap(), 10).unwrap();
    println!("Kronecker with 3 arrows: {} quivers", c.quivers.len());
}
