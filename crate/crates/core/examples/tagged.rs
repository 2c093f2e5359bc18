use std::collections::BTreeSet;

use surface_quivers::builder::seed_triangulation;
use surface_quivers::tagged::tau;

fn main() {
    let t = seed_triangulation(&"g=0,p=2,h=(2)".parse().unwrap()).unwrap();
    let tt = tau(&t).unwrap();
    let ps = tt.punctures().unwrap();
    println!("punctures: {ps:?}");

    let q = tt.exchange_quiver().unwrap();
    for p in &ps {
        let r = tt.retag(&BTreeSet::from([*p])).unwrap();
        let rq = r.exchange_quiver().unwrap();
        println!("retag at {p}: delta {:?}, quiver isomorphic: {}", r.delta_signature(*p).unwrap(), rq.find_isomorphism(&q).is_some());
    }
    println!("{}", tt.to_json());
}
