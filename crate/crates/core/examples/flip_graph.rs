//! Flip graphs of polygons. Vertex counts are Catalan numbers.
use surface_quivers::explore::{enumerate_triangulations, flip_neighbors};
use surface_quivers::SurfaceSig;

fn main() {
    for m in 4..=9 {
        let g = enumerate_triangulations(&SurfaceSig::polygon(m), 100_000).unwrap();
        println!("{m}-gon: {} triangulations, {} flips", g.triangulations.len(), g.edges);
    }

    let sig: SurfaceSig = "g=0,p=1,h=(3)".parse().unwrap();
    let g = enumerate_triangulations(&sig, 10_000).unwrap();
    let t = &g.triangulations[0];
    println!("{sig}: {} triangulations", g.triangulations.len());
    for (arc, f) in flip_neighbors(t) {
        println!("  flip arc {arc}: {} triangles, self-folded {}", f.triangles.len(), f.triangles.iter().filter(|x| x.is_self_folded()).count());
    }
}
