//! Builds a triangulation with connected exchange quiver and the most faces
//! for a few surfaces, printing the construction steps.
use surface_quivers::builder::build_max_connected;
use surface_quivers::SurfaceSig;

fn main() {
    for s in ["g=0,p=3,h=(1)", "g=1,p=2,h=()", "g=0,p=1,h=(3,2)", "g=2,p=0,h=(1)", "g=0,p=1,h=(2)"] {
        let sig: SurfaceSig = s.parse().unwrap();
        match build_max_connected(&sig) {
            Ok((t, plan)) => {
                let q = t.exchange_quiver().unwrap();
                println!("{sig}: rank {} base {} faces {} edges {}", sig.rank().unwrap(), plan.base, t.faces().len(), q.edge_count());
                for step in &plan.steps {
                    println!("    {step}");
                }
            }
            Err(e) => println!("{sig}: {e}"),
        }
    }
}
