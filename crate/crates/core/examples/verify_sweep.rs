//! Exhaustive consistency checks over every triangulation of a few small surfaces.
use surface_quivers::explore::verify_sweep;

fn main() {
    for s in ["g=0,p=0,h=(7)", "g=0,p=1,h=(3)", "g=1,p=1,h=()", "g=0,p=0,h=(2,1)"] {
        let r = verify_sweep(&s.parse().unwrap(), 20_000).unwrap();
        println!("{s}: {} triangulations, {} maximal, {} flips, failed {}", r.triangulations, r.maximal, r.flip_edges, r.failed());
        for (name, c) in &r.checks {
            println!("    {name:<18} {:>6} passed {:>4} skipped", c.passed, c.skipped);
        }
    }
}
