use std::io::Write;

use surface_quivers::cli::{run, Status};

fn main() {
    let r = run(std::env::args_os());
    if r.status == Status::Usage {
        let _ = std::io::stderr().write_all(r.output.as_bytes());
    } else {
        let _ = std::io::stdout().write_all(r.output.as_bytes());
    }
    std::process::exit(r.status.exit_code());
}
