//! The `surfq` command line.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::blocks::{enumerate_decompositions, BlockKind, SearchLimits};
use crate::builder::{build_max_connected, BuildError};
use crate::explore::{enumerate_triangulations, match1_pairs, mutation_class, verify_sweep, SweepReport};
use crate::quiver::Quiver;
use crate::reconstruct::{recover, Candidate, Recovery, DEFAULT_MAX_NODES};
use crate::surface::SurfaceSig;
use crate::tagged::TaggedTriangulation;
use crate::triangulation::{Side, Triangulation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
    Usage,
    Budget,
    ExceptionSurface,
    Ambiguous,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::Ambiguous => 0,
            Status::Violation => 1,
            Status::Usage => 2,
            Status::Budget => 3,
            Status::ExceptionSurface => 4,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violation => "violation",
            Status::Usage => "usage",
            Status::Budget => "budget",
            Status::ExceptionSurface => "exception-surface",
            Status::Ambiguous => "ambiguous",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub status: Status,
    /// JSON document, DOT text, or an error message for usage errors.
    pub output: String,
}

impl CommandResult {
    fn json(status: Status, mut v: Value) -> Self {
        if let Value::Object(m) = &mut v {
            m.insert("format".into(), json!(1));
            m.insert("status".into(), json!(status.name()));
        }
        CommandResult { status, output: serde_json::to_string_pretty(&v).expect("json serialises") + "\n" }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        CommandResult { status: Status::Usage, output: format!("error: {msg}\n") }
    }
}

#[derive(Parser, Debug)]
#[command(name = "surfq", version, about = "Triangulated surfaces, exchange quivers and their block decompositions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Jobs {
    /// Worker threads.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Connected maximal triangulation with at least two faces.
    Build {
        #[arg(long)]
        sig: SurfaceSig,
    },
    /// Exchange quiver of a (tagged) triangulation.
    Quiver {
        #[arg(long)]
        triangulation: PathBuf,
        /// Plain text instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Mutates a quiver at the given vertices or along a random sequence.
    Mutate {
        #[arg(long)]
        quiver: PathBuf,
        /// Vertex indices or labels, applied left to right.
        #[arg(long, value_delimiter = ',')]
        at: Vec<String>,
        #[arg(long, conflicts_with = "at")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Flips one arc.
    Flip {
        #[arg(long)]
        triangulation: PathBuf,
        #[arg(long)]
        arc: u32,
    },
    /// Flip-graph closure from the seed triangulation.
    Enumerate {
        #[arg(long)]
        sig: SurfaceSig,
        #[arg(long)]
        cap: usize,
        /// Include every triangulation in the output.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        jobs: Jobs,
    },
    /// Mutation class up to isomorphism.
    MutationClass {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        cap: usize,
        #[command(flatten)]
        jobs: Jobs,
    },
    /// Block decompositions of a quiver.
    Decompose {
        #[arg(long)]
        quiver: PathBuf,
        /// List every decomposition instead of stopping at the second.
        #[arg(long)]
        all: bool,
        /// Allowed block kinds, e.g. `I,II`.
        #[arg(long, value_delimiter = ',')]
        kinds: Vec<BlockKind>,
        #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
        max_nodes: u64,
    },
    /// Surface of a quiver.
    Reconstruct {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
        max_nodes: u64,
    },
    /// Verification sweep for one signature, or the standard suite.
    Verify {
        #[arg(long, required_unless_present = "suite")]
        sig: Option<SurfaceSig>,
        #[arg(long)]
        suite: bool,
        #[arg(long)]
        cap: usize,
        #[command(flatten)]
        jobs: Jobs,
    },
    /// DOT for a quiver or a triangulation.
    Render {
        #[arg(long, required_unless_present = "triangulation")]
        quiver: Option<PathBuf>,
        #[arg(long, conflicts_with = "quiver")]
        triangulation: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, CommandResult> {
    if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).map_err(CommandResult::usage)
    } else {
        std::fs::read_to_string(path).map_err(|e| CommandResult::usage(format!("{}: {e}", path.display())))
    }
}

fn read_quiver(path: &Path) -> Result<Quiver, CommandResult> {
    Quiver::parse(&read(path)?).map_err(CommandResult::usage)
}

fn read_tagged(path: &Path) -> Result<TaggedTriangulation, CommandResult> {
    let t = TaggedTriangulation::from_json(&read(path)?).map_err(CommandResult::usage)?;
    t.validate().map_err(CommandResult::usage)?;
    Ok(t)
}

fn with_jobs<T: Send>(jobs: &Jobs, f: impl FnOnce() -> T + Send) -> T {
    if jobs.jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs.jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("json serialises")
}

/// The standard sweep suite: small polygons and annuli, the once-punctured torus, the
/// once-punctured pentagon and the twice-punctured triangle.
pub fn standard_suite() -> Vec<SurfaceSig> {
    let mut s: Vec<SurfaceSig> = (4..=9).map(SurfaceSig::polygon).collect();
    s.extend([(1, 1), (2, 1), (2, 2), (3, 1)].map(|(a, b)| SurfaceSig::annulus(a, b, 0)));
    s.extend([SurfaceSig::closed(1, 1), SurfaceSig::disk(5, 1), SurfaceSig::disk(3, 2)]);
    s
}

fn candidate_value(c: &Candidate) -> Value {
    json!({
        "sig": c.sig.to_string(),
        "decomposition": c.decomposition.to_string(),
        "triangulation": to_value(&c.triangulation.to_doc()),
    })
}

fn triangulation_dot(t: &Triangulation) -> String {
    let mut s = String::from("graph T {\n");
    let slots = t.arc_slots();
    for (i, tri) in t.triangles.iter().enumerate() {
        let sides: Vec<String> = tri.sides().iter().map(Side::to_string).collect();
        let _ = writeln!(s, "  t{i} [shape=triangle, label=\"{}\"];", sides.join(" "));
    }
    for (a, sl) in &slots {
        if let [x, y] = sl[..] {
            let _ = writeln!(s, "  t{} -- t{} [label=\"{a}\"];", x.0, y.0);
        }
    }
    for (i, tri) in t.triangles.iter().enumerate() {
        for side in tri.sides() {
            if let Side::Bdry(b) = side {
                let _ = writeln!(s, "  b{b} [shape=point];\n  t{i} -- b{b} [style=bold];");
            }
        }
    }
    s.push_str("}\n");
    s
}

fn sweep_status(reports: &[SweepReport]) -> Status {
    if reports.iter().any(|r| !r.passed()) {
        Status::Violation
    } else {
        Status::Ok
    }
}

fn execute(cmd: Cmd) -> Result<CommandResult, CommandResult> {
    Ok(match cmd {
        Cmd::Build { sig } => match build_max_connected(&sig) {
            Ok((t, plan)) => CommandResult::json(
                Status::Ok,
                json!({ "sig": sig.to_string(), "plan": to_value(&plan), "triangulation": to_value(&t.to_doc()) }),
            ),
            Err(BuildError::ExceptionSurface { sig, item }) => CommandResult::json(
                Status::ExceptionSurface,
                json!({ "sig": sig.to_string(), "exception_item": item, "message": format!("{sig} is an exception surface") }),
            ),
            Err(e) => return Err(CommandResult::usage(e)),
        },
        Cmd::Quiver { triangulation, text } => {
            let q = read_tagged(&triangulation)?.exchange_quiver().map_err(CommandResult::usage)?;
            if text {
                CommandResult { status: Status::Ok, output: q.to_text() }
            } else {
                CommandResult { status: Status::Ok, output: q.to_json() + "\n" }
            }
        }
        Cmd::Mutate { quiver, at, random, rng_seed } => {
            let mut q = read_quiver(&quiver)?;
            let seq: Vec<usize> = match random {
                Some(len) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
                    (0..len).map(|_| rng.gen_range(0..q.n().max(1))).collect()
                }
                None => at
                    .iter()
                    .map(|s| s.parse::<usize>().ok().filter(|&k| k < q.n()).or_else(|| q.index_of_label(s)))
                    .collect::<Option<_>>()
                    .ok_or_else(|| CommandResult::usage(format!("unknown vertex in {at:?}")))?,
            };
            for &k in &seq {
                q = q.mutate(k).map_err(CommandResult::usage)?;
            }
            CommandResult::json(Status::Ok, json!({ "sequence": seq, "quiver": to_value(&q.to_doc()) }))
        }
        Cmd::Flip { triangulation, arc } => {
            let t = read_tagged(&triangulation)?.base;
            let f = t.flip(arc).map_err(CommandResult::usage)?;
            CommandResult { status: Status::Ok, output: f.to_json() + "\n" }
        }
        Cmd::Enumerate { sig, cap, list, jobs } => {
            let g = with_jobs(&jobs, || enumerate_triangulations(&sig, cap)).map_err(CommandResult::usage)?;
            let mut v = json!({
                "sig": sig.to_string(),
                "count": g.triangulations.len(),
                "maximal": g.triangulations.iter().filter(|t| t.maximal()).count(),
                "flip_edges": g.edges,
                "truncated": g.truncated,
            });
            if list {
                v["triangulations"] = g.triangulations.iter().map(|t| to_value(&t.to_doc())).collect();
            }
            CommandResult::json(if g.truncated { Status::Budget } else { Status::Ok }, v)
        }
        Cmd::MutationClass { quiver, cap, jobs } => {
            let q = read_quiver(&quiver)?;
            let c = with_jobs(&jobs, || mutation_class(&q, cap)).map_err(CommandResult::usage)?;
            let v = json!({
                "count": c.quivers.len(),
                "truncated": c.truncated,
                "max_edges": c.quivers.iter().map(Quiver::edge_count).max(),
                "quivers": c.quivers.iter().map(|q| to_value(&q.to_doc())).collect::<Vec<_>>(),
            });
            CommandResult::json(if c.truncated { Status::Budget } else { Status::Ok }, v)
        }
        Cmd::Decompose { quiver, all, kinds, max_nodes } => {
            let q = read_quiver(&quiver)?;
            let kinds = if kinds.is_empty() { BlockKind::ALL.to_vec() } else { kinds };
            let limits = SearchLimits { max_results: if all { usize::MAX } else { 2 }, max_nodes };
            let e = enumerate_decompositions(&q, &kinds, limits).map_err(CommandResult::usage)?;
            let budget = e.truncated && e.decompositions.len() < limits.max_results;
            let v = json!({
                "count": e.decompositions.len(),
                "complete": !e.truncated,
                "unique": (!e.truncated || !all && e.decompositions.len() > 1).then_some(e.decompositions.len() == 1),
                "decompositions": e.decompositions.iter().map(|d| json!({
                    "blocks": d.to_string(),
                    "sig": d.to_triangulation(q.n()).surface_signature().ok().map(|s| s.to_string()),
                })).collect::<Vec<_>>(),
            });
            CommandResult::json(if budget { Status::Budget } else { Status::Ok }, v)
        }
        Cmd::Reconstruct { quiver, max_nodes } => {
            let q = read_quiver(&quiver)?;
            match recover(&q, max_nodes) {
                Ok(Recovery::Recovered(c)) => {
                    let mut v = candidate_value(&c);
                    v["result"] = json!("recovered");
                    CommandResult::json(Status::Ok, v)
                }
                Ok(Recovery::Ambiguous(cs)) => CommandResult::json(
                    Status::Ambiguous,
                    json!({
                        "result": "ambiguous",
                        "sigs": cs.iter().map(|c| c.sig.to_string()).collect::<BTreeSet<_>>(),
                        "candidates": cs.iter().map(candidate_value).collect::<Vec<_>>(),
                    }),
                ),
                Ok(Recovery::NotInClass) => CommandResult::json(
                    Status::Violation,
                    json!({ "result": "not-in-class", "message": "no block decomposition assembles to a marked surface" }),
                ),
                Err(crate::reconstruct::ReconstructError::Blocks(e)) => {
                    CommandResult::json(Status::Budget, json!({ "message": e.to_string() }))
                }
                Err(e) => return Err(CommandResult::usage(e)),
            }
        }
        Cmd::Verify { sig, suite, cap, jobs } => {
            let sigs = if suite { standard_suite() } else { sig.into_iter().collect() };
            let reports = with_jobs(&jobs, || sigs.iter().map(|s| verify_sweep(s, cap)).collect::<Result<Vec<_>, _>>())
                .map_err(CommandResult::usage)?;
            let status = sweep_status(&reports);
            let mut v = json!({ "failed": reports.iter().map(SweepReport::failed).sum::<u64>(), "reports": to_value(&reports) });
            if suite {
                let all: Vec<Triangulation> = with_jobs(&jobs, || {
                    sigs.iter().flat_map(|s| enumerate_triangulations(s, cap).map(|g| g.triangulations).unwrap_or_default()).collect()
                });
                let (checked, bad) = match1_pairs(&all);
                v["cross_surface_match1"] = json!({ "checked": checked, "failed": bad.len() });
                if !bad.is_empty() {
                    return Ok(CommandResult::json(Status::Violation, v));
                }
            }
            CommandResult::json(status, v)
        }
        Cmd::Render { quiver, triangulation } => {
            let output = match (quiver, triangulation) {
                (Some(p), _) => read_quiver(&p)?.to_dot(),
                (None, Some(p)) => triangulation_dot(&read_tagged(&p)?.base),
                (None, None) => return Err(CommandResult::usage("give --quiver or --triangulation")),
            };
            CommandResult { status: Status::Ok, output }
        }
    })
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => execute(cli.cmd).unwrap_or_else(|e| e),
        Err(e) => {
            let status = if e.use_stderr() { Status::Usage } else { Status::Ok };
            CommandResult { status, output: e.render().to_string() }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str, body: &str) -> PathBuf {
        let p = std::env::temp_dir().join(format!("surfq-unit-{}-{name}", std::process::id()));
        std::fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn exit_codes() {
        let m = tmp("markov.json", &Quiver::markov().to_json());
        let r = run(["surfq", "reconstruct", "--quiver", m.to_str().unwrap()]);
        assert_eq!(r.status.exit_code(), 0);
        assert!(r.output.contains("g=1,p=1,h=()"));
        assert_eq!(run(["surfq", "build", "--sig", "g=0,p=1,h=(2)"]).status.exit_code(), 4);
        assert_eq!(run(["surfq", "build", "--sig", "nonsense"]).status.exit_code(), 2);
        assert_eq!(run(["surfq", "enumerate", "--sig", "g=0,p=0,h=(8)", "--cap", "3"]).status.exit_code(), 3);
        assert_eq!(run(["surfq", "frobnicate"]).status.exit_code(), 2);
    }

    #[test]
    fn random_mutation_is_reproducible() {
        let m = tmp("path.txt", &Quiver::path(4).to_text());
        let args = ["surfq", "mutate", "--quiver", m.to_str().unwrap(), "--random", "7", "--rng-seed", "11"];
        assert_eq!(run(args).output, run(args).output);
    }
}
