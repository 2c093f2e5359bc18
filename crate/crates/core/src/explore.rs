//! Flip graphs, mutation classes and the verification sweep over enumerated triangulations.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::blocks::{is_unique, Uniqueness};
use crate::builder::{seed_triangulation, BuildError};
use crate::quiver::{Quiver, QuiverError};
use crate::reconstruct::{match1_excluded, recover, transport, Recovery, DEFAULT_MAX_NODES};
use crate::surface::{ExceptionFlag, SurfaceError, SurfaceSig};
use crate::tagged::{tau, TaggedError};
use crate::triangulation::{ArcId, CanonicalCode, TriangError, TriangulationDoc, Triangulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExploreError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Triangulation(#[from] TriangError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// One entry per flippable arc.
pub fn flip_neighbors(t: &Triangulation) -> Vec<(ArcId, Triangulation)> {
    t.arcs.iter().filter(|&&a| t.is_flippable(a)).filter_map(|&a| t.flip(a).ok().map(|f| (a, f))).collect()
}

#[derive(Clone, Debug)]
pub struct FlipGraph {
    /// Sorted by canonical code.
    pub triangulations: Vec<Triangulation>,
    pub codes: Vec<CanonicalCode>,
    pub edges: usize,
    pub truncated: bool,
}

/// Breadth-first closure under flips from `seed`, keeping one triangulation per
/// canonical code and at most `cap` of them.
pub fn flip_closure(seed: Triangulation, cap: usize) -> FlipGraph {
    let mut seen: BTreeMap<CanonicalCode, Triangulation> = BTreeMap::new();
    let mut edges = 0;
    let mut truncated = false;
    seen.insert(seed.canonical_code(), seed.clone());
    let mut frontier = vec![seed];
    while !frontier.is_empty() && !truncated {
        let expanded: Vec<Vec<(CanonicalCode, Triangulation)>> = frontier
            .par_iter()
            .map(|t| flip_neighbors(t).into_iter().map(|(_, f)| (f.canonical_code(), f)).collect())
            .collect();
        let mut next = Vec::new();
        for (code, f) in expanded.into_iter().flatten() {
            edges += 1;
            if seen.contains_key(&code) {
                continue;
            }
            if seen.len() >= cap {
                truncated = true;
                break;
            }
            seen.insert(code, f.clone());
            next.push(f);
        }
        frontier = next;
    }
    let (codes, triangulations) = seen.into_iter().unzip();
    FlipGraph { triangulations, codes, edges, truncated }
}

pub fn enumerate_triangulations(sig: &SurfaceSig, cap: usize) -> Result<FlipGraph, ExploreError> {
    let seed = seed_triangulation(sig)?;
    Ok(flip_closure(seed, cap))
}

#[derive(Clone, Debug)]
pub struct MutationClass {
    /// Canonical representatives, sorted by certificate.
    pub quivers: Vec<Quiver>,
    pub truncated: bool,
}

impl MutationClass {
    pub fn contains(&self, q: &Quiver) -> bool {
        let c = q.canonical_form().certificate;
        self.quivers.iter().any(|r| r.canonical_form().certificate == c)
    }
}

pub fn mutation_class(q: &Quiver, cap: usize) -> Result<MutationClass, ExploreError> {
    let start = q.canonical_quiver();
    let mut seen: BTreeMap<String, Quiver> = BTreeMap::new();
    seen.insert(start.canonical_form().certificate, start.clone());
    let mut frontier = vec![start];
    let mut truncated = false;
    while !frontier.is_empty() && !truncated {
        let expanded: Vec<Result<Vec<(String, Quiver)>, QuiverError>> = frontier
            .par_iter()
            .map(|p| {
                (0..p.n())
                    .map(|k| {
                        let m = p.mutate(k)?.canonical_quiver();
                        Ok((m.canonical_form().certificate, m))
                    })
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for (cert, m) in expanded.into_iter().collect::<Result<Vec<_>, _>>()?.into_iter().flatten() {
            if seen.contains_key(&cert) {
                continue;
            }
            if seen.len() >= cap {
                truncated = true;
                break;
            }
            seen.insert(cert, m.clone());
            next.push(m);
        }
        frontier = next;
    }
    Ok(MutationClass { quivers: seen.into_values().collect(), truncated })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckCount {
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub check: String,
    pub detail: String,
    pub triangulation: TriangulationDoc,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub format: u32,
    pub sig: SurfaceSig,
    pub triangulations: usize,
    pub maximal: usize,
    pub flip_edges: usize,
    pub truncated: bool,
    pub checks: BTreeMap<String, CheckCount>,
    pub counterexamples: Vec<Counterexample>,
}

impl SweepReport {
    pub fn failed(&self) -> u64 {
        self.checks.values().map(|c| c.failed).sum()
    }

    pub fn passed(&self) -> bool {
        self.failed() == 0
    }
}

#[derive(Default)]
struct Tally {
    checks: BTreeMap<String, CheckCount>,
    counterexamples: Vec<Counterexample>,
}

impl Tally {
    fn record(&mut self, check: &str, t: &Triangulation, outcome: Option<Result<(), String>>) {
        let c = self.checks.entry(check.to_string()).or_default();
        match outcome {
            None => c.skipped += 1,
            Some(Ok(())) => c.passed += 1,
            Some(Err(detail)) => {
                c.failed += 1;
                if c.failed <= 3 {
                    self.counterexamples.push(Counterexample { check: check.into(), detail, triangulation: t.to_doc() });
                }
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        for (k, v) in other.checks {
            let c = self.checks.entry(k).or_default();
            c.passed += v.passed;
            c.failed += v.failed;
            c.skipped += v.skipped;
        }
        self.counterexamples.extend(other.counterexamples);
    }
}

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

/// Whether the flag set excludes the surface from the quiver-to-surface checks.
fn recover_skipped(flags: &BTreeSet<ExceptionFlag>) -> bool {
    flags.iter().any(|f| {
        matches!(f, ExceptionFlag::BlockUniqueness | ExceptionFlag::Reconstruction | ExceptionFlag::BasicDecompositionAmbiguous)
    })
}

/// Edge bound and its equality case. The 4-punctured sphere also reaches the bound with
/// a face bounded by three loops.
fn edge_bound_check(t: &Triangulation, sig: &SurfaceSig, e: u64) -> Result<(), String> {
    let bound = sig.edge_bound().map_err(|x| x.to_string())? as u64;
    ensure(e <= bound, || format!("{e} edges exceed the bound {bound}"))?;
    if *sig == SurfaceSig::closed(0, 4) && t.edge_formula_exclusion().is_some() {
        return Ok(());
    }
    let maximal = t.maximal();
    ensure((e == bound) == maximal, || format!("{e} edges, bound {bound}, maximal {maximal}"))
}

fn tagged_check(t: &Triangulation, q: &Quiver) -> Result<(), String> {
    let s = |e: TaggedError| e.to_string();
    let tt = tau(t).map_err(s)?;
    ensure(tt.to_ordinary().map_err(s)? == *t, || "untagging the tagged version changes the triangulation".into())?;
    ensure(tt.exchange_quiver().map_err(s)? == *q, || "tagged quiver differs".into())?;
    let punctures = tt.punctures().map_err(s)?;
    let mut sets: Vec<BTreeSet<usize>> = punctures.iter().map(|&y| BTreeSet::from([y])).collect();
    sets.push(punctures.iter().copied().collect());
    for set in sets {
        let r = tt.retag(&set).map_err(s)?;
        ensure(r.retag(&set).map_err(s)? == tt, || format!("retag at {set:?} is not an involution"))?;
        let e = r.exchange_quiver().map_err(s)?.edge_count();
        ensure(e == q.edge_count(), || format!("retag at {set:?} changes the edge count to {e}"))?;
    }
    Ok(())
}

fn single_checks(t: &Triangulation, sig: &SurfaceSig, flags: &BTreeSet<ExceptionFlag>, class: Option<&MutationClass>) -> Tally {
    let mut tally = Tally::default();
    let q = match t.exchange_quiver() {
        Ok(q) => q,
        Err(e) => {
            tally.record("valid", t, Some(Err(e.to_string())));
            return tally;
        }
    };
    let got = t.surface_signature().map_err(|e| e.to_string());
    tally.record("valid", t, Some(got.and_then(|g| ensure(g == *sig, || format!("glues to {g}")))));
    let rank = sig.rank().unwrap_or(0) as usize;
    tally.record("rank", t, Some(ensure(t.arc_count() == rank, || format!("{} arcs, rank {rank}", t.arc_count()))));
    let e = q.edge_count();
    tally.record(
        "edge_identity",
        t,
        t.edge_formula_exclusion().is_none().then(|| {
            let p = t.predicted_edges().map_err(|x| x.to_string())?;
            ensure(p == e, || format!("predicted {p}, quiver has {e}"))
        }),
    );
    tally.record("edge_bound", t, Some(edge_bound_check(t, sig, e)));
    tally.record(
        "fwc",
        t,
        Some(t.stats().map_err(|x| x.to_string()).and_then(|st| {
            let n = t.arc_count() as u32;
            ensure(3 * st.f + 2 * st.w + st.c == 2 * n, || format!("3f+2w+c = {} but 2n = {}", 3 * st.f + 2 * st.w + st.c, 2 * n))?;
            ensure(st.w + 2 * st.c == sig.h_total(), || format!("w+2c = {} but h = {}", st.w + 2 * st.c, sig.h_total()))?;
            ensure(st.c <= sig.cap_capacity(), || format!("{} caps exceed capacity {}", st.c, sig.cap_capacity()))
        })),
    );
    let arcs: Vec<ArcId> = t.arcs.iter().copied().collect();
    let code = t.canonical_code();
    for (a, f) in flip_neighbors(t) {
        let k = arcs.iter().position(|&x| x == a).unwrap();
        let outcome = match (f.exchange_quiver(), q.mutate(k)) {
            (Ok(fq), Ok(mq)) => ensure(fq == mq, || format!("flip of arc {a} does not match mutation")),
            (Err(x), _) => Err(format!("flip of arc {a}: {x}")),
            (_, Err(x)) => Err(format!("mutation at arc {a}: {x}")),
        };
        tally.record("flip_mutation", t, Some(outcome));
        let back = f.flip(a).map(|b| b.canonical_code() == code);
        tally.record("flip_symmetry", t, Some(ensure(back == Ok(true), || format!("flipping arc {a} twice does not return"))));
    }
    tally.record("tagged", t, Some(tagged_check(t, &q)));
    tally.record("mutation_class", t, class.map(|c| ensure(c.contains(&q), || "quiver outside the mutation class of the seed".into())));
    let eligible = t.is_connected_max_2faces() && !recover_skipped(flags);
    tally.record(
        "block_uniqueness",
        t,
        eligible.then(|| match is_unique(&q, DEFAULT_MAX_NODES) {
            Ok(Uniqueness::Unique(_)) => Ok(()),
            Ok(other) => Err(format!("{other:?}")),
            Err(x) => Err(x.to_string()),
        }),
    );
    tally.record(
        "recover",
        t,
        eligible.then(|| match recover(&q, DEFAULT_MAX_NODES) {
            Ok(Recovery::Recovered(c)) => ensure(c.sig == *sig, || format!("recovered {}", c.sig)),
            Ok(other) => Err(format!("{} candidates", other.candidates().len())),
            Err(x) => Err(x.to_string()),
        }),
    );
    tally
}

/// Pairs `(i, j)` of triangulations with isomorphic quivers where `i` is maximal and `j`
/// is not, together with the number of pairs examined. Surfaces outside the range of the
/// statement are left out.
pub fn match1_pairs(ts: &[Triangulation]) -> (u64, Vec<(usize, usize)>) {
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, t) in ts.iter().enumerate() {
        let Ok(sig) = t.surface_signature() else { continue };
        if match1_excluded(&sig) {
            continue;
        }
        if let Ok(q) = t.exchange_quiver() {
            groups.entry(q.canonical_form().certificate).or_default().push(i);
        }
    }
    let mut checked = 0;
    let mut bad = Vec::new();
    for members in groups.values() {
        let maximal: Vec<usize> = members.iter().copied().filter(|&i| ts[i].maximal()).collect();
        for &i in &maximal {
            for &j in members {
                checked += 1;
                if !ts[j].maximal() {
                    bad.push((i, j));
                }
            }
        }
    }
    (checked, bad)
}

/// Runs every check over the flip closure of the seed triangulation of `sig`.
pub fn verify_sweep(sig: &SurfaceSig, cap: usize) -> Result<SweepReport, ExploreError> {
    let flags = sig.exceptions()?;
    let graph = enumerate_triangulations(sig, cap)?;
    let seed_q = seed_triangulation(sig)?.exchange_quiver()?;
    let class = mutation_class(&seed_q, cap)?;
    let class = (!class.truncated).then_some(class);
    let ts = &graph.triangulations;
    let mut tally = ts
        .par_iter()
        .map(|t| single_checks(t, sig, &flags, class.as_ref()))
        .reduce(Tally::default, |mut a, b| {
            a.merge(b);
            a
        });
    tally.counterexamples.sort_by(|a, b| (&a.check, &a.detail).cmp(&(&b.check, &b.detail)));

    let (checked, bad) = match1_pairs(ts);
    let c = tally.checks.entry("match1".into()).or_default();
    c.passed += checked - bad.len() as u64;
    c.failed += bad.len() as u64;
    for &(i, j) in bad.iter().take(3) {
        tally.counterexamples.push(Counterexample {
            check: "match1".into(),
            detail: format!("not maximal, while triangulation {i} with an isomorphic quiver is"),
            triangulation: ts[j].to_doc(),
        });
    }
    transport_checks(ts, sig, &mut tally);

    Ok(SweepReport {
        format: 1,
        sig: sig.clone(),
        triangulations: ts.len(),
        maximal: ts.iter().filter(|t| t.maximal()).count(),
        flip_edges: graph.edges,
        truncated: graph.truncated,
        checks: tally.checks,
        counterexamples: tally.counterexamples,
    })
}

/// Transports one connected maximal member of each quiver class onto every member.
fn transport_checks(ts: &[Triangulation], sig: &SurfaceSig, tally: &mut Tally) {
    if crate::surface::reconstruction_exceptions().contains(sig) {
        return;
    }
    let mut groups: BTreeMap<String, Vec<(usize, Quiver)>> = BTreeMap::new();
    for (i, t) in ts.iter().enumerate() {
        if let Ok(q) = t.exchange_quiver() {
            groups.entry(q.canonical_form().certificate).or_default().push((i, q));
        }
    }
    for members in groups.values() {
        let Some((i, q1)) = members.iter().find(|(i, _)| ts[*i].is_connected_max_2faces()) else { continue };
        for (j, q2) in members {
            let outcome = match q1.find_isomorphism(q2) {
                None => Err("no isomorphism found".to_string()),
                Some(phi) => transport(&ts[*i], &phi, &ts[*j]).map(|_| ()).map_err(|e| e.to_string()),
            };
            tally.record("transport", &ts[*j], Some(outcome));
        }
    }
}
