//! Quivers without loops or 2-cycles, mutation, isomorphism and canonical forms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("vertex {k} out of range for quiver on {n} vertices")]
    VertexOutOfRange { k: usize, n: usize },
    #[error("multiplicity overflow while mutating at vertex {0}")]
    Overflow(usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("2-cycle between {0} and {1}")]
    TwoCycle(usize, usize),
    #[error("{n} vertices exceeds the limit of {limit}")]
    LimitExceeded { n: usize, limit: usize },
    #[error("label list has {got} entries, expected {n}")]
    LabelCount { got: usize, n: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Default vertex limit for [`Quiver::automorphism_count`].
pub const DEFAULT_AUT_LIMIT: usize = 16;

/// A finite quiver stored as a row-major matrix of arrow multiplicities.
///
/// `mult(i, j) > 0` implies `mult(j, i) == 0` and diagonal entries are zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    n: usize,
    labels: Option<Vec<String>>,
    mult: Vec<u64>,
}

impl Quiver {
    /// Quiver on `n` vertices with no arrows.
    pub fn empty(n: usize) -> Self {
        Quiver { n, labels: None, mult: vec![0; n * n] }
    }

    /// Builds a quiver from `(source, target, multiplicity)` triples.
    ///
    /// Arrows in opposite directions between the same pair cancel.
    pub fn from_arrows(n: usize, arrows: &[(usize, usize, u64)]) -> Result<Self, QuiverError> {
        let mut b = vec![0i64; n * n];
        for &(i, j, m) in arrows {
            for v in [i, j] {
                if v >= n {
                    return Err(QuiverError::VertexOutOfRange { k: v, n });
                }
            }
            if i == j {
                return Err(QuiverError::Loop(i));
            }
            let m = i64::try_from(m).map_err(|_| QuiverError::Overflow(i))?;
            b[i * n + j] = b[i * n + j].checked_add(m).ok_or(QuiverError::Overflow(i))?;
            b[j * n + i] = b[j * n + i].checked_sub(m).ok_or(QuiverError::Overflow(j))?;
        }
        Ok(Self::from_signed_unchecked(n, &b))
    }

    /// Builds a quiver from a skew-symmetric integer matrix.
    pub fn from_signed(n: usize, b: &[i64]) -> Result<Self, QuiverError> {
        assert_eq!(b.len(), n * n, "matrix must be n*n");
        for i in 0..n {
            if b[i * n + i] != 0 {
                return Err(QuiverError::Loop(i));
            }
            for j in 0..n {
                if b[i * n + j] != -b[j * n + i] {
                    return Err(QuiverError::TwoCycle(i, j));
                }
            }
        }
        Ok(Self::from_signed_unchecked(n, b))
    }

    fn from_signed_unchecked(n: usize, b: &[i64]) -> Self {
        let mult = b.iter().map(|&x| if x > 0 { x as u64 } else { 0 }).collect();
        Quiver { n, labels: None, mult }
    }

    /// Builds a quiver from a non-negative multiplicity matrix, checking the invariants.
    pub fn from_mult(n: usize, mult: Vec<u64>) -> Result<Self, QuiverError> {
        assert_eq!(mult.len(), n * n, "matrix must be n*n");
        for i in 0..n {
            if mult[i * n + i] != 0 {
                return Err(QuiverError::Loop(i));
            }
            for j in i + 1..n {
                if mult[i * n + j] > 0 && mult[j * n + i] > 0 {
                    return Err(QuiverError::TwoCycle(i, j));
                }
            }
        }
        Ok(Quiver { n, labels: None, mult })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, QuiverError> {
        if labels.len() != self.n {
            return Err(QuiverError::LabelCount { got: labels.len(), n: self.n });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of vertex `i`, falling back to its index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    /// Number of arrows `i -> j`.
    pub fn mult(&self, i: usize, j: usize) -> u64 {
        self.mult[i * self.n + j]
    }

    /// Signed exchange-matrix entry `mult(i,j) - mult(j,i)`.
    pub fn b(&self, i: usize, j: usize) -> i64 {
        self.mult(i, j) as i64 - self.mult(j, i) as i64
    }

    pub fn signed_matrix(&self) -> Vec<i64> {
        let n = self.n;
        let mut b = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                b[i * n + j] = self.b(i, j);
            }
        }
        b
    }

    pub fn mult_matrix(&self) -> &[u64] {
        &self.mult
    }

    /// Arrows as `(source, target, multiplicity)` in row-major order.
    pub fn arrows(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let m = self.mult(i, j);
                if m > 0 {
                    out.push((i, j, m));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> u64 {
        self.mult.iter().sum()
    }

    pub fn out_degree(&self, i: usize) -> u64 {
        (0..self.n).map(|j| self.mult(i, j)).sum()
    }

    pub fn in_degree(&self, i: usize) -> u64 {
        (0..self.n).map(|j| self.mult(j, i)).sum()
    }

    pub fn degree(&self, i: usize) -> u64 {
        self.out_degree(i) + self.in_degree(i)
    }

    /// Vertices adjacent to `i` in either direction.
    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| self.mult(i, j) + self.mult(j, i) > 0).collect()
    }

    /// Mutation at vertex `k`.
    pub fn mutate(&self, k: usize) -> Result<Quiver, QuiverError> {
        let n = self.n;
        if k >= n {
            return Err(QuiverError::VertexOutOfRange { k, n });
        }
        let b = self.signed_matrix();
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                let bij = b[i * n + j];
                out[i * n + j] = if i == k || j == k {
                    -bij
                } else {
                    let (bik, bkj) = (b[i * n + k], b[k * n + j]);
                    let prod = bik.checked_mul(bkj).ok_or(QuiverError::Overflow(k))?;
                    if bik > 0 && bkj > 0 {
                        bij.checked_add(prod).ok_or(QuiverError::Overflow(k))?
                    } else if bik < 0 && bkj < 0 {
                        bij.checked_sub(prod).ok_or(QuiverError::Overflow(k))?
                    } else {
                        bij
                    }
                };
            }
        }
        let mut q = Self::from_signed_unchecked(n, &out);
        q.labels = self.labels.clone();
        Ok(q)
    }

    /// Mutation at the vertex carrying `label`.
    pub fn mutate_label(&self, label: &str) -> Result<Quiver, QuiverError> {
        let k = self
            .index_of_label(label)
            .ok_or_else(|| QuiverError::Parse(format!("no vertex labelled {label}")))?;
        self.mutate(k)
    }

    /// All arrows reversed.
    pub fn opposite(&self) -> Quiver {
        let n = self.n;
        let mut mult = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                mult[j * n + i] = self.mult(i, j);
            }
        }
        Quiver { n, labels: self.labels.clone(), mult }
    }

    /// Relabels vertices: old vertex `i` becomes new vertex `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Quiver {
        let n = self.n;
        assert_eq!(perm.len(), n);
        let mut mult = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                mult[perm[i] * n + perm[j]] = self.mult(i, j);
            }
        }
        let labels = self.labels.as_ref().map(|l| {
            let mut out = vec![String::new(); n];
            for i in 0..n {
                out[perm[i]] = l[i].clone();
            }
            out
        });
        Quiver { n, labels, mult }
    }

    /// Full subquiver on `verts`, in the given order.
    pub fn induced(&self, verts: &[usize]) -> Quiver {
        let m = verts.len();
        let mut mult = vec![0; m * m];
        for (a, &i) in verts.iter().enumerate() {
            for (c, &j) in verts.iter().enumerate() {
                mult[a * m + c] = self.mult(i, j);
            }
        }
        let labels = self.labels.as_ref().map(|l| verts.iter().map(|&v| l[v].clone()).collect());
        Quiver { n: m, labels, mult }
    }

    /// Connected components of the underlying graph, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = vec![s];
            while let Some(v) = stack.pop() {
                for w in self.neighbours(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components().len() == 1
    }

    fn vertex_invariant(&self, i: usize) -> (u64, u64, Vec<i64>) {
        let mut inc: Vec<i64> = (0..self.n).map(|j| self.b(i, j)).filter(|&x| x != 0).collect();
        inc.sort_unstable();
        (self.in_degree(i), self.out_degree(i), inc)
    }

    /// A bijection `f` with `mult1(i,j) = mult2(f[i], f[j])`, if one exists.
    pub fn find_isomorphism(&self, other: &Quiver) -> Option<Vec<usize>> {
        let mut found = None;
        IsoSearch::new(self, other).run(&mut |f| {
            found = Some(f.to_vec());
            false
        });
        found
    }

    /// Checks that `f` maps this quiver onto `other` exactly.
    pub fn is_isomorphism(&self, other: &Quiver, f: &[usize]) -> bool {
        if self.n != other.n || f.len() != self.n {
            return false;
        }
        let mut used = vec![false; self.n];
        for &v in f {
            if v >= self.n || used[v] {
                return false;
            }
            used[v] = true;
        }
        (0..self.n).all(|i| (0..self.n).all(|j| self.mult(i, j) == other.mult(f[i], f[j])))
    }

    /// Exact number of automorphisms.
    pub fn automorphism_count(&self, limit: usize) -> Result<u128, QuiverError> {
        if self.n > limit {
            return Err(QuiverError::LimitExceeded { n: self.n, limit });
        }
        let mut classes: BTreeMap<String, (u128, u128)> = BTreeMap::new();
        for comp in self.components() {
            let sub = self.induced(&comp);
            let cert = sub.canonical_form().certificate;
            let entry = classes.entry(cert).or_insert((0, 0));
            if entry.1 == 0 {
                let mut count = 0u128;
                IsoSearch::new(&sub, &sub).run(&mut |_| {
                    count += 1;
                    true
                });
                entry.0 = count;
            }
            entry.1 += 1;
        }
        let mut total: u128 = 1;
        for (aut, k) in classes.values() {
            for i in 1..=*k {
                total = total.checked_mul(*aut).and_then(|t| t.checked_mul(i)).expect("automorphism count overflow");
            }
        }
        Ok(total)
    }

    /// Canonical vertex order and certificate.
    ///
    /// Two quivers have the same certificate exactly when they are isomorphic.
    /// Labels are ignored.
    pub fn canonical_form(&self) -> CanonicalForm {
        let mut parts: Vec<(Vec<u64>, Vec<usize>)> = self
            .components()
            .into_iter()
            .map(|comp| {
                let sub = self.induced(&comp);
                let (code, order) = canonical_connected(&sub);
                (code, order.into_iter().map(|i| comp[i]).collect())
            })
            .collect();
        parts.sort();
        let mut certificate = format!("{}", self.n);
        let mut order = Vec::with_capacity(self.n);
        for (code, ord) in parts {
            certificate.push('|');
            let m = ord.len();
            let _ = write!(certificate, "{m}:");
            for (idx, x) in code.iter().enumerate() {
                if idx > 0 {
                    certificate.push(',');
                }
                let _ = write!(certificate, "{x}");
            }
            order.extend(ord);
        }
        CanonicalForm { order, certificate }
    }

    /// The quiver relabelled into canonical order.
    pub fn canonical_quiver(&self) -> Quiver {
        let cf = self.canonical_form();
        let mut perm = vec![0; self.n];
        for (pos, &v) in cf.order.iter().enumerate() {
            perm[v] = pos;
        }
        self.permuted(&perm).without_labels()
    }

    /// Plain text: first line `n`, then `i j m` per nonzero multiplicity.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (i, j, m) in self.arrows() {
            let _ = writeln!(s, "{i} {j} {m}");
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Quiver, QuiverError> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| QuiverError::Parse("empty input".into()))?
            .parse()
            .map_err(|e| QuiverError::Parse(format!("vertex count: {e}")))?;
        let mut arrows = Vec::new();
        for line in lines {
            let nums: Vec<&str> = line.split_whitespace().collect();
            if nums.len() != 3 {
                return Err(QuiverError::Parse(format!("expected `i j m`, got `{line}`")));
            }
            let p = |s: &str| s.parse::<u64>().map_err(|e| QuiverError::Parse(format!("`{s}`: {e}")));
            arrows.push((p(nums[0])? as usize, p(nums[1])? as usize, p(nums[2])?));
        }
        Quiver::from_arrows(n, &arrows)
    }

    pub fn to_doc(&self) -> QuiverDoc {
        QuiverDoc {
            format: 1,
            n: self.n,
            labels: self.labels.clone(),
            arrows: self.arrows().into_iter().map(|(i, j, m)| [i as u64, j as u64, m]).collect(),
        }
    }

    pub fn from_doc(doc: &QuiverDoc) -> Result<Quiver, QuiverError> {
        if doc.format != 1 {
            return Err(QuiverError::Parse(format!("unsupported format {}", doc.format)));
        }
        let arrows: Vec<_> = doc.arrows.iter().map(|a| (a[0] as usize, a[1] as usize, a[2])).collect();
        let q = Quiver::from_arrows(doc.n, &arrows)?;
        match &doc.labels {
            Some(l) => q.with_labels(l.clone()),
            None => Ok(q),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("quiver serialises")
    }

    /// Parses JSON or the plain text format, whichever the input looks like.
    pub fn parse(input: &str) -> Result<Quiver, QuiverError> {
        if input.trim_start().starts_with('{') {
            let doc: QuiverDoc = serde_json::from_str(input).map_err(|e| QuiverError::Parse(e.to_string()))?;
            Quiver::from_doc(&doc)
        } else {
            Quiver::parse_text(input)
        }
    }

    /// Graphviz DOT. Multiplicities above one appear as edge labels.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph Q {\n");
        for i in 0..self.n {
            let _ = writeln!(s, "  {i} [label=\"{}\"];", self.label(i).replace('"', "\\\""));
        }
        for (i, j, m) in self.arrows() {
            if m == 1 {
                let _ = writeln!(s, "  {i} -> {j};");
            } else {
                let _ = writeln!(s, "  {i} -> {j} [label=\"{m}\"];");
            }
        }
        s.push_str("}\n");
        s
    }

    /// The Markov quiver: double arrows 0 => 1 => 2 => 0.
    pub fn markov() -> Quiver {
        Quiver::from_arrows(3, &[(0, 1, 2), (1, 2, 2), (2, 0, 2)]).unwrap()
    }

    /// Linear path 0 -> 1 -> ... -> n-1.
    pub fn path(n: usize) -> Quiver {
        let arrows: Vec<_> = (1..n).map(|i| (i - 1, i, 1)).collect();
        Quiver::from_arrows(n, &arrows).unwrap()
    }

    /// Oriented cycle 0 -> 1 -> ... -> n-1 -> 0.
    pub fn cycle(n: usize) -> Quiver {
        let arrows: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1)).collect();
        Quiver::from_arrows(n, &arrows).unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverDoc {
    pub format: u32,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub arrows: Vec<[u64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// `order[pos]` is the vertex placed at canonical position `pos`.
    pub order: Vec<usize>,
    pub certificate: String,
}

struct IsoSearch<'a> {
    a: &'a Quiver,
    b: &'a Quiver,
    order: Vec<usize>,
    cands: Vec<Vec<usize>>,
}

impl<'a> IsoSearch<'a> {
    fn new(a: &'a Quiver, b: &'a Quiver) -> Self {
        let n = a.n;
        // visit vertices so that each one is adjacent to as many earlier ones as possible
        let mut order = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        let mut links = vec![0usize; n];
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| (links[v], a.degree(v), std::cmp::Reverse(v)))
                .unwrap();
            placed[v] = true;
            order.push(v);
            for w in a.neighbours(v) {
                links[w] += 1;
            }
        }
        let cands = if a.n == b.n {
            let inv_b: Vec<_> = (0..n).map(|j| b.vertex_invariant(j)).collect();
            (0..n)
                .map(|i| {
                    let inv = a.vertex_invariant(i);
                    (0..n).filter(|&j| inv_b[j] == inv).collect()
                })
                .collect()
        } else {
            Vec::new()
        };
        IsoSearch { a, b, order, cands }
    }

    /// Calls `visit` on every isomorphism until it returns false.
    fn run(&self, visit: &mut dyn FnMut(&[usize]) -> bool) {
        if self.a.n != self.b.n || self.a.edge_count() != self.b.edge_count() {
            return;
        }
        let n = self.a.n;
        let mut f = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.step(0, &mut f, &mut used, visit);
    }

    fn step(&self, depth: usize, f: &mut [usize], used: &mut [bool], visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.order.len() {
            return visit(f);
        }
        let v = self.order[depth];
        for &w in &self.cands[v] {
            if used[w] {
                continue;
            }
            let ok = self.order[..depth].iter().all(|&u| {
                self.a.mult(u, v) == self.b.mult(f[u], w) && self.a.mult(v, u) == self.b.mult(w, f[u])
            });
            if !ok {
                continue;
            }
            f[v] = w;
            used[w] = true;
            let go_on = self.step(depth + 1, f, used, visit);
            used[w] = false;
            f[v] = usize::MAX;
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// Colour refinement until stable. Colours are dense ranks and refinement keeps the
/// relative order of existing cells.
fn refine(q: &Quiver, colours: &mut Vec<usize>) {
    let n = q.n;
    loop {
        let before = colours.iter().max().map_or(0, |c| c + 1);
        let sigs: Vec<(usize, Vec<(usize, u64, u64)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(usize, u64, u64)> = (0..n)
                    .filter(|&w| w != v && q.mult(v, w) + q.mult(w, v) > 0)
                    .map(|w| (colours[w], q.mult(v, w), q.mult(w, v)))
                    .collect();
                nb.sort_unstable();
                (colours[v], nb)
            })
            .collect();
        let mut distinct: Vec<_> = sigs.clone();
        distinct.sort();
        distinct.dedup();
        for v in 0..n {
            colours[v] = distinct.binary_search(&sigs[v]).unwrap();
        }
        if distinct.len() == before {
            return;
        }
    }
}

fn canonical_connected(q: &Quiver) -> (Vec<u64>, Vec<usize>) {
    let n = q.n;
    let mut colours = vec![0; n];
    refine(q, &mut colours);
    let mut best: Option<(Vec<u64>, Vec<usize>)> = None;
    search_leaves(q, colours, &mut best);
    best.unwrap()
}

fn search_leaves(q: &Quiver, colours: Vec<usize>, best: &mut Option<(Vec<u64>, Vec<usize>)>) {
    let n = q.n;
    let ncol = colours.iter().max().map_or(0, |c| c + 1);
    if ncol == n {
        let mut order = vec![0; n];
        for v in 0..n {
            order[colours[v]] = v;
        }
        let mut code = Vec::with_capacity(n * n);
        for &i in &order {
            for &j in &order {
                code.push(q.mult(i, j));
            }
        }
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            *best = Some((code, order));
        }
        return;
    }
    let mut sizes = vec![0usize; ncol];
    for &c in &colours {
        sizes[c] += 1;
    }
    let target = (0..ncol).filter(|&c| sizes[c] > 1).min_by_key(|&c| (sizes[c], c)).unwrap();
    for v in (0..n).filter(|&v| colours[v] == target) {
        let mut next: Vec<usize> = colours
            .iter()
            .enumerate()
            .map(|(w, &c)| 2 * c + usize::from(c == target && w != v))
            .collect();
        let mut ranks = next.clone();
        ranks.sort_unstable();
        ranks.dedup();
        for c in next.iter_mut() {
            *c = ranks.binary_search(c).unwrap();
        }
        refine(q, &mut next);
        search_leaves(q, next, best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Mutation written directly from the three-step arrow description.
    fn three_step_mutation(q: &Quiver, k: usize) -> Quiver {
        let n = q.n();
        let mut m: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| q.mult(i, j)).collect()).collect();
        let mut added = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != k && j != k {
                    added[i][j] = m[i][k] * m[k][j];
                }
            }
        }
        let mut r = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in 0..n {
                r[i][j] = if i == k || j == k { m[j][i] } else { m[i][j] + added[i][j] };
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let c = r[i][j].min(r[j][i]);
                r[i][j] -= c;
                r[j][i] -= c;
            }
        }
        m = r;
        Quiver::from_mult(n, m.into_iter().flatten().collect()).unwrap()
    }

    #[test]
    fn single_arrow_reverses() {
        let q = Quiver::from_arrows(2, &[(0, 1, 1)]).unwrap();
        let m = q.mutate(1).unwrap();
        assert_eq!(m.arrows(), vec![(1, 0, 1)]);
    }

    #[test]
    fn path_mutates_to_cycle() {
        let q = Quiver::path(3);
        let m = q.mutate(1).unwrap();
        assert_eq!(m, three_step_mutation(&q, 1));
        let expected = Quiver::from_arrows(3, &[(1, 0, 1), (0, 2, 1), (2, 1, 1)]).unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn markov_mutation() {
        let q = Quiver::markov();
        let m = q.mutate(0).unwrap();
        assert_eq!(m, three_step_mutation(&q, 0));
        let expected = Quiver::from_arrows(3, &[(0, 2, 2), (1, 0, 2), (2, 1, 2)]).unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn out_of_range() {
        assert_eq!(Quiver::path(2).mutate(2), Err(QuiverError::VertexOutOfRange { k: 2, n: 2 }));
    }

    #[test]
    fn overflow_is_an_error() {
        let big = u64::MAX / 4;
        let q = Quiver::from_arrows(3, &[(0, 1, big), (1, 2, big)]).unwrap();
        assert_eq!(q.mutate(1), Err(QuiverError::Overflow(1)));
    }

    #[test]
    fn edge_counts() {
        assert_eq!(Quiver::markov().edge_count(), 6);
        assert_eq!(Quiver::empty(3).edge_count(), 0);
    }

    #[test]
    fn opposite_basics() {
        let q = Quiver::from_arrows(2, &[(0, 1, 1)]).unwrap();
        assert_eq!(q.opposite().arrows(), vec![(1, 0, 1)]);
        let m = Quiver::markov();
        assert_eq!(m.opposite().opposite(), m);
        assert_eq!(m.opposite(), Quiver::from_arrows(3, &[(1, 0, 2), (2, 1, 2), (0, 2, 2)]).unwrap());
    }

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn brute_iso_exists(a: &Quiver, b: &Quiver) -> bool {
        a.n() == b.n() && all_perms(a.n()).iter().any(|p| a.is_isomorphism(b, p))
    }

    #[test]
    fn isomorphism_examples() {
        let a = Quiver::from_arrows(2, &[(0, 1, 1)]).unwrap();
        assert_eq!(a.find_isomorphism(&a), Some(vec![0, 1]));
        let b = Quiver::from_arrows(2, &[(1, 0, 1)]).unwrap();
        let f = a.find_isomorphism(&b).unwrap();
        assert!(a.is_isomorphism(&b, &f));
        let cyc = Quiver::cycle(3);
        let path = Quiver::path(3);
        assert!(!brute_iso_exists(&cyc, &path));
        assert_eq!(cyc.find_isomorphism(&path), None);
        assert_ne!(cyc.canonical_form().certificate, path.canonical_form().certificate);
        assert_eq!(a.canonical_form().certificate, b.canonical_form().certificate);
    }

    #[test]
    fn automorphisms() {
        assert_eq!(Quiver::empty(1).automorphism_count(16).unwrap(), 1);
        assert_eq!(Quiver::empty(2).automorphism_count(16).unwrap(), 2);
        let markov = Quiver::markov();
        let brute = all_perms(3).iter().filter(|p| markov.is_isomorphism(&markov, p)).count();
        assert_eq!(brute, 3);
        assert_eq!(markov.automorphism_count(16).unwrap(), 3);
        assert!(matches!(Quiver::empty(20).automorphism_count(16), Err(QuiverError::LimitExceeded { .. })));
    }

    #[test]
    fn automorphisms_match_brute_force_on_small_quivers() {
        let qs = [
            Quiver::empty(4),
            Quiver::cycle(4),
            Quiver::from_arrows(5, &[(0, 1, 1), (2, 3, 1), (0, 4, 2)]).unwrap(),
            Quiver::from_arrows(4, &[(0, 1, 1), (2, 3, 1)]).unwrap(),
        ];
        for q in qs {
            let brute = all_perms(q.n()).iter().filter(|p| q.is_isomorphism(&q, p)).count() as u128;
            assert_eq!(q.automorphism_count(16).unwrap(), brute, "{q:?}");
        }
    }

    #[test]
    fn text_and_json_round_trip() {
        let q = Quiver::markov().with_labels(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        assert_eq!(Quiver::parse(&q.to_json()).unwrap(), q);
        assert_eq!(Quiver::parse(&q.to_text()).unwrap(), q.clone().without_labels());
        assert!(q.to_dot().contains("0 -> 1 [label=\"2\"]"));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Quiver::parse_text(""), Err(QuiverError::Parse(_))));
        assert!(matches!(Quiver::parse_text("2\n0 0 1"), Err(QuiverError::Loop(0))));
        assert!(matches!(Quiver::parse_text("2\n0 5 1"), Err(QuiverError::VertexOutOfRange { .. })));
    }

    #[test]
    fn canonical_form_agrees_with_brute_force_on_all_three_vertex_quivers() {
        let mut qs = Vec::new();
        let vals = [-1i64, 0, 1, 2];
        for &x in &vals {
            for &y in &vals {
                for &z in &vals {
                    let b = vec![0, x, y, -x, 0, z, -y, -z, 0];
                    qs.push(Quiver::from_signed(3, &b).unwrap());
                }
            }
        }
        for a in &qs {
            for b in &qs {
                let same = a.canonical_form().certificate == b.canonical_form().certificate;
                assert_eq!(same, brute_iso_exists(a, b));
                assert_eq!(a.find_isomorphism(b).is_some(), same);
            }
        }
    }
}
