//! Surface signatures `(g, p, h)`, numerical invariants and the exceptional surfaces.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("{0} is not a valid marked surface")]
    Invalid(SurfaceSig),
    #[error("cannot parse signature `{0}`: expected g=G,p=P,h=(h1,...)")]
    Parse(String),
}

/// Genus, puncture count and the marked-point counts of the boundary components.
///
/// `h` is kept sorted in descending order, so equality is homeomorphism.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SurfaceSig {
    pub g: u32,
    pub p: u32,
    h: Vec<u32>,
}

impl SurfaceSig {
    pub fn new(g: u32, p: u32, mut h: Vec<u32>) -> Self {
        h.sort_unstable_by(|a, b| b.cmp(a));
        SurfaceSig { g, p, h }
    }

    /// Closed genus-`g` surface with `p` punctures.
    pub fn closed(g: u32, p: u32) -> Self {
        Self::new(g, p, vec![])
    }

    /// Disk with `m` boundary marked points and `p` punctures.
    pub fn disk(m: u32, p: u32) -> Self {
        Self::new(0, p, vec![m])
    }

    pub fn polygon(m: u32) -> Self {
        Self::disk(m, 0)
    }

    pub fn annulus(a: u32, b: u32, p: u32) -> Self {
        Self::new(0, p, vec![a, b])
    }

    pub fn h(&self) -> &[u32] {
        &self.h
    }

    /// Number of boundary components.
    pub fn b(&self) -> u32 {
        self.h.len() as u32
    }

    /// Total number of boundary marked points.
    pub fn h_total(&self) -> u32 {
        self.h.iter().sum()
    }

    pub fn is_valid(&self) -> bool {
        if self.h.contains(&0) || self.p + self.b() == 0 {
            return false;
        }
        match (self.g, self.b(), self.p) {
            (0, 0, p) => p >= 4,
            (0, 1, 0) => self.h[0] >= 4,
            (0, 1, 1) => self.h[0] >= 2,
            _ => true,
        }
    }

    /// Number of arcs in any triangulation.
    pub fn rank(&self) -> Result<u32, SurfaceError> {
        if !self.is_valid() {
            return Err(SurfaceError::Invalid(self.clone()));
        }
        let n = 6 * (self.g as i64 - 1) + 3 * self.b() as i64 + 3 * self.p as i64 + self.h_total() as i64;
        Ok(n as u32)
    }

    /// Largest possible number of caps.
    pub fn cap_capacity(&self) -> u32 {
        self.h.iter().map(|x| x / 2).sum()
    }

    /// Upper bound on the number of arrows in an exchange quiver.
    pub fn edge_bound(&self) -> Result<u32, SurfaceError> {
        Ok(2 * self.rank()? + self.cap_capacity() - self.h_total())
    }

    /// Euler characteristic of the underlying compact surface.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.g as i64 - self.b() as i64
    }

    pub fn exceptions(&self) -> Result<BTreeSet<ExceptionFlag>, SurfaceError> {
        if !self.is_valid() {
            return Err(SurfaceError::Invalid(self.clone()));
        }
        let mut out = BTreeSet::new();
        let hit = |table: &[SurfaceSig]| table.contains(self);
        if hit(&no_maximal()) {
            out.insert(ExceptionFlag::NoMaximal);
        }
        if let Some(item) = no_connected_max_item(self) {
            out.insert(ExceptionFlag::NoConnectedMax2Faces { item });
        }
        for (a, b) in iso_exception_pairs() {
            if *self == a {
                out.insert(ExceptionFlag::IsoExceptionPair { partner: b.clone() });
            } else if *self == b {
                out.insert(ExceptionFlag::IsoExceptionPair { partner: a.clone() });
            }
        }
        if hit(&block_uniqueness_exceptions()) {
            out.insert(ExceptionFlag::BlockUniqueness);
        }
        if hit(&basic_decomposition_exceptions()) {
            out.insert(ExceptionFlag::BasicDecompositionAmbiguous);
        }
        if hit(&reconstruction_exceptions()) {
            out.insert(ExceptionFlag::Reconstruction);
        }
        Ok(out)
    }

    /// Short human name for the surfaces that appear in the exception tables.
    pub fn describe(&self) -> String {
        let gon = |m: u32| match m {
            1 => "monogon".to_string(),
            2 => "digon".to_string(),
            m => format!("{m}-gon"),
        };
        let punct = |p: u32| match p {
            0 => "unpunctured".to_string(),
            1 => "once-punctured".to_string(),
            2 => "twice-punctured".to_string(),
            p => format!("{p}-punctured"),
        };
        match (self.g, self.h.as_slice()) {
            (0, []) => format!("{}-punctured sphere", self.p),
            (0, [m]) => format!("{} {}", punct(self.p), gon(*m)),
            (0, [a, b]) => format!("{} annulus ({a},{b})", punct(self.p)),
            (g, []) => format!("{} closed genus {g}", punct(self.p)),
            _ => self.to_string(),
        }
    }
}

impl fmt::Display for SurfaceSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hs: Vec<String> = self.h.iter().map(|x| x.to_string()).collect();
        write!(f, "g={},p={},h=({})", self.g, self.p, hs.join(","))
    }
}

impl FromStr for SurfaceSig {
    type Err = SurfaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SurfaceError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (head, tail) = compact.split_once(",h=").ok_or_else(bad)?;
        let (gs, ps) = head.split_once(',').ok_or_else(bad)?;
        let g = gs.strip_prefix("g=").and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let p = ps.strip_prefix("p=").and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let inner = tail.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
        let h = if inner.is_empty() {
            vec![]
        } else {
            inner.split(',').map(|x| x.parse().map_err(|_| bad())).collect::<Result<Vec<u32>, _>>()?
        };
        Ok(SurfaceSig::new(g, p, h))
    }
}

impl TryFrom<String> for SurfaceSig {
    type Error = SurfaceError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<SurfaceSig> for String {
    fn from(s: SurfaceSig) -> String {
        s.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "flag", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExceptionFlag {
    /// No maximal triangulation exists.
    NoMaximal,
    /// No connected maximal triangulation with at least two faces; `item` is 1..=4.
    NoConnectedMax2Faces { item: u8 },
    /// Cluster algebra isomorphic to that of a non-homeomorphic partner.
    IsoExceptionPair { partner: SurfaceSig },
    /// Some exchange quiver has more than one block decomposition.
    BlockUniqueness,
    /// A connected maximal triangulation's quiver has several type I/II decompositions.
    BasicDecompositionAmbiguous,
    /// Quiver isomorphisms need not come from homeomorphisms.
    Reconstruction,
}

pub fn no_maximal() -> Vec<SurfaceSig> {
    vec![SurfaceSig::disk(2, 1), SurfaceSig::disk(3, 1), SurfaceSig::disk(4, 1), SurfaceSig::disk(1, 2)]
}

/// The four families of surfaces without a connected maximal triangulation with two or more faces.
pub fn no_connected_max_2faces() -> Vec<(u8, Vec<SurfaceSig>)> {
    vec![
        (1, (4..=7).map(SurfaceSig::polygon).collect()),
        (2, (2..=4).map(|m| SurfaceSig::disk(m, 1)).collect()),
        (3, vec![SurfaceSig::disk(1, 2), SurfaceSig::disk(2, 2)]),
        (4, vec![SurfaceSig::annulus(1, 1, 0), SurfaceSig::annulus(2, 1, 0), SurfaceSig::annulus(3, 1, 0)]),
    ]
}

fn no_connected_max_item(sig: &SurfaceSig) -> Option<u8> {
    no_connected_max_2faces().into_iter().find(|(_, list)| list.contains(sig)).map(|(i, _)| i)
}

pub fn iso_exception_pairs() -> Vec<(SurfaceSig, SurfaceSig)> {
    vec![
        (SurfaceSig::polygon(6), SurfaceSig::disk(3, 1)),
        (SurfaceSig::disk(1, 2), SurfaceSig::annulus(2, 2, 0)),
    ]
}

pub fn block_uniqueness_exceptions() -> Vec<SurfaceSig> {
    vec![
        SurfaceSig::closed(0, 4),
        SurfaceSig::disk(2, 2),
        SurfaceSig::disk(2, 1),
        SurfaceSig::disk(3, 1),
        SurfaceSig::disk(4, 1),
        SurfaceSig::annulus(2, 2, 0),
        SurfaceSig::polygon(6),
    ]
}

pub fn basic_decomposition_exceptions() -> Vec<SurfaceSig> {
    vec![SurfaceSig::closed(0, 4), SurfaceSig::disk(2, 2), SurfaceSig::annulus(2, 2, 0)]
}

pub fn reconstruction_exceptions() -> Vec<SurfaceSig> {
    vec![SurfaceSig::closed(0, 4), SurfaceSig::disk(1, 2), SurfaceSig::disk(2, 2)]
}

/// Every valid signature of rank at most `max_rank`, sorted.
pub fn all_valid_up_to_rank(max_rank: u32) -> Vec<SurfaceSig> {
    let mut out = Vec::new();
    let r = max_rank as i64;
    // rank = 6(g-1) + 3b + 3p + sum(h) >= 6g - 6 + 4b + 3p
    for g in 0..=((r + 6) / 6) as u32 {
        for b in 0..=((r + 6) / 4) as u32 {
            for p in 0..=((r + 6) / 3) as u32 {
                let base = 6 * (g as i64 - 1) + 3 * b as i64 + 3 * p as i64;
                let budget = r - base;
                if budget < b as i64 {
                    continue;
                }
                for h in partitions_into(b, budget as u32) {
                    let sig = SurfaceSig::new(g, p, h);
                    if sig.is_valid() && sig.rank().unwrap() <= max_rank {
                        out.push(sig);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Non-increasing sequences of `parts` positive integers with sum at most `max_sum`.
fn partitions_into(parts: u32, max_sum: u32) -> Vec<Vec<u32>> {
    fn go(parts: u32, max_sum: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            out.push(cur.clone());
            return;
        }
        for x in 1..=cap.min(max_sum.saturating_sub(parts - 1)) {
            cur.push(x);
            go(parts - 1, max_sum - x, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(parts, max_sum, max_sum, &mut Vec::new(), &mut out);
    out
}
