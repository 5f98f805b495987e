//! Brute-force genus histogram of labelled ribbon graphs with a given
//! valency profile: half-edges around each vertex are consecutive integers
//! (the rotation σ is fixed) and every fixed-point-free involution α is an
//! edge set. Faces are the cycles of σ∘α.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::counts::{MapCountRecord, Provenance};
use crate::{Error, Result};

pub const DEFAULT_ORACLE_CAP: usize = 18;

/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "ANGULATA_WORKERS";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValencyProfile {
    valencies: Vec<usize>,
}

impl ValencyProfile {
    /// Sorts the valencies decreasingly; each must be at least 1.
    pub fn new(mut valencies: Vec<usize>) -> Result<ValencyProfile> {
        if valencies.is_empty() || valencies.contains(&0) {
            return Err(Error::InvalidInput("a profile needs valencies ≥ 1".into()));
        }
        valencies.sort_unstable_by(|a, b| b.cmp(a));
        Ok(ValencyProfile { valencies })
    }

    pub fn uniform(b: usize, k: usize) -> Result<ValencyProfile> {
        ValencyProfile::new(vec![b; k])
    }

    pub fn valencies(&self) -> &[usize] {
        &self.valencies
    }

    pub fn total(&self) -> usize {
        self.valencies.iter().sum()
    }

    pub fn vertices(&self) -> usize {
        self.valencies.len()
    }
}

impl std::str::FromStr for ValencyProfile {
    type Err = Error;
    fn from_str(s: &str) -> Result<ValencyProfile> {
        let v = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("bad valency {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ValencyProfile::new(v)
    }
}

impl std::fmt::Display for ValencyProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.valencies.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for ValencyProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.valencies.serialize(s)
    }
}

/// Which permutation's cycles are the faces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FaceConvention {
    #[default]
    SigmaAlpha,
    AlphaSigma,
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    pub cap: usize,
    pub workers: Option<usize>,
    /// Only this genus is counted, with face-count pruning.
    pub genus: Option<usize>,
    /// Visit disconnected involutions too (they are counted, not histogrammed).
    pub include_disconnected: bool,
    pub convention: FaceConvention,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            cap: DEFAULT_ORACLE_CAP,
            workers: None,
            genus: None,
            include_disconnected: false,
            convention: FaceConvention::SigmaAlpha,
        }
    }
}

/// Worker count: explicit, then `ANGULATA_WORKERS`, then the machine's parallelism.
pub fn resolve_workers(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| {
            std::env::var(WORKERS_ENV)
                .ok()
                .and_then(|v| v.trim().parse().ok())
        })
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusHistogram {
    #[serde(serialize_with = "ser_counts")]
    pub counts: BTreeMap<usize, u64>,
}

fn ser_counts<S: Serializer>(
    m: &BTreeMap<usize, u64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let out: BTreeMap<String, String> = m
        .iter()
        .map(|(g, c)| (g.to_string(), c.to_string()))
        .collect();
    out.serialize(s)
}

impl GenusHistogram {
    pub fn get(&self, g: usize) -> u64 {
        self.counts.get(&g).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub profile: ValencyProfile,
    #[serde(serialize_with = "ser_hist")]
    pub histogram: GenusHistogram,
    /// Involutions whose map is disconnected; only counted with `include_disconnected`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disconnected: Option<u64>,
    pub elapsed_ms: u128,
    pub leaves_visited: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

fn ser_hist<S: Serializer>(h: &GenusHistogram, s: S) -> std::result::Result<S::Ok, S::Error> {
    ser_counts(&h.counts, s)
}

/// Per-task tallies.
#[derive(Default, Clone)]
struct Tally {
    genus: BTreeMap<usize, u64>,
    disconnected: u64,
    leaves: u64,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        for (g, c) in o.genus {
            *self.genus.entry(g).or_insert(0) += c;
        }
        self.disconnected += o.disconnected;
        self.leaves += o.leaves;
        self
    }
}

struct Search<'a> {
    n: usize,
    k: usize,
    sigma: &'a [usize],
    sigma_inv: &'a [usize],
    vertex: &'a [usize],
    convention: FaceConvention,
    target_faces: Option<i64>,
    include_disconnected: bool,

    alpha: Vec<usize>,
    // face paths: head of the path ending at a tail, tail of the path starting at a head
    start_of: Vec<usize>,
    end_of: Vec<usize>,
    faces: i64,
    // vertex union–find with rollback (no path compression)
    parent: Vec<usize>,
    size: Vec<usize>,
    open: Vec<usize>,
    undo: Vec<Undo>,
    tally: Tally,
}

enum Undo {
    Path {
        h: usize,
        old_end: usize,
        t: usize,
        old_start: usize,
    },
    Face,
    Union {
        child: usize,
        root: usize,
    },
    Open {
        root: usize,
        by: usize,
    },
}

const NONE: usize = usize::MAX;

impl<'a> Search<'a> {
    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    fn add_face_edge(&mut self, u: usize, v: usize) {
        let h = self.start_of[u];
        if h == v {
            self.faces += 1;
            self.undo.push(Undo::Face);
            return;
        }
        let t = self.end_of[v];
        self.undo.push(Undo::Path {
            h,
            old_end: self.end_of[h],
            t,
            old_start: self.start_of[t],
        });
        self.end_of[h] = t;
        self.start_of[t] = h;
    }

    /// Pairs `i` with `j`; returns false if the result is already excluded.
    fn pair(&mut self, i: usize, j: usize) -> bool {
        self.alpha[i] = j;
        self.alpha[j] = i;
        match self.convention {
            FaceConvention::SigmaAlpha => {
                self.add_face_edge(i, self.sigma[j]);
                self.add_face_edge(j, self.sigma[i]);
            }
            FaceConvention::AlphaSigma => {
                self.add_face_edge(self.sigma_inv[i], j);
                self.add_face_edge(self.sigma_inv[j], i);
            }
        }
        let (ri, rj) = (self.find(self.vertex[i]), self.find(self.vertex[j]));
        let root = if ri != rj {
            let (big, small) = if self.size[ri] >= self.size[rj] {
                (ri, rj)
            } else {
                (rj, ri)
            };
            self.parent[small] = big;
            self.size[big] += self.size[small];
            self.open[big] += self.open[small];
            self.undo.push(Undo::Union {
                child: small,
                root: big,
            });
            big
        } else {
            ri
        };
        self.open[root] -= 2;
        self.undo.push(Undo::Open { root, by: 2 });
        if !self.include_disconnected && self.open[root] == 0 && self.size[root] < self.k {
            return false;
        }
        if let Some(target) = self.target_faces {
            let unpaired = self.alpha.iter().filter(|&&a| a == NONE).count() as i64;
            if self.faces > target || self.faces + unpaired < target {
                return false;
            }
        }
        true
    }

    fn rollback(&mut self, mark: usize) {
        while self.undo.len() > mark {
            match self.undo.pop().unwrap() {
                Undo::Path {
                    h,
                    old_end,
                    t,
                    old_start,
                } => {
                    self.end_of[h] = old_end;
                    self.start_of[t] = old_start;
                }
                Undo::Face => self.faces -= 1,
                Undo::Union { child, root } => {
                    self.parent[child] = child;
                    self.size[root] -= self.size[child];
                    self.open[root] -= self.open[child];
                }
                Undo::Open { root, by } => self.open[root] += by,
            }
        }
    }

    fn unpair(&mut self, i: usize, j: usize, mark: usize) {
        self.rollback(mark);
        self.alpha[i] = NONE;
        self.alpha[j] = NONE;
    }

    fn leaf(&mut self) {
        self.tally.leaves += 1;
        let root = self.find(0);
        if self.size[root] < self.k {
            self.tally.disconnected += 1;
            return;
        }
        let chi = self.k as i64 - (self.n / 2) as i64 + self.faces;
        assert!(
            chi <= 2 && chi % 2 == 0,
            "Euler characteristic {chi} of a connected map"
        );
        *self
            .tally
            .genus
            .entry(((2 - chi) / 2) as usize)
            .or_insert(0) += 1;
    }

    fn first_unpaired(&self) -> Option<usize> {
        self.alpha.iter().position(|&a| a == NONE)
    }

    fn dfs(&mut self) {
        let Some(i) = self.first_unpaired() else {
            self.leaf();
            return;
        };
        for j in i + 1..self.n {
            if self.alpha[j] != NONE {
                continue;
            }
            let mark = self.undo.len();
            if self.pair(i, j) {
                self.dfs();
            }
            self.unpair(i, j, mark);
        }
    }

    /// Replays a prefix of partner choices; false if it is pruned.
    fn replay(&mut self, prefix: &[usize]) -> bool {
        for &j in prefix {
            let i = self
                .first_unpaired()
                .expect("prefix shorter than the matching");
            if !self.pair(i, j) {
                return false;
            }
        }
        true
    }

    /// Prefixes of partner choices of length `depth` that survive pruning.
    fn prefixes(&mut self, depth: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(i) = self.first_unpaired().filter(|_| acc.len() < depth) else {
            out.push(acc.clone());
            return;
        };
        for j in i + 1..self.n {
            if self.alpha[j] != NONE {
                continue;
            }
            let mark = self.undo.len();
            if self.pair(i, j) {
                acc.push(j);
                self.prefixes(depth, acc, out);
                acc.pop();
            }
            self.unpair(i, j, mark);
        }
    }
}

struct Layout {
    n: usize,
    k: usize,
    sigma: Vec<usize>,
    sigma_inv: Vec<usize>,
    vertex: Vec<usize>,
    open: Vec<usize>,
}

impl Layout {
    fn new(p: &ValencyProfile) -> Layout {
        let n = p.total();
        let mut sigma = vec![0; n];
        let mut sigma_inv = vec![0; n];
        let mut vertex = vec![0; n];
        let mut at = 0;
        for (v, &b) in p.valencies().iter().enumerate() {
            for i in 0..b {
                sigma[at + i] = at + (i + 1) % b;
                sigma_inv[at + (i + 1) % b] = at + i;
                vertex[at + i] = v;
            }
            at += b;
        }
        Layout {
            n,
            k: p.vertices(),
            sigma,
            sigma_inv,
            vertex,
            open: p.valencies().to_vec(),
        }
    }

    fn search(&self, opts: &OracleOptions, target_faces: Option<i64>) -> Search<'_> {
        Search {
            n: self.n,
            k: self.k,
            sigma: &self.sigma,
            sigma_inv: &self.sigma_inv,
            vertex: &self.vertex,
            convention: opts.convention,
            target_faces,
            include_disconnected: opts.include_disconnected,
            alpha: vec![NONE; self.n],
            start_of: (0..self.n).collect(),
            end_of: (0..self.n).collect(),
            faces: 0,
            parent: (0..self.k).collect(),
            size: vec![1; self.k],
            open: self.open.clone(),
            undo: Vec::with_capacity(8 * self.n),
            tally: Tally::default(),
        }
    }
}

/// Genus histogram of the connected maps with the given profile.
pub fn enumerate(profile: &ValencyProfile, opts: &OracleOptions) -> Result<OracleResult> {
    let started = Instant::now();
    let n = profile.total();
    if n > opts.cap {
        return Err(Error::InvalidInput(format!(
            "profile {profile} has {n} half-edges, above the oracle cap {}",
            opts.cap
        )));
    }
    let empty = |warning: String| OracleResult {
        profile: profile.clone(),
        histogram: GenusHistogram {
            counts: BTreeMap::new(),
        },
        disconnected: opts.include_disconnected.then_some(0),
        elapsed_ms: started.elapsed().as_millis(),
        leaves_visited: 0,
        warning: Some(warning),
    };
    if n % 2 == 1 {
        return Ok(empty(format!("odd total valency {n}: no maps")));
    }
    let layout = Layout::new(profile);
    let target_faces = match opts.genus {
        Some(g) => {
            let f = 2 - 2 * g as i64 - layout.k as i64 + (n / 2) as i64;
            if f < 1 {
                return Ok(empty(format!("genus {g} needs {f} faces: no maps")));
            }
            Some(f)
        }
        None => None,
    };

    let workers = resolve_workers(opts.workers);
    let mut root = layout.search(opts, target_faces);
    let mut prefixes = Vec::new();
    let mut depth = 0;
    while depth < n / 2 {
        depth += 1;
        prefixes.clear();
        root.prefixes(depth, &mut Vec::new(), &mut prefixes);
        if prefixes.len() >= 16 * workers {
            break;
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?;
    let tally = pool.install(|| {
        prefixes
            .par_iter()
            .map(|prefix| {
                let mut s = layout.search(opts, target_faces);
                if s.replay(prefix) {
                    s.dfs();
                }
                s.tally
            })
            .reduce(Tally::default, Tally::merge)
    });
    let mut counts = tally.genus;
    if let Some(g) = opts.genus {
        counts.retain(|&h, _| h == g);
    }
    Ok(OracleResult {
        profile: profile.clone(),
        histogram: GenusHistogram { counts },
        disconnected: opts.include_disconnected.then_some(tally.disconnected),
        elapsed_ms: started.elapsed().as_millis(),
        leaves_visited: tally.leaves,
        warning: None,
    })
}

/// Single-genus count, as a record when the profile is uniform.
pub fn enumerate_count(profile: &ValencyProfile, g: usize, opts: &OracleOptions) -> Result<u64> {
    let opts = OracleOptions {
        genus: Some(g),
        ..opts.clone()
    };
    Ok(enumerate(profile, &opts)?.histogram.get(g))
}

/// `n_g(b^k)` from the oracle.
pub fn oracle_record(b: u32, g: usize, k: usize, opts: &OracleOptions) -> Result<MapCountRecord> {
    let profile = ValencyProfile::uniform(b as usize, k)?;
    let count = enumerate_count(&profile, g, opts)?;
    Ok(MapCountRecord {
        g,
        b,
        k,
        count: BigInt::from(count),
        provenance: Provenance::Oracle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hist(p: &str) -> BTreeMap<usize, u64> {
        enumerate(&p.parse().unwrap(), &OracleOptions::default())
            .unwrap()
            .histogram
            .counts
    }

    #[test]
    fn small_profiles() {
        assert_eq!(hist("3,3"), BTreeMap::from([(0, 12), (1, 3)]));
        assert_eq!(hist("4"), BTreeMap::from([(0, 2), (1, 1)]));
        assert_eq!(hist("1,1"), BTreeMap::from([(0, 1)]));
        assert_eq!(hist("6"), BTreeMap::from([(0, 5), (1, 10)]));
        assert!(hist("3").is_empty());
    }

    #[test]
    fn all_involutions_and_conventions() {
        for p in ["3,3", "4,2", "2,2,2", "3,3,2", "4,4", "5,3", "3,3,3,3"] {
            let p: ValencyProfile = p.parse().unwrap();
            let all = OracleOptions {
                include_disconnected: true,
                ..Default::default()
            };
            let r = enumerate(&p, &all).unwrap();
            let total = r.histogram.total() + r.disconnected.unwrap();
            let expect = crate::exact::double_factorial(p.total() as i64 - 1).unwrap();
            assert_eq!(BigInt::from(total), expect, "{p}");
            let flipped = OracleOptions {
                convention: FaceConvention::AlphaSigma,
                ..all
            };
            assert_eq!(
                enumerate(&p, &flipped).unwrap().histogram,
                r.histogram,
                "{p}"
            );
            let pruned = enumerate(&p, &OracleOptions::default()).unwrap();
            assert_eq!(pruned.histogram, r.histogram);
        }
    }

    #[test]
    fn genus_filter_and_workers() {
        let p: ValencyProfile = "3,3,3,3".parse().unwrap();
        let one = OracleOptions {
            workers: Some(1),
            ..Default::default()
        };
        let many = OracleOptions {
            workers: Some(4),
            ..Default::default()
        };
        assert_eq!(
            enumerate(&p, &one).unwrap().histogram,
            enumerate(&p, &many).unwrap().histogram
        );
        assert_eq!(enumerate_count(&p, 1, &one).unwrap(), 4536);
        assert_eq!(enumerate_count(&p, 0, &many).unwrap(), 5184);
        assert_eq!(enumerate_count(&"6".parse().unwrap(), 0, &one).unwrap(), 5);
    }

    #[test]
    fn cap_is_enforced() {
        let p = ValencyProfile::uniform(4, 5).unwrap();
        let opts = OracleOptions {
            cap: 18,
            ..Default::default()
        };
        assert!(matches!(enumerate(&p, &opts), Err(Error::InvalidInput(_))));
    }
}
