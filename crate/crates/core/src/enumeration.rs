//! Search for fundamental outcomes by positive support, and degree sweeps
//! showing that no valid outcome with a given support size exists.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

use crate::criteria::{invertibility_excludes, next_combination};
use crate::error::{Error, Result};
use crate::grid::{triangle, triangle_size, ChipConfiguration, Coord, Perm};
use crate::hyperfield::sign::SignFormTable;
use crate::models::fundamental_outcome;
use crate::pascal::outcome_space;

/// Largest degree handled by the mask-based enumeration.
pub const MAX_ENUMERATION_DEGREE: u32 = 14;
pub const CACHE_ENV: &str = "CHIPSPLIT_CACHE_DIR";
const CACHE_VERSION: &str = "fundamental-cell/v1";

fn for_each_combination(n: usize, m: usize, mut f: impl FnMut(&[usize])) {
    if m > n {
        return;
    }
    let mut c: Vec<usize> = (0..m).collect();
    loop {
        f(&c);
        if m == 0 || !next_combination(&mut c, n) {
            break;
        }
    }
}

/// Sets every admissible positive support has to meet: one per sign form
/// value that the origin alone cannot supply.
fn requirements(d: u32) -> Vec<FixedBitSet> {
    let table = SignFormTable::new(d);
    let mut reqs: Vec<FixedBitSet> = Vec::new();
    for (_, pos, neg) in &table.forms {
        if !neg.contains(0) {
            reqs.push(pos.clone());
        }
        if !pos.contains(0) {
            reqs.push(neg.clone());
        }
    }
    reqs.sort_by_key(|r| (r.count_ones(..), r.ones().collect::<Vec<_>>()));
    reqs.dedup();
    let mut minimal: Vec<FixedBitSet> = Vec::new();
    for r in reqs {
        if !minimal.iter().any(|m| m.is_subset(&r)) {
            minimal.push(r);
        }
    }
    minimal
}

fn to_mask(b: &FixedBitSet) -> u128 {
    b.ones().fold(0u128, |m, k| m | (1u128 << k))
}

/// Counters of one `(n, d)` cell.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellStats {
    /// Supports of the right size whose maximal degree is exactly `d`.
    pub supports: u64,
    /// Those that pass the axis and top-row anchor conditions.
    pub anchored: u64,
    pub hyperfield_pruned: u64,
    pub invertibility_pruned: u64,
    pub kernel_tested: u64,
    pub fundamental: u64,
}

impl CellStats {
    fn absorb(&mut self, o: &CellStats) {
        self.supports += o.supports;
        self.anchored += o.anchored;
        self.hyperfield_pruned += o.hyperfield_pruned;
        self.invertibility_pruned += o.invertibility_pruned;
        self.kernel_tested += o.kernel_tested;
        self.fundamental += o.fundamental;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct CellRecord {
    key: String,
    n: u32,
    d: u32,
    stats: CellStats,
    outcomes: Vec<Json>,
}

/// Which filters run before the exact kernel test.
#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    pub anchors: bool,
    pub hyperfield: bool,
    pub invertibility: bool,
    pub cache_dir: Option<PathBuf>,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { anchors: true, hyperfield: true, invertibility: true, cache_dir: None }
    }
}

impl EnumerationOptions {
    /// Every support goes straight to the exact test.
    pub fn brute_force() -> Self {
        EnumerationOptions { anchors: false, hyperfield: false, invertibility: false, cache_dir: None }
    }

    /// Default filters with the cache root taken from the environment.
    pub fn from_env() -> Self {
        EnumerationOptions { cache_dir: std::env::var_os(CACHE_ENV).map(PathBuf::from), ..Self::default() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    pub cells: BTreeMap<(u32, u32), CellStats>,
    pub cached_cells: usize,
    pub elapsed: Duration,
}

impl EnumerationStats {
    pub fn total(&self) -> CellStats {
        let mut t = CellStats::default();
        for s in self.cells.values() {
            t.absorb(s);
        }
        t
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationReport {
    /// Nonzero counts per `(n, d)`.
    pub table: BTreeMap<(u32, u32), usize>,
    /// Primitive fundamental outcomes sorted by `(n, d)`, then canonically.
    pub outcomes: Vec<ChipConfiguration>,
    pub stats: EnumerationStats,
}

/// `n` for an outcome: the positive support size minus one.
pub fn support_n(w: &ChipConfiguration) -> u32 {
    w.iter().filter(|(_, v)| v.is_positive()).count() as u32 - 1
}

impl EnumerationReport {
    pub fn empty() -> Self {
        EnumerationReport { table: BTreeMap::new(), outcomes: Vec::new(), stats: EnumerationStats::default() }
    }

    pub fn row(&self, n: u32) -> BTreeMap<u32, usize> {
        self.table.iter().filter(|((m, _), _)| *m == n).map(|((_, d), c)| (*d, *c)).collect()
    }

    /// Counts up to the transposition `(12)`.
    pub fn orbit_table(&self) -> BTreeMap<(u32, u32), usize> {
        let set: BTreeSet<&ChipConfiguration> = self.outcomes.iter().collect();
        let mut t = BTreeMap::new();
        for w in &self.outcomes {
            let d = w.degree() as u32;
            let image = w.act(Perm::T12, d).expect("degree bound").with_bound(w.bound());
            if set.contains(&image) && image < *w {
                continue;
            }
            *t.entry((support_n(w), d)).or_insert(0) += 1;
        }
        t
    }

    /// Deterministic JSON: timing and cache hits are left out.
    pub fn to_json(&self) -> Json {
        let table: Vec<Json> = self.table.iter().map(|((n, d), c)| json!([n, d, c])).collect();
        let cells: Vec<Json> = self
            .stats
            .cells
            .iter()
            .map(|((n, d), s)| {
                json!({
                    "n": n, "d": d, "supports": s.supports, "anchored": s.anchored,
                    "hyperfield_pruned": s.hyperfield_pruned,
                    "invertibility_pruned": s.invertibility_pruned,
                    "kernel_tested": s.kernel_tested, "fundamental": s.fundamental,
                })
            })
            .collect();
        json!({
            "table": table,
            "outcomes": self.outcomes.iter().map(ChipConfiguration::to_json).collect::<Vec<_>>(),
            "stats": { "cells": cells },
        })
    }
}

fn cell_key(n: u32, d: u32, opts: &EnumerationOptions) -> String {
    let mut h = Sha256::new();
    h.update(format!(
        "{CACHE_VERSION}:n={n}:d={d}:anchors={}:hyperfield={}:invertibility={}",
        opts.anchors, opts.hyperfield, opts.invertibility
    ));
    hex::encode(h.finalize())
}

fn load_cell(dir: &Path, key: &str) -> Option<CellRecord> {
    let text = std::fs::read_to_string(dir.join(format!("{key}.json"))).ok()?;
    let rec: CellRecord = serde_json::from_str(&text).ok()?;
    (rec.key == key).then_some(rec)
}

fn store_cell(dir: &Path, rec: &CellRecord) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Cache(e.to_string()))?;
    let path = dir.join(format!("{}.json", rec.key));
    let tmp = dir.join(format!("{}.json.tmp", rec.key));
    let text = serde_json::to_string(rec).map_err(|e| Error::Cache(e.to_string()))?;
    std::fs::write(&tmp, text).map_err(|e| Error::Cache(e.to_string()))?;
    std::fs::rename(&tmp, &path).map_err(|e| Error::Cache(e.to_string()))
}

/// All fundamental outcomes with positive support of size `n + 1` and
/// degree exactly `d`.
pub fn enumerate_cell(n: u32, d: u32, opts: &EnumerationOptions) -> Result<(Vec<ChipConfiguration>, CellStats)> {
    if d == 0 || d > MAX_ENUMERATION_DEGREE {
        return Err(Error::Parameters(format!("cell degree must lie in 1..={MAX_ENUMERATION_DEGREE}, got {d}")));
    }
    let m = n as usize + 1;
    let pts: Vec<Coord> = triangle(d).collect();
    let top: Vec<usize> = (0..pts.len()).filter(|&k| pts[k].deg() == d).collect();
    let lower: Vec<usize> = (1..pts.len()).filter(|&k| pts[k].deg() < d).collect();
    let x_axis: u128 = (1..pts.len()).filter(|&k| pts[k].j == 0).fold(0, |a, k| a | 1 << k);
    let y_axis: u128 = (1..pts.len()).filter(|&k| pts[k].i == 0).fold(0, |a, k| a | 1 << k);
    let reqs: Vec<u128> = if opts.hyperfield { requirements(d).iter().map(to_mask).collect() } else { Vec::new() };

    let mut heads: Vec<Vec<usize>> = Vec::new();
    for t in 1..=m.min(top.len()) {
        for_each_combination(top.len(), t, |c| heads.push(c.iter().map(|&k| top[k]).collect()));
    }
    let results: Vec<(Vec<ChipConfiguration>, CellStats)> = heads
        .par_iter()
        .map(|head| {
            let mut stats = CellStats::default();
            let mut found = Vec::new();
            let head_mask = head.iter().fold(0u128, |a, &k| a | 1 << k);
            let mut rest = Vec::new();
            for_each_combination(lower.len(), m - head.len(), |c| rest.push(c.iter().map(|&k| lower[k]).collect::<Vec<_>>()));
            for tail in rest {
                stats.supports += 1;
                let mask = tail.iter().fold(head_mask, |a, &k| a | 1 << k);
                if opts.anchors && (head.len() < 2 || mask & x_axis == 0 || mask & y_axis == 0) {
                    continue;
                }
                stats.anchored += 1;
                if reqs.iter().any(|r| r & mask == 0) {
                    stats.hyperfield_pruned += 1;
                    continue;
                }
                let s: BTreeSet<Coord> = head.iter().chain(tail.iter()).map(|&k| pts[k]).collect();
                if opts.invertibility {
                    let mut full = s.clone();
                    full.insert(Coord::ORIGIN);
                    if invertibility_excludes(&full, d).is_excluded() {
                        stats.invertibility_pruned += 1;
                        continue;
                    }
                }
                stats.kernel_tested += 1;
                if let Some(w) = fundamental_outcome(&s, d).expect("support lies in V_d") {
                    stats.fundamental += 1;
                    found.push(w);
                }
            }
            (found, stats)
        })
        .collect();
    let mut stats = CellStats::default();
    let mut outcomes = Vec::new();
    for (f, s) in results {
        stats.absorb(&s);
        outcomes.extend(f);
    }
    outcomes.sort();
    Ok((outcomes, stats))
}

/// Fundamental outcomes for every `1 <= n <= n_max` and `1 <= d <= d_max`.
pub fn enumerate_fundamental(d_max: u32, n_max: u32) -> Result<EnumerationReport> {
    enumerate_fundamental_with(d_max, n_max, &EnumerationOptions::from_env())
}

pub fn enumerate_fundamental_with(d_max: u32, n_max: u32, opts: &EnumerationOptions) -> Result<EnumerationReport> {
    if d_max > MAX_ENUMERATION_DEGREE {
        return Err(Error::Parameters(format!("d_max must be at most {MAX_ENUMERATION_DEGREE}")));
    }
    let start = Instant::now();
    let mut report = EnumerationReport::empty();
    for n in 1..=n_max {
        for d in 1..=d_max {
            let key = cell_key(n, d, opts);
            let cached = opts.cache_dir.as_deref().and_then(|dir| load_cell(dir, &key));
            let (outcomes, stats) = match cached {
                Some(rec) => {
                    report.stats.cached_cells += 1;
                    let outcomes = rec.outcomes.iter().map(ChipConfiguration::from_json).collect::<Result<Vec<_>>>()?;
                    (outcomes, rec.stats)
                }
                None => {
                    let (outcomes, stats) = enumerate_cell(n, d, opts)?;
                    if let Some(dir) = opts.cache_dir.as_deref() {
                        let rec = CellRecord {
                            key: key.clone(),
                            n,
                            d,
                            stats: stats.clone(),
                            outcomes: outcomes.iter().map(ChipConfiguration::to_json).collect(),
                        };
                        store_cell(dir, &rec)?;
                    }
                    (outcomes, stats)
                }
            };
            if !outcomes.is_empty() {
                report.table.insert((n, d), outcomes.len());
            }
            report.stats.cells.insert((n, d), stats);
            report.outcomes.extend(outcomes);
        }
    }
    report.stats.elapsed = start.elapsed();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureCheck {
    pub holds: bool,
    /// Outcomes breaking `n <= d <= 2n - 1`, as `(n, d)`.
    pub violations: Vec<(u32, u32)>,
    /// Number of outcomes with `d = 2n - 1`, per `n`.
    pub equality_cases: BTreeMap<u32, usize>,
}

pub fn check_conjecture(report: &EnumerationReport) -> ConjectureCheck {
    let mut violations = Vec::new();
    let mut equality_cases = BTreeMap::new();
    for w in &report.outcomes {
        let n = support_n(w);
        let d = w.degree() as u32;
        if d + 1 > 2 * n || n > d {
            violations.push((n, d));
        }
        if d + 1 == 2 * n {
            *equality_cases.entry(n).or_insert(0) += 1;
        }
    }
    ConjectureCheck { holds: violations.is_empty(), violations, equality_cases }
}

/// How a hyperfield survivor of a sweep was disposed of.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SurvivorFate {
    Invertibility,
    /// The outcome space on the support is trivial.
    KernelTrivial,
    /// The outcome space is a line whose generator has the wrong signs.
    KernelWrongSigns,
    /// A valid outcome exists.
    Valid,
    /// The outcome space has dimension at least two; not decided.
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepCertificate {
    pub d: u32,
    pub support_size: usize,
    pub search_nodes: u64,
    pub hyperfield_survivors: usize,
    /// Survivor supports (origin excluded) with their fates, in canonical order.
    pub survivors: Vec<(Vec<Coord>, SurvivorFate)>,
    pub valid: Vec<ChipConfiguration>,
}

impl SweepCertificate {
    pub fn proves_absence(&self) -> bool {
        self.survivors.iter().all(|(_, f)| !matches!(f, SurvivorFate::Valid | SurvivorFate::Undecided))
    }

    pub fn to_json(&self) -> Json {
        let survivors: Vec<Json> = self
            .survivors
            .iter()
            .map(|(s, f)| json!({ "support": s.iter().map(|c| [c.i, c.j]).collect::<Vec<_>>(), "fate": f }))
            .collect();
        json!({
            "d": self.d, "support_size": self.support_size, "search_nodes": self.search_nodes,
            "hyperfield_survivors": self.hyperfield_survivors, "survivors": survivors,
            "valid": self.valid.iter().map(ChipConfiguration::to_json).collect::<Vec<_>>(),
            "proves_absence": self.proves_absence(),
        })
    }
}

struct SweepSearch<'a> {
    reqs: &'a [FixedBitSet],
    size: usize,
    nodes: &'a AtomicU64,
}

impl SweepSearch<'_> {
    /// Extends `chosen` to supports of the target size meeting every
    /// requirement, never using points in `banned`.
    fn run(&self, chosen: &mut Vec<usize>, banned: &mut FixedBitSet, out: &mut Vec<Vec<usize>>) {
        self.nodes.fetch_add(1, Ordering::Relaxed);
        let open = self
            .reqs
            .iter()
            .filter(|r| !chosen.iter().any(|&k| r.contains(k)))
            .min_by_key(|r| r.difference_count(banned))
            .map(|r| r.difference(banned).collect::<Vec<usize>>());
        let room = self.size - chosen.len();
        match open {
            None => {
                let free: Vec<usize> = (1..banned.len()).filter(|&k| !banned.contains(k) && !chosen.contains(&k)).collect();
                for_each_combination(free.len(), room, |c| {
                    let mut s = chosen.clone();
                    s.extend(c.iter().map(|&k| free[k]));
                    s.sort_unstable();
                    out.push(s);
                });
            }
            Some(_) if room == 0 => {}
            Some(cands) => {
                let mut added = Vec::new();
                for p in cands {
                    chosen.push(p);
                    self.run(chosen, banned, out);
                    chosen.pop();
                    banned.insert(p);
                    added.push(p);
                }
                for p in added {
                    banned.set(p, false);
                }
            }
        }
    }
}

fn resolve_survivor(s: &BTreeSet<Coord>, d: u32) -> (SurvivorFate, Option<ChipConfiguration>) {
    let mut full = s.clone();
    full.insert(Coord::ORIGIN);
    if invertibility_excludes(&full, d).is_excluded() {
        return (SurvivorFate::Invertibility, None);
    }
    let space = outcome_space(&full, d).expect("support lies in V_d");
    match space.len() {
        0 => (SurvivorFate::KernelTrivial, None),
        1 => {
            let w = &space[0];
            let a = w.analyze().expect("bounded");
            if w.get(Coord::ORIGIN).is_negative() && a.is_valid && a.supp_plus == *s {
                (SurvivorFate::Valid, Some(w.clone()))
            } else {
                (SurvivorFate::KernelWrongSigns, None)
            }
        }
        _ => (SurvivorFate::Undecided, None),
    }
}

/// Searches for valid outcomes of degree exactly `d` with `support_size`
/// positive entries. The positive support must meet every sign-form
/// requirement and the top row, and the search branches on the smallest
/// open requirement.
pub fn sweep_degree(support_size: usize, d: u32) -> Result<SweepCertificate> {
    if d == 0 || support_size < 2 {
        return Err(Error::Parameters("sweep needs d >= 1 and at least two positive points".into()));
    }
    let n_pts = triangle_size(d);
    let mut reqs = requirements(d);
    let mut top = FixedBitSet::with_capacity(n_pts);
    for (k, c) in triangle(d).enumerate() {
        if c.deg() == d {
            top.insert(k);
        }
    }
    reqs.push(top);
    let pts: Vec<Coord> = triangle(d).collect();
    let nodes = AtomicU64::new(0);
    let search = SweepSearch { reqs: &reqs, size: support_size, nodes: &nodes };

    // split the first branching level across threads
    let first = reqs.iter().min_by_key(|r| r.count_ones(..)).expect("nonempty").ones().collect::<Vec<_>>();
    let mut supports: Vec<Vec<usize>> = first
        .par_iter()
        .enumerate()
        .map(|(idx, &p)| {
            let mut banned = FixedBitSet::with_capacity(n_pts);
            banned.insert(0);
            for &q in &first[..idx] {
                banned.insert(q);
            }
            let mut out = Vec::new();
            search.run(&mut vec![p], &mut banned, &mut out);
            out
        })
        .flatten()
        .collect();
    supports.sort();
    supports.dedup();
    let survivors: Vec<(Vec<Coord>, SurvivorFate, Option<ChipConfiguration>)> = supports
        .par_iter()
        .map(|s| {
            let set: BTreeSet<Coord> = s.iter().map(|&k| pts[k]).collect();
            let (fate, w) = resolve_survivor(&set, d);
            (set.into_iter().collect(), fate, w)
        })
        .collect();
    let hyperfield_survivors = survivors.len();
    let mut valid = Vec::new();
    let mut list = Vec::new();
    for (s, f, w) in survivors {
        valid.extend(w);
        list.push((s, f));
    }
    list.sort_by(|a, b| a.0.iter().rev().cmp(b.0.iter().rev()));
    valid.sort();
    Ok(SweepCertificate {
        d,
        support_size,
        search_nodes: nodes.load(Ordering::Relaxed),
        hyperfield_survivors,
        survivors: list,
        valid,
    })
}

/// Per-degree certificates for `d` in `degrees`.
pub fn sweep_no_valid_outcomes(support_size: usize, degrees: impl IntoIterator<Item = u32>) -> Result<Vec<SweepCertificate>> {
    degrees.into_iter().map(|d| sweep_degree(support_size, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperfield::sign::hyperfield_excludes;
    use num_bigint::BigInt;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn set(pts: &[(u32, u32)]) -> BTreeSet<Coord> {
        pts.iter().map(|&(i, j)| Coord::new(i, j)).collect()
    }

    #[test]
    fn requirement_masks_match_form_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 1..=7u32 {
            let reqs = requirements(d);
            let mut top = FixedBitSet::with_capacity(triangle_size(d));
            let pts: Vec<Coord> = triangle(d).collect();
            for (k, c) in pts.iter().enumerate() {
                if c.deg() == d {
                    top.insert(k);
                }
            }
            for _ in 0..300 {
                let size = 2 + (rand::Rng::gen_range(&mut rng, 0..4usize));
                let s: BTreeSet<Coord> = pts[1..].choose_multiple(&mut rng, size.min(pts.len() - 1)).copied().collect();
                if s.iter().all(|c| c.deg() < d) {
                    continue;
                }
                let bits: FixedBitSet = {
                    let mut b = FixedBitSet::with_capacity(pts.len());
                    for c in &s {
                        b.insert(c.index());
                    }
                    b
                };
                let meets = reqs.iter().all(|r| !r.is_disjoint(&bits));
                assert_eq!(meets, !hyperfield_excludes(&s, d).unwrap().is_excluded(), "{s:?} d = {d}");
            }
        }
    }

    #[test]
    fn small_cells() {
        let r = enumerate_fundamental_with(3, 2, &EnumerationOptions::default()).unwrap();
        assert_eq!(r.row(2), [(2, 3), (3, 1)].into());
        assert_eq!(r.row(1), [(1, 1)].into());
        let w = ChipConfiguration::from_triples([(0, 0, -1), (1, 0, 1), (0, 1, 1)].map(|(i, j, v)| (i, j, BigInt::from(v))))
            .with_bound(Some(1));
        let r1 = enumerate_fundamental_with(1, 1, &EnumerationOptions::default()).unwrap();
        assert_eq!(r1.outcomes, vec![w]);
        assert!(check_conjecture(&r).holds);
        assert!(check_conjecture(&EnumerationReport::empty()).holds);
    }

    #[test]
    fn pruned_enumeration_matches_brute_force() {
        for d in 1..=4 {
            for n in 1..=4 {
                let (a, sa) = enumerate_cell(n, d, &EnumerationOptions::default()).unwrap();
                let (b, sb) = enumerate_cell(n, d, &EnumerationOptions::brute_force()).unwrap();
                assert_eq!(a, b, "n = {n}, d = {d}");
                assert_eq!(sa.supports, sb.supports);
                assert_eq!(sb.kernel_tested, sb.supports);
            }
        }
    }

    #[test]
    fn pruned_candidates_are_not_fundamental() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = 6;
        let pts: Vec<Coord> = triangle(d).skip(1).collect();
        let table = SignFormTable::new(d);
        let mut checked = (0, 0);
        for _ in 0..4000 {
            let s: BTreeSet<Coord> = pts.choose_multiple(&mut rng, 4).copied().collect();
            if s.iter().all(|c| c.deg() < d) {
                continue;
            }
            let mut full = s.clone();
            full.insert(Coord::ORIGIN);
            let hyper = crate::hyperfield::sign::hyperfield_excludes_with(&table, &s).unwrap().is_excluded();
            let inv = invertibility_excludes(&full, d).is_excluded();
            if hyper || inv {
                assert!(fundamental_outcome(&s, d).unwrap().is_none(), "{s:?}");
                if hyper {
                    checked.0 += 1;
                } else {
                    checked.1 += 1;
                }
            }
        }
        assert!(checked.0 > 100 && checked.1 > 0, "{checked:?}");
    }

    #[test]
    fn conjecture_negative_control() {
        let mut r = EnumerationReport::empty();
        let bad = ChipConfiguration::from_triples([(0, 0, -1), (5, 0, 1), (0, 1, 1)].map(|(i, j, v)| (i, j, BigInt::from(v))));
        r.outcomes.push(bad);
        let c = check_conjecture(&r);
        assert!(!c.holds);
        assert_eq!(c.violations, vec![(1, 5)]);
    }

    #[test]
    fn sweep_small_support() {
        // two positive points: only the degree-one outcome
        let c = sweep_degree(2, 1).unwrap();
        assert_eq!(c.valid.len(), 1);
        for d in 2..=6 {
            assert!(sweep_degree(2, d).unwrap().proves_absence(), "d = {d}");
        }
        let c = sweep_degree(3, 3).unwrap();
        assert_eq!(c.valid.len(), 1);
        assert_eq!(c.valid[0].support(), set(&[(0, 0), (3, 0), (1, 1), (0, 3)]));
    }

    #[test]
    fn cache_roundtrip() {
        let dir = std::env::temp_dir().join(format!("chipsplit-cache-test-{}", std::process::id()));
        let opts = EnumerationOptions { cache_dir: Some(dir.clone()), ..EnumerationOptions::default() };
        let a = enumerate_fundamental_with(4, 3, &opts).unwrap();
        let b = enumerate_fundamental_with(4, 3, &opts).unwrap();
        assert_eq!(b.stats.cached_cells, 12);
        assert_eq!(a.to_json(), b.to_json());
        std::fs::remove_dir_all(dir).unwrap();
    }
}
