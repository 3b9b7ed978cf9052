//! Exclusion criteria for outcome supports: pairing matrices with their
//! block decomposition, and the hexagon restriction argument.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{ChipConfiguration, Coord, Perm};
use crate::hyperfield::sign::HyperSum;
use crate::linalg::{bareiss_determinant, ExactMatrix};
use crate::pascal::{binomial, is_outcome};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ExclusionVerdict {
    Excluded(Certificate),
    Inconclusive,
}

impl ExclusionVerdict {
    pub fn is_excluded(&self) -> bool {
        matches!(self, ExclusionVerdict::Excluded(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Certificate {
    Invertibility(InvertibilityCertificate),
    Hyperfield { form: String, value: HyperSum },
}

/// How a diagonal block was shown to be invertible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockMethod {
    SinglePoint,
    TwoInColumn,
    ThreeInColumn,
    TwoAndOne,
    Direct,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockCertificate {
    pub points: Vec<Coord>,
    pub rows: Vec<u32>,
    pub method: BlockMethod,
    #[serde(serialize_with = "crate::util::as_string")]
    pub determinant: BigInt,
}

/// Witness that the pairing matrix of `E` against `sigma · S` is invertible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvertibilityCertificate {
    pub sigma: Perm,
    pub strategy: &'static str,
    pub d: u32,
    pub support: Vec<Coord>,
    pub rows: Vec<u32>,
    pub blocks: Vec<BlockCertificate>,
}

impl InvertibilityCertificate {
    /// Recomputes every block determinant and the full pairing determinant.
    pub fn verify(&self) -> bool {
        let blocks_ok = self.blocks.iter().all(|b| {
            let m = pairing_entries(&b.rows, &b.points, self.d);
            let det = bareiss_determinant(m);
            !det.is_zero() && det == b.determinant
        });
        let full = pairing_entries(&self.rows, &self.support, self.d);
        let mut rows = self.rows.clone();
        rows.sort_unstable();
        rows.dedup();
        blocks_ok && rows.len() == self.support.len() && !bareiss_determinant(full).is_zero()
    }
}

fn pairing_entries(e: &[u32], s: &[Coord], d: u32) -> Vec<Vec<BigInt>> {
    e.iter()
        .map(|&a| s.iter().map(|c| binomial(d as i64 - c.deg() as i64, a as i64 - c.i as i64)).collect())
        .collect()
}

/// The matrix `(binom(d - deg(i,j), a - i))` with rows `a ∈ E` and columns `(i,j) ∈ S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingMatrix {
    pub e: Vec<u32>,
    pub s: Vec<Coord>,
    pub d: u32,
    pub entries: Vec<Vec<BigInt>>,
}

impl PairingMatrix {
    pub fn determinant(&self) -> BigInt {
        bareiss_determinant(self.entries.clone())
    }

    pub fn to_exact(&self) -> ExactMatrix {
        ExactMatrix::from_int_fn(self.e.len(), self.s.len(), |r, c| self.entries[r][c].clone())
    }
}

pub fn pairing_matrix(e: &BTreeSet<u32>, s: &BTreeSet<Coord>, d: u32) -> Result<PairingMatrix> {
    if e.len() != s.len() || s.is_empty() {
        return Err(Error::Dimension(format!("|E| = {} but |S| = {}", e.len(), s.len())));
    }
    if let Some(a) = e.iter().find(|&&a| a > d) {
        return Err(Error::Index(format!("row index {a} exceeds d = {d}")));
    }
    if let Some(c) = s.iter().find(|c| c.deg() > d) {
        return Err(Error::OutOfBounds(*c, d));
    }
    let e: Vec<u32> = e.iter().copied().collect();
    let s: Vec<Coord> = s.iter().copied().collect();
    let entries = pairing_entries(&e, &s, d);
    Ok(PairingMatrix { e, s, d, entries })
}

/// A composition of `d + 1` with its column blocks and row ranges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lambda {
    pub parts: Vec<u32>,
    pub blocks: Vec<(Vec<Coord>, Vec<u32>)>,
}

/// Greedy composition: each part is the least width whose column range
/// holds either no points of `s` or exactly as many points as its width.
pub fn construct_lambda(s: &BTreeSet<Coord>, d: u32) -> Option<Lambda> {
    if s.is_empty() {
        return Some(Lambda { parts: vec![d + 1], blocks: vec![(Vec::new(), Vec::new())] });
    }
    let mut by_col = vec![0u32; d as usize + 2];
    for c in s {
        by_col[c.i as usize] += 1;
    }
    let mut parts = Vec::new();
    let mut blocks = Vec::new();
    let mut start = 0u32;
    while start <= d {
        let mut width = 1;
        let mut count = by_col[start as usize];
        loop {
            if count == 0 || count == width {
                break;
            }
            if start + width > d {
                return None;
            }
            count += by_col[(start + width) as usize];
            width += 1;
        }
        let pts: Vec<Coord> = s.iter().filter(|c| c.i >= start && c.i < start + width).copied().collect();
        let rows: Vec<u32> = if pts.is_empty() { Vec::new() } else { (start..start + width).collect() };
        parts.push(width);
        blocks.push((pts, rows));
        start += width;
    }
    Some(Lambda { parts, blocks })
}

/// The feasibility condition for the greedy composition, stated on counts.
pub fn lambda_feasible(s: &BTreeSet<Coord>, d: u32) -> bool {
    (0..=d).all(|k| s.iter().filter(|c| c.i + k >= d).count() as u32 <= k + 1)
}

/// Decides a block whose rows start at its leftmost column, recognizing the
/// closed-form cases first.
fn decide_block(points: &[Coord], rows: &[u32], d: u32) -> Option<BlockCertificate> {
    let x = rows[0].min(points.iter().map(|c| c.i).min().unwrap());
    let consecutive = rows.windows(2).all(|w| w[1] == w[0] + 1) && rows[0] == x;
    let cols: Vec<u32> = points.iter().map(|c| c.i - x).collect();
    let method = if !consecutive {
        BlockMethod::Direct
    } else {
        match (points.len(), cols.as_slice()) {
            (1, [0]) => BlockMethod::SinglePoint,
            (2, [0, 0]) => BlockMethod::TwoInColumn,
            (3, [0, 0, 0]) => BlockMethod::ThreeInColumn,
            (3, _) if cols.iter().filter(|&&c| c == 0).count() == 2 && cols.contains(&1) => {
                let mut col0: Vec<u32> = points.iter().filter(|c| c.i == x).map(|c| c.j).collect();
                col0.sort_unstable();
                let k = points.iter().find(|c| c.i == x + 1).unwrap().j;
                if col0[0] + col0[1] != 2 * k + 1 {
                    BlockMethod::TwoAndOne
                } else {
                    BlockMethod::Direct
                }
            }
            _ => BlockMethod::Direct,
        }
    };
    let det = bareiss_determinant(pairing_entries(rows, points, d));
    debug_assert!(method == BlockMethod::Direct || !det.is_zero(), "closed form disagrees at {points:?}");
    if det.is_zero() {
        return None;
    }
    Some(BlockCertificate { points: points.to_vec(), rows: rows.to_vec(), method, determinant: det })
}

fn certificate_from_blocks(
    sigma: Perm,
    strategy: &'static str,
    d: u32,
    blocks: Vec<BlockCertificate>,
) -> InvertibilityCertificate {
    let support = blocks.iter().flat_map(|b| b.points.iter().copied()).collect();
    let rows = blocks.iter().flat_map(|b| b.rows.iter().copied()).collect();
    InvertibilityCertificate { sigma, strategy, d, support, rows, blocks }
}

fn greedy_strategy(s: &BTreeSet<Coord>, d: u32, sigma: Perm) -> Option<InvertibilityCertificate> {
    let lambda = construct_lambda(s, d)?;
    let mut blocks = Vec::new();
    for (pts, rows) in lambda.blocks.iter().filter(|(p, _)| !p.is_empty()) {
        blocks.push(decide_block(pts, rows, d)?);
    }
    Some(certificate_from_blocks(sigma, "greedy", d, blocks))
}

/// Groups consecutive occupied columns into blocks; each block takes its rows
/// from the window between its first column and the next block's first
/// column, trying every row subset of the right size.
fn grouping_strategy(s: &BTreeSet<Coord>, d: u32, sigma: Perm) -> Option<InvertibilityCertificate> {
    let mut cols: Vec<u32> = s.iter().map(|c| c.i).collect();
    cols.sort_unstable();
    cols.dedup();
    let n = cols.len();
    if n > 12 {
        return None;
    }
    for cuts in 0u32..(1 << (n - 1)) {
        let mut groups: Vec<(u32, u32)> = Vec::new();
        let mut lo = 0;
        for k in 0..n {
            if k == n - 1 || cuts & (1 << k) != 0 {
                groups.push((cols[lo], cols[k]));
                lo = k + 1;
            }
        }
        let mut blocks = Vec::new();
        let mut ok = true;
        for (g, &(first, last)) in groups.iter().enumerate() {
            let pts: Vec<Coord> = s.iter().filter(|c| c.i >= first && c.i <= last).copied().collect();
            let limit = groups.get(g + 1).map_or(d + 1, |next| next.0);
            match best_rows(&pts, first, limit, d) {
                Some(b) => blocks.push(b),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Some(certificate_from_blocks(sigma, "grouping", d, blocks));
        }
    }
    None
}

fn best_rows(pts: &[Coord], first: u32, limit: u32, d: u32) -> Option<BlockCertificate> {
    let m = pts.len();
    let window: Vec<u32> = (first..limit).collect();
    if window.len() < m {
        return None;
    }
    let mut chosen: Vec<usize> = (0..m).collect();
    let mut tried = 0;
    loop {
        let rows: Vec<u32> = chosen.iter().map(|&k| window[k]).collect();
        if let Some(b) = decide_block(pts, &rows, d) {
            return Some(b);
        }
        tried += 1;
        if tried > 400 || !next_combination(&mut chosen, window.len()) {
            return None;
        }
    }
}

/// Advances a sorted index combination; false when exhausted.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let m = c.len();
    for k in (0..m).rev() {
        if c[k] < n - m + k {
            c[k] += 1;
            for l in k + 1..m {
                c[l] = c[l - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The symmetries tried, in order.
pub const STRATEGY_ORDER: [Perm; 6] = [Perm::Id, Perm::T12, Perm::T13, Perm::T23, Perm::C123, Perm::C132];

/// Tries to certify that no nonzero outcome is supported inside `s`.
pub fn invertibility_excludes(s: &BTreeSet<Coord>, d: u32) -> ExclusionVerdict {
    if s.is_empty() || s.iter().any(|c| c.deg() > d) {
        return ExclusionVerdict::Inconclusive;
    }
    for sigma in STRATEGY_ORDER {
        let image: BTreeSet<Coord> = s.iter().map(|c| sigma.act_point(*c, d)).collect();
        if let Some(cert) = greedy_strategy(&image, d, sigma) {
            return ExclusionVerdict::Excluded(Certificate::Invertibility(cert));
        }
    }
    for sigma in STRATEGY_ORDER {
        let image: BTreeSet<Coord> = s.iter().map(|c| sigma.act_point(*c, d)).collect();
        if let Some(cert) = grouping_strategy(&image, d, sigma) {
            return ExclusionVerdict::Excluded(Certificate::Invertibility(cert));
        }
    }
    ExclusionVerdict::Inconclusive
}

/// Only the greedy composition on `s` and its transpose.
pub fn invertibility_excludes_basic(s: &BTreeSet<Coord>, d: u32) -> ExclusionVerdict {
    for sigma in [Perm::Id, Perm::T12] {
        let image: BTreeSet<Coord> = s.iter().map(|c| sigma.act_point(*c, d)).collect();
        if let Some(cert) = greedy_strategy(&image, d, sigma) {
            return ExclusionVerdict::Excluded(Certificate::Invertibility(cert));
        }
    }
    ExclusionVerdict::Inconclusive
}

fn check_hexagon_params(d: u32, dp: u32, l1: u32, l2: u32) -> Result<()> {
    if dp < 1 || l1 < dp || l2 < dp || dp + l1 + l2 > d {
        return Err(Error::Parameters(format!(
            "need l1, l2 >= d' >= 1 and d' + l1 + l2 <= d; got d={d}, d'={dp}, l1={l1}, l2={l2}"
        )));
    }
    Ok(())
}

/// Whether a point lies in the low triangle or one of the two far strips.
pub fn in_hexagon_region(c: Coord, d: u32, dp: u32, l1: u32, l2: u32) -> bool {
    c.deg() <= dp || c.j + l1 > d || c.i + l2 > d
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HexagonReport {
    pub applies: bool,
    pub restricted: ChipConfiguration,
    pub bound: u32,
    pub is_outcome: bool,
    pub restricted_is_outcome: bool,
    pub is_valid: bool,
    pub degree_bound_holds: bool,
}

pub fn hexagon_check(w: &ChipConfiguration, d: u32, dp: u32, l1: u32, l2: u32) -> Result<HexagonReport> {
    check_hexagon_params(d, dp, l1, l2)?;
    let applies = w.support().iter().all(|c| in_hexagon_region(*c, d, dp, l1, l2));
    let restricted = w.restrict(dp);
    let is_outcome = is_outcome(w, d)?;
    let restricted_is_outcome = is_outcome_or_zero(&restricted, dp)?;
    let is_valid = w.is_valid();
    let degree_bound_holds = w.degree() <= dp as i64;
    Ok(HexagonReport { applies, restricted, bound: dp, is_outcome, restricted_is_outcome, is_valid, degree_bound_holds })
}

fn is_outcome_or_zero(w: &ChipConfiguration, d: u32) -> Result<bool> {
    if w.is_zero() {
        return Ok(true);
    }
    is_outcome(w, d)
}

/// Superfactorial conventions for the closed-form hexagon determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Superfactorial {
    /// `1! 2! ... n!`
    FromOne,
    /// `0! 1! ... (n-1)!`
    Shifted,
}

pub fn superfactorial(n: u32, conv: Superfactorial) -> BigInt {
    let top = match conv {
        Superfactorial::FromOne => n,
        Superfactorial::Shifted => n.saturating_sub(1),
    };
    let mut fact = BigInt::one();
    let mut acc = BigInt::one();
    for m in 1..=top {
        fact *= m;
        acc *= &fact;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HexagonDeterminant {
    pub d: u32,
    pub d_prime: u32,
    pub l1: u32,
    #[serde(serialize_with = "crate::util::as_string")]
    pub direct: BigInt,
    #[serde(serialize_with = "crate::util::as_string")]
    pub formula_from_one: BigRational,
    #[serde(serialize_with = "crate::util::as_string")]
    pub formula_shifted: BigRational,
    pub matching: Vec<Superfactorial>,
}

/// Determinant of `(binom(d - d', l1 + k - a))_{k,a = 0..d'}` together with the
/// product formula under both superfactorial conventions.
pub fn hexagon_determinant(d: u32, dp: u32, l1: u32) -> Result<HexagonDeterminant> {
    if l1 < dp || dp + l1 > d || d - dp - l1 < dp {
        return Err(Error::Parameters(format!("need l1 >= d' and d - d' - l1 >= d'; got d={d}, d'={dp}, l1={l1}")));
    }
    let n = dp as usize + 1;
    let m: Vec<Vec<BigInt>> = (0..n)
        .map(|k| (0..n).map(|a| binomial((d - dp) as i64, l1 as i64 + k as i64 - a as i64)).collect())
        .collect();
    let direct = bareiss_determinant(m);
    let formula = |conv| {
        let h = |x: u32| superfactorial(x, conv);
        let num = h(l1) * h(d - dp - l1) * h(dp + 1) * h(d + 1);
        let den = h(d - dp) * h(dp + l1 + 1) * h(d - l1 + 1);
        BigRational::new(num, den)
    };
    let formula_from_one = formula(Superfactorial::FromOne);
    let formula_shifted = formula(Superfactorial::Shifted);
    let target = BigRational::from(direct.clone());
    let mut matching = Vec::new();
    if formula_from_one == target {
        matching.push(Superfactorial::FromOne);
    }
    if formula_shifted == target {
        matching.push(Superfactorial::Shifted);
    }
    Ok(HexagonDeterminant { d, d_prime: dp, l1, direct, formula_from_one, formula_shifted, matching })
}
