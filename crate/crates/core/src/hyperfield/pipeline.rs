//! The support-5 case analysis at large degree.
//!
//! Every case is a merged contraction point with five positive coordinates.
//! Each positive coordinate stands for exactly one support point, whose
//! position is known up to a free coordinate along its strip. The stages
//! are: symbolic invertibility, reduction by the S3 action, the hexagon
//! restriction, and two dedicated arguments for the leftover shapes.
//!
//! Only supports matter to the invertibility argument, so the S3 action is
//! used on unsigned supports: a case falls when some image of its support
//! is ruled out.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::criteria::pairing_matrix;
use crate::error::{Error, Result};
use crate::grid::{ChipConfiguration, Coord, Perm};
use crate::hyperfield::contraction::{lambda_set, s3_on_contraction, ContractionPoint, XiCoord};
use crate::hyperfield::symbolic::{Lin, Region, Relation};
use crate::pascal::is_outcome;

/// Smallest degree handled symbolically; below it the finite sweep applies.
pub const MIN_DEGREE: i64 = 42;
const MIN_HALF: i64 = MIN_DEGREE / 2;
const WINDOW: i64 = 6;
const MAX_DEPTH: usize = 16;

const VAR_B: usize = 1;
const VAR_D: usize = 2;
const VAR_C: usize = 3;

/// A support point with coordinates linear in `h` and the strip variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SymPoint {
    pub source: Option<XiCoord>,
    #[serde(serialize_with = "crate::util::as_string")]
    pub col: Lin,
    #[serde(serialize_with = "crate::util::as_string")]
    pub row: Lin,
}

impl SymPoint {
    fn fixed(source: Option<XiCoord>, col: Lin, row: Lin) -> SymPoint {
        SymPoint { source, col, row }
    }

    fn substitute(&self, k: usize, e: &Lin) -> SymPoint {
        SymPoint { source: self.source, col: self.col.substitute(k, e), row: self.row.substitute(k, e) }
    }

    fn oriented(&self, sigma: Perm, d: &Lin) -> (Lin, Lin) {
        let (a, b) = (self.col, self.row);
        let rest = d.sub(&a).sub(&b);
        match sigma {
            Perm::Id => (a, b),
            Perm::T12 => (b, a),
            Perm::C123 => (rest, a),
            Perm::T13 => (rest, b),
            Perm::T23 => (a, rest),
            Perm::C132 => (b, rest),
        }
    }

    pub fn concrete(&self, x: &[i64; 4]) -> Option<Coord> {
        let (i, j) = (self.col.eval(x), self.row.eval(x));
        (i >= 0 && j >= 0).then(|| Coord::new(i as u32, j as u32))
    }
}

/// A choice of position class for every positive coordinate of a case.
#[derive(Clone, Debug)]
pub struct RelsetOption {
    pub label: String,
    pub points: Vec<SymPoint>,
    /// Range constraints on the strip variables, `(f, lo, hi)` meaning `lo <= f <= hi`.
    pub ranges: Vec<(Lin, Lin, Lin)>,
}

impl RelsetOption {
    pub fn region(&self, parity: i64) -> Region {
        let mut r = Region::new(parity, MIN_HALF);
        for (f, lo, hi) in &self.ranges {
            r.require_between(*f, *lo, *hi);
        }
        r
    }
}

type PointChoice = (String, SymPoint, Option<(Lin, Lin, Lin)>);

/// Position classes of the point behind one merged coordinate, in a
/// degree-parity-independent form (the degree enters as `d`).
fn point_choices(c: XiCoord, d: Lin) -> Result<Vec<PointChoice>> {
    let k = |x: i64| Lin::constant(x);
    let name = c.name();
    let fixed = |col: Lin, row: Lin| vec![(name.clone(), SymPoint::fixed(Some(c), col, row), None)];
    Ok(match c {
        XiCoord::X(i, j) => fixed(k(i as i64), k(j as i64)),
        XiCoord::Y(i, j) => fixed(k(i as i64), d.plus(-3 - i as i64 + j as i64)),
        XiCoord::Z(i, j) => fixed(d.plus(-3 - j as i64 + i as i64), k(j as i64)),
        XiCoord::C(i) => {
            let i = i as i64;
            let mut v = vec![(
                format!("{name}:M"),
                SymPoint::fixed(Some(c), k(i), Lin::var(VAR_C)),
                Some((Lin::var(VAR_C), k(4), d.plus(-7))),
            )];
            for t in 4 + i..=6 {
                v.push((format!("{name}:d-{t}"), SymPoint::fixed(Some(c), k(i), d.plus(-t)), None));
            }
            v
        }
        XiCoord::B(j) => {
            let j = j as i64;
            let mut v = vec![(
                format!("{name}:M"),
                SymPoint::fixed(Some(c), Lin::var(VAR_B), k(j)),
                Some((Lin::var(VAR_B), k(4), d.plus(-7))),
            )];
            for t in 4 + j..=6 {
                v.push((format!("{name}:d-{t}"), SymPoint::fixed(Some(c), d.plus(-t), k(j)), None));
            }
            v
        }
        XiCoord::D(kk) => {
            let kk = kk as i64;
            let mut v = Vec::new();
            for t in 4..=6 - kk {
                v.push((format!("{name}:left{t}"), SymPoint::fixed(Some(c), k(t), d.plus(-kk - t)), None));
            }
            let m = Lin::var(VAR_D);
            v.push((
                format!("{name}:M"),
                SymPoint::fixed(Some(c), m, d.plus(-kk).sub(&m)),
                Some((m, k(4.max(7 - kk)), d.plus(-7))),
            ));
            for t in 4 + kk..=6 {
                v.push((format!("{name}:right{t}"), SymPoint::fixed(Some(c), d.plus(-t), k(t - kk)), None));
            }
            v
        }
        other => return Err(Error::Parameters(format!("coordinate {other} is not merged"))),
    })
}

/// All position-class combinations for a merged case with `x00 = -1`.
/// The degree is written as `2h + p`; `p` is fixed later by the region.
pub fn relset_options(theta: &ContractionPoint, parity: i64) -> Result<Vec<RelsetOption>> {
    if !theta.is_merged() || !theta.is_valid() {
        return Err(Error::Parameters("cases are valid merged points".into()));
    }
    let d = Lin::degree(parity);
    let pos = theta.supp_plus();
    for fam in [|c: &XiCoord| matches!(c, XiCoord::C(_)), |c: &XiCoord| matches!(c, XiCoord::B(_)), |c: &XiCoord| matches!(c, XiCoord::D(_))] {
        if pos.iter().filter(|c| fam(c)).count() > 1 {
            return Err(Error::Parameters(format!("{theta:?} meets a strip family twice")));
        }
    }
    let mut combos: Vec<RelsetOption> = vec![RelsetOption {
        label: String::new(),
        points: vec![SymPoint::fixed(None, Lin::constant(0), Lin::constant(0))],
        ranges: Vec::new(),
    }];
    for c in pos {
        let choices = point_choices(c, d)?;
        let mut next = Vec::with_capacity(combos.len() * choices.len());
        for base in &combos {
            for (label, p, range) in &choices {
                let mut o = base.clone();
                if !o.label.is_empty() {
                    o.label.push(' ');
                }
                o.label.push_str(label);
                o.points.push(*p);
                o.ranges.extend(range.iter().copied());
                next.push(o);
            }
        }
        combos = next;
    }
    Ok(combos)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProofStats {
    pub regions: usize,
    pub vacuous: usize,
    pub splits: usize,
    pub methods: BTreeMap<String, usize>,
}

impl ProofStats {
    fn absorb(&mut self, o: &ProofStats) {
        self.regions += o.regions;
        self.vacuous += o.vacuous;
        self.splits += o.splits;
        for (k, v) in &o.methods {
            *self.methods.entry(k.clone()).or_default() += v;
        }
    }
}

/// A region where no decomposition was found.
#[derive(Clone, Debug)]
pub struct Failure {
    pub label: String,
    pub points: Vec<SymPoint>,
    pub region: Region,
}

enum Attempt {
    Success(Vec<&'static str>),
    Split(Lin, bool),
    Fail,
}

/// Symbolic pairing-matrix invertibility: block lower-triangular
/// decompositions whose diagonal blocks are a single column of points or
/// two points in one column beside one point in the next.
#[derive(Clone, Debug)]
pub struct SymbolicProver {
    pub orientations: Vec<Perm>,
}

impl Default for SymbolicProver {
    fn default() -> Self {
        SymbolicProver { orientations: vec![Perm::Id] }
    }
}

impl SymbolicProver {
    pub fn prove(&self, label: &str, points: &[SymPoint], region: Region) -> (ProofStats, Vec<Failure>) {
        let mut stats = ProofStats::default();
        let mut failures = Vec::new();
        self.prove_rec(label, points.to_vec(), region, 0, &mut stats, &mut failures);
        (stats, failures)
    }

    fn prove_rec(
        &self,
        label: &str,
        points: Vec<SymPoint>,
        region: Region,
        depth: usize,
        stats: &mut ProofStats,
        failures: &mut Vec<Failure>,
    ) {
        if !region.is_feasible() {
            stats.vacuous += 1;
            return;
        }
        let d = region.degree();
        let mut split: Option<(Lin, bool)> = None;
        for &sigma in &self.orientations {
            let oriented: Vec<(Lin, Lin)> = points.iter().map(|p| p.oriented(sigma, &d)).collect();
            match attempt(&oriented, &region) {
                Attempt::Success(methods) => {
                    stats.regions += 1;
                    for m in methods {
                        *stats.methods.entry(m.to_string()).or_default() += 1;
                    }
                    return;
                }
                Attempt::Split(f, guard) => {
                    split.get_or_insert((f, guard));
                }
                Attempt::Fail => {}
            }
        }
        let Some((f, guard)) = split.filter(|_| depth < MAX_DEPTH) else {
            failures.push(Failure { label: label.to_string(), points, region });
            return;
        };
        stats.splits += 1;
        let (lo, hi) = if guard { (1, -1) } else { (WINDOW + 1, -WINDOW - 1) };
        self.prove_rec(label, points.clone(), region.with(f.plus(-lo)), depth + 1, stats, failures);
        self.prove_rec(label, points.clone(), region.with(f.scale(-1).plus(hi)), depth + 1, stats, failures);
        let pinned: Vec<i64> = if guard { vec![0] } else { (-WINDOW..=WINDOW).collect() };
        for t in pinned {
            match region.with_zero(f.plus(-t)) {
                None => stats.vacuous += 1,
                Some((r, None)) => self.prove_rec(label, points.clone(), r, depth + 1, stats, failures),
                Some((r, Some((k, e)))) => {
                    let pts = points.iter().map(|p| p.substitute(k, &e)).collect();
                    self.prove_rec(label, pts, r, depth + 1, stats, failures);
                }
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Gap {
    Exactly(i64),
    Far,
}

fn attempt(points: &[(Lin, Lin)], region: &Region) -> Attempt {
    // column classes
    let mut classes: Vec<Lin> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    'outer: for (idx, (col, _)) in points.iter().enumerate() {
        for (k, c) in classes.iter().enumerate() {
            if c == col || region.relation(&col.sub(c), 0) == Relation::Exactly(0) {
                members[k].push(idx);
                continue 'outer;
            }
        }
        classes.push(*col);
        members.push(vec![idx]);
    }
    let n = classes.len();
    // pairwise offsets `classes[b] - classes[a]`
    let mut rel = vec![vec![Relation::Exactly(0); n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let f = classes[b].sub(&classes[a]);
            let r = region.relation(&f, WINDOW);
            match r {
                Relation::Unknown => return Attempt::Split(f, false),
                Relation::Exactly(0) => return Attempt::Fail,
                _ => {}
            }
            rel[a][b] = r;
            rel[b][a] = match r {
                Relation::Exactly(x) => Relation::Exactly(-x),
                Relation::AtLeast(x) => Relation::AtMost(-x),
                Relation::AtMost(x) => Relation::AtLeast(-x),
                Relation::Unknown => Relation::Unknown,
            };
        }
    }
    let greater = |a: usize, b: usize| matches!(rel[b][a], Relation::AtLeast(_)) || matches!(rel[b][a], Relation::Exactly(x) if x > 0);
    let mut order: Vec<usize> = vec![usize::MAX; n];
    for a in 0..n {
        let rank = (0..n).filter(|&b| greater(a, b)).count();
        if order[rank] != usize::MAX {
            return Attempt::Fail;
        }
        order[rank] = a;
    }
    let gaps: Vec<Gap> = (0..n.saturating_sub(1))
        .map(|k| match rel[order[k]][order[k + 1]] {
            Relation::Exactly(x) => Gap::Exactly(x),
            _ => Gap::Far,
        })
        .collect();
    let mut pending_guard: Option<Lin> = None;
    for cuts in 0u32..(1 << n.saturating_sub(1)) {
        let mut groups: Vec<(usize, usize)> = Vec::new();
        let mut lo = 0;
        for k in 0..n {
            if k == n - 1 || cuts & (1 << k) != 0 {
                groups.push((lo, k));
                lo = k + 1;
            }
        }
        let mut methods = Vec::new();
        let mut ok = true;
        for (g, &(first, last)) in groups.iter().enumerate() {
            let size: usize = (first..=last).map(|k| members[order[k]].len()).sum();
            if let Some(&(next, _)) = groups.get(g + 1) {
                let mut dist = 0;
                let mut far = false;
                for gap in &gaps[first..next] {
                    match gap {
                        Gap::Exactly(x) => dist += x,
                        Gap::Far => far = true,
                    }
                }
                if !far && dist < size as i64 {
                    ok = false;
                    break;
                }
            }
            if first == last {
                methods.push(match size {
                    1 => "single point",
                    2 => "two in a column",
                    3 => "three in a column",
                    _ => "column",
                });
                continue;
            }
            let shape = last == first + 1
                && gaps[first] == Gap::Exactly(1)
                && members[order[first]].len() == 2
                && members[order[last]].len() == 1;
            if !shape {
                ok = false;
                break;
            }
            let pair = &members[order[first]];
            let single = members[order[last]][0];
            let guard = points[pair[0]].1.add(&points[pair[1]].1).sub(&points[single].1.scale(2)).plus(-1);
            if region.implies_nonzero(&guard) {
                methods.push("two and one");
            } else {
                if !region.implies_zero(&guard) {
                    pending_guard.get_or_insert(guard);
                }
                ok = false;
                break;
            }
        }
        if ok {
            return Attempt::Success(methods);
        }
    }
    match pending_guard {
        Some(g) => Attempt::Split(g, true),
        None => Attempt::Fail,
    }
}

/// Result of the invertibility stage for one case.
#[derive(Clone, Debug)]
pub struct InvertibilityOutcome {
    pub options: usize,
    pub stats: ProofStats,
    pub failures: Vec<Failure>,
}

impl InvertibilityOutcome {
    pub fn excluded(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn relset_invertibility(theta: &ContractionPoint, prover: &SymbolicProver) -> Result<InvertibilityOutcome> {
    let mut stats = ProofStats::default();
    let mut failures = Vec::new();
    let mut options = 0;
    for parity in [0, 1] {
        for opt in relset_options(theta, parity)? {
            options += 1;
            let (s, f) = prover.prove(&opt.label, &opt.points, opt.region(parity));
            stats.absorb(&s);
            failures.extend(f);
        }
    }
    Ok(InvertibilityOutcome { options, stats, failures })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HexagonAssumption {
    /// no strip coordinate is positive
    NoStrip,
    /// exactly one of the two innermost strips of each family, nothing deeper
    OneInnerStrip,
}

/// A hexagon parameter choice written in terms of `q = floor(d/3)`:
/// each parameter is `a + b·q + c·d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HexagonChoice {
    pub name: &'static str,
    pub d_prime: (i64, i64, i64),
    pub l1: (i64, i64, i64),
    pub l2: (i64, i64, i64),
}

const NO_STRIP_CHOICE: HexagonChoice = HexagonChoice { name: "fixed", d_prime: (6, 0, 0), l1: (7, 0, 0), l2: (7, 0, 0) };

const ONE_STRIP_CHOICES: [HexagonChoice; 3] = [
    HexagonChoice { name: "low triangle", d_prime: (0, 1, 0), l1: (0, 1, 0), l2: (0, 1, 0) },
    HexagonChoice { name: "right strip", d_prime: (6, 0, 0), l1: (7, 0, 0), l2: (1, -1, 1) },
    HexagonChoice { name: "top strip", d_prime: (6, 0, 0), l1: (1, -1, 1), l2: (7, 0, 0) },
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HexagonArgument {
    pub assumption: HexagonAssumption,
    pub choices: Vec<HexagonChoice>,
}

// Variables for the hexagon check: x0 = q, x1 = strip position; d = 3q + r.
fn q_param(p: (i64, i64, i64), r: i64) -> Lin {
    Lin { c: p.0 + p.2 * r, a: [p.1 + 3 * p.2, 0, 0, 0] }
}

fn hexagon_region_for(r: i64) -> Region {
    // d >= 42 and d = 3q + r give q >= 14
    Region { parity: r, cons: vec![Lin::var(0).plus(-14)], subs: Vec::new() }
}

/// Whether every point of the given shape lies in one fixed disjunct of the
/// hexagon region under `choice`.
fn point_in_hexagon(reg: &Region, col: &Lin, row: &Lin, d: &Lin, choice: &HexagonChoice, r: i64) -> bool {
    let dp = q_param(choice.d_prime, r);
    let l1 = q_param(choice.l1, r);
    let l2 = q_param(choice.l2, r);
    reg.implies_le(&col.add(row).sub(&dp), 0)
        || reg.implies_ge(&row.add(&l1).sub(d), 1)
        || reg.implies_ge(&col.add(&l2).sub(d), 1)
}

fn hexagon_params_ok(reg: &Region, choice: &HexagonChoice, d: &Lin, r: i64) -> bool {
    let dp = q_param(choice.d_prime, r);
    let l1 = q_param(choice.l1, r);
    let l2 = q_param(choice.l2, r);
    reg.implies_ge(&dp, 1)
        && reg.implies_ge(&l1.sub(&dp), 0)
        && reg.implies_ge(&l2.sub(&dp), 0)
        && reg.implies_ge(&d.sub(&dp).sub(&l1).sub(&l2), 0)
        && reg.implies_ge(&d.sub(&dp), 1)
}

/// The strip point of a merged strip coordinate as a function of its
/// position `x1`, with the range of `x1`.
fn strip_shape(c: XiCoord, d: &Lin) -> Option<(Lin, Lin, Lin, Lin)> {
    let v = Lin::var(1);
    let k = |x: i64| Lin::constant(x);
    match c {
        XiCoord::C(i) => Some((k(i as i64), v, k(4), d.plus(-4 - i as i64))),
        XiCoord::B(j) => Some((v, k(j as i64), k(4), d.plus(-4 - j as i64))),
        XiCoord::D(kk) => Some((v, d.plus(-(kk as i64)).sub(&v), k(4), d.plus(-4 - kk as i64))),
        _ => None,
    }
}

fn corner_shape(c: XiCoord, d: &Lin) -> (Lin, Lin) {
    let k = |x: u8| Lin::constant(x as i64);
    match c {
        XiCoord::X(i, j) => (k(i), k(j)),
        XiCoord::Y(i, j) => (k(i), d.plus(-3 - i as i64 + j as i64)),
        XiCoord::Z(i, j) => (d.plus(-3 - j as i64 + i as i64), k(j)),
        _ => unreachable!("strip coordinates are handled separately"),
    }
}

/// The hexagon argument for a case, when one applies.
pub fn hexagon_stage(theta: &ContractionPoint) -> Option<HexagonArgument> {
    let pos = theta.supp_plus();
    let strips: Vec<XiCoord> = pos.iter().copied().filter(|c| c.is_strip()).collect();
    let corners: Vec<XiCoord> = pos.iter().copied().filter(|c| !c.is_strip()).collect();
    let inner = |c: &XiCoord| matches!(c, XiCoord::C(0 | 1) | XiCoord::B(0 | 1) | XiCoord::D(0 | 1));
    let (assumption, choices): (HexagonAssumption, &[HexagonChoice]) = match strips.as_slice() {
        [] => (HexagonAssumption::NoStrip, std::slice::from_ref(&NO_STRIP_CHOICE)),
        [s] if inner(s) => (HexagonAssumption::OneInnerStrip, &ONE_STRIP_CHOICES),
        _ => return None,
    };
    for r in 0..3 {
        let reg = hexagon_region_for(r);
        let d = Lin { c: r, a: [3, 0, 0, 0] };
        for choice in choices {
            if !hexagon_params_ok(&reg, choice, &d, r) {
                return None;
            }
            // the origin and the corner points lie in the region for every choice
            for c in &corners {
                let (col, row) = corner_shape(*c, &d);
                if !point_in_hexagon(&reg, &col, &row, &d, choice, r) {
                    return None;
                }
            }
        }
        // the strip point lies in the region of at least one choice:
        // the complement of the union is empty
        if let Some(s) = strips.first() {
            let (col, row, lo, hi) = strip_shape(*s, &d)?;
            let mut reg = reg.clone();
            reg.require_between(Lin::var(1), lo, hi);
            let mut outside = reg.clone();
            for choice in choices {
                let dp = q_param(choice.d_prime, r);
                let l1 = q_param(choice.l1, r);
                let l2 = q_param(choice.l2, r);
                // not (deg <= d'), not (row > d - l1), not (col > d - l2)
                outside.require_ge(col.add(&row).sub(&dp).plus(-1));
                outside.require_ge(d.sub(&l1).sub(&row));
                outside.require_ge(d.sub(&l2).sub(&col));
            }
            if outside.is_feasible() {
                return None;
            }
        }
    }
    Some(HexagonArgument { assumption, choices: choices.to_vec() })
}

/// The case whose positive support meets three strips: `y03, z30, c1, b1, d1`.
pub fn three_strip_case() -> ContractionPoint {
    let mut p = ContractionPoint::zero(true);
    p.set(XiCoord::X(0, 0), crate::hyperfield::Sign::Neg);
    for c in [XiCoord::Y(0, 3), XiCoord::Z(3, 0), XiCoord::C(1), XiCoord::B(1), XiCoord::D(1)] {
        p.set(c, crate::hyperfield::Sign::Pos);
    }
    p
}

/// Coordinates where a merged point is nonzero; the S3 action permutes these.
pub fn nonzero_coords(theta: &ContractionPoint) -> BTreeSet<XiCoord> {
    theta.coords().filter(|c| theta.get(*c) != crate::hyperfield::Sign::Zero).collect()
}

/// Largest half-degree at which the closing determinant is evaluated.
pub const CLOSING_DETERMINANT_MAX_HALF: u32 = 300;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SpecialArgument {
    /// The exceptional merged point: subtracting a multiple of the small
    /// outcome on `{(0,0),(0,3),(1,1),(3,0)}` leaves a nonzero outcome on a
    /// support with pairwise distinct columns.
    Subtraction { proof: ProofStats },
    /// The symmetric three-strip case: invertibility leaves only the
    /// balanced support at odd degree, settled by one determinant.
    ThreeStrip { proof: ProofStats, residual_regions: usize, determinants_checked: u32 },
}

/// The small outcome used by the subtraction argument.
pub fn subtraction_outcome() -> ChipConfiguration {
    ChipConfiguration::from_triples([(0, 0, -1), (0, 3, 1), (1, 1, 3), (3, 0, 1)])
}

pub fn exceptional_argument() -> Result<Option<SpecialArgument>> {
    let u = subtraction_outcome();
    if !is_outcome(&u, 3)? {
        return Ok(None);
    }
    let prover = SymbolicProver::default();
    let mut stats = ProofStats::default();
    for parity in [0, 1] {
        let d = Lin::degree(parity);
        // (2s, d - 2s) and (2t + 1, d - 2t - 1) with both columns in [4, d - 4]
        let s = Lin::var(VAR_B);
        let t = Lin::var(VAR_D);
        let even = SymPoint::fixed(Some(XiCoord::D0(0)), s.scale(2), d.sub(&s.scale(2)));
        let odd = SymPoint::fixed(Some(XiCoord::D1(0)), t.scale(2).plus(1), d.sub(&t.scale(2)).plus(-1));
        let k = |x: i64| Lin::constant(x);
        let pts = vec![
            SymPoint::fixed(Some(XiCoord::X(0, 3)), k(0), k(3)),
            SymPoint::fixed(Some(XiCoord::X(1, 1)), k(1), k(1)),
            SymPoint::fixed(Some(XiCoord::X(3, 0)), k(3), k(0)),
            even,
            odd,
        ];
        let mut region = Region::new(parity, MIN_HALF);
        region.require_between(even.col, k(4), d.plus(-4));
        region.require_between(odd.col, k(4), d.plus(-4));
        let (st, failures) = prover.prove("exceptional", &pts, region);
        if !failures.is_empty() {
            return Ok(None);
        }
        stats.absorb(&st);
    }
    Ok(Some(SpecialArgument::Subtraction { proof: stats }))
}

/// The balanced support `{(0,0),(d,0),(0,d),(e,1),(1,e),(e,e)}` with `d = 2e + 1`.
pub fn balanced_support(e: u32) -> BTreeSet<Coord> {
    let d = 2 * e + 1;
    [(0, 0), (d, 0), (0, d), (e, 1), (1, e), (e, e)].iter().map(|&(i, j)| Coord::new(i, j)).collect()
}

/// `|det|` of the pairing matrix of `{0, 1, 3, e, d-1, d}` against the balanced support.
pub fn closing_determinant(e: u32) -> Result<BigInt> {
    let d = 2 * e + 1;
    let rows: BTreeSet<u32> = [0, 1, 3, e, d - 1, d].into();
    Ok(pairing_matrix(&rows, &balanced_support(e), d)?.determinant().abs())
}

pub fn three_strip_argument(theta: &ContractionPoint) -> Result<Option<SpecialArgument>> {
    if *theta != three_strip_case() {
        return Ok(None);
    }
    let base = nonzero_coords(theta);
    for sigma in Perm::ALL {
        if nonzero_coords(&s3_on_contraction(sigma, theta)?) != base {
            return Ok(None);
        }
    }
    // Every undecided region must put the column-1 point at (1, (d-1)/2);
    // by the S3 symmetry of the case the same holds for the row-1 point and
    // the diagonal point, which leaves only the balanced support.
    let out = relset_invertibility(theta, &SymbolicProver::default())?;
    for f in &out.failures {
        let Some(p) = f.points.iter().find(|p| p.source == Some(XiCoord::C(1))) else { return Ok(None) };
        let d = f.region.degree();
        let balanced = p.row.scale(2).sub(&d).plus(1);
        if f.region.parity != 1 || !f.region.implies_zero(&balanced) {
            return Ok(None);
        }
    }
    let mut checked = 0;
    for e in MIN_HALF as u32..=CLOSING_DETERMINANT_MAX_HALF {
        let det = closing_determinant(e)?;
        let expect = BigInt::from((2 * e as u64 + 1) * (e as u64 + 1) * e as u64 / 6);
        if det.is_zero() || det != expect {
            return Ok(None);
        }
        checked += 1;
    }
    Ok(Some(SpecialArgument::ThreeStrip {
        proof: out.stats,
        residual_regions: out.failures.len(),
        determinants_checked: checked,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum CaseVerdict {
    Invertibility { options: usize, proof: ProofStats },
    Symmetry { sigma: Perm, options: usize, proof: ProofStats },
    Hexagon(HexagonArgument),
    Special(SpecialArgument),
    Survivor { undecided_regions: usize },
}

impl CaseVerdict {
    pub fn stage_name(&self) -> &'static str {
        match self {
            CaseVerdict::Invertibility { .. } => "invertibility",
            CaseVerdict::Symmetry { .. } => "symmetry",
            CaseVerdict::Hexagon(_) => "hexagon",
            CaseVerdict::Special(_) => "special",
            CaseVerdict::Survivor { .. } => "survivor",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub id: usize,
    pub theta: ContractionPoint,
    pub verdict: CaseVerdict,
}

impl CaseReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "id": self.id,
            "case": self.theta.supp_plus().iter().map(|c| c.name()).collect::<Vec<_>>(),
            "eliminated_by": self.verdict.stage_name(),
            "certificate": serde_json::to_value(&self.verdict).unwrap_or(serde_json::Value::Null),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageCounts {
    pub cases: usize,
    pub after_invertibility: usize,
    pub after_symmetry: usize,
    pub after_hexagon_no_strip: usize,
    pub after_hexagon: usize,
    pub survivors: usize,
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub cases: Vec<CaseReport>,
    pub exceptional: Vec<CaseReport>,
    pub counts: StageCounts,
}

impl PipelineReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "counts": self.counts,
            "exceptional": self.exceptional.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "cases": self.cases.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Runs every stage over the support-5 cases and the exceptional point.
pub fn run_pipeline(prover: &SymbolicProver) -> Result<PipelineReport> {
    let lambda = lambda_set()?;
    let cases = lambda.cases;

    let inv: Vec<InvertibilityOutcome> =
        cases.par_iter().map(|t| relset_invertibility(t, prover)).collect::<Result<Vec<_>>>()?;
    let mut verdicts: Vec<Option<CaseVerdict>> = inv
        .iter()
        .map(|o| o.excluded().then(|| CaseVerdict::Invertibility { options: o.options, proof: o.stats.clone() }))
        .collect();
    let after_invertibility = verdicts.iter().filter(|v| v.is_none()).count();

    // a case also falls if the image of its support under some symmetry
    // is ruled out in the standard orientation
    let mut after_sym_cases = Vec::new();
    let others: Vec<Perm> = Perm::ALL.into_iter().filter(|&s| s != Perm::Id).collect();
    let pending: Vec<usize> = (0..cases.len()).filter(|&k| verdicts[k].is_none()).collect();
    let sym: Vec<Option<CaseVerdict>> = pending
        .par_iter()
        .map(|&k| {
            for &sigma in &others {
                let o = relset_invertibility(&cases[k], &SymbolicProver { orientations: vec![sigma] })?;
                if o.excluded() {
                    return Ok(Some(CaseVerdict::Symmetry { sigma, options: o.options, proof: o.stats }));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    for (&k, v) in pending.iter().zip(sym) {
        match v {
            Some(v) => verdicts[k] = Some(v),
            None => after_sym_cases.push(k),
        }
    }
    let after_symmetry = after_sym_cases.len();

    let mut after_no_strip = 0;
    let mut remaining = Vec::new();
    for &k in &after_sym_cases {
        match hexagon_stage(&cases[k]) {
            Some(arg) => {
                if arg.assumption != HexagonAssumption::NoStrip {
                    after_no_strip += 1;
                }
                verdicts[k] = Some(CaseVerdict::Hexagon(arg));
            }
            None => {
                after_no_strip += 1;
                remaining.push(k);
            }
        }
    }
    let after_hexagon = remaining.len();

    let mut survivors = 0;
    for &k in &remaining {
        match three_strip_argument(&cases[k])? {
            Some(arg) => verdicts[k] = Some(CaseVerdict::Special(arg)),
            None => {
                survivors += 1;
                verdicts[k] = Some(CaseVerdict::Survivor { undecided_regions: inv[k].failures.len() });
            }
        }
    }

    let mut exceptional = Vec::new();
    for (n, theta) in lambda.exceptional.iter().enumerate() {
        let verdict = match exceptional_argument()? {
            Some(arg) if exceptional_shape(&lambda.exceptional_preimages[n]) => CaseVerdict::Special(arg),
            _ => {
                survivors += 1;
                CaseVerdict::Survivor { undecided_regions: 1 }
            }
        };
        exceptional.push(CaseReport { id: cases.len() + n, theta: theta.clone(), verdict });
    }

    let counts = StageCounts {
        cases: cases.len(),
        after_invertibility,
        after_symmetry,
        after_hexagon_no_strip: after_no_strip,
        after_hexagon,
        survivors,
    };
    let cases = cases
        .into_iter()
        .zip(verdicts)
        .enumerate()
        .map(|(id, (theta, v))| CaseReport { id, theta, verdict: v.expect("every case has a verdict") })
        .collect();
    Ok(PipelineReport { cases, exceptional, counts })
}

fn exceptional_shape(preimages: &[ContractionPoint]) -> bool {
    let expect: Vec<XiCoord> =
        vec![XiCoord::X(0, 3), XiCoord::X(1, 1), XiCoord::X(3, 0), XiCoord::D0(0), XiCoord::D1(0)];
    !preimages.is_empty() && preimages.iter().all(|p| p.supp_plus() == expect)
}
