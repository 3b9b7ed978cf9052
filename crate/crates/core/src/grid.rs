//! Grid points, chip configurations, chipsplitting games and the S3 symmetry.
//!
//! A configuration lives on the triangle `V_d = {(i, j) : i + j <= d}`. A
//! splitting move at `p` removes one chip from `p` and adds one chip at each of
//! `p + (1, 0)` and `p + (0, 1)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A grid point. Ordered canonically by degree, then by `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coord {
    pub i: u32,
    pub j: u32,
}

impl Coord {
    pub const ORIGIN: Coord = Coord { i: 0, j: 0 };

    pub const fn new(i: u32, j: u32) -> Self {
        Coord { i, j }
    }

    pub const fn deg(self) -> u32 {
        self.i + self.j
    }

    pub fn transpose(self) -> Coord {
        Coord::new(self.j, self.i)
    }

    /// Position of the point in the canonical enumeration of `V_d`.
    pub fn index(self) -> usize {
        let e = self.deg() as usize;
        e * (e + 1) / 2 + self.i as usize
    }

    pub fn from_index(idx: usize) -> Coord {
        let mut e = 0usize;
        while (e + 1) * (e + 2) / 2 <= idx {
            e += 1;
        }
        let i = idx - e * (e + 1) / 2;
        Coord::new(i as u32, (e - i) as u32)
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.deg(), self.i).cmp(&(other.deg(), other.i))
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

impl Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Number of points in `V_d`.
pub fn triangle_size(d: u32) -> usize {
    let d = d as usize;
    (d + 1) * (d + 2) / 2
}

/// All points of `V_d` in canonical order.
pub fn triangle(d: u32) -> impl Iterator<Item = Coord> {
    (0..=d).flat_map(move |e| (0..=e).map(move |i| Coord::new(i, e - i)))
}

/// Exact scalar types a configuration may carry.
pub trait Value:
    Clone + Debug + Display + FromStr + Ord + Signed + From<BigInt> + Send + Sync + 'static
{
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Option<Self>;
}

impl Value for BigInt {
    fn to_json(&self) -> serde_json::Value {
        match self.to_i64() {
            Some(x) => serde_json::Value::from(x),
            None => serde_json::Value::String(self.to_string()),
        }
    }

    fn from_json(v: &serde_json::Value) -> Option<Self> {
        match v {
            serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
            serde_json::Value::String(s) => s.parse().ok(),
            _ => None,
        }
    }
}

impl Value for BigRational {
    fn to_json(&self) -> serde_json::Value {
        if self.is_integer() {
            self.numer().to_json()
        } else {
            serde_json::Value::String(self.to_string())
        }
    }

    fn from_json(v: &serde_json::Value) -> Option<Self> {
        match v {
            serde_json::Value::Number(n) => n.as_i64().map(|x| BigRational::from(BigInt::from(x))),
            serde_json::Value::String(s) => s.parse().ok(),
            _ => None,
        }
    }
}

/// A finitely supported map from grid points to exact values.
///
/// Zero entries are never stored. The ambient bound `d` is metadata: two
/// configurations compare equal when their entries agree.
#[derive(Clone)]
pub struct Configuration<T> {
    entries: BTreeMap<Coord, T>,
    bound: Option<u32>,
}

pub type ChipConfiguration = Configuration<BigInt>;
pub type RationalConfiguration = Configuration<BigRational>;

impl<T: Value> PartialEq for Configuration<T> {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl<T: Value> Eq for Configuration<T> {}

impl<T: Value> PartialOrd for Configuration<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Value> Ord for Configuration<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.entries.iter().cmp(other.entries.iter())
    }
}

impl<T: Value> Debug for Configuration<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, (c, v)) in self.entries.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}:{v}")?;
        }
        write!(f, "}}")
    }
}

/// Degree, supports and validity flags of a configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub degree: i64,
    pub supp_plus: BTreeSet<Coord>,
    pub supp_minus: BTreeSet<Coord>,
    pub is_valid: bool,
    pub is_weakly_valid: bool,
}

/// Outer-ring membership used by weak validity.
pub fn in_outer_ring(c: Coord, d: u32) -> bool {
    let top = c.deg() + 3 >= d;
    (c.i <= 3 && c.j <= 3) || (c.i <= 3 && top) || (c.j <= 3 && top)
}

impl<T: Value> Default for Configuration<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Value> Configuration<T> {
    pub fn zero() -> Self {
        Configuration { entries: BTreeMap::new(), bound: None }
    }

    pub fn with_bound(mut self, d: Option<u32>) -> Self {
        self.bound = d;
        self
    }

    pub fn bound(&self) -> Option<u32> {
        self.bound
    }

    /// Builds a configuration, rejecting points beyond a finite bound.
    pub fn from_entries<I>(entries: I, bound: Option<u32>) -> Result<Self>
    where
        I: IntoIterator<Item = (Coord, T)>,
    {
        let mut w = Configuration { entries: BTreeMap::new(), bound };
        for (c, v) in entries {
            if let Some(d) = bound {
                if c.deg() > d {
                    return Err(Error::OutOfBounds(c, d));
                }
            }
            w.add_at(c, v);
        }
        Ok(w)
    }

    /// Convenience constructor from `(i, j, value)` triples without a bound.
    pub fn from_triples<V: Into<T>>(triples: impl IntoIterator<Item = (u32, u32, V)>) -> Self {
        let mut w = Self::zero();
        for (i, j, v) in triples {
            w.add_at(Coord::new(i, j), v.into());
        }
        w
    }

    pub fn get(&self, c: Coord) -> T {
        self.entries.get(&c).cloned().unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, c: Coord, v: T) {
        if v.is_zero() {
            self.entries.remove(&c);
        } else {
            self.entries.insert(c, v);
        }
    }

    pub fn add_at(&mut self, c: Coord, v: T) {
        let cur = self.get(c);
        self.set(c, cur + v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Coord, &T)> {
        self.entries.iter()
    }

    pub fn support(&self) -> BTreeSet<Coord> {
        self.entries.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Maximal degree of the support, or -1 for the zero configuration.
    pub fn degree(&self) -> i64 {
        self.entries.keys().map(|c| c.deg() as i64).max().unwrap_or(-1)
    }

    pub fn neg(&self) -> Self {
        Configuration {
            entries: self.entries.iter().map(|(c, v)| (*c, -v.clone())).collect(),
            bound: self.bound,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, v) in other.iter() {
            out.add_at(*c, v.clone());
        }
        out
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Configuration { entries: BTreeMap::new(), bound: self.bound };
        for (c, v) in self.iter() {
            out.set(*c, v.clone() * s.clone());
        }
        out
    }

    pub fn map<U: Value>(&self, f: impl Fn(&T) -> U) -> Configuration<U> {
        let mut out = Configuration { entries: BTreeMap::new(), bound: self.bound };
        for (c, v) in self.iter() {
            out.set(*c, f(v));
        }
        out
    }

    /// Restriction to the points of degree at most `e`.
    pub fn restrict(&self, e: u32) -> Self {
        Configuration {
            entries: self
                .entries
                .iter()
                .filter(|(c, _)| c.deg() <= e)
                .map(|(c, v)| (*c, v.clone()))
                .collect(),
            bound: Some(e),
        }
    }

    pub fn analyze(&self) -> Result<Analysis> {
        let supp_plus: BTreeSet<Coord> =
            self.entries.iter().filter(|(_, v)| v.is_positive()).map(|(c, _)| *c).collect();
        let supp_minus: BTreeSet<Coord> =
            self.entries.iter().filter(|(_, v)| v.is_negative()).map(|(c, _)| *c).collect();
        let d = self.bound.ok_or(Error::InfiniteDegree)?;
        let is_valid = supp_minus.iter().all(|c| *c == Coord::ORIGIN);
        let is_weakly_valid = supp_minus.iter().all(|c| in_outer_ring(*c, d));
        Ok(Analysis { degree: self.degree(), supp_plus, supp_minus, is_valid, is_weakly_valid })
    }

    pub fn is_valid(&self) -> bool {
        self.entries.iter().all(|(c, v)| *c == Coord::ORIGIN || !v.is_negative())
    }

    /// Applies a game: each move value counts splitting moves at its point.
    pub fn apply_game(&self, game: &Game<T>) -> Result<Self> {
        let mut out = self.clone();
        for (p, g) in game.iter() {
            if let Some(d) = self.bound {
                if p.deg() >= d {
                    return Err(Error::MoveOnBoundary(*p, d));
                }
            }
            out.add_at(*p, -g.clone());
            out.add_at(Coord::new(p.i + 1, p.j), g.clone());
            out.add_at(Coord::new(p.i, p.j + 1), g.clone());
        }
        Ok(out)
    }

    /// Action of `sigma` on a configuration of degree at most `d`.
    pub fn act(&self, sigma: Perm, d: u32) -> Result<Self> {
        let mut out = Configuration { entries: BTreeMap::new(), bound: Some(d) };
        for (c, v) in self.iter() {
            if c.deg() > d {
                return Err(Error::OutOfBounds(*c, d));
            }
            let (target, negate) = sigma.map_point(*c, d);
            out.set(target, if negate { -v.clone() } else { v.clone() });
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .iter()
            .map(|(c, v)| serde_json::json!([c.i, c.j, v.to_json()]))
            .collect();
        serde_json::json!({ "d": self.bound, "entries": entries })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |msg: &str| Error::Parse { line: 0, msg: msg.to_string() };
        let bound = match v.get("d") {
            None | Some(serde_json::Value::Null) => None,
            Some(x) => Some(x.as_u64().ok_or_else(|| bad("field d"))? as u32),
        };
        let arr = v.get("entries").and_then(|e| e.as_array()).ok_or_else(|| bad("field entries"))?;
        let mut triples = Vec::new();
        for e in arr {
            let t = e.as_array().filter(|t| t.len() == 3).ok_or_else(|| bad("entry"))?;
            let i = t[0].as_u64().ok_or_else(|| bad("entry i"))? as u32;
            let j = t[1].as_u64().ok_or_else(|| bad("entry j"))? as u32;
            let val = T::from_json(&t[2]).ok_or_else(|| bad("entry value"))?;
            triples.push((Coord::new(i, j), val));
        }
        Self::from_entries(triples, bound)
    }

    /// Draws the triangle with row `j` at height `j`; zeros use `dot`.
    pub fn render_with(&self, d: u32, dot: &str) -> Result<String> {
        if self.degree() > d as i64 {
            return Err(Error::OutOfBounds(*self.entries.keys().last().unwrap(), d));
        }
        let mut lines = Vec::with_capacity(d as usize + 1);
        for j in (0..=d).rev() {
            let row: Vec<String> = (0..=d - j)
                .map(|i| {
                    let c = Coord::new(i, j);
                    match self.entries.get(&c) {
                        Some(v) => v.to_string(),
                        None if self.is_zero() && c == Coord::ORIGIN => "0".to_string(),
                        None => dot.to_string(),
                    }
                })
                .collect();
            lines.push(row.join(" "));
        }
        Ok(lines.join("\n"))
    }

    pub fn render(&self, d: u32) -> Result<String> {
        self.render_with(d, "·")
    }

    /// Parses the triangle format; the degree is the number of rows minus one.
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(n, l)| (n + 1, l.split_whitespace().collect()))
            .collect();
        if rows.is_empty() {
            return Err(Error::Parse { line: 1, msg: "empty input".into() });
        }
        let d = (rows.len() - 1) as u32;
        let mut w = Configuration { entries: BTreeMap::new(), bound: Some(d) };
        for (r, (line, tokens)) in rows.iter().enumerate() {
            let j = d - r as u32;
            if tokens.len() != r + 1 {
                return Err(Error::Parse {
                    line: *line,
                    msg: format!("row for j={j} needs {} entries, found {}", r + 1, tokens.len()),
                });
            }
            for (i, tok) in tokens.iter().enumerate() {
                if *tok == "·" || *tok == "." {
                    continue;
                }
                let v: T = tok.parse().map_err(|_| Error::Parse {
                    line: *line,
                    msg: format!("invalid entry {tok:?}"),
                })?;
                w.set(Coord::new(i as u32, j), v);
            }
        }
        Ok(w)
    }
}

impl ChipConfiguration {
    pub fn to_rational(&self) -> RationalConfiguration {
        self.map(|v| BigRational::from(v.clone()))
    }

    /// Divides out the content of the entries.
    pub fn primitive(&self) -> Self {
        use num_integer::Integer;
        let g = self.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        self.map(|v| v / &g)
    }
}

/// A chipsplitting game: signed move counts per point.
#[derive(Clone, PartialEq, Eq)]
pub struct Game<T> {
    moves: BTreeMap<Coord, T>,
}

impl<T: Value> Debug for Game<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.moves.iter()).finish()
    }
}

impl<T: Value> Default for Game<T> {
    fn default() -> Self {
        Game { moves: BTreeMap::new() }
    }
}

impl<T: Value> Game<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_triples<V: Into<T>>(triples: impl IntoIterator<Item = (u32, u32, V)>) -> Self {
        let mut g = Self::new();
        for (i, j, v) in triples {
            g.add_at(Coord::new(i, j), v.into());
        }
        g
    }

    pub fn add_at(&mut self, c: Coord, v: T) {
        let cur = self.moves.get(&c).cloned().unwrap_or_else(T::zero) + v;
        if cur.is_zero() {
            self.moves.remove(&c);
        } else {
            self.moves.insert(c, cur);
        }
    }

    pub fn get(&self, c: Coord) -> T {
        self.moves.get(&c).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Coord, &T)> {
        self.moves.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn neg(&self) -> Self {
        Game { moves: self.moves.iter().map(|(c, v)| (*c, -v.clone())).collect() }
    }

    pub fn merge(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, v) in other.iter() {
            out.add_at(*c, v.clone());
        }
        out
    }
}

/// Elements of the symmetric group on three letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Perm {
    Id,
    T12,
    T13,
    T23,
    C123,
    C132,
}

impl Perm {
    pub const ALL: [Perm; 6] = [Perm::Id, Perm::T12, Perm::T13, Perm::T23, Perm::C123, Perm::C132];

    /// Images of 1, 2, 3 (zero-based).
    fn images(self) -> [usize; 3] {
        match self {
            Perm::Id => [0, 1, 2],
            Perm::T12 => [1, 0, 2],
            Perm::T13 => [2, 1, 0],
            Perm::T23 => [0, 2, 1],
            Perm::C123 => [1, 2, 0],
            Perm::C132 => [2, 0, 1],
        }
    }

    fn from_images(img: [usize; 3]) -> Perm {
        *Perm::ALL.iter().find(|p| p.images() == img).expect("permutation of three letters")
    }

    /// The product `self ∘ other` (apply `other` first).
    pub fn compose(self, other: Perm) -> Perm {
        let a = self.images();
        let b = other.images();
        Perm::from_images([a[b[0]], a[b[1]], a[b[2]]])
    }

    pub fn inverse(self) -> Perm {
        let a = self.images();
        let mut inv = [0; 3];
        for (k, &x) in a.iter().enumerate() {
            inv[x] = k;
        }
        Perm::from_images(inv)
    }

    pub fn name(self) -> &'static str {
        match self {
            Perm::Id => "e",
            Perm::T12 => "(12)",
            Perm::T13 => "(13)",
            Perm::T23 => "(23)",
            Perm::C123 => "(123)",
            Perm::C132 => "(132)",
        }
    }

    /// Image point of `c` and whether the value changes sign.
    pub fn map_point(self, c: Coord, d: u32) -> (Coord, bool) {
        let (a, b) = (c.i, c.j);
        let rest = d - a - b;
        let odd = |x: u32| (d - x) % 2 == 1;
        match self {
            Perm::Id => (c, false),
            Perm::T12 => (Coord::new(b, a), false),
            Perm::C123 => (Coord::new(rest, a), odd(a)),
            Perm::T13 => (Coord::new(rest, b), odd(b)),
            Perm::T23 => (Coord::new(a, rest), odd(a)),
            Perm::C132 => (Coord::new(b, rest), odd(b)),
        }
    }

    pub fn act_point(self, c: Coord, d: u32) -> Coord {
        self.map_point(c, d).0
    }
}

impl Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(t: &[(u32, u32, i64)]) -> ChipConfiguration {
        ChipConfiguration::from_triples(t.iter().map(|&(i, j, v)| (i, j, BigInt::from(v))))
    }

    #[test]
    fn three_moves_give_binomial_triangle() {
        let g = Game::<BigInt>::from_triples([(0, 0, 1), (1, 0, 1), (0, 1, 1)].map(|(i, j, v)| (i, j, BigInt::from(v))));
        let w = ChipConfiguration::zero().apply_game(&g).unwrap();
        assert_eq!(w, cfg(&[(0, 0, -1), (2, 0, 1), (1, 1, 2), (0, 2, 1)]));
    }

    #[test]
    fn empty_game_and_reversal() {
        let z = ChipConfiguration::zero();
        assert_eq!(z.apply_game(&Game::new()).unwrap(), z);
        let g = Game::from_triples([(0, 0, BigInt::from(1))]);
        let w = z.apply_game(&g).unwrap().apply_game(&g.neg()).unwrap();
        assert!(w.is_zero());
    }

    #[test]
    fn boundary_move_rejected() {
        let z = ChipConfiguration::zero().with_bound(Some(2));
        let g = Game::from_triples([(1, 1, BigInt::from(1))]);
        assert!(matches!(z.apply_game(&g), Err(Error::MoveOnBoundary(_, 2))));
    }

    #[test]
    fn analyze_examples() {
        let a = cfg(&[(0, 0, -1), (1, 0, 1), (0, 1, 1)]).with_bound(Some(1)).analyze().unwrap();
        assert_eq!(a.degree, 1);
        assert!(a.is_valid);
        assert_eq!(a.supp_plus.len(), 2);
        let z = ChipConfiguration::zero().with_bound(Some(3)).analyze().unwrap();
        assert_eq!(z.degree, -1);
        assert!(z.is_valid && z.supp_plus.is_empty());
        let b = cfg(&[(0, 0, -1), (4, 4, -1), (9, 0, 1)]).with_bound(Some(9)).analyze().unwrap();
        assert!(!b.is_valid && !b.is_weakly_valid);
        assert!(cfg(&[(1, 0, 1)]).analyze().is_err());
    }

    #[test]
    fn transposition_examples() {
        let w = cfg(&[(0, 0, -1), (1, 0, 1), (0, 1, 1)]);
        assert_eq!(w.act(Perm::T12, 1).unwrap(), w);
        let w = cfg(&[(0, 0, -1), (0, 1, 1), (1, 1, 1), (2, 0, 1)]);
        let expect = cfg(&[(0, 0, -1), (1, 0, 1), (1, 1, 1), (0, 2, 1)]);
        assert_eq!(w.act(Perm::T12, 2).unwrap(), expect);
    }

    #[test]
    fn rotation_formula() {
        let d = 5;
        let w = cfg(&[(0, 0, 2), (1, 3, -1), (2, 1, 5), (0, 5, 7)]);
        let r = w.act(Perm::C123, d).unwrap();
        for c in triangle(d) {
            let src = Coord::new(c.j, d - c.deg());
            let sign = if (d - c.j) % 2 == 1 { -1 } else { 1 };
            assert_eq!(r.get(c), w.get(src) * sign);
        }
    }

    #[test]
    fn composition_table() {
        assert_eq!(Perm::T12.compose(Perm::T13), Perm::C132);
        assert_eq!(Perm::T13.compose(Perm::T12), Perm::C123);
        for p in Perm::ALL {
            assert_eq!(p.compose(p.inverse()), Perm::Id);
        }
    }

    #[test]
    fn render_examples() {
        let w = cfg(&[(0, 0, -1), (2, 0, 1), (1, 1, 2), (0, 2, 1)]);
        assert_eq!(w.render(2).unwrap(), "1\n· 2\n-1 · 1");
        assert_eq!(ChipConfiguration::zero().render(0).unwrap(), "0");
        assert_eq!(w.render_with(2, ".").unwrap(), "1\n. 2\n-1 . 1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(ChipConfiguration::parse("1\n2"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(ChipConfiguration::parse("x\n1 2"), Err(Error::Parse { line: 1, .. })));
        let w = ChipConfiguration::parse("0").unwrap();
        assert!(w.is_zero());
    }

    #[test]
    fn index_roundtrip() {
        for (n, c) in triangle(9).enumerate() {
            assert_eq!(c.index(), n);
            assert_eq!(Coord::from_index(n), c);
        }
    }

    #[test]
    fn json_roundtrip() {
        let w = cfg(&[(0, 0, -1), (3, 0, 1), (1, 1, 3), (0, 3, 1)]).with_bound(Some(3));
        let j = w.to_json();
        assert_eq!(j["entries"][0], serde_json::json!([0, 0, -1]));
        assert_eq!(ChipConfiguration::from_json(&j).unwrap(), w);
    }
}
