//! Integer linear forms over the half-degree `h` (with `d = 2h + p`) and up
//! to three free coordinates, regions cut out by linear inequalities, and a
//! Fourier-Motzkin test used to prove that a region is empty.

use std::fmt;

use num_integer::Integer;

pub const NVARS: usize = 4;
pub const VAR_NAMES: [&str; NVARS] = ["h", "m_b", "m_d", "m_c"];

/// Index of the half-degree variable.
pub const H: usize = 0;

/// `c + Σ a[k]·x_k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lin {
    pub c: i64,
    pub a: [i64; NVARS],
}

impl fmt::Debug for Lin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Lin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, &a) in self.a.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(VAR_NAMES[k].to_string()),
                -1 => parts.push(format!("-{}", VAR_NAMES[k])),
                _ => parts.push(format!("{a}{}", VAR_NAMES[k])),
            }
        }
        if self.c != 0 || parts.is_empty() {
            parts.push(self.c.to_string());
        }
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}

impl Lin {
    pub const fn constant(c: i64) -> Lin {
        Lin { c, a: [0; NVARS] }
    }

    pub fn var(k: usize) -> Lin {
        let mut a = [0; NVARS];
        a[k] = 1;
        Lin { c: 0, a }
    }

    /// The degree `2h + p`.
    pub fn degree(p: i64) -> Lin {
        Lin { c: p, a: [2, 0, 0, 0] }
    }

    pub fn is_constant(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &Lin) -> Lin {
        let mut a = self.a;
        for k in 0..NVARS {
            a[k] += o.a[k];
        }
        Lin { c: self.c + o.c, a }
    }

    pub fn sub(&self, o: &Lin) -> Lin {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, s: i64) -> Lin {
        Lin { c: self.c * s, a: self.a.map(|x| x * s) }
    }

    pub fn plus(&self, c: i64) -> Lin {
        Lin { c: self.c + c, a: self.a }
    }

    /// Replaces `x_k` by `e`.
    pub fn substitute(&self, k: usize, e: &Lin) -> Lin {
        let t = self.a[k];
        let mut out = *self;
        out.a[k] = 0;
        out.add(&e.scale(t))
    }

    pub fn eval(&self, x: &[i64; NVARS]) -> i64 {
        self.c + self.a.iter().zip(x.iter()).map(|(a, b)| a * b).sum::<i64>()
    }

    fn var_gcd(&self) -> i64 {
        self.a.iter().fold(0i64, |g, &x| g.gcd(&x))
    }

    /// Whether `self = 0` has no integer solution by divisibility alone.
    pub fn never_zero_by_divisibility(&self) -> bool {
        let g = self.var_gcd();
        if g == 0 {
            self.c != 0
        } else {
            self.c % g != 0
        }
    }

    /// A variable with coefficient `±1`, after dividing out the content.
    fn unit_variable(&self) -> Option<(usize, Lin)> {
        let g = self.var_gcd();
        if g == 0 || self.c % g != 0 {
            return None;
        }
        let l = Lin { c: self.c / g, a: self.a.map(|x| x / g) };
        let k = (0..NVARS).rev().find(|&k| l.a[k].abs() == 1)?;
        // l = 0 with l = s·x_k + rest gives x_k = -s·rest
        let s = l.a[k];
        let mut rest = l;
        rest.a[k] = 0;
        Some((k, rest.scale(-s)))
    }
}

/// A set of integer points `{x : cons[k](x) >= 0}` together with the
/// substitutions already made and the parity of `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub parity: i64,
    pub cons: Vec<Lin>,
    pub subs: Vec<(usize, Lin)>,
}

/// Sign information on a linear form over a region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Exactly(i64),
    AtLeast(i64),
    AtMost(i64),
    Unknown,
}

impl Region {
    pub fn new(parity: i64, min_half: i64) -> Region {
        Region { parity, cons: vec![Lin::var(H).plus(-min_half)], subs: Vec::new() }
    }

    pub fn degree(&self) -> Lin {
        Lin::degree(self.parity)
    }

    pub fn require_ge(&mut self, f: Lin) {
        self.cons.push(f);
    }

    /// `lo <= f <= hi`
    pub fn require_between(&mut self, f: Lin, lo: Lin, hi: Lin) {
        self.cons.push(f.sub(&lo));
        self.cons.push(hi.sub(&f));
    }

    pub fn with(&self, f: Lin) -> Region {
        let mut r = self.clone();
        r.cons.push(f);
        r
    }

    /// Imposes `f = 0`, substituting a unit variable when there is one.
    /// Returns `None` when the equation has no integer solutions.
    pub fn with_zero(&self, f: Lin) -> Option<(Region, Option<(usize, Lin)>)> {
        if f.never_zero_by_divisibility() {
            return None;
        }
        match f.unit_variable() {
            Some((k, e)) => {
                let mut r = self.clone();
                r.cons = r.cons.iter().map(|c| c.substitute(k, &e)).collect();
                r.subs = r.subs.iter().map(|(v, s)| (*v, s.substitute(k, &e))).collect();
                r.subs.push((k, e));
                Some((r, Some((k, e))))
            }
            None => {
                let mut r = self.clone();
                r.cons.push(f);
                r.cons.push(f.scale(-1));
                Some((r, None))
            }
        }
    }

    pub fn is_feasible(&self) -> bool {
        feasible(&self.cons)
    }

    /// Whether `f >= k` at every integer point of the region.
    pub fn implies_ge(&self, f: &Lin, k: i64) -> bool {
        let mut cons = self.cons.clone();
        cons.push(f.scale(-1).plus(k - 1));
        !feasible(&cons)
    }

    pub fn implies_le(&self, f: &Lin, k: i64) -> bool {
        self.implies_ge(&f.scale(-1), -k)
    }

    /// Pins `f` to a constant in `[-window, window]`, or bounds it away from
    /// that window, when the region forces it.
    pub fn relation(&self, f: &Lin, window: i64) -> Relation {
        if f.is_constant() {
            return Relation::Exactly(f.c);
        }
        if self.implies_ge(f, window + 1) {
            return Relation::AtLeast(window + 1);
        }
        if self.implies_le(f, -window - 1) {
            return Relation::AtMost(-window - 1);
        }
        for k in -window..=window {
            if self.implies_ge(f, k) && self.implies_le(f, k) {
                return Relation::Exactly(k);
            }
        }
        Relation::Unknown
    }

    /// Whether `f` vanishes nowhere on the region.
    pub fn implies_nonzero(&self, f: &Lin) -> bool {
        f.never_zero_by_divisibility() || self.implies_ge(f, 1) || self.implies_le(f, -1)
    }

    pub fn implies_zero(&self, f: &Lin) -> bool {
        f.is_constant() && f.c == 0 || self.implies_ge(f, 0) && self.implies_le(f, 0)
    }

    /// Some integer point of the region with `h <= max_half`, by search.
    pub fn sample(&self, max_half: i64, bound: i64) -> Option<[i64; NVARS]> {
        let free: Vec<usize> = (1..NVARS).filter(|&k| self.cons.iter().any(|c| c.a[k] != 0)).collect();
        for h in 0..=max_half {
            let mut x = [0i64; NVARS];
            x[H] = h;
            if let Some(p) = self.sample_rec(&mut x, &free, 0, bound) {
                return Some(p);
            }
        }
        None
    }

    fn sample_rec(&self, x: &mut [i64; NVARS], free: &[usize], idx: usize, bound: i64) -> Option<[i64; NVARS]> {
        if idx == free.len() {
            return self.cons.iter().all(|c| c.eval(x) >= 0).then_some(*x);
        }
        for v in 0..=bound {
            x[free[idx]] = v;
            if let Some(p) = self.sample_rec(x, free, idx + 1, bound) {
                return Some(p);
            }
        }
        x[free[idx]] = 0;
        None
    }
}

const FM_LIMIT: usize = 4000;

/// Divides out the content of the variable part and rounds the constant
/// down, which keeps every integer solution.
fn tighten(v: &mut [i128; NVARS + 1]) {
    let g = v[..NVARS].iter().fold(0i128, |g, x| g.gcd(x));
    if g > 1 {
        for x in v[..NVARS].iter_mut() {
            *x /= g;
        }
        v[NVARS] = Integer::div_floor(&v[NVARS], &g);
    }
}

/// Rational Fourier-Motzkin with integer tightening. `false` means the
/// constraints have no integer solution; `true` means none was ruled out.
pub fn feasible(cons: &[Lin]) -> bool {
    let mut cs: Vec<[i128; NVARS + 1]> = cons
        .iter()
        .map(|l| {
            let mut v = [0i128; NVARS + 1];
            for k in 0..NVARS {
                v[k] = l.a[k] as i128;
            }
            v[NVARS] = l.c as i128;
            tighten(&mut v);
            v
        })
        .collect();
    for var in 0..NVARS {
        if cs.iter().any(|v| v[..NVARS].iter().all(|&x| x == 0) && v[NVARS] < 0) {
            return false;
        }
        let pos: Vec<&[i128; NVARS + 1]> = cs.iter().filter(|v| v[var] > 0).collect();
        let neg: Vec<&[i128; NVARS + 1]> = cs.iter().filter(|v| v[var] < 0).collect();
        let mut next: Vec<[i128; NVARS + 1]> = cs.iter().filter(|v| v[var] == 0).copied().collect();
        for p in &pos {
            for n in &neg {
                let (a, b) = (p[var], -n[var]);
                let mut v = [0i128; NVARS + 1];
                for k in 0..=NVARS {
                    v[k] = p[k] * b + n[k] * a;
                }
                tighten(&mut v);
                next.push(v);
            }
        }
        next.sort_unstable();
        next.dedup();
        // parallel constraints: keep the strongest
        next.dedup_by(|later, earlier| later[..NVARS] == earlier[..NVARS]);
        if next.len() > FM_LIMIT {
            return true;
        }
        cs = next;
    }
    cs.iter().all(|v| v[NVARS] >= 0)
}
