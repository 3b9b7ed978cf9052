//! The sign hyperfield and sign images of Pascal equations.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use fixedbitset::FixedBitSet;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::criteria::{Certificate, ExclusionVerdict};
use crate::error::{Error, Result};
use crate::grid::{in_outer_ring, triangle, triangle_size, Configuration, Coord, Value};
use crate::pascal::{FormKind, PascalForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of<T: Signed>(x: &T) -> Sign {
        if x.is_positive() {
            Sign::Pos
        } else if x.is_negative() {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }

    pub fn from_i8(x: i8) -> Sign {
        match x.signum() {
            -1 => Sign::Neg,
            0 => Sign::Zero,
            _ => Sign::Pos,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        Sign::from_i8(-self.to_i8())
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_i8(self.to_i8() * rhs.to_i8())
    }
}

/// A hyperfield sum: the subsets `{0}`, `{1}`, `{-1}` or all of `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HyperSum {
    Zero,
    Pos,
    Neg,
    Full,
}

impl HyperSum {
    pub fn vanishes(self) -> bool {
        matches!(self, HyperSum::Zero | HyperSum::Full)
    }

    pub fn from_flags(has_pos: bool, has_neg: bool) -> HyperSum {
        match (has_pos, has_neg) {
            (true, true) => HyperSum::Full,
            (true, false) => HyperSum::Pos,
            (false, true) => HyperSum::Neg,
            (false, false) => HyperSum::Zero,
        }
    }
}

impl From<Sign> for HyperSum {
    fn from(s: Sign) -> HyperSum {
        match s {
            Sign::Neg => HyperSum::Neg,
            Sign::Zero => HyperSum::Zero,
            Sign::Pos => HyperSum::Pos,
        }
    }
}

impl Add<Sign> for HyperSum {
    type Output = HyperSum;
    fn add(self, rhs: Sign) -> HyperSum {
        self + HyperSum::from(rhs)
    }
}

impl Add for HyperSum {
    type Output = HyperSum;
    fn add(self, rhs: HyperSum) -> HyperSum {
        use HyperSum::*;
        match (self, rhs) {
            (Zero, x) | (x, Zero) => x,
            (Full, _) | (_, Full) => Full,
            (Pos, Pos) => Pos,
            (Neg, Neg) => Neg,
            _ => Full,
        }
    }
}

impl fmt::Display for HyperSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HyperSum::Zero => "{0}",
            HyperSum::Pos => "{1}",
            HyperSum::Neg => "{-1}",
            HyperSum::Full => "H",
        })
    }
}

/// A sign configuration on `V_d`, stored densely in canonical order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignConfiguration {
    d: u32,
    vals: Vec<Sign>,
}

impl fmt::Debug for SignConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignConfiguration(d={}, +{:?}, -{:?})", self.d, self.supp_plus(), self.supp_minus())
    }
}

impl SignConfiguration {
    pub fn zero(d: u32) -> Self {
        SignConfiguration { d, vals: vec![Sign::Zero; triangle_size(d)] }
    }

    pub fn of<T: Value>(w: &Configuration<T>, d: u32) -> Result<Self> {
        let mut s = Self::zero(d);
        for (c, v) in w.iter() {
            s.set(*c, Sign::of(v))?;
        }
        Ok(s)
    }

    /// The valid sign configuration with `-1` at the origin and `+1` on `pos`.
    pub fn canonical(pos: &BTreeSet<Coord>, d: u32) -> Result<Self> {
        let mut s = Self::zero(d);
        s.set(Coord::ORIGIN, Sign::Neg)?;
        for c in pos {
            s.set(*c, Sign::Pos)?;
        }
        Ok(s)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn get(&self, c: Coord) -> Sign {
        if c.deg() > self.d {
            Sign::Zero
        } else {
            self.vals[c.index()]
        }
    }

    pub fn set(&mut self, c: Coord, s: Sign) -> Result<()> {
        if c.deg() > self.d {
            return Err(Error::OutOfBounds(c, self.d));
        }
        self.vals[c.index()] = s;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coord, Sign)> + '_ {
        triangle(self.d).zip(self.vals.iter().copied())
    }

    pub fn supp_plus(&self) -> BTreeSet<Coord> {
        self.iter().filter(|(_, s)| *s == Sign::Pos).map(|(c, _)| c).collect()
    }

    pub fn supp_minus(&self) -> BTreeSet<Coord> {
        self.iter().filter(|(_, s)| *s == Sign::Neg).map(|(c, _)| c).collect()
    }

    pub fn degree(&self) -> i64 {
        self.iter().filter(|(_, s)| *s != Sign::Zero).map(|(c, _)| c.deg() as i64).max().unwrap_or(-1)
    }

    pub fn is_valid(&self) -> bool {
        self.iter().all(|(c, s)| s != Sign::Neg || c == Coord::ORIGIN)
    }

    pub fn is_weakly_valid(&self) -> bool {
        self.iter().all(|(c, s)| s != Sign::Neg || in_outer_ring(c, self.d))
    }

    /// The grid action, with signs multiplied as for integer configurations.
    pub fn act(&self, sigma: crate::grid::Perm) -> Self {
        let mut out = Self::zero(self.d);
        for (c, s) in self.iter() {
            let (t, flip) = sigma.map_point(c, self.d);
            out.vals[t.index()] = if flip { -s } else { s };
        }
        out
    }
}

/// The sign image of a Pascal equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignForm {
    pub kind: FormKind,
    d: u32,
    coeffs: Vec<Sign>,
}

impl SignForm {
    pub fn of(f: &PascalForm) -> Self {
        SignForm { kind: f.kind(), d: f.d(), coeffs: triangle(f.d()).map(|c| Sign::of(f.coeff(c))).collect() }
    }

    pub fn new(kind: FormKind, d: u32) -> Result<Self> {
        Ok(Self::of(&PascalForm::new(kind, d)?))
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn coeff(&self, c: Coord) -> Sign {
        if c.deg() > self.d {
            Sign::Zero
        } else {
            self.coeffs[c.index()]
        }
    }

    pub fn eval(&self, s: &SignConfiguration) -> HyperSum {
        s.iter().fold(HyperSum::Zero, |acc, (c, v)| acc + self.coeff(c) * v)
    }
}

pub fn form_name(kind: FormKind) -> String {
    match kind {
        FormKind::Psi(k) => format!("psi_{k}"),
        FormKind::PsiBar(k) => format!("psibar_{k}"),
        FormKind::Phi(a, b) => format!("phi_{a},{b}"),
    }
}

/// All `psi_k`, `psibar_k` and top-edge `phi` forms for `V_d`.
pub fn standard_form_kinds(d: u32) -> Vec<FormKind> {
    let mut v: Vec<FormKind> = (0..=d).map(FormKind::Psi).collect();
    v.extend((0..=d).map(FormKind::PsiBar));
    v.extend((0..=d).map(|a| FormKind::Phi(a, d - a)));
    v
}

/// Sign forms of `V_d` as pairs of point sets (positive and negative
/// coefficients) indexed by canonical position, for fast support tests.
#[derive(Clone, Debug)]
pub struct SignFormTable {
    pub d: u32,
    pub forms: Vec<(FormKind, FixedBitSet, FixedBitSet)>,
}

impl SignFormTable {
    pub fn new(d: u32) -> Self {
        let n = triangle_size(d);
        let forms = standard_form_kinds(d)
            .into_iter()
            .map(|kind| {
                let f = SignForm::new(kind, d).expect("standard index");
                let mut pos = FixedBitSet::with_capacity(n);
                let mut neg = FixedBitSet::with_capacity(n);
                for (k, c) in triangle(d).enumerate() {
                    match f.coeff(c) {
                        Sign::Pos => pos.insert(k),
                        Sign::Neg => neg.insert(k),
                        Sign::Zero => {}
                    }
                }
                (kind, pos, neg)
            })
            .collect();
        SignFormTable { d, forms }
    }

    /// Value of each form at the canonical configuration of `pos`.
    pub fn eval_canonical(&self, pos: &FixedBitSet) -> Vec<(FormKind, HyperSum)> {
        self.forms
            .iter()
            .map(|(kind, p, n)| {
                let has_pos = !p.is_disjoint(pos) || n.contains(0);
                let has_neg = !n.is_disjoint(pos) || p.contains(0);
                (*kind, HyperSum::from_flags(has_pos, has_neg))
            })
            .collect()
    }

    /// First form violating the hyperfield test for the canonical
    /// configuration of `pos`; `strict` demands the value `H`.
    pub fn first_violation(&self, pos: &FixedBitSet, strict: bool) -> Option<(FormKind, HyperSum)> {
        for (kind, p, n) in &self.forms {
            let has_pos = !p.is_disjoint(pos) || n.contains(0);
            let has_neg = !n.is_disjoint(pos) || p.contains(0);
            let v = HyperSum::from_flags(has_pos, has_neg);
            let ok = if strict { v == HyperSum::Full } else { v.vanishes() };
            if !ok {
                return Some((*kind, v));
            }
        }
        None
    }
}

pub fn support_bits(pos: &BTreeSet<Coord>, d: u32) -> Result<FixedBitSet> {
    let mut bits = FixedBitSet::with_capacity(triangle_size(d));
    for c in pos {
        if c.deg() > d {
            return Err(Error::OutOfBounds(*c, d));
        }
        bits.insert(c.index());
    }
    Ok(bits)
}

/// Hyperfield criterion for a candidate positive support `s` in `V_d`.
///
/// For a support of degree exactly `d` every form must evaluate to `H`;
/// otherwise each form only has to vanish.
pub fn hyperfield_excludes(s: &BTreeSet<Coord>, d: u32) -> Result<ExclusionVerdict> {
    if s.contains(&Coord::ORIGIN) {
        return Err(Error::Parameters("candidate support must not contain the origin".into()));
    }
    let table = SignFormTable::new(d);
    hyperfield_excludes_with(&table, s)
}

pub fn hyperfield_excludes_with(table: &SignFormTable, s: &BTreeSet<Coord>) -> Result<ExclusionVerdict> {
    let bits = support_bits(s, table.d)?;
    let strict = s.iter().any(|c| c.deg() == table.d);
    Ok(match table.first_violation(&bits, strict) {
        Some((kind, value)) => ExclusionVerdict::Excluded(Certificate::Hyperfield { form: form_name(kind), value }),
        None => ExclusionVerdict::Inconclusive,
    })
}
