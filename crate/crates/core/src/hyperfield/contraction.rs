//! Contraction of sign configurations onto the four-wide outer ring.
//!
//! Coordinates of the contracted space, in storage order:
//! `x[i][j]` (corner at the origin), `y[i][j]` (top corner), `z[i][j]`
//! (right corner), `c[i]` (column strips), `b[j]` (row strips), and the
//! diagonal strips `d0[k]`, `d1[k]` split by the parity of `i`. The merged
//! space replaces the last two families by `d[k]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::grid::{triangle, Coord, Perm};
use crate::hyperfield::sign::{HyperSum, Sign, SignConfiguration, SignForm};
use crate::pascal::FormKind;

pub const XI_LEN: usize = 64;
pub const XI_MERGED_LEN: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum XiCoord {
    X(u8, u8),
    Y(u8, u8),
    Z(u8, u8),
    C(u8),
    B(u8),
    D0(u8),
    D1(u8),
    D(u8),
}

impl XiCoord {
    pub fn index(self) -> usize {
        match self {
            XiCoord::X(i, j) => (4 * i + j) as usize,
            XiCoord::Y(i, j) => 16 + (4 * i + j) as usize,
            XiCoord::Z(i, j) => 32 + (4 * i + j) as usize,
            XiCoord::C(i) => 48 + i as usize,
            XiCoord::B(j) => 52 + j as usize,
            XiCoord::D0(k) | XiCoord::D(k) => 56 + k as usize,
            XiCoord::D1(k) => 60 + k as usize,
        }
    }

    pub fn from_index(idx: usize, merged: bool) -> XiCoord {
        let (q, r) = ((idx % 16 / 4) as u8, (idx % 4) as u8);
        match idx {
            0..=15 => XiCoord::X(q, r),
            16..=31 => XiCoord::Y(q, r),
            32..=47 => XiCoord::Z(q, r),
            48..=51 => XiCoord::C(r),
            52..=55 => XiCoord::B(r),
            56..=59 if merged => XiCoord::D(r),
            56..=59 => XiCoord::D0(r),
            _ => XiCoord::D1(r),
        }
    }

    pub fn merge(self) -> XiCoord {
        match self {
            XiCoord::D0(k) | XiCoord::D1(k) => XiCoord::D(k),
            other => other,
        }
    }

    pub fn is_strip(self) -> bool {
        matches!(self, XiCoord::C(_) | XiCoord::B(_) | XiCoord::D0(_) | XiCoord::D1(_) | XiCoord::D(_))
    }

    pub fn name(self) -> String {
        match self {
            XiCoord::X(i, j) => format!("x{i}{j}"),
            XiCoord::Y(i, j) => format!("y{i}{j}"),
            XiCoord::Z(i, j) => format!("z{i}{j}"),
            XiCoord::C(i) => format!("c{i}"),
            XiCoord::B(j) => format!("b{j}"),
            XiCoord::D0(k) => format!("d0_{k}"),
            XiCoord::D1(k) => format!("d1_{k}"),
            XiCoord::D(k) => format!("d{k}"),
        }
    }

    pub fn parse(name: &str) -> Option<XiCoord> {
        let digits: Vec<u8> = name.chars().filter_map(|c| c.to_digit(10)).map(|x| x as u8).collect();
        if digits.iter().any(|&x| x > 3) {
            return None;
        }
        match (name.chars().next()?, digits.as_slice()) {
            ('x', [i, j]) if name.len() == 3 => Some(XiCoord::X(*i, *j)),
            ('y', [i, j]) if name.len() == 3 => Some(XiCoord::Y(*i, *j)),
            ('z', [i, j]) if name.len() == 3 => Some(XiCoord::Z(*i, *j)),
            ('c', [i]) if name.len() == 2 => Some(XiCoord::C(*i)),
            ('b', [j]) if name.len() == 2 => Some(XiCoord::B(*j)),
            ('d', [k]) if name.len() == 2 => Some(XiCoord::D(*k)),
            ('d', [0, k]) if name.starts_with("d0_") => Some(XiCoord::D0(*k)),
            ('d', [1, k]) if name.starts_with("d1_") => Some(XiCoord::D1(*k)),
            _ => None,
        }
    }
}

impl fmt::Display for XiCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// The coordinate a grid point contributes to, or `None` for interior points.
pub fn xi_coord_of(c: Coord, d: u32) -> Option<XiCoord> {
    let (i, j, e) = (c.i, c.j, c.deg());
    let top = e + 3 >= d;
    let t = |x: u32| x as u8;
    if i <= 3 && j <= 3 {
        Some(XiCoord::X(t(i), t(j)))
    } else if i <= 3 && top {
        Some(XiCoord::Y(t(i), t(e + 3 - d)))
    } else if j <= 3 && top {
        Some(XiCoord::Z(t(e + 3 - d), t(j)))
    } else if i <= 3 {
        Some(XiCoord::C(t(i)))
    } else if j <= 3 {
        Some(XiCoord::B(t(j)))
    } else if top {
        let k = t(d - e);
        Some(if i % 2 == 0 { XiCoord::D0(k) } else { XiCoord::D1(k) })
    } else {
        None
    }
}

/// A point of the contracted space, unmerged (64 coordinates) or merged (60).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContractionPoint {
    vals: Vec<i8>,
}

impl fmt::Debug for ContractionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg: Vec<String> = self.supp_minus().iter().map(|c| c.name()).collect();
        let pos: Vec<String> = self.supp_plus().iter().map(|c| c.name()).collect();
        write!(f, "θ(-{{{}}} +{{{}}})", neg.join(","), pos.join(","))
    }
}

impl ContractionPoint {
    pub fn zero(merged: bool) -> Self {
        ContractionPoint { vals: vec![0; if merged { XI_MERGED_LEN } else { XI_LEN }] }
    }

    /// The valid point with `-1` at `x00` and `+1` on the coordinates in `mask`.
    pub fn from_mask(mask: u64, merged: bool) -> Self {
        let mut p = Self::zero(merged);
        p.vals[0] = -1;
        for k in 1..p.vals.len() {
            if mask >> k & 1 == 1 {
                p.vals[k] = 1;
            }
        }
        p
    }

    pub fn is_merged(&self) -> bool {
        self.vals.len() == XI_MERGED_LEN
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.iter().all(|&v| v == 0)
    }

    pub fn get(&self, c: XiCoord) -> Sign {
        Sign::from_i8(self.vals[c.index()])
    }

    pub fn set(&mut self, c: XiCoord, s: Sign) {
        self.vals[c.index()] = s.to_i8();
    }

    pub fn value(&self, idx: usize) -> i8 {
        self.vals[idx]
    }

    pub fn coords(&self) -> impl Iterator<Item = XiCoord> + '_ {
        let merged = self.is_merged();
        (0..self.vals.len()).map(move |k| XiCoord::from_index(k, merged))
    }

    pub fn supp_plus(&self) -> Vec<XiCoord> {
        self.coords().filter(|c| self.vals[c.index()] > 0).collect()
    }

    pub fn supp_minus(&self) -> Vec<XiCoord> {
        self.coords().filter(|c| self.vals[c.index()] < 0).collect()
    }

    pub fn positive_mask(&self) -> u64 {
        self.vals.iter().enumerate().filter(|(_, &v)| v > 0).fold(0u64, |m, (k, _)| m | 1 << k)
    }

    pub fn is_valid(&self) -> bool {
        self.is_empty() || (self.vals[0] == -1 && self.vals[1..].iter().all(|&v| v >= 0))
    }

    pub fn is_weakly_valid(&self) -> bool {
        self.vals[48..].iter().all(|&v| v >= 0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<String, i8> = self.coords().filter(|c| self.vals[c.index()] != 0).map(|c| (c.name(), self.vals[c.index()])).collect();
        json!({ "merged": self.is_merged(), "values": map })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse { line: 0, msg: m.to_string() };
        let merged = v.get("merged").and_then(|m| m.as_bool()).ok_or_else(|| bad("field merged"))?;
        let mut p = Self::zero(merged);
        let values = v.get("values").and_then(|m| m.as_object()).ok_or_else(|| bad("field values"))?;
        for (k, val) in values {
            let c = XiCoord::parse(k).ok_or_else(|| bad(&format!("coordinate {k}")))?;
            if merged != matches!(c, XiCoord::D(_)) && matches!(c, XiCoord::D(_) | XiCoord::D0(_) | XiCoord::D1(_)) {
                return Err(bad(&format!("coordinate {k} does not match the layout")));
            }
            let x = val.as_i64().filter(|x| (-1..=1).contains(x)).ok_or_else(|| bad("sign value"))?;
            p.vals[c.index()] = x as i8;
        }
        Ok(p)
    }
}

/// Contracts a weakly valid sign configuration on `V_d`, `d >= 11`.
pub fn contract(s: &SignConfiguration, d: u32) -> Result<ContractionPoint> {
    if d < 11 || s.d() != d {
        return Err(Error::Parameters(format!("contraction needs d >= 11 matching the configuration; got {d}")));
    }
    if !s.is_weakly_valid() {
        return Err(Error::NotWeaklyValid(d));
    }
    let mut p = ContractionPoint::zero(false);
    for (c, v) in s.iter() {
        if v == Sign::Zero {
            continue;
        }
        if let Some(x) = xi_coord_of(c, d) {
            let k = x.index();
            p.vals[k] = if x.is_strip() { p.vals[k].max(v.to_i8()) } else { v.to_i8() };
        }
    }
    Ok(p)
}

/// Merges the two diagonal-strip families.
pub fn chi(theta: &ContractionPoint) -> Result<ContractionPoint> {
    if theta.is_merged() {
        return Err(Error::Parameters("point is already merged".into()));
    }
    if !theta.is_weakly_valid() {
        return Err(Error::Parameters("merging needs a weakly valid point".into()));
    }
    let mut out = ContractionPoint { vals: theta.vals[..XI_MERGED_LEN].to_vec() };
    for k in 0..4 {
        out.vals[56 + k] = theta.vals[56 + k].max(theta.vals[60 + k]);
    }
    Ok(out)
}

/// Merged coordinates met by a set of grid points; `None` if a point is interior.
pub fn merged_support(pts: &BTreeSet<Coord>, d: u32) -> Option<BTreeSet<XiCoord>> {
    pts.iter().map(|c| xi_coord_of(*c, d).map(XiCoord::merge)).collect()
}

/// Permutation of the merged coordinates induced by `sigma`.
pub fn merged_coord_action(sigma: Perm, c: XiCoord) -> XiCoord {
    use XiCoord::*;
    let t12 = |c: XiCoord| match c {
        X(i, j) => X(j, i),
        Y(i, j) => Z(j, i),
        Z(i, j) => Y(j, i),
        C(i) => B(i),
        B(j) => C(j),
        other => other,
    };
    let t13 = |c: XiCoord| match c {
        X(i, j) => Z(3 - i, j),
        Y(i, j) => Y(3 - j, 3 - i),
        Z(i, j) => X(3 - i, j),
        C(i) => D(i),
        D(k) => C(k),
        other => other,
    };
    match sigma {
        Perm::Id => c,
        Perm::T12 => t12(c),
        Perm::T13 => t13(c),
        Perm::T23 => t12(t13(t12(c))),
        Perm::C123 => t13(t12(c)),
        Perm::C132 => t12(t13(c)),
    }
}

/// The S3 action on merged points, permuting coordinates.
pub fn s3_on_contraction(sigma: Perm, theta: &ContractionPoint) -> Result<ContractionPoint> {
    if !theta.is_merged() {
        return Err(Error::Parameters("the symmetric action is defined on merged points".into()));
    }
    let mut out = ContractionPoint::zero(true);
    for c in theta.coords() {
        out.vals[merged_coord_action(sigma, c).index()] = theta.vals[c.index()];
    }
    Ok(out)
}

/// The twenty forms of the outer-ring family, labelled relative to `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingForm {
    Psi(u32),
    PsiBar(u32),
    /// `psi_{d - m}`
    PsiTop(u32),
    /// `psibar_{d - m}`
    PsiBarTop(u32),
    /// `phi_{a, d - a}`
    PhiLeft(u32),
    /// `phi_{d - b, b}`
    PhiRight(u32),
}

impl RingForm {
    pub fn all() -> Vec<RingForm> {
        let mut v = Vec::with_capacity(20);
        for k in 1..=3 {
            v.push(RingForm::Psi(k));
        }
        for k in 1..=3 {
            v.push(RingForm::PsiBar(k));
        }
        for a in 1..=3 {
            v.push(RingForm::PhiLeft(a));
        }
        for b in 1..=3 {
            v.push(RingForm::PhiRight(b));
        }
        for m in 0..=3 {
            v.push(RingForm::PsiTop(m));
        }
        for m in 0..=3 {
            v.push(RingForm::PsiBarTop(m));
        }
        v
    }

    pub fn at(self, d: u32) -> FormKind {
        match self {
            RingForm::Psi(k) => FormKind::Psi(k),
            RingForm::PsiBar(k) => FormKind::PsiBar(k),
            RingForm::PsiTop(m) => FormKind::Psi(d - m),
            RingForm::PsiBarTop(m) => FormKind::PsiBar(d - m),
            RingForm::PhiLeft(a) => FormKind::Phi(a, d - a),
            RingForm::PhiRight(b) => FormKind::Phi(d - b, b),
        }
    }

    pub fn name(self) -> String {
        match self {
            RingForm::Psi(k) => format!("psi_{k}"),
            RingForm::PsiBar(k) => format!("psibar_{k}"),
            RingForm::PsiTop(0) => "psi_d".into(),
            RingForm::PsiTop(m) => format!("psi_d-{m}"),
            RingForm::PsiBarTop(0) => "psibar_d".into(),
            RingForm::PsiBarTop(m) => format!("psibar_d-{m}"),
            RingForm::PhiLeft(a) => format!("phi_{a},d-{a}"),
            RingForm::PhiRight(b) => format!("phi_d-{b},{b}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn reference_degree(self) -> u32 {
        match self {
            Parity::Even => 16,
            Parity::Odd => 17,
        }
    }

    pub fn of(d: u32) -> Parity {
        if d % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// A sign-coefficient linear form on the unmerged contracted space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractedForm {
    pub label: RingForm,
    pub coeffs: Vec<i8>,
}

impl ContractedForm {
    pub fn coeff(&self, c: XiCoord) -> i8 {
        self.coeffs[c.index()]
    }

    pub fn eval(&self, theta: &ContractionPoint) -> HyperSum {
        self.coeffs
            .iter()
            .zip(theta.vals.iter())
            .fold(HyperSum::Zero, |acc, (&a, &b)| acc + Sign::from_i8(a * b))
    }

    /// Positive- and negative-coefficient coordinate masks.
    pub fn masks(&self) -> (u64, u64) {
        let mut p = 0u64;
        let mut n = 0u64;
        for (k, &a) in self.coeffs.iter().enumerate() {
            if a > 0 {
                p |= 1 << k;
            } else if a < 0 {
                n |= 1 << k;
            }
        }
        (p, n)
    }
}

/// Reads off the contracted forms from the sign images at degree `d`,
/// checking that each coordinate sees a constant coefficient and that
/// interior points carry none.
pub fn contracted_forms_at(d: u32) -> Result<Vec<ContractedForm>> {
    if d < 12 {
        return Err(Error::Parameters(format!("reference degree {d} is below 12")));
    }
    let mut out = Vec::with_capacity(20);
    for label in RingForm::all() {
        let f = SignForm::new(label.at(d), d)?;
        let mut coeffs: Vec<Option<i8>> = vec![None; XI_LEN];
        for c in triangle(d) {
            let v = f.coeff(c).to_i8();
            match xi_coord_of(c, d) {
                None if v != 0 => {
                    return Err(Error::Consistency(format!("{} is nonzero at interior point {c}", label.name())));
                }
                None => {}
                Some(x) => {
                    let slot = &mut coeffs[x.index()];
                    match slot {
                        None => *slot = Some(v),
                        Some(prev) if *prev != v => {
                            return Err(Error::Consistency(format!(
                                "{} is not constant on {} at d = {d}",
                                label.name(),
                                x.name()
                            )));
                        }
                        _ => {}
                    }
                }
            }
        }
        out.push(ContractedForm { label, coeffs: coeffs.into_iter().map(|v| v.unwrap_or(0)).collect() });
    }
    Ok(out)
}

/// The twenty contracted forms for one parity, derived at the reference
/// degree and checked to agree two degrees higher.
pub fn contracted_forms(parity: Parity) -> Result<Vec<ContractedForm>> {
    let d = parity.reference_degree();
    let a = contracted_forms_at(d)?;
    let b = contracted_forms_at(d + 2)?;
    if a != b {
        return Err(Error::Consistency(format!("{} forms differ between d = {d} and d = {}", parity.name(), d + 2)));
    }
    Ok(a)
}

/// All valid unmerged points with exactly `size` positive coordinates at
/// which every contracted form of the given parity evaluates to `H`.
pub fn gamma_set(parity: Parity, size: usize) -> Result<Vec<ContractionPoint>> {
    let forms = contracted_forms(parity)?;
    Ok(gamma_masks(&forms, size).into_iter().map(|m| ContractionPoint::from_mask(m, false)).collect())
}

/// Positive masks (bits 1..63) passing every form, with `x00 = -1`.
pub fn gamma_masks(forms: &[ContractedForm], size: usize) -> Vec<u64> {
    // a form is H iff it sees a positive and a negative term; the origin
    // contributes the opposite sign of its coefficient
    let tests: Vec<(u64, u64, bool, bool)> = forms
        .iter()
        .map(|f| {
            let (p, n) = f.masks();
            (p & !1, n & !1, n & 1 == 1, p & 1 == 1)
        })
        .collect();
    let passes = |m: u64| {
        tests.iter().all(|&(p, n, pos0, neg0)| (pos0 || p & m != 0) && (neg0 || n & m != 0))
    };
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size).collect();
    if size == 0 {
        if passes(0) {
            out.push(0);
        }
        return out;
    }
    let universe = XI_LEN - 1;
    if size > universe {
        return out;
    }
    loop {
        let m = idx.iter().fold(0u64, |m, &k| m | 1 << (k + 1));
        if passes(m) {
            out.push(m);
        }
        if !crate::criteria::next_combination(&mut idx, universe) {
            break;
        }
    }
    out
}

/// The merged case list: images of the support-5 elements of both
/// parities, split into those that keep five positive coordinates and the rest.
#[derive(Clone, Debug)]
pub struct LambdaSet {
    pub cases: Vec<ContractionPoint>,
    pub exceptional: Vec<ContractionPoint>,
    /// Unmerged preimages of each exceptional point.
    pub exceptional_preimages: Vec<Vec<ContractionPoint>>,
}

pub fn lambda_set() -> Result<LambdaSet> {
    let mut images: BTreeMap<ContractionPoint, Vec<ContractionPoint>> = BTreeMap::new();
    for parity in [Parity::Even, Parity::Odd] {
        for theta in gamma_set(parity, 5)? {
            images.entry(chi(&theta)?).or_default().push(theta);
        }
    }
    let mut cases = Vec::new();
    let mut exceptional = Vec::new();
    let mut exceptional_preimages = Vec::new();
    for (img, pre) in images {
        if img.supp_plus().len() == 5 {
            cases.push(img);
        } else {
            exceptional.push(img);
            exceptional_preimages.push(pre);
        }
    }
    Ok(LambdaSet { cases, exceptional, exceptional_preimages })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_indices_roundtrip() {
        for k in 0..XI_LEN {
            let c = XiCoord::from_index(k, false);
            assert_eq!(c.index(), k);
            assert_eq!(XiCoord::parse(&c.name()), Some(c));
        }
        for k in 0..XI_MERGED_LEN {
            assert_eq!(XiCoord::from_index(k, true).index(), k);
        }
    }

    #[test]
    fn ring_partition_sizes() {
        let d = 16;
        let mut counts: BTreeMap<XiCoord, usize> = BTreeMap::new();
        for c in triangle(d) {
            if let Some(x) = xi_coord_of(c, d) {
                *counts.entry(x).or_default() += 1;
            }
        }
        assert_eq!(counts.len(), XI_LEN);
        assert_eq!(counts[&XiCoord::C(0)], d as usize - 7);
        assert_eq!(counts[&XiCoord::B(3)], d as usize - 10);
        assert_eq!(counts[&XiCoord::Y(0, 3)], 1);
    }

    #[test]
    fn phi_3_left_form() {
        let forms = contracted_forms(Parity::Even).unwrap();
        let f = forms.iter().find(|f| f.label == RingForm::PhiLeft(3)).unwrap();
        for c in (0..XI_LEN).map(|k| XiCoord::from_index(k, false)) {
            let expect = match c {
                XiCoord::X(..) | XiCoord::C(_) => 1,
                XiCoord::Y(i, j) if j <= i => 1,
                _ => 0,
            };
            assert_eq!(f.coeff(c), expect, "{c}");
        }
    }

    #[test]
    fn psi_top3_forms() {
        for parity in [Parity::Even, Parity::Odd] {
            let forms = contracted_forms(parity).unwrap();
            let f = forms.iter().find(|f| f.label == RingForm::PsiTop(3)).unwrap();
            let z_sign = if parity == Parity::Even { -1 } else { 1 };
            for c in (0..XI_LEN).map(|k| XiCoord::from_index(k, false)) {
                let alt = |n: u8| if n % 2 == 0 { 1 } else { -1 };
                let expect = match c {
                    XiCoord::Y(i, j) if j <= i => alt(i + j),
                    XiCoord::D0(k) => -alt(k),
                    XiCoord::D1(k) => -alt(1 + k),
                    XiCoord::Z(_, j) => z_sign * alt(j),
                    _ => 0,
                };
                assert_eq!(f.coeff(c), expect, "{} {c}", parity.name());
            }
        }
    }

    #[test]
    fn transposition_and_reflection_formulas() {
        use XiCoord::*;
        assert_eq!(merged_coord_action(Perm::T13, X(1, 2)), Z(2, 2));
        assert_eq!(merged_coord_action(Perm::T13, Y(0, 1)), Y(2, 3));
        assert_eq!(merged_coord_action(Perm::T13, C(2)), D(2));
        assert_eq!(merged_coord_action(Perm::T13, B(2)), B(2));
        assert_eq!(merged_coord_action(Perm::T12, Y(0, 1)), Z(1, 0));
    }

    #[test]
    fn support_action_commutes_with_grid_action() {
        for d in [14u32, 15] {
            let ring: Vec<Coord> = triangle(d).filter(|c| xi_coord_of(*c, d).is_some()).collect();
            for (n, &a) in ring.iter().enumerate().step_by(5) {
                let b = ring[(n * 7 + 3) % ring.len()];
                let pts: BTreeSet<Coord> = [Coord::ORIGIN, a, b].into();
                let base = merged_support(&pts, d).unwrap();
                for sigma in Perm::ALL {
                    let img: BTreeSet<Coord> = pts.iter().map(|c| sigma.act_point(*c, d)).collect();
                    let lhs: BTreeSet<XiCoord> = base.iter().map(|c| merged_coord_action(sigma, *c)).collect();
                    assert_eq!(merged_support(&img, d).unwrap(), lhs, "{sigma} at d = {d}");
                }
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let p = ContractionPoint::from_mask(0b1011_0000_0110, true);
        assert_eq!(ContractionPoint::from_json(&p.to_json()).unwrap(), p);
    }
}
