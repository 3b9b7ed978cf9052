//! One-dimensional discrete models of ML degree one in monomial form
//! `t -> (w_v t^i_v (1-t)^j_v)_v`, their outcomes, composites and
//! decomposition into fundamental models.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::grid::{ChipConfiguration, Coord, RationalConfiguration};
use crate::pascal::{binomial, is_outcome, outcome_space};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Dense polynomial in `t` with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    pub fn constant(c: BigRational) -> Self {
        Poly(vec![c]).trimmed()
    }

    /// `c t^i (1-t)^j`, expanded.
    pub fn monomial(c: &BigRational, i: u32, j: u32) -> Self {
        let mut v = vec![BigRational::zero(); (i + j + 1) as usize];
        for k in 0..=j {
            let b = BigRational::from_integer(binomial(j as i64, k as i64));
            let term = if k % 2 == 0 { b } else { -b };
            v[(i + k) as usize] = c * term;
        }
        Poly(v).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let z = BigRational::zero();
        Poly((0..n).map(|k| self.0.get(k).unwrap_or(&z) + other.0.get(k).unwrap_or(&z)).collect()).trimmed()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly(self.0.iter().map(|x| x * c).collect()).trimmed()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly::default();
        }
        let mut v = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (a, x) in self.0.iter().enumerate() {
            for (b, y) in other.0.iter().enumerate() {
                v[a + b] += x * y;
            }
        }
        Poly(v).trimmed()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Term {
    pub weight: BigRational,
    pub i: u32,
    pub j: u32,
}

impl Term {
    pub fn new(weight: BigRational, i: u32, j: u32) -> Self {
        Term { weight, i, j }
    }

    pub fn exponent(&self) -> Coord {
        Coord::new(self.i, self.j)
    }
}

/// Σ w t^i (1-t)^j for a list of terms.
pub fn term_polynomial(terms: &[Term]) -> Poly {
    terms.iter().fold(Poly::default(), |acc, t| acc.add(&Poly::monomial(&t.weight, t.i, t.j)))
}

/// True iff all weights are positive and the coordinates sum to one.
pub fn verify_model(terms: &[Term]) -> bool {
    terms.iter().all(|t| t.weight.is_positive()) && term_polynomial(terms) == Poly::constant(BigRational::one())
}

/// A parametrized model; terms keep their order, equality ignores it.
#[derive(Clone, Debug)]
pub struct ParametricModel {
    terms: Vec<Term>,
}

impl ParametricModel {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::NotAModel("no terms".into()));
        }
        if let Some(t) = terms.iter().find(|t| !t.weight.is_positive()) {
            return Err(Error::NotAModel(format!("weight {} at ({}, {}) is not positive", t.weight, t.i, t.j)));
        }
        if !verify_model(&terms) {
            return Err(Error::NotAModel("coordinates do not sum to 1".into()));
        }
        Ok(ParametricModel { terms })
    }

    /// Shorthand for small examples: `(numerator, denominator, i, j)`.
    pub fn from_quads(q: &[(i64, i64, u32, u32)]) -> Result<Self> {
        Self::new(
            q.iter()
                .map(|&(n, d, i, j)| Term::new(BigRational::new(BigInt::from(n), BigInt::from(d)), i, j))
                .collect(),
        )
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// The number `n` with the model living in `Δ_n`.
    pub fn n(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.i + t.j).max().unwrap_or(0)
    }

    pub fn exponents(&self) -> BTreeSet<Coord> {
        self.terms.iter().map(Term::exponent).collect()
    }

    pub fn is_reduced(&self) -> bool {
        let ex = self.exponents();
        ex.len() == self.terms.len() && !ex.contains(&Coord::ORIGIN)
    }

    /// Terms sorted by exponent in canonical grid order.
    pub fn canonical(&self) -> Vec<Term> {
        let mut v = self.terms.clone();
        v.sort_by(|a, b| a.exponent().cmp(&b.exponent()).then_with(|| a.weight.cmp(&b.weight)));
        v
    }

    pub fn weight_at(&self, c: Coord) -> BigRational {
        self.terms.iter().filter(|t| t.exponent() == c).map(|t| t.weight.clone()).sum()
    }

    pub fn to_json(&self) -> Json {
        let num = |x: &BigInt| x.to_i64().map(Json::from).unwrap_or_else(|| Json::String(x.to_string()));
        let terms: Vec<Json> =
            self.terms.iter().map(|t| json!([num(t.weight.numer()), num(t.weight.denom()), t.i, t.j])).collect();
        json!({ "terms": terms })
    }

    pub fn from_json(v: &Json) -> Result<Self> {
        let bad = |m: String| Error::Parse { line: 0, msg: m };
        let arr = v.get("terms").and_then(Json::as_array).ok_or_else(|| bad("missing field terms".into()))?;
        let int = |x: &Json, what: &str, k: usize| -> Result<BigInt> {
            match x {
                Json::Number(n) => n.as_i64().map(BigInt::from),
                Json::String(s) => s.parse().ok(),
                _ => None,
            }
            .ok_or_else(|| bad(format!("terms[{k}].{what}")))
        };
        let mut terms = Vec::new();
        for (k, t) in arr.iter().enumerate() {
            let t = t.as_array().filter(|t| t.len() == 4).ok_or_else(|| bad(format!("terms[{k}] needs 4 fields")))?;
            let den = int(&t[1], "den", k)?;
            if den.is_zero() {
                return Err(bad(format!("terms[{k}].den is zero")));
            }
            let exp = |x: &Json, what: &str| x.as_u64().map(|e| e as u32).ok_or_else(|| bad(format!("terms[{k}].{what}")));
            terms.push(Term::new(BigRational::new(int(&t[0], "num", k)?, den), exp(&t[2], "i")?, exp(&t[3], "j")?));
        }
        Self::new(terms)
    }

    /// Human-readable parametrization such as `t -> (t^2, 2 t (1-t), (1-t)^2)`.
    pub fn formula(&self) -> String {
        let parts: Vec<String> = self.terms.iter().map(format_term).collect();
        format!("t -> ({})", parts.join(", "))
    }
}

fn format_term(t: &Term) -> String {
    let mut factors = Vec::new();
    if !t.weight.is_one() {
        factors.push(t.weight.to_string());
    }
    match t.i {
        0 => {}
        1 => factors.push("t".into()),
        i => factors.push(format!("t^{i}")),
    }
    match t.j {
        0 => {}
        1 => factors.push("(1-t)".into()),
        j => factors.push(format!("(1-t)^{j}")),
    }
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join(" ")
    }
}

impl PartialEq for ParametricModel {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Eq for ParametricModel {}

impl fmt::Display for ParametricModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.formula())
    }
}

/// The outcome with `-1` at the origin and the weights at the exponents.
pub fn model_to_outcome(m: &ParametricModel) -> Result<RationalConfiguration> {
    if !m.is_reduced() {
        return Err(Error::NotAModel("model is not reduced".into()));
    }
    let mut entries = vec![(Coord::ORIGIN, rat(-1))];
    entries.extend(m.terms.iter().map(|t| (t.exponent(), t.weight.clone())));
    RationalConfiguration::from_entries(entries, Some(m.degree()))
}

/// Inverse of [`model_to_outcome`] after rescaling the origin entry to `-1`.
pub fn outcome_to_model(w: &RationalConfiguration) -> Result<ParametricModel> {
    let origin = w.get(Coord::ORIGIN);
    if !origin.is_negative() {
        return Err(Error::NotAModel("origin entry must be negative".into()));
    }
    if !w.is_valid() {
        return Err(Error::NotAModel("outcome is not valid".into()));
    }
    let d = w.degree().max(0) as u32;
    if !is_outcome(w, d)? {
        return Err(Error::NotAModel("configuration is not an outcome".into()));
    }
    let scale = -origin.recip();
    let terms = w
        .iter()
        .filter(|(c, _)| **c != Coord::ORIGIN)
        .map(|(c, v)| Term::new(v * &scale, c.i, c.j))
        .collect();
    ParametricModel::new(terms)
}

pub fn integral_outcome_to_model(w: &ChipConfiguration) -> Result<ParametricModel> {
    outcome_to_model(&w.to_rational())
}

/// One linear embedding `Δ_{n-1} -> Δ_n`; positions index the larger model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbeddingStep {
    /// Inserts the constant coordinate `1 - λ` at `position` and scales the
    /// others by `λ`.
    Constant { position: usize, lambda: BigRational },
    /// Splits the coordinate that ends up at `kept` into `λ p` there and
    /// `(1 - λ) p` inserted at `inserted`.
    Split { kept: usize, inserted: usize, lambda: BigRational },
}

impl EmbeddingStep {
    pub fn lambda(&self) -> &BigRational {
        match self {
            EmbeddingStep::Constant { lambda, .. } | EmbeddingStep::Split { lambda, .. } => lambda,
        }
    }

    /// Maps the terms of a model in `Δ_{n-1}` to `Δ_n`.
    pub fn apply(&self, terms: &[Term]) -> Vec<Term> {
        match self {
            EmbeddingStep::Constant { position, lambda } => {
                let mut out: Vec<Term> =
                    terms.iter().map(|t| Term::new(&t.weight * lambda, t.i, t.j)).collect();
                out.insert(*position, Term::new(BigRational::one() - lambda, 0, 0));
                out
            }
            EmbeddingStep::Split { kept, inserted, lambda } => {
                let src = if kept < inserted { *kept } else { kept - 1 };
                let t = &terms[src];
                let mut out = terms.to_vec();
                out[src] = Term::new(&t.weight * lambda, t.i, t.j);
                out.insert(*inserted, Term::new(&t.weight * (BigRational::one() - lambda), t.i, t.j));
                out
            }
        }
    }
}

/// Strips constant coordinates and merges repeated exponents. The returned
/// steps are in stripping order; replaying them in reverse rebuilds `terms`.
pub fn reduce_model(terms: &[Term]) -> Result<(ParametricModel, Vec<EmbeddingStep>)> {
    if !verify_model(terms) {
        return Err(Error::NotAModel("input terms do not define a model".into()));
    }
    let mut cur = terms.to_vec();
    let mut steps = Vec::new();
    loop {
        if let Some(nu) = cur.iter().position(|t| t.i == 0 && t.j == 0) {
            let w = cur.remove(nu).weight;
            let lambda = BigRational::one() - &w;
            for t in cur.iter_mut() {
                t.weight = &t.weight / &lambda;
            }
            steps.push(EmbeddingStep::Constant { position: nu, lambda });
            continue;
        }
        let dup = (0..cur.len())
            .flat_map(|a| (a + 1..cur.len()).map(move |b| (a, b)))
            .find(|&(a, b)| cur[a].exponent() == cur[b].exponent());
        if let Some((nu, mu)) = dup {
            let lambda = &cur[nu].weight / (&cur[nu].weight + &cur[mu].weight);
            let merged = cur.remove(mu);
            cur[nu].weight += merged.weight;
            steps.push(EmbeddingStep::Split { kept: nu, inserted: mu, lambda });
            continue;
        }
        break;
    }
    Ok((ParametricModel::new(cur)?, steps))
}

/// Rebuilds the original term list from the output of [`reduce_model`].
pub fn expand_model(reduced: &ParametricModel, steps: &[EmbeddingStep]) -> Vec<Term> {
    steps.iter().rev().fold(reduced.terms.clone(), |acc, s| s.apply(&acc))
}

/// `μ m1 + (1 - μ) m2` on the union of the exponent sets.
pub fn composite(m1: &ParametricModel, m2: &ParametricModel, mu: &BigRational) -> Result<ParametricModel> {
    if !mu.is_positive() || *mu >= BigRational::one() {
        return Err(Error::Parameters(format!("composite weight {mu} outside (0, 1)")));
    }
    if !m1.is_reduced() || !m2.is_reduced() {
        return Err(Error::NotAModel("composite needs reduced models".into()));
    }
    let nu = BigRational::one() - mu;
    let mut acc: BTreeMap<Coord, BigRational> = BTreeMap::new();
    for t in &m1.terms {
        *acc.entry(t.exponent()).or_insert_with(BigRational::zero) += mu * &t.weight;
    }
    for t in &m2.terms {
        *acc.entry(t.exponent()).or_insert_with(BigRational::zero) += &nu * &t.weight;
    }
    ParametricModel::new(acc.into_iter().map(|(c, w)| Term::new(w, c.i, c.j)).collect())
}

/// A right-associated chain `F_1 *_{μ_1} (F_2 *_{μ_2} (... F_k))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub leaves: Vec<ParametricModel>,
    pub mus: Vec<BigRational>,
}

impl Decomposition {
    pub fn fold(&self) -> Result<ParametricModel> {
        let mut it = self.leaves.iter().rev();
        let mut acc = it.next().ok_or_else(|| Error::NotAModel("empty decomposition".into()))?.clone();
        for (leaf, mu) in it.zip(self.mus.iter().rev()) {
            acc = composite(leaf, &acc, mu)?;
        }
        Ok(acc)
    }
}

fn model_from_map(w: &BTreeMap<Coord, BigRational>) -> Result<ParametricModel> {
    ParametricModel::new(w.iter().filter(|(_, v)| !v.is_zero()).map(|(c, v)| Term::new(v.clone(), c.i, c.j)).collect())
}

/// Splits a model into a convex combination of two models with strictly
/// smaller supports, or returns `None` if the weights are unique.
fn split_once(m: &ParametricModel) -> Result<Option<(BigRational, ParametricModel, ParametricModel)>> {
    let support = m.exponents();
    let kernel = outcome_space(&support, m.degree())?;
    let Some(x) = kernel.first() else {
        return Ok(None);
    };
    let mut x = x.to_rational();
    if !x.iter().any(|(_, v)| v.is_negative()) {
        x = x.neg();
    }
    let w: BTreeMap<Coord, BigRational> = m.terms.iter().map(|t| (t.exponent(), t.weight.clone())).collect();
    let lambda = x
        .iter()
        .filter(|(_, v)| v.is_negative())
        .map(|(c, v)| &w[c] / v.abs())
        .min()
        .expect("kernel vector has a negative entry");
    let u: BTreeMap<Coord, BigRational> = w.iter().map(|(c, wv)| (*c, wv + &lambda * x.get(*c))).collect();
    let mu = u
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| &w[c] / v)
        .min()
        .expect("u is a model");
    let rest = BigRational::one() - &mu;
    let v: BTreeMap<Coord, BigRational> = w.iter().map(|(c, wv)| (*c, (wv - &mu * &u[c]) / &rest)).collect();
    Ok(Some((mu, model_from_map(&u)?, model_from_map(&v)?)))
}

fn flatten(m: &ParametricModel, coeff: BigRational, out: &mut Vec<(BigRational, ParametricModel)>) -> Result<()> {
    match split_once(m)? {
        None => {
            match out.iter_mut().find(|(_, f)| f == m) {
                Some((c, _)) => *c += coeff,
                None => out.push((coeff, m.clone())),
            }
            Ok(())
        }
        Some((mu, u, v)) => {
            flatten(&u, &coeff * &mu, out)?;
            flatten(&v, &coeff * (BigRational::one() - &mu), out)
        }
    }
}

/// Writes a reduced model as a composite of fundamental models.
pub fn decompose(m: &ParametricModel) -> Result<Decomposition> {
    if !m.is_reduced() {
        return Err(Error::NotAModel("decompose needs a reduced model".into()));
    }
    let mut flat = Vec::new();
    flatten(m, BigRational::one(), &mut flat)?;
    let mut remaining = BigRational::one();
    let mut mus = Vec::new();
    for (c, _) in &flat[..flat.len() - 1] {
        mus.push(c / &remaining);
        remaining -= c;
    }
    Ok(Decomposition { leaves: flat.into_iter().map(|(_, f)| f).collect(), mus })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalVerdict {
    pub fundamental: bool,
    pub outcome: Option<ChipConfiguration>,
    pub model: Option<ParametricModel>,
}

/// The primitive integral fundamental outcome with positive support `s`, if any.
pub fn fundamental_outcome(s: &BTreeSet<Coord>, d: u32) -> Result<Option<ChipConfiguration>> {
    if s.contains(&Coord::ORIGIN) {
        return Err(Error::Parameters("exponent set must not contain the origin".into()));
    }
    let mut full = s.clone();
    full.insert(Coord::ORIGIN);
    let space = outcome_space(&full, d)?;
    if space.len() != 1 {
        return Ok(None);
    }
    let w = &space[0];
    let a = w.analyze()?;
    let ok = w.get(Coord::ORIGIN).is_negative() && a.is_valid && a.supp_plus == *s;
    Ok(ok.then(|| w.clone()))
}

pub fn is_fundamental(s: &BTreeSet<Coord>, d: u32) -> Result<FundamentalVerdict> {
    Ok(match fundamental_outcome(s, d)? {
        Some(w) => {
            let model = integral_outcome_to_model(&w)?;
            FundamentalVerdict { fundamental: true, outcome: Some(w), model: Some(model) }
        }
        None => FundamentalVerdict { fundamental: false, outcome: None, model: None },
    })
}

/// The integer `(2k+1) / (2i+1) * binom(k+i, 2i)`.
pub fn family_weight(k: u32, i: u32) -> Result<BigInt> {
    use num_integer::Integer;
    let num = BigInt::from(2 * k + 1) * binomial((k + i) as i64, (2 * i) as i64);
    let (q, r) = num.div_rem(&BigInt::from(2 * i + 1));
    if !r.is_zero() {
        return Err(Error::Consistency(format!("weight for k = {k}, i = {i} is not integral")));
    }
    Ok(q)
}

/// Summand `F(k, i) = (2k+1)/(2i+1) binom(k+i, 2i) t^(k-i) (1-t)^(2i+1)`,
/// zero outside `0 <= i <= k`.
pub fn family_summand(k: i64, i: i64) -> Poly {
    if k < 0 || i < 0 || i > k {
        return Poly::default();
    }
    let c = BigRational::new(BigInt::from(2 * k + 1) * binomial(k + i, 2 * i), BigInt::from(2 * i + 1));
    Poly::monomial(&c, (k - i) as u32, (2 * i + 1) as u32)
}

/// `t^(2k+1) + Σ_i F(k, i)`, which should be the constant 1.
pub fn family_identity(k: u32) -> Poly {
    let k = k as i64;
    (0..=k).fold(Poly::monomial(&BigRational::one(), (2 * k + 1) as u32, 0), |acc, i| acc.add(&family_summand(k, i)))
}

/// `t^2 F(k-1, i) - (1-t)^2 F(k, i-1) - 2t F(k, i) + F(k+1, i)`.
pub fn family_recurrence(k: i64, i: i64) -> Poly {
    let t2 = Poly::monomial(&BigRational::one(), 2, 0);
    let s2 = Poly::monomial(&BigRational::one(), 0, 2);
    let t = Poly::monomial(&rat(2), 1, 0);
    t2.mul(&family_summand(k - 1, i))
        .sub(&s2.mul(&family_summand(k, i - 1)))
        .sub(&t.mul(&family_summand(k, i)))
        .add(&family_summand(k + 1, i))
}

/// The valid outcome of degree `2k+1` with `k+2` positive entries.
pub fn tightness_family(k: u32) -> Result<ChipConfiguration> {
    let identity = family_identity(k);
    if identity != Poly::constant(BigRational::one()) {
        return Err(Error::Consistency(format!("family identity fails at k = {k}")));
    }
    let mut entries = vec![(Coord::ORIGIN, BigInt::from(-1)), (Coord::new(2 * k + 1, 0), BigInt::one())];
    for i in 0..=k {
        entries.push((Coord::new(k - i, 2 * i + 1), family_weight(k, i)?));
    }
    let w = ChipConfiguration::from_entries(entries, Some(2 * k + 1))?;
    if !is_outcome(&w, 2 * k + 1)? {
        return Err(Error::Consistency(format!("family member k = {k} is not an outcome")));
    }
    Ok(w)
}
