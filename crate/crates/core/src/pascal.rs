//! Pascal equations, retraction and outcome tests.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::grid::{triangle, triangle_size, ChipConfiguration, Configuration, Coord, Game, Value};
use crate::linalg::ExactMatrix;

/// `binom(n, k)` with the value 0 whenever `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    if n <= 100 {
        return BigInt::from(binomial_u128(n as u128, k as u128));
    }
    let mut r = BigInt::one();
    for t in 0..k {
        r = r * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    r
}

fn binomial_u128(n: u128, k: u128) -> u128 {
    let mut r: u128 = 1;
    for t in 0..k {
        r = r * (n - t) / (t + 1);
    }
    r
}

/// Small binomial coefficient as `i64`; callers guarantee it fits.
pub fn binomial_i64(n: i64, k: i64) -> i64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    binomial_u128(n as u128, k as u128) as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    Psi(u32),
    PsiBar(u32),
    Phi(u32, u32),
}

/// A linear form on `V_d` whose coefficients satisfy the Pascal recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PascalForm {
    d: u32,
    kind: FormKind,
    coeffs: Vec<BigInt>,
}

impl PascalForm {
    pub fn new(kind: FormKind, d: u32) -> Result<Self> {
        let f: Box<dyn Fn(Coord) -> BigInt> = match kind {
            FormKind::Psi(k) | FormKind::PsiBar(k) if k > d => {
                return Err(Error::Index(format!("form index {k} exceeds d = {d}")));
            }
            FormKind::Phi(a, b) if a + b != d => {
                return Err(Error::Index(format!("phi index ({a},{b}) must have degree {d}")));
            }
            FormKind::Psi(k) => Box::new(move |c| psi_coeff(k, c.i, c.j)),
            FormKind::PsiBar(k) => Box::new(move |c| psi_coeff(k, c.j, c.i)),
            FormKind::Phi(a, _) => {
                Box::new(move |c| binomial((d - c.deg()) as i64, a as i64 - c.i as i64))
            }
        };
        Ok(PascalForm { d, kind, coeffs: triangle(d).map(f).collect() })
    }

    pub fn psi(k: u32, d: u32) -> Result<Self> {
        Self::new(FormKind::Psi(k), d)
    }

    pub fn psi_bar(k: u32, d: u32) -> Result<Self> {
        Self::new(FormKind::PsiBar(k), d)
    }

    pub fn phi(a: u32, b: u32) -> Result<Self> {
        Self::new(FormKind::Phi(a, b), a + b)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn coeff(&self, c: Coord) -> &BigInt {
        &self.coeffs[c.index()]
    }

    pub fn satisfies_recurrence(&self) -> bool {
        triangle(self.d.saturating_sub(1)).filter(|_| self.d > 0).all(|c| {
            *self.coeff(c) == self.coeff(Coord::new(c.i + 1, c.j)) + self.coeff(Coord::new(c.i, c.j + 1))
        })
    }

    pub fn evaluate<T: Value>(&self, w: &Configuration<T>) -> Result<T> {
        let mut acc = T::zero();
        for (c, v) in w.iter() {
            if c.deg() > self.d {
                return Err(Error::OutOfBounds(*c, self.d));
            }
            acc = acc + T::from(self.coeff(*c).clone()) * v.clone();
        }
        Ok(acc)
    }
}

fn psi_coeff(k: u32, i: u32, j: u32) -> BigInt {
    let b = binomial(i as i64, k as i64 - j as i64);
    if (k + j) % 2 == 1 {
        -b
    } else {
        b
    }
}

/// The forms `phi_{a, d-a}` for `a = 0..=d`.
pub fn phi_basis(d: u32) -> Vec<PascalForm> {
    (0..=d).map(|a| PascalForm::phi(a, d - a).expect("index in range")).collect()
}

pub fn psi_basis(d: u32) -> Vec<PascalForm> {
    (0..=d).map(|k| PascalForm::psi(k, d).expect("index in range")).collect()
}

pub fn psi_bar_basis(d: u32) -> Vec<PascalForm> {
    (0..=d).map(|k| PascalForm::psi_bar(k, d).expect("index in range")).collect()
}

/// Undoes the top degree of `w` with forced unsplitting moves one degree
/// lower. Returns the retracted configuration and the game that was applied.
pub fn retract<T: Value>(w: &Configuration<T>) -> Result<(Configuration<T>, Game<T>)> {
    let e = w.degree();
    if e < 0 {
        return Err(Error::ZeroConfiguration);
    }
    let e = e as u32;
    let alt = (0..=e).fold(T::zero(), |acc, k| {
        let v = w.get(Coord::new(k, e - k));
        if k % 2 == 0 {
            acc + v
        } else {
            acc - v
        }
    });
    if !alt.is_zero() {
        return Err(Error::NotRetractable);
    }
    let mut game = Game::new();
    let mut carry = T::zero();
    for k in 0..e {
        // the move at (k, e-1-k) must cancel what is left at (k, e-k)
        let g = -(w.get(Coord::new(k, e - k)) + carry);
        game.add_at(Coord::new(k, e - 1 - k), g.clone());
        carry = g;
    }
    let out = w.clone().with_bound(None).apply_game(&game)?.with_bound(w.bound());
    debug_assert!(out.degree() < e as i64);
    Ok((out, game))
}

/// Decides whether `w` is an outcome by the vanishing of the `phi` basis.
pub fn is_outcome<T: Value>(w: &Configuration<T>, d: u32) -> Result<bool> {
    if w.degree() > d as i64 {
        return Err(Error::OutOfBounds(*w.support().last().unwrap(), d));
    }
    let mut ok = true;
    for f in phi_basis(d) {
        if !f.evaluate(w)?.is_zero() {
            ok = false;
            break;
        }
    }
    debug_assert_eq!(ok, outcome_witness(w).is_some());
    Ok(ok)
}

/// Runs the retraction chain; returns a game producing `w` from zero when
/// the chain reaches zero.
pub fn outcome_witness<T: Value>(w: &Configuration<T>) -> Option<Game<T>> {
    let mut cur = w.clone();
    let mut total = Game::new();
    while !cur.is_zero() {
        let (next, g) = retract(&cur).ok()?;
        total = total.merge(&g);
        cur = next;
    }
    Some(total.neg())
}

/// Evaluation matrix of the `phi` basis against the points of `s`.
pub fn phi_matrix(s: &[Coord], d: u32) -> ExactMatrix {
    ExactMatrix::from_int_fn(d as usize + 1, s.len(), |a, col| {
        let c = s[col];
        binomial(d as i64 - c.deg() as i64, a as i64 - c.i as i64)
    })
}

/// Basis of the integer outcomes supported inside `s`, each primitive, with
/// a nonpositive origin entry when the origin lies in `s`.
pub fn outcome_space(s: &BTreeSet<Coord>, d: u32) -> Result<Vec<ChipConfiguration>> {
    if let Some(c) = s.iter().find(|c| c.deg() > d) {
        return Err(Error::OutOfBounds(*c, d));
    }
    let pts: Vec<Coord> = s.iter().copied().collect();
    let m = phi_matrix(&pts, d);
    let basis = m.kernel_basis();
    Ok(basis
        .into_iter()
        .map(|v| {
            let flip = s.contains(&Coord::ORIGIN) && v[0].is_positive();
            let w = ChipConfiguration::from_entries(
                pts.iter().zip(v).map(|(c, x)| (*c, if flip { -x } else { x })),
                Some(d),
            )
            .expect("points lie in V_d");
            w
        })
        .collect())
}

/// Rational evaluation of all forms of a basis.
pub fn evaluate_all(forms: &[PascalForm], w: &Configuration<BigRational>) -> Result<Vec<BigRational>> {
    forms.iter().map(|f| f.evaluate(w)).collect()
}

/// Points of `V_d` in canonical order, materialized.
pub fn grid_points(d: u32) -> Vec<Coord> {
    let v: Vec<Coord> = triangle(d).collect();
    debug_assert_eq!(v.len(), triangle_size(d));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(t: &[(u32, u32, i64)]) -> ChipConfiguration {
        ChipConfiguration::from_triples(t.iter().map(|&(i, j, v)| (i, j, BigInt::from(v))))
    }

    fn row(f: &PascalForm, j: u32) -> Vec<i64> {
        (0..=f.d() - j).map(|i| i64::try_from(f.coeff(Coord::new(i, j))).unwrap()).collect()
    }

    #[test]
    fn psi3_on_d7() {
        let f = PascalForm::psi(3, 7).unwrap();
        assert_eq!(row(&f, 3), vec![1, 1, 1, 1, 1]);
        assert_eq!(row(&f, 2), vec![0, -1, -2, -3, -4, -5]);
        assert_eq!(row(&f, 0), vec![0, 0, 0, -1, -4, -10, -20, -35]);
        assert!(f.satisfies_recurrence());
    }

    #[test]
    fn phi34_on_d7() {
        let f = PascalForm::phi(3, 4).unwrap();
        assert_eq!(*f.coeff(Coord::ORIGIN), BigInt::from(35));
        for j in 0..=4 {
            assert!(f.coeff(Coord::new(3, j)).is_one());
        }
        assert!(f.coeff(Coord::new(4, 0)).is_zero());
        assert!(f.satisfies_recurrence());
    }

    #[test]
    fn psi0_is_bottom_row() {
        let f = PascalForm::psi(0, 5).unwrap();
        for c in triangle(5) {
            assert_eq!(f.coeff(c).is_one(), c.j == 0);
            assert_eq!(f.coeff(c).is_zero(), c.j != 0);
        }
        assert_eq!(f.coeffs, PascalForm::phi(5, 0).unwrap().coeffs);
    }

    #[test]
    fn index_errors() {
        assert!(PascalForm::psi(4, 3).is_err());
        assert!(PascalForm::new(FormKind::Phi(1, 1), 3).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let f = PascalForm::phi(1, 1).unwrap();
        let w = cfg(&[(0, 0, -1), (2, 0, 1), (1, 1, 2), (0, 2, 1)]);
        assert!(f.evaluate(&w).unwrap().is_zero());
        assert!(f.evaluate(&ChipConfiguration::zero()).unwrap().is_zero());
        let g = PascalForm::psi(0, 2).unwrap();
        assert!(g.evaluate(&cfg(&[(0, 0, -1), (1, 0, 1)])).unwrap().is_zero());
    }

    #[test]
    fn retract_examples() {
        let (r, _) = retract(&cfg(&[(0, 0, -1), (0, 2, 1), (1, 1, 2), (2, 0, 1)])).unwrap();
        assert_eq!(r, cfg(&[(0, 0, -1), (0, 1, 1), (1, 0, 1)]));
        let (r, g) = retract(&cfg(&[(0, 0, -1), (1, 0, 1), (0, 1, 1)])).unwrap();
        assert!(r.is_zero());
        assert_eq!(g.get(Coord::ORIGIN), BigInt::from(-1));
        assert_eq!(retract(&cfg(&[(0, 3, 1)])), Err(Error::NotRetractable));
        assert!(retract(&cfg(&[(0, 3, 1), (1, 2, 1)])).is_ok());
    }

    #[test]
    fn outcome_examples() {
        assert!(is_outcome(&cfg(&[(0, 0, -1), (0, 3, 1), (1, 1, 3), (3, 0, 1)]), 3).unwrap());
        assert!(!is_outcome(&cfg(&[(0, 0, -1), (1, 0, 1)]), 1).unwrap());
        assert!(is_outcome(&ChipConfiguration::zero(), 0).unwrap());
        let w = cfg(&[(0, 0, -1), (0, 3, 1), (1, 1, 3), (3, 0, 1)]);
        let g = outcome_witness(&w).unwrap();
        assert_eq!(ChipConfiguration::zero().apply_game(&g).unwrap(), w);
    }

    #[test]
    fn outcome_space_examples() {
        let s: BTreeSet<Coord> = [(0, 0), (2, 0), (1, 1), (0, 2)].iter().map(|&(i, j)| Coord::new(i, j)).collect();
        let b = outcome_space(&s, 2).unwrap();
        assert_eq!(b, vec![cfg(&[(0, 0, -1), (2, 0, 1), (1, 1, 2), (0, 2, 1)])]);
        let s: BTreeSet<Coord> = [Coord::ORIGIN].into();
        assert!(outcome_space(&s, 3).unwrap().is_empty());
        let s: BTreeSet<Coord> = [(0, 0), (1, 0), (0, 1), (1, 1)].iter().map(|&(i, j)| Coord::new(i, j)).collect();
        let b = outcome_space(&s, 2).unwrap();
        assert_eq!(b, vec![cfg(&[(0, 0, -1), (1, 0, 1), (0, 1, 1)])]);
    }

    #[test]
    fn raw_kernel_sign_convention() {
        let pts = [Coord::new(0, 0), Coord::new(0, 2), Coord::new(1, 1), Coord::new(2, 0)];
        let k = phi_matrix(&pts, 2).kernel_basis();
        let expect: Vec<BigInt> = [1, -1, -2, -1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(k, vec![expect]);
    }

    #[test]
    fn binomial_conventions() {
        assert!(binomial(3, -1).is_zero());
        assert!(binomial(3, 4).is_zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(150, 2), BigInt::from(11175));
        assert_eq!(binomial(50, 25), BigInt::from(126410606437752u64));
    }
}
