//! Exact linear algebra over the rationals.
//!
//! Determinants use Bareiss elimination on an integer copy of the matrix;
//! kernels use integer-preserving row reduction with content division.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.set(k, k, BigRational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn from_int_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        Self::from_fn(rows, cols, |r, c| BigRational::from(f(r, c)))
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        Self::from_int_fn(n, m, |r, c| BigInt::from(rows[r][c]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} against {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|r| (0..self.cols).fold(BigRational::zero(), |acc, c| acc + self.get(r, c) * &v[c]))
            .collect())
    }

    /// Rows scaled by the lcm of their denominators, plus the product of scales.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            out.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
            scale *= l;
        }
        (out, scale)
    }

    pub fn determinant(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let (m, scale) = self.integer_rows();
        Ok(BigRational::new(bareiss_determinant(m), scale))
    }

    pub fn rank(&self) -> usize {
        let (mut m, _) = self.integer_rows();
        row_reduce(&mut m, self.cols).len()
    }

    /// Basis of the right kernel: integer vectors with content 1 whose first
    /// nonzero entry is positive, one per free column in increasing order.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let (mut m, _) = self.integer_rows();
        let pivots = row_reduce(&mut m, self.cols);
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_cols.contains(c)) {
            let mut v = vec![BigRational::zero(); self.cols];
            v[free] = BigRational::one();
            for &(r, pc) in &pivots {
                v[pc] = -BigRational::new(m[r][free].clone(), m[r][pc].clone());
            }
            basis.push(primitive_integer_vector(&v));
        }
        basis
    }

    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
        if self.rows != self.cols {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        if b.len() != self.rows {
            return Err(Error::Dimension(format!("right-hand side of length {}", b.len())));
        }
        let n = self.rows;
        let aug = ExactMatrix::from_fn(n, n + 1, |r, c| if c < n { self.get(r, c).clone() } else { b[r].clone() });
        let (mut m, _) = aug.integer_rows();
        let pivots = row_reduce(&mut m, n);
        if pivots.len() < n {
            return Ok(None);
        }
        let mut x = vec![BigRational::zero(); n];
        for (r, c) in pivots {
            x[c] = BigRational::new(m[r][n].clone(), m[r][c].clone());
        }
        Ok(Some(x))
    }
}

/// Scales a rational vector to integers with content 1 and a positive
/// leading entry.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() {
        for x in ints.iter_mut() {
            *x /= &g;
        }
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in ints.iter_mut() {
            *x = -x.clone();
        }
    }
    ints
}

/// Fraction-free determinant of a square integer matrix.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for r in k + 1..n {
            for c in k + 1..n {
                let v = (&m[r][c] * &m[k][k] - &m[r][k] * &m[k][c]) / &prev;
                m[r][c] = v;
            }
            m[r][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Reduces in place to a form where every pivot column is zero outside its
/// pivot row. Only the first `cols` columns are eligible as pivots. Returns
/// the (row, column) pivots in order.
fn row_reduce(m: &mut [Vec<BigInt>], cols: usize) -> Vec<(usize, usize)> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&k| !m[k][c].is_zero()) else { continue };
        m.swap(r, p);
        for k in 0..rows {
            if k == r || m[k][c].is_zero() {
                continue;
            }
            let a = m[r][c].clone();
            let b = m[k][c].clone();
            let g = a.gcd(&b);
            let (fa, fb) = (&a / &g, &b / &g);
            let (head, tail) = if k < r {
                let (h, t) = m.split_at_mut(r);
                (&mut h[k], &t[0])
            } else {
                let (h, t) = m.split_at_mut(k);
                (&mut t[0], &h[r])
            };
            for (x, y) in head.iter_mut().zip(tail.iter()) {
                *x = &*x * &fa - y * &fb;
            }
            let content = head.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !content.is_zero() && !content.is_one() {
                for x in head.iter_mut() {
                    *x /= &content;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    pivots
}
