use std::fmt;
use std::io::{Read, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::MatNormError;
use crate::permgroup::Permutation;

/// Square matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![BigRational::zero(); n * n] }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self, MatNormError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(MatNormError::NotSquare);
        }
        Ok(Self { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self, MatNormError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect())
    }

    pub fn diagonal(d: &[BigRational]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    /// The permutation matrix with `P e_i = e_{σ(i)}` on `{1..n}`.
    pub fn permutation(sigma: &Permutation, n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 1..=n as u32 {
            let j = sigma.apply(i);
            m.set(j as usize - 1, i as usize - 1, BigRational::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigRational) {
        self.entries[i * self.n + j] = x;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigRational]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    fn check_dim(&self, other: &Self) -> Result<(), MatNormError> {
        if self.n != other.n {
            return Err(MatNormError::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatNormError> {
        self.check_dim(other)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatNormError> {
        self.check_dim(other)?;
        Ok(Self { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect() })
    }

    pub fn minus_identity(&self) -> Self {
        self.sub(&Self::identity(self.n)).expect("same dimension")
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Top-left `k × k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        assert!(k <= self.n, "block larger than matrix");
        let mut out = Self::zeros(k);
        for i in 0..k {
            for j in 0..k {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// `diag(self, I_{m - n})`.
    pub fn pad_identity(&self, m: usize) -> Self {
        assert!(m >= self.n, "cannot pad to a smaller size");
        let mut out = Self::identity(m);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Exact rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        bareiss(integer_rows(self)).0
    }

    /// Determinant, via the same elimination.
    pub fn determinant(&self) -> BigRational {
        let scale: BigInt = self.rows().map(row_denominator_lcm).product();
        let (rank, det) = bareiss(integer_rows(self));
        if rank < self.n {
            return BigRational::zero();
        }
        BigRational::new(det, scale)
    }

    /// All leading principal minors strictly positive.
    pub fn leading_minors_positive(&self) -> bool {
        (1..=self.n).all(|k| self.leading_block(k).determinant().is_positive())
    }

    /// Gauss-Jordan inverse; back substitution for upper-triangular input.
    pub fn inverse(&self) -> Result<Self, MatNormError> {
        let n = self.n;
        if self.is_upper_triangular() {
            if (0..n).any(|i| self.get(i, i).is_zero()) {
                return Err(MatNormError::Singular);
            }
            let mut inv = Self::zeros(n);
            for j in 0..n {
                for i in (0..=j).rev() {
                    let mut acc = if i == j { BigRational::one() } else { BigRational::zero() };
                    for k in i + 1..=j {
                        let a = self.get(i, k);
                        if !a.is_zero() {
                            acc -= a * inv.get(k, j);
                        }
                    }
                    inv.set(i, j, acc / self.get(i, i));
                }
            }
            return Ok(inv);
        }
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(MatNormError::Singular)?;
            if pivot != col {
                for j in 0..n {
                    a.entries.swap(pivot * n + j, col * n + j);
                    inv.entries.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                a.entries[col * n + j] /= &p;
                inv.entries[col * n + j] /= &p;
            }
            for r in (0..n).filter(|&r| r != col) {
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let (x, y) = (a.get(col, j) * &f, inv.get(col, j) * &f);
                    a.entries[r * n + j] -= x;
                    inv.entries[r * n + j] -= y;
                }
            }
        }
        Ok(inv)
    }

    /// Rows of `p/q` (or integer) cells.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), MatNormError> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
        for row in self.rows() {
            w.write_record(row.iter().map(ToString::to_string)).map_err(|e| MatNormError::Parse(e.to_string()))?;
        }
        w.flush().map_err(|e| MatNormError::Parse(e.to_string()))
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self, MatNormError> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(reader);
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| MatNormError::Parse(e.to_string()))?;
            let row = record
                .iter()
                .map(|cell| cell.trim().parse::<BigRational>().map_err(|_| MatNormError::Parse(cell.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Self::from_rows(rows)
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            f.write_str(&cells.join(" "))?;
        }
        f.write_str("]")
    }
}

fn row_denominator_lcm(row: &[BigRational]) -> BigInt {
    row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Each row scaled by the lcm of its denominators.
fn integer_rows(m: &RationalMatrix) -> Vec<Vec<BigInt>> {
    m.rows()
        .map(|row| {
            let l = row_denominator_lcm(row);
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

/// Fraction-free elimination. Returns the rank and, for full rank, the
/// determinant of the input.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> (usize, BigInt) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut sign = BigInt::one();
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else { continue };
        if pivot != rank {
            a.swap(pivot, rank);
            sign = -sign;
        }
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let num = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                debug_assert!(num.is_multiple_of(&prev));
                a[i][j] = num / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    let det = if rank == rows && rows == cols { sign * prev } else { BigInt::zero() };
    (rank, det)
}
