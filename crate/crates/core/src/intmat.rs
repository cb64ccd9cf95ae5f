//! Exact integer matrices: Smith normal form, fraction-free determinants and
//! abelian invariants of presentations.
//!
//! Everything is generic over the integer scalar. The crate-root aliases fix
//! it to [`num_bigint::BigInt`], which is what every group-theoretic caller
//! uses; fixed-width integers are fine for small inputs.

use std::fmt::{self, Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::Presentation;

/// Integer scalars usable in [`Matrix`].
pub trait IntScalar: Integer + Signed + Clone + Debug + Display {}

impl<T: Integer + Signed + Clone + Debug + Display> IntScalar for T {}

/// A dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: IntScalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal((0..n).map(|_| T::one()).collect())
    }

    pub fn diagonal(entries: Vec<T>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Ragged);
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    /// An empty-row matrix still has a column count, which matters for the
    /// abelianization of a presentation without relators.
    pub fn from_rows_with_cols(rows: Vec<Vec<T>>, cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Ragged);
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = self[(i, c)].clone();
            self[(i, c)] = -v;
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    // row_i += k * row_j
    fn add_row_multiple(&mut self, i: usize, j: usize, k: &T) {
        for c in 0..self.cols {
            let v = self[(j, c)].clone() * k.clone();
            let cur = self[(i, c)].clone();
            self[(i, c)] = cur + v;
        }
    }

    fn add_col_multiple(&mut self, i: usize, j: usize, k: &T) {
        for r in 0..self.rows {
            let v = self[(r, j)].clone() * k.clone();
            let cur = self[(r, i)].clone();
            self[(r, i)] = cur + v;
        }
    }
}

impl<T: IntScalar + FromStr> Matrix<T> {
    /// Parses comma-separated rows; blank lines and `#` comments are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .map(|cell| {
                    cell.trim().parse::<T>().map_err(|_| {
                        Error::InvalidArgument(format!("line {}: `{}` is not an integer", n + 1, cell.trim()))
                    })
                })
                .collect::<Result<Vec<T>>>()?;
            rows.push(row);
        }
        Matrix::from_rows(rows)
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Display> Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let cells: Vec<String> =
                self.data[i * self.cols..(i + 1) * self.cols].iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<T: Serialize> Serialize for Matrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[T]> = (0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols]).collect();
        rows.serialize(s)
    }
}

/// Diagonal of the Smith normal form: `d1 | d2 | ... `, nonnegative, zeros
/// only at the tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithForm<T> {
    pub invariant_factors: Vec<T>,
    pub rank: usize,
}

impl<T: IntScalar> SmithForm<T> {
    /// Number of zero factors, i.e. the free rank of the cokernel.
    pub fn free_rank(&self) -> usize {
        self.invariant_factors.iter().filter(|d| d.is_zero()).count()
    }

    /// Factors greater than one.
    pub fn torsion(&self) -> Vec<T> {
        self.invariant_factors.iter().filter(|d| **d > T::one()).cloned().collect()
    }

    /// Product of the nonzero factors.
    pub fn nonzero_product(&self) -> T {
        self.invariant_factors.iter().filter(|d| !d.is_zero()).fold(T::one(), |acc, d| acc * d.clone())
    }

    /// Order of the cokernel, `None` when it is infinite.
    pub fn order(&self) -> Option<T> {
        (self.free_rank() == 0).then(|| self.nonzero_product())
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.iter().all(|d| d.is_one())
    }
}

fn min_nonzero<T: IntScalar>(m: &Matrix<T>, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in from..m.rows {
        for j in from..m.cols {
            let v = &m[(i, j)];
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < m[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smith normal form by elementary operations, always pivoting on the
/// smallest nonzero entry in absolute value.
pub fn smith_normal_form<T: IntScalar>(a: &Matrix<T>) -> SmithForm<T> {
    let mut m = a.clone();
    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = min_nonzero(&m, t) else { break };
        m.swap_rows(t, pi);
        m.swap_cols(t, pj);
        loop {
            let pivot = m[(t, t)].clone();
            for i in t + 1..m.rows {
                let q = m[(i, t)].div_floor(&pivot);
                if !q.is_zero() {
                    m.add_row_multiple(i, t, &-q);
                }
            }
            for j in t + 1..m.cols {
                let q = m[(t, j)].div_floor(&pivot);
                if !q.is_zero() {
                    m.add_col_multiple(j, t, &-q);
                }
            }
            // any leftover in the pivot row or column is a smaller remainder
            let mut smaller: Option<(usize, usize)> = None;
            for i in t + 1..m.rows {
                if !m[(i, t)].is_zero() && smaller.is_none_or(|(a, b)| m[(i, t)].abs() < m[(a, b)].abs()) {
                    smaller = Some((i, t));
                }
            }
            for j in t + 1..m.cols {
                if !m[(t, j)].is_zero() && smaller.is_none_or(|(a, b)| m[(t, j)].abs() < m[(a, b)].abs()) {
                    smaller = Some((t, j));
                }
            }
            if let Some((i, j)) = smaller {
                m.swap_rows(t, i);
                m.swap_cols(t, j);
                continue;
            }
            let bad = (t + 1..m.rows)
                .flat_map(|i| (t + 1..m.cols).map(move |j| (i, j)))
                .find(|&(i, j)| !m[(i, j)].is_multiple_of(&pivot));
            match bad {
                Some((i, _)) => m.add_row_multiple(t, i, &T::one()),
                None => break,
            }
        }
        t += 1;
    }
    let invariant_factors: Vec<T> = (0..n).map(|i| m[(i, i)].abs()).collect();
    SmithForm { rank: t, invariant_factors }
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn determinant<T: IntScalar>(a: &Matrix<T>) -> Result<T> {
    if a.rows != a.cols {
        return Err(Error::NonSquare { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    if n == 0 {
        return Ok(T::one());
    }
    let mut m = a.clone();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(i) => {
                    m.swap_rows(k, i);
                    negate = !negate;
                }
                None => return Ok(T::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[(i, j)].clone() * m[(k, k)].clone() - m[(i, k)].clone() * m[(k, j)].clone();
                m[(i, j)] = v / prev.clone();
            }
        }
        prev = m[(k, k)].clone();
    }
    let det = m[(n - 1, n - 1)].clone();
    Ok(if negate { -det } else { det })
}

/// Invariant factors of the abelianization of `pres`, one per generator.
/// Zero factors stand for infinite cyclic summands.
pub fn abelian_invariants(pres: &Presentation) -> SmithForm<BigInt> {
    let m = crate::rewriting::relation_matrix(pres);
    let mut snf = smith_normal_form(&m);
    snf.invariant_factors.resize(pres.num_generators(), BigInt::zero());
    snf
}
