//! Exact dense linear algebra over the rationals.
//!
//! Everything here is exact: entries are arbitrary-precision rationals and
//! Gaussian elimination never rounds. Pivots are taken as the first nonzero
//! entry in column order, so results are deterministic.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number in canonical form (positive denominator, reduced).
pub type Rational = BigRational;

/// Builds the rational `num/den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("invalid rational {0:?}")]
    Invalid(String),
    #[error("invalid rational {0:?}: zero denominator")]
    ZeroDenominator(String),
}

/// Parses `"a"` or `"a/b"` with optional leading `-` on the numerator.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    fn parse_int(part: &str) -> Option<BigInt> {
        let digits = part.strip_prefix('-').unwrap_or(part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        part.parse().ok()
    }
    let invalid = || ParseRationalError::Invalid(s.into());
    match s.split_once('/') {
        None => parse_int(s).map(Rational::from_integer).ok_or_else(invalid),
        Some((n, d)) => {
            if d.starts_with('-') {
                return Err(invalid());
            }
            let n = parse_int(n).ok_or_else(invalid)?;
            let d = parse_int(d).ok_or_else(invalid)?;
            if d.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(s.into()));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Canonical text form: `"a/b"`, or `"a"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    alloc::format!("{q}")
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("image of source column {column} is not in the span of the target columns")]
pub struct MembershipError {
    pub column: usize,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: alloc::vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from row-major data. Panics on a length mismatch.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows * cols");
        Self { rows, cols, data }
    }

    /// Integer matrix from nested rows; all rows must have equal length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| int(x)));
        }
        Self { rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        let pos = self.data.iter().position(|x| !x.is_zero())?;
        Some((pos / self.cols, pos % self.cols))
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

    pub fn scaled(&self, s: &Rational) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sub");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row mismatch in hcat");
        let cols = self.cols + other.cols;
        let mut out = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Submatrix of the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out[(i, jj)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(p, r);
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let x = &self[(r, j)] * &inv;
                self[(r, j)] = x;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let factor = self[(i, c)].clone();
                for j in c..self.cols {
                    if self[(r, j)].is_zero() {
                        continue;
                    }
                    let x = &factor * &self[(r, j)];
                    self[(i, j)] -= x;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Dimension of the column space.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().1.len()
    }

    /// Columns form a basis of `{x : self * x = 0}`; one column per free variable.
    pub fn nullspace_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis[(f, k)] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                basis[(p, k)] = -r[(row, f)].clone();
            }
        }
        basis
    }

    /// Indices of a maximal linearly independent subset of columns, chosen greedily left to right.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Basis of the column space, taken from the original columns.
    pub fn column_space_basis(&self) -> Self {
        self.select_columns(&self.independent_columns())
    }

    /// Solves `self * X = rhs` column by column. Free variables are set to zero;
    /// `Err` names the first column of `rhs` outside the column space.
    pub fn solve(&self, rhs: &Self) -> Result<Self, MembershipError> {
        assert_eq!(self.rows, rhs.rows, "row mismatch in solve");
        let (r, pivots) = self.hcat(rhs).rref();
        if let Some(&p) = pivots.iter().find(|&&p| p >= self.cols) {
            // A pivot in the augmented block means an inconsistent column.
            return Err(MembershipError { column: p - self.cols });
        }
        let mut x = Self::zeros(self.cols, rhs.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(p, j)] = r[(row, self.cols + j)].clone();
            }
        }
        Ok(x)
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let (r, pivots) = self.hcat(&Self::identity(n)).rref();
        // Invertible iff the left block reduces to the identity.
        if pivots.len() < n || pivots[..n].iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn max_abs_entry(&self) -> Rational {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
    }
}

/// Matrix of the map induced on a quotient.
///
/// `source_reps` holds representatives of a basis of the source quotient.
/// `target` holds `split` representatives of the target quotient basis, followed
/// by columns spanning the subspace that is quotiented out. Each image
/// `f * s` is written in the columns of `target`; the first `split` coordinates
/// form the corresponding column of the result.
pub fn quotient_map(
    f: &RationalMatrix,
    source_reps: &RationalMatrix,
    target: &RationalMatrix,
    split: usize,
) -> Result<RationalMatrix, MembershipError> {
    assert!(split <= target.cols, "split beyond target columns");
    let images = f.mul(source_reps);
    if target.cols == 0 {
        return match images.first_nonzero() {
            Some((_, column)) => Err(MembershipError { column }),
            None => Ok(RationalMatrix::zeros(0, source_reps.cols)),
        };
    }
    let coords = target.solve(&images)?;
    let mut out = RationalMatrix::zeros(split, source_reps.cols);
    for i in 0..split {
        for j in 0..source_reps.cols {
            out[(i, j)] = coords[(i, j)].clone();
        }
    }
    Ok(out)
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ";")?;
            }
            for j in 0..self.cols {
                write!(f, " {}", self[(i, j)])?;
            }
        }
        write!(f, " ]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rank_examples() {
        assert_eq!(RationalMatrix::from_rows(&[[1, 2], [2, 4]]).rank(), 1);
        assert_eq!(RationalMatrix::zeros(0, 0).rank(), 0);
        assert_eq!(RationalMatrix::from_rows(&[[1, 0], [0, 1], [1, 1]]).rank(), 2);
    }

    #[test]
    fn nullspace_examples() {
        let k = RationalMatrix::from_rows(&[[1, 1]]).nullspace_basis();
        assert_eq!(k.shape(), (2, 1));
        assert_eq!(&k[(0, 0)] + &k[(1, 0)], int(0));
        assert!(!k.is_zero());

        assert_eq!(RationalMatrix::identity(3).nullspace_basis().shape(), (3, 0));

        // x + 2y = 0 is solved by (2, -1) up to scale.
        let k = RationalMatrix::from_rows(&[[1, 2], [2, 4]]).nullspace_basis();
        assert_eq!(k.shape(), (2, 1));
        assert_eq!(&k[(0, 0)] * int(-1), &k[(1, 0)] * int(2));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
        assert!(matches!(parse_rational("1/0"), Err(ParseRationalError::ZeroDenominator(_))));
        for bad in ["", "a", "1/", "/2", "1/-2", "+1", " 1", "1.5", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn quotient_map_identity_and_zero() {
        let reps = RationalMatrix::identity(2);
        let id = quotient_map(&RationalMatrix::identity(2), &reps, &reps, 2).unwrap();
        assert_eq!(id, RationalMatrix::identity(2));
        let z = quotient_map(&RationalMatrix::zeros(2, 2), &reps, &reps, 2).unwrap();
        assert_eq!(z, RationalMatrix::zeros(2, 2));
    }

    #[test]
    fn quotient_map_exterior_algebra_of_two_torus() {
        // Basis 1, dx1, dx2, dx1^dx2; omega = dx1^dx2 sends 1 to the top class.
        let mut omega = RationalMatrix::zeros(4, 4);
        omega[(3, 0)] = int(1);
        let h0 = RationalMatrix::from_columns(4, &[vec![int(1), int(0), int(0), int(0)]]);
        let h2 = RationalMatrix::from_columns(4, &[vec![int(0), int(0), int(0), int(1)]]);
        let m = quotient_map(&omega, &h0, &h2, 1).unwrap();
        assert_eq!(m, RationalMatrix::from_rows(&[[1]]));
    }

    #[test]
    fn quotient_map_modulo_subspace() {
        // Target quotient R^2 / span(e2) with representative e1: f(e1) = e1 + 5 e2 maps to [1].
        let f = RationalMatrix::from_rows(&[[1], [5]]);
        let src = RationalMatrix::identity(1);
        let target = RationalMatrix::identity(2);
        assert_eq!(quotient_map(&f, &src, &target, 1).unwrap(), RationalMatrix::from_rows(&[[1]]));
    }

    #[test]
    fn quotient_map_rejects_image_outside_span() {
        let f = RationalMatrix::from_rows(&[[0], [1]]);
        let target = RationalMatrix::from_rows(&[[1], [0]]);
        let err = quotient_map(&f, &RationalMatrix::identity(1), &target, 1).unwrap_err();
        assert_eq!(err.column, 0);
    }

    #[test]
    fn inverse_and_solve() {
        let a = RationalMatrix::from_rows(&[[2, 1], [1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RationalMatrix::identity(2));
        assert!(RationalMatrix::from_rows(&[[1, 2], [2, 4]]).inverse().is_none());
        assert_eq!(RationalMatrix::zeros(0, 0).inverse().unwrap().shape(), (0, 0));
    }
}
