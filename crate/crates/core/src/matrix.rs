//! Dense exact-rational matrices.
//!
//! Determinants clear denominators row by row and run Bareiss'
//! fraction-free elimination over big integers, so every intermediate
//! quotient is exact and no gcd is taken inside the elimination loop.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, y) in entries.iter().enumerate() {
            m[(i, i)] = y.clone();
        }
        m
    }

    /// Builds a matrix from row vectors; `cols` fixes the width when there
    /// are no rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::ShapeMismatch {
                    op: "from_rows",
                    left: (r, cols),
                    right: (1, row.len()),
                });
            }
            data.extend(row);
        }
        Ok(RationalMatrix { rows: r, cols, data })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        Self::from_rows(cols, rows).expect("rectangular literal")
    }

    pub fn column(entries: Vec<Rational>) -> Self {
        RationalMatrix {
            rows: entries.len(),
            cols: 1,
            data: entries,
        }
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal_entries(&self) -> Vec<Rational> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
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

    pub fn mul(&self, rhs: &RationalMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch {
                op: "mul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(
        &self,
        rhs: &RationalMatrix,
        op: &'static str,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, rhs: &RationalMatrix) -> Result<Self> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &RationalMatrix) -> Result<Self> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// The submatrix on the given row and column index lists, in the order given.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self[(i, j)].clone());
            }
        }
        RationalMatrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &RationalMatrix) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                op: "vstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(RationalMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Exact determinant; the empty matrix has determinant 1.
    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let row = self.row(i);
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
            scale *= l;
        }
        Ok(Rational::new(bareiss(a), scale))
    }

    /// Determinant of the `rows x cols` submatrix.
    pub fn minor_det(&self, rows: &[usize], cols: &[usize]) -> Result<Rational> {
        if rows.len() != cols.len() {
            return Err(Error::ShapeMismatch {
                op: "minor_det",
                left: (rows.len(), rows.len()),
                right: (cols.len(), cols.len()),
            });
        }
        self.submatrix(rows, cols).det()
    }

    /// Gauss-Jordan inverse. `what` names the matrix in the singularity error.
    pub fn inverse_named(&self, what: &str) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or_else(|| Error::Singular(what.to_string()))?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a[(col, col)].recip();
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                a.sub_row_multiple(r, col, &f);
                inv.sub_row_multiple(r, col, &f);
            }
        }
        Ok(inv)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.inverse_named("matrix")
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: &Rational) {
        for j in 0..self.cols {
            self[(r, j)] *= c;
        }
    }

    fn sub_row_multiple(&mut self, target: usize, source: usize, f: &Rational) {
        for j in 0..self.cols {
            let v = &self[(source, j)] * f;
            self[(target, j)] -= v;
        }
    }
}

/// Bareiss elimination with row pivoting on an integer matrix.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// `X W X^t`.
pub fn gram(x: &RationalMatrix, w: &RationalMatrix) -> Result<RationalMatrix> {
    if !w.is_square() || w.rows() != x.cols() {
        return Err(Error::ShapeMismatch {
            op: "gram",
            left: x.shape(),
            right: w.shape(),
        });
    }
    if w.is_diagonal() {
        // X diag(w) X^t without forming the m x m product
        let d = w.diagonal_entries();
        let mut out = RationalMatrix::zeros(x.rows(), x.rows());
        for i in 0..x.rows() {
            for j in i..x.rows() {
                let mut s = Rational::zero();
                for (k, wk) in d.iter().enumerate() {
                    let (a, b) = (&x[(i, k)], &x[(j, k)]);
                    if !a.is_zero() && !b.is_zero() && !wk.is_zero() {
                        s += a * b * wk;
                    }
                }
                out[(j, i)] = s.clone();
                out[(i, j)] = s;
            }
        }
        return Ok(out);
    }
    x.mul(w)?.mul(&x.transpose())
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    /// Permutation-expansion determinant, independent of elimination.
    fn leibniz(m: &RationalMatrix) -> Rational {
        let n = m.rows();
        let mut total = Rational::zero();
        for perm in itertools::Itertools::permutations(0..n, n) {
            let mut inversions = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if perm[i] > perm[j] {
                        inversions += 1;
                    }
                }
            }
            let mut term = Rational::one();
            for (i, &p) in perm.iter().enumerate() {
                term *= &m[(i, p)];
            }
            if inversions % 2 == 1 {
                term = -term;
            }
            total += term;
        }
        total
    }

    #[test]
    fn det_examples() {
        let a = RationalMatrix::from_i64_rows(&[&[1, 1], &[-2, 0]]);
        assert_eq!(a.det().unwrap(), ratio(2, 1));
        assert_eq!(RationalMatrix::zeros(0, 0).det().unwrap(), ratio(1, 1));
        let s = RationalMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        assert_eq!(s.det().unwrap(), ratio(0, 1));
        assert_eq!(RationalMatrix::zeros(2, 3).det(), Err(Error::NotSquare(2, 3)));
    }

    #[test]
    fn det_needs_pivoting() {
        let a = RationalMatrix::from_i64_rows(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(a.det().unwrap(), leibniz(&a));
    }

    #[test]
    fn minor_examples() {
        let n = RationalMatrix::from_i64_rows(&[&[1, 1, 1], &[-1, -2, 0]]);
        assert_eq!(n.minor_det(&[0, 1], &[1, 2]).unwrap(), ratio(2, 1));
        assert_eq!(n.minor_det(&[], &[]).unwrap(), ratio(1, 1));
        let m = RationalMatrix::from_i64_rows(&[&[1, 1, 1]]);
        assert_eq!(m.minor_det(&[0], &[2]).unwrap(), ratio(1, 1));
        assert!(m.minor_det(&[0], &[1, 2]).is_err());
    }

    #[test]
    fn gram_examples() {
        let m = RationalMatrix::from_i64_rows(&[&[1, 1, 1]]);
        let y = [ratio(2, 1), ratio(3, 1), ratio(5, 7)];
        let g = gram(&m, &RationalMatrix::diagonal(&y)).unwrap();
        assert_eq!(g[(0, 0)], ratio(2, 1) + ratio(3, 1) + ratio(5, 7));
        let g = gram(&m, &RationalMatrix::identity(3)).unwrap();
        assert_eq!(g[(0, 0)], ratio(3, 1));
        let empty = RationalMatrix::zeros(0, 3);
        let g = gram(&empty, &RationalMatrix::identity(3)).unwrap();
        assert_eq!(g.shape(), (0, 0));
        assert_eq!(g.det().unwrap(), ratio(1, 1));
        assert!(gram(&m, &RationalMatrix::identity(2)).is_err());
    }

    #[test]
    fn gram_dense_matches_product() {
        let x = RationalMatrix::from_i64_rows(&[&[1, -1, 0], &[2, 0, 1]]);
        let w = RationalMatrix::from_i64_rows(&[&[1, 2, 0], &[0, 1, 0], &[3, 0, 1]]);
        let direct = x.mul(&w).unwrap().mul(&x.transpose()).unwrap();
        assert_eq!(gram(&x, &w).unwrap(), direct);
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = RationalMatrix> {
        proptest::collection::vec((-9i64..=9, 1i64..=5), n * n).prop_map(move |v| {
            let rows = v
                .chunks(n)
                .map(|r| r.iter().map(|&(a, b)| ratio(a, b)).collect())
                .collect();
            RationalMatrix::from_rows(n, rows).unwrap()
        })
    }

    proptest! {
        #[test]
        fn det_matches_leibniz(m in (1usize..=4).prop_flat_map(small_matrix)) {
            prop_assert_eq!(m.det().unwrap(), leibniz(&m));
        }

        #[test]
        fn inverse_is_two_sided(m in (1usize..=4).prop_flat_map(small_matrix)) {
            match m.inverse() {
                Ok(inv) => {
                    let id = RationalMatrix::identity(m.rows());
                    prop_assert_eq!(m.mul(&inv).unwrap(), id.clone());
                    prop_assert_eq!(inv.mul(&m).unwrap(), id);
                }
                Err(_) => prop_assert!(m.det().unwrap().is_zero()),
            }
        }
    }
}
