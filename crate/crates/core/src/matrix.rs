//! Dense row-major matrices and the quantale-valued matrix calculus.

use crate::error::{Error, Result};
use crate::quantale::Quantale;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

/// `(l · r)(i, k) = ⋁_j l(i, j) ⊗ r(j, k)`.
pub fn product<Q: Quantale>(l: &Matrix<Q::Value>, r: &Matrix<Q::Value>) -> Matrix<Q::Value> {
    assert_eq!(l.cols(), r.rows(), "inner dimensions differ");
    Matrix::from_fn(l.rows(), r.cols(), |i, k| {
        (0..l.cols()).fold(Q::bottom(), |acc, j| {
            Q::join2(&acc, &Q::tensor(l.get(i, j), r.get(j, k)))
        })
    })
}

/// Entrywise `≤`; on failure returns the first offending position.
pub fn first_not_leq<Q: Quantale>(
    l: &Matrix<Q::Value>,
    r: &Matrix<Q::Value>,
) -> Option<(usize, usize)> {
    assert_eq!((l.rows(), l.cols()), (r.rows(), r.cols()), "shapes differ");
    (0..l.rows())
        .flat_map(|i| (0..l.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| !Q::leq(l.get(i, j), r.get(i, j)))
}

pub fn leq<Q: Quantale>(l: &Matrix<Q::Value>, r: &Matrix<Q::Value>) -> bool {
    first_not_leq::<Q>(l, r).is_none()
}

pub fn join<Q: Quantale>(l: &Matrix<Q::Value>, r: &Matrix<Q::Value>) -> Matrix<Q::Value> {
    assert_eq!((l.rows(), l.cols()), (r.rows(), r.cols()), "shapes differ");
    Matrix::from_fn(l.rows(), l.cols(), |i, j| Q::join2(l.get(i, j), r.get(i, j)))
}
