use std::fmt;

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over a single field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

/// Solution set of `A x = b`: `particular + span(kernel columns)`.
#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: Vec<Scalar>,
    pub kernel: Matrix,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        let m = Matrix {
            field,
            rows,
            cols,
            data,
        };
        debug_assert!(m.data.iter().all(|x| x.field() == field));
        m
    }

    /// Builds a matrix from row vectors; every entry must lie in `field`.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for x in row {
                if x.field() != field {
                    return Err(Error::FieldMismatch(field.tag(), x.field().tag()));
                }
                data.push(x);
            }
        }
        Ok(Matrix {
            field,
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(field, rows.len(), cols, |i, j| field.from_i64(rows[i][j]))
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        Self::from_fn(field, rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn column_vector(field: Field, v: &[Scalar]) -> Self {
        Self::from_fn(field, v.len(), 1, |i, _| v[i].clone())
    }

    pub fn field(&self) -> Field {
        self.field
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

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        assert_eq!(x.field(), self.field, "mixing scalars from different fields");
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            data: self.data.iter().map(|x| -x).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            data: self.data.iter().map(|x| x * c).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix addition shape mismatch");
        Matrix {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix subtraction shape mismatch");
        Matrix {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "matrix product shape mismatch: {:?} * {:?}",
            self.shape(),
            other.shape()
        );
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// Submatrix with the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Self::from_fn(self.field, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Assembles a block matrix. `blocks[r][c]` must have `row_sizes[r]` rows
    /// and `col_sizes[c]` columns; `None` stands for a zero block.
    pub fn from_blocks(
        field: Field,
        row_sizes: &[usize],
        col_sizes: &[usize],
        blocks: &[Vec<Option<&Matrix>>],
    ) -> Matrix {
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut r0 = 0;
        for (r, rs) in row_sizes.iter().enumerate() {
            let mut c0 = 0;
            for (c, cs) in col_sizes.iter().enumerate() {
                if let Some(b) = blocks[r][c] {
                    assert_eq!(b.shape(), (*rs, *cs), "block ({r},{c}) has wrong shape");
                    for i in 0..*rs {
                        for j in 0..*cs {
                            out.data[(r0 + i) * cols + c0 + j] = b.get(i, j).clone();
                        }
                    }
                }
                c0 += cs;
            }
            r0 += rs;
        }
        out
    }

    /// Gauss-Jordan elimination. Pivots are taken leftmost-first with the
    /// first nonzero row, so the result is canonical.
    pub fn rref(&self) -> Echelon {
        let mut rows: Vec<Vec<Scalar>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].inv().expect("nonzero pivot");
            if !inv.is_one() {
                for x in rows[r][c..].iter_mut() {
                    if !x.is_zero() {
                        *x = &*x * &inv;
                    }
                }
            }
            let support: Vec<usize> = (c..self.cols).filter(|&j| !rows[r][j].is_zero()).collect();
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let factor = row[c].clone();
                for &j in &support {
                    row[j] = &row[j] - &(&factor * &pivot_row[j]);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let data = rows.into_iter().flatten().collect();
        Echelon {
            reduced: Matrix {
                field: self.field,
                rows: self.rows,
                cols: self.cols,
                data,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right null space as the columns of the result: one
    /// column per free variable, with a 1 in that variable and 0 in every
    /// other free variable.
    pub fn kernel_basis(&self) -> Matrix {
        let ech = self.rref();
        kernel_from_echelon(&ech, self.cols)
    }

    /// Free variables of the canonical kernel basis, in column order.
    pub fn free_columns(&self) -> Vec<usize> {
        let pivots = self.rref().pivots;
        (0..self.cols).filter(|c| !pivots.contains(c)).collect()
    }

    /// Solves `self * x = b`. Returns `Ok(None)` when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Solution>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let augmented = self.hstack(&Matrix::column_vector(self.field, b));
        let ech = augmented.rref();
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &c) in ech.pivots.iter().enumerate() {
            x[c] = ech.reduced.get(r, self.cols).clone();
        }
        let kernel = kernel_from_echelon(&ech, self.cols);
        Ok(Some(Solution {
            particular: x,
            kernel,
        }))
    }

    /// Solves `self * X = B` column by column, returning `None` if any
    /// column is inconsistent.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows, "solve_matrix row mismatch");
        let augmented = self.hstack(b);
        let ech = augmented.rref();
        if ech.pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (r, &c) in ech.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(c, j, ech.reduced.get(r, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        self.solve_matrix(&Matrix::identity(self.field, self.rows))
    }

    /// Basis of the column space: the columns of `self` at the pivot positions.
    pub fn column_space(&self) -> Matrix {
        let pivots = self.rref().pivots;
        self.select_columns(&pivots)
    }
}

fn kernel_from_echelon(ech: &Echelon, cols: usize) -> Matrix {
    let field = ech.reduced.field;
    let free: Vec<usize> = (0..cols).filter(|c| !ech.pivots.contains(c)).collect();
    let mut k = Matrix::zeros(field, cols, free.len());
    for (j, &f) in free.iter().enumerate() {
        k.set(f, j, field.one());
        for (r, &p) in ech.pivots.iter().enumerate() {
            let x = ech.reduced.get(r, f);
            if !x.is_zero() {
                k.set(p, j, -x);
            }
        }
    }
    k
}

impl fmt::Debug for Matrix {
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
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "] ({}x{} over {})", self.rows, self.cols, self.field)
    }
}

/// Coordinates with respect to a fixed basis of a subspace (the columns of
/// a full-column-rank matrix), via an invertible square submatrix.
#[derive(Clone, Debug)]
pub struct Coordinates {
    basis: Matrix,
    rows: Vec<usize>,
    inverse: Matrix,
}

impl Coordinates {
    pub fn new(basis: Matrix) -> Result<Self> {
        let ech = basis.transpose().rref();
        if ech.pivots.len() != basis.cols() {
            return Err(Error::Internal(
                "coordinate basis is not linearly independent".into(),
            ));
        }
        let rows = ech.pivots;
        let all: Vec<usize> = (0..basis.cols()).collect();
        let inverse = basis
            .select(&rows, &all)
            .inverse()
            .ok_or_else(|| Error::Internal("singular pivot block".into()))?;
        Ok(Coordinates {
            basis,
            rows,
            inverse,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Coordinates of `v`, or `None` if `v` is not in the span.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let c = self.coords_unchecked(v);
        (self.basis.mul_vec(&c) == v).then_some(c)
    }

    /// Coordinates of `v`, assuming it lies in the span.
    pub fn coords_unchecked(&self, v: &[Scalar]) -> Vec<Scalar> {
        let picked: Vec<Scalar> = self.rows.iter().map(|&r| v[r].clone()).collect();
        self.inverse.mul_vec(&picked)
    }
}

/// Quotient `k^n → k^n / U` with a canonical complement: the coordinates
/// that are not pivots of the row-reduced basis of `U`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub projection: Matrix,
    pub section: Matrix,
}

impl Quotient {
    /// `subspace` has the spanning vectors of `U` as columns (need not be independent).
    pub fn new(subspace: &Matrix) -> Self {
        let field = subspace.field();
        let n = subspace.rows();
        let ech = subspace.transpose().rref();
        let complement: Vec<usize> = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
        let mut projection = Matrix::zeros(field, complement.len(), n);
        let mut section = Matrix::zeros(field, n, complement.len());
        for (a, &j) in complement.iter().enumerate() {
            projection.set(a, j, field.one());
            section.set(j, a, field.one());
            for (k, &p) in ech.pivots.iter().enumerate() {
                let x = ech.reduced.get(k, j);
                if !x.is_zero() {
                    projection.set(a, p, -x);
                }
            }
        }
        Quotient {
            projection,
            section,
        }
    }
}
