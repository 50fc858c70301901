//! Dense exact matrices and the elimination kernel (rank, reduced row
//! echelon form, null space, inverse, determinant).
//!
//! Pivoting always takes the first nonzero entry in column order, so every
//! derived basis is deterministic. `rank` dispatches to word-sized modular
//! elimination over `F_p` and to fraction-free (Bareiss) elimination on
//! cleared-denominator integer rows over `Q`; `rank_by_rref` is the plain
//! Gauss-Jordan route and is kept as an independent cross-check.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// A column vector of field elements.
pub type Vector = Vec<FieldElement>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElement,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from rows, checking shape and field membership.
    pub fn from_rows(field: FieldSpec, rows: Vec<Vector>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: format!("{cols} columns"),
                    got: format!("{} columns", row.len()),
                });
            }
            for x in row {
                if x.field() != field {
                    return Err(Error::FieldMismatch(
                        field.to_string(),
                        x.field().to_string(),
                    ));
                }
                data.push(x);
            }
        }
        Ok(Self {
            field,
            rows: n,
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vector]) -> Self {
        Self::from_fn(field, rows, columns.len(), |i, j| columns[j][i].clone())
    }

    /// Integer matrix, convenient for fixtures.
    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(field, rows.len(), cols, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: FieldElement) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// `M^T = -M` with a zero diagonal.
    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.get(i, i).is_zero()
                    && (i + 1..self.cols).all(|j| (self.get(i, j) + self.get(j, i)).is_zero())
            })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(self.field, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// Places `self` and `other` side by side.
    pub fn hstack(&self, other: &Matrix) -> Self {
        assert_eq!(self.rows, other.rows, "hstack needs equal row counts");
        Self::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// Matrix product. Panics on incompatible shapes.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| dot(self.row(i), v, self.field))
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    fn zip_with(
        &self,
        rhs: &Matrix,
        f: impl Fn(&FieldElement, &FieldElement) -> FieldElement,
    ) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        match self.field.modulus() {
            Some(p) => self.rank_mod(p),
            None => self.rank_bareiss(),
        }
    }

    fn rank_mod(&self, p: u64) -> usize {
        let mut a: Vec<u64> = self
            .data
            .iter()
            .map(|x| x.residue_value().expect("prime-field entry"))
            .collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(piv) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
                continue;
            };
            if piv != rank {
                for j in 0..cols {
                    a.swap(piv * cols + j, rank * cols + j);
                }
            }
            let inv = inv_mod(a[rank * cols + col], p);
            for r in rank + 1..rows {
                let factor = a[r * cols + col] * inv % p;
                if factor == 0 {
                    continue;
                }
                for j in col..cols {
                    let sub = factor * a[rank * cols + j] % p;
                    a[r * cols + j] = (a[r * cols + j] + p - sub) % p;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Fraction-free elimination on the integer matrix obtained by scaling
    /// each row by the lcm of its denominators.
    fn rank_bareiss(&self) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let mut a: Vec<Vec<BigInt>> = (0..rows)
            .map(|i| {
                let row: Vec<BigRational> = self
                    .row(i)
                    .iter()
                    .map(|x| x.as_rational().expect("rational entry"))
                    .collect();
                let lcm = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
                row.iter().map(|r| r.numer() * (&lcm / r.denom())).collect()
            })
            .collect();
        let mut prev = BigInt::one();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(piv) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(piv, rank);
            for r in rank + 1..rows {
                for j in col + 1..cols {
                    let v = &a[rank][col] * &a[r][j] - &a[r][col] * &a[rank][j];
                    a[r][j] = v / &prev;
                }
                a[r][col] = BigInt::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
        }
        rank
    }

    /// Rank read off the reduced row echelon form; field-generic.
    pub fn rank_by_rref(&self) -> usize {
        self.rref().1.len()
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(piv, r);
            let inv = m.get(r, col).inv().expect("pivot is nonzero");
            for j in col..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, col).is_zero() {
                    continue;
                }
                let factor = m.get(i, col).clone();
                for j in col..m.cols {
                    let v = m.get(i, j) - &(&factor * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Basis of the right null space, one vector per free column (that
    /// column's coordinate is 1).
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (k, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(k, f);
                }
                v
            })
            .collect()
    }

    /// The pivot columns of `self`, a basis of the column space.
    pub fn column_space_basis(&self) -> Vec<Vector> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.column(c)).collect()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotInvertible);
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::NotInvertible);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(r.submatrix(&rows, &cols))
    }

    pub fn determinant(&self) -> Result<FieldElement> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                got: format!("{}x{}", self.rows, self.cols),
            });
        }
        let mut m = self.clone();
        let mut det = self.field.one();
        for col in 0..m.cols {
            let Some(piv) = (col..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                return Ok(self.field.zero());
            };
            if piv != col {
                m.swap_rows(piv, col);
                det = -det;
            }
            let p = m.get(col, col).clone();
            det *= &p;
            let inv = p.inv().expect("pivot is nonzero");
            for i in col + 1..m.rows {
                if m.get(i, col).is_zero() {
                    continue;
                }
                let factor = m.get(i, col) * &inv;
                for j in col..m.cols {
                    let v = m.get(i, j) - &(&factor * m.get(col, j));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Strict upper triangle in lexicographic order `(0,1), (0,2), ...`.
    pub fn upper_triangle(&self) -> Vector {
        let mut out = Vec::with_capacity(self.rows * self.rows.saturating_sub(1) / 2);
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut e, mut base, mut acc) = (p - 2, a % p, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

pub fn dot(a: &[FieldElement], b: &[FieldElement], field: FieldSpec) -> FieldElement {
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Dimension of the span of `vectors`, each of length `len`.
pub fn span_rank(field: FieldSpec, len: usize, vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(field, len, vectors).rank()
}

/// Whether `v` lies in the span of `basis`.
pub fn span_contains(field: FieldSpec, basis: &[Vector], v: &[FieldElement]) -> bool {
    let len = v.len();
    let mut with = basis.to_vec();
    with.push(v.to_vec());
    span_rank(field, len, basis) == span_rank(field, len, &with)
}

/// `dim(A ∩ B) = dim A + dim B - dim(A + B)`.
pub fn intersection_dim(field: FieldSpec, len: usize, a: &[Vector], b: &[Vector]) -> usize {
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    span_rank(field, len, a) + span_rank(field, len, b) - span_rank(field, len, &both)
}

pub fn vec_add(a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(c: &FieldElement, a: &[FieldElement]) -> Vector {
    a.iter().map(|x| c * x).collect()
}

pub fn unit_vector(field: FieldSpec, len: usize, i: usize) -> Vector {
    let mut v = vec![field.zero(); len];
    v[i] = field.one();
    v
}
