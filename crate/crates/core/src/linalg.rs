//! Dense matrices over `F_q`.

use serde::{Deserialize, Serialize};

use crate::ffield::{FieldDesc, FqElem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FqElem>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![FqElem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FqElem::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FqElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<FqElem>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
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

    pub fn get(&self, i: usize, j: usize) -> FqElem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: FqElem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[FqElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FqElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn map(&self, f: impl Fn(FqElem) -> FqElem) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn mul(&self, field: &FieldDesc, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j);
                        out.set(i, j, field.add(cur, field.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, field: &FieldDesc, v: &[FqElem]) -> Vec<FqElem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(FqElem::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect()
    }

    pub fn rref(&self, field: &FieldDesc) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = field.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let x = m.get(r, j);
                m.set(r, j, field.mul(x, inv));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                let neg = field.neg(factor);
                for j in c..m.cols {
                    let pj = m.get(r, j);
                    if !pj.is_zero() {
                        let x = m.get(i, j);
                        m.set(i, j, field.add(x, field.mul(neg, pj)));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, field: &FieldDesc) -> usize {
        self.rref(field).pivots.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel(&self, field: &FieldDesc) -> Vec<Vec<FqElem>> {
        let ech = self.rref(field);
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![FqElem::ZERO; self.cols];
                v[free] = FqElem::ONE;
                for (r, &pc) in ech.pivots.iter().enumerate() {
                    v[pc] = field.neg(ech.matrix.get(r, free));
                }
                v
            })
            .collect()
    }

    /// Basis of the column space, as the nonzero rows of the RREF of the
    /// transpose.
    pub fn column_space(&self, field: &FieldDesc) -> Vec<Vec<FqElem>> {
        let ech = self.transpose().rref(field);
        (0..ech.pivots.len()).map(|r| ech.matrix.row(r).to_vec()).collect()
    }
}

/// A subspace of `F_q^n` kept as a fully reduced echelon basis, supporting
/// reduction of vectors modulo the subspace.
#[derive(Clone, Debug)]
pub struct ReducedSpan {
    pub dim: usize,
    pub basis: Vec<Vec<FqElem>>,
    pub pivots: Vec<usize>,
}

impl ReducedSpan {
    pub fn new(field: &FieldDesc, dim: usize, vectors: &[Vec<FqElem>]) -> Self {
        if vectors.is_empty() {
            return ReducedSpan { dim, basis: Vec::new(), pivots: Vec::new() };
        }
        let ech = Matrix::from_rows(vectors.to_vec()).rref(field);
        let basis = (0..ech.pivots.len()).map(|r| ech.matrix.row(r).to_vec()).collect();
        ReducedSpan { dim, basis, pivots: ech.pivots }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Reduces `v` modulo the span; returns the remainder and the
    /// coefficients of the subtracted basis combination.
    pub fn reduce(&self, field: &FieldDesc, v: &[FqElem]) -> (Vec<FqElem>, Vec<FqElem>) {
        let mut rem = v.to_vec();
        let mut coeffs = vec![FqElem::ZERO; self.basis.len()];
        for (k, (row, &pc)) in self.basis.iter().zip(&self.pivots).enumerate() {
            let c = rem[pc];
            if c.is_zero() {
                continue;
            }
            coeffs[k] = c;
            let neg = field.neg(c);
            for (x, &b) in rem.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x = field.add(*x, field.mul(neg, b));
                }
            }
        }
        (rem, coeffs)
    }

    pub fn contains(&self, field: &FieldDesc, v: &[FqElem]) -> bool {
        self.reduce(field, v).0.iter().all(|x| x.is_zero())
    }
}
