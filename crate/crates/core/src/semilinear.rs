//! Finite-dimensional semilinear algebra over `F_q`.
//!
//! A [`SemilinearOp`] with twist `s` sends a coordinate vector `c` to
//! `A * c^{[p^s]}`, the Frobenius applied entrywise. Twist `+1` is a
//! p-linear Frobenius action, twist `-1` a Cartier-type operator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{FieldDesc, FieldEmbedding, FieldSpec, FqElem};
use crate::linalg::{Matrix, ReducedSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearOp {
    pub field: FieldDesc,
    pub matrix: Matrix,
    pub twist: i32,
}

/// Stable part of a semilinear operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableResult {
    pub dim: usize,
    /// First `r` with `rank(C^r) = rank(C^{r+1})`.
    pub index: usize,
    /// Ranks of `C^0, C^1, ..., C^{index+1}`.
    pub ranks: Vec<usize>,
    /// Reduced echelon basis of the stable image.
    pub basis: Vec<Vec<FqElem>>,
}

/// Report form: `{field, twist, matrix}` with entries as coefficient arrays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializedOp {
    pub field: FieldSpec,
    pub twist: i32,
    pub matrix: Vec<Vec<Vec<u32>>>,
}

impl SemilinearOp {
    pub fn new(field: FieldDesc, matrix: Matrix, twist: i32) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::InvalidInput("semilinear operator matrix must be square".into()));
        }
        if twist != 1 && twist != -1 {
            return Err(Error::InvalidInput(format!("twist must be +1 or -1, got {twist}")));
        }
        Ok(SemilinearOp { field, matrix, twist })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Entrywise Frobenius power of the matrix.
    pub fn frob_matrix(&self, k: i32) -> Matrix {
        self.matrix.map(|x| self.field.frob(x, k))
    }

    pub fn apply(&self, v: &[FqElem]) -> Vec<FqElem> {
        let twisted: Vec<FqElem> = v.iter().map(|&x| self.field.frob(x, self.twist)).collect();
        self.matrix.mul_vec(&self.field, &twisted)
    }

    /// Transpose with the twist negated.
    pub fn dual(&self) -> SemilinearOp {
        SemilinearOp { field: self.field.clone(), matrix: self.matrix.transpose(), twist: -self.twist }
    }

    pub fn base_change(&self, emb: &FieldEmbedding) -> SemilinearOp {
        SemilinearOp { field: emb.target.clone(), matrix: self.matrix.map(|x| emb.map(x)), twist: self.twist }
    }

    /// Matrix of the operator restricted to its stable part, in the stable
    /// basis; invertible by the Hartshorne–Speiser bijectivity.
    pub fn restrict_to_stable(&self, stable: &StableResult) -> Result<Matrix> {
        let span = ReducedSpan::new(&self.field, self.dim(), &stable.basis);
        let mut cols = Vec::with_capacity(span.rank());
        for w in &span.basis {
            let (rest, coeffs) = span.reduce(&self.field, &self.apply(w));
            if !rest.iter().all(|x| x.is_zero()) {
                return Err(Error::Internal("stable part is not invariant".into()));
            }
            cols.push(coeffs);
        }
        Ok(Matrix::from_columns(span.rank(), &cols))
    }

    pub fn serialize(&self) -> SerializedOp {
        let matrix = (0..self.matrix.rows())
            .map(|i| self.matrix.row(i).iter().map(|&x| self.field.to_coeffs(x)).collect())
            .collect();
        SerializedOp { field: self.field.spec(), twist: self.twist, matrix }
    }

    pub fn deserialize(op: &SerializedOp) -> Result<Self> {
        let field = FieldDesc::from_spec(&op.field)?;
        let rows = op
            .matrix
            .iter()
            .map(|row| row.iter().map(|c| field.from_coeffs(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let matrix = if rows.is_empty() { Matrix::zeros(0, 0) } else { Matrix::from_rows(rows) };
        SemilinearOp::new(field, matrix, op.twist)
    }
}

/// Stable dimension via the twisted products `A A^{(p^s)} A^{(p^{2s})} ...`.
pub fn stable_dim(op: &SemilinearOp) -> StableResult {
    let m = op.dim();
    let field = &op.field;
    let mut product = Matrix::identity(m);
    let mut ranks = vec![m];
    let mut k = 0i32;
    loop {
        let next = product.mul(field, &op.frob_matrix(op.twist * k));
        let r = next.rank(field);
        let prev = *ranks.last().unwrap();
        ranks.push(r);
        if r == prev {
            let basis = product.column_space(field);
            return StableResult { dim: prev, index: k as usize, ranks, basis };
        }
        product = next;
        k += 1;
    }
}

/// `F_p`-dimension of `{c in F_{q^r}^m : A c^{[p]} = c}`.
pub fn fixed_dim(op: &SemilinearOp, r: u32) -> Result<usize> {
    if op.twist != 1 {
        return Err(Error::NotPSemilinear);
    }
    let emb = op.field.extend(r)?;
    let big = op.base_change(&emb);
    let k = &big.field;
    let p = k.characteristic();
    let e = k.degree() as usize;
    let m = op.dim();
    let prime = FieldDesc::prime(p)?;
    let n = m * e;
    let mut columns = Vec::with_capacity(n);
    for coord in 0..m {
        let mut digit = 1u32;
        for _ in 0..e {
            let mut v = vec![FqElem::ZERO; m];
            v[coord] = k.elem(digit);
            let image = big.apply(&v);
            let diff: Vec<FqElem> = image.iter().zip(&v).map(|(&a, &b)| k.sub(a, b)).collect();
            let col: Vec<FqElem> = diff
                .iter()
                .flat_map(|&x| k.to_coeffs(x))
                .map(|c| prime.elem(c))
                .collect();
            columns.push(col);
            digit = digit.wrapping_mul(p);
        }
    }
    let lin = Matrix::from_columns(n, &columns);
    Ok(n - lin.rank(&prime))
}

/// Stable part of the dual (transposed, twist-negated) operator.
pub fn dual_stable_equivalence(op: &SemilinearOp) -> StableResult {
    stable_dim(&op.dual())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(field: &FieldDesc, rows: &[&[u32]], twist: i32) -> SemilinearOp {
        let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| field.elem(x)).collect()).collect());
        SemilinearOp::new(field.clone(), m, twist).unwrap()
    }

    #[test]
    fn identity_is_stable_at_index_zero() {
        let f = FieldDesc::new(3, 2).unwrap();
        for twist in [1, -1] {
            let s = stable_dim(&op(&f, &[&[1, 0], &[0, 1]], twist));
            assert_eq!((s.dim, s.index), (2, 0));
        }
    }

    #[test]
    fn nilpotent_and_projection() {
        let f2 = FieldDesc::prime(2).unwrap();
        assert_eq!(stable_dim(&op(&f2, &[&[0, 1], &[0, 0]], 1)).dim, 0);
        assert_eq!(stable_dim(&op(&f2, &[&[1, 0], &[0, 0]], 1)).dim, 1);
        let zero = op(&f2, &[&[0]], 1);
        assert_eq!(stable_dim(&zero).dim, 0);
        assert_eq!(dual_stable_equivalence(&zero).dim, 0);
    }

    #[test]
    fn fixed_points_small_cases() {
        let f5 = FieldDesc::prime(5).unwrap();
        assert_eq!(fixed_dim(&op(&f5, &[&[1]], 1), 1).unwrap(), 1);
        let f4 = FieldDesc::new(2, 2).unwrap();
        let w = f4.generator().index();
        assert_eq!(fixed_dim(&op(&f4, &[&[w]], 1), 1).unwrap(), 1);
        for r in 1..4 {
            assert_eq!(fixed_dim(&op(&f5, &[&[0]], 1), r).unwrap(), 0);
        }
        assert!(matches!(fixed_dim(&op(&f5, &[&[1]], -1), 1), Err(Error::NotPSemilinear)));
    }

    #[test]
    fn fixed_points_of_omega_by_enumeration() {
        // c^2 * w = c over F_4 has solutions {0, w^2}
        let f4 = FieldDesc::new(2, 2).unwrap();
        let w = f4.generator();
        let sols: Vec<FqElem> = f4.elements().filter(|&c| f4.mul(f4.mul(c, c), w) == c).collect();
        assert_eq!(sols, vec![FqElem::ZERO, f4.mul(w, w)]);
    }

    #[test]
    fn stable_part_is_bijective() {
        let f3 = FieldDesc::new(3, 2).unwrap();
        let a = op(&f3, &[&[1, 2, 0], &[0, 0, 0], &[4, 1, 0]], -1);
        let s = stable_dim(&a);
        let t = a.restrict_to_stable(&s).unwrap();
        assert_eq!(t.rank(&f3), s.dim);
    }

    #[test]
    fn serialization_round_trip() {
        let f = FieldDesc::new(5, 2).unwrap();
        let a = op(&f, &[&[7, 0], &[3, 24]], -1);
        assert_eq!(SemilinearOp::deserialize(&a.serialize()).unwrap(), a);
    }
}
