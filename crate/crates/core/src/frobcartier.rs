//! Frobenius pullback of resolutions, the comparison lift of
//! `R/I^{[p]} -> R/I`, and the induced Cartier operator on
//! `Ext^{n-j}(R/I, R)_{-(n+1)}`.
//!
//! For a cocycle `z` in `Hom(F_i, R)` of degree `-(n+1)`, the operator sends
//! `z` to the trace of `z ∘ u_i`, where the trace keeps the component along
//! `(x_0 ... x_n)^{p-1}` of the splitting `F_* R = ⊕_a x^a R^p` and takes a
//! p-th root. The trace is `p^{-1}`-linear and commutes with the dual
//! differentials, so it descends to cohomology.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::FqElem;
use crate::groebner::Budget;
use crate::homalg::{ext_graded_piece, GradedFreeModule, GradedMatrix, GradedPiece, FreeResolution};
use crate::linalg::Matrix;
use crate::polyring::{Monomial, Poly, PolyRing};
use crate::semilinear::SemilinearOp;

/// `F^* F_•`: entries raised to the p-th power and twists multiplied by p.
/// Resolves `R/I^{[p]}` because Frobenius is flat on a regular ring.
pub fn frobenius_pullback(res: &FreeResolution) -> FreeResolution {
    let ring = &res.ring;
    FreeResolution {
        ring: ring.clone(),
        diffs: res.diffs.iter().map(|d| d.frobenius(ring)).collect(),
        lifters: res.lifters.iter().map(|g| g.frobenius(ring)).collect(),
    }
}

/// Chain map `u_i: (F^*F)_i -> F_i` over the surjection `R/I^{[p]} -> R/I`.
#[derive(Clone, Debug)]
pub struct ChainMapLift {
    pub maps: Vec<GradedMatrix>,
}

/// Lifts the identity on `R` to a chain map from `pullback` to `res` by
/// successive division: each column of `u_{i-1} ∘ (F^*d)_i` lies in the
/// image of `d_i` and is lifted through it.
pub fn lift_chain_map(res: &FreeResolution, pullback: &FreeResolution, budget: &Budget) -> Result<ChainMapLift> {
    let ring = &res.ring;
    let mut maps = vec![GradedMatrix::identity(&GradedFreeModule::new(vec![0]))];
    for i in 1..=res.length() {
        budget.check()?;
        let prev = &maps[i - 1];
        let pulled = pullback.differential(i);
        let mut columns = Vec::with_capacity(pulled.ncols());
        for c in 0..pulled.ncols() {
            let y = prev.apply(ring, &pulled.column(c))?;
            columns.push(res.lift_through(i, &y)?);
        }
        let u = GradedMatrix::from_columns(res.module(i), pullback.module(i), columns);
        maps.push(u);
    }
    Ok(ChainMapLift { maps })
}

/// `d_i ∘ u_i = u_{i-1} ∘ (F^*d)_i` for every `i`.
pub fn squares_commute(res: &FreeResolution, pullback: &FreeResolution, lift: &ChainMapLift) -> Result<bool> {
    let ring = &res.ring;
    for i in 1..=res.length() {
        let left = res.differential(i).mul(ring, &lift.maps[i])?;
        let right = lift.maps[i - 1].mul(ring, &pullback.differential(i))?;
        if left != right {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which resolution and lift produced a Cartier matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub ext_index: usize,
    pub degree: i64,
    pub resolution_ranks: Vec<usize>,
    pub resolution_twists: Vec<Vec<i64>>,
    pub ambient_dim: usize,
    pub generator_step: u32,
}

/// The Cartier operator on `Ext^{n-j}(R/I,R)_{-(n+1)}` in the basis of
/// fixed homology representatives.
#[derive(Clone, Debug)]
pub struct CartierData {
    pub op: SemilinearOp,
    pub piece: GradedPiece,
    pub provenance: Provenance,
}

/// Ext index `n - j` for a ring in `n + 1` variables.
pub fn ext_index(ring: &PolyRing, j: usize) -> Result<usize> {
    let n = ring.nvars() - 1;
    if j == 0 || j > n {
        return Err(Error::OutOfRange(format!("j = {j} (must satisfy 0 < j <= {n})")));
    }
    Ok(n - j)
}

/// Image of the cocycle `z` (coordinates in `piece`) under the Cartier
/// operator, again as a cocycle in coordinates.
pub fn cartier_on_cocycle(
    res: &FreeResolution,
    lift: &ChainMapLift,
    piece: &GradedPiece,
    z: &[FqElem],
) -> Result<Vec<FqElem>> {
    let ring = &res.ring;
    let i = piece.index;
    let comps = piece.coords.components(ring, z);
    let u = lift
        .maps
        .get(i)
        .ok_or_else(|| Error::Internal(format!("chain lift has no component {i}")))?;
    let mut image = Vec::with_capacity(u.ncols());
    for s in 0..u.ncols() {
        let mut w = ring.zero();
        for (t, zt) in comps.iter().enumerate() {
            w = ring.add(&w, &ring.mul(zt, u.entry(t, s)))?;
        }
        image.push(ring.cartier_trace(&w));
    }
    Ok(piece.coords.coords(&image))
}

/// Cartier data for `Ext^{n-j}` given a resolution and its Frobenius lift.
pub fn cartier_from_lift(res: &FreeResolution, lift: &ChainMapLift, j: usize, step: u32) -> Result<CartierData> {
    let ring = &res.ring;
    let i = ext_index(ring, j)?;
    let degree = -(ring.nvars() as i64);
    let piece = ext_graded_piece(res, i, degree)?;
    let m = piece.dim();
    let mut columns = Vec::with_capacity(m);
    if i <= res.length() {
        for z in piece.basis() {
            let v = cartier_on_cocycle(res, lift, &piece, z)?;
            columns.push(piece.classify(ring, &v)?);
        }
    }
    let op = SemilinearOp::new(ring.field().clone(), Matrix::from_columns(m, &columns), -1)?;
    let provenance = Provenance {
        ext_index: i,
        degree,
        resolution_ranks: res.ranks(),
        resolution_twists: (0..=res.length()).map(|k| res.module(k).twists).collect(),
        ambient_dim: piece.ambient_dim(),
        generator_step: step,
    };
    Ok(CartierData { op, piece, provenance })
}

/// The whole chain for one `j`: pull back, lift, extract.
pub fn cartier_on_ext_piece(res: &FreeResolution, j: usize, budget: &Budget) -> Result<CartierData> {
    let pullback = frobenius_pullback(res);
    let lift = lift_chain_map(res, &pullback, budget)?;
    cartier_from_lift(res, &lift, j, 0)
}

/// The same construction one colimit step up: on `R/I^{[p]}` with the
/// pulled-back resolution and its own bracket surjection.
pub fn cartier_one_step_up(res: &FreeResolution, j: usize, budget: &Budget) -> Result<CartierData> {
    let up = frobenius_pullback(res);
    let up2 = frobenius_pullback(&up);
    let lift = lift_chain_map(&up, &up2, budget)?;
    cartier_from_lift(&up, &lift, j, 1)
}

/// Hasse–Witt matrix of a hypersurface `f` of degree `d` in `n+1`
/// variables: indexed by degree `d-n-1` monomials, entry `(v,u)` is the
/// p-th root of the coefficient of `x^{p v + (p-1) 1 - u}` in `f^{p-1}`.
pub fn hasse_witt_hypersurface(ring: &PolyRing, f: &Poly) -> Result<SemilinearOp> {
    let field = ring.field();
    let nvars = ring.nvars();
    let d = f
        .degree()
        .ok_or_else(|| Error::InvalidInput("hypersurface equation is zero".into()))? as i64;
    if !ring.is_homogeneous(f) {
        return Err(Error::InvalidInput("hypersurface equation must be homogeneous".into()));
    }
    let p = field.characteristic();
    let basis = ring.monomials_of_degree(d - nvars as i64);
    let power = ring.pow(f, p - 1);
    let m = basis.len();
    let mut matrix = Matrix::zeros(m, m);
    for (col, u) in basis.iter().enumerate() {
        for (row, v) in basis.iter().enumerate() {
            let exps: Option<Vec<u32>> = (0..nvars)
                .map(|k| u32::try_from(p as i64 * v.exponent(k) as i64 + (p as i64 - 1) - u.exponent(k) as i64).ok())
                .collect();
            if let Some(exps) = exps {
                let c = power.coeff(&Monomial::from_exponents(&exps));
                matrix.set(row, col, field.frob(c, -1));
            }
        }
    }
    SemilinearOp::new(field.clone(), matrix, -1)
}
