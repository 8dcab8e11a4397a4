//! Graded free resolutions, dual complexes, Ext modules and Hilbert series.
//!
//! Conventions: a [`GradedFreeModule`] with twists `a_t` is `⊕ R(-a_t)`, so
//! its basis vector `e_t` sits in degree `a_t`. The dual `Hom(F, R)` has
//! twists `-a_t`. Graded pieces are coordinatized by pairs
//! `(component, monomial)` with monomials in the ring's descending order.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::FqElem;
use crate::groebner::{self, Budget, ModuleGb, Vector};
use crate::linalg::{Matrix, ReducedSpan};
use crate::polyring::{Ideal, Monomial, Poly, PolyRing};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedFreeModule {
    pub twists: Vec<i64>,
}

impl GradedFreeModule {
    pub fn new(twists: Vec<i64>) -> Self {
        GradedFreeModule { twists }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn dual(&self) -> Self {
        GradedFreeModule { twists: self.twists.iter().map(|t| -t).collect() }
    }

    pub fn scaled(&self, k: i64) -> Self {
        GradedFreeModule { twists: self.twists.iter().map(|t| t * k).collect() }
    }
}

/// Coordinates of the degree-`d` piece of a graded free module.
#[derive(Clone, Debug)]
pub struct PieceBasis {
    pub degree: i64,
    pub monomials: Vec<Vec<Monomial>>,
    offsets: Vec<usize>,
    index: Vec<HashMap<Monomial, usize>>,
}

impl PieceBasis {
    pub fn new(ring: &PolyRing, module: &GradedFreeModule, degree: i64) -> Self {
        let monomials: Vec<Vec<Monomial>> =
            module.twists.iter().map(|a| ring.monomials_of_degree(degree - a)).collect();
        let mut offsets = Vec::with_capacity(monomials.len());
        let mut total = 0;
        for m in &monomials {
            offsets.push(total);
            total += m.len();
        }
        let index = monomials.iter().map(|ms| ms.iter().enumerate().map(|(k, m)| (*m, k)).collect()).collect();
        PieceBasis { degree, monomials, offsets, index }
    }

    pub fn dim(&self) -> usize {
        self.monomials.iter().map(Vec::len).sum()
    }

    pub fn position(&self, comp: usize, m: &Monomial) -> Option<usize> {
        self.index[comp].get(m).map(|k| self.offsets[comp] + k)
    }

    /// Coordinates of a homogeneous vector of this degree.
    pub fn coords(&self, components: &[Poly]) -> Vec<FqElem> {
        let mut out = vec![FqElem::ZERO; self.dim()];
        for (c, f) in components.iter().enumerate() {
            for t in f.terms() {
                let k = self.position(c, &t.mono).expect("vector has the piece's degree");
                out[k] = t.coeff;
            }
        }
        out
    }

    /// Component polynomials of a coordinate vector.
    pub fn components(&self, ring: &PolyRing, coords: &[FqElem]) -> Vec<Poly> {
        self.monomials
            .iter()
            .enumerate()
            .map(|(c, ms)| {
                let terms = ms.iter().enumerate().map(|(k, m)| (*m, coords[self.offsets[c] + k]));
                ring.from_terms(terms).expect("single degree")
            })
            .collect()
    }
}

/// A graded map `source -> target` between twisted free modules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedMatrix {
    pub target: GradedFreeModule,
    pub source: GradedFreeModule,
    entries: Vec<Poly>,
}

impl GradedMatrix {
    pub fn from_rows(
        ring: &PolyRing,
        target: GradedFreeModule,
        source: GradedFreeModule,
        rows: Vec<Vec<Poly>>,
    ) -> Result<Self> {
        if rows.len() != target.rank() || rows.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::InvalidInput("matrix shape does not match modules".into()));
        }
        let m = GradedMatrix { target, source, entries: rows.into_iter().flatten().collect() };
        m.check_degrees(ring)?;
        Ok(m)
    }

    /// Shape and degree consistency of every entry.
    pub fn check_degrees(&self, ring: &PolyRing) -> Result<()> {
        if self.entries.len() != self.nrows() * self.ncols() {
            return Err(Error::InvalidInput("matrix shape does not match modules".into()));
        }
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                let f = self.entry(i, j);
                if f.is_zero() {
                    continue;
                }
                let want = self.source.twists[j] - self.target.twists[i];
                if !ring.is_homogeneous(f) || f.degree().map(|d| d as i64) != Some(want) {
                    return Err(Error::InvalidInput(format!("entry ({i},{j}) must be homogeneous of degree {want}")));
                }
            }
        }
        Ok(())
    }

    pub fn zero(target: GradedFreeModule, source: GradedFreeModule) -> Self {
        let n = target.rank() * source.rank();
        GradedMatrix { target, source, entries: vec![Poly::default(); n] }
    }

    pub fn identity(module: &GradedFreeModule) -> Self {
        let mut m = Self::zero(module.clone(), module.clone());
        let one = Poly::from_sorted_terms(vec![crate::polyring::Term { mono: Monomial::one(), coeff: FqElem::ONE }]);
        for i in 0..module.rank() {
            m.entries[i * module.rank() + i] = one.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.target.rank()
    }

    pub fn ncols(&self) -> usize {
        self.source.rank()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.ncols() + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn column_vector(&self, ring: &PolyRing, j: usize) -> Vector {
        let comps: Vec<Poly> = (0..self.nrows()).map(|i| self.entry(i, j).clone()).collect();
        Vector::from_components(ring, &comps)
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.nrows()).map(|i| self.entry(i, j).clone()).collect()
    }

    pub fn from_column_vectors(
        ring: &PolyRing,
        target: GradedFreeModule,
        source: GradedFreeModule,
        columns: &[Vector],
    ) -> Self {
        let _ = ring;
        let (r, c) = (target.rank(), source.rank());
        let mut entries = vec![Poly::default(); r * c];
        for (j, v) in columns.iter().enumerate() {
            for (i, f) in v.components(r).into_iter().enumerate() {
                entries[i * c + j] = f;
            }
        }
        GradedMatrix { target, source, entries }
    }

    pub fn from_columns(target: GradedFreeModule, source: GradedFreeModule, columns: Vec<Vec<Poly>>) -> Self {
        let (r, c) = (target.rank(), source.rank());
        let mut entries = vec![Poly::default(); r * c];
        for (j, col) in columns.into_iter().enumerate() {
            for (i, f) in col.into_iter().enumerate() {
                entries[i * c + j] = f;
            }
        }
        GradedMatrix { target, source, entries }
    }

    pub fn select_columns(&self, keep: &[usize]) -> Self {
        let source = GradedFreeModule::new(keep.iter().map(|&k| self.source.twists[k]).collect());
        let columns = keep.iter().map(|&k| self.column(k)).collect();
        Self::from_columns(self.target.clone(), source, columns)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn concat(&self, other: &GradedMatrix) -> Result<Self> {
        if self.target != other.target {
            return Err(Error::Internal("concatenating maps with different targets".into()));
        }
        let mut twists = self.source.twists.clone();
        twists.extend_from_slice(&other.source.twists);
        let columns = (0..self.ncols()).map(|j| self.column(j)).chain((0..other.ncols()).map(|j| other.column(j))).collect();
        Ok(Self::from_columns(self.target.clone(), GradedFreeModule::new(twists), columns))
    }

    /// Composite `self ∘ other`.
    pub fn mul(&self, ring: &PolyRing, other: &GradedMatrix) -> Result<Self> {
        if self.source.rank() != other.target.rank() {
            return Err(Error::Internal("dimension mismatch in matrix product".into()));
        }
        let (r, c) = (self.nrows(), other.ncols());
        let mut entries = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                let mut acc = ring.zero();
                for k in 0..self.ncols() {
                    let prod = ring.mul(self.entry(i, k), other.entry(k, j));
                    acc = ring.add(&acc, &prod)?;
                }
                entries.push(acc);
            }
        }
        Ok(GradedMatrix { target: self.target.clone(), source: other.source.clone(), entries })
    }

    /// The dual map `Hom(target, R) -> Hom(source, R)`: the transpose with
    /// negated twists.
    pub fn dual(&self) -> Self {
        let (r, c) = (self.nrows(), self.ncols());
        let mut entries = Vec::with_capacity(r * c);
        for j in 0..c {
            for i in 0..r {
                entries.push(self.entry(i, j).clone());
            }
        }
        GradedMatrix { target: self.source.dual(), source: self.target.dual(), entries }
    }

    /// Frobenius pullback: entries to their p-th powers, twists times p.
    pub fn frobenius(&self, ring: &PolyRing) -> Self {
        let p = ring.field().characteristic() as i64;
        GradedMatrix {
            target: self.target.scaled(p),
            source: self.source.scaled(p),
            entries: self.entries.iter().map(|f| ring.frobenius(f)).collect(),
        }
    }

    pub fn map_entries(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        GradedMatrix {
            target: self.target.clone(),
            source: self.source.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// The linear map on degree-`d` pieces, rows indexed by the target
    /// piece and columns by the source piece.
    pub fn coordinate_matrix(&self, ring: &PolyRing, d: i64) -> (Matrix, PieceBasis, PieceBasis) {
        let src = PieceBasis::new(ring, &self.source, d);
        let tgt = PieceBasis::new(ring, &self.target, d);
        let field = ring.field();
        let mut m = Matrix::zeros(tgt.dim(), src.dim());
        for (j, monos) in src.monomials.iter().enumerate() {
            for mono in monos {
                let col = src.position(j, mono).unwrap();
                for i in 0..self.nrows() {
                    for t in self.entry(i, j).terms() {
                        let row = tgt.position(i, &t.mono.mul(mono)).expect("graded entry");
                        let cur = m.get(row, col);
                        m.set(row, col, field.add(cur, t.coeff));
                    }
                }
            }
        }
        (m, tgt, src)
    }

    pub fn apply(&self, ring: &PolyRing, v: &[Poly]) -> Result<Vec<Poly>> {
        (0..self.nrows())
            .map(|i| {
                let mut acc = ring.zero();
                for (j, x) in v.iter().enumerate() {
                    acc = ring.add(&acc, &ring.mul(self.entry(i, j), x))?;
                }
                Ok(acc)
            })
            .collect()
    }
}

/// A graded free resolution `0 <- R/I <- F_0 <- F_1 <- ... <- F_L`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub ring: PolyRing,
    /// `diffs[k]` is `d_{k+1}: F_{k+1} -> F_k`.
    pub diffs: Vec<GradedMatrix>,
    /// Tracked Gröbner basis of the columns of each differential, used to
    /// lift elements of its image.
    pub lifters: Vec<ModuleGb>,
}

/// Serializable payload of a resolution (the ring is supplied on load).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResolutionData {
    pub diffs: Vec<GradedMatrix>,
    pub lifters: Vec<ModuleGb>,
}

impl FreeResolution {
    pub fn length(&self) -> usize {
        self.diffs.len()
    }

    /// `F_i`; zero beyond the length.
    pub fn module(&self, i: usize) -> GradedFreeModule {
        if i == 0 {
            GradedFreeModule::new(vec![0])
        } else if i <= self.diffs.len() {
            self.diffs[i - 1].source.clone()
        } else {
            GradedFreeModule::default()
        }
    }

    pub fn ranks(&self) -> Vec<usize> {
        (0..=self.length()).map(|i| self.module(i).rank()).collect()
    }

    /// `d_i: F_i -> F_{i-1}` for `i >= 1`, zero maps beyond the length.
    pub fn differential(&self, i: usize) -> GradedMatrix {
        assert!(i >= 1);
        if i <= self.diffs.len() {
            self.diffs[i - 1].clone()
        } else {
            GradedMatrix::zero(self.module(i - 1), self.module(i))
        }
    }

    /// Checks `d_i ∘ d_{i+1} = 0` for all `i`.
    pub fn is_complex(&self) -> Result<bool> {
        for w in self.diffs.windows(2) {
            if !w[0].mul(&self.ring, &w[1])?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Dimension of the homology of the resolution itself at index `i`,
    /// degree `d`.
    pub fn homology_dim(&self, i: usize, d: i64) -> usize {
        let field = self.ring.field();
        let here = PieceBasis::new(&self.ring, &self.module(i), d).dim();
        let cycles = if i == 0 {
            here
        } else {
            let (m, _, _) = self.differential(i).coordinate_matrix(&self.ring, d);
            here - m.rank(field)
        };
        let boundaries = self.differential(i + 1).coordinate_matrix(&self.ring, d).0.rank(field);
        cycles - boundaries
    }

    pub fn data(&self) -> ResolutionData {
        ResolutionData { diffs: self.diffs.clone(), lifters: self.lifters.clone() }
    }

    pub fn from_data(ring: PolyRing, data: ResolutionData) -> Self {
        FreeResolution { ring, diffs: data.diffs, lifters: data.lifters }
    }

    /// Lifts `y` in the image of `d_i` to a preimage in `F_i`.
    pub fn lift_through(&self, i: usize, y: &[Poly]) -> Result<Vec<Poly>> {
        let rank = self.module(i).rank();
        if y.iter().all(Poly::is_zero) {
            return Ok(vec![Poly::default(); rank]);
        }
        let lifter = self
            .lifters
            .get(i - 1)
            .ok_or_else(|| Error::Internal(format!("no lifter for d_{i}")))?;
        let v = Vector::from_components(&self.ring, y);
        let x = lifter
            .lift(&self.ring, &v)
            .ok_or_else(|| Error::Internal(format!("element is not in the image of d_{i}")))?;
        Ok(x.components(rank))
    }
}

/// Graded free resolution of `R/I` by iterated minimal syzygies, with at
/// most `length` differentials.
pub fn free_resolution(ideal: &Ideal, length: usize, budget: &Budget) -> Result<FreeResolution> {
    let ring = ideal.ring().clone();
    let gens = ideal.nonzero_gens();
    let mut res = FreeResolution { ring: ring.clone(), diffs: Vec::new(), lifters: Vec::new() };
    if gens.is_empty() || length == 0 {
        return Ok(res);
    }
    let twists = gens.iter().map(|g| g.degree().unwrap() as i64).collect();
    let d1 = GradedMatrix::from_rows(&ring, GradedFreeModule::new(vec![0]), GradedFreeModule::new(twists), vec![gens])?;
    let mut current = groebner::minimal_columns(&ring, &d1, budget)?;
    loop {
        let (syz, lifter) = groebner::syzygies_with_lifter(&ring, &current, budget)?;
        res.diffs.push(current);
        res.lifters.push(lifter);
        if syz.ncols() == 0 || res.diffs.len() >= length {
            break;
        }
        current = syz;
    }
    Ok(res)
}

/// The dual complex `Hom(F_0,R) -> Hom(F_1,R) -> ...`; entry `i` is
/// `δ_i = d_{i+1}^T: Hom(F_i,R) -> Hom(F_{i+1},R)`.
pub fn dualize(res: &FreeResolution) -> Vec<GradedMatrix> {
    res.diffs.iter().map(GradedMatrix::dual).collect()
}

/// `δ_i` including the zero maps at the ends.
pub fn dual_differential(res: &FreeResolution, i: usize) -> GradedMatrix {
    res.differential(i + 1).dual()
}

/// A graded piece of a cohomology module of the dual complex, with fixed
/// homology representatives.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub index: usize,
    pub degree: i64,
    pub coords: PieceBasis,
    /// Representatives: nonzero rows of a reduced echelon form of the
    /// cycles reduced modulo boundaries.
    pub representatives: ReducedSpan,
    pub boundaries: ReducedSpan,
    cocycle_check: Matrix,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.representatives.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.dim()
    }

    pub fn basis(&self) -> &[Vec<FqElem>] {
        &self.representatives.basis
    }

    /// Coordinates of the class of a cocycle in the representative basis.
    pub fn classify(&self, ring: &PolyRing, v: &[FqElem]) -> Result<Vec<FqElem>> {
        let field = ring.field();
        if !self.cocycle_check.mul_vec(field, v).iter().all(|x| x.is_zero()) {
            return Err(Error::Internal("vector is not a cocycle".into()));
        }
        let (rem, _) = self.boundaries.reduce(field, v);
        let (rest, coeffs) = self.representatives.reduce(field, &rem);
        if !rest.iter().all(|x| x.is_zero()) {
            return Err(Error::Internal("cocycle outside the representative span".into()));
        }
        Ok(coeffs)
    }
}

/// Number of dense matrix entries [`ext_graded_piece`] allocates for
/// `(i, d)`.
pub fn ext_piece_cost(res: &FreeResolution, i: usize, d: i64) -> u128 {
    let k = res.ring.nvars() as i64 - 1;
    let size = |m: GradedFreeModule| -> u128 { m.twists.iter().map(|&a| binomial(d + a + k, k) as u128).sum() };
    let below = if i == 0 { 0 } else { size(res.module(i - 1)) };
    size(res.module(i)) * (size(res.module(i + 1)) + below)
}

/// `Ext^i(R/I, R)_d` computed on the dual complex of `res`.
pub fn ext_graded_piece(res: &FreeResolution, i: usize, d: i64) -> Result<GradedPiece> {
    let n1 = res.ring.nvars();
    if i > n1 {
        return Err(Error::OutOfRange(format!("Ext index {i} (must be in [0, {n1}])")));
    }
    let ring = &res.ring;
    let field = ring.field();
    let outgoing = dual_differential(res, i);
    let (out_m, _, here) = outgoing.coordinate_matrix(ring, d);
    let boundary_vecs: Vec<Vec<FqElem>> = if i == 0 {
        Vec::new()
    } else {
        let (in_m, _, _) = dual_differential(res, i - 1).coordinate_matrix(ring, d);
        (0..in_m.cols()).map(|j| in_m.column(j)).collect()
    };
    let boundaries = ReducedSpan::new(field, here.dim(), &boundary_vecs);
    let cycles = out_m.kernel(field);
    let reduced: Vec<Vec<FqElem>> = cycles.iter().map(|c| boundaries.reduce(field, c).0).collect();
    let representatives = ReducedSpan::new(field, here.dim(), &reduced);
    Ok(GradedPiece { index: i, degree: d, coords: here, representatives, boundaries, cocycle_check: out_m })
}

/// A finitely presented graded module `coker(presentation)`.
#[derive(Clone, Debug)]
pub struct PresentedModule {
    pub ring: PolyRing,
    pub presentation: GradedMatrix,
}

impl PresentedModule {
    pub fn generators(&self) -> &GradedFreeModule {
        &self.presentation.target
    }

    /// Dimension of the degree-`d` piece by linear algebra.
    pub fn dim(&self, d: i64) -> usize {
        let (m, tgt, _) = self.presentation.coordinate_matrix(&self.ring, d);
        tgt.dim() - m.rank(self.ring.field())
    }

    pub fn is_zero_module(&self, budget: &Budget) -> Result<bool> {
        if self.presentation.nrows() == 0 {
            return Ok(true);
        }
        let cols: Vec<Vector> = (0..self.presentation.ncols()).map(|j| self.presentation.column_vector(&self.ring, j)).collect();
        let run = groebner::module_gb(
            &self.ring,
            &self.presentation.target.twists,
            &cols,
            &self.presentation.source.twists,
            false,
            budget,
        )?;
        Ok((0..self.presentation.nrows()).all(|c| run.gb.contains(&self.ring, &Vector::unit(c))))
    }
}

/// Presentation of `Ext^i(R/I, R)`: generators are kernel generators of
/// `δ_i`, relations are the lifted image of `δ_{i-1}` plus the kernel
/// syzygies.
pub fn present_homology(res: &FreeResolution, i: usize, budget: &Budget) -> Result<PresentedModule> {
    let ring = &res.ring;
    let n1 = ring.nvars();
    if i > n1 {
        return Err(Error::OutOfRange(format!("Ext index {i} (must be in [0, {n1}])")));
    }
    let here = res.module(i).dual();
    if here.rank() == 0 {
        let empty = GradedMatrix::zero(GradedFreeModule::default(), GradedFreeModule::default());
        return Ok(PresentedModule { ring: ring.clone(), presentation: empty });
    }
    let outgoing = dual_differential(res, i);
    let kernel = if outgoing.nrows() == 0 || outgoing.is_zero() {
        GradedMatrix::identity(&here)
    } else {
        groebner::syzygies(ring, &outgoing, budget)?
    };
    if kernel.ncols() == 0 {
        let empty = GradedMatrix::zero(GradedFreeModule::default(), GradedFreeModule::default());
        return Ok(PresentedModule { ring: ring.clone(), presentation: empty });
    }
    let (kernel_syz, lifter) = groebner::syzygies_with_lifter(ring, &kernel, budget)?;
    let mut relations = kernel_syz;
    if i > 0 {
        let incoming = dual_differential(res, i - 1);
        let mut lifted = Vec::with_capacity(incoming.ncols());
        for j in 0..incoming.ncols() {
            let col = incoming.column_vector(ring, j);
            let x = if col.is_zero() {
                Vector::zero()
            } else {
                lifter
                    .lift(ring, &col)
                    .ok_or_else(|| Error::Internal("image of δ_{i-1} not in kernel of δ_i".into()))?
            };
            lifted.push(x);
        }
        let image = GradedMatrix::from_column_vectors(ring, kernel.source.clone(), incoming.source.clone(), &lifted);
        relations = image.concat(&relations)?;
    }
    Ok(PresentedModule { ring: ring.clone(), presentation: relations })
}

/// Hilbert series `Q(t) / (1-t)^{nvars}` with a Laurent numerator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries {
    pub nvars: usize,
    /// Exponent of the first coefficient.
    pub shift: i64,
    pub numerator: Vec<i64>,
}

impl HilbertSeries {
    fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let terms: Vec<(i64, i64)> = terms.into_iter().collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return HilbertSeries { nvars, shift: 0, numerator: Vec::new() };
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut numerator = vec![0i64; (hi - lo + 1) as usize];
        for (e, c) in terms {
            numerator[(e - lo) as usize] += c;
        }
        let mut s = HilbertSeries { nvars, shift: lo, numerator };
        s.trim();
        s
    }

    fn trim(&mut self) {
        while self.numerator.last() == Some(&0) {
            self.numerator.pop();
        }
        let lead = self.numerator.iter().take_while(|&&c| c == 0).count();
        self.numerator.drain(..lead);
        self.shift += lead as i64;
        if self.numerator.is_empty() {
            self.shift = 0;
        }
    }

    /// Coefficient of `t^d` in the expanded series.
    pub fn coefficient(&self, d: i64) -> i64 {
        let n = self.nvars as i64 - 1;
        self.numerator
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let m = d - (self.shift + k as i64);
                if m < 0 {
                    0
                } else {
                    c * binomial(m + n, n)
                }
            })
            .sum()
    }

    /// True iff `(1-t)^{nvars}` divides the numerator.
    pub fn is_polynomial(&self) -> bool {
        let mut q = self.numerator.clone();
        for _ in 0..self.nvars {
            if q.is_empty() {
                return true;
            }
            // synthetic division by (1 - t): q = (1-t) * r  <=>  sum q = 0
            if q.iter().sum::<i64>() != 0 {
                return false;
            }
            let mut r = Vec::with_capacity(q.len() - 1);
            let mut acc = 0;
            for &c in &q[..q.len() - 1] {
                acc += c;
                r.push(acc);
            }
            q = r;
        }
        true
    }
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

/// Hilbert series of a presented module from a free resolution of its
/// cokernel presentation.
pub fn hilbert_series(m: &PresentedModule, budget: &Budget) -> Result<HilbertSeries> {
    let ring = &m.ring;
    let nvars = ring.nvars();
    let mut terms: Vec<(i64, i64)> = m.generators().twists.iter().map(|&a| (a, 1)).collect();
    if m.presentation.ncols() > 0 && !m.presentation.is_zero() {
        let nonzero: Vec<usize> = (0..m.presentation.ncols())
            .filter(|&j| !m.presentation.column(j).iter().all(Poly::is_zero))
            .collect();
        let mut current = groebner::minimal_columns(ring, &m.presentation.select_columns(&nonzero), budget)?;
        let mut sign = -1;
        loop {
            terms.extend(current.source.twists.iter().map(|&a| (a, sign)));
            let syz = groebner::syzygies(ring, &current, budget)?;
            if syz.ncols() == 0 {
                break;
            }
            current = syz;
            sign = -sign;
        }
    }
    Ok(HilbertSeries::from_terms(nvars, terms))
}

pub fn is_finite_length(m: &PresentedModule, budget: &Budget) -> Result<bool> {
    Ok(hilbert_series(m, budget)?.is_polynomial())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FieldDesc;
    use crate::polyring::MonomialOrder;

    fn ring(p: u32, vars: &[&str]) -> PolyRing {
        PolyRing::new(FieldDesc::prime(p).unwrap(), vars, MonomialOrder::Grevlex).unwrap()
    }

    fn ideal(r: &PolyRing, gens: &[&str]) -> Ideal {
        Ideal::new(r.clone(), gens.iter().map(|s| r.parse(s, None, 0).unwrap()).collect()).unwrap()
    }

    fn full(i: &Ideal) -> FreeResolution {
        free_resolution(i, i.ring().nvars() + 1, &Budget::unlimited()).unwrap()
    }

    #[test]
    fn koszul_shape() {
        let r = ring(3, &["x", "y", "z"]);
        let res = full(&ideal(&r, &["x", "y", "z"]));
        assert_eq!(res.ranks(), vec![1, 3, 3, 1]);
        assert_eq!(res.module(1).twists, vec![1, 1, 1]);
        assert_eq!(res.module(2).twists, vec![2, 2, 2]);
        assert_eq!(res.module(3).twists, vec![3]);
        assert!(res.is_complex().unwrap());
    }

    #[test]
    fn hypersurface_resolution_and_dual() {
        let r = ring(5, &["x", "y", "z"]);
        let res = full(&ideal(&r, &["y^2*z - x^3 - z^3"]));
        assert_eq!(res.ranks(), vec![1, 1]);
        assert_eq!(res.module(1).twists, vec![3]);
        let dual = dualize(&res);
        assert_eq!(dual[0].source.twists, vec![0]);
        assert_eq!(dual[0].target.twists, vec![-3]);
        assert_eq!(dual[0].dual(), res.diffs[0]);
    }

    #[test]
    fn ext_pieces_of_a_line_and_a_cubic() {
        let r = ring(5, &["x", "y", "z"]);
        let line = full(&ideal(&r, &["x"]));
        assert_eq!(ext_graded_piece(&line, 1, -3).unwrap().dim(), 0);
        let cubic = full(&ideal(&r, &["y^2*z - x^3 - z^3"]));
        assert_eq!(ext_graded_piece(&cubic, 1, -3).unwrap().dim(), 1);
        assert_eq!(ext_graded_piece(&cubic, 2, -3).unwrap().dim(), 0);
        assert!(ext_graded_piece(&cubic, 5, -3).is_err());
    }

    #[test]
    fn hilbert_series_basics() {
        let r = ring(3, &["x", "y", "z"]);
        let b = Budget::unlimited();
        let free = PresentedModule {
            ring: r.clone(),
            presentation: GradedMatrix::zero(GradedFreeModule::new(vec![0]), GradedFreeModule::default()),
        };
        let hs = hilbert_series(&free, &b).unwrap();
        assert_eq!((hs.shift, hs.numerator.clone()), (0, vec![1]));
        assert!(!hs.is_polynomial());

        let point = quotient(&r, &["x", "y", "z"]);
        let hs = hilbert_series(&point, &b).unwrap();
        assert_eq!(hs.numerator, vec![1, -3, 3, -1]);
        assert!(hs.is_polynomial());
        assert_eq!(hs.coefficient(0), 1);
        assert_eq!(hs.coefficient(1), 0);

        let cubic = quotient(&r, &["x^3 + y^3 + z^3"]);
        let hs = hilbert_series(&cubic, &b).unwrap();
        assert_eq!(hs.numerator, vec![1, 0, 0, -1]);
        assert!(!is_finite_length(&quotient(&r, &["x"]), &b).unwrap());
    }

    fn quotient(r: &PolyRing, gens: &[&str]) -> PresentedModule {
        let polys: Vec<Poly> = gens.iter().map(|s| r.parse(s, None, 0).unwrap()).collect();
        let twists = polys.iter().map(|g| g.degree().unwrap() as i64).collect();
        let m = GradedMatrix::from_rows(r, GradedFreeModule::new(vec![0]), GradedFreeModule::new(twists), vec![polys])
            .unwrap();
        PresentedModule { ring: r.clone(), presentation: m }
    }

    #[test]
    fn hypersurface_ext_presentation() {
        let r = ring(5, &["x", "y", "z"]);
        let res = full(&ideal(&r, &["x^3 + y^3 + z^3"]));
        let m = present_homology(&res, 1, &Budget::unlimited()).unwrap();
        assert_eq!(m.generators().twists, vec![-3]);
        for d in -6..4 {
            assert_eq!(m.dim(d), ext_graded_piece(&res, 1, d).unwrap().dim(), "degree {d}");
        }
        let zero = present_homology(&res, 2, &Budget::unlimited()).unwrap();
        assert_eq!(zero.generators().rank(), 0);
        let hom = present_homology(&res, 0, &Budget::unlimited()).unwrap();
        assert!(hom.is_zero_module(&Budget::unlimited()).unwrap());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(0, 0), 1);
    }
}
