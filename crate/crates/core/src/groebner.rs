//! Gröbner bases for homogeneous submodules of graded free modules.
//!
//! One engine serves ideals (rank one) and submodules. It runs a
//! degree-by-degree Buchberger: critical pairs and input generators are
//! processed in increasing degree, so an input that reduces to zero is
//! redundant given the inputs before it. This yields minimal generating
//! subsets for free. When tracking is on, every element carries its
//! expression in terms of the inputs, and every reduction to zero produces
//! a syzygy; by Schreyer's theorem those syzygies generate the full syzygy
//! module.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::FqElem;
use crate::homalg::{GradedFreeModule, GradedMatrix};
use crate::polyring::{Ideal, Monomial, Poly, PolyRing, Term};

/// Cooperative deadline checked inside long-running loops.
#[derive(Clone, Debug, Default)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { deadline: None }
    }

    pub fn seconds(secs: u64) -> Self {
        Budget { deadline: Some(Instant::now() + Duration::from_secs(secs)) }
    }

    pub fn check(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::BudgetExceeded),
            _ => Ok(()),
        }
    }
}

/// `coeff * mono * e_comp`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VTerm {
    pub mono: Monomial,
    pub comp: u32,
    pub coeff: FqElem,
}

/// An element of a free module, terms sorted descending (monomial first,
/// then lower component index first).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vector {
    terms: Vec<VTerm>,
}

impl Vector {
    pub fn zero() -> Self {
        Vector::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[VTerm] {
        &self.terms
    }

    pub fn leading(&self) -> Option<&VTerm> {
        self.terms.first()
    }

    /// Unit vector `e_comp`.
    pub fn unit(comp: usize) -> Self {
        Vector { terms: vec![VTerm { mono: Monomial::one(), comp: comp as u32, coeff: FqElem::ONE }] }
    }

    pub fn from_poly(f: &Poly, comp: usize) -> Self {
        Vector {
            terms: f.terms().iter().map(|t| VTerm { mono: t.mono, comp: comp as u32, coeff: t.coeff }).collect(),
        }
    }

    /// Builds a vector from per-component polynomials.
    pub fn from_components(ring: &PolyRing, comps: &[Poly]) -> Self {
        let mut terms: Vec<VTerm> = comps
            .iter()
            .enumerate()
            .flat_map(|(c, f)| f.terms().iter().map(move |t| VTerm { mono: t.mono, comp: c as u32, coeff: t.coeff }))
            .collect();
        terms.sort_by(|a, b| cmp_term(ring, b, a));
        Vector { terms }
    }

    /// Splits into `rank` component polynomials.
    pub fn components(&self, rank: usize) -> Vec<Poly> {
        let mut parts: Vec<Vec<Term>> = vec![Vec::new(); rank];
        for t in &self.terms {
            parts[t.comp as usize].push(Term { mono: t.mono, coeff: t.coeff });
        }
        parts.into_iter().map(Poly::from_sorted_terms).collect()
    }

    pub fn resort(&mut self, ring: &PolyRing) {
        self.terms.sort_by(|a, b| cmp_term(ring, b, a));
    }
}

pub(crate) fn cmp_term(ring: &PolyRing, a: &VTerm, b: &VTerm) -> Ordering {
    ring.cmp_mono(&a.mono, &b.mono).then_with(|| b.comp.cmp(&a.comp))
}

/// `v + c * m * w`.
fn axpy(ring: &PolyRing, v: &[VTerm], w: &[VTerm], m: &Monomial, c: FqElem) -> Vec<VTerm> {
    let field = ring.field();
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    let shifted = |t: &VTerm| VTerm { mono: t.mono.mul(m), comp: t.comp, coeff: field.mul(c, t.coeff) };
    while i < v.len() && j < w.len() {
        let b = shifted(&w[j]);
        match cmp_term(ring, &v[i], &b) {
            Ordering::Greater => {
                out.push(v[i]);
                i += 1;
            }
            Ordering::Less => {
                if !b.coeff.is_zero() {
                    out.push(b);
                }
                j += 1;
            }
            Ordering::Equal => {
                let coeff = field.add(v[i].coeff, b.coeff);
                if !coeff.is_zero() {
                    out.push(VTerm { coeff, ..b });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&v[i..]);
    for t in &w[j..] {
        let b = shifted(t);
        if !b.coeff.is_zero() {
            out.push(b);
        }
    }
    out
}

pub fn vec_axpy(ring: &PolyRing, v: &Vector, w: &Vector, m: &Monomial, c: FqElem) -> Vector {
    Vector { terms: axpy(ring, &v.terms, &w.terms, m, c) }
}

pub fn vec_scale(ring: &PolyRing, v: &Vector, c: FqElem) -> Vector {
    if c.is_zero() {
        return Vector::zero();
    }
    Vector { terms: v.terms.iter().map(|t| VTerm { coeff: ring.field().mul(c, t.coeff), ..*t }).collect() }
}

/// An element of a module Gröbner basis; `rep` expresses it in terms of the
/// engine inputs when tracking was requested.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GbElem {
    pub vec: Vector,
    pub rep: Option<Vector>,
    pub degree: i64,
}

impl GbElem {
    fn lead(&self) -> &VTerm {
        self.vec.leading().expect("basis elements are nonzero")
    }
}

/// A Gröbner basis of a submodule of `⊕ R(-twists[c])`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleGb {
    pub elems: Vec<GbElem>,
    pub twists: Vec<i64>,
    pub input_twists: Vec<i64>,
}

/// Outcome of one engine run.
#[derive(Clone, Debug)]
pub struct GbRun {
    pub gb: ModuleGb,
    /// Inputs that did not reduce to zero; a minimal generating subset.
    pub minimal: Vec<usize>,
    /// Syzygies among the inputs (tracked runs only), living in
    /// `⊕ R(-input_degrees[k])`.
    pub syzygies: Vec<Vector>,
}

impl ModuleGb {
    pub fn degree_of(&self, v: &Vector) -> Option<i64> {
        v.leading().map(|t| t.mono.degree() as i64 + self.twists[t.comp as usize])
    }

    fn find_divisor(&self, t: &VTerm, skip: Option<usize>) -> Option<usize> {
        self.elems.iter().enumerate().position(|(k, g)| {
            let l = g.lead();
            Some(k) != skip && l.comp == t.comp && l.mono.divides(&t.mono)
        })
    }

    /// Full reduction. Returns the remainder and, if `track`, the
    /// combination `sum c m rep_k` of the subtracted multiples.
    fn reduce(&self, ring: &PolyRing, v: &Vector, track: bool, skip: Option<usize>) -> (Vector, Vector) {
        let field = ring.field();
        let mut work: Vec<VTerm> = v.terms.clone();
        let mut start = 0;
        let mut out = Vec::new();
        let mut acc = Vector::zero();
        while start < work.len() {
            let lead = work[start];
            match self.find_divisor(&lead, skip) {
                Some(k) => {
                    let g = &self.elems[k];
                    let gl = g.lead();
                    let q = gl.mono.quotient_of(&lead.mono).expect("divisor");
                    let c = field.div(lead.coeff, gl.coeff).expect("nonzero lead");
                    work = axpy(ring, &work[start + 1..], &g.vec.terms[1..], &q, field.neg(c));
                    start = 0;
                    if track {
                        let rep = g.rep.as_ref().expect("tracked basis");
                        acc = vec_axpy(ring, &acc, rep, &q, c);
                    }
                }
                None => {
                    out.push(lead);
                    start += 1;
                }
            }
        }
        (Vector { terms: out }, acc)
    }

    pub fn normal_form(&self, ring: &PolyRing, v: &Vector) -> Vector {
        self.reduce(ring, v, false, None).0
    }

    pub fn contains(&self, ring: &PolyRing, v: &Vector) -> bool {
        self.normal_form(ring, v).is_zero()
    }

    /// Writes `v` as a combination of the engine inputs, if it lies in the
    /// module. Requires a tracked basis.
    pub fn lift(&self, ring: &PolyRing, v: &Vector) -> Option<Vector> {
        let (rem, acc) = self.reduce(ring, v, true, None);
        rem.is_zero().then_some(acc)
    }

    fn spair(&self, ring: &PolyRing, i: usize, j: usize, track: bool) -> (Vector, Option<Vector>) {
        let (gi, gj) = (&self.elems[i], &self.elems[j]);
        let (li, lj) = (gi.lead(), gj.lead());
        let l = li.mono.lcm(&lj.mono);
        let qi = li.mono.quotient_of(&l).unwrap();
        let qj = lj.mono.quotient_of(&l).unwrap();
        let field = ring.field();
        let ci = field.inv(li.coeff).unwrap();
        let cj = field.neg(field.inv(lj.coeff).unwrap());
        let s = vec_axpy(ring, &vec_axpy(ring, &Vector::zero(), &gi.vec, &qi, ci), &gj.vec, &qj, cj);
        let rep = track.then(|| {
            let ri = gi.rep.as_ref().unwrap();
            let rj = gj.rep.as_ref().unwrap();
            vec_axpy(ring, &vec_axpy(ring, &Vector::zero(), ri, &qi, ci), rj, &qj, cj)
        });
        (s, rep)
    }

    /// Buchberger certificate: every S-pair reduces to zero.
    pub fn audit(&self, ring: &PolyRing) -> bool {
        for i in 0..self.elems.len() {
            for j in i + 1..self.elems.len() {
                if self.elems[i].lead().comp != self.elems[j].lead().comp {
                    continue;
                }
                let (s, _) = self.spair(ring, i, j, false);
                if !self.normal_form(ring, &s).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Applies Frobenius to every element and representation; the image of
    /// a Gröbner basis is a Gröbner basis of the pulled-back module.
    pub fn frobenius(&self, ring: &PolyRing) -> ModuleGb {
        let p = ring.field().characteristic() as i64;
        let frob = |v: &Vector| Vector {
            terms: v
                .terms
                .iter()
                .map(|t| VTerm {
                    mono: t.mono.scale_exponents(p as u32),
                    comp: t.comp,
                    coeff: ring.field().frob(t.coeff, 1),
                })
                .collect(),
        };
        ModuleGb {
            elems: self
                .elems
                .iter()
                .map(|g| GbElem { vec: frob(&g.vec), rep: g.rep.as_ref().map(frob), degree: g.degree * p })
                .collect(),
            twists: self.twists.iter().map(|t| t * p).collect(),
            input_twists: self.input_twists.iter().map(|t| t * p).collect(),
        }
    }
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    degree: i64,
    j: usize,
    i: usize,
}

/// Runs the engine on homogeneous `inputs` of the given degrees inside
/// `⊕ R(-twists[c])`.
pub fn module_gb(
    ring: &PolyRing,
    twists: &[i64],
    inputs: &[Vector],
    input_degrees: &[i64],
    track: bool,
    budget: &Budget,
) -> Result<GbRun> {
    assert_eq!(inputs.len(), input_degrees.len());
    let field = ring.field();
    let mut gb = ModuleGb { elems: Vec::new(), twists: twists.to_vec(), input_twists: input_degrees.to_vec() };
    for (k, v) in inputs.iter().enumerate() {
        if let Some(d) = gb.degree_of(v) {
            if d != input_degrees[k] {
                return Err(Error::Internal(format!("input {k} has degree {d}, expected {}", input_degrees[k])));
            }
        }
    }
    let mut order: Vec<usize> = (0..inputs.len()).collect();
    order.sort_by_key(|&k| (input_degrees[k], k));
    let rank_one = twists.len() == 1;

    let mut heap: BinaryHeap<Reverse<PairKey>> = BinaryHeap::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut minimal = Vec::new();
    let mut syzygies = Vec::new();
    let mut next_input = 0;

    let insert = |gb: &mut ModuleGb,
                  heap: &mut BinaryHeap<Reverse<PairKey>>,
                  pending: &mut HashSet<(usize, usize)>,
                  v: Vector,
                  rep: Option<Vector>| {
        let lead = *v.leading().unwrap();
        let inv = field.inv(lead.coeff).unwrap();
        let v = vec_scale(ring, &v, inv);
        let rep = rep.map(|r| vec_scale(ring, &r, inv));
        let degree = gb.degree_of(&v).unwrap();
        let new = gb.elems.len();
        gb.elems.push(GbElem { vec: v, rep, degree });
        for (i, g) in gb.elems[..new].iter().enumerate() {
            let l = g.lead();
            if l.comp != lead.comp {
                continue;
            }
            if rank_one && !track && l.mono.is_coprime(&lead.mono) {
                continue;
            }
            let d = l.mono.lcm(&lead.mono).degree() as i64 + twists[lead.comp as usize];
            heap.push(Reverse(PairKey { degree: d, j: new, i }));
            pending.insert((i, new));
        }
    };

    loop {
        budget.check()?;
        let pair_deg = heap.peek().map(|Reverse(k)| k.degree);
        let input_deg = order.get(next_input).map(|&k| input_degrees[k]);
        let d = match (pair_deg, input_deg) {
            (None, None) => break,
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.min(b),
        };
        while heap.peek().is_some_and(|Reverse(k)| k.degree == d) {
            budget.check()?;
            let Reverse(PairKey { i, j, .. }) = heap.pop().unwrap();
            pending.remove(&(i, j));
            let lcm = gb.elems[i].lead().mono.lcm(&gb.elems[j].lead().mono);
            let comp = gb.elems[i].lead().comp;
            let chain = (0..gb.elems.len()).any(|k| {
                k != i
                    && k != j
                    && gb.elems[k].lead().comp == comp
                    && gb.elems[k].lead().mono.divides(&lcm)
                    && !pending.contains(&(i.min(k), i.max(k)))
                    && !pending.contains(&(j.min(k), j.max(k)))
            });
            if chain {
                continue;
            }
            let (s, rep) = gb.spair(ring, i, j, track);
            let (rem, acc) = gb.reduce(ring, &s, track, None);
            let rep = rep.map(|r| vec_axpy(ring, &r, &acc, &Monomial::one(), field.neg(FqElem::ONE)));
            if rem.is_zero() {
                if let Some(r) = rep {
                    if !r.is_zero() {
                        syzygies.push(r);
                    }
                }
            } else {
                insert(&mut gb, &mut heap, &mut pending, rem, rep);
            }
        }
        while order.get(next_input).is_some_and(|&k| input_degrees[k] == d) {
            let k = order[next_input];
            next_input += 1;
            let (rem, acc) = gb.reduce(ring, &inputs[k], track, None);
            let rep = track
                .then(|| vec_axpy(ring, &Vector::unit(k), &acc, &Monomial::one(), field.neg(FqElem::ONE)));
            if rem.is_zero() {
                if let Some(r) = rep {
                    syzygies.push(r);
                }
            } else {
                minimal.push(k);
                insert(&mut gb, &mut heap, &mut pending, rem, rep);
            }
        }
    }
    for s in &mut syzygies {
        s.resort(ring);
    }
    Ok(GbRun { gb, minimal, syzygies })
}

/// Interreduces a basis: drops elements whose leading term is divisible by
/// another's and reduces tails. Representations are discarded.
pub fn interreduce(ring: &PolyRing, gb: &ModuleGb) -> ModuleGb {
    let mut keep: Vec<GbElem> = Vec::new();
    for (k, g) in gb.elems.iter().enumerate() {
        let l = g.lead();
        let redundant = gb.elems.iter().enumerate().any(|(i, h)| {
            let hl = h.lead();
            i != k && hl.comp == l.comp && hl.mono.divides(&l.mono) && (hl.mono != l.mono || i < k)
        });
        if !redundant {
            keep.push(GbElem { vec: g.vec.clone(), rep: None, degree: g.degree });
        }
    }
    let mut out = ModuleGb { elems: keep, twists: gb.twists.clone(), input_twists: gb.input_twists.clone() };
    for k in 0..out.elems.len() {
        let (rem, _) = out.reduce(ring, &out.elems[k].vec, false, Some(k));
        let inv = ring.field().inv(rem.leading().unwrap().coeff).unwrap();
        out.elems[k].vec = vec_scale(ring, &rem, inv);
    }
    out.elems.sort_by(|a, b| cmp_term(ring, b.lead(), a.lead()));
    out
}

/// Reduced Gröbner basis of an ideal: monic, autoreduced, sorted by
/// descending leading monomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerBasis {
    elements: Vec<Poly>,
}

impl GroebnerBasis {
    pub fn elements(&self) -> &[Poly] {
        &self.elements
    }

    pub fn as_module(&self) -> ModuleGb {
        ModuleGb {
            elems: self
                .elements
                .iter()
                .map(|f| GbElem { vec: Vector::from_poly(f, 0), rep: None, degree: f.degree().unwrap() as i64 })
                .collect(),
            twists: vec![0],
            input_twists: Vec::new(),
        }
    }
}

pub fn reduced_gb(ring: &PolyRing, gens: &[Poly], budget: &Budget) -> Result<GroebnerBasis> {
    let gens: Vec<&Poly> = gens.iter().filter(|g| !g.is_zero()).collect();
    let inputs: Vec<Vector> = gens.iter().map(|g| Vector::from_poly(g, 0)).collect();
    let degrees: Vec<i64> = gens.iter().map(|g| g.degree().unwrap() as i64).collect();
    let run = module_gb(ring, &[0], &inputs, &degrees, false, budget)?;
    let reduced = interreduce(ring, &run.gb);
    let elements = reduced.elems.iter().map(|g| g.vec.components(1).remove(0)).collect();
    Ok(GroebnerBasis { elements })
}

pub fn normal_form(ring: &PolyRing, f: &Poly, gb: &GroebnerBasis) -> Poly {
    gb.as_module().normal_form(ring, &Vector::from_poly(f, 0)).components(1).remove(0)
}

/// Equality of ideals by comparing reduced Gröbner bases.
pub fn ideal_equal(a: &Ideal, b: &Ideal) -> bool {
    a.ring().order() == b.ring().order() && a.gb() == b.gb()
}

/// Minimal generating subset of the columns of `m`, in the original order.
pub fn minimal_columns(ring: &PolyRing, m: &GradedMatrix, budget: &Budget) -> Result<GradedMatrix> {
    let cols: Vec<Vector> = (0..m.ncols()).map(|j| m.column_vector(ring, j)).collect();
    let run = module_gb(ring, &m.target.twists, &cols, &m.source.twists, false, budget)?;
    let mut keep = run.minimal;
    keep.sort_unstable();
    Ok(m.select_columns(&keep))
}

/// Syzygies of the columns of `m` together with the tracked basis used to
/// lift elements of the image of `m`.
pub fn syzygies_with_lifter(ring: &PolyRing, m: &GradedMatrix, budget: &Budget) -> Result<(GradedMatrix, ModuleGb)> {
    let cols: Vec<Vector> = (0..m.ncols()).map(|j| m.column_vector(ring, j)).collect();
    let run = module_gb(ring, &m.target.twists, &cols, &m.source.twists, true, budget)?;
    let raw = run.syzygies;
    let degrees: Vec<i64> = raw
        .iter()
        .map(|v| {
            let t = v.leading().unwrap();
            t.mono.degree() as i64 + m.source.twists[t.comp as usize]
        })
        .collect();
    let min = module_gb(ring, &m.source.twists, &raw, &degrees, false, budget)?;
    let mut keep = min.minimal;
    keep.sort_by_key(|&k| (degrees[k], k));
    let source = GradedFreeModule::new(keep.iter().map(|&k| degrees[k]).collect());
    let columns: Vec<Vector> = keep.iter().map(|&k| raw[k].clone()).collect();
    let syz = GradedMatrix::from_column_vectors(ring, m.source.clone(), source, &columns);
    Ok((syz, run.gb))
}

/// Generators of the kernel of a graded matrix, minimal.
pub fn syzygies(ring: &PolyRing, m: &GradedMatrix, budget: &Budget) -> Result<GradedMatrix> {
    Ok(syzygies_with_lifter(ring, m, budget)?.0)
}
