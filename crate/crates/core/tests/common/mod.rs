#![allow(dead_code)]

use fmodlen_core::ffield::{FieldDesc, FqElem};
use fmodlen_core::groebner::Budget;
use fmodlen_core::homalg::{free_resolution, FreeResolution, GradedFreeModule, GradedMatrix, PresentedModule};
use fmodlen_core::linalg::Matrix;
use fmodlen_core::polyring::{Ideal, MonomialOrder, Poly, PolyRing};
use fmodlen_core::semilinear::SemilinearOp;

pub struct Case {
    pub name: &'static str,
    pub p: u32,
    pub vars: &'static [&'static str],
    pub gens: &'static [&'static str],
}

pub const XYZ: &[&str] = &["x", "y", "z"];
pub const XYZW: &[&str] = &["x", "y", "z", "w"];

/// Curves and surfaces of degree at most 4 over F_2, F_3, F_5, F_7.
pub const HYPERSURFACES: &[Case] = &[
    Case { name: "elliptic a=1 F5", p: 5, vars: XYZ, gens: &["y^2*z - x^3 - x*z^2"] },
    Case { name: "elliptic b=1 F5", p: 5, vars: XYZ, gens: &["y^2*z - x^3 - z^3"] },
    Case { name: "elliptic a=1 F7", p: 7, vars: XYZ, gens: &["y^2*z - x^3 - x*z^2"] },
    Case { name: "elliptic b=1 F7", p: 7, vars: XYZ, gens: &["y^2*z - x^3 - z^3"] },
    Case { name: "elliptic F3", p: 3, vars: XYZ, gens: &["y^2*z - x^3 - x^2*z - z^3"] },
    Case { name: "elliptic xyz F2", p: 2, vars: XYZ, gens: &["y^2*z + x*y*z + x^3 + z^3"] },
    Case { name: "elliptic j=0 F2", p: 2, vars: XYZ, gens: &["y^2*z + y*z^2 + x^3"] },
    Case { name: "Klein quartic F2", p: 2, vars: XYZ, gens: &["x^3*y + y^3*z + z^3*x"] },
    Case { name: "Fermat quartic curve F3", p: 3, vars: XYZ, gens: &["x^4 + y^4 + z^4"] },
    Case { name: "Klein quartic F5", p: 5, vars: XYZ, gens: &["x^3*y + y^3*z + z^3*x"] },
    Case { name: "Fermat quartic surface F3", p: 3, vars: XYZW, gens: &["x^4 + y^4 + z^4 + w^4"] },
    Case { name: "Fermat quartic surface F5", p: 5, vars: XYZW, gens: &["x^4 + y^4 + z^4 + w^4"] },
    Case { name: "quartic surface F2", p: 2, vars: XYZW, gens: &["x^4 + y^4 + z^4 + w^4 + x*y*z*w"] },
    Case { name: "cubic surface F2", p: 2, vars: XYZW, gens: &["x^3 + y^3 + z^3 + w^3"] },
    Case { name: "conic F3", p: 3, vars: XYZ, gens: &["x^2 + y*z"] },
    Case { name: "line F5", p: 5, vars: XYZ, gens: &["x"] },
    Case { name: "binary cubic F5", p: 5, vars: &["x", "y"], gens: &["x^3 + y^3"] },
];

/// Non-principal ideals.
pub const OTHERS: &[Case] = &[
    Case { name: "twisted cubic F3", p: 3, vars: XYZW, gens: &["x*z - y^2", "x*w - y*z", "y*w - z^2"] },
    Case { name: "two skew lines F2", p: 2, vars: XYZW, gens: &["x*z", "x*w", "y*z", "y*w"] },
    Case { name: "point in P2 F5", p: 5, vars: XYZ, gens: &["x", "y"] },
    Case { name: "line in P3 F3", p: 3, vars: XYZW, gens: &["x", "y"] },
    Case { name: "plane cubic in P3 F5", p: 5, vars: XYZW, gens: &["w", "y^2*z - x^3 - x*z^2"] },
    Case { name: "skew lines bracket square F2", p: 2, vars: XYZW, gens: &["x^2*z^2", "x^2*w^2", "y^2*z^2", "y^2*w^2"] },
    Case { name: "complete intersection curve F2", p: 2, vars: XYZW, gens: &["x*y + z*w", "x^2 + y^2 + z*w"] },
];

pub fn ring(case: &Case) -> PolyRing {
    PolyRing::new(FieldDesc::prime(case.p).unwrap(), case.vars, MonomialOrder::Grevlex).unwrap()
}

pub fn ideal_in(r: &PolyRing, gens: &[&str]) -> Ideal {
    let gens = gens.iter().enumerate().map(|(k, s)| r.parse(s, None, k).unwrap()).collect();
    Ideal::new(r.clone(), gens).unwrap()
}

pub fn ideal(case: &Case) -> Ideal {
    ideal_in(&ring(case), case.gens)
}

pub fn resolve(i: &Ideal) -> FreeResolution {
    free_resolution(i, i.ring().nvars(), &Budget::unlimited()).unwrap()
}

pub fn all_cases() -> impl Iterator<Item = &'static Case> {
    HYPERSURFACES.iter().chain(OTHERS)
}

/// Projective points of a plane cubic over F_p, by exhaustive search with
/// plain integer arithmetic.
pub fn projective_points(p: i64, f: impl Fn(i64, i64, i64) -> i64) -> i64 {
    let mut affine = 0;
    for x in 0..p {
        for y in 0..p {
            for z in 0..p {
                if (x, y, z) != (0, 0, 0) && f(x, y, z).rem_euclid(p) == 0 {
                    affine += 1;
                }
            }
        }
    }
    affine / (p - 1)
}

/// Ordinarity from the trace of Frobenius: `a_p = p + 1 - #E(F_p)`.
pub fn ordinary_by_point_count(p: i64, f: impl Fn(i64, i64, i64) -> i64) -> bool {
    let a = p + 1 - projective_points(p, f);
    a.rem_euclid(p) != 0
}

/// All vectors of `F_q^m`.
pub fn all_vectors(field: &FieldDesc, m: usize) -> Vec<Vec<FqElem>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out.into_iter().flat_map(|v| field.elements().map(move |c| {
            let mut w = v.clone();
            w.push(c);
            w
        })).collect();
    }
    out
}

/// Stable dimension by intersecting the literal image sets
/// `op^i(F_q^m)` for `i <= 2m`.
pub fn brute_stable_dim(op: &SemilinearOp) -> usize {
    use std::collections::BTreeSet;
    let field = &op.field;
    let m = op.dim();
    let mut current: BTreeSet<Vec<FqElem>> = all_vectors(field, m).into_iter().collect();
    let mut inter = current.clone();
    for _ in 0..2 * m.max(1) {
        current = current.iter().map(|v| op.apply(v)).collect();
        inter = inter.intersection(&current).cloned().collect();
    }
    let q = field.order() as usize;
    let mut d = 0;
    let mut size = 1;
    while size < inter.len() {
        size *= q;
        d += 1;
    }
    assert_eq!(size, inter.len(), "image set is not a subspace");
    d
}

pub fn random_op(field: &FieldDesc, m: usize, twist: i32, rng: &mut impl rand::Rng) -> SemilinearOp {
    let q = field.order();
    let rows = (0..m).map(|_| (0..m).map(|_| field.elem(rng.gen_range(0..q))).collect()).collect();
    let matrix = if m == 0 { Matrix::zeros(0, 0) } else { Matrix::from_rows(rows) };
    SemilinearOp::new(field.clone(), matrix, twist).unwrap()
}

/// Sparse random operators hit low ranks more often.
pub fn random_sparse_op(field: &FieldDesc, m: usize, twist: i32, rng: &mut impl rand::Rng) -> SemilinearOp {
    let q = field.order();
    let rows = (0..m)
        .map(|_| (0..m).map(|_| if rng.gen_bool(0.5) { FqElem::ZERO } else { field.elem(rng.gen_range(0..q)) }).collect())
        .collect();
    SemilinearOp::new(field.clone(), Matrix::from_rows(rows), twist).unwrap()
}

/// Multiplicative order of the `q`-Frobenius norm `T T^{(p)} ... T^{(p^{e-1})}`
/// of the operator restricted to its stable part (twist +1). Every fixed
/// point is defined over `F_{q^r}` for `r` this order.
pub fn fixed_point_field_bound(op: &SemilinearOp) -> usize {
    use fmodlen_core::semilinear::stable_dim;
    let field = &op.field;
    let s = stable_dim(op);
    if s.dim == 0 {
        return 1;
    }
    let t = op.restrict_to_stable(&s).unwrap();
    let mut norm = Matrix::identity(s.dim);
    for k in 0..field.degree() as i32 {
        norm = norm.mul(field, &t.map(|x| field.frob(x, k)));
    }
    let id = Matrix::identity(s.dim);
    let mut power = norm.clone();
    let mut order = 1;
    while power != id {
        power = power.mul(field, &norm);
        order += 1;
    }
    order
}

/// `dim_k I_d` from the span of all monomial multiples of the generators.
pub fn brute_ideal_dim(r: &PolyRing, gens: &[Poly], d: i64) -> usize {
    let basis = r.monomials_of_degree(d);
    let mut rows = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        for m in r.monomials_of_degree(d - g.degree().unwrap() as i64) {
            let h = r.mul_term(g, &m, r.field().elem(1));
            rows.push(basis.iter().map(|b| h.coeff(b)).collect::<Vec<FqElem>>());
        }
    }
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(rows).rank(r.field())
}

pub fn quotient_module(i: &Ideal) -> PresentedModule {
    let r = i.ring();
    let gens = i.nonzero_gens();
    let twists = gens.iter().map(|g| g.degree().unwrap() as i64).collect();
    let presentation = GradedMatrix::from_rows(r, GradedFreeModule::new(vec![0]), GradedFreeModule::new(twists), vec![gens]).unwrap();
    PresentedModule { ring: r.clone(), presentation }
}
