mod common;

use common::*;
use fmodlen_core::ffield::FqElem;
use fmodlen_core::frobcartier::{
    cartier_from_lift, cartier_on_cocycle, cartier_on_ext_piece, cartier_one_step_up, frobenius_pullback,
    hasse_witt_hypersurface, lift_chain_map, squares_commute,
};
use fmodlen_core::groebner::Budget;
use fmodlen_core::semilinear::stable_dim;

fn ext_lambda(case: &Case, j: usize) -> usize {
    let res = resolve(&ideal(case));
    stable_dim(&cartier_on_ext_piece(&res, j, &Budget::unlimited()).unwrap().op).dim
}

fn hw_lambda(case: &Case) -> usize {
    let r = ring(case);
    let f = r.parse(case.gens[0], None, 0).unwrap();
    stable_dim(&hasse_witt_hypersurface(&r, &f).unwrap()).dim
}

type Curve = (i64, fn(i64, i64, i64) -> i64, &'static str, bool);

#[test]
fn elliptic_curves_three_ways() {
    let curves: [Curve; 4] = [
        (5, |x, y, z| y * y * z - x * x * x - x * z * z, "y^2*z - x^3 - x*z^2", true),
        (5, |x, y, z| y * y * z - x * x * x - z * z * z, "y^2*z - x^3 - z^3", false),
        (7, |x, y, z| y * y * z - x * x * x - x * z * z, "y^2*z - x^3 - x*z^2", false),
        (7, |x, y, z| y * y * z - x * x * x - z * z * z, "y^2*z - x^3 - z^3", true),
    ];
    for (p, f, text, expected) in curves {
        let case = Case { name: "curve", p: p as u32, vars: XYZ, gens: &[] };
        let r = ring(&case);
        let i = ideal_in(&r, &[text]);
        let res = resolve(&i);
        let ext = stable_dim(&cartier_on_ext_piece(&res, 1, &Budget::unlimited()).unwrap().op).dim;
        let hw = stable_dim(&hasse_witt_hypersurface(&r, &i.gens()[0]).unwrap()).dim;
        let count = ordinary_by_point_count(p, f);
        assert_eq!(count, expected, "{text} over F_{p}");
        assert_eq!(ext, expected as usize, "{text} over F_{p}");
        assert_eq!(hw, expected as usize, "{text} over F_{p}");
    }
}

#[test]
fn point_counts_match_known_values() {
    assert_eq!(projective_points(5, |x, y, z| y * y * z - x * x * x - x * z * z), 4);
    assert_eq!(projective_points(5, |x, y, z| y * y * z - x * x * x - z * z * z), 6);
}

#[test]
fn hasse_witt_matches_ext_path_on_corpus() {
    for case in HYPERSURFACES {
        let n = case.vars.len() - 1;
        let hw = hw_lambda(case);
        for j in 1..=n {
            let ext = ext_lambda(case, j);
            let expected = if n - j == 1 { hw } else { 0 };
            assert_eq!(ext, expected, "{} j={j}", case.name);
        }
    }
}

#[test]
fn ext_matrix_is_hasse_witt_matrix_for_plane_quartics() {
    for case in HYPERSURFACES.iter().filter(|c| c.vars.len() == 3) {
        let r = ring(case);
        let res = resolve(&ideal(case));
        let data = cartier_on_ext_piece(&res, 1, &Budget::unlimited()).unwrap();
        let hw = hasse_witt_hypersurface(&r, res.diffs[0].entry(0, 0)).unwrap();
        assert_eq!(data.op.matrix, hw.matrix, "{}", case.name);
    }
}

#[test]
fn low_degree_hypersurfaces_vanish() {
    for case in HYPERSURFACES {
        let r = ring(case);
        let f = r.parse(case.gens[0], None, 0).unwrap();
        if (f.degree().unwrap() as usize) < case.vars.len() {
            assert_eq!(hasse_witt_hypersurface(&r, &f).unwrap().dim(), 0, "{}", case.name);
            for j in 1..case.vars.len() {
                assert_eq!(ext_lambda(case, j), 0, "{} j={j}", case.name);
            }
        }
    }
}

#[test]
fn chain_lifts_commute_on_every_case() {
    for case in all_cases() {
        let res = resolve(&ideal(case));
        let pb = frobenius_pullback(&res);
        assert!(pb.is_complex().unwrap(), "{}", case.name);
        let lift = lift_chain_map(&res, &pb, &Budget::unlimited()).unwrap();
        assert!(squares_commute(&res, &pb, &lift).unwrap(), "{}", case.name);
    }
}

#[test]
fn pullback_of_twisted_cubic_is_exact_in_low_degrees() {
    let res = resolve(&ideal(&OTHERS[0]));
    let pb = frobenius_pullback(&res);
    assert_eq!(pb.ranks(), vec![1, 3, 2]);
    for i in 1..=pb.length() {
        for d in 0..=6 {
            assert_eq!(pb.homology_dim(i, d), 0, "i={i} d={d}");
        }
    }
}

#[test]
fn generator_shift_keeps_stable_dimension() {
    for case in all_cases() {
        let res = resolve(&ideal(case));
        for j in 1..case.vars.len() {
            let base = stable_dim(&cartier_on_ext_piece(&res, j, &Budget::unlimited()).unwrap().op).dim;
            let up = stable_dim(&cartier_one_step_up(&res, j, &Budget::unlimited()).unwrap().op).dim;
            assert_eq!(base, up, "{} j={j}", case.name);
        }
    }
}

#[test]
fn lift_independence_under_generator_permutation() {
    for case in all_cases().filter(|c| c.gens.len() > 1) {
        let r = ring(case);
        let mut rev: Vec<&str> = case.gens.to_vec();
        rev.reverse();
        let a = resolve(&ideal_in(&r, case.gens));
        let b = resolve(&ideal_in(&r, &rev));
        for j in 1..case.vars.len() {
            let da = stable_dim(&cartier_on_ext_piece(&a, j, &Budget::unlimited()).unwrap().op).dim;
            let db = stable_dim(&cartier_on_ext_piece(&b, j, &Budget::unlimited()).unwrap().op).dim;
            assert_eq!(da, db, "{} j={j}", case.name);
        }
    }
}

#[test]
fn coboundary_perturbation_does_not_change_the_class() {
    // boundaries in degree -(n+1) need generators of degree >= n+1; the
    // bracket square of the skew lines supplies them
    let mut perturbed = 0;
    let mut pure = 0;
    for case in all_cases() {
        let r = ring(case);
        let field = r.field().clone();
        let res = resolve(&ideal(case));
        let pb = frobenius_pullback(&res);
        let lift = lift_chain_map(&res, &pb, &Budget::unlimited()).unwrap();
        for j in 1..case.vars.len() {
            let data = cartier_from_lift(&res, &lift, j, 0).unwrap();
            let piece = &data.piece;
            for (k, z) in piece.basis().iter().enumerate() {
                for b in &piece.boundaries.basis {
                    let w: Vec<FqElem> = z.iter().zip(b).map(|(&x, &y)| field.add(x, y)).collect();
                    let image = cartier_on_cocycle(&res, &lift, piece, &w).unwrap();
                    assert_eq!(piece.classify(&r, &image).unwrap(), data.op.matrix.column(k), "{}", case.name);
                    perturbed += 1;
                }
            }
            // pure coboundaries map to coboundaries
            for b in &piece.boundaries.basis {
                let image = cartier_on_cocycle(&res, &lift, piece, b).unwrap();
                assert!(piece.classify(&r, &image).unwrap().iter().all(|c| c.is_zero()), "{}", case.name);
                pure += 1;
            }
        }
    }
    assert!(perturbed > 0 && pure > 0, "corpus has no coboundaries in the relevant pieces");
}
