mod common;

use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;
use tucoop::decomposition::{supermodular0_cone, tm0_cone};
use tucoop::polyhedra::{
    extreme_rays, lp_solve, polytope_equal, triangulate_cone, HPolytope, LpResult, PointedCone, Sense, VPolytope,
};
use tucoop::rational::{dot, int, rat};
use tucoop::{Coalition, Rational};

fn point(r: &mut impl rand::Rng, dim: usize) -> Vec<Rational> {
    (0..dim).map(|_| common::rational(r, 6)).collect()
}

/// Checks the optimality certificate of an LP result against the constraints.
fn certify(obj: &[Rational], p: &HPolytope, sense: Sense, res: &LpResult) -> bool {
    match res {
        LpResult::Optimal { value, point, ineq_duals, eq_duals } => {
            if !p.contains(point) || dot(obj, point) != *value {
                return false;
            }
            let mut combo = vec![Rational::zero(); p.dim()];
            let mut dual_value = Rational::zero();
            for (y, c) in ineq_duals.iter().zip(p.inequalities()) {
                let right_sign = match sense {
                    Sense::Minimize => !y.is_negative(),
                    Sense::Maximize => !y.is_positive(),
                };
                if !right_sign || (!y.is_zero() && dot(&c.normal, point) != c.rhs) {
                    return false;
                }
                for (s, a) in combo.iter_mut().zip(&c.normal) {
                    *s += y * a;
                }
                dual_value += y * &c.rhs;
            }
            for (z, c) in eq_duals.iter().zip(p.equalities()) {
                for (s, a) in combo.iter_mut().zip(&c.normal) {
                    *s += z * a;
                }
                dual_value += z * &c.rhs;
            }
            combo == obj && dual_value == *value
        }
        LpResult::Infeasible { ineq_mult, eq_mult } => {
            let mut combo = vec![Rational::zero(); p.dim()];
            let mut rhs = Rational::zero();
            for (y, c) in ineq_mult.iter().zip(p.inequalities()) {
                if y.is_negative() {
                    return false;
                }
                for (s, a) in combo.iter_mut().zip(&c.normal) {
                    *s += y * a;
                }
                rhs += y * &c.rhs;
            }
            for (z, c) in eq_mult.iter().zip(p.equalities()) {
                for (s, a) in combo.iter_mut().zip(&c.normal) {
                    *s += z * a;
                }
                rhs += z * &c.rhs;
            }
            combo.iter().all(Zero::is_zero) && rhs.is_positive()
        }
        LpResult::Unbounded { point, ray } => {
            let improving = match sense {
                Sense::Minimize => dot(obj, ray).is_negative(),
                Sense::Maximize => dot(obj, ray).is_positive(),
            };
            p.contains(point)
                && improving
                && p.inequalities().iter().all(|c| !dot(&c.normal, ray).is_negative())
                && p.equalities().iter().all(|c| dot(&c.normal, ray).is_zero())
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn lp_results_carry_valid_certificates(seed in any::<u64>(), dim in 1usize..=4, rows in 1usize..=7) {
        let mut r = common::rng(seed);
        let mut p = HPolytope::whole_space(dim);
        for _ in 0..rows {
            p.add_inequality(point(&mut r, dim), common::rational(&mut r, 6));
        }
        if r.gen_bool(0.3) {
            p.add_equality(point(&mut r, dim), common::rational(&mut r, 6));
        }
        let obj = point(&mut r, dim);
        for sense in [Sense::Minimize, Sense::Maximize] {
            let res = lp_solve(&obj, &p, sense).unwrap();
            prop_assert!(certify(&obj, &p, sense, &res), "{:?}", res);
        }
    }

    #[test]
    fn hull_round_trips_through_h_form(seed in any::<u64>(), dim in 1usize..=4, count in 1usize..=9) {
        let mut r = common::rng(seed);
        let pts: Vec<Vec<Rational>> = (0..count).map(|_| point(&mut r, dim)).collect();
        let hull = VPolytope::hull(dim, pts.clone()).unwrap();
        prop_assert_eq!(hull.to_h().vertices().unwrap(), hull.clone());
        prop_assert_eq!(VPolytope::hull(dim, hull.vertices().to_vec()).unwrap(), hull.clone());
        // every input point lies in the hull, every vertex is an input point
        let h = hull.to_h();
        for p in &pts {
            prop_assert!(h.contains(p));
        }
        for v in hull.vertices() {
            prop_assert!(pts.contains(v));
        }
    }

    #[test]
    fn minkowski_sum_support_is_additive(seed in any::<u64>(), dim in 1usize..=3) {
        let mut r = common::rng(seed);
        let p = VPolytope::hull(dim, (0..4).map(|_| point(&mut r, dim)).collect()).unwrap();
        let q = VPolytope::hull(dim, (0..4).map(|_| point(&mut r, dim)).collect()).unwrap();
        let s = p.minkowski_sum(&q).unwrap();
        let dir = point(&mut r, dim);
        let support = |x: &VPolytope| x.vertices().iter().map(|v| dot(&dir, v)).max().unwrap();
        prop_assert_eq!(support(&s), support(&p) + support(&q));
    }

    #[test]
    fn fan_coordinates_reconstruct_cone_points(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let rays = extreme_rays(&supermodular0_cone(3).unwrap()).unwrap();
        let mut order: Vec<usize> = (0..rays.len()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, r.gen_range(0..=i));
        }
        let fan = triangulate_cone(&rays.reordered(&order)).unwrap();
        let x = common::supermodular0(&mut r, 3, 9).zero_normalized_coords();
        let cc = fan.conic_coordinates(&x).unwrap();
        prop_assert!(cc.coeffs.iter().all(Signed::is_positive));
        prop_assert_eq!(fan.reconstruct(&cc), x);
    }
}

#[test]
fn standard_simplex_vertices() {
    for n in 1..=5 {
        for mask in 1..(1u32 << n) {
            let a = Coalition::from_mask(mask);
            assert_eq!(HPolytope::standard_simplex(n, a).vertices().unwrap(), VPolytope::standard_simplex(n, a));
        }
    }
}

#[test]
fn cone_ray_counts() {
    // extreme rays of the zero-normalized totally monotone cone are the u_A, |A| ≥ 2
    assert_eq!(extreme_rays(&tm0_cone(3).unwrap()).unwrap().len(), 4);
    assert_eq!(extreme_rays(&tm0_cone(4).unwrap()).unwrap().len(), 11);
    // supermodular: 5 at n = 3 (hand count), 37 at n = 4 (classical count)
    assert_eq!(extreme_rays(&supermodular0_cone(3).unwrap()).unwrap().len(), 5);
    assert_eq!(extreme_rays(&supermodular0_cone(4).unwrap()).unwrap().len(), 37);
}

#[test]
fn triangulations_are_fans() {
    for cone in [supermodular0_cone(3).unwrap(), tm0_cone(3).unwrap()] {
        let rays = extreme_rays(&cone).unwrap();
        let n = rays.len();
        for order in [(0..n).collect::<Vec<_>>(), (0..n).rev().collect()] {
            let fan = triangulate_cone(&rays.reordered(&order)).unwrap();
            assert!(fan.cells_meet_in_faces().unwrap());
            for cell in fan.cells() {
                assert_eq!(cell.len(), 4);
            }
        }
    }
    // the 5 rays satisfy u12 + u13 + u23 = uN + e, so the cone has exactly two
    // triangulations; placing the circuit's pair first selects the other one
    let rays = extreme_rays(&supermodular0_cone(3).unwrap()).unwrap();
    let a = triangulate_cone(&rays).unwrap();
    let b = triangulate_cone(&rays.reordered(&[0, 4, 1, 2, 3])).unwrap();
    assert_eq!(a.cells().len(), 2);
    assert_eq!(b.cells().len(), 3);
    let gen_sets = |f: &tucoop::polyhedra::SimplicialFan| -> Vec<Vec<Vec<Rational>>> {
        let mut cells: Vec<Vec<Vec<Rational>>> = f
            .cells()
            .iter()
            .map(|c| {
                let mut g: Vec<_> = c.iter().map(|&i| f.cone().generator(i)).collect();
                g.sort();
                g
            })
            .collect();
        cells.sort();
        cells
    };
    assert_ne!(gen_sets(&a), gen_sets(&b));
}

#[test]
fn pointedness_is_enforced() {
    let line = vec![vec![int(1), int(0)], vec![int(-1), int(0)]];
    assert_eq!(PointedCone::new(2, line), Err(tucoop::Error::NotPointed));
    let half = HPolytope::from_constraints(2, vec![tucoop::polyhedra::Constraint::new(vec![int(1), int(0)], int(0))], vec![]).unwrap();
    assert_eq!(extreme_rays(&half).unwrap_err(), tucoop::Error::NotPointed);
    let shifted = HPolytope::from_constraints(2, vec![tucoop::polyhedra::Constraint::new(vec![int(1), int(0)], rat(1, 2))], vec![]).unwrap();
    assert_eq!(extreme_rays(&shifted).unwrap_err(), tucoop::Error::NotACone);
}

#[test]
fn polytope_equality_across_forms() {
    let tri = VPolytope::standard_simplex(3, Coalition::grand(3));
    assert!(polytope_equal(&tri, &HPolytope::standard_simplex(3, Coalition::grand(3))).unwrap());
    assert!(!polytope_equal(&tri, &tri.scale(&int(2))).unwrap());
}
