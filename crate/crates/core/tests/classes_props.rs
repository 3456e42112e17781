mod common;

use num_traits::{Signed, Zero};
use proptest::prelude::*;
use tucoop::classes::{almost_positive_coeffs, classify, is_balanced, is_exact, is_totally_balanced, jordan_decompose_tm};
use tucoop::solutions::core_h;
use tucoop::{nonempty_coalitions, Game};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn implication_chain_holds(seed in any::<u64>(), n in 1usize..=4) {
        let v = common::any_class(&mut common::rng(seed), n, 9);
        let report = classify(&v).unwrap();
        prop_assert_eq!(report.implication_violation(), None);
    }

    #[test]
    fn jordan_parts_are_minimal_and_disjoint(seed in any::<u64>(), n in 1usize..=4) {
        let v = common::game(&mut common::rng(seed), n, 30);
        let (w1, w2) = jordan_decompose_tm(&v);
        prop_assert_eq!(&w1 - &w2, v.clone());
        let (m1, m2) = (w1.mobius(), w2.mobius());
        for a in nonempty_coalitions(n) {
            prop_assert!(!m1.coeff(a).is_negative() && !m2.coeff(a).is_negative());
            prop_assert!(m1.coeff(a).is_zero() || m2.coeff(a).is_zero());
        }
        prop_assert!(w1.is_nonnegative() && w2.is_nonnegative());
    }

    #[test]
    fn supermodular_games_are_exact_and_totally_balanced(seed in any::<u64>(), n in 1usize..=4) {
        let v = common::supermodular(&mut common::rng(seed), n, 9);
        prop_assert!(is_exact(&v).unwrap().holds);
        prop_assert!(is_totally_balanced(&v).unwrap().holds);
    }

    #[test]
    fn balanced_agrees_with_vertex_enumeration(seed in any::<u64>(), n in 1usize..=4) {
        let v = common::any_class(&mut common::rng(seed), n, 9);
        let empty = core_h(&v).vertices().unwrap().is_empty();
        prop_assert_eq!(is_balanced(&v).unwrap().holds, !empty);
    }

    #[test]
    fn almost_positive_coefficients_rebuild_the_game(seed in any::<u64>(), n in 2usize..=4) {
        let v = common::tm0(&mut common::rng(seed), n, 9);
        let lam = almost_positive_coeffs(&v).unwrap();
        for a in nonempty_coalitions(n) {
            prop_assert!(!lam.coeff(a).is_negative());
            if a.len() < 2 {
                prop_assert!(lam.coeff(a).is_zero());
            }
        }
        let rebuilt = lam.support().into_iter().fold(Game::zero(n), |acc, a| {
            &acc + &Game::unanimity(n, a).unwrap().scale(lam.coeff(a))
        });
        prop_assert_eq!(rebuilt, v);
    }

    #[test]
    fn exact_games_are_totally_balanced(seed in any::<u64>(), n in 1usize..=4) {
        let v = common::balanced(&mut common::rng(seed), n, 5);
        if is_exact(&v).unwrap().holds {
            prop_assert!(is_totally_balanced(&v).unwrap().holds);
        }
    }
}

#[test]
fn almost_positive_on_vb() {
    use tucoop::decomposition::game_vb;
    let mut r = common::rng(11);
    for _ in 0..20 {
        let v = common::zero_monotone(&mut r, 3, 9);
        for b in nonempty_coalitions(3).into_iter().filter(|b| b.len() >= 2) {
            let lam = almost_positive_coeffs(&game_vb(&v, b).unwrap()).unwrap();
            let grand = tucoop::Coalition::grand(3);
            if b == grand {
                assert_eq!(lam.coeff(grand), v.worth_of_grand());
            } else {
                assert_eq!(lam.coeff(b), v.value(b));
                assert_eq!(lam.coeff(grand), &(v.worth_of_grand() - v.value(b)));
            }
        }
    }
}
