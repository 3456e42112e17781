//! Seeded generators for random games of the various classes, and the
//! named golden corpus.
#![allow(dead_code)]

use std::sync::OnceLock;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tucoop::decomposition::supermodular0_cone;
use tucoop::polyhedra::{extreme_rays, PointedCone};
use tucoop::rational::{int, rat};
use tucoop::{coalitions, multi_player_coalitions, nonempty_coalitions, Allocation, Coalition, Game, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Numerator in `[-bound, bound]`, denominator in `[1, bound]`.
pub fn rational(rng: &mut impl Rng, bound: i64) -> Rational {
    rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

pub fn nonneg_rational(rng: &mut impl Rng, bound: i64) -> Rational {
    rat(rng.gen_range(0..=bound), rng.gen_range(1..=bound))
}

pub fn game(rng: &mut impl Rng, n: usize, bound: i64) -> Game {
    Game::from_fn(n, |_| rational(rng, bound))
}

pub fn allocation(rng: &mut impl Rng, n: usize, bound: i64) -> Allocation {
    Allocation((0..n).map(|_| rational(rng, bound)).collect())
}

/// Sparse nonnegative combination of `u_A` with `|A| ≥ 2`.
pub fn tm0(rng: &mut impl Rng, n: usize, bound: i64) -> Game {
    let mut v = Game::zero(n);
    for a in multi_player_coalitions(n) {
        if rng.gen_bool(0.6) {
            let u = Game::unanimity(n, a).unwrap();
            v = &v + &u.scale(&nonneg_rational(rng, bound));
        }
    }
    v
}

pub fn tm(rng: &mut impl Rng, n: usize, bound: i64) -> Game {
    let x = allocation(rng, n, bound);
    &tm0(rng, n, bound) + &Game::additive(&x)
}

fn supermodular0_rays(n: usize) -> &'static PointedCone {
    static CACHE: [OnceLock<PointedCone>; 5] = [const { OnceLock::new() }; 5];
    CACHE[n].get_or_init(|| extreme_rays(&supermodular0_cone(n).unwrap()).unwrap())
}

/// Sparse conic combination of the extreme rays of the zero-normalized
/// supermodular cone (n ≤ 4).
pub fn supermodular0(rng: &mut impl Rng, n: usize, bound: i64) -> Game {
    if n == 1 {
        return Game::zero(1);
    }
    let rays = supermodular0_rays(n);
    let dim = multi_player_coalitions(n).len();
    let mut coords = vec![Rational::zero(); dim];
    for i in 0..rays.len() {
        if rng.gen_bool(0.5) {
            let c = nonneg_rational(rng, bound);
            for (x, g) in coords.iter_mut().zip(rays.generator(i)) {
                *x += &c * g;
            }
        }
    }
    Game::from_zero_normalized_coords(n, &coords).unwrap()
}

pub fn supermodular(rng: &mut impl Rng, n: usize, bound: i64) -> Game {
    let x = allocation(rng, n, bound);
    &supermodular0(rng, n, bound) + &Game::additive(&x)
}

/// Zero-normalized and monotone: each worth is the largest worth of its
/// immediate subcoalitions plus a nonnegative increment.
pub fn zero_monotone(rng: &mut impl Rng, n: usize, bound: i64) -> Game {
    let mut values = vec![Rational::zero(); 1 << n];
    for a in coalitions(n) {
        if a.len() < 2 {
            continue;
        }
        let floor = a.players().map(|i| values[a.without(i).index()].clone()).max().unwrap();
        let bump = if rng.gen_bool(0.4) { Rational::zero() } else { nonneg_rational(rng, bound) };
        values[a.index()] = floor + bump;
    }
    Game::from_table(n, values).unwrap()
}

pub fn weakly_superadditive(rng: &mut impl Rng, n: usize, bound: i64) -> Game {
    let x = allocation(rng, n, bound);
    &zero_monotone(rng, n, bound) + &Game::additive(&x)
}

/// Core contains a random point `x`: `v(A) = x(A) - slack` on proper coalitions.
pub fn balanced(rng: &mut impl Rng, n: usize, bound: i64) -> Game {
    let x = allocation(rng, n, bound);
    let grand = Coalition::grand(n);
    Game::from_fn(n, |a| {
        if a == grand || rng.gen_bool(0.3) {
            x.total(a)
        } else {
            x.total(a) - nonneg_rational(rng, bound)
        }
    })
}

/// Worth depending only on size, with `v(N) ≥ n v({i})`.
pub fn symmetric(rng: &mut impl Rng, n: usize, bound: i64) -> Game {
    let by_size: Vec<Rational> = (0..=n).map(|k| if k == 0 { int(0) } else { rational(rng, bound) }).collect();
    let floor = &by_size[1] * int(n as i64);
    let top = if by_size[n] < floor { floor + nonneg_rational(rng, bound) } else { by_size[n].clone() };
    Game::from_fn(n, |a| if a.len() == n { top.clone() } else { by_size[a.len()].clone() })
}

/// Draws from a mix of the generators above.
pub fn any_class(rng: &mut impl Rng, n: usize, bound: i64) -> Game {
    match rng.gen_range(0..7) {
        0 => game(rng, n, bound),
        1 => tm(rng, n, bound),
        2 => supermodular(rng, n, bound),
        3 => weakly_superadditive(rng, n, bound),
        4 => balanced(rng, n, bound),
        5 => zero_monotone(rng, n, bound),
        _ => symmetric(rng, n, bound),
    }
}

fn c(players: &[usize]) -> Coalition {
    Coalition::from_players(players.iter().copied())
}

/// Named games: every example game used in the documentation plus seeded
/// random members of each class, n ≤ 4.
pub fn golden_corpus() -> Vec<(String, Game)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push((format!("zero_{n}"), Game::zero(n)));
        for a in nonempty_coalitions(n) {
            out.push((format!("u_{}_{n}", a.key()), Game::unanimity(n, a).unwrap()));
        }
    }
    out.push(("majority_3".into(), Game::from_fn(3, |a| int((a.len() >= 2) as i64))));
    out.push(("majority_4".into(), Game::from_fn(4, |a| int((a.len() >= 3) as i64))));
    out.push(("square_size_3".into(), Game::from_fn(3, |a| int((a.len() * a.len()) as i64))));
    out.push(("inexact_3".into(), Game::new(3, &[(c(&[1, 2]), int(-1))]).unwrap()));
    out.push((
        "zero_normalize_2".into(),
        Game::new(2, &[(c(&[1]), int(1)), (c(&[2]), int(2)), (c(&[1, 2]), int(5))]).unwrap(),
    ));
    out.push(("additive_3".into(), Game::additive(&Allocation(vec![int(2), rat(-1, 3), int(0)]))));
    out.push((
        "vb_example_3".into(),
        Game::new(3, &[(c(&[1, 2]), int(1)), (c(&[1, 3]), int(1)), (c(&[2, 3]), int(1)), (c(&[1, 2, 3]), int(2))]).unwrap(),
    ));
    out.push((
        "not_totally_balanced_4".into(),
        Game::from_fn(4, |a| {
            if a.len() == 4 {
                int(10)
            } else if a.len() >= 2 && !a.contains(4) {
                int(1)
            } else {
                int(0)
            }
        }),
    ));
    let mut r = rng(0x601d);
    for k in 0..40 {
        let n = 2 + k % 3;
        out.push((format!("random_{k}"), any_class(&mut r, n, 9)));
    }
    out
}
