//! Direct computation of solution concepts: core, Weber set, selectope,
//! probabilistic values and the nucleolus relative to a polytope `K`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{check_player_count, coalitions, nonempty_coalitions, Allocation, Coalition, Game};
use crate::polyhedra::{lp_solve, HPolytope, LpResult, Sense, VPolytope};
use crate::rational::Rational;

pub const MAX_WEBER_PLAYERS: usize = 8;
pub const MAX_SELECTOPE_PLAYERS: usize = 4;
pub const MAX_NUCLEOLUS_PLAYERS: usize = 6;

fn indicator(n: usize, a: Coalition) -> Vec<Rational> {
    (1..=n).map(|i| if a.contains(i) { Rational::one() } else { Rational::zero() }).collect()
}

/// `{x : x(N) = v(N), x(A) ≥ v(A) for ∅ ≠ A ⊊ N}`.
pub fn core_h(v: &Game) -> HPolytope {
    let n = v.n();
    let grand = v.grand();
    let mut p = HPolytope::whole_space(n);
    p.add_equality(indicator(n, grand), v.worth_of_grand().clone());
    for a in nonempty_coalitions(n) {
        if a != grand {
            p.add_inequality(indicator(n, a), v.value(a).clone());
        }
    }
    p
}

/// `{x : x(N) = v(N), x_i ≥ v({i})}`, the default `K` of the nucleolus.
pub fn imputation_set(v: &Game) -> HPolytope {
    let n = v.n();
    let mut p = HPolytope::whole_space(n);
    p.add_equality(indicator(n, v.grand()), v.worth_of_grand().clone());
    for i in 1..=n {
        p.add_inequality(indicator(n, Coalition::singleton(i)), v.singleton_value(i).clone());
    }
    p
}

/// An order of arrival: `image[k]` is the player in position `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n + 1];
        for &p in &image {
            if p == 0 || p > n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidPermutation);
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (1..=n).collect() }
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// All `n!` permutations in lexicographic order of their images.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        let mut next = Some(Permutation::identity(n));
        std::iter::from_fn(move || {
            let cur = next.take()?;
            let mut img = cur.image.clone();
            if next_permutation(&mut img) {
                next = Some(Permutation { image: img });
            }
            Some(cur)
        })
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let Some(i) = (0..a.len() - 1).rev().find(|&i| a[i] < a[i + 1]) else {
        return false;
    };
    let j = (i + 1..a.len()).rev().find(|&j| a[j] > a[i]).unwrap();
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

/// Each player receives their marginal contribution on arrival.
pub fn marginal_vector(v: &Game, pi: &Permutation) -> Allocation {
    let mut x = Allocation::zero(v.n());
    let mut before = Coalition::EMPTY;
    for &player in pi.image() {
        let after = before.with(player);
        x.0[player - 1] = v.value(after) - v.value(before);
        before = after;
    }
    x
}

/// Convex hull of all marginal vectors.
pub fn weber(v: &Game) -> Result<VPolytope> {
    if v.n() > MAX_WEBER_PLAYERS {
        return Err(Error::PlayerCountOutOfRange(v.n(), 1, MAX_WEBER_PLAYERS));
    }
    let points = Permutation::all(v.n()).map(|pi| marginal_vector(v, &pi).into_coords()).collect();
    VPolytope::hull(v.n(), points)
}

/// A choice of one member from each nonempty coalition, indexed by mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selector {
    n: usize,
    choice: Vec<usize>,
}

impl Selector {
    /// `choice[mask]` for every mask; the entry at 0 is ignored.
    pub fn new(n: usize, choice: Vec<usize>) -> Result<Self> {
        if choice.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, found: choice.len() });
        }
        for a in nonempty_coalitions(n) {
            let p = choice[a.index()];
            if p == 0 || p > n || !a.contains(p) {
                return Err(Error::InvalidSelector(format!("a({a}) = {p} is not a member")));
            }
        }
        Ok(Selector { n, choice })
    }

    pub fn from_fn(n: usize, f: impl Fn(Coalition) -> usize) -> Result<Self> {
        let choice = (0..1u32 << n)
            .map(|m| if m == 0 { 0 } else { f(Coalition::from_mask(m)) })
            .collect();
        Selector::new(n, choice)
    }

    /// `a(A) = min A`.
    pub fn min_element(n: usize) -> Self {
        Selector::from_fn(n, |a| a.min_player().unwrap()).unwrap()
    }

    pub fn select(&self, a: Coalition) -> usize {
        self.choice[a.index()]
    }

    /// Every selector, as a mixed-radix count over nonempty coalitions in
    /// canonical order (first coalition varying fastest).
    pub fn all(n: usize) -> impl Iterator<Item = Selector> {
        let order = nonempty_coalitions(n);
        let members: Vec<Vec<usize>> = order.iter().map(|a| a.players().collect()).collect();
        let mut digits = Some(vec![0usize; order.len()]);
        std::iter::from_fn(move || {
            let cur = digits.take()?;
            let mut choice = vec![0; 1 << n];
            for ((a, opts), &d) in order.iter().zip(&members).zip(&cur) {
                choice[a.index()] = opts[d];
            }
            let mut next = cur;
            for (k, opts) in members.iter().enumerate() {
                next[k] += 1;
                if next[k] < opts.len() {
                    digits = Some(next);
                    break;
                }
                next[k] = 0;
            }
            Some(Selector { n, choice })
        })
    }

    pub fn count(n: usize) -> BigInt {
        nonempty_coalitions(n).iter().map(|a| BigInt::from(a.len())).product()
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Each dividend `m(A)` goes to the selected member `a(A)`.
pub fn selector_value(v: &Game, a: &Selector) -> Allocation {
    let m = v.mobius();
    let mut x = Allocation::zero(v.n());
    for c in nonempty_coalitions(v.n()) {
        let d = m.coeff(c);
        if !d.is_zero() {
            x.0[a.select(c) - 1] += d;
        }
    }
    x
}

/// Convex hull of all selector values. Selectors choose independently per
/// coalition, so the hull is the Minkowski sum of the scaled simplices
/// `m(A) · Δ_A`, which is how it is computed here.
pub fn selectope(v: &Game) -> Result<VPolytope> {
    let n = v.n();
    if n > MAX_SELECTOPE_PLAYERS {
        return Err(Error::PlayerCountOutOfRange(n, 1, MAX_SELECTOPE_PLAYERS));
    }
    let m = v.mobius();
    let mut acc = VPolytope::point(vec![Rational::zero(); n]);
    for a in nonempty_coalitions(n) {
        let d = m.coeff(a);
        if d.is_zero() {
            continue;
        }
        acc = acc.minkowski_sum(&VPolytope::standard_simplex(n, a).scale(d))?;
    }
    Ok(acc)
}

/// One probability measure per player over the coalitions not containing
/// that player, stored densely by mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilisticWeights {
    n: usize,
    tables: Vec<Vec<Rational>>,
}

impl ProbabilisticWeights {
    pub fn new(n: usize, tables: Vec<Vec<Rational>>) -> Result<Self> {
        check_player_count(n)?;
        if tables.len() != n {
            return Err(Error::InvalidWeights(format!("expected {n} tables, found {}", tables.len())));
        }
        for (i, table) in tables.iter().enumerate() {
            let player = i + 1;
            if table.len() != 1 << n {
                return Err(Error::InvalidWeights(format!("table of player {player} has wrong length")));
            }
            let mut total = Rational::zero();
            for a in coalitions(n) {
                let p = &table[a.index()];
                if p.is_negative() {
                    return Err(Error::InvalidWeights(format!("p_{player}({a}) is negative")));
                }
                if a.contains(player) && !p.is_zero() {
                    return Err(Error::InvalidWeights(format!("p_{player}({a}) weights a coalition containing the player")));
                }
                total += p;
            }
            if !total.is_one() {
                return Err(Error::InvalidWeights(format!("weights of player {player} sum to {total}")));
            }
        }
        Ok(ProbabilisticWeights { n, tables })
    }

    /// `p_i(A) = |A|! (n - |A| - 1)! / n!`.
    pub fn shapley(n: usize) -> Self {
        let fact = |k: usize| -> BigInt { (1..=k).map(BigInt::from).product() };
        let by_size: Vec<Rational> =
            (0..n).map(|s| Rational::new(fact(s) * fact(n - s - 1), fact(n))).collect();
        let tables = (1..=n)
            .map(|i| {
                (0..1u32 << n)
                    .map(|m| {
                        let a = Coalition::from_mask(m);
                        if a.contains(i) { Rational::zero() } else { by_size[a.len()].clone() }
                    })
                    .collect()
            })
            .collect();
        ProbabilisticWeights { n, tables }
    }

    /// All mass of every player on the empty coalition.
    pub fn empty_coalition(n: usize) -> Self {
        let tables = (0..n)
            .map(|_| {
                let mut t = vec![Rational::zero(); 1 << n];
                t[0] = Rational::one();
                t
            })
            .collect();
        ProbabilisticWeights { n, tables }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, player: usize, a: Coalition) -> &Rational {
        &self.tables[player - 1][a.index()]
    }
}

/// `ψ_i(v) = sum_{A ⊆ N∖{i}} p_i(A) (v(A ∪ {i}) - v(A))`.
pub fn probabilistic_value(v: &Game, p: &ProbabilisticWeights) -> Result<Allocation> {
    if p.n() != v.n() {
        return Err(Error::InvalidWeights(format!("weights for {} players, game has {}", p.n(), v.n())));
    }
    let n = v.n();
    let coords = (1..=n)
        .map(|i| {
            let others = v.grand().without(i);
            others.subsets().fold(Rational::zero(), |acc, a| {
                let w = p.weight(i, a);
                if w.is_zero() {
                    acc
                } else {
                    acc + w * (v.value(a.with(i)) - v.value(a))
                }
            })
        })
        .collect();
    Ok(Allocation(coords))
}

pub fn shapley(v: &Game) -> Allocation {
    probabilistic_value(v, &ProbabilisticWeights::shapley(v.n())).expect("weights match the game")
}

/// All `2^n` excesses `v(A) - x(A)`, sorted non-increasingly. Profiles compare
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExcessProfile(pub Vec<Rational>);

pub fn excess_profile(v: &Game, x: &Allocation) -> ExcessProfile {
    let mut e: Vec<Rational> = coalitions(v.n()).into_iter().map(|a| v.value(a) - x.total(a)).collect();
    e.sort_by(|a, b| b.cmp(a));
    ExcessProfile(e)
}

/// Checks that `K` lives in `R^n`, is nonempty and bounded.
pub fn validate_k(k: &HPolytope, n: usize) -> Result<()> {
    if k.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: k.dim() });
    }
    for j in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::one();
        for sense in [Sense::Minimize, Sense::Maximize] {
            match lp_solve(&e, k, sense)? {
                LpResult::Infeasible { .. } => return Err(Error::EmptyK),
                LpResult::Unbounded { .. } => return Err(Error::UnboundedK),
                LpResult::Optimal { .. } => {}
            }
        }
    }
    Ok(())
}

/// Result of the sequential LP scheme, with the LP optimum of every stage.
#[derive(Clone, Debug)]
pub struct NucleolusTrace {
    pub point: Allocation,
    pub stage_points: Vec<Allocation>,
    /// Coalitions fixed at each stage with their constant excess.
    pub stages: Vec<Vec<(Coalition, Rational)>>,
}

/// The point of `K` with lexicographically minimal excess profile.
pub fn nucleolus(v: &Game, k: &HPolytope) -> Result<Allocation> {
    Ok(nucleolus_trace(v, k)?.point)
}

/// Sequential LP scheme: minimize the largest excess among coalitions not yet
/// fixed, then fix every coalition whose excess is constant over the optimal
/// face (its minimum and maximum there coincide), and repeat on that face.
pub fn nucleolus_trace(v: &Game, k: &HPolytope) -> Result<NucleolusTrace> {
    let n = v.n();
    if n > MAX_NUCLEOLUS_PLAYERS {
        return Err(Error::PlayerCountOutOfRange(n, 1, MAX_NUCLEOLUS_PLAYERS));
    }
    validate_k(k, n)?;
    let mut face = k.clone();
    let mut free: Vec<Coalition> = coalitions(n);
    let mut stage_points = Vec::new();
    let mut stages = Vec::new();

    while !free.is_empty() {
        // variables (x, t): minimize t subject to v(A) - x(A) <= t on free coalitions
        let mut lp = lift(&face);
        for &a in &free {
            let mut row = indicator(n, a);
            row.push(Rational::one());
            lp.add_inequality(row, v.value(a).clone());
        }
        let mut obj = vec![Rational::zero(); n];
        obj.push(Rational::one());
        let res = lp_solve(&obj, &lp, Sense::Minimize)?;
        let LpResult::Optimal { value: level, point, .. } = res else {
            unreachable!("max excess over a nonempty bounded set has an optimum: {res:?}");
        };
        stage_points.push(Allocation(point[..n].to_vec()));

        let mut optimal_face = face.clone();
        for &a in &free {
            optimal_face.add_inequality(indicator(n, a), v.value(a) - &level);
        }
        let mut fixed = Vec::new();
        for &a in &free {
            let ind = indicator(n, a);
            let lo = lp_solve(&ind, &optimal_face, Sense::Minimize)?;
            let hi = lp_solve(&ind, &optimal_face, Sense::Maximize)?;
            if let (Some(lo), Some(hi)) = (lo.optimal_value(), hi.optimal_value()) {
                if lo == hi {
                    fixed.push((a, v.value(a) - lo));
                }
            }
        }
        assert!(!fixed.is_empty(), "some coalition attains the optimal level on the whole face");
        for (a, e) in &fixed {
            face.add_equality(indicator(n, *a), v.value(*a) - e);
        }
        free.retain(|a| fixed.iter().all(|(b, _)| b != a));
        stages.push(fixed);
    }

    let res = lp_solve(&vec![Rational::zero(); n], &face, Sense::Minimize)?;
    let point = Allocation(res.optimal_point().expect("final face is nonempty").to_vec());
    Ok(NucleolusTrace { point, stage_points, stages })
}

/// `P × R` for a polytope `P ⊆ R^n`.
fn lift(p: &HPolytope) -> HPolytope {
    let mut out = HPolytope::whole_space(p.dim() + 1);
    for c in p.inequalities() {
        let mut row = c.normal.clone();
        row.push(Rational::zero());
        out.add_inequality(row, c.rhs.clone());
    }
    for c in p.equalities() {
        let mut row = c.normal.clone();
        row.push(Rational::zero());
        out.add_equality(row, c.rhs.clone());
    }
    out
}

/// Lexicographic comparison of the excess profiles of two allocations.
pub fn compare_profiles(v: &Game, x: &Allocation, y: &Allocation) -> Ordering {
    excess_profile(v, x).cmp(&excess_profile(v, y))
}

/// `x(N)`.
pub fn efficiency(x: &Allocation) -> Rational {
    x.coords().iter().sum()
}
