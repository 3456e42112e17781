//! Factorizations `σ = α ∘ τ` of solution concepts through elementary games,
//! each executed and compared against the directly computed solution.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::classes::{monotone_violation, weak_superadditivity_violation, Witness};
use crate::error::{Error, Result};
use crate::game::{
    check_player_count, multi_player_coalitions, nonempty_coalitions, Allocation, Coalition, Game, SetFunction,
};
use crate::polyhedra::linalg::{rank, solve_columns};
use crate::polyhedra::{lp_solve, polytope_equal, HPolytope, LpResult, Sense, SimplicialFan, VPolytope};
use crate::rational::{dot, Rational};
use crate::solutions::{
    core_h, marginal_vector, nucleolus, probabilistic_value, selectope, shapley, validate_k, weber, Permutation,
    ProbabilisticWeights, Selector, MAX_NUCLEOLUS_PLAYERS, MAX_SELECTOPE_PLAYERS, MAX_WEBER_PLAYERS,
};

pub const MAX_WS_CORE_PLAYERS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Probabilistic,
    Nucleolus,
    Weber,
    Selectope,
    Linear,
    Cone,
    WsCore,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Probabilistic => "probabilistic",
            Scheme::Nucleolus => "nucleolus",
            Scheme::Weber => "weber",
            Scheme::Selectope => "selectope",
            Scheme::Linear => "linear",
            Scheme::Cone => "cone",
            Scheme::WsCore => "ws_core",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A solution value: a single allocation or a polytope of allocations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionValue {
    Point(Allocation),
    Set(VPolytope),
}

impl SolutionValue {
    pub fn to_polytope(&self) -> VPolytope {
        match self {
            SolutionValue::Point(x) => VPolytope::point(x.coords().to_vec()),
            SolutionValue::Set(p) => p.clone(),
        }
    }

    fn same_as(&self, other: &SolutionValue) -> Result<bool> {
        match (self, other) {
            (SolutionValue::Point(x), SolutionValue::Point(y)) => Ok(x == y),
            _ => polytope_equal(self.to_polytope(), other.to_polytope()),
        }
    }
}

/// One run of a factorization diagram.
#[derive(Clone, Debug)]
pub struct FactorizationRecord {
    pub scheme: Scheme,
    /// Elementary games keyed by their index in `Z`.
    pub tau_output: Vec<(String, SetFunction)>,
    pub alpha_output: SolutionValue,
    pub direct_sigma: SolutionValue,
    pub commutes: bool,
}

impl FactorizationRecord {
    fn new(
        scheme: Scheme,
        tau_output: Vec<(String, SetFunction)>,
        alpha_output: SolutionValue,
        direct_sigma: SolutionValue,
    ) -> Result<Self> {
        let commutes = alpha_output.same_as(&direct_sigma)?;
        Ok(FactorizationRecord { scheme, tau_output, alpha_output, direct_sigma, commutes })
    }
}

/// A solution concept evaluated directly on a game.
pub trait Solution {
    fn solve(&self, v: &Game) -> Result<VPolytope>;
}

impl<F: Fn(&Game) -> Result<VPolytope>> Solution for F {
    fn solve(&self, v: &Game) -> Result<VPolytope> {
        self(v)
    }
}

/// The Shapley value as a one-point solution.
pub struct ShapleySolution;

impl Solution for ShapleySolution {
    fn solve(&self, v: &Game) -> Result<VPolytope> {
        Ok(VPolytope::point(shapley(v).into_coords()))
    }
}

/// The core, by vertex enumeration.
pub struct CoreSolution;

impl Solution for CoreSolution {
    fn solve(&self, v: &Game) -> Result<VPolytope> {
        core_h(v).vertices()
    }
}

/// The unique allocation of an additive game, valid for both the core and
/// the Shapley value.
pub struct AdditiveSolution;

impl Solution for AdditiveSolution {
    fn solve(&self, v: &Game) -> Result<VPolytope> {
        Ok(VPolytope::point(v.restrict_additive()?.into_coords()))
    }
}

/// Solution sets of generator games.
#[derive(Clone, Debug, Default)]
pub struct SolutionTable {
    entries: HashMap<Game, VPolytope>,
}

impl SolutionTable {
    pub fn new() -> Self {
        SolutionTable::default()
    }

    pub fn tabulate<'a>(games: impl IntoIterator<Item = &'a Game>, sigma: &dyn Solution) -> Result<Self> {
        let mut table = SolutionTable::new();
        for g in games {
            table.insert(g.clone(), sigma.solve(g)?);
        }
        Ok(table)
    }

    pub fn insert(&mut self, game: Game, value: VPolytope) {
        self.entries.insert(game, value);
    }

    pub fn get(&self, game: &Game) -> Option<&VPolytope> {
        self.entries.get(game)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn additive_label(x: &Allocation) -> String {
    let parts: Vec<String> = x.coords().iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// `D_i^v(A) = v(A ∪ {i}) - v(A)` for every player, evaluated on all `A`.
pub fn marginal_games(v: &Game) -> Vec<SetFunction> {
    (1..=v.n()).map(|i| v.marginal_game(i)).collect()
}

pub fn factor_probabilistic(v: &Game, p: &ProbabilisticWeights) -> Result<FactorizationRecord> {
    let direct = probabilistic_value(v, p)?;
    let tau = marginal_games(v);
    let grand = v.grand();
    let alpha = (1..=v.n())
        .map(|i| {
            grand
                .without(i)
                .subsets()
                .fold(Rational::zero(), |acc, a| acc + p.weight(i, a) * tau[i - 1].value(a))
        })
        .collect();
    let tau_output = tau.into_iter().enumerate().map(|(i, d)| (format!("D_{}", i + 1), d)).collect();
    FactorizationRecord::new(
        Scheme::Probabilistic,
        tau_output,
        SolutionValue::Point(Allocation(alpha)),
        SolutionValue::Point(direct),
    )
}

pub fn factor_weber(v: &Game) -> Result<FactorizationRecord> {
    let n = v.n();
    if n > MAX_WEBER_PLAYERS {
        return Err(Error::PlayerCountOutOfRange(n, 1, MAX_WEBER_PLAYERS));
    }
    let tau: Vec<(String, SetFunction)> = Permutation::all(n)
        .map(|pi| {
            let key = pi.image().iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            (format!("pi=({key})"), Game::additive(&marginal_vector(v, &pi)).into())
        })
        .collect();
    let alpha = hull_of_additive(n, &tau)?;
    FactorizationRecord::new(Scheme::Weber, tau, SolutionValue::Set(alpha), SolutionValue::Set(weber(v)?))
}

fn hull_of_additive(n: usize, tau: &[(String, SetFunction)]) -> Result<VPolytope> {
    let points = tau
        .iter()
        .map(|(_, g)| g.to_game()?.restrict_additive().map(Allocation::into_coords))
        .collect::<Result<_>>()?;
    VPolytope::hull(n, points)
}

/// `α` is the hull of every selector value; the direct selectope is built
/// as a Minkowski sum of scaled simplices.
pub fn factor_selectope(v: &Game) -> Result<FactorizationRecord> {
    let n = v.n();
    if n > MAX_SELECTOPE_PLAYERS {
        return Err(Error::PlayerCountOutOfRange(n, 1, MAX_SELECTOPE_PLAYERS));
    }
    let m = v.mobius();
    let support = m.support();
    let tau: Vec<(String, SetFunction)> = Selector::all(n)
        .enumerate()
        .map(|(k, a)| {
            let mut x = Allocation::zero(n);
            for &c in &support {
                x.0[a.select(c) - 1] += m.coeff(c);
            }
            (format!("a#{k}"), Game::additive(&x).into())
        })
        .collect();
    let alpha = hull_of_additive(n, &tau)?;
    FactorizationRecord::new(Scheme::Selectope, tau, SolutionValue::Set(alpha), SolutionValue::Set(selectope(v)?))
}

/// The excess map `x ↦ θ^x_v` as a closure; only the evaluations requested by
/// the lexicographic minimization are materialized.
pub struct LazyExcess<'a> {
    v: &'a Game,
    evaluated: Vec<(Allocation, Game)>,
}

impl<'a> LazyExcess<'a> {
    pub fn new(v: &'a Game) -> Self {
        LazyExcess { v, evaluated: Vec::new() }
    }

    pub fn eval(&mut self, x: &Allocation) -> Game {
        let g = self.v.excess_game(x);
        self.evaluated.push((x.clone(), g.clone()));
        g
    }

    pub fn into_evaluations(self) -> Vec<(Allocation, Game)> {
        self.evaluated
    }
}

/// `α` rebuilds the affine excess functions from evaluations of the lazy
/// `τ` at the origin and the unit vectors, and then minimizes the sorted
/// excess vector stage by stage; coalitions are fixed when their excess is
/// equal on every vertex of the optimal face.
pub fn factor_nucleolus(v: &Game, k: &HPolytope) -> Result<FactorizationRecord> {
    let n = v.n();
    if n > MAX_NUCLEOLUS_PLAYERS {
        return Err(Error::PlayerCountOutOfRange(n, 1, MAX_NUCLEOLUS_PLAYERS));
    }
    validate_k(k, n)?;
    let direct = nucleolus(v, k)?;

    let mut tau = LazyExcess::new(v);
    let all: Vec<Coalition> = crate::game::coalitions(n);
    let base = tau.eval(&Allocation::zero(n));
    // excess_A(x) = base(A) - sum_i slope[i](A) x_i
    let slopes: Vec<Game> = (1..=n).map(|i| &base - &tau.eval(&Allocation::unit(n, i))).collect();
    let normal = |a: Coalition| -> Vec<Rational> { slopes.iter().map(|s| s.value(a).clone()).collect() };
    let excess_at = |a: Coalition, x: &[Rational]| base.value(a) - dot(&normal(a), x);

    let mut face = k.clone();
    let mut free = all.clone();
    while !free.is_empty() {
        let mut lp = HPolytope::whole_space(n + 1);
        for c in face.inequalities() {
            lp.add_inequality(extend(&c.normal, Rational::zero()), c.rhs.clone());
        }
        for c in face.equalities() {
            lp.add_equality(extend(&c.normal, Rational::zero()), c.rhs.clone());
        }
        for &a in &free {
            lp.add_inequality(extend(&normal(a), Rational::one()), base.value(a).clone());
        }
        let mut obj = vec![Rational::zero(); n];
        obj.push(Rational::one());
        let res = lp_solve(&obj, &lp, Sense::Minimize)?;
        let LpResult::Optimal { value: level, .. } = res else {
            unreachable!("bounded nonempty K gives an optimal level");
        };
        let mut optimal = face.clone();
        for &a in &free {
            optimal.add_inequality(normal(a), base.value(a) - &level);
        }
        let vertices = optimal.vertices_unchecked()?;
        let constant: Vec<Coalition> = free
            .iter()
            .copied()
            .filter(|&a| {
                let first = excess_at(a, &vertices.vertices()[0]);
                vertices.vertices()[1..].iter().all(|p| excess_at(a, p) == first)
            })
            .collect();
        assert!(!constant.is_empty(), "the optimal level is attained on the whole face");
        let p0 = vertices.vertices()[0].clone();
        for &a in &constant {
            face.add_equality(normal(a), dot(&normal(a), &p0));
        }
        free.retain(|a| !constant.contains(a));
        if vertices.vertices().len() == 1 {
            break;
        }
    }
    let point = face.vertices_unchecked()?;
    assert_eq!(point.vertices().len(), 1, "the final face is a single point");
    let alpha = Allocation(point.vertices()[0].clone());
    tau.eval(&alpha);
    let tau_output = tau
        .into_evaluations()
        .into_iter()
        .map(|(x, g)| (format!("x={}", additive_label(&x)), g.into()))
        .collect();
    FactorizationRecord::new(Scheme::Nucleolus, tau_output, SolutionValue::Point(alpha), SolutionValue::Point(direct))
}

fn extend(row: &[Rational], last: Rational) -> Vec<Rational> {
    let mut r = row.to_vec();
    r.push(last);
    r
}

/// Coordinates of `v` in `basis` and `α = Σ a_i σ(v_i)`, compared with `σ(v)`.
pub fn factor_linear(
    v: &Game,
    basis: &[Game],
    sigma_table: &SolutionTable,
    sigma: &dyn Solution,
) -> Result<FactorizationRecord> {
    let n = v.n();
    let dim = (1usize << n) - 1;
    if basis.iter().any(|b| b.n() != n) {
        return Err(Error::MixedPlayerCounts);
    }
    let columns: Vec<Vec<Rational>> = basis.iter().map(Game::to_coords).collect();
    if basis.len() != dim || rank(&columns) != dim {
        return Err(Error::NotABasis);
    }
    let coeffs = solve_columns(&columns, &v.to_coords()).ok_or(Error::NotABasis)?;
    let mut alpha = VPolytope::point(vec![Rational::zero(); n]);
    let mut tau = Vec::new();
    for (i, (b, a)) in basis.iter().zip(&coeffs).enumerate() {
        let s = sigma_table.get(b).ok_or(Error::MissingTableEntry(i))?;
        tau.push((format!("{i}"), b.scale(a).into()));
        if !a.is_zero() {
            alpha = alpha.minkowski_sum(&s.scale(a))?;
        }
    }
    let direct = sigma.solve(v)?;
    FactorizationRecord::new(Scheme::Linear, tau, as_value(alpha), as_value(direct))
}

fn as_value(p: VPolytope) -> SolutionValue {
    if p.vertices().len() == 1 {
        SolutionValue::Point(Allocation(p.vertices()[0].clone()))
    } else {
        SolutionValue::Set(p)
    }
}

/// `{u_A : A ≠ ∅}` in canonical order.
pub fn unanimity_basis(n: usize) -> Vec<Game> {
    nonempty_coalitions(n).into_iter().map(|a| Game::unanimity(n, a).expect("nonempty carrier")).collect()
}

/// Zero-normalized supermodular games, in zero-normalized coordinates.
pub fn supermodular0_cone(n: usize) -> Result<HPolytope> {
    check_player_count(n)?;
    let order = multi_player_coalitions(n);
    let pos = |a: Coalition| order.iter().position(|&b| b == a);
    let mut cone = HPolytope::whole_space(order.len());
    for a in crate::game::coalitions(n) {
        for i in 1..=n {
            for j in i + 1..=n {
                if a.contains(i) || a.contains(j) {
                    continue;
                }
                // v(A∪{i,j}) + v(A) - v(A∪{i}) - v(A∪{j}) ≥ 0
                let mut row = vec![Rational::zero(); order.len()];
                for (c, s) in [(a.with(i).with(j), 1), (a, 1), (a.with(i), -1), (a.with(j), -1)] {
                    if let Some(k) = pos(c) {
                        row[k] += Rational::from_integer(s.into());
                    }
                }
                cone.add_inequality(row, Rational::zero());
            }
        }
    }
    Ok(cone.canonical())
}

/// Zero-normalized totally monotone games: nonnegative dividends on
/// coalitions with at least two players.
pub fn tm0_cone(n: usize) -> Result<HPolytope> {
    check_player_count(n)?;
    let order = multi_player_coalitions(n);
    let mut cone = HPolytope::whole_space(order.len());
    for &a in &order {
        let row = order
            .iter()
            .map(|&b| {
                if b.is_subset_of(a) {
                    let sign = if (a.len() - b.len()) % 2 == 0 { 1 } else { -1 };
                    Rational::from_integer(sign.into())
                } else {
                    Rational::zero()
                }
            })
            .collect();
        cone.add_inequality(row, Rational::zero());
    }
    Ok(cone)
}

/// Conic decomposition: `τ(v) = (a_1 v_1, …, a_k v_k, v - v̂)` from the fan
/// coordinates of `v̂`, and `α = Σ a_i σ(v_i) + σ(v - v̂)`.
pub fn factor_cone(
    v: &Game,
    cone_h: &HPolytope,
    fan: &SimplicialFan,
    sigma_table: &SolutionTable,
    sigma_additive: &dyn Solution,
    sigma: &dyn Solution,
) -> Result<FactorizationRecord> {
    let n = v.n();
    let dim = multi_player_coalitions(n).len();
    if cone_h.dim() != dim {
        return Err(Error::FanMismatch(format!("cone has dimension {}, games need {dim}", cone_h.dim())));
    }
    if fan.cone().dim() != dim {
        return Err(Error::FanMismatch(format!("fan has dimension {}, games need {dim}", fan.cone().dim())));
    }
    for i in 0..fan.cone().len() {
        if !cone_h.contains(&fan.cone().generator(i)) {
            return Err(Error::FanMismatch(format!("generator {i} lies outside the cone")));
        }
    }
    let (v_hat, additive) = v.zero_normalize();
    let x = v_hat.zero_normalized_coords();
    if !cone_h.contains(&x) {
        return Err(Error::OutsideCone);
    }
    let coords = fan.conic_coordinates(&x).map_err(|e| match e {
        Error::OutsideSupport => Error::FanMismatch("the fan does not cover the cone".into()),
        e => e,
    })?;

    let mut tau = Vec::new();
    let mut alpha = sigma_additive.solve(&additive)?;
    for (&g, a) in coords.generators.iter().zip(&coords.coeffs) {
        let game = Game::from_zero_normalized_coords(n, &fan.cone().generator(g))?;
        let s = sigma_table.get(&game).ok_or(Error::MissingTableEntry(g))?;
        alpha = alpha.minkowski_sum(&s.scale(a))?;
        tau.push((format!("g{g}"), game.scale(a).into()));
    }
    tau.push(("additive".to_string(), additive.into()));
    let direct = sigma.solve(v)?;
    FactorizationRecord::new(Scheme::Cone, tau, as_value(alpha), as_value(direct))
}

/// Generator games of a fan's cone, in generator order.
pub fn fan_generator_games(n: usize, fan: &SimplicialFan) -> Result<Vec<Game>> {
    (0..fan.cone().len()).map(|i| Game::from_zero_normalized_coords(n, &fan.cone().generator(i))).collect()
}

/// `v^B = v(B) u_B + (v(N) - v(B)) u_N`.
pub fn game_vb(v: &Game, b: Coalition) -> Result<Game> {
    let n = v.n();
    let ub = Game::unanimity(n, b)?;
    let un = Game::unanimity(n, v.grand())?;
    let vb = v.value(b).clone();
    let rest = v.worth_of_grand() - &vb;
    Game::linear_combine(&[(vb, &ub), (rest, &un)])
}

fn check_zero_monotone(v: &Game) -> Result<()> {
    if let Some(i) = (1..=v.n()).find(|&i| !v.singleton_value(i).is_zero()) {
        return Err(Error::NotZeroMonotone(format!("v({}) = {}", Coalition::singleton(i), v.singleton_value(i))));
    }
    if let Some(Witness::Pair(a, b)) = monotone_violation(v) {
        return Err(Error::NotZeroMonotone(format!("v({a}) = {} > v({b}) = {}", v.value(a), v.value(b))));
    }
    Ok(())
}

/// The games `v^B` for all nonempty `B`, in canonical order.
pub fn max_decompose(v: &Game) -> Result<Vec<(Coalition, Game)>> {
    check_zero_monotone(v)?;
    nonempty_coalitions(v.n()).into_iter().map(|b| Ok((b, game_vb(v, b)?))).collect()
}

/// The core of a weakly superadditive game as the translate of the
/// intersection of the cores of `v̂^B`.
pub fn core_ws(v: &Game) -> Result<FactorizationRecord> {
    let n = v.n();
    if n > MAX_WS_CORE_PLAYERS {
        return Err(Error::PlayerCountOutOfRange(n, 1, MAX_WS_CORE_PLAYERS));
    }
    if let Some(Witness::Pair(a, s)) = weak_superadditivity_violation(v) {
        return Err(Error::NotWeaklySuperadditive(a, s.min_player().expect("singleton")));
    }
    let (v_hat, additive) = v.zero_normalize();
    let pieces = max_decompose(&v_hat)?;
    let shift = additive.restrict_additive()?;

    let mut inter = core_h(&pieces[0].1);
    for (_, g) in &pieces[1..] {
        inter = inter.intersect(&core_h(g))?;
    }
    let alpha = inter.vertices_unchecked()?.translate(shift.coords());
    let direct = core_h(v).vertices()?;

    let mut tau: Vec<(String, SetFunction)> = vec![("additive".to_string(), additive.into())];
    tau.extend(pieces.into_iter().map(|(b, g)| (format!("B={}", b.key()), g.into())));
    FactorizationRecord::new(Scheme::WsCore, tau, SolutionValue::Set(alpha), SolutionValue::Set(direct))
}

/// Compares the core of the pointwise supremum with the intersection of the
/// cores, for games sharing `v(N)`.
pub fn verify_core_intersection(games: &[Game]) -> Result<bool> {
    let first = games.first().ok_or(Error::EmptyList)?;
    if games.iter().any(|g| g.n() != first.n()) {
        return Err(Error::MixedPlayerCounts);
    }
    if games.iter().any(|g| g.worth_of_grand() != first.worth_of_grand()) {
        return Err(Error::GrandCoalitionMismatch);
    }
    let sup = Game::sup(games)?;
    let mut inter = core_h(first);
    for g in &games[1..] {
        inter = inter.intersect(&core_h(g))?;
    }
    polytope_equal(core_h(&sup), inter.vertices_unchecked()?)
}

/// `conv{v(B) δ^i + (v(N) - v(B)) δ^j : i ∈ B, j ∈ N}`.
pub fn nestohedron_core(v: &Game, b: Coalition) -> Result<VPolytope> {
    check_zero_monotone(v)?;
    if b.is_empty() {
        return Err(Error::EmptyCarrier);
    }
    let n = v.n();
    let vb = v.value(b);
    let rest = v.worth_of_grand() - vb;
    let mut points = Vec::new();
    for i in b.players() {
        for j in 1..=n {
            let mut p = vec![Rational::zero(); n];
            p[i - 1] += vb;
            p[j - 1] += &rest;
            points.push(p);
        }
    }
    VPolytope::hull(n, points)
}
