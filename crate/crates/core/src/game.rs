//! Coalitional games as dense exact tables over coalition bitmasks.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub const MAX_PLAYERS: usize = 12;

/// A set of players encoded as a bitmask, player `i` on bit `i - 1`.
///
/// Coalitions order canonically: by cardinality first, then by mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn from_mask(mask: u32) -> Self {
        Coalition(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The grand coalition `{1, ..., n}`.
    pub fn grand(n: usize) -> Self {
        Coalition(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(player: usize) -> Self {
        debug_assert!(player >= 1);
        Coalition(1 << (player - 1))
    }

    /// Builds a coalition from 1-based player indices.
    pub fn from_players<I: IntoIterator<Item = usize>>(players: I) -> Self {
        Coalition(players.into_iter().fold(0, |m, p| m | (1 << (p - 1))))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, player: usize) -> bool {
        self.0 & (1 << (player - 1)) != 0
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Coalition) -> Coalition {
        Coalition(self.0 | other.0)
    }

    pub fn intersection(self, other: Coalition) -> Coalition {
        Coalition(self.0 & other.0)
    }

    pub fn minus(self, other: Coalition) -> Coalition {
        Coalition(self.0 & !other.0)
    }

    pub fn with(self, player: usize) -> Coalition {
        self.union(Coalition::singleton(player))
    }

    pub fn without(self, player: usize) -> Coalition {
        self.minus(Coalition::singleton(player))
    }

    /// Members in increasing order, 1-based.
    pub fn players(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |b| self.0 & (1 << b) != 0).map(|b| b + 1)
    }

    pub fn min_player(self) -> Option<usize> {
        (!self.is_empty()).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// All subsets of `self`, in increasing mask order (so `∅` first).
    pub fn subsets(self) -> impl Iterator<Item = Coalition> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some((cur.wrapping_sub(full)) & full) };
            Some(Coalition(cur))
        })
    }

    /// Comma-separated ascending member list, e.g. `"1,3"`; the file-format key.
    pub fn key(self) -> String {
        self.players().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn in_range(self, n: usize) -> bool {
        (self.0 as u64) < (1u64 << n)
    }
}

impl Ord for Coalition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then(self.0.cmp(&other.0))
    }
}

impl PartialOrd for Coalition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Every coalition of `n` players in canonical order (cardinality, then mask),
/// starting with the empty coalition.
pub fn coalitions(n: usize) -> Vec<Coalition> {
    let mut all: Vec<Coalition> = (0..1u32 << n).map(Coalition).collect();
    all.sort();
    all
}

/// Nonempty coalitions in canonical order; the coordinate order of game vectors.
pub fn nonempty_coalitions(n: usize) -> Vec<Coalition> {
    coalitions(n).into_iter().skip(1).collect()
}

/// Coalitions with at least two members in canonical order; the coordinate
/// order of zero-normalized games.
pub fn multi_player_coalitions(n: usize) -> Vec<Coalition> {
    coalitions(n).into_iter().filter(|a| a.len() >= 2).collect()
}

pub(crate) fn check_player_count(n: usize) -> Result<()> {
    if (1..=MAX_PLAYERS).contains(&n) {
        Ok(())
    } else {
        Err(Error::PlayerCountOutOfRange(n, 1, MAX_PLAYERS))
    }
}

/// A transferable-utility game: an exact worth for each of the `2^n` coalitions,
/// with worth 0 on the empty coalition.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Game {
    n: usize,
    values: Vec<Rational>,
}

impl Game {
    /// Builds a game from explicit worths; unlisted coalitions are worth 0.
    pub fn new(n: usize, assignments: &[(Coalition, Rational)]) -> Result<Game> {
        check_player_count(n)?;
        let mut values = vec![Rational::zero(); 1 << n];
        let mut seen = vec![false; 1 << n];
        for (a, value) in assignments {
            if !a.in_range(n) {
                return Err(Error::CoalitionOutOfRange(*a, n));
            }
            if std::mem::replace(&mut seen[a.index()], true) {
                return Err(Error::DuplicateCoalition(*a));
            }
            if a.is_empty() && !value.is_zero() {
                return Err(Error::NonzeroEmptySet);
            }
            values[a.index()] = value.clone();
        }
        Ok(Game { n, values })
    }

    /// Builds a game from a dense table indexed by mask.
    pub fn from_table(n: usize, values: Vec<Rational>) -> Result<Game> {
        check_player_count(n)?;
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, found: values.len() });
        }
        if !values[0].is_zero() {
            return Err(Error::NonzeroEmptySet);
        }
        Ok(Game { n, values })
    }

    /// Builds a game by evaluating `f` on every nonempty coalition.
    pub fn from_fn(n: usize, mut f: impl FnMut(Coalition) -> Rational) -> Game {
        assert!((1..=MAX_PLAYERS).contains(&n), "player count {n} out of range");
        let values = (0..1u32 << n)
            .map(|m| if m == 0 { Rational::zero() } else { f(Coalition(m)) })
            .collect();
        Game { n, values }
    }

    pub fn zero(n: usize) -> Game {
        Game::from_fn(n, |_| Rational::zero())
    }

    /// `u_A`: worth 1 on every superset of `carrier`, 0 elsewhere.
    pub fn unanimity(n: usize, carrier: Coalition) -> Result<Game> {
        check_player_count(n)?;
        if carrier.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        if !carrier.in_range(n) {
            return Err(Error::CoalitionOutOfRange(carrier, n));
        }
        Ok(Game::from_fn(n, |b| {
            if carrier.is_subset_of(b) { Rational::from_integer(1.into()) } else { Rational::zero() }
        }))
    }

    /// Coordinates over nonempty coalitions in canonical order (length `2^n - 1`).
    pub fn from_coords(n: usize, coords: &[Rational]) -> Result<Game> {
        let order = nonempty_coalitions(n);
        if coords.len() != order.len() {
            return Err(Error::DimensionMismatch { expected: order.len(), found: coords.len() });
        }
        let mut values = vec![Rational::zero(); 1 << n];
        for (a, c) in order.iter().zip(coords) {
            values[a.index()] = c.clone();
        }
        Ok(Game { n, values })
    }

    /// Coordinates of a zero-normalized game: worths of the coalitions with at
    /// least two members, in canonical order (length `2^n - n - 1`).
    pub fn from_zero_normalized_coords(n: usize, coords: &[Rational]) -> Result<Game> {
        let order = multi_player_coalitions(n);
        if coords.len() != order.len() {
            return Err(Error::DimensionMismatch { expected: order.len(), found: coords.len() });
        }
        let mut values = vec![Rational::zero(); 1 << n];
        for (a, c) in order.iter().zip(coords) {
            values[a.index()] = c.clone();
        }
        Ok(Game { n, values })
    }

    pub fn zero_normalized_coords(&self) -> Vec<Rational> {
        multi_player_coalitions(self.n).into_iter().map(|a| self.values[a.index()].clone()).collect()
    }

    pub fn to_coords(&self) -> Vec<Rational> {
        nonempty_coalitions(self.n).into_iter().map(|a| self.values[a.index()].clone()).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n)
    }

    pub fn value(&self, a: Coalition) -> &Rational {
        &self.values[a.index()]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn worth_of_grand(&self) -> &Rational {
        &self.values[self.grand().index()]
    }

    pub fn singleton_value(&self, player: usize) -> &Rational {
        &self.values[Coalition::singleton(player).index()]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Game {
        Game { n: self.n, values: self.values.iter().map(|x| c * x).collect() }
    }

    /// `sum c_i * v_i`, pointwise.
    pub fn linear_combine(terms: &[(Rational, &Game)]) -> Result<Game> {
        let (_, first) = terms.first().ok_or(Error::EmptyList)?;
        let n = first.n;
        let mut values = vec![Rational::zero(); 1 << n];
        for (c, g) in terms {
            if g.n != n {
                return Err(Error::MixedPlayerCounts);
            }
            if c.is_zero() {
                continue;
            }
            for (acc, x) in values.iter_mut().zip(&g.values) {
                *acc += c * x;
            }
        }
        Ok(Game { n, values })
    }

    fn pointwise<'a, I, F>(games: I, pick: F) -> Result<Game>
    where
        I: IntoIterator<Item = &'a Game>,
        F: Fn(&Rational, &Rational) -> bool,
    {
        let mut iter = games.into_iter();
        let mut acc = iter.next().ok_or(Error::EmptyList)?.clone();
        for g in iter {
            if g.n != acc.n {
                return Err(Error::MixedPlayerCounts);
            }
            for (a, x) in acc.values.iter_mut().zip(&g.values) {
                if pick(x, a) {
                    *a = x.clone();
                }
            }
        }
        Ok(acc)
    }

    /// Pointwise supremum.
    pub fn sup<'a, I: IntoIterator<Item = &'a Game>>(games: I) -> Result<Game> {
        Game::pointwise(games, |x, a| x > a)
    }

    /// Pointwise infimum.
    pub fn inf<'a, I: IntoIterator<Item = &'a Game>>(games: I) -> Result<Game> {
        Game::pointwise(games, |x, a| x < a)
    }

    /// Harsanyi dividends `m(A) = sum_{B ⊆ A} (-1)^{|A∖B|} v(B)`, computed by
    /// the subset-difference recursion in `O(n 2^n)`.
    pub fn mobius(&self) -> MobiusCoeffs {
        let mut coeffs = self.values.clone();
        for bit in 0..self.n {
            let b = 1usize << bit;
            for mask in 0..coeffs.len() {
                if mask & b != 0 {
                    let lower = coeffs[mask ^ b].clone();
                    coeffs[mask] -= lower;
                }
            }
        }
        MobiusCoeffs { n: self.n, coeffs }
    }

    /// Splits `v` into its zero-normalization `v̂(A) = v(A) - sum_{i∈A} v({i})`
    /// and the additive remainder `v - v̂`.
    pub fn zero_normalize(&self) -> (Game, Game) {
        let additive = Game::additive(&self.singleton_allocation());
        let normalized = self - &additive;
        (normalized, additive)
    }

    /// `(v({1}), ..., v({n}))`.
    pub fn singleton_allocation(&self) -> Allocation {
        Allocation((1..=self.n).map(|i| self.singleton_value(i).clone()).collect())
    }

    /// `m_x(A) = x(A)`, the additive game of an allocation.
    pub fn additive(x: &Allocation) -> Game {
        Game::from_fn(x.n(), |a| x.total(a))
    }

    /// Inverse of [`Game::additive`]; fails when the game is not additive.
    pub fn restrict_additive(&self) -> Result<Allocation> {
        let x = self.singleton_allocation();
        for a in coalitions(self.n) {
            if self.value(a) != &x.total(a) {
                return Err(Error::NotAdditive(a));
            }
        }
        Ok(x)
    }

    pub fn is_additive(&self) -> bool {
        self.restrict_additive().is_ok()
    }

    pub fn is_zero_normalized(&self) -> bool {
        (1..=self.n).all(|i| self.singleton_value(i).is_zero())
    }

    /// Restriction to the subsets of `carrier`, re-indexed so that its members
    /// become players `1..=|carrier|` in increasing order.
    pub fn subgame(&self, carrier: Coalition) -> Result<Game> {
        if carrier.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        if !carrier.in_range(self.n) {
            return Err(Error::CoalitionOutOfRange(carrier, self.n));
        }
        let members: Vec<usize> = carrier.players().collect();
        Ok(Game::from_fn(members.len(), |local| {
            let global = Coalition::from_players(local.players().map(|p| members[p - 1]));
            self.value(global).clone()
        }))
    }

    /// `D_i(A) = v(A ∪ {i}) - v(A)` for all `A`, zero when `i ∈ A`. At `∅`
    /// this is `v({i})`, so the result is a set function rather than a game.
    pub fn marginal_game(&self, player: usize) -> SetFunction {
        let values = (0..1u32 << self.n)
            .map(|m| {
                let a = Coalition(m);
                self.value(a.with(player)) - self.value(a)
            })
            .collect();
        SetFunction { n: self.n, values }
    }

    /// `v(A) - x(A)` for all `A`.
    pub fn excess_game(&self, x: &Allocation) -> Game {
        Game::from_fn(self.n, |a| self.value(a) - x.total(a))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|x| !x.is_negative())
    }
}

impl Index<Coalition> for Game {
    type Output = Rational;
    fn index(&self, a: Coalition) -> &Rational {
        self.value(a)
    }
}

impl fmt::Debug for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for a in nonempty_coalitions(self.n) {
            if !self.values[a.index()].is_zero() {
                map.entry(&a, &self.values[a.index()].to_string());
            }
        }
        map.finish()
    }
}

impl<'a> Add<&'a Game> for &'a Game {
    type Output = Game;
    fn add(self, rhs: &Game) -> Game {
        assert_eq!(self.n, rhs.n, "player counts differ");
        Game { n: self.n, values: self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a Game> for &'a Game {
    type Output = Game;
    fn sub(self, rhs: &Game) -> Game {
        assert_eq!(self.n, rhs.n, "player counts differ");
        Game { n: self.n, values: self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Game {
    type Output = Game;
    fn neg(self) -> Game {
        Game { n: self.n, values: self.values.iter().map(|x| -x).collect() }
    }
}

/// A table of worths on all `2^n` coalitions with no condition at `∅`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SetFunction {
    n: usize,
    values: Vec<Rational>,
}

impl SetFunction {
    pub fn from_table(n: usize, values: Vec<Rational>) -> Result<Self> {
        check_player_count(n)?;
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, found: values.len() });
        }
        Ok(SetFunction { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, a: Coalition) -> &Rational {
        &self.values[a.index()]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// The game with the same table, when the worth of `∅` is 0.
    pub fn to_game(&self) -> Result<Game> {
        Game::from_table(self.n, self.values.clone())
    }
}

impl From<Game> for SetFunction {
    fn from(v: Game) -> Self {
        SetFunction { n: v.n, values: v.values }
    }
}

impl Index<Coalition> for SetFunction {
    type Output = Rational;
    fn index(&self, a: Coalition) -> &Rational {
        self.value(a)
    }
}

/// Dividend table of a game, indexed like [`Game`]; the entry at `∅` is 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MobiusCoeffs {
    n: usize,
    coeffs: Vec<Rational>,
}

impl MobiusCoeffs {
    pub fn new(n: usize, coeffs: Vec<Rational>) -> Result<Self> {
        check_player_count(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, found: coeffs.len() });
        }
        if !coeffs[0].is_zero() {
            return Err(Error::NonzeroEmptySet);
        }
        Ok(MobiusCoeffs { n, coeffs })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(Coalition) -> Rational) -> Self {
        let g = Game::from_fn(n, &mut f);
        MobiusCoeffs { n, coeffs: g.values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, a: Coalition) -> &Rational {
        &self.coeffs[a.index()]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Zeta transform `v(A) = sum_{B ⊆ A} m(B)`.
    pub fn inverse(&self) -> Game {
        let mut values = self.coeffs.clone();
        for bit in 0..self.n {
            let b = 1usize << bit;
            for mask in 0..values.len() {
                if mask & b != 0 {
                    let lower = values[mask ^ b].clone();
                    values[mask] += lower;
                }
            }
        }
        Game { n: self.n, values }
    }

    /// Nonzero entries in canonical coalition order.
    pub fn support(&self) -> Vec<Coalition> {
        coalitions(self.n).into_iter().filter(|a| !self.coeffs[a.index()].is_zero()).collect()
    }
}

impl Index<Coalition> for MobiusCoeffs {
    type Output = Rational;
    fn index(&self, a: Coalition) -> &Rational {
        self.coeff(a)
    }
}

/// A payoff vector `(x_1, ..., x_n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Allocation(pub Vec<Rational>);

impl Allocation {
    pub fn zero(n: usize) -> Self {
        Allocation(vec![Rational::zero(); n])
    }

    /// `δ^i`, the unit vector of player `i`.
    pub fn unit(n: usize, player: usize) -> Self {
        let mut x = Allocation::zero(n);
        x.0[player - 1] = Rational::from_integer(1.into());
        x
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `x(A) = sum_{i∈A} x_i`, with `x(∅) = 0`.
    pub fn total(&self, a: Coalition) -> Rational {
        a.players().fold(Rational::zero(), |acc, p| acc + &self.0[p - 1])
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }
}

impl Index<usize> for Allocation {
    type Output = Rational;
    /// 1-based player index.
    fn index(&self, player: usize) -> &Rational {
        &self.0[player - 1]
    }
}

impl fmt::Debug for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter().map(|x| x.to_string())).finish()
    }
}

impl<'a> Add<&'a Allocation> for &'a Allocation {
    type Output = Allocation;
    fn add(self, rhs: &Allocation) -> Allocation {
        Allocation(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}
