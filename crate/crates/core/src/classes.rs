//! Membership tests for the game classes, with witnesses on failure, and the
//! two Möbius-based decompositions.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{nonempty_coalitions, Allocation, Coalition, Game, MobiusCoeffs};
use crate::polyhedra::{lp_solve, HPolytope, LpResult, Sense};
use crate::rational::Rational;
use crate::solutions::core_h;

pub const MAX_BALANCED_PLAYERS: usize = 8;
pub const MAX_EXACT_PLAYERS: usize = 6;
const MAX_DEFINITIONAL_SUPERMODULAR: usize = 5;
const MAX_DEFINITIONAL_TM: usize = 4;

/// Evidence attached to a class flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A single coalition violating the condition.
    Coalition(Coalition),
    /// A pair of coalitions violating a two-set inequality.
    Pair(Coalition, Coalition),
    /// A point of the core.
    CorePoint(Allocation),
    /// Weights of a balanced collection whose weighted worth exceeds `v(N)`.
    BalancedWeights(Vec<(Coalition, Rational)>),
    /// A coalition whose minimum over the core exceeds its worth.
    ExactGap { coalition: Coalition, core_min: Rational },
    /// A subgame with empty core, with its own certificate.
    UnbalancedSubgame(Coalition, Vec<(Coalition, Rational)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFlag {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl ClassFlag {
    fn yes() -> Self {
        ClassFlag { holds: true, witness: None }
    }

    fn from_violation(w: Option<Witness>) -> Self {
        ClassFlag { holds: w.is_none(), witness: w }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassReport {
    pub weakly_superadditive: ClassFlag,
    pub monotone: ClassFlag,
    pub supermodular: ClassFlag,
    pub totally_monotone: ClassFlag,
    pub zero_normalized: ClassFlag,
    pub zero_monotone: ClassFlag,
    pub additive: ClassFlag,
    pub balanced: ClassFlag,
    /// `None` when `n` exceeds the bound for exactness tests.
    pub exact: Option<ClassFlag>,
    pub totally_balanced: Option<ClassFlag>,
}

impl ClassReport {
    /// Checks the inclusions between the classes. Returns the first violated
    /// implication.
    pub fn implication_violation(&self) -> Option<&'static str> {
        let exact = self.exact.as_ref().map(|f| f.holds);
        let tb = self.totally_balanced.as_ref().map(|f| f.holds);
        let checks = [
            (self.totally_monotone.holds && !self.supermodular.holds, "totally_monotone => supermodular"),
            (self.additive.holds && !self.totally_monotone.holds, "additive => totally_monotone"),
            (self.supermodular.holds && !self.weakly_superadditive.holds, "supermodular => weakly_superadditive"),
            (self.supermodular.holds && exact == Some(false), "supermodular => exact"),
            (self.supermodular.holds && !self.balanced.holds, "supermodular => balanced"),
            (exact == Some(true) && tb == Some(false), "exact => totally_balanced"),
            (tb == Some(true) && !self.balanced.holds, "totally_balanced => balanced"),
            (exact == Some(true) && !self.balanced.holds, "exact => balanced"),
            (
                self.zero_monotone.holds != (self.zero_normalized.holds && self.monotone.holds),
                "zero_monotone <=> zero_normalized and monotone",
            ),
            (
                self.zero_monotone.holds && !self.weakly_superadditive.holds,
                "zero_monotone => weakly_superadditive",
            ),
        ];
        checks.into_iter().find(|(bad, _)| *bad).map(|(_, name)| name)
    }
}

pub fn classify(v: &Game) -> Result<ClassReport> {
    let n = v.n();
    if n > MAX_BALANCED_PLAYERS {
        return Err(Error::PlayerCountOutOfRange(n, 1, MAX_BALANCED_PLAYERS));
    }
    let zero_normalized = ClassFlag::from_violation(zero_normalized_violation(v));
    let monotone = ClassFlag::from_violation(monotone_violation(v));
    let zero_monotone = ClassFlag::from_violation(
        zero_normalized.witness.clone().or_else(|| monotone.witness.clone()),
    );
    let (exact, totally_balanced) = if n <= MAX_EXACT_PLAYERS {
        (Some(is_exact(v)?), Some(is_totally_balanced(v)?))
    } else {
        (None, None)
    };
    Ok(ClassReport {
        weakly_superadditive: ClassFlag::from_violation(weak_superadditivity_violation(v)),
        monotone,
        supermodular: ClassFlag::from_violation(supermodularity_violation(v)),
        totally_monotone: ClassFlag::from_violation(total_monotonicity_violation(v)),
        zero_normalized,
        zero_monotone,
        additive: ClassFlag::from_violation(additivity_violation(v)),
        balanced: is_balanced(v)?,
        exact,
        totally_balanced,
    })
}

fn zero_normalized_violation(v: &Game) -> Option<Witness> {
    (1..=v.n())
        .map(Coalition::singleton)
        .find(|&s| !v.value(s).is_zero())
        .map(Witness::Coalition)
}

/// `v(A) ≤ v(A ∪ {i})` for all `A` and `i`; witness `(A, A ∪ {i})`.
pub fn monotone_violation(v: &Game) -> Option<Witness> {
    for a in crate::game::coalitions(v.n()) {
        for i in 1..=v.n() {
            if !a.contains(i) && v.value(a) > v.value(a.with(i)) {
                return Some(Witness::Pair(a, a.with(i)));
            }
        }
    }
    None
}

/// `v(A ∪ {i}) ≥ v(A) + v({i})` for `i ∉ A`; witness `(A, {i})`.
pub fn weak_superadditivity_violation(v: &Game) -> Option<Witness> {
    for a in crate::game::coalitions(v.n()) {
        for i in 1..=v.n() {
            if !a.contains(i) && *v.value(a.with(i)) < v.value(a) + v.singleton_value(i) {
                return Some(Witness::Pair(a, Coalition::singleton(i)));
            }
        }
    }
    None
}

fn additivity_violation(v: &Game) -> Option<Witness> {
    let x = v.singleton_allocation();
    nonempty_coalitions(v.n())
        .into_iter()
        .find(|&a| *v.value(a) != x.total(a))
        .map(Witness::Coalition)
}

/// Supermodularity through the local condition
/// `v(A∪{i}) + v(A∪{j}) ≤ v(A∪{i,j}) + v(A)`, cross-checked against the
/// definition over all pairs for small `n`.
pub fn supermodularity_violation(v: &Game) -> Option<Witness> {
    let local = local_supermodularity_violation(v);
    if v.n() <= MAX_DEFINITIONAL_SUPERMODULAR {
        let definitional = definitional_supermodularity_violation(v);
        assert_eq!(
            local.is_none(),
            definitional.is_none(),
            "local and definitional supermodularity tests disagree on {v:?}"
        );
    }
    local
}

fn local_supermodularity_violation(v: &Game) -> Option<Witness> {
    let n = v.n();
    for a in crate::game::coalitions(n) {
        for i in 1..=n {
            for j in i + 1..=n {
                if a.contains(i) || a.contains(j) {
                    continue;
                }
                let (ai, aj) = (a.with(i), a.with(j));
                if v.value(ai) + v.value(aj) > v.value(ai.with(j)) + v.value(a) {
                    return Some(Witness::Pair(ai, aj));
                }
            }
        }
    }
    None
}

fn definitional_supermodularity_violation(v: &Game) -> Option<Witness> {
    let all = crate::game::coalitions(v.n());
    for &a in &all {
        for &b in &all {
            if v.value(a.union(b)) + v.value(a.intersection(b)) < v.value(a) + v.value(b) {
                return Some(Witness::Pair(a, b));
            }
        }
    }
    None
}

/// Total monotonicity through nonnegativity of the dividends on coalitions of
/// size at least two. For small `n` a positive answer is cross-checked against
/// the defining inequalities with two and three sets.
pub fn total_monotonicity_violation(v: &Game) -> Option<Witness> {
    let m = v.mobius();
    let bad = nonempty_coalitions(v.n())
        .into_iter()
        .find(|&a| a.len() >= 2 && m.coeff(a).is_negative())
        .map(Witness::Coalition);
    if bad.is_none() && v.n() <= MAX_DEFINITIONAL_TM {
        assert!(
            definitional_tm_holds(v),
            "nonnegative dividends but a covering inequality fails on {v:?}"
        );
    }
    bad
}

fn definitional_tm_holds(v: &Game) -> bool {
    let all = crate::game::coalitions(v.n());
    for (x, &a) in all.iter().enumerate() {
        for (y, &b) in all.iter().enumerate().skip(x) {
            if v.value(a.union(b)) + v.value(a.intersection(b)) < v.value(a) + v.value(b) {
                return false;
            }
            for &c in &all[y..] {
                let rhs = v.value(a) + v.value(b) + v.value(c)
                    - v.value(a.intersection(b))
                    - v.value(a.intersection(c))
                    - v.value(b.intersection(c))
                    + v.value(a.intersection(b).intersection(c));
                if *v.value(a.union(b).union(c)) < rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// Nonemptiness of the core. On success the witness is a core point; on
/// failure it is an optimal solution of the dual program
/// `max Σ λ_A v(A)` over balanced weights on proper coalitions.
pub fn is_balanced(v: &Game) -> Result<ClassFlag> {
    let n = v.n();
    if n > MAX_BALANCED_PLAYERS {
        return Err(Error::PlayerCountOutOfRange(n, 1, MAX_BALANCED_PLAYERS));
    }
    let core = core_h(v);
    let zero = vec![Rational::zero(); n];
    if let LpResult::Optimal { point, .. } = lp_solve(&zero, &core, Sense::Minimize)? {
        return Ok(ClassFlag { holds: true, witness: Some(Witness::CorePoint(Allocation(point))) });
    }
    Ok(ClassFlag { holds: false, witness: Some(Witness::BalancedWeights(balanced_weights(v)?)) })
}

fn balanced_weights(v: &Game) -> Result<Vec<(Coalition, Rational)>> {
    let n = v.n();
    let proper: Vec<Coalition> = nonempty_coalitions(n).into_iter().filter(|&a| a != v.grand()).collect();
    let mut lp = HPolytope::nonnegative_orthant(proper.len());
    for i in 1..=n {
        let row = proper
            .iter()
            .map(|a| if a.contains(i) { Rational::one() } else { Rational::zero() })
            .collect();
        lp.add_equality(row, Rational::one());
    }
    let obj: Vec<Rational> = proper.iter().map(|&a| v.value(a).clone()).collect();
    let res = lp_solve(&obj, &lp, Sense::Maximize)?;
    let LpResult::Optimal { value, point, .. } = res else {
        unreachable!("singleton weights are feasible and the program is bounded");
    };
    debug_assert!(value > *v.worth_of_grand());
    Ok(proper.into_iter().zip(point).filter(|(_, w)| !w.is_zero()).collect())
}

/// Every worth is attained as a minimum over the core.
pub fn is_exact(v: &Game) -> Result<ClassFlag> {
    let n = v.n();
    if n > MAX_EXACT_PLAYERS {
        return Err(Error::PlayerCountOutOfRange(n, 1, MAX_EXACT_PLAYERS));
    }
    let balanced = is_balanced(v)?;
    if !balanced.holds {
        return Ok(balanced);
    }
    let core = core_h(v);
    for a in nonempty_coalitions(n) {
        if a == v.grand() {
            continue;
        }
        let obj: Vec<Rational> =
            (1..=n).map(|i| if a.contains(i) { Rational::one() } else { Rational::zero() }).collect();
        let res = lp_solve(&obj, &core, Sense::Minimize)?;
        let min = res.optimal_value().expect("the core is nonempty and bounded below on x(A)");
        if min != v.value(a) {
            return Ok(ClassFlag {
                holds: false,
                witness: Some(Witness::ExactGap { coalition: a, core_min: min.clone() }),
            });
        }
    }
    Ok(ClassFlag::yes())
}

/// Every subgame has a nonempty core.
pub fn is_totally_balanced(v: &Game) -> Result<ClassFlag> {
    let n = v.n();
    if n > MAX_EXACT_PLAYERS {
        return Err(Error::PlayerCountOutOfRange(n, 1, MAX_EXACT_PLAYERS));
    }
    for a in nonempty_coalitions(n) {
        let flag = is_balanced(&v.subgame(a)?)?;
        if !flag.holds {
            let Some(Witness::BalancedWeights(w)) = flag.witness else { unreachable!() };
            let lifted = w
                .into_iter()
                .map(|(c, x)| (lift_coalition(c, a), x))
                .collect();
            return Ok(ClassFlag { holds: false, witness: Some(Witness::UnbalancedSubgame(a, lifted)) });
        }
    }
    Ok(ClassFlag::yes())
}

/// Maps a coalition of the relabelled subgame on `carrier` back to `N`.
fn lift_coalition(c: Coalition, carrier: Coalition) -> Coalition {
    let members: Vec<usize> = carrier.players().collect();
    Coalition::from_players(c.players().map(|k| members[k - 1]))
}

/// The minimal pair `(w1, w2)` of nonnegative totally monotone games with
/// `v = w1 - w2`: the zeta transforms of the positive and negative parts of
/// the dividends.
pub fn jordan_decompose_tm(v: &Game) -> (Game, Game) {
    let m = v.mobius();
    let pos = MobiusCoeffs::from_fn(v.n(), |a| {
        let c = m.coeff(a);
        if c.is_positive() { c.clone() } else { Rational::zero() }
    });
    let neg = MobiusCoeffs::from_fn(v.n(), |a| {
        let c = m.coeff(a);
        if c.is_negative() { -c } else { Rational::zero() }
    });
    (pos.inverse(), neg.inverse())
}

/// Coefficients `λ_A ≥ 0` (|A| ≥ 2) with `v = Σ λ_A u_A`.
pub fn almost_positive_coeffs(v: &Game) -> Result<MobiusCoeffs> {
    if let Some(Witness::Coalition(s)) = zero_normalized_violation(v) {
        return Err(Error::NotInClass(format!("zero_normalized: v({s}) = {}", v.value(s))));
    }
    let m = v.mobius();
    if let Some(a) = nonempty_coalitions(v.n()).into_iter().find(|&a| m.coeff(a).is_negative()) {
        return Err(Error::NotInClass(format!("totally_monotone: m({a}) = {}", m.coeff(a))));
    }
    Ok(m)
}
