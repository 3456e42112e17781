//! Exact two-phase primal simplex on a dense rational tableau.
//!
//! Problems are stated over an [`HPolytope`] with free variables. Internally
//! every free variable is split into a positive and a negative part, every
//! inequality gets a surplus column, and every row gets an artificial column
//! that is kept after phase one so that the final tableau exposes `B^{-1}` and
//! with it the dual multipliers. Entering and leaving variables follow Bland's
//! rule, which rules out cycling.

use num_traits::{One, Signed, Zero};

use super::polytope::HPolytope;
use crate::error::{Error, Result};
use crate::rational::{dot, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Outcome of [`lp_solve`].
///
/// Dual multipliers use the convention `objective = sum_i y_i a_i + sum_j z_j e_j`
/// over the inequality rows `a_i · x ≥ b_i` and equality rows `e_j · x = f_j`,
/// with `y ≥ 0` when minimizing and `y ≤ 0` when maximizing; the optimal value
/// then equals `y · b + z · f`.
#[derive(Clone, Debug, PartialEq)]
pub enum LpResult {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
        ineq_duals: Vec<Rational>,
        eq_duals: Vec<Rational>,
    },
    /// Farkas certificate: `y ≥ 0`, `sum y_i a_i + sum z_j e_j = 0` and
    /// `y · b + z · f = 1`, which no point of the polytope can satisfy.
    Infeasible { ineq_mult: Vec<Rational>, eq_mult: Vec<Rational> },
    /// A feasible point and a recession direction improving the objective.
    Unbounded { point: Vec<Rational>, ray: Vec<Rational> },
}

impl LpResult {
    pub fn optimal_value(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn optimal_point(&self) -> Option<&[Rational]> {
        match self {
            LpResult::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpResult::Infeasible { .. })
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    /// Reduced costs followed by minus the objective value.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        if !inv.is_one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            if row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] -= &f * &pivot_row[j];
            }
        };
        for row in self.rows.iter_mut() {
            if !row.is_empty() {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Runs Bland's rule over the columns `< allowed`. Returns the entering
    /// column of an unbounded direction, if one is found.
    fn optimize(&mut self, allowed: usize) -> Option<usize> {
        let rhs = self.ncols;
        loop {
            let c = (0..allowed).find(|&j| self.obj[j].is_negative())?;
            let mut best: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Some(c),
            }
        }
    }

    fn set_objective(&mut self, costs: &[Rational]) {
        let rhs = self.ncols;
        let mut obj = vec![Rational::zero(); rhs + 1];
        obj[..costs.len()].clone_from_slice(costs);
        for (r, row) in self.rows.iter().enumerate() {
            let cb = &costs.get(self.basis[r]).cloned().unwrap_or_else(Rational::zero);
            if cb.is_zero() {
                continue;
            }
            for (o, x) in obj.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o -= cb * x;
                }
            }
        }
        self.obj = obj;
    }

    fn primal_values(&self) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); self.ncols];
        for (r, &b) in self.basis.iter().enumerate() {
            y[b] = self.rows[r][self.ncols].clone();
        }
        y
    }
}

/// Optimizes `objective · x` over `poly`.
pub fn lp_solve(objective: &[Rational], poly: &HPolytope, sense: Sense) -> Result<LpResult> {
    let d = poly.dim();
    if objective.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: objective.len() });
    }
    let ineqs = poly.inequalities();
    let eqs = poly.equalities();
    let mi = ineqs.len();
    let m = mi + eqs.len();

    // columns: x+ (d), x- (d), surplus (mi), artificial (m), rhs
    let art0 = 2 * d + mi;
    let ncols = art0 + m;
    let mut signs = Vec::with_capacity(m);
    let mut rows = Vec::with_capacity(m);
    for (r, con) in ineqs.iter().chain(eqs).enumerate() {
        let mut row = vec![Rational::zero(); ncols + 1];
        for (j, a) in con.normal.iter().enumerate() {
            row[j] = a.clone();
            row[d + j] = -a;
        }
        if r < mi {
            row[2 * d + r] = -Rational::one();
        }
        row[ncols] = con.rhs.clone();
        let flip = con.rhs.is_negative();
        if flip {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
        row[art0 + r] = Rational::one();
        signs.push(if flip { -Rational::one() } else { Rational::one() });
        rows.push(row);
    }
    let mut t = Tableau { rows, obj: Vec::new(), basis: (art0..art0 + m).collect(), ncols };

    let mut phase1 = vec![Rational::zero(); ncols];
    for c in phase1[art0..].iter_mut() {
        *c = Rational::one();
    }
    t.set_objective(&phase1);
    t.optimize(ncols);
    if !t.obj[ncols].is_zero() {
        let (ineq_mult, eq_mult) = farkas_certificate(poly)?;
        return Ok(LpResult::Infeasible { ineq_mult, eq_mult });
    }
    // Drive zero-level artificials out of the basis where possible; rows with
    // no structural entry are redundant and keep their artificial at zero.
    for r in 0..m {
        if t.basis[r] >= art0 {
            if let Some(c) = (0..art0).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, c);
            }
        }
    }

    let mut costs = vec![Rational::zero(); ncols];
    for (j, c) in objective.iter().enumerate() {
        let c = if sense == Sense::Maximize { -c } else { c.clone() };
        costs[d + j] = -&c;
        costs[j] = c;
    }
    t.set_objective(&costs);
    let y = |t: &Tableau| t.primal_values();
    let to_x = |y: &[Rational]| -> Vec<Rational> { (0..d).map(|j| &y[j] - &y[d + j]).collect() };

    if let Some(c) = t.optimize(art0) {
        let point = to_x(&y(&t));
        let mut dir = vec![Rational::zero(); ncols];
        dir[c] = Rational::one();
        for (r, &b) in t.basis.iter().enumerate() {
            dir[b] = -&t.rows[r][c];
        }
        return Ok(LpResult::Unbounded { point, ray: to_x(&dir) });
    }

    let point = to_x(&y(&t));
    let value = dot(objective, &point);
    // pi_r = -(reduced cost of artificial r); undo the row flips, then the
    // objective negation for maximization.
    let flip_sense = if sense == Sense::Maximize { -Rational::one() } else { Rational::one() };
    let duals: Vec<Rational> =
        (0..m).map(|r| -&t.obj[art0 + r] * &signs[r] * &flip_sense).collect();
    let (ineq_duals, eq_duals) = duals.split_at(mi);
    Ok(LpResult::Optimal { value, point, ineq_duals: ineq_duals.to_vec(), eq_duals: eq_duals.to_vec() })
}

/// Solves the alternative system of an infeasible polytope.
fn farkas_certificate(poly: &HPolytope) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let d = poly.dim();
    let ineqs = poly.inequalities();
    let eqs = poly.equalities();
    let mi = ineqs.len();
    let k = mi + eqs.len();
    let mut alt = HPolytope::whole_space(k);
    for i in 0..mi {
        let mut e = vec![Rational::zero(); k];
        e[i] = Rational::one();
        alt.add_inequality(e, Rational::zero());
    }
    for j in 0..d {
        let row: Vec<Rational> = ineqs.iter().chain(eqs).map(|c| c.normal[j].clone()).collect();
        alt.add_equality(row, Rational::zero());
    }
    let rhs_row: Vec<Rational> = ineqs.iter().chain(eqs).map(|c| c.rhs.clone()).collect();
    alt.add_equality(rhs_row, Rational::one());
    match lp_solve(&vec![Rational::zero(); k], &alt, Sense::Minimize)? {
        LpResult::Optimal { mut point, .. } => {
            let eq = point.split_off(mi);
            Ok((point, eq))
        }
        other => unreachable!("alternative system of an infeasible polytope must be feasible: {other:?}"),
    }
}
