//! Half-space and vertex descriptions of polytopes and the conversions between
//! them.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dd::cone_generators;
use super::lp::{lp_solve, LpResult, Sense};
use crate::error::{Error, Result};
use crate::game::Coalition;
use crate::rational::{add_vec, dot, primitive_integer, scale_vec, sign_normalize, to_rational_vec, Rational};

pub const MAX_VERTEX_DIM: usize = 8;
pub const MAX_VERTEX_ROWS: usize = 64;

/// `normal · x ≥ rhs` as an inequality, `normal · x = rhs` as an equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub normal: Vec<Rational>,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(normal: Vec<Rational>, rhs: Rational) -> Self {
        Constraint { normal, rhs }
    }

    /// Scales the row `(normal, rhs)` by a positive factor to primitive integers.
    fn primitive(&self) -> Constraint {
        let mut all = self.normal.clone();
        all.push(self.rhs.clone());
        let mut ints = to_rational_vec(&primitive_integer(&all));
        let rhs = ints.pop().unwrap();
        Constraint { normal: ints, rhs }
    }

    fn is_trivial_normal(&self) -> bool {
        self.normal.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    inequalities: Vec<Constraint>,
    equalities: Vec<Constraint>,
}

impl HPolytope {
    pub fn whole_space(dim: usize) -> Self {
        HPolytope { dim, inequalities: Vec::new(), equalities: Vec::new() }
    }

    pub fn nonnegative_orthant(dim: usize) -> Self {
        let mut p = HPolytope::whole_space(dim);
        for i in 0..dim {
            p.add_inequality(unit(dim, i), Rational::zero());
        }
        p
    }

    /// `Δ_A = conv{δ^i : i ∈ A}` inside `R^n`.
    pub fn standard_simplex(n: usize, carrier: Coalition) -> Self {
        let mut p = HPolytope::nonnegative_orthant(n);
        for j in 1..=n {
            if !carrier.contains(j) {
                p.add_equality(unit(n, j - 1), Rational::zero());
            }
        }
        let ones: Vec<Rational> = (1..=n).map(|j| Rational::from_integer((carrier.contains(j) as i32).into())).collect();
        p.add_equality(ones, Rational::one());
        p
    }

    pub fn from_constraints(dim: usize, inequalities: Vec<Constraint>, equalities: Vec<Constraint>) -> Result<Self> {
        for c in inequalities.iter().chain(&equalities) {
            if c.normal.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: c.normal.len() });
            }
        }
        Ok(HPolytope { dim, inequalities, equalities })
    }

    pub fn add_inequality(&mut self, normal: Vec<Rational>, rhs: Rational) {
        assert_eq!(normal.len(), self.dim, "constraint dimension");
        self.inequalities.push(Constraint { normal, rhs });
    }

    pub fn add_equality(&mut self, normal: Vec<Rational>, rhs: Rational) {
        assert_eq!(normal.len(), self.dim, "constraint dimension");
        self.equalities.push(Constraint { normal, rhs });
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[Constraint] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[Constraint] {
        &self.equalities
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim
            && self.inequalities.iter().all(|c| dot(&c.normal, x) >= c.rhs)
            && self.equalities.iter().all(|c| dot(&c.normal, x) == c.rhs)
    }

    /// Primitive integer rows, equalities sign-normalized, trivial rows dropped,
    /// duplicates removed, rows sorted.
    pub fn canonical(&self) -> HPolytope {
        let mut ineqs = BTreeSet::new();
        let mut eqs = BTreeSet::new();
        let mut infeasible = false;
        for c in &self.inequalities {
            if c.is_trivial_normal() {
                infeasible |= c.rhs.is_positive();
                continue;
            }
            ineqs.insert(c.primitive());
        }
        for c in &self.equalities {
            if c.is_trivial_normal() {
                infeasible |= !c.rhs.is_zero();
                continue;
            }
            let p = c.primitive();
            let mut all = p.normal.clone();
            all.push(p.rhs.clone());
            let ints: Vec<BigInt> = all.iter().map(|x| x.numer().clone()).collect();
            let mut ints = to_rational_vec(&sign_normalize(ints));
            let rhs = ints.pop().unwrap();
            eqs.insert(Constraint { normal: ints, rhs });
        }
        if infeasible {
            return HPolytope::empty(self.dim);
        }
        HPolytope { dim: self.dim, inequalities: ineqs.into_iter().collect(), equalities: eqs.into_iter().collect() }
    }

    /// The canonical empty polytope `0 ≥ 1`.
    pub fn empty(dim: usize) -> HPolytope {
        HPolytope {
            dim,
            inequalities: vec![Constraint { normal: vec![Rational::zero(); dim], rhs: Rational::one() }],
            equalities: Vec::new(),
        }
    }

    pub fn is_feasible(&self) -> Result<bool> {
        Ok(!lp_solve(&vec![Rational::zero(); self.dim], self, Sense::Minimize)?.is_infeasible())
    }

    /// Canonical form with redundant rows removed: dependent equalities by rank,
    /// then every inequality implied by the remaining rows (checked by LP).
    pub fn irredundant(&self) -> Result<HPolytope> {
        let canon = self.canonical();
        if !canon.is_feasible()? {
            return Ok(HPolytope::empty(self.dim));
        }
        let mut eqs: Vec<Constraint> = Vec::new();
        for c in &canon.equalities {
            let mut rows: Vec<Vec<Rational>> = eqs.iter().map(|e| e.normal.clone()).collect();
            let before = super::linalg::rank(&rows);
            rows.push(c.normal.clone());
            if super::linalg::rank(&rows) > before {
                eqs.push(c.clone());
            }
        }
        let mut kept = canon.inequalities.clone();
        let mut i = 0;
        while i < kept.len() {
            let candidate = kept.remove(i);
            let rest = HPolytope { dim: self.dim, inequalities: kept.clone(), equalities: eqs.clone() };
            let implied = match lp_solve(&candidate.normal, &rest, Sense::Minimize)? {
                LpResult::Optimal { value, .. } => value >= candidate.rhs,
                LpResult::Unbounded { .. } => false,
                LpResult::Infeasible { .. } => true,
            };
            if !implied {
                kept.insert(i, candidate);
                i += 1;
            }
        }
        Ok(HPolytope { dim: self.dim, inequalities: kept, equalities: eqs })
    }

    /// Conjunction of both systems, canonicalized and made irredundant.
    pub fn intersect(&self, other: &HPolytope) -> Result<HPolytope> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut joined = self.clone();
        joined.inequalities.extend(other.inequalities.iter().cloned());
        joined.equalities.extend(other.equalities.iter().cloned());
        joined.irredundant()
    }

    /// Exact vertex set; empty when infeasible.
    pub fn vertices(&self) -> Result<VPolytope> {
        if self.dim > MAX_VERTEX_DIM {
            return Err(Error::SizeLimit(format!("dimension {} exceeds {}", self.dim, MAX_VERTEX_DIM)));
        }
        if self.inequalities.len() > MAX_VERTEX_ROWS {
            return Err(Error::SizeLimit(format!(
                "{} inequalities exceed {}",
                self.inequalities.len(),
                MAX_VERTEX_ROWS
            )));
        }
        self.vertices_unchecked()
    }

    /// Vertex enumeration without the desk-scale limits, for H-forms produced
    /// internally from point sets.
    pub(crate) fn vertices_unchecked(&self) -> Result<VPolytope> {
        let canon = self.canonical();
        let d = self.dim;
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let homog = |c: &Constraint| -> Vec<BigInt> {
            let mut r: Vec<BigInt> = c.normal.iter().map(|x| x.numer().clone()).collect();
            r.push(-c.rhs.numer());
            r
        };
        for c in &canon.equalities {
            let r = homog(c);
            rows.push(r.iter().map(|x| -x).collect());
            rows.push(r);
        }
        for c in &canon.inequalities {
            rows.push(homog(c));
        }
        let mut t_row = vec![BigInt::zero(); d + 1];
        t_row[d] = BigInt::one();
        rows.push(t_row);

        let gens = cone_generators(d + 1, &rows);
        let mut vertices = Vec::new();
        let mut recession = !gens.lineality.is_empty();
        for ray in &gens.rays {
            let t = &ray[d];
            if t.is_zero() {
                recession = true;
                continue;
            }
            let t = Rational::from_integer(t.clone());
            vertices.push(ray[..d].iter().map(|x| Rational::from_integer(x.clone()) / &t).collect());
        }
        if vertices.is_empty() {
            return Ok(VPolytope::empty(d));
        }
        if recession {
            return Err(Error::Unbounded);
        }
        Ok(VPolytope::from_vertices_unchecked(d, vertices))
    }

    pub fn translate(&self, shift: &[Rational]) -> HPolytope {
        let moved = |c: &Constraint| Constraint { normal: c.normal.clone(), rhs: &c.rhs + dot(&c.normal, shift) };
        HPolytope {
            dim: self.dim,
            inequalities: self.inequalities.iter().map(moved).collect(),
            equalities: self.equalities.iter().map(moved).collect(),
        }
    }
}

fn unit(dim: usize, i: usize) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); dim];
    e[i] = Rational::one();
    e
}

/// A polytope given by its vertices, deduplicated and lexicographically sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vec<Rational>>,
}

impl VPolytope {
    pub fn empty(dim: usize) -> Self {
        VPolytope { dim, vertices: Vec::new() }
    }

    pub fn point(x: Vec<Rational>) -> Self {
        VPolytope { dim: x.len(), vertices: vec![x] }
    }

    fn from_vertices_unchecked(dim: usize, mut vertices: Vec<Vec<Rational>>) -> Self {
        vertices.sort();
        vertices.dedup();
        VPolytope { dim, vertices }
    }

    /// Convex hull of arbitrary points, reduced to its vertices.
    pub fn hull(dim: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
        }
        let candidate = VPolytope::from_vertices_unchecked(dim, points);
        if candidate.vertices.len() <= 2 {
            return Ok(candidate);
        }
        candidate.to_h().vertices_unchecked()
    }

    /// `Δ_A` by its vertices.
    pub fn standard_simplex(n: usize, carrier: Coalition) -> Self {
        VPolytope::from_vertices_unchecked(
            n,
            carrier.players().map(|p| unit(n, p - 1)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Facets and affine hull of the polytope: the extreme rays and lineality
    /// of the cone of valid inequalities `{(a, β) : a · p ≥ β for all vertices p}`.
    pub fn to_h(&self) -> HPolytope {
        let d = self.dim;
        if self.vertices.is_empty() {
            return HPolytope::empty(d);
        }
        let rows: Vec<Vec<BigInt>> = self
            .vertices
            .iter()
            .map(|p| {
                let mut row = p.clone();
                row.push(-Rational::one());
                primitive_integer(&row)
            })
            .collect();
        let gens = cone_generators(d + 1, &rows);
        let split = |g: &Vec<BigInt>| Constraint {
            normal: to_rational_vec(&g[..d]),
            rhs: Rational::from_integer(g[d].clone()),
        };
        let inequalities =
            gens.rays.iter().map(split).filter(|c| !c.is_trivial_normal()).collect();
        let equalities =
            gens.lineality.iter().map(split).filter(|c| !c.is_trivial_normal()).collect();
        HPolytope { dim: d, inequalities, equalities }.canonical()
    }

    /// `c · P`.
    pub fn scale(&self, c: &Rational) -> VPolytope {
        if self.vertices.is_empty() {
            return self.clone();
        }
        if c.is_zero() {
            return VPolytope::point(vec![Rational::zero(); self.dim]);
        }
        VPolytope::from_vertices_unchecked(self.dim, self.vertices.iter().map(|v| scale_vec(c, v)).collect())
    }

    pub fn translate(&self, shift: &[Rational]) -> VPolytope {
        VPolytope::from_vertices_unchecked(self.dim, self.vertices.iter().map(|v| add_vec(v, shift)).collect())
    }

    pub fn minkowski_sum(&self, other: &VPolytope) -> Result<VPolytope> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        if self.vertices.len() == 1 {
            return Ok(other.translate(&self.vertices[0]));
        }
        if other.vertices.len() == 1 {
            return Ok(self.translate(&other.vertices[0]));
        }
        let sums = self
            .vertices
            .iter()
            .flat_map(|p| other.vertices.iter().map(move |q| add_vec(p, q)))
            .collect();
        VPolytope::hull(self.dim, sums)
    }

    pub fn contains_vertex(&self, x: &[Rational]) -> bool {
        self.vertices.binary_search_by(|v| v.as_slice().cmp(x)).is_ok()
    }

    /// Membership of an arbitrary point, by a convex-combination LP.
    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        if self.vertices.is_empty() {
            return Ok(false);
        }
        let k = self.vertices.len();
        let mut lp = HPolytope::nonnegative_orthant(k);
        for j in 0..self.dim {
            lp.add_equality(self.vertices.iter().map(|v| v[j].clone()).collect(), x[j].clone());
        }
        lp.add_equality(vec![Rational::one(); k], Rational::one());
        lp.is_feasible()
    }
}

/// Anything that can produce its exact vertex set.
pub trait AsVertices {
    fn vertex_set(&self) -> Result<VPolytope>;
}

impl AsVertices for VPolytope {
    fn vertex_set(&self) -> Result<VPolytope> {
        Ok(self.clone())
    }
}

impl AsVertices for HPolytope {
    fn vertex_set(&self) -> Result<VPolytope> {
        self.vertices()
    }
}

impl<T: AsVertices + ?Sized> AsVertices for &T {
    fn vertex_set(&self) -> Result<VPolytope> {
        (**self).vertex_set()
    }
}

/// Exact set equality, decided on canonical vertex sets.
pub fn polytope_equal(p: impl AsVertices, q: impl AsVertices) -> Result<bool> {
    let (p, q) = (p.vertex_set()?, q.vertex_set()?);
    if p.dim != q.dim {
        return Err(Error::DimensionMismatch { expected: p.dim, found: q.dim });
    }
    Ok(p.vertices == q.vertices)
}
