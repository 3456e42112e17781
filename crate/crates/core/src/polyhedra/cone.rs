//! Pointed polyhedral cones: extreme rays, placing triangulations and unique
//! conic coordinates with respect to a simplicial fan.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dd::cone_generators;
use super::linalg::{dual_basis, rank};
use super::lp::{lp_solve, LpResult, Sense};
use super::polytope::HPolytope;
use crate::error::{Error, Result};
use crate::rational::{dot, primitive, to_rational_vec, Rational};

pub const MAX_CONE_DIM: usize = 12;

/// A cone given by generators, known to contain no line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedCone {
    dim: usize,
    generators: Vec<Vec<BigInt>>,
}

impl PointedCone {
    /// Validates dimensions and pointedness; generators are reduced to
    /// primitive integer vectors but kept in the given order.
    pub fn new(dim: usize, generators: Vec<Vec<Rational>>) -> Result<Self> {
        let mut gens = Vec::with_capacity(generators.len());
        for g in &generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: g.len() });
            }
            if g.iter().all(Zero::is_zero) {
                continue;
            }
            gens.push(crate::rational::primitive_integer(g));
        }
        let cone = PointedCone { dim, generators: gens };
        if !cone.is_pointed()? {
            return Err(Error::NotPointed);
        }
        Ok(cone)
    }

    fn is_pointed(&self) -> Result<bool> {
        let k = self.generators.len();
        if k == 0 {
            return Ok(true);
        }
        let mut lp = HPolytope::nonnegative_orthant(k);
        for j in 0..self.dim {
            let row = self.generators.iter().map(|g| Rational::from_integer(g[j].clone())).collect();
            lp.add_equality(row, Rational::zero());
        }
        lp.add_equality(vec![Rational::one(); k], Rational::one());
        Ok(!lp.is_feasible()?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> Vec<Rational> {
        to_rational_vec(&self.generators[i])
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Same cone with generators listed in `order`.
    pub fn reordered(&self, order: &[usize]) -> PointedCone {
        PointedCone { dim: self.dim, generators: order.iter().map(|&i| self.generators[i].clone()).collect() }
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Rational>> = (0..self.len()).map(|i| self.generator(i)).collect();
        rank(&rows)
    }
}

/// Extreme rays of `{x : a · x ≥ 0, e · x = 0}` by double description, as
/// primitive integer vectors in lexicographic order.
pub fn extreme_rays(cone: &HPolytope) -> Result<PointedCone> {
    let dim = cone.dim();
    if dim > MAX_CONE_DIM {
        return Err(Error::SizeLimit(format!("cone dimension {dim} exceeds {MAX_CONE_DIM}")));
    }
    let canon = cone.canonical();
    if canon.inequalities().iter().chain(canon.equalities()).any(|c| !c.rhs.is_zero()) {
        return Err(Error::NotACone);
    }
    let ints = |c: &super::polytope::Constraint| -> Vec<BigInt> { c.normal.iter().map(|x| x.numer().clone()).collect() };
    let mut rows = Vec::new();
    for c in canon.equalities() {
        let r = ints(c);
        rows.push(r.iter().map(|x| -x).collect());
        rows.push(r);
    }
    rows.extend(canon.inequalities().iter().map(ints));
    let gens = cone_generators(dim, &rows);
    if !gens.lineality.is_empty() {
        return Err(Error::NotPointed);
    }
    let mut rays: Vec<Vec<BigInt>> = gens.rays.into_iter().map(primitive).collect();
    rays.sort();
    rays.dedup();
    Ok(PointedCone { dim, generators: rays })
}

/// A subdivision of a pointed cone into simplex cones spanned by subsets of
/// its generators. Only maximal cells are stored; every subset of a cell is a
/// face of the fan.
#[derive(Clone, Debug)]
pub struct SimplicialFan {
    cone: PointedCone,
    cells: Vec<Vec<usize>>,
    duals: Vec<Vec<Vec<Rational>>>,
}

/// Position of a point in a fan: the minimal cell holding it (as generator
/// indices) and the strictly positive weights on those generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicCoordinates {
    /// Index of a maximal cell containing the point.
    pub cell: usize,
    /// Generators spanning the minimal cell, ascending.
    pub generators: Vec<usize>,
    pub coeffs: Vec<Rational>,
}

impl ConicCoordinates {
    /// Coefficient of every cone generator, zero off the minimal cell.
    pub fn dense(&self, generator_count: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); generator_count];
        for (g, c) in self.generators.iter().zip(&self.coeffs) {
            out[*g] = c.clone();
        }
        out
    }
}

/// Placing triangulation in the cone's generator order: a generator that
/// raises the dimension is coned over every cell, otherwise it is joined to
/// every boundary facet it sees from outside.
pub fn triangulate_cone(cone: &PointedCone) -> Result<SimplicialFan> {
    if !cone.is_pointed()? {
        return Err(Error::NotPointed);
    }
    let gens: Vec<Vec<Rational>> = (0..cone.len()).map(|i| cone.generator(i)).collect();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut duals: Vec<Vec<Vec<Rational>>> = Vec::new();
    let mut placed: Vec<Vec<Rational>> = Vec::new();

    for (j, g) in gens.iter().enumerate() {
        let before = rank(&placed);
        placed.push(g.clone());
        if rank(&placed) > before {
            if cells.is_empty() {
                cells.push(vec![j]);
            } else {
                for cell in cells.iter_mut() {
                    cell.push(j);
                }
            }
        } else {
            let mut facet_count: HashMap<Vec<usize>, usize> = HashMap::new();
            for cell in &cells {
                for skip in 0..cell.len() {
                    *facet_count.entry(facet(cell, skip)).or_default() += 1;
                }
            }
            let mut fresh = Vec::new();
            for (cell, dual) in cells.iter().zip(&duals) {
                for (skip, normal) in dual.iter().enumerate() {
                    let f = facet(cell, skip);
                    if facet_count[&f] == 1 && dot(normal, g).is_negative() {
                        let mut new_cell = f;
                        new_cell.push(j);
                        fresh.push(new_cell);
                    }
                }
            }
            cells.extend(fresh);
        }
        duals = recompute_duals(&gens, &cells);
    }
    for cell in cells.iter_mut() {
        cell.sort_unstable();
    }
    let duals = recompute_duals(&gens, &cells);
    Ok(SimplicialFan { cone: cone.clone(), cells, duals })
}

fn recompute_duals(gens: &[Vec<Rational>], cells: &[Vec<usize>]) -> Vec<Vec<Vec<Rational>>> {
    cells
        .iter()
        .map(|cell| {
            let vs: Vec<Vec<Rational>> = cell.iter().map(|&i| gens[i].clone()).collect();
            dual_basis(&vs).expect("cells of a placing triangulation are independent")
        })
        .collect()
}

fn facet(cell: &[usize], skip: usize) -> Vec<usize> {
    let mut f: Vec<usize> = cell.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &g)| g).collect();
    f.sort_unstable();
    f
}

impl SimplicialFan {
    pub fn cone(&self) -> &PointedCone {
        &self.cone
    }

    /// Maximal cells as ascending generator index lists.
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// The minimal cell containing `x` and its unique positive weights.
    pub fn conic_coordinates(&self, x: &[Rational]) -> Result<ConicCoordinates> {
        if x.len() != self.cone.dim() {
            return Err(Error::DimensionMismatch { expected: self.cone.dim(), found: x.len() });
        }
        if x.iter().all(Zero::is_zero) {
            return Ok(ConicCoordinates { cell: 0, generators: Vec::new(), coeffs: Vec::new() });
        }
        for (ci, (cell, dual)) in self.cells.iter().zip(&self.duals).enumerate() {
            let coeffs: Vec<Rational> = dual.iter().map(|h| dot(h, x)).collect();
            if coeffs.iter().any(Signed::is_negative) {
                continue;
            }
            let mut rebuilt = vec![Rational::zero(); x.len()];
            for (&g, c) in cell.iter().zip(&coeffs) {
                if c.is_zero() {
                    continue;
                }
                for (r, gi) in rebuilt.iter_mut().zip(&self.cone.generators[g]) {
                    *r += c * Rational::from_integer(gi.clone());
                }
            }
            if rebuilt != x {
                continue;
            }
            let (generators, coeffs) = cell
                .iter()
                .zip(coeffs)
                .filter(|(_, c)| c.is_positive())
                .map(|(&g, c)| (g, c))
                .unzip();
            return Ok(ConicCoordinates { cell: ci, generators, coeffs });
        }
        Err(Error::OutsideSupport)
    }

    /// `sum coeff * generator`.
    pub fn reconstruct(&self, coords: &ConicCoordinates) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.cone.dim()];
        for (&g, c) in coords.generators.iter().zip(&coords.coeffs) {
            for (r, gi) in out.iter_mut().zip(&self.cone.generators[g]) {
                *r += c * Rational::from_integer(gi.clone());
            }
        }
        out
    }

    /// Checks that every pair of maximal cells meets in their common face:
    /// no point of `cone(S) ∩ cone(T)` puts weight on `S ∖ T`.
    pub fn cells_meet_in_faces(&self) -> Result<bool> {
        for (a, s) in self.cells.iter().enumerate() {
            for (b, t) in self.cells.iter().enumerate() {
                if a == b {
                    continue;
                }
                if self.has_weight_outside(s, t)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn has_weight_outside(&self, s: &[usize], t: &[usize]) -> Result<bool> {
        let (ks, kt) = (s.len(), t.len());
        let mut lp = HPolytope::nonnegative_orthant(ks + kt);
        for j in 0..self.cone.dim() {
            let mut row: Vec<Rational> =
                s.iter().map(|&g| Rational::from_integer(self.cone.generators[g][j].clone())).collect();
            row.extend(t.iter().map(|&g| -Rational::from_integer(self.cone.generators[g][j].clone())));
            lp.add_equality(row, Rational::zero());
        }
        let mut weight = vec![Rational::zero(); ks + kt];
        for (i, g) in s.iter().enumerate() {
            if !t.contains(g) {
                weight[i] = Rational::one();
            }
        }
        if weight.iter().all(Zero::is_zero) {
            return Ok(false);
        }
        lp.add_equality(weight, Rational::one());
        Ok(matches!(
            lp_solve(&vec![Rational::zero(); ks + kt], &lp, Sense::Minimize)?,
            LpResult::Optimal { .. }
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn pt(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn orthant_rays() {
        let cone = extreme_rays(&HPolytope::nonnegative_orthant(2)).unwrap();
        let rays: Vec<Vec<Rational>> = (0..cone.len()).map(|i| cone.generator(i)).collect();
        assert_eq!(rays, vec![pt(&[0, 1]), pt(&[1, 0])]);
    }

    #[test]
    fn lines_are_rejected() {
        let mut h = HPolytope::whole_space(2);
        h.add_inequality(pt(&[1, 0]), int(0));
        assert_eq!(extreme_rays(&h), Err(Error::NotPointed));
        assert_eq!(PointedCone::new(1, vec![pt(&[1]), pt(&[-1])]), Err(Error::NotPointed));
        let mut affine = HPolytope::whole_space(1);
        affine.add_inequality(pt(&[1]), int(1));
        assert_eq!(extreme_rays(&affine), Err(Error::NotACone));
    }

    #[test]
    fn simplex_cone_is_one_cell() {
        let cone = PointedCone::new(3, vec![pt(&[1, 0, 0]), pt(&[1, 1, 0]), pt(&[0, 1, 1])]).unwrap();
        let fan = triangulate_cone(&cone).unwrap();
        assert_eq!(fan.cells(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn planar_cone_with_middle_generator() {
        let cone = PointedCone::new(2, vec![pt(&[1, 0]), pt(&[1, 1]), pt(&[0, 1])]).unwrap();
        let fan = triangulate_cone(&cone).unwrap();
        assert_eq!(fan.cells(), &[vec![0, 1], vec![1, 2]]);
        assert!(fan.cells_meet_in_faces().unwrap());
    }

    #[test]
    fn square_cone_triangulations() {
        let gens = vec![pt(&[1, 0, 1]), pt(&[0, 1, 1]), pt(&[-1, 0, 1]), pt(&[0, -1, 1])];
        let cone = PointedCone::new(3, gens).unwrap();
        let fan = triangulate_cone(&cone).unwrap();
        assert_eq!(fan.cells().len(), 2);
        assert!(fan.cells_meet_in_faces().unwrap());
        let other = triangulate_cone(&cone.reordered(&[1, 2, 3, 0])).unwrap();
        assert_eq!(other.cells().len(), 2);

        let x = pt(&[0, 0, 2]);
        let c = fan.conic_coordinates(&x).unwrap();
        assert_eq!(fan.reconstruct(&c), x);
        assert!(c.coeffs.iter().all(Signed::is_positive));
        assert_eq!(c.generators.len(), 2);

        let g = fan.conic_coordinates(&pt(&[0, 1, 1])).unwrap();
        assert_eq!(g.generators, vec![1]);
        assert_eq!(g.coeffs, vec![int(1)]);
        assert_eq!(fan.conic_coordinates(&pt(&[0, 0, -1])), Err(Error::OutsideSupport));
    }
}
