//! Double description method on integer data.
//!
//! Computes a minimal generating system (lineality basis plus extreme rays) of
//! the cone `{y : row · y >= 0 for every row}`, starting from the whole space
//! and intersecting one half-space at a time. Adjacency of rays is decided
//! combinatorially from their zero sets.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::rational::{primitive, sign_normalize};

#[derive(Clone, Debug, Default)]
pub struct ConeGenerators {
    pub lineality: Vec<Vec<BigInt>>,
    pub rays: Vec<Vec<BigInt>>,
}

#[derive(Clone)]
struct Ray {
    coords: Vec<BigInt>,
    zeros: ZeroSet,
}

#[derive(Clone, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(bits: usize) -> Self {
        ZeroSet(vec![0; bits.div_ceil(64).max(1)])
    }

    fn full_prefix(bits: usize, len: usize) -> Self {
        let mut z = ZeroSet::new(bits);
        for k in 0..len {
            z.insert(k);
        }
        z
    }

    fn insert(&mut self, k: usize) {
        self.0[k / 64] |= 1 << (k % 64);
    }

    fn and(&self, other: &ZeroSet) -> ZeroSet {
        ZeroSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset_of(&self, other: &ZeroSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

/// `alpha * p + beta * q`, reduced to a primitive vector.
fn combine(alpha: &BigInt, p: &[BigInt], beta: &BigInt, q: &[BigInt]) -> Vec<BigInt> {
    primitive(p.iter().zip(q).map(|(x, y)| alpha * x + beta * y).collect())
}

pub fn cone_generators(dim: usize, rows: &[Vec<BigInt>]) -> ConeGenerators {
    let nrows = rows.len();
    let mut lineality: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| (0..dim).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, row) in rows.iter().enumerate() {
        debug_assert_eq!(row.len(), dim);
        if let Some(idx) = lineality.iter().position(|l| !idot(row, l).is_zero()) {
            let mut l = lineality.swap_remove(idx);
            let mut al = idot(row, &l);
            if al.is_negative() {
                l.iter_mut().for_each(|x| *x = -&*x);
                al = -al;
            }
            for other in lineality.iter_mut() {
                let s = idot(row, other);
                if !s.is_zero() {
                    *other = combine(&al, other, &-s, &l);
                }
            }
            for r in rays.iter_mut() {
                let s = idot(row, &r.coords);
                if !s.is_zero() {
                    r.coords = combine(&al, &r.coords, &-s, &l);
                }
                r.zeros.insert(k);
            }
            rays.push(Ray { coords: l, zeros: ZeroSet::full_prefix(nrows, k) });
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| idot(row, &r.coords)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zeros.insert(k);
                }
            }
            continue;
        }
        let pointed_dim = dim - lineality.len();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() + 2 < pointed_dim {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(t, ray)| {
                    t != p && t != q && common.is_subset_of(&ray.zeros)
                });
                if blocked {
                    continue;
                }
                let coords = combine(&values[p], &rays[q].coords, &-&values[q], &rays[p].coords);
                let mut zeros = common;
                zeros.insert(k);
                fresh.push(Ray { coords, zeros });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, v) in rays.into_iter().zip(values) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                r.zeros.insert(k);
            }
            kept.push(r);
        }
        kept.extend(fresh);
        rays = kept;
    }

    let lineality = lineality.into_iter().map(|l| sign_normalize(primitive(l))).collect();
    ConeGenerators { lineality, rays: rays.into_iter().map(|r| r.coords).collect() }
}
