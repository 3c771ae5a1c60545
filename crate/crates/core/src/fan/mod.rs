//! Complete simplicial fans.
//!
//! A [`Fan`] stores primitive ray generators `v_0, ..., v_{r-1}` of a lattice
//! `N = Z^n` and its maximal cones as sorted ray-index sets. Every lower
//! cone is a subset of some maximal cone; cones are identified by their
//! index sets ([`Cone`]).

mod quotient;
mod subdivide;
mod validate;

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratlinalg::{solve_unique, Int, IntMatrix, RatVector};

pub use quotient::{quotient_fan, QuotientFanData, QuotientRay};
pub use subdivide::star_subdivision;
pub use validate::{validate_fan, ValidationReport};

/// A cone of a fan, as the sorted set of its ray indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cone(Vec<usize>);

impl Cone {
    pub fn new(mut indices: Vec<usize>) -> Cone {
        indices.sort_unstable();
        indices.dedup();
        Cone(indices)
    }

    pub fn zero() -> Cone {
        Cone(Vec::new())
    }

    pub fn ray(i: usize) -> Cone {
        Cone(vec![i])
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn without(&self, i: usize) -> Cone {
        Cone(self.0.iter().copied().filter(|&j| j != i).collect())
    }

    pub fn with(&self, i: usize) -> Cone {
        let mut v = self.0.clone();
        v.push(i);
        Cone::new(v)
    }

    pub fn intersection(&self, other: &Cone) -> Cone {
        Cone(self.0.iter().copied().filter(|&i| other.contains(i)).collect())
    }

    /// All subsets of the given size.
    pub fn subsets(&self, size: usize) -> Vec<Cone> {
        fn rec(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Cone>) {
            if cur.len() == size {
                out.push(Cone(cur.clone()));
                return;
            }
            for i in start..items.len() {
                cur.push(items[i]);
                rec(items, size, i + 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if size <= self.0.len() {
            rec(&self.0, size, 0, &mut Vec::new(), &mut out);
        }
        out
    }

    /// 1-based rendering, e.g. `<1,4,8>`.
    pub fn one_based(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        format!("<{}>", parts.join(","))
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

impl From<&[usize]> for Cone {
    fn from(v: &[usize]) -> Self {
        Cone::new(v.to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<Int>>,
    max_cones: Vec<Cone>,
}

impl Fan {
    /// Builds a fan without checking the fan axioms; only shapes and index
    /// ranges are checked. Use [`validate_fan`] (or [`Fan::new`]) to check the rest.
    pub fn from_parts(rank: usize, rays: Vec<Vec<Int>>, max_cones: Vec<Cone>) -> Result<Fan> {
        if let Some(r) = rays.iter().find(|r| r.len() != rank) {
            return Err(Error::DimensionMismatch {
                expected: rank,
                got: r.len(),
            });
        }
        for c in &max_cones {
            if let Some(&i) = c.indices().iter().find(|&&i| i >= rays.len()) {
                return Err(Error::InvalidFan(format!(
                    "cone {c} refers to ray {i}, but there are only {} rays",
                    rays.len()
                )));
            }
        }
        let mut max_cones = max_cones;
        max_cones.sort();
        max_cones.dedup();
        Ok(Fan { rank, rays, max_cones })
    }

    /// Builds a fan and requires it to pass [`validate_fan`].
    pub fn new(rank: usize, rays: Vec<Vec<Int>>, max_cones: Vec<Cone>) -> Result<Fan> {
        let fan = Fan::from_parts(rank, rays, max_cones)?;
        let report = validate_fan(&fan);
        if !report.is_valid() {
            return Err(Error::InvalidFan(report.problems.join("; ")));
        }
        Ok(fan)
    }

    pub fn from_i64(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Result<Fan> {
        let rays = rays.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        let cones = cones.iter().map(|c| Cone::from(*c)).collect();
        Fan::new(rank, rays, cones)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[Int] {
        &self.rays[i]
    }

    pub fn ray_vector(&self, i: usize) -> RatVector {
        RatVector::from_ints(&self.rays[i])
    }

    pub fn ray_index(&self, v: &[Int]) -> Option<usize> {
        self.rays.iter().position(|r| r.as_slice() == v)
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    /// `n x r` matrix whose columns are the ray generators.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.rank, &self.rays)
    }

    /// Rows of the ray matrix: the linear relations `(<e_j, v_i>)_i` cut out by `M`.
    pub fn relation_rows(&self) -> Vec<RatVector> {
        self.ray_matrix().row_vectors()
    }

    /// Every cone of the fan, including the zero cone.
    pub fn all_cones(&self) -> BTreeSet<Cone> {
        let mut out = BTreeSet::new();
        for c in &self.max_cones {
            for d in 0..=c.dim() {
                out.extend(c.subsets(d));
            }
        }
        out.insert(Cone::zero());
        out
    }

    pub fn has_cone(&self, tau: &Cone) -> bool {
        self.max_cones.iter().any(|c| tau.is_face_of(c))
    }

    pub(crate) fn require_cone(&self, tau: &Cone) -> Result<()> {
        if self.has_cone(tau) {
            Ok(())
        } else {
            Err(Error::NotACone(tau.clone()))
        }
    }

    pub fn maximal_cones_containing<'a>(&'a self, tau: &'a Cone) -> impl Iterator<Item = &'a Cone> + 'a {
        self.max_cones.iter().filter(move |c| tau.is_face_of(c))
    }

    /// Cones of dimension `d`, sorted.
    pub fn cones_of_dim(&self, d: usize) -> Result<Vec<Cone>> {
        if d > self.rank {
            return Err(Error::OutOfRange {
                what: "cone dimension",
                value: d as i64,
                lo: 0,
                hi: self.rank as i64,
            });
        }
        let set: BTreeSet<Cone> = self.max_cones.iter().flat_map(|c| c.subsets(d)).collect();
        Ok(set.into_iter().collect())
    }

    /// Sorted indices of rays lying in a common cone with `tau` (including `tau`'s own rays).
    pub fn adjacent_rays(&self, tau: &Cone) -> Result<Vec<usize>> {
        self.require_cone(tau)?;
        let set: BTreeSet<usize> = self
            .maximal_cones_containing(tau)
            .flat_map(|c| c.indices().iter().copied())
            .collect();
        Ok(set.into_iter().collect())
    }

    /// Coefficients of `x` in the generators of `cone`, if `x` lies in it.
    /// Assumes `cone` is simplicial.
    pub fn cone_coordinates(&self, cone: &Cone, x: &RatVector) -> Option<RatVector> {
        let cols: Vec<RatVector> = cone.indices().iter().map(|&i| self.ray_vector(i)).collect();
        let lambda = solve_unique(&cols, x)?;
        lambda.iter().all(|l| !l.is_negative()).then_some(lambda)
    }

    /// A maximal cone containing `x`, with its coordinates.
    pub fn locate(&self, x: &RatVector) -> Option<(usize, RatVector)> {
        self.max_cones
            .iter()
            .enumerate()
            .find_map(|(k, c)| self.cone_coordinates(c, x).map(|l| (k, l)))
    }

    /// The same fan with rays reordered: ray `i` of the result is ray
    /// `order[i]` of `self`.
    pub fn reindexed(&self, order: &[usize]) -> Result<Fan> {
        let mut inverse = vec![usize::MAX; self.rays.len()];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        if order.len() != self.rays.len() || inverse.contains(&usize::MAX) {
            return Err(Error::RaySetMismatch);
        }
        let rays = order.iter().map(|&o| self.rays[o].clone()).collect();
        let cones = self
            .max_cones
            .iter()
            .map(|c| Cone::new(c.indices().iter().map(|&i| inverse[i]).collect()))
            .collect();
        Fan::from_parts(self.rank, rays, cones)
    }

    /// Permutation `p` with `other.ray(j) == self.ray(p[j])`, when both fans
    /// have the same set of rays.
    pub fn ray_permutation_to(&self, other: &Fan) -> Result<Vec<usize>> {
        if self.rank != other.rank || self.rays.len() != other.rays.len() {
            return Err(Error::RaySetMismatch);
        }
        other
            .rays
            .iter()
            .map(|r| self.ray_index(r).ok_or(Error::RaySetMismatch))
            .collect()
    }

    pub fn is_smooth_cone(&self, cone: &Cone) -> bool {
        let cols: Vec<Vec<Int>> = cone.indices().iter().map(|&i| self.rays[i].clone()).collect();
        if cols.len() != self.rank {
            return false;
        }
        let d = IntMatrix::from_columns(self.rank, &cols).determinant();
        !d.is_zero() && d.abs() == Int::from(1)
    }
}
