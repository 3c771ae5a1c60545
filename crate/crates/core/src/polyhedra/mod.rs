//! Rational polyhedral cones and polytopes.
//!
//! A [`PolyCone`] always carries both descriptions: extremal rays plus a
//! lineality basis, and facet normals plus equations cutting out its linear
//! span. Both are canonical (primitive integer vectors, projected onto the
//! relevant orthogonal complement, sorted), so structural equality of two
//! cones is set equality.

mod dd;
pub mod lp;
mod polytope;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ratlinalg::{primitive_vector, rank, solve_unique, span_basis, Rat, RatVector};

pub use polytope::{polytope_faces, Face, Polytope};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyCone {
    ambient_dim: usize,
    rays: Vec<RatVector>,
    lineality: Vec<RatVector>,
    inequalities: Vec<RatVector>,
    equations: Vec<RatVector>,
}

/// Projects each vector onto the orthogonal complement of `span(basis)`,
/// makes it primitive, and returns the sorted distinct nonzero results.
fn canonical_modulo(vectors: Vec<RatVector>, basis: &[RatVector]) -> Vec<RatVector> {
    let gram_cols: Vec<RatVector> = basis
        .iter()
        .map(|b| RatVector::new(basis.iter().map(|c| c.dot(b)).collect()))
        .collect();
    let mut out: Vec<RatVector> = vectors
        .into_iter()
        .filter_map(|v| {
            let v = if basis.is_empty() {
                v
            } else {
                let rhs = RatVector::new(basis.iter().map(|b| b.dot(&v)).collect());
                let coeffs = solve_unique(&gram_cols, &rhs).expect("gram matrix is invertible");
                basis
                    .iter()
                    .zip(coeffs.iter())
                    .fold(v, |acc, (b, c)| acc.add_scaled(&-c.clone(), b))
            };
            primitive_vector(&v).ok()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn check_dims(dim: usize, vs: &[RatVector]) -> Result<()> {
    match vs.iter().find(|v| v.len() != dim) {
        Some(v) => Err(Error::DimensionMismatch {
            expected: dim,
            got: v.len(),
        }),
        None => Ok(()),
    }
}

impl PolyCone {
    /// `cone(generators) + span(lineality)`.
    pub fn from_generators(ambient_dim: usize, generators: &[RatVector], lineality: &[RatVector]) -> Result<PolyCone> {
        check_dims(ambient_dim, generators)?;
        check_dims(ambient_dim, lineality)?;
        // facets of C are the generators of its dual
        let (facets, eqs) = dd::inequalities_to_generators(ambient_dim, generators, lineality);
        Ok(Self::from_h_unchecked(ambient_dim, facets, eqs))
    }

    /// `{x : <a, x> >= 0 for a in inequalities, <e, x> = 0 for e in equations}`.
    pub fn from_inequalities(
        ambient_dim: usize,
        inequalities: &[RatVector],
        equations: &[RatVector],
    ) -> Result<PolyCone> {
        check_dims(ambient_dim, inequalities)?;
        check_dims(ambient_dim, equations)?;
        let (rays, lin) = dd::inequalities_to_generators(ambient_dim, inequalities, equations);
        // re-derive an irredundant H-description from the generators
        let (facets, eqs) = dd::inequalities_to_generators(ambient_dim, &rays, &lin);
        let lineality = span_basis(&lin, ambient_dim);
        let rays = canonical_modulo(rays, &lineality);
        let equations = span_basis(&eqs, ambient_dim);
        let inequalities = canonical_modulo(facets, &equations);
        Ok(PolyCone {
            ambient_dim,
            rays,
            lineality,
            inequalities,
            equations,
        })
    }

    fn from_h_unchecked(ambient_dim: usize, facets: Vec<RatVector>, eqs: Vec<RatVector>) -> PolyCone {
        let equations = span_basis(&eqs, ambient_dim);
        let inequalities = canonical_modulo(facets, &equations);
        let (rays, lin) = dd::inequalities_to_generators(ambient_dim, &inequalities, &equations);
        let lineality = span_basis(&lin, ambient_dim);
        let rays = canonical_modulo(rays, &lineality);
        PolyCone {
            ambient_dim,
            rays,
            lineality,
            inequalities,
            equations,
        }
    }

    pub fn zero(ambient_dim: usize) -> PolyCone {
        Self::from_generators(ambient_dim, &[], &[]).expect("dimensions agree")
    }

    pub fn whole_space(ambient_dim: usize) -> PolyCone {
        Self::from_inequalities(ambient_dim, &[], &[]).expect("dimensions agree")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Extremal rays (modulo the lineality space when it is nonzero).
    pub fn generators(&self) -> &[RatVector] {
        &self.rays
    }

    pub fn lineality_basis(&self) -> &[RatVector] {
        &self.lineality
    }

    /// Irredundant inward facet normals, each orthogonal to the equations.
    pub fn inequalities(&self) -> &[RatVector] {
        &self.inequalities
    }

    /// Basis of the orthogonal complement of the linear span.
    pub fn equations(&self) -> &[RatVector] {
        &self.equations
    }

    /// Facet normals with the linear span recorded as `+-e` pairs.
    pub fn facet_normals(&self) -> Vec<RatVector> {
        let mut out = self.inequalities.clone();
        for e in &self.equations {
            out.push(e.clone());
            out.push(e.neg());
        }
        out
    }

    /// Dimension of the linear span.
    pub fn dimension(&self) -> usize {
        self.ambient_dim - self.equations.len()
    }

    pub fn is_strongly_convex(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn contains(&self, x: &RatVector) -> Result<bool> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: x.len(),
            });
        }
        Ok(self.equations.iter().all(|e| e.dot(x).is_zero())
            && self.inequalities.iter().all(|a| !a.dot(x).is_negative()))
    }

    /// Whether `other` is a subset of `self`.
    pub fn contains_cone(&self, other: &PolyCone) -> Result<bool> {
        if other.ambient_dim != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        for g in &other.rays {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        for l in &other.lineality {
            if !self.contains(l)? || !self.contains(&l.neg())? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn dual(&self) -> PolyCone {
        PolyCone {
            ambient_dim: self.ambient_dim,
            rays: self.inequalities.clone(),
            lineality: self.equations.clone(),
            inequalities: self.rays.clone(),
            equations: self.lineality.clone(),
        }
    }

    pub fn intersection(&self, other: &PolyCone) -> Result<PolyCone> {
        if other.ambient_dim != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        let ineqs: Vec<RatVector> = self.inequalities.iter().chain(&other.inequalities).cloned().collect();
        let eqs: Vec<RatVector> = self.equations.iter().chain(&other.equations).cloned().collect();
        PolyCone::from_inequalities(self.ambient_dim, &ineqs, &eqs)
    }

    pub fn sum(&self, other: &PolyCone) -> Result<PolyCone> {
        if other.ambient_dim != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        let gens: Vec<RatVector> = self.rays.iter().chain(&other.rays).cloned().collect();
        let lin: Vec<RatVector> = self.lineality.iter().chain(&other.lineality).cloned().collect();
        PolyCone::from_generators(self.ambient_dim, &gens, &lin)
    }

    pub fn extremal_rays(&self) -> Result<Vec<RatVector>> {
        if !self.is_strongly_convex() {
            return Err(Error::NotStronglyConvex);
        }
        Ok(self.rays.clone())
    }

    /// `x` spans an extremal ray: `x` is a nonzero element of the (strongly
    /// convex) cone and the facets active at `x`, together with the
    /// equations, have rank `ambient_dim - 1`.
    pub fn is_extremal(&self, x: &RatVector) -> Result<bool> {
        if !self.is_strongly_convex() {
            return Err(Error::NotStronglyConvex);
        }
        if x.is_zero() || !self.contains(x)? {
            return Ok(false);
        }
        let mut active: Vec<RatVector> = self.equations.clone();
        active.extend(self.inequalities.iter().filter(|a| a.dot(x).is_zero()).cloned());
        Ok(rank(&active) + 1 == self.ambient_dim)
    }

    /// Generators pairing to zero with `normal`, i.e. the face it cuts out
    /// when `normal` is in the dual.
    pub fn face_generators(&self, normal: &RatVector) -> Vec<RatVector> {
        self.rays.iter().filter(|g| normal.dot(g).is_zero()).cloned().collect()
    }
}

pub fn dual_cone(c: &PolyCone) -> PolyCone {
    c.dual()
}

pub fn extremal_rays(c: &PolyCone) -> Result<Vec<RatVector>> {
    c.extremal_rays()
}

pub fn cone_intersection(a: &PolyCone, b: &PolyCone) -> Result<PolyCone> {
    a.intersection(b)
}

pub fn conical_hull_sum(a: &PolyCone, b: &PolyCone) -> Result<PolyCone> {
    a.sum(b)
}

pub fn contains(c: &PolyCone, x: &RatVector) -> Result<bool> {
    c.contains(x)
}

/// Minimum of `x` over the facet functionals; negative iff `x` is outside.
pub fn slack(c: &PolyCone, x: &RatVector) -> Option<Rat> {
    c.inequalities.iter().map(|a| a.dot(x)).min()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> RatVector {
        RatVector::from_i64s(x)
    }

    fn orthant(d: usize) -> PolyCone {
        let gens: Vec<RatVector> = (0..d).map(|i| RatVector::unit(d, i)).collect();
        PolyCone::from_generators(d, &gens, &[]).unwrap()
    }

    #[test]
    fn orthant_is_self_dual() {
        let o = orthant(3);
        assert_eq!(o.dual(), o);
        assert_eq!(
            o.extremal_rays().unwrap(),
            vec![v(&[0, 0, 1]), v(&[0, 1, 0]), v(&[1, 0, 0])]
        );
    }

    #[test]
    fn dual_of_zero_is_everything() {
        let z = PolyCone::zero(2);
        let d = z.dual();
        assert_eq!(d.lineality_basis().len(), 2);
        assert_eq!(d, PolyCone::whole_space(2));
    }

    #[test]
    fn dual_of_planar_cone() {
        let c = PolyCone::from_generators(2, &[v(&[1, 0]), v(&[1, 1])], &[]).unwrap();
        let expected = PolyCone::from_generators(2, &[v(&[0, 1]), v(&[1, -1])], &[]).unwrap();
        assert_eq!(c.dual(), expected);
        assert_eq!(c.dual().dual(), c);
    }

    #[test]
    fn redundant_generator_dropped() {
        let c = PolyCone::from_generators(2, &[v(&[1, 0]), v(&[1, 1]), v(&[1, 2])], &[]).unwrap();
        assert_eq!(c.extremal_rays().unwrap(), vec![v(&[1, 0]), v(&[1, 2])]);
    }

    #[test]
    fn intersection_examples() {
        let o = orthant(2);
        assert_eq!(o.intersection(&o).unwrap(), o);
        let left = PolyCone::from_inequalities(2, &[v(&[-1, 0])], &[]).unwrap();
        let ray = PolyCone::from_generators(2, &[v(&[0, 1])], &[]).unwrap();
        assert_eq!(o.intersection(&left).unwrap(), ray);
    }

    #[test]
    fn sum_examples() {
        let a = PolyCone::from_generators(2, &[v(&[1, 0])], &[]).unwrap();
        let b = PolyCone::from_generators(2, &[v(&[0, 1])], &[]).unwrap();
        assert_eq!(a.sum(&b).unwrap(), orthant(2));
        assert_eq!(a.sum(&PolyCone::zero(2)).unwrap(), a);
    }

    #[test]
    fn containment() {
        let o = orthant(3);
        assert!(o.contains(&v(&[1, 2, 3])).unwrap());
        assert!(!o.contains(&v(&[-1, 0, 0])).unwrap());
        assert!(matches!(o.contains(&v(&[1, 2])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn lineality_reported() {
        let halfplane = PolyCone::from_inequalities(2, &[v(&[0, 1])], &[]).unwrap();
        assert_eq!(halfplane.lineality_basis(), &[v(&[1, 0])]);
        assert_eq!(halfplane.generators(), &[v(&[0, 1])]);
        assert_eq!(halfplane.extremal_rays(), Err(Error::NotStronglyConvex));
    }

    #[test]
    fn lower_dimensional_cone() {
        // a 2-dim cone inside the plane x + y + z = 0
        let c = PolyCone::from_generators(3, &[v(&[1, -1, 0]), v(&[0, 1, -1])], &[]).unwrap();
        assert_eq!(c.dimension(), 2);
        assert_eq!(c.equations(), &[v(&[1, 1, 1])]);
        assert_eq!(c.facet_normals().len(), 4);
        assert!(c.contains(&v(&[1, 0, -1])).unwrap());
        assert!(!c.contains(&v(&[-1, 0, 1])).unwrap());
        assert!(c.is_extremal(&v(&[2, -2, 0])).unwrap());
        assert!(!c.is_extremal(&v(&[1, 0, -1])).unwrap());
        assert_eq!(c.dual().dual(), c);
    }
}
