//! Divisor and curve classes of the toric variety of a complete simplicial fan.
//!
//! Divisors are `r`-tuples `(d_0, ..., d_{r-1})` standing for `Σ d_i D_i`;
//! two tuples give the same class in `N¹` when they differ by
//! `(<u, v_i>)_i` for some `u ∈ M`. Curve classes are `r`-tuples `a` with
//! `Σ a_i v_i = 0`, and `(D_i · a) = a_i`.
//!
//! `N¹` gets coordinates from a set `B` of `r - n` ray indices whose
//! complement is a basis of `N_R`: the classes `[D_b]`, `b ∈ B`, form a
//! basis. Curve classes are then determined by their entries on `B`, and
//! the two coordinate systems are dual under the plain dot product.

mod mov;
mod sections;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::polyhedra::PolyCone;
use crate::ratlinalg::{integer_kernel_basis, rank, solve_unique, IntMatrix, Rat, RatVector};

pub use mov::{mov_cone, mov_cone_via, moving_cone_for};
pub use sections::{base_locus_finite, divisor_polytope, section_points, stable_base_locus, StableBaseLocus};

/// A divisor `Σ d_i D_i`, as a representative tuple of its class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    coefficients: RatVector,
}

impl DivisorClass {
    pub fn new(coefficients: RatVector) -> Self {
        DivisorClass { coefficients }
    }

    pub fn from_i64s(d: &[i64]) -> Self {
        DivisorClass::new(RatVector::from_i64s(d))
    }

    /// The prime invariant divisor `D_i` among `r` rays.
    pub fn prime(r: usize, i: usize) -> Self {
        DivisorClass::new(RatVector::unit(r, i))
    }

    pub fn coefficients(&self) -> &RatVector {
        &self.coefficients
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients.is_integral()
    }

    pub fn scale(&self, s: &Rat) -> DivisorClass {
        DivisorClass::new(self.coefficients.scale(s))
    }
}

/// A numerical class of 1-cycles: `a` with `Σ a_i v_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleClass {
    coefficients: RatVector,
}

impl CycleClass {
    pub fn new(fan: &Fan, coefficients: RatVector) -> Result<Self> {
        if coefficients.len() != fan.num_rays() {
            return Err(Error::DimensionMismatch {
                expected: fan.num_rays(),
                got: coefficients.len(),
            });
        }
        let image = fan.ray_matrix().mul_rat_vec(&coefficients);
        if !image.is_zero() {
            return Err(Error::NotACurveClass(format!(
                "Σ a_i v_i = {image} for a = {coefficients}"
            )));
        }
        Ok(CycleClass { coefficients })
    }

    pub fn from_i64s(fan: &Fan, a: &[i64]) -> Result<Self> {
        CycleClass::new(fan, RatVector::from_i64s(a))
    }

    pub fn coefficients(&self) -> &RatVector {
        &self.coefficients
    }
}

/// `(D · c) = Σ d_i a_i`.
pub fn pair(d: &DivisorClass, c: &CycleClass) -> Result<Rat> {
    if d.coefficients.len() != c.coefficients.len() {
        return Err(Error::DimensionMismatch {
            expected: c.coefficients.len(),
            got: d.coefficients.len(),
        });
    }
    Ok(d.coefficients.dot(&c.coefficients))
}

#[derive(Clone, Debug)]
pub struct ClassSpaces {
    fan: Fan,
    divisor_relations: IntMatrix,
    curve_basis: Vec<RatVector>,
    basis: Vec<usize>,
    complement: Vec<usize>,
    /// `dual_curves[j]` is the curve class with entry 1 at `basis[j]` and 0
    /// on the rest of the basis; pairing with it reads off coordinate `j`.
    dual_curves: Vec<RatVector>,
    gamma: OnceLock<BTreeMap<Cone, PolyCone>>,
}

impl ClassSpaces {
    /// Uses the default basis: scanning rays from the last to the first,
    /// index `i` joins `B` while the rays outside `B` still span `N_R`.
    pub fn new(fan: &Fan) -> Result<ClassSpaces> {
        let n = fan.rank();
        let r = fan.num_rays();
        let mut outside: Vec<bool> = vec![true; r];
        let mut basis = Vec::new();
        for i in (0..r).rev() {
            if basis.len() == r.saturating_sub(n) {
                break;
            }
            outside[i] = false;
            if spans(fan, &outside) {
                basis.push(i);
            } else {
                outside[i] = true;
            }
        }
        basis.sort_unstable();
        Self::with_basis(fan, &basis)
    }

    /// Uses the classes `[D_b]`, `b ∈ basis`, as the basis of `N¹`.
    pub fn with_basis(fan: &Fan, basis: &[usize]) -> Result<ClassSpaces> {
        let n = fan.rank();
        let r = fan.num_rays();
        let mut basis = basis.to_vec();
        basis.sort_unstable();
        basis.dedup();
        if basis.len() + n != r || basis.iter().any(|&b| b >= r) {
            return Err(Error::InvalidFan(format!(
                "a basis of N¹ needs {} distinct ray indices",
                r.saturating_sub(n)
            )));
        }
        let complement: Vec<usize> = (0..r).filter(|i| !basis.contains(i)).collect();
        let cols: Vec<RatVector> = complement.iter().map(|&c| fan.ray_vector(c)).collect();
        if rank(&cols) != n {
            return Err(Error::InvalidFan(format!("rays outside {basis:?} do not span N_R")));
        }
        let mut dual_curves = Vec::with_capacity(basis.len());
        for &b in &basis {
            let x = solve_unique(&cols, &fan.ray_vector(b).neg()).expect("complement is a basis");
            let mut a = RatVector::zeros(r);
            a.entries_mut()[b] = Rat::from_integer(1.into());
            for (k, &c) in complement.iter().enumerate() {
                a.entries_mut()[c] = x[k].clone();
            }
            dual_curves.push(a);
        }
        let divisor_relations = fan.ray_matrix();
        let curve_basis = integer_kernel_basis(&divisor_relations);
        Ok(ClassSpaces {
            fan: fan.clone(),
            divisor_relations,
            curve_basis,
            basis,
            complement,
            dual_curves,
            gamma: OnceLock::new(),
        })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn num_rays(&self) -> usize {
        self.fan.num_rays()
    }

    pub fn picard_rank(&self) -> usize {
        self.basis.len()
    }

    /// `n x r`; row `j` is the divisor of the character `e_j^*`.
    pub fn divisor_relations(&self) -> &IntMatrix {
        &self.divisor_relations
    }

    /// A lattice basis of the integral curve classes.
    pub fn curve_basis(&self) -> &[RatVector] {
        &self.curve_basis
    }

    /// Ray indices whose classes form the `N¹` basis.
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    fn check_len(&self, v: &RatVector) -> Result<()> {
        if v.len() != self.num_rays() {
            return Err(Error::DimensionMismatch {
                expected: self.num_rays(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Coordinates of `[D]` in the basis `[D_b]`, `b ∈ B`.
    pub fn divisor_coords(&self, d: &DivisorClass) -> Result<RatVector> {
        self.check_len(&d.coefficients)?;
        Ok(RatVector::new(
            self.dual_curves.iter().map(|a| a.dot(&d.coefficients)).collect(),
        ))
    }

    pub fn prime_coords(&self, i: usize) -> RatVector {
        RatVector::new(self.dual_curves.iter().map(|a| a[i].clone()).collect())
    }

    pub fn same_class(&self, d: &DivisorClass, e: &DivisorClass) -> Result<bool> {
        Ok(self.divisor_coords(d)? == self.divisor_coords(e)?)
    }

    /// A curve class restricted to `B`; the dual coordinates to [`Self::divisor_coords`].
    pub fn curve_coords(&self, a: &RatVector) -> Result<RatVector> {
        self.check_len(a)?;
        Ok(RatVector::new(self.basis.iter().map(|&b| a[b].clone()).collect()))
    }

    /// The curve class with the given coordinates.
    pub fn lift_curve(&self, y: &RatVector) -> Result<RatVector> {
        if y.len() != self.picard_rank() {
            return Err(Error::DimensionMismatch {
                expected: self.picard_rank(),
                got: y.len(),
            });
        }
        Ok(self
            .dual_curves
            .iter()
            .zip(y.iter())
            .fold(RatVector::zeros(self.num_rays()), |acc, (a, c)| acc.add_scaled(c, a)))
    }

    /// A cone of curve classes in `R^r` expressed in curve coordinates.
    pub fn curve_cone_coords(&self, c: &PolyCone) -> Result<PolyCone> {
        let gens = c
            .generators()
            .iter()
            .map(|g| self.curve_coords(g))
            .collect::<Result<Vec<_>>>()?;
        let lin = c
            .lineality_basis()
            .iter()
            .map(|g| self.curve_coords(g))
            .collect::<Result<Vec<_>>>()?;
        PolyCone::from_generators(self.picard_rank(), &gens, &lin)
    }

    /// Inverse of [`Self::curve_cone_coords`].
    pub fn lift_curve_cone(&self, c: &PolyCone) -> Result<PolyCone> {
        let gens = c
            .generators()
            .iter()
            .map(|g| self.lift_curve(g))
            .collect::<Result<Vec<_>>>()?;
        let lin = c
            .lineality_basis()
            .iter()
            .map(|g| self.lift_curve(g))
            .collect::<Result<Vec<_>>>()?;
        PolyCone::from_generators(self.num_rays(), &gens, &lin)
    }

    fn gamma_map(&self) -> &BTreeMap<Cone, PolyCone> {
        self.gamma.get_or_init(|| {
            self.fan
                .all_cones()
                .into_iter()
                .map(|tau| {
                    let g = self.build_gamma(&tau);
                    (tau, g)
                })
                .collect()
        })
    }

    fn build_gamma(&self, tau: &Cone) -> PolyCone {
        let gens: Vec<RatVector> = (0..self.num_rays())
            .filter(|&j| !tau.contains(j))
            .map(|j| self.prime_coords(j))
            .collect();
        PolyCone::from_generators(self.picard_rank(), &gens, &[]).expect("coordinate lengths agree")
    }

    /// `Γ_τ`, the cone in `N¹` spanned by `[D_j]` for `ρ_j ∉ τ`.
    pub fn gamma_cone(&self, tau: &Cone) -> Result<&PolyCone> {
        self.gamma_map().get(tau).ok_or_else(|| Error::NotACone(tau.clone()))
    }

    /// `Γ_τ^∨ = {a : Σ a_i v_i = 0, a_i ≥ 0 for ρ_i ∉ τ}` in `R^r`.
    pub fn gamma_dual_cone(&self, tau: &Cone) -> Result<PolyCone> {
        self.fan.require_cone(tau)?;
        let r = self.num_rays();
        let ineqs: Vec<RatVector> = (0..r)
            .filter(|&i| !tau.contains(i))
            .map(|i| RatVector::unit(r, i))
            .collect();
        PolyCone::from_inequalities(r, &ineqs, &self.divisor_relations.row_vectors())
    }

    fn check_level(&self, k: usize) -> Result<()> {
        let n = self.fan.rank();
        if n == 0 || k > n - 1 {
            return Err(Error::OutOfRange {
                what: "k",
                value: k as i64,
                lo: 0,
                hi: n as i64 - 1,
            });
        }
        Ok(())
    }

    /// `Amp^k = ⋂_{dim τ = k} Γ_τ`, in `N¹` coordinates.
    pub fn amp_cone(&self, k: usize) -> Result<PolyCone> {
        self.check_level(k)?;
        let mut ineqs = Vec::new();
        let mut eqs = Vec::new();
        for tau in self.fan.cones_of_dim(k)? {
            let g = self.gamma_cone(&tau)?;
            ineqs.extend(g.inequalities().iter().cloned());
            eqs.extend(g.equations().iter().cloned());
        }
        PolyCone::from_inequalities(self.picard_rank(), &ineqs, &eqs)
    }

    /// `Amp^k(X)^∨ = Σ_{dim τ = k} Γ_τ^∨`, computed in `R^r`.
    pub fn amp_dual_cone(&self, k: usize) -> Result<PolyCone> {
        self.check_level(k)?;
        let mut gens = Vec::new();
        let mut lin = Vec::new();
        for tau in self.fan.cones_of_dim(k)? {
            let g = self.gamma_dual_cone(&tau)?;
            gens.extend(g.generators().iter().cloned());
            lin.extend(g.lineality_basis().iter().cloned());
        }
        PolyCone::from_generators(self.num_rays(), &gens, &lin)
    }

    /// Whether `[D]` lies in `Γ_τ`, i.e. `V(τ)` is not in the stable base locus.
    pub fn in_gamma(&self, d: &DivisorClass, tau: &Cone) -> Result<bool> {
        let x = self.divisor_coords(d)?;
        self.gamma_cone(tau)?.contains(&x)
    }

    /// Divisor classes pairing nonnegatively with every wall curve.
    pub fn wall_nef_cone(&self) -> Result<PolyCone> {
        let ineqs = wall_curves(&self.fan)?
            .into_iter()
            .map(|(_, a)| self.curve_coords(&a))
            .collect::<Result<Vec<_>>>()?;
        PolyCone::from_inequalities(self.picard_rank(), &ineqs, &[])
    }
}

fn spans(fan: &Fan, include: &[bool]) -> bool {
    let vs: Vec<RatVector> = (0..fan.num_rays())
        .filter(|&i| include[i])
        .map(|i| fan.ray_vector(i))
        .collect();
    rank(&vs) == fan.rank()
}

pub fn class_spaces(fan: &Fan) -> Result<ClassSpaces> {
    ClassSpaces::new(fan)
}

pub fn gamma_cone(fan: &Fan, tau: &Cone) -> Result<PolyCone> {
    ClassSpaces::new(fan)?.gamma_cone(tau).cloned()
}

pub fn amp_cone(fan: &Fan, k: usize) -> Result<PolyCone> {
    ClassSpaces::new(fan)?.amp_cone(k)
}

pub fn amp_dual_cone(fan: &Fan, k: usize) -> Result<PolyCone> {
    ClassSpaces::new(fan)?.amp_dual_cone(k)
}

/// For each wall `ω` (an `(n-1)`-cone between `ω ∪ {i}` and `ω ∪ {j}`),
/// the curve class `V(ω)`: the relation among `v_i`, `v_j` and the rays of
/// `ω`, scaled so that `a_i = 1` where `i` is the smaller outer index.
pub fn wall_curves(fan: &Fan) -> Result<Vec<(Cone, RatVector)>> {
    let n = fan.rank();
    if n == 0 {
        return Ok(Vec::new());
    }
    let r = fan.num_rays();
    let mut out = Vec::new();
    for w in fan.cones_of_dim(n - 1)? {
        let outer: Vec<usize> = fan
            .maximal_cones_containing(&w)
            .filter_map(|c| c.indices().iter().copied().find(|i| !w.contains(*i)))
            .collect();
        let [i, j] = outer[..] else {
            return Err(Error::InvalidFan(format!(
                "wall {w} lies in {} maximal cones",
                outer.len()
            )));
        };
        let (i, j) = (i.min(j), i.max(j));
        let mut idx = vec![j];
        idx.extend(w.indices().iter().copied());
        let cols: Vec<RatVector> = idx.iter().map(|&t| fan.ray_vector(t)).collect();
        let x = solve_unique(&cols, &fan.ray_vector(i).neg())
            .ok_or_else(|| Error::InvalidFan(format!("cone {} is not simplicial", w.with(j))))?;
        let mut a = RatVector::zeros(r);
        a.entries_mut()[i] = Rat::from_integer(1.into());
        for (k, &t) in idx.iter().enumerate() {
            a.entries_mut()[t] = x[k].clone();
        }
        debug_assert!(a[j].is_positive());
        out.push((w, a));
    }
    Ok(out)
}
