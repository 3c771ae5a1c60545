use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use super::{ClassSpaces, DivisorClass};
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::polyhedra::{polytope_faces, Polytope};
use crate::ratlinalg::{solve_unique, Int, Rat, RatVector};

/// The stable base locus as a set of invariant subvarieties `V(τ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableBaseLocus {
    /// Minimal cones `τ` with `V(τ) ⊆ B(D)`; every cone containing one of
    /// them is a member too.
    pub member_cones: Vec<Cone>,
    /// `max (n - dim τ)` over members; `None` for the empty locus.
    pub dimension: Option<usize>,
}

impl StableBaseLocus {
    fn from_members(n: usize, members: impl IntoIterator<Item = Cone>) -> StableBaseLocus {
        let all: BTreeSet<Cone> = members.into_iter().collect();
        let minimal: Vec<Cone> = all
            .iter()
            .filter(|c| !all.iter().any(|d| d != *c && d.is_face_of(c)))
            .cloned()
            .collect();
        let dimension = minimal.iter().map(|c| n - c.dim()).max();
        StableBaseLocus {
            member_cones: minimal,
            dimension,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.member_cones.is_empty()
    }

    /// Whether `V(τ)` lies in the locus.
    pub fn contains(&self, tau: &Cone) -> bool {
        self.member_cones.iter().any(|m| m.is_face_of(tau))
    }

    /// Whether the locus has dimension less than `k`.
    pub fn dimension_below(&self, k: usize) -> bool {
        self.dimension.is_none_or(|d| d < k)
    }
}

/// `B(D)` from the cones `Γ_τ`: `V(τ) ⊆ B(D)` iff `[D] ∉ Γ_τ`.
pub fn stable_base_locus(spaces: &ClassSpaces, d: &DivisorClass) -> Result<StableBaseLocus> {
    let x = spaces.divisor_coords(d)?;
    let mut members = Vec::new();
    for tau in spaces.fan().all_cones() {
        if !spaces.gamma_cone(&tau)?.contains(&x)? {
            members.push(tau);
        }
    }
    Ok(StableBaseLocus::from_members(spaces.fan().rank(), members))
}

fn check_divisor(fan: &Fan, d: &DivisorClass) -> Result<()> {
    if d.coefficients().len() != fan.num_rays() {
        return Err(Error::DimensionMismatch {
            expected: fan.num_rays(),
            got: d.coefficients().len(),
        });
    }
    Ok(())
}

/// Vertices of `P_D = {u : <u, v_i> ≥ -d_i}`: the feasible basic solutions.
fn polytope_vertices(fan: &Fan, d: &RatVector) -> Vec<RatVector> {
    let n = fan.rank();
    let r = fan.num_rays();
    let rays: Vec<RatVector> = (0..r).map(|i| fan.ray_vector(i)).collect();
    let mut out = BTreeSet::new();
    if n == 0 {
        if d.iter().all(|x| !x.is_negative()) {
            out.insert(RatVector::zeros(0));
        }
        return out.into_iter().collect();
    }
    // rows of the system are the v_i; solve through the transpose
    let mut subset: Vec<usize> = (0..n).collect();
    loop {
        let cols: Vec<RatVector> = (0..n)
            .map(|j| RatVector::new(subset.iter().map(|&i| rays[i][j].clone()).collect()))
            .collect();
        let rhs = RatVector::new(subset.iter().map(|&i| -d[i].clone()).collect());
        if let Some(u) = solve_unique(&cols, &rhs) {
            let feasible = (0..r).all(|i| u.dot(&rays[i]) >= -d[i].clone());
            if feasible && full_rank(&cols) {
                out.insert(u);
            }
        }
        if !next_subset(&mut subset, r) {
            break;
        }
    }
    out.into_iter().collect()
}

fn full_rank(cols: &[RatVector]) -> bool {
    crate::ratlinalg::rank(cols) == cols.len()
}

fn next_subset(s: &mut [usize], r: usize) -> bool {
    let k = s.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if s[i] < r - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `P_D` with its face lattice; empty when `D` has no sections even rationally.
pub fn divisor_polytope(fan: &Fan, d: &DivisorClass) -> Result<Polytope> {
    check_divisor(fan, d)?;
    let verts = polytope_vertices(fan, d.coefficients());
    if verts.is_empty() {
        return Ok(Polytope::empty(fan.rank()));
    }
    Ok(polytope_faces(&verts))
}

/// Integer data for enumerating `P_{mD} ∩ M` with `m P_D = P_{mD}`.
struct SectionEnumerator {
    n: usize,
    rays: Vec<Vec<i64>>,
    d: Vec<i64>,
    /// per coordinate, min and max over the vertices of `P_D`
    bounds: Vec<(Rat, Rat)>,
}

fn to_i64(x: &Int) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow)
}

impl SectionEnumerator {
    fn new(fan: &Fan, d: &DivisorClass) -> Result<Option<Self>> {
        check_divisor(fan, d)?;
        let ints = d.coefficients().to_ints().ok_or(Error::NonIntegral)?;
        let verts = polytope_vertices(fan, d.coefficients());
        if verts.is_empty() {
            return Ok(None);
        }
        let n = fan.rank();
        let bounds = (0..n)
            .map(|j| {
                let lo = verts.iter().map(|v| v[j].clone()).min().expect("nonempty");
                let hi = verts.iter().map(|v| v[j].clone()).max().expect("nonempty");
                (lo, hi)
            })
            .collect();
        let rays = fan
            .rays()
            .iter()
            .map(|r| r.iter().map(to_i64).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let d = ints.iter().map(to_i64).collect::<Result<Vec<_>>>()?;
        Ok(Some(SectionEnumerator { n, rays, d, bounds }))
    }

    /// Calls `visit` with each lattice point of `P_{mD}`; `visit` returns
    /// `false` to stop early.
    fn for_each(&self, m: i64, visit: &mut dyn FnMut(&[i64]) -> bool) -> Result<()> {
        let m_rat = Rat::from_integer(m.into());
        let mut box_ = Vec::with_capacity(self.n);
        for (lo, hi) in &self.bounds {
            let lo = (lo * &m_rat).ceil().to_integer();
            let hi = (hi * &m_rat).floor().to_integer();
            box_.push((to_i64(&lo)?, to_i64(&hi)?));
        }
        let rhs: Vec<i128> = self.d.iter().map(|&x| -(m as i128) * (x as i128)).collect();
        let mut u = vec![0i64; self.n];
        self.recurse(0, &box_, &rhs, &mut u, visit)?;
        Ok(())
    }

    fn recurse(
        &self,
        j: usize,
        box_: &[(i64, i64)],
        rhs: &[i128],
        u: &mut Vec<i64>,
        visit: &mut dyn FnMut(&[i64]) -> bool,
    ) -> Result<bool> {
        if self.n == 0 {
            return Ok(rhs.iter().all(|&b| b <= 0) && visit(u));
        }
        if j + 1 < self.n {
            for x in box_[j].0..=box_[j].1 {
                u[j] = x;
                if !self.recurse(j + 1, box_, rhs, u, visit)? {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        // last coordinate: solve each inequality for its range
        let (mut lo, mut hi) = (box_[j].0 as i128, box_[j].1 as i128);
        for (ray, &b) in self.rays.iter().zip(rhs) {
            let mut partial: i128 = 0;
            for t in 0..j {
                partial = partial
                    .checked_add((ray[t] as i128).checked_mul(u[t] as i128).ok_or(Error::Overflow)?)
                    .ok_or(Error::Overflow)?;
            }
            let need = b - partial;
            let c = ray[j] as i128;
            if c == 0 {
                if need > 0 {
                    return Ok(true);
                }
            } else if c > 0 {
                lo = lo.max(Integer::div_ceil(&need, &c));
            } else {
                hi = hi.min(Integer::div_floor(&need, &c));
            }
        }
        for x in lo..=hi {
            u[j] = i64::try_from(x).map_err(|_| Error::Overflow)?;
            if !visit(u) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Indices `i` with `<u, v_i> = -m d_i`.
    fn tight(&self, m: i64, u: &[i64]) -> Vec<usize> {
        self.rays
            .iter()
            .enumerate()
            .filter(|(i, ray)| {
                let s: i128 = ray.iter().zip(u).map(|(&a, &b)| a as i128 * b as i128).sum();
                s == -(m as i128) * self.d[*i] as i128
            })
            .map(|(i, _)| i)
            .collect()
    }
}

/// The lattice points of `P_D`, i.e. the characters spanning `H⁰(X, O(D))`.
pub fn section_points(fan: &Fan, d: &DivisorClass) -> Result<Vec<Vec<Int>>> {
    let Some(e) = SectionEnumerator::new(fan, d)? else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    e.for_each(1, &mut |u| {
        out.push(u.iter().map(|&x| Int::from(x)).collect());
        true
    })?;
    Ok(out)
}

/// `⋂_{1 ≤ m ≤ m_max} Bs|mD|` from the sections of `mD`: `V(τ) ⊆ Bs|mD|`
/// iff no section `u` has `<u, v_i> = -m d_i` for every `ρ_i ∈ τ`.
pub fn base_locus_finite(fan: &Fan, d: &DivisorClass, m_max: usize) -> Result<StableBaseLocus> {
    if m_max == 0 {
        return Err(Error::OutOfRange {
            what: "m_max",
            value: 0,
            lo: 1,
            hi: i64::MAX,
        });
    }
    let all = fan.all_cones();
    let Some(e) = SectionEnumerator::new(fan, d)? else {
        return Ok(StableBaseLocus::from_members(fan.rank(), all));
    };
    let mut members: BTreeSet<Cone> = all;
    for m in 1..=m_max as i64 {
        let mut tight_sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        e.for_each(m, &mut |u| {
            tight_sets.insert(e.tight(m, u));
            true
        })?;
        members.retain(|tau| !tight_sets.iter().any(|t| tau.indices().iter().all(|i| t.contains(i))));
        if members.is_empty() {
            break;
        }
    }
    Ok(StableBaseLocus::from_members(fan.rank(), members))
}
